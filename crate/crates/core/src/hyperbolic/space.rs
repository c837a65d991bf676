//! Points and geodesic planes of upper half-space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::moebius::{BoundaryPoint, MoebiusMap};
use crate::error::{Error, Result};

/// Tolerance on `|inversive distance| − 1` below which planes count as tangent.
pub const TANGENCY_TOL: f64 = 1e-9;

/// A point `(x, y, h)` of upper half-space, `h > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Point {
    pub x: f64,
    pub y: f64,
    pub h: f64,
}

impl H3Point {
    pub fn new(x: f64, y: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !x.is_finite() || !y.is_finite() || !h.is_finite() {
            return Err(Error::input(format!("({x}, {y}, {h}) is not a point of upper half-space")));
        }
        Ok(H3Point { x, y, h })
    }

    /// The point `(0, 0, 1)`.
    pub const fn origin() -> Self {
        H3Point { x: 0.0, y: 0.0, h: 1.0 }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    fn from_zh(z: Complex64, h: f64) -> Self {
        H3Point { x: z.re, y: z.im, h }
    }
}

/// Hyperbolic distance, `arccosh(1 + |p − q|²/(2 h_p h_q))` in the stable form
/// `2·asinh(|p − q| / (2 sqrt(h_p h_q)))`.
pub fn distance(p: &H3Point, q: &H3Point) -> f64 {
    let (dx, dy, dh) = (p.x - q.x, p.y - q.y, p.h - q.h);
    let e = (dx * dx + dy * dy + dh * dh).sqrt();
    2.0 * (e / (2.0 * (p.h * q.h).sqrt())).asinh()
}

impl MoebiusMap {
    /// Action on upper half-space (Poincaré extension).
    pub fn apply_point(&self, p: &H3Point) -> H3Point {
        let z = p.z();
        let h2 = p.h * p.h;
        let czd = self.c * z + self.d;
        let denom = czd.norm_sqr() + self.c.norm_sqr() * h2;
        let num = (self.a * z + self.b) * czd.conj() + self.a * self.c.conj() * h2;
        H3Point::from_zh(num / denom, p.h / denom)
    }

    /// Image of a geodesic plane, through three points of its boundary circle.
    pub fn apply_plane(&self, plane: &GeodesicPlane) -> GeodesicPlane {
        let pts = plane.boundary_samples().map(|z| self.apply_boundary(z));
        GeodesicPlane::through(pts)
    }
}

/// A totally geodesic plane, given by its boundary circle or line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeodesicPlane {
    Hemisphere { center: Complex64, radius: f64 },
    /// Vertical half-plane over the line `point + s·direction`.
    Vertical { point: Complex64, direction: Complex64 },
}

impl GeodesicPlane {
    pub fn hemisphere(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::input("hemisphere radius must be positive and finite"));
        }
        Ok(GeodesicPlane::Hemisphere { center, radius })
    }

    pub fn vertical(point: Complex64, direction: Complex64) -> Result<Self> {
        if direction.norm() == 0.0 || !direction.is_finite() || !point.is_finite() {
            return Err(Error::input("vertical plane needs a nonzero direction"));
        }
        Ok(GeodesicPlane::Vertical {
            point,
            direction: direction / direction.norm(),
        })
    }

    fn boundary_samples(&self) -> [BoundaryPoint; 3] {
        match *self {
            GeodesicPlane::Hemisphere { center, radius } => [0.0, 2.0, 4.0].map(|t: f64| {
                BoundaryPoint::Finite(center + Complex64::from_polar(radius, t))
            }),
            GeodesicPlane::Vertical { point, direction } => [
                BoundaryPoint::Finite(point),
                BoundaryPoint::Finite(point + direction),
                BoundaryPoint::Infinity,
            ],
        }
    }

    /// The plane whose boundary passes through three distinct points.
    fn through(pts: [BoundaryPoint; 3]) -> GeodesicPlane {
        let finite: Vec<Complex64> = pts
            .iter()
            .filter_map(|p| match p {
                BoundaryPoint::Finite(z) => Some(*z),
                BoundaryPoint::Infinity => None,
            })
            .collect();
        if finite.len() == 2 {
            return GeodesicPlane::Vertical {
                point: finite[0],
                direction: (finite[1] - finite[0]) / (finite[1] - finite[0]).norm(),
            };
        }
        let (p, q, r) = (finite[0], finite[1], finite[2]);
        // circumcenter of three points in the plane
        let (b, cc) = (q - p, r - p);
        let d = 2.0 * (b.re * cc.im - b.im * cc.re);
        let scale = b.norm().max(cc.norm());
        if d.abs() <= 1e-14 * scale * scale {
            let dir = if b.norm() > 0.0 { b } else { cc };
            return GeodesicPlane::Vertical {
                point: p,
                direction: dir / dir.norm(),
            };
        }
        let ux = (cc.im * b.norm_sqr() - b.im * cc.norm_sqr()) / d;
        let uy = (b.re * cc.norm_sqr() - cc.re * b.norm_sqr()) / d;
        let u = Complex64::new(ux, uy);
        GeodesicPlane::Hemisphere {
            center: p + u,
            radius: u.norm(),
        }
    }

    /// Signed side of a horizontal point: negative inside the hemisphere / left of
    /// the line, positive outside / right; zero on the plane.
    fn side_value(&self, z: Complex64, h: f64) -> f64 {
        match *self {
            GeodesicPlane::Hemisphere { center, radius } => {
                ((z - center).norm_sqr() + h * h - radius * radius) / radius
            }
            GeodesicPlane::Vertical { point, direction } => -(direction.conj() * (z - point)).im,
        }
    }

    /// Which closed half-space a point lies in (`true` = inside / left).
    pub fn contains_on_inner_side(&self, p: &H3Point) -> bool {
        self.side_value(p.z(), p.h) <= 0.0
    }

    /// Hyperbolic reflection in the plane.
    pub fn reflect(&self, p: &H3Point) -> H3Point {
        match *self {
            GeodesicPlane::Hemisphere { center, radius } => {
                let dz = p.z() - center;
                let n2 = dz.norm_sqr() + p.h * p.h;
                let s = radius * radius / n2;
                H3Point::from_zh(center + dz * s, p.h * s)
            }
            GeodesicPlane::Vertical { point, direction } => {
                let rel = (p.z() - point) * direction.conj();
                H3Point::from_zh(point + rel.conj() * direction, p.h)
            }
        }
    }
}

/// The perpendicular bisector of `p` and `q`: points equidistant from both.
pub fn bisector_plane(p: &H3Point, q: &H3Point) -> Result<GeodesicPlane> {
    let (zp, zq) = (p.z(), q.z());
    let scale = p.h.max(q.h);
    if (p.h - q.h).abs() <= 1e-14 * scale {
        if (zp - zq).norm() <= 1e-14 * scale {
            return Err(Error::input("bisector of coincident points"));
        }
        let mid = (zp + zq) / 2.0;
        let dir = (zq - zp) * Complex64::i();
        return GeodesicPlane::vertical(mid, dir);
    }
    // h_q |X − P|² = h_p |X − Q|² is a sphere centred on the boundary
    let k = q.h - p.h;
    let center = (zp * q.h - zq * p.h) / k;
    // r² = |c|² − (h_q|P|² − h_p|Q|²)/(h_q − h_p), which simplifies to the
    // cancellation-free h_p h_q |P − Q|² / (h_q − h_p)²
    let e2 = (zp - zq).norm_sqr() + (p.h - q.h).powi(2);
    let r = (p.h * q.h * e2).sqrt() / k.abs();
    GeodesicPlane::hemisphere(center, r)
}

/// Inversive distance of the two boundary circles (lines are limits of circles).
/// `|I| > 1` iff the planes are disjoint; then their distance is `arccosh |I|`.
pub fn inversive_distance(p: &GeodesicPlane, q: &GeodesicPlane) -> f64 {
    use GeodesicPlane::*;
    match (*p, *q) {
        (Hemisphere { center: c1, radius: r1 }, Hemisphere { center: c2, radius: r2 }) => {
            let d = (c1 - c2).norm();
            // (d² − r1² − r2²)/(2 r1 r2), factored for accuracy
            ((d - r1 - r2) * (d + r1 + r2) + 2.0 * r1 * r2) / (2.0 * r1 * r2)
        }
        (Hemisphere { center, radius }, Vertical { point, direction })
        | (Vertical { point, direction }, Hemisphere { center, radius }) => {
            let delta = (direction.conj() * (center - point)).im;
            delta / radius
        }
        (Vertical { direction: d1, .. }, Vertical { direction: d2, .. }) => {
            // angle between the lines; parallel lines are tangent at infinity
            (d1.conj() * d2).re
        }
    }
}

/// Hyperbolic distance between two planes (0 if they meet).
pub fn plane_distance(p: &GeodesicPlane, q: &GeodesicPlane) -> f64 {
    let i = inversive_distance(p, q).abs();
    if i > 1.0 {
        i.acosh()
    } else {
        0.0
    }
}

fn side_of(p: &GeodesicPlane, a: &GeodesicPlane) -> Result<bool> {
    let i = inversive_distance(p, a);
    if i.abs() <= 1.0 + TANGENCY_TOL {
        return Err(Error::undetermined(format!(
            "planes meet or are tangent (inversive distance {i:.3e})"
        )));
    }
    Ok(match (*p, *a) {
        // disjoint circles are nested (I < −1) or apart (I > 1); a is inside p iff
        // nested with the smaller radius
        (GeodesicPlane::Hemisphere { radius: rp, .. }, GeodesicPlane::Hemisphere { radius: ra, .. }) => {
            i < 0.0 && ra < rp
        }
        (GeodesicPlane::Hemisphere { .. }, GeodesicPlane::Vertical { .. }) => false,
        (GeodesicPlane::Vertical { .. }, GeodesicPlane::Hemisphere { center, .. }) => p.side_value(center, 0.0) < 0.0,
        (GeodesicPlane::Vertical { .. }, GeodesicPlane::Vertical { .. }) => unreachable!("vertical planes always meet"),
    })
}

/// Whether `a` and `b` lie in different half-spaces bounded by `p`.
pub fn plane_separates(p: &GeodesicPlane, a: &GeodesicPlane, b: &GeodesicPlane) -> Result<bool> {
    Ok(side_of(p, a)? != side_of(p, b)?)
}
