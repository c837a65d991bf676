use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|τ² − 4|` for the parabolic test.
pub const DEFAULT_PARABOLIC_TOL: f64 = 1e-10;

/// Determinant defect, relative to the squared entry size, above which [`classify`]
/// refuses a matrix.
pub const DET_TOL: f64 = 1e-8;

/// An element of PSL(2,C), stored as a unit-determinant matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// Normalizes to determinant one. Fails on a singular matrix.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d };
        let det = m.det();
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !det.is_finite() || det.norm() <= 1e-14 * scale * scale {
            return Err(Error::Numerical("singular matrix".into()));
        }
        Ok(m.scaled(det.sqrt().inv()))
    }

    /// Builds the map without normalizing (for checking external data).
    pub const fn from_entries_unchecked(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        MoebiusMap { a, b, c, d }
    }

    pub fn diagonal(lambda: Complex64) -> Self {
        MoebiusMap {
            a: lambda,
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
            d: lambda.inv(),
        }
    }

    fn scaled(self, s: Complex64) -> Self {
        MoebiusMap {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Rescale to determinant exactly one (up to rounding); used to bound drift.
    pub fn renormalized(self) -> Self {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return self;
        }
        self.scaled(det.sqrt().inv())
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    /// Largest entry distance to `+I` or `−I`, whichever is closer.
    pub fn identity_defect(&self) -> f64 {
        let one = c(1.0, 0.0);
        let d_plus = (self.a - one).norm().max(self.b.norm()).max(self.c.norm()).max((self.d - one).norm());
        let d_minus = (self.a + one).norm().max(self.b.norm()).max(self.c.norm()).max((self.d + one).norm());
        d_plus.min(d_minus)
    }

    /// Action on the boundary sphere.
    pub fn apply_boundary(&self, z: BoundaryPoint) -> BoundaryPoint {
        match z {
            BoundaryPoint::Infinity => {
                if self.c.norm() == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, o: MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryInfo {
    pub class: IsometryClass,
    pub trace: Complex64,
    pub real_translation_length: f64,
    pub fixed_points: Vec<BoundaryPoint>,
    /// Rotation angle of an elliptic, in `[0, 2π]`.
    pub rotation_angle: Option<f64>,
}

/// Real translation length `2·|Re arccosh(τ/2)|` (0 for non-loxodromic traces).
pub fn translation_length(trace: Complex64) -> f64 {
    2.0 * (trace / 2.0).acosh().re.abs()
}

fn fixed_points(m: &MoebiusMap) -> Vec<BoundaryPoint> {
    let tr = m.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let scale = m.a.norm().max(m.d.norm()).max(1.0);
    if m.c.norm() > 1e-14 * scale {
        let z1 = (m.a - m.d + disc) / (m.c * 2.0);
        let z2 = (m.a - m.d - disc) / (m.c * 2.0);
        if disc.norm() <= 1e-14 * scale {
            vec![BoundaryPoint::Finite(z1)]
        } else {
            vec![BoundaryPoint::Finite(z1), BoundaryPoint::Finite(z2)]
        }
    } else {
        let diff = m.d - m.a;
        if diff.norm() <= 1e-14 * scale {
            vec![BoundaryPoint::Infinity]
        } else {
            vec![BoundaryPoint::Finite(m.b / diff), BoundaryPoint::Infinity]
        }
    }
}

/// Classify an isometry by its trace.
///
/// `tol` bounds `|τ² − 4|` for the parabolic test and the imaginary part of `τ² − 4`
/// for the elliptic test; a parabolic-looking map within `sqrt(tol)` of `±I` is the
/// identity.
pub fn classify(m: &MoebiusMap, tol: f64) -> Result<IsometryInfo> {
    if !m.is_finite() {
        return Err(Error::Numerical("non-finite matrix entries".into()));
    }
    // relative to the entry scale: products of long words carry rounding of order
    // ε·‖M‖² in the determinant
    let scale = m.a.norm().max(m.b.norm()).max(m.c.norm()).max(m.d.norm()).max(1.0);
    let defect = (m.det() - 1.0).norm() / (scale * scale);
    if defect > DET_TOL {
        return Err(Error::Numerical(format!("determinant defect {defect:.3e} exceeds {DET_TOL:e}")));
    }
    let trace = m.trace();
    let delta = trace * trace - 4.0;
    if delta.norm() <= tol {
        let class = if m.identity_defect() <= tol.sqrt() {
            IsometryClass::Identity
        } else {
            IsometryClass::Parabolic
        };
        let fixed_points = if class == IsometryClass::Identity {
            Vec::new()
        } else {
            fixed_points(m)
        };
        return Ok(IsometryInfo {
            class,
            trace,
            real_translation_length: 0.0,
            fixed_points,
            rotation_angle: None,
        });
    }
    if delta.im.abs() <= tol && delta.re < -tol {
        let half = (trace.re.abs() / 2.0).clamp(0.0, 1.0);
        return Ok(IsometryInfo {
            class: IsometryClass::Elliptic,
            trace,
            real_translation_length: 0.0,
            fixed_points: fixed_points(m),
            rotation_angle: Some(2.0 * half.acos()),
        });
    }
    let length = translation_length(trace);
    Ok(IsometryInfo {
        class: IsometryClass::Loxodromic,
        trace,
        real_translation_length: length,
        fixed_points: fixed_points(m),
        rotation_angle: None,
    })
}

/// Elliptic of rotation angle `theta` about the axis `(0, ∞)`.
pub fn rotation(theta: f64) -> MoebiusMap {
    MoebiusMap::diagonal(Complex64::from_polar(1.0, theta / 2.0))
}
