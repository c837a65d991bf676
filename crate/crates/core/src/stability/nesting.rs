//! Nested-bisector certificates along periodic orbit paths.
//!
//! The word `g^m` is laid out from the basepoint, every `i`-th orbit point is kept,
//! and consecutive kept points `y_j, y_{j+1}` define the bisector plane `P_j`. The
//! certificate asks that each interior `P_j` separate its neighbours and that
//! neighbouring planes stay more than `c` apart.
//!
//! Each plane triple is evaluated in a frame centred at `y_j` (the orbit point is
//! pulled back by `ρ(prefix)⁻¹`), so long paths never leave the well-conditioned
//! region of upper half-space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{invert, CyclicClass, Letter};
use crate::hyperbolic::{bisector_plane, plane_distance, plane_separates, GeodesicPlane, H3Point, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestingParams {
    /// Subsample stride `i ≥ 1`.
    pub stride: usize,
    /// Spacing floor `c > 0`.
    pub spacing: f64,
    /// Number of periods `m ≥ 3`.
    pub reps: usize,
}

impl Default for NestingParams {
    fn default() -> Self {
        NestingParams {
            stride: 2,
            spacing: 0.01,
            reps: 6,
        }
    }
}

impl NestingParams {
    pub fn validate(&self) -> Result<()> {
        if self.stride < 1 {
            return Err(Error::config("stride", "must be at least 1"));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::config("spacing", "must be positive and finite"));
        }
        if self.reps < 3 {
            return Err(Error::config("reps", "must be at least 3"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NestingStatus {
    Pass,
    Fail,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingOutcome {
    pub status: NestingStatus,
    /// Smallest `d(P_j, P_{j+1})` seen (over the checked prefix on failure).
    pub min_spacing: f64,
    /// Number of bisector planes along the path.
    pub planes: usize,
    /// Plane index where the check stopped, on failure.
    pub witness_index: Option<usize>,
    pub detail: Option<String>,
}

impl NestingOutcome {
    pub fn passed(&self) -> bool {
        self.status == NestingStatus::Pass
    }
}

/// `ρ(path[from..to]) x` if `to ≥ from`, else `ρ(path[to..from])⁻¹ x`.
fn relative_point(rep: &Representation, path: &[Letter], from: usize, to: usize) -> H3Point {
    let x = rep.basepoint();
    if to >= from {
        rep.eval(&path[from..to]).apply_point(&x)
    } else {
        rep.eval(&invert(&path[to..from])).apply_point(&x)
    }
}

pub fn nesting_certificate(rep: &Representation, g: &CyclicClass, params: &NestingParams) -> Result<NestingOutcome> {
    params.validate()?;
    if g.letters().is_empty() {
        return Err(Error::input("nesting certificate of the identity"));
    }
    let path: Vec<Letter> = (0..params.reps).flat_map(|_| g.letters().iter().copied()).collect();
    let i = params.stride;
    let kept = path.len() / i; // kept points y_0 .. y_kept
    let planes = kept;
    let fail = |index: usize, min_spacing: f64, detail: String| NestingOutcome {
        status: NestingStatus::Fail,
        min_spacing,
        planes,
        witness_index: Some(index),
        detail: Some(detail),
    };
    if planes < 3 {
        return Ok(fail(
            0,
            0.0,
            format!("only {planes} planes; need at least 3 (raise reps or lower stride)"),
        ));
    }

    let mut min_spacing = f64::INFINITY;
    for j in 0..planes - 1 {
        let centre = j * i;
        let y = |k: usize| relative_point(rep, &path, centre, k * i);
        let plane = |k: usize| -> std::result::Result<GeodesicPlane, String> {
            bisector_plane(&y(k), &y(k + 1)).map_err(|_| format!("orbit points {k} and {} coincide", k + 1))
        };
        let pj = match plane(j) {
            Ok(p) => p,
            Err(e) => return Ok(fail(j, min_spacing.min(0.0), e)),
        };
        let pn = match plane(j + 1) {
            Ok(p) => p,
            Err(e) => return Ok(fail(j + 1, min_spacing.min(0.0), e)),
        };
        let d = plane_distance(&pj, &pn);
        min_spacing = min_spacing.min(d);
        if !(d > params.spacing) {
            return Ok(fail(
                j,
                min_spacing,
                format!("d(P_{j}, P_{}) = {d:.6} does not exceed {}", j + 1, params.spacing),
            ));
        }
        if j >= 1 {
            let pp = match plane(j - 1) {
                Ok(p) => p,
                Err(e) => return Ok(fail(j - 1, min_spacing, e)),
            };
            match plane_separates(&pj, &pp, &pn) {
                Ok(true) => {}
                Ok(false) => {
                    return Ok(fail(j, min_spacing, format!("P_{j} does not separate its neighbours")));
                }
                Err(Error::Undetermined(msg)) => {
                    return Ok(NestingOutcome {
                        status: NestingStatus::Undetermined,
                        min_spacing,
                        planes,
                        witness_index: Some(j),
                        detail: Some(msg),
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(NestingOutcome {
        status: NestingStatus::Pass,
        min_spacing,
        planes,
        witness_index: None,
        detail: None,
    })
}
