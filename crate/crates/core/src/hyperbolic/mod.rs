//! PSL(2,C) acting on upper half-space.

mod moebius;
mod rep;
mod space;

pub use moebius::{
    classify, rotation, translation_length, BoundaryPoint, IsometryClass, IsometryInfo, MoebiusMap, DEFAULT_PARABOLIC_TOL,
    DET_TOL,
};
pub use rep::{rep_from_traces, Representation, RELATOR_TOL};
pub use space::{
    bisector_plane, distance, inversive_distance, plane_distance, plane_separates, GeodesicPlane, H3Point, TANGENCY_TOL,
};

use crate::error::{Error, Result};
use crate::group::Letter;

/// Orbit points `ρ(w₁⋯w_k)(x)` for every prefix of `w`, starting with `x` itself.
pub fn orbit_path(rep: &Representation, w: &[Letter]) -> Result<Vec<H3Point>> {
    let x = rep.basepoint();
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(x);
    let mut m = MoebiusMap::IDENTITY;
    for (i, &l) in w.iter().enumerate() {
        m = m * rep.image(l);
        if (i + 1) % 32 == 0 {
            m = m.renormalized();
        }
        let p = m.apply_point(&x);
        if !(p.h > 0.0) || !p.h.is_finite() || !p.x.is_finite() || !p.y.is_finite() {
            return Err(Error::Numerical(format!("orbit point {} left the representable range", i + 1)));
        }
        out.push(p);
    }
    Ok(out)
}
