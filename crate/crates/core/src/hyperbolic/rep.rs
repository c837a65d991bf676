use num_complex::Complex64;
use serde_json::{json, Map, Value};

use super::moebius::MoebiusMap;
use super::space::H3Point;
use crate::error::{Error, Result};
use crate::group::surface::relator;
use crate::group::{FactorKind, Letter, Presentation};

/// Largest allowed `‖ρ(r) ∓ I‖` for a surface relator `r` before a warning is raised.
pub const RELATOR_TOL: f64 = 1e-8;

/// Renormalization period for long products.
const RENORMALIZE_EVERY: usize = 32;

/// A homomorphism from a presentation to PSL(2,C), with an orbit basepoint.
#[derive(Debug, Clone)]
pub struct Representation {
    presentation: Presentation,
    generators: Vec<MoebiusMap>,
    inverses: Vec<MoebiusMap>,
    basepoint: H3Point,
    warnings: Vec<String>,
}

impl Representation {
    /// Generator images in generator order. Relator defects become warnings.
    pub fn new(presentation: Presentation, generators: Vec<MoebiusMap>, basepoint: H3Point) -> Result<Self> {
        if generators.len() != presentation.generator_count() {
            return Err(Error::input(format!(
                "expected {} generator images, got {}",
                presentation.generator_count(),
                generators.len()
            )));
        }
        let generators: Vec<MoebiusMap> = generators
            .into_iter()
            .map(|m| {
                // keep already-normalized images bit for bit
                if (m.det() - 1.0).norm() <= 4.0 * f64::EPSILON {
                    Ok(m)
                } else {
                    MoebiusMap::new(m.a, m.b, m.c, m.d)
                }
            })
            .collect::<Result<_>>()?;
        let inverses = generators.iter().map(MoebiusMap::inverse).collect();
        let mut rep = Representation {
            presentation,
            generators,
            inverses,
            basepoint,
            warnings: Vec::new(),
        };
        rep.check_relators();
        Ok(rep)
    }

    fn check_relators(&mut self) {
        for (fi, f) in self.presentation.factors().iter().enumerate() {
            if let FactorKind::Surface { genus } = f.kind {
                let word: Vec<Letter> = relator(genus).into_iter().map(|l| f.global(l)).collect();
                let defect = self.eval(&word).identity_defect();
                if !(defect <= RELATOR_TOL) {
                    self.warnings
                        .push(format!("relator of surface factor {fi} maps {defect:.3e} away from the identity"));
                }
            }
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generators(&self) -> &[MoebiusMap] {
        &self.generators
    }

    pub fn basepoint(&self) -> H3Point {
        self.basepoint
    }

    pub fn with_basepoint(mut self, basepoint: H3Point) -> Self {
        self.basepoint = basepoint;
        self
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn image(&self, l: Letter) -> MoebiusMap {
        if l.inv {
            self.inverses[l.gen as usize]
        } else {
            self.generators[l.gen as usize]
        }
    }

    /// `ρ(w)`, renormalized periodically to bound determinant drift.
    pub fn eval(&self, w: &[Letter]) -> MoebiusMap {
        let mut m = MoebiusMap::IDENTITY;
        for (i, &l) in w.iter().enumerate() {
            m = m * self.image(l);
            if (i + 1) % RENORMALIZE_EVERY == 0 {
                m = m.renormalized();
            }
        }
        m.renormalized()
    }

    /// Conjugate every generator image: `ρ'(x) = g ρ(x) g⁻¹` (basepoint unchanged).
    pub fn conjugated(&self, g: &MoebiusMap) -> Result<Self> {
        let gi = g.inverse();
        let gens = self.generators.iter().map(|&m| *g * m * gi).collect();
        Representation::new(self.presentation.clone(), gens, self.basepoint)
    }

    /// Precompose with an endomorphism given by generator images as words.
    pub fn precompose(&self, images: &[Vec<Letter>]) -> Result<Self> {
        let gens = images
            .iter()
            .map(|w| match w.as_slice() {
                [l] => self.image(*l),
                _ => self.eval(w),
            })
            .collect();
        Representation::new(self.presentation.clone(), gens, self.basepoint)
    }

    /// Parses `{"generators": {"a": [[re,im],[re,im],[re,im],[re,im]], …}, "basepoint": [x,y,h]}`.
    pub fn from_json(presentation: &Presentation, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::input(format!("representation JSON: {e}")))?;
        let gens = v
            .get("generators")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::input("representation JSON needs a `generators` object"))?;
        let mut images = Vec::new();
        for name in presentation.generator_names() {
            let entry = gens
                .get(name)
                .ok_or_else(|| Error::input(format!("no image for generator `{name}`")))?;
            images.push(parse_matrix(name, entry)?);
        }
        if let Some(extra) = gens.keys().find(|k| presentation.generator_index(k).is_none()) {
            return Err(Error::input(format!("unknown generator `{extra}` in representation")));
        }
        let basepoint = match v.get("basepoint") {
            None | Some(Value::Null) => H3Point::origin(),
            Some(b) => {
                let xs: Vec<f64> = b
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .and_then(|a| a.iter().map(Value::as_f64).collect())
                    .ok_or_else(|| Error::input("basepoint must be [x, y, h]"))?;
                H3Point::new(xs[0], xs[1], xs[2])?
            }
        };
        Representation::new(presentation.clone(), images, basepoint)
    }

    pub fn to_json(&self) -> String {
        let mut gens = Map::new();
        for (name, m) in self.presentation.generator_names().iter().zip(&self.generators) {
            let entries: Vec<Value> = [m.a, m.b, m.c, m.d].iter().map(|z| json!([z.re, z.im])).collect();
            gens.insert(name.clone(), Value::Array(entries));
        }
        let b = self.basepoint;
        serde_json::to_string_pretty(&json!({"generators": gens, "basepoint": [b.x, b.y, b.h]}))
            .expect("serializable")
    }
}

fn parse_matrix(name: &str, v: &Value) -> Result<MoebiusMap> {
    let bad = || Error::input(format!("image of `{name}` must be four [re, im] pairs"));
    let arr = v.as_array().filter(|a| a.len() == 4).ok_or_else(bad)?;
    let mut z = [Complex64::new(0.0, 0.0); 4];
    for (slot, e) in z.iter_mut().zip(arr) {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
        let re = pair[0].as_f64().ok_or_else(bad)?;
        let im = pair[1].as_f64().ok_or_else(bad)?;
        *slot = Complex64::new(re, im);
    }
    MoebiusMap::new(z[0], z[1], z[2], z[3])
}

/// The standard point of the rank-two character variety with
/// `tr A = x`, `tr B = y`, `tr AB = z`:
/// `A = [[x, −1], [1, 0]]`, `B = [[0, k], [−1/k, y]]` with `k + 1/k = z`, `|k| ≥ 1`.
///
/// Trace mismatches and Fricke-identity failures are recorded as warnings, as is
/// reducibility (`tr[A,B] = 2`).
pub fn rep_from_traces(x: Complex64, y: Complex64, z: Complex64) -> Result<Representation> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let root = (z * z - 4.0).sqrt();
    let (k1, k2) = ((z + root) / 2.0, (z - root) / 2.0);
    let k = if k1.norm() >= k2.norm() { k1 } else { k2 };
    let a = MoebiusMap::from_entries_unchecked(x, -one, one, zero);
    let b = MoebiusMap::from_entries_unchecked(zero, k, -k.inv(), y);
    let f2 = Presentation::free(2)?;
    let mut rep = Representation::new(f2, vec![a, b], H3Point::origin())?;

    let ab = rep.eval(&[Letter::pos(0), Letter::pos(1)]);
    let comm = rep.eval(&[Letter::pos(0), Letter::pos(1), Letter::neg(0), Letter::neg(1)]);
    let scale = 1.0 + x.norm().max(y.norm()).max(z.norm());
    for (label, got, want) in [("tr A", a.trace(), x), ("tr B", rep.generators[1].trace(), y), ("tr AB", ab.trace(), z)] {
        if (got - want).norm() > 1e-10 * scale {
            rep.warnings.push(format!("{label} = {got} differs from requested {want}"));
        }
    }
    let fricke = x * x + y * y + z * z - x * y * z - 2.0;
    if (comm.trace() - fricke).norm() > 1e-9 * scale.powi(3) {
        rep.warnings
            .push(format!("tr[A,B] = {} violates the Fricke identity value {fricke}", comm.trace()));
    }
    if (fricke - 2.0).norm() <= 1e-12 * scale.powi(3) {
        rep.warnings.push("reducible point: tr[A,B] = 2".into());
    }
    Ok(rep)
}
