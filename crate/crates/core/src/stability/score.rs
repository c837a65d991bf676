use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{enumerate_separable_classes, invert, CyclicClass, Letter, Presentation};
use crate::hyperbolic::{translation_length, Representation};

/// Ratio bounds `r ≤ l_ρ(g)/‖g‖ ≤ R` over a finite set of classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRecord {
    pub depth: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    #[serde(skip)]
    pub argmin: CyclicClass,
    /// The minimizing class as text.
    pub argmin_word: String,
    pub classes_tested: usize,
}

/// Translation length of `ρ(w)` for a cyclic word.
///
/// Evaluated on every rotation of `w` and of `w⁻¹`, keeping the smallest value. The
/// result is a symmetric function of that set of literal words, so relabeling the
/// generators (which permutes the set) leaves it bitwise unchanged.
pub fn class_translation_length(rep: &Representation, w: &[Letter]) -> f64 {
    let inv = invert(w);
    let n = w.len();
    let mut best = f64::INFINITY;
    let mut rotated = Vec::with_capacity(n);
    for base in [w, inv.as_slice()] {
        for s in 0..n {
            rotated.clear();
            rotated.extend_from_slice(&base[s..]);
            rotated.extend_from_slice(&base[..s]);
            let l = translation_length(rep.eval(&rotated).trace());
            if l < best {
                best = l;
            }
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

/// Score over an explicit class list (`depth` is recorded, not used).
pub fn score_classes(rep: &Representation, classes: &[CyclicClass], depth: usize) -> Result<ScoreRecord> {
    if classes.is_empty() {
        return Err(Error::input("no separable classes to score; increase the depth"));
    }
    let ratios: Vec<f64> = classes
        .par_iter()
        .map(|c| class_translation_length(rep, c.letters()) / c.cayley_length as f64)
        .collect();
    // sequential fold: first minimum in class order wins, independent of workers
    let mut imin = 0;
    let mut max_ratio = f64::NEG_INFINITY;
    for (i, &r) in ratios.iter().enumerate() {
        if r < ratios[imin] {
            imin = i;
        }
        if r > max_ratio {
            max_ratio = r;
        }
    }
    let p = rep.presentation();
    Ok(ScoreRecord {
        depth,
        min_ratio: ratios[imin],
        max_ratio,
        argmin: classes[imin].clone(),
        argmin_word: classes[imin].display(p),
        classes_tested: classes.len(),
    })
}

/// Score over the separable classes of length at most `depth`.
pub fn score(rep: &Representation, p: &Presentation, depth: usize, enlargement: usize) -> Result<ScoreRecord> {
    let classes = enumerate_separable_classes(p, depth, enlargement)?;
    score_classes(rep, &classes, depth)
}
