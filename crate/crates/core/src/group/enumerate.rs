use std::collections::{BTreeSet, HashSet};

use super::cyclic::{cyclic_class, CyclicClass};
use super::free::is_canonical_cyclic;
use super::normal_form::{reduce, NormalForm};
use super::{GroupWord, Letter, Presentation, Shape};
use crate::error::{Error, Result};
use crate::whitehead::{self, WhiteheadMove};

/// Largest radius accepted by [`enumerate_ball`].
pub const MAX_BALL_RADIUS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallElement {
    pub normal_form: NormalForm,
    pub distance: usize,
}

/// Every element within Cayley distance `radius`, by breadth-first search.
pub fn enumerate_ball(p: &Presentation, radius: usize) -> Result<Vec<BallElement>> {
    if radius > MAX_BALL_RADIUS {
        return Err(Error::undetermined(format!(
            "ball radius {radius} exceeds cap {MAX_BALL_RADIUS}"
        )));
    }
    let mut seen: HashSet<NormalForm> = HashSet::new();
    let mut out = vec![BallElement {
        normal_form: NormalForm::default(),
        distance: 0,
    }];
    seen.insert(NormalForm::default());
    let mut frontier = vec![NormalForm::default()];
    let letters: Vec<Letter> = p.letters().collect();
    for r in 1..=radius {
        let mut next = Vec::new();
        for nf in &frontier {
            let base = nf.to_word();
            for &l in &letters {
                let mut w = base.clone();
                w.0.push(l);
                let child = reduce(p, &w)?;
                if seen.insert(child.clone()) {
                    next.push(child.clone());
                    out.push(BallElement {
                        normal_form: child,
                        distance: r,
                    });
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// All cyclic classes of a free group of rank `n` with length in `1..=max_len`,
/// as canonical words.
pub(crate) fn free_cyclic_classes(n: usize, max_len: usize) -> Vec<Vec<Letter>> {
    fn extend(n: usize, len: usize, w: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if w.len() == len {
            if w[0] != w[len - 1].inverse() && is_canonical_cyclic(w) {
                out.push(w.clone());
            }
            return;
        }
        for code in 0..2 * n {
            let l = Letter::from_code(code);
            if let Some(&last) = w.last() {
                if l == last.inverse() {
                    continue;
                }
            }
            // the canonical word starts with its least letter
            if let Some(&first) = w.first() {
                if l < first {
                    continue;
                }
            }
            w.push(l);
            extend(n, len, w, out);
            w.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        extend(n, len, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

/// Every cyclic class with `‖g‖ ≤ max_len`, in (length, canonical) order.
pub(crate) fn all_cyclic_classes(p: &Presentation, max_len: usize) -> Result<Vec<CyclicClass>> {
    if p.is_free() {
        return Ok(free_cyclic_classes(p.free_rank(), max_len)
            .into_iter()
            .map(|w| CyclicClass {
                cayley_length: w.len(),
                canonical: GroupWord(w),
            })
            .collect());
    }
    let mut set = BTreeSet::new();
    for e in enumerate_ball(p, max_len)? {
        if e.distance == 0 {
            continue;
        }
        let c = cyclic_class(p, &e.normal_form.to_word())?;
        if c.cayley_length <= max_len {
            set.insert(c);
        }
    }
    Ok(set.into_iter().collect())
}

/// A sound list of separable classes with `‖g‖ ≤ max_length`, sorted by
/// (length, canonical word).
///
/// Classes omitting a Grushko factor are always included. For handlebodies every
/// class certified by the Whitehead search is added, which makes the list complete.
/// With `enlargement_depth > 0` the factor-omitting classes are pushed through
/// compositions of up to that many Whitehead or factor moves.
pub fn enumerate_separable_classes(
    p: &Presentation,
    max_length: usize,
    enlargement_depth: usize,
) -> Result<Vec<CyclicClass>> {
    if p.shape() == Shape::DoubleIBundle {
        return Err(Error::UnsupportedShape(
            "separability for a connect sum of two trivial I-bundles is not supported".into(),
        ));
    }
    if max_length == 0 {
        return Err(Error::input("max_length must be at least 1"));
    }
    let all = all_cyclic_classes(p, max_length)?;
    let mut out: BTreeSet<CyclicClass> = BTreeSet::new();
    let base: Vec<CyclicClass> = all.iter().filter(|c| c.omits_a_factor(p)).cloned().collect();
    out.extend(base.iter().cloned());

    if p.shape() == Shape::Handlebody {
        for c in &all {
            if out.contains(c) {
                continue;
            }
            // an undetermined search is left out: the list stays sound
            if let Ok(cert) = whitehead::is_separable_free(p, c) {
                if cert.separable {
                    out.insert(c.clone());
                }
            }
        }
    }

    if enlargement_depth > 0 {
        let moves = if p.is_free() {
            WhiteheadMove::type_two(p.free_rank())
        } else {
            WhiteheadMove::factor_moves(p)
        };
        let mut seen: HashSet<CyclicClass> = base.iter().cloned().collect();
        let mut frontier = base;
        for _ in 0..enlargement_depth {
            let mut next = Vec::new();
            for c in &frontier {
                for mv in &moves {
                    let img = GroupWord(mv.apply(p, c.letters()));
                    let Ok(ic) = cyclic_class(p, &img) else { continue };
                    if seen.insert(ic.clone()) {
                        if ic.cayley_length <= max_length {
                            out.insert(ic.clone());
                        }
                        next.push(ic);
                    }
                }
            }
            frontier = next;
        }
    }
    Ok(out.into_iter().collect())
}
