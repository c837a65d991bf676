//! Empirical census of outer automorphisms that stretch a test set by a bounded factor.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::free::{cyclically_reduced, free_reduce, least_rotation};
use crate::group::{cyclic_class, CyclicClass, GroupWord, Letter, Presentation, Shape};
use crate::whitehead::WhiteheadMove;

/// Default cap on distinct outer classes explored before the count is flagged partial.
pub const DEFAULT_CENSUS_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusResult {
    pub bound: f64,
    pub move_budget: usize,
    /// Qualifying outer classes reachable with at most `move_budget` moves.
    pub count: usize,
    /// The same with `move_budget + 2` moves.
    pub count_extended: usize,
    pub stable: bool,
    /// Distinct outer classes explored at the extended budget.
    pub explored: usize,
    /// The exploration cap was hit, so counts are lower bounds.
    pub partial: bool,
}

/// Generators and the products `x_i^{±1} x_j^{±1}` of distinct generators, as classes.
pub fn default_test_set(p: &Presentation) -> Result<Vec<CyclicClass>> {
    let n = p.generator_count() as u16;
    let mut out = Vec::new();
    for i in 0..n {
        out.push(cyclic_class(p, &GroupWord(vec![Letter::pos(i)]))?);
    }
    for i in 0..n {
        for j in i + 1..n {
            for inv in [false, true] {
                out.push(cyclic_class(p, &GroupWord(vec![Letter::pos(i), Letter::new(j, inv)]))?);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Probe words whose conjugacy classes identify an outer automorphism.
fn probes(n: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..2 * n).map(Letter::from_code).collect();
    let mut out: Vec<Vec<Letter>> = letters.iter().map(|&l| vec![l]).collect();
    for &x in &letters {
        for &y in &letters {
            if y != x.inverse() {
                out.push(vec![x, y]);
            }
        }
    }
    out
}

fn apply_to_images(p: &Presentation, mv: &WhiteheadMove, images: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    images
        .iter()
        .map(|w| {
            let mut v = mv.apply(p, w);
            free_reduce(&mut v);
            v
        })
        .collect()
}

fn substitute(images: &[Vec<Letter>], w: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::new();
    for l in w {
        let img = &images[l.gen as usize];
        if l.inv {
            out.extend(img.iter().rev().map(|x| x.inverse()));
        } else {
            out.extend_from_slice(img);
        }
    }
    free_reduce(&mut out);
    out
}

/// Conjugacy classes (orientation kept) of the probe images.
fn outer_key(images: &[Vec<Letter>], probes: &[Vec<Letter>]) -> Vec<Vec<Letter>> {
    probes
        .iter()
        .map(|w| least_rotation(&cyclically_reduced(&substitute(images, w))))
        .collect()
}

fn qualifies(images: &[Vec<Letter>], w_set: &[CyclicClass], bound: f64) -> bool {
    w_set.iter().all(|w| {
        let img = cyclically_reduced(&substitute(images, w.letters()));
        img.len() as f64 <= bound * w.cayley_length as f64
    })
}

/// Counts outer automorphisms `f`, written as compositions of at most `move_budget`
/// Whitehead moves, with `‖f(w)‖ ≤ bound·‖w‖` for every `w` in `w_set`; repeats the
/// count with two more moves to test stability.
pub fn automorphism_census(
    p: &Presentation,
    w_set: &[CyclicClass],
    bound: f64,
    move_budget: usize,
) -> Result<CensusResult> {
    automorphism_census_with_cap(p, w_set, bound, move_budget, DEFAULT_CENSUS_CAP)
}

pub fn automorphism_census_with_cap(
    p: &Presentation,
    w_set: &[CyclicClass],
    bound: f64,
    move_budget: usize,
    cap: usize,
) -> Result<CensusResult> {
    if p.shape() != Shape::Handlebody {
        return Err(Error::UnsupportedShape("the automorphism census needs a free presentation".into()));
    }
    if w_set.is_empty() {
        return Err(Error::input("empty test set"));
    }
    let n = p.free_rank();
    let mut moves = WhiteheadMove::type_one(n);
    moves.extend(WhiteheadMove::type_two(n));
    let probes = probes(n);

    let identity: Vec<Vec<Letter>> = (0..n as u16).map(|g| vec![Letter::pos(g)]).collect();
    let mut seen: HashSet<Vec<Vec<Letter>>> = HashSet::new();
    seen.insert(outer_key(&identity, &probes));
    let mut frontier = vec![identity.clone()];
    let mut qualifying_by_depth = vec![usize::from(qualifies(&identity, w_set, bound))];
    let mut partial = false;
    for _ in 0..move_budget + 2 {
        let mut next = Vec::new();
        let mut found = 0;
        'outer: for f in &frontier {
            for mv in &moves {
                let g = apply_to_images(p, mv, f);
                if seen.insert(outer_key(&g, &probes)) {
                    if qualifies(&g, w_set, bound) {
                        found += 1;
                    }
                    next.push(g);
                    if seen.len() >= cap {
                        partial = true;
                        break 'outer;
                    }
                }
            }
        }
        let total = qualifying_by_depth.last().unwrap() + found;
        qualifying_by_depth.push(total);
        frontier = next;
        if partial {
            // keep the remaining depths at the partial total
            while qualifying_by_depth.len() < move_budget + 3 {
                qualifying_by_depth.push(total);
            }
            break;
        }
    }
    let count = qualifying_by_depth[move_budget];
    let count_extended = qualifying_by_depth[move_budget + 2];
    Ok(CensusResult {
        bound,
        move_budget,
        count,
        count_extended,
        stable: count == count_extended && !partial,
        explored: seen.len(),
        partial,
    })
}
