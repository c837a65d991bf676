//! Whitehead's algorithm on cyclic words of a free group.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::graph::WhiteheadGraph;
use super::moves::WhiteheadMove;
use crate::error::{Error, Result};
use crate::group::free::{canonical_cyclic, cyclically_reduced};
use crate::group::{CyclicClass, GroupWord, Letter, Presentation, Shape};

/// Default node budget for the minimal level-set search.
pub const DEFAULT_LEVEL_BUDGET: usize = 1_000_000;

fn require_free(p: &Presentation) -> Result<usize> {
    if p.shape() != Shape::Handlebody {
        return Err(Error::UnsupportedShape("Whitehead minimisation needs a free presentation".into()));
    }
    Ok(p.free_rank())
}

fn apply_cyclic(p: &Presentation, mv: &WhiteheadMove, w: &[Letter]) -> Vec<Letter> {
    cyclically_reduced(&mv.apply(p, w))
}

fn omits_letter(rank: usize, w: &[Letter]) -> bool {
    let mut used = vec![false; rank];
    for l in w {
        used[l.gen as usize] = true;
    }
    used.iter().any(|u| !u)
}

fn as_class(w: &[Letter]) -> CyclicClass {
    let c = canonical_cyclic(w);
    CyclicClass {
        cayley_length: c.len(),
        canonical: GroupWord(c),
    }
}

/// Greedy strict descent by type II moves; by peak reduction the end point has
/// minimal length in the Aut-orbit.
pub fn minimize(p: &Presentation, class: &CyclicClass) -> Result<(CyclicClass, Vec<WhiteheadMove>)> {
    let rank = require_free(p)?;
    let moves = WhiteheadMove::type_two(rank);
    let mut w = cyclically_reduced(class.letters());
    let mut path = Vec::new();
    loop {
        let best = moves
            .iter()
            .map(|mv| (apply_cyclic(p, mv, &w), mv))
            .filter(|(img, _)| img.len() < w.len())
            .min_by_key(|(img, _)| img.len());
        match best {
            Some((img, mv)) => {
                w = img;
                path.push(mv.clone());
            }
            None => break,
        }
    }
    Ok((as_class(&w), path))
}

/// Outcome of the free-group separability search.
#[derive(Debug, Clone, Serialize)]
pub struct SeparabilityCertificate {
    pub separable: bool,
    pub minimal_length: usize,
    /// A minimal representative omitting a basis letter, when separable.
    pub witness: Option<CyclicClass>,
    /// Moves from the input to the witness (descent, then level moves).
    #[serde(skip)]
    pub moves: Vec<WhiteheadMove>,
    /// Level-set nodes visited (modulo permutations and inversions).
    pub explored: usize,
    /// Whitehead graph of the first minimal representative is connected, has no
    /// isolated vertex and no cut vertex.
    pub whitehead_lemma_applies: bool,
}

/// Key of a cyclic word modulo type I moves.
fn relabel_key(p: &Presentation, relabels: &[WhiteheadMove], w: &[Letter]) -> Vec<Letter> {
    relabels
        .iter()
        .map(|mv| canonical_cyclic(&mv.apply(p, w)))
        .min()
        .unwrap_or_default()
}

pub fn is_separable_free(p: &Presentation, class: &CyclicClass) -> Result<SeparabilityCertificate> {
    is_separable_free_with_budget(p, class, DEFAULT_LEVEL_BUDGET)
}

/// True iff some minimal-length element of the Aut-orbit omits a basis letter. The
/// minimal level is connected under length-preserving Whitehead moves, so the
/// search is complete within the budget.
pub fn is_separable_free_with_budget(
    p: &Presentation,
    class: &CyclicClass,
    budget: usize,
) -> Result<SeparabilityCertificate> {
    let rank = require_free(p)?;
    let (min_class, descent) = minimize(p, class)?;
    let start = min_class.letters().to_vec();
    let m = start.len();
    let lemma = {
        let g = WhiteheadGraph::from_cyclic_word(rank, &start);
        g.is_fully_connected() && g.cut_vertices().is_empty()
    };
    if omits_letter(rank, &start) {
        return Ok(SeparabilityCertificate {
            separable: true,
            minimal_length: m,
            witness: Some(min_class),
            moves: descent,
            explored: 1,
            whitehead_lemma_applies: lemma,
        });
    }

    let relabels = WhiteheadMove::type_one(rank);
    let moves = WhiteheadMove::type_two(rank);
    // node: (word, parent index, move from parent)
    let mut nodes: Vec<(Vec<Letter>, usize, Option<WhiteheadMove>)> = vec![(start.clone(), 0, None)];
    let mut seen: HashMap<Vec<Letter>, usize> = HashMap::new();
    seen.insert(relabel_key(p, &relabels, &start), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let w = nodes[i].0.clone();
        for mv in &moves {
            let img = apply_cyclic(p, mv, &w);
            if img.len() != m {
                continue;
            }
            let key = relabel_key(p, &relabels, &img);
            if seen.contains_key(&key) {
                continue;
            }
            let id = nodes.len();
            seen.insert(key, id);
            let hit = omits_letter(rank, &img);
            nodes.push((img, i, Some(mv.clone())));
            if hit {
                let mut level_moves = Vec::new();
                let mut cur = id;
                while cur != 0 {
                    level_moves.push(nodes[cur].2.clone().unwrap());
                    cur = nodes[cur].1;
                }
                level_moves.reverse();
                let mut all = descent;
                all.extend(level_moves);
                return Ok(SeparabilityCertificate {
                    separable: true,
                    minimal_length: m,
                    witness: Some(as_class(&nodes[id].0)),
                    moves: all,
                    explored: nodes.len(),
                    whitehead_lemma_applies: lemma,
                });
            }
            if nodes.len() > budget {
                return Err(Error::undetermined(format!(
                    "minimal level set exceeds budget of {budget} nodes"
                )));
            }
            queue.push_back(id);
        }
    }
    Ok(SeparabilityCertificate {
        separable: false,
        minimal_length: m,
        witness: None,
        moves: descent,
        explored: nodes.len(),
        whitehead_lemma_applies: lemma,
    })
}
