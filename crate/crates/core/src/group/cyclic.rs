use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::free::least_rotation;
use super::normal_form::{canonical_syllable, raw_syllables, reduce_in_factor, Syllable};
use super::surface::{surface_group, DEFAULT_RADIUS_CAP};
use super::{invert, FactorKind, GroupWord, Letter, Presentation};
use crate::error::{Error, Result};

/// A conjugacy class up to inversion, keyed by its canonical cyclic word.
///
/// `cayley_length` is the minimal translation length `‖g‖` on the Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicClass {
    pub cayley_length: usize,
    pub canonical: GroupWord,
}

impl CyclicClass {
    pub fn word(&self) -> &GroupWord {
        &self.canonical
    }

    pub fn letters(&self) -> &[Letter] {
        self.canonical.letters()
    }

    /// Grushko factors met by the canonical word.
    pub fn factors_used(&self, p: &Presentation) -> BTreeSet<usize> {
        self.letters().iter().map(|&l| p.factor_of(l)).collect()
    }

    pub fn omits_a_factor(&self, p: &Presentation) -> bool {
        self.factors_used(p).len() < p.factors().len()
    }

    pub fn display(&self, p: &Presentation) -> String {
        p.format_word(self.letters())
    }
}

/// Cyclic class of a nontrivial element.
pub fn cyclic_class(p: &Presentation, w: &GroupWord) -> Result<CyclicClass> {
    let mut syl = raw_syllables(p, w.letters())?;
    // cyclic reduction at the syllable level
    while syl.len() >= 2 && syl[0].factor == syl[syl.len() - 1].factor {
        let last = syl.pop().unwrap();
        let first = syl.remove(0);
        let mut merged = last.word;
        merged.extend(first.word);
        reduce_in_factor(p, first.factor, &mut merged);
        if !merged.is_empty() {
            syl.insert(
                0,
                Syllable {
                    factor: first.factor,
                    word: merged,
                },
            );
        }
    }
    match syl.len() {
        0 => Err(Error::input("the identity has no cyclic class")),
        1 => single_factor_class(p, &syl[0]),
        _ => {
            let forward = syl
                .iter()
                .map(|s| canonical_syllable(p, s))
                .collect::<Result<Vec<_>>>()?;
            let backward = syl
                .iter()
                .rev()
                .map(|s| {
                    canonical_syllable(
                        p,
                        &Syllable {
                            factor: s.factor,
                            word: invert(&s.word),
                        },
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            let flat = |v: &[Syllable]| -> Vec<Letter> { v.iter().flat_map(|s| s.word.iter().copied()).collect() };
            let a = least_rotation(&flat(&forward));
            let b = least_rotation(&flat(&backward));
            let canonical = a.min(b);
            Ok(CyclicClass {
                cayley_length: canonical.len(),
                canonical: GroupWord(canonical),
            })
        }
    }
}

fn single_factor_class(p: &Presentation, s: &Syllable) -> Result<CyclicClass> {
    let f = p.factor(s.factor);
    match f.kind {
        FactorKind::Cyclic => {
            let n = s.word.len();
            let canonical = GroupWord(vec![Letter::pos(f.first_gen); n]);
            Ok(CyclicClass {
                cayley_length: n,
                canonical,
            })
        }
        FactorKind::Surface { genus } => {
            let g = surface_group(genus);
            let local: Vec<Letter> = s.word.iter().map(|&l| f.local(l)).collect();
            let (m, reps) = g.minimal_conjugates(&local, DEFAULT_RADIUS_CAP)?;
            let mut best: Option<Vec<Letter>> = None;
            for r in &reps {
                let (_, inv_rep) = g.geodesic(&invert(r), DEFAULT_RADIUS_CAP)?;
                for cand in [r.clone(), inv_rep] {
                    if best.as_ref().map_or(true, |b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
            let canonical: Vec<Letter> = best.unwrap().into_iter().map(|l| f.global(l)).collect();
            debug_assert_eq!(canonical.len(), m);
            Ok(CyclicClass {
                cayley_length: m,
                canonical: GroupWord(canonical),
            })
        }
    }
}
