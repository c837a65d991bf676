use serde::{Deserialize, Serialize};

use super::free::free_reduce;
use super::surface::{surface_group, DEFAULT_RADIUS_CAP};
use super::{FactorKind, GroupWord, Letter, Presentation};
use crate::error::{Error, Result};

/// A nontrivial element of one Grushko factor, stored as a geodesic word
/// (shortlex least for surface factors, `t^k` for cyclic ones).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub factor: usize,
    pub word: Vec<Letter>,
}

impl Syllable {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Free-product normal form: alternating factors, canonical geodesic syllables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct NormalForm {
    pub syllables: Vec<Syllable>,
}

impl NormalForm {
    /// Cayley-graph distance from the identity.
    pub fn length(&self) -> usize {
        self.syllables.iter().map(Syllable::len).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn to_word(&self) -> GroupWord {
        GroupWord(self.syllables.iter().flat_map(|s| s.word.iter().copied()).collect())
    }
}

/// Reduces a factor word without canonicalising it. Empty result iff trivial.
pub(crate) fn reduce_in_factor(p: &Presentation, factor: usize, w: &mut Vec<Letter>) {
    let f = p.factor(factor);
    match f.kind {
        FactorKind::Cyclic => free_reduce(w),
        FactorKind::Surface { genus } => {
            let local: Vec<Letter> = w.iter().map(|&l| f.local(l)).collect();
            let reduced = surface_group(genus).dehn_reduce(&local);
            *w = reduced.into_iter().map(|l| f.global(l)).collect();
        }
    }
}

/// Geodesic length and canonical geodesic word of a factor element.
pub(crate) fn factor_geodesic(p: &Presentation, factor: usize, w: &[Letter]) -> Result<(usize, Vec<Letter>)> {
    let f = p.factor(factor);
    if let Some(l) = w.iter().find(|&&l| !f.contains(l)) {
        return Err(Error::input(format!(
            "letter {} is not in factor {factor}",
            p.generator_name(l.gen)
        )));
    }
    match f.kind {
        FactorKind::Cyclic => {
            let mut v = w.to_vec();
            free_reduce(&mut v);
            Ok((v.len(), v))
        }
        FactorKind::Surface { genus } => {
            let local: Vec<Letter> = w.iter().map(|&l| f.local(l)).collect();
            let (d, rep) = surface_group(genus).geodesic(&local, DEFAULT_RADIUS_CAP)?;
            Ok((d, rep.into_iter().map(|l| f.global(l)).collect()))
        }
    }
}

/// Syllable decomposition with each syllable reduced but not canonicalised.
pub(crate) fn raw_syllables(p: &Presentation, w: &[Letter]) -> Result<Vec<Syllable>> {
    p.validate(w)?;
    let mut stack: Vec<Syllable> = Vec::new();
    for &l in w {
        let factor = p.factor_of(l);
        match stack.last_mut() {
            Some(top) if top.factor == factor => {
                top.word.push(l);
                reduce_in_factor(p, factor, &mut top.word);
                if top.word.is_empty() {
                    stack.pop();
                }
            }
            _ => stack.push(Syllable {
                factor,
                word: vec![l],
            }),
        }
    }
    Ok(stack)
}

pub(crate) fn canonical_syllable(p: &Presentation, s: &Syllable) -> Result<Syllable> {
    let (_, word) = factor_geodesic(p, s.factor, &s.word)?;
    Ok(Syllable {
        factor: s.factor,
        word,
    })
}

/// Normal form of `w`. Idempotent; the result represents the same element.
pub fn reduce(p: &Presentation, w: &GroupWord) -> Result<NormalForm> {
    let raw = raw_syllables(p, w.letters())?;
    let syllables = raw
        .iter()
        .map(|s| canonical_syllable(p, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalForm { syllables })
}

/// Word problem. Never needs the geodesic cap.
pub fn is_trivial(p: &Presentation, w: &GroupWord) -> Result<bool> {
    Ok(raw_syllables(p, w.letters())?.is_empty())
}

/// Exact geodesic length of a word lying in one factor.
pub fn factor_geodesic_length(p: &Presentation, factor: usize, w: &GroupWord) -> Result<usize> {
    if factor >= p.factors().len() {
        return Err(Error::input(format!("factor index {factor} out of range")));
    }
    Ok(factor_geodesic(p, factor, w.letters())?.0)
}
