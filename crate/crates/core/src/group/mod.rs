//! Compression-body groups as free products of closed surface groups and a free group.
//!
//! Every group is presented by the standard generators of each surface factor
//! (`a1 b1 … ag bg`, one relator `[a1,b1]⋯[ag,bg]`) followed by the handle letters.
//! Each handle letter generates its own infinite cyclic Grushko factor.

mod cyclic;
mod enumerate;
pub mod free;
mod normal_form;
pub mod surface;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cyclic::{cyclic_class, CyclicClass};
pub use enumerate::{enumerate_ball, enumerate_separable_classes, BallElement, MAX_BALL_RADIUS};
pub use normal_form::{factor_geodesic_length, is_trivial, reduce, NormalForm, Syllable};

/// A generator or its inverse. Ordered by generator index, then `x < x⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub const fn new(gen: u16, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub const fn pos(gen: u16) -> Self {
        Letter { gen, inv: false }
    }

    pub const fn neg(gen: u16) -> Self {
        Letter { gen, inv: true }
    }

    pub const fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    /// Dense index `2·gen + inv`, used for vertex numbering.
    pub const fn code(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }

    pub const fn from_code(code: usize) -> Self {
        Letter {
            gen: (code / 2) as u16,
            inv: code % 2 == 1,
        }
    }
}

/// Inverse of a word, letter by letter.
pub fn invert(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inverse()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Surface { genus: usize },
    Cyclic,
}

/// One Grushko factor and the contiguous block of generators it owns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    pub first_gen: u16,
    pub gen_count: u16,
}

impl Factor {
    pub fn contains(&self, l: Letter) -> bool {
        l.gen >= self.first_gen && l.gen < self.first_gen + self.gen_count
    }

    /// Letter renumbered relative to the factor.
    pub fn local(&self, l: Letter) -> Letter {
        Letter::new(l.gen - self.first_gen, l.inv)
    }

    pub fn global(&self, l: Letter) -> Letter {
        Letter::new(l.gen + self.first_gen, l.inv)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Shape {
    /// Free group of rank ≥ 1, no surface factors.
    Handlebody,
    /// One surface factor and one handle.
    SmallBody,
    /// At least three Grushko factors.
    LargeBody,
    /// Two surface factors, no handles. Constructible; separability is unsupported.
    DoubleIBundle,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct PresentationSpec {
    surface_genera: Vec<usize>,
    free_rank: usize,
}

/// A compression-body group `π₁(S_{g1}) * ⋯ * π₁(S_{gk}) * F_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PresentationSpec", into = "PresentationSpec")]
pub struct Presentation {
    surface_genera: Vec<usize>,
    free_rank: usize,
    factors: Vec<Factor>,
    names: Vec<String>,
    gen_factor: Vec<usize>,
}

impl TryFrom<PresentationSpec> for Presentation {
    type Error = Error;

    fn try_from(spec: PresentationSpec) -> Result<Self> {
        Presentation::new(spec.surface_genera, spec.free_rank)
    }
}

impl From<Presentation> for PresentationSpec {
    fn from(p: Presentation) -> Self {
        PresentationSpec {
            surface_genera: p.surface_genera,
            free_rank: p.free_rank,
        }
    }
}

impl Presentation {
    pub fn new(surface_genera: Vec<usize>, free_rank: usize) -> Result<Self> {
        if surface_genera.is_empty() && free_rank == 0 {
            return Err(Error::input("the trivial group is not a compression-body group"));
        }
        if let Some(g) = surface_genera.iter().find(|&&g| g < 2) {
            return Err(Error::input(format!("surface genus {g} < 2")));
        }
        if surface_genera.len() == 1 && free_rank == 0 {
            return Err(Error::input(
                "a single surface factor without handles is a trivial compression body",
            ));
        }
        let total: usize = surface_genera.iter().map(|g| 2 * g).sum::<usize>() + free_rank;
        if total > u16::MAX as usize / 2 {
            return Err(Error::input("too many generators"));
        }

        let mut factors = Vec::new();
        let mut names = Vec::new();
        let mut gen_factor = Vec::new();
        let multi = surface_genera.len() > 1;
        for (m, &g) in surface_genera.iter().enumerate() {
            factors.push(Factor {
                kind: FactorKind::Surface { genus: g },
                first_gen: names.len() as u16,
                gen_count: 2 * g as u16,
            });
            for i in 1..=g {
                for base in ["a", "b"] {
                    names.push(if multi && m > 0 {
                        format!("{base}{i}_{}", m + 1)
                    } else {
                        format!("{base}{i}")
                    });
                    gen_factor.push(m);
                }
            }
        }
        let alphabetic = surface_genera.is_empty() && free_rank <= 26;
        for j in 0..free_rank {
            gen_factor.push(factors.len());
            factors.push(Factor {
                kind: FactorKind::Cyclic,
                first_gen: names.len() as u16,
                gen_count: 1,
            });
            names.push(if alphabetic {
                ((b'a' + j as u8) as char).to_string()
            } else {
                format!("t{}", j + 1)
            });
        }

        Ok(Presentation {
            surface_genera,
            free_rank,
            factors,
            names,
            gen_factor,
        })
    }

    /// The free group of the given rank (a handlebody group).
    pub fn free(rank: usize) -> Result<Self> {
        Presentation::new(Vec::new(), rank)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("presentation json: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    pub fn surface_genera(&self) -> &[usize] {
        &self.surface_genera
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn shape(&self) -> Shape {
        let k = self.surface_genera.len();
        if k == 0 {
            Shape::Handlebody
        } else if k == 2 && self.free_rank == 0 {
            Shape::DoubleIBundle
        } else if k + self.free_rank >= 3 {
            Shape::LargeBody
        } else {
            Shape::SmallBody
        }
    }

    pub fn is_free(&self) -> bool {
        self.surface_genera.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> &Factor {
        &self.factors[index]
    }

    pub fn factor_of(&self, l: Letter) -> usize {
        self.gen_factor[l.gen as usize]
    }

    pub fn generator_name(&self, gen: u16) -> &str {
        &self.names[gen as usize]
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<u16> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Some(i as u16);
        }
        // `t1, t2, …` always address the handle letters.
        let j: usize = name.strip_prefix('t')?.parse().ok()?;
        if j == 0 || j > self.free_rank {
            return None;
        }
        self.factors
            .iter()
            .filter(|f| f.kind == FactorKind::Cyclic)
            .nth(j - 1)
            .map(|f| f.first_gen)
    }

    /// Every letter of the symmetric generating set, in the fixed total order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.generator_count()).map(Letter::from_code)
    }

    pub fn validate(&self, w: &[Letter]) -> Result<()> {
        match w.iter().find(|l| l.gen as usize >= self.generator_count()) {
            Some(l) => Err(Error::input(format!(
                "generator index {} out of range (presentation has {})",
                l.gen,
                self.generator_count()
            ))),
            None => Ok(()),
        }
    }

    /// Parses words such as `a1 b1' t1`, `ab'a'b`, or `a^3 b^-2`.
    pub fn parse_word(&self, text: &str) -> Result<GroupWord> {
        let mut names: Vec<&String> = self.names.iter().collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            let mut rest = token;
            while !rest.is_empty() {
                let (gen, after) = if let Some(n) = names.iter().find(|n| rest.starts_with(n.as_str())) {
                    (self.generator_index(n).unwrap(), &rest[n.len()..])
                } else {
                    // handle aliases `t<digits>`
                    let digits = rest
                        .strip_prefix('t')
                        .map(|r| r.chars().take_while(|c| c.is_ascii_digit()).count())
                        .unwrap_or(0);
                    let alias = &rest[..1 + digits];
                    match (digits > 0).then(|| self.generator_index(alias)).flatten() {
                        Some(g) => (g, &rest[alias.len()..]),
                        None => return Err(Error::input(format!("unknown generator in `{token}`"))),
                    }
                };
                rest = after;
                let mut exponent: i64 = 1;
                while let Some(r) = rest.strip_prefix('\'') {
                    exponent = -exponent;
                    rest = r;
                }
                if let Some(r) = rest.strip_prefix('^') {
                    let len = r
                        .char_indices()
                        .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
                        .count();
                    let e: i64 = r[..len]
                        .parse()
                        .map_err(|_| Error::input(format!("bad exponent in `{token}`")))?;
                    exponent *= e;
                    rest = &r[len..];
                }
                let letter = Letter::new(gen, exponent < 0);
                out.extend(std::iter::repeat(letter).take(exponent.unsigned_abs() as usize));
            }
        }
        Ok(GroupWord(out))
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        let parts: Vec<String> = w
            .iter()
            .map(|l| {
                let n = self.generator_name(l.gen);
                if l.inv {
                    format!("{n}'")
                } else {
                    n.to_string()
                }
            })
            .collect();
        parts.join(" ")
    }
}

/// A finite word over the generating set; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GroupWord(pub Vec<Letter>);

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GroupWord(letters)
    }

    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(invert(&self.0))
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GroupWord(v)
    }

    pub fn pow(&self, n: usize) -> Self {
        GroupWord(self.0.iter().copied().cycle().take(n * self.0.len()).collect())
    }
}

impl From<Vec<Letter>> for GroupWord {
    fn from(v: Vec<Letter>) -> Self {
        GroupWord(v)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| format!("x{}{}", l.gen, if l.inv { "'" } else { "" }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
