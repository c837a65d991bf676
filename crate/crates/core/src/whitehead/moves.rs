use serde::{Deserialize, Serialize};

use crate::group::{invert, FactorKind, Letter, Presentation};

/// What a type II move does to one non-multiplier generator `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Fix,
    /// `x ↦ x·m`
    Right,
    /// `x ↦ m⁻¹·x`
    Left,
    /// `x ↦ m⁻¹·x·m`
    Conjugate,
}

/// An invertible automorphism used to move between elements of an Aut-orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WhiteheadMove {
    /// Type I: generator `i` maps to the letter `images[i]`.
    Relabel { images: Vec<Letter> },
    /// Type II with multiplier `m`; `actions[i]` applies to generator `i`.
    Multiply { multiplier: Letter, actions: Vec<Action> },
    /// Conjugate every generator of a factor by `by`.
    ConjugateFactor { factor: usize, by: Letter },
    /// `t ↦ by·t` (left) or `t ↦ t·by` for a handle generator `t`.
    Transvect { handle: u16, by: Letter, left: bool },
}

impl WhiteheadMove {
    fn image(&self, p: &Presentation, gen: u16) -> Vec<Letter> {
        let x = Letter::pos(gen);
        match self {
            WhiteheadMove::Relabel { images } => vec![images[gen as usize]],
            WhiteheadMove::Multiply { multiplier, actions } => {
                let m = *multiplier;
                match actions[gen as usize] {
                    Action::Fix => vec![x],
                    Action::Right => vec![x, m],
                    Action::Left => vec![m.inverse(), x],
                    Action::Conjugate => vec![m.inverse(), x, m],
                }
            }
            WhiteheadMove::ConjugateFactor { factor, by } => {
                if p.factor(*factor).contains(x) {
                    vec![*by, x, by.inverse()]
                } else {
                    vec![x]
                }
            }
            WhiteheadMove::Transvect { handle, by, left } => {
                if gen != *handle {
                    vec![x]
                } else if *left {
                    vec![*by, x]
                } else {
                    vec![x, *by]
                }
            }
        }
    }

    /// Image of a word, letter by letter, not reduced.
    pub fn apply(&self, p: &Presentation, w: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(w.len() + 4);
        for &l in w {
            let img = self.image(p, l.gen);
            if l.inv {
                out.extend(invert(&img));
            } else {
                out.extend(img);
            }
        }
        out
    }

    pub fn inverse(&self) -> WhiteheadMove {
        match self {
            WhiteheadMove::Relabel { images } => {
                let mut inv = vec![Letter::pos(0); images.len()];
                for (i, &img) in images.iter().enumerate() {
                    inv[img.gen as usize] = Letter::new(i as u16, img.inv);
                }
                WhiteheadMove::Relabel { images: inv }
            }
            WhiteheadMove::Multiply { multiplier, actions } => WhiteheadMove::Multiply {
                multiplier: multiplier.inverse(),
                actions: actions.clone(),
            },
            WhiteheadMove::ConjugateFactor { factor, by } => WhiteheadMove::ConjugateFactor {
                factor: *factor,
                by: by.inverse(),
            },
            WhiteheadMove::Transvect { handle, by, left } => WhiteheadMove::Transvect {
                handle: *handle,
                by: by.inverse(),
                left: *left,
            },
        }
    }

    /// All `n!·2ⁿ` permutations and inversions of a free basis.
    pub fn type_one(n: usize) -> Vec<WhiteheadMove> {
        fn perms(n: usize) -> Vec<Vec<u16>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, (n - 1) as u16);
                    out.push(q);
                }
            }
            out
        }
        let mut all = perms(n);
        all.sort();
        let mut out = Vec::new();
        for perm in all {
            for signs in 0..(1usize << n) {
                let images = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| Letter::new(g, signs >> i & 1 == 1))
                    .collect();
                out.push(WhiteheadMove::Relabel { images });
            }
        }
        out
    }

    /// Every nontrivial type II move of a free group of rank `n`.
    pub fn type_two(n: usize) -> Vec<WhiteheadMove> {
        let choices = [Action::Fix, Action::Right, Action::Left, Action::Conjugate];
        let mut out = Vec::new();
        for code in 0..2 * n {
            let m = Letter::from_code(code);
            let others: Vec<usize> = (0..n).filter(|&g| g != m.gen as usize).collect();
            let combos = 4usize.pow(others.len() as u32);
            for k in 1..combos {
                let mut actions = vec![Action::Fix; n];
                let mut rest = k;
                for &g in &others {
                    actions[g] = choices[rest % 4];
                    rest /= 4;
                }
                out.push(WhiteheadMove::Multiply {
                    multiplier: m,
                    actions,
                });
            }
        }
        out
    }

    /// Factor conjugations and handle transvections of a free product.
    pub fn factor_moves(p: &Presentation) -> Vec<WhiteheadMove> {
        let mut out = Vec::new();
        for (fi, f) in p.factors().iter().enumerate() {
            for l in p.letters() {
                if f.contains(l) {
                    continue;
                }
                out.push(WhiteheadMove::ConjugateFactor { factor: fi, by: l });
                if f.kind == FactorKind::Cyclic {
                    for left in [true, false] {
                        out.push(WhiteheadMove::Transvect {
                            handle: f.first_gen,
                            by: l,
                            left,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn describe(&self, p: &Presentation) -> String {
        let name = |l: Letter| p.format_word(&[l]);
        match self {
            WhiteheadMove::Relabel { images } => {
                let parts: Vec<String> = images
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| format!("{}->{}", p.generator_name(i as u16), name(l)))
                    .collect();
                format!("relabel({})", parts.join(","))
            }
            WhiteheadMove::Multiply { .. } => {
                let parts: Vec<String> = (0..p.generator_count() as u16)
                    .filter_map(|g| {
                        let img = self.image(p, g);
                        (img.len() > 1).then(|| format!("{}->{}", p.generator_name(g), p.format_word(&img)))
                    })
                    .collect();
                format!("whitehead({})", parts.join(", "))
            }
            WhiteheadMove::ConjugateFactor { factor, by } => {
                format!("conjugate factor {factor} by {}", name(*by))
            }
            WhiteheadMove::Transvect { handle, by, left } => {
                let t = name(Letter::pos(*handle));
                if *left {
                    format!("{t}->{} {t}", name(*by))
                } else {
                    format!("{t}->{t} {}", name(*by))
                }
            }
        }
    }
}
