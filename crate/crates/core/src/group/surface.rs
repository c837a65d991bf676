//! Closed surface groups `⟨a1,b1,…,ag,bg | [a1,b1]⋯[ag,bg]⟩`, genus ≥ 2.
//!
//! Letters here are local to the factor: `a_i` is generator `2(i-1)`, `b_i` is `2(i-1)+1`.
//!
//! The word problem is solved by Dehn's algorithm (the relator is C'(1/6) for g ≥ 2).
//! Geodesic lengths come from a breadth-first ball whose elements are deduplicated
//! exactly: a bucket key built from homomorphisms onto free groups narrows the
//! candidates, and Dehn's algorithm decides equality inside a bucket. The ball is
//! built in shortlex order, so the first word reaching an element is its shortlex
//! least geodesic.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use super::free::{free_reduce, freely_reduced};
use super::{invert, Letter};
use crate::error::{Error, Result};

/// Default cap on geodesic length computations (ball radius is half of this).
pub const DEFAULT_RADIUS_CAP: usize = 10;

#[derive(Debug)]
pub struct SurfaceGroup {
    genus: usize,
    /// Cyclic permutations of the relator and its inverse, bucketed by first letter code.
    conjugates_by_start: Vec<Vec<Vec<Letter>>>,
    ball: Mutex<Arc<Ball>>,
    geodesic_memo: Mutex<HashMap<Vec<Letter>, (usize, Vec<Letter>)>>,
}

/// Shared per-genus instance; the caches inside never change results.
pub fn surface_group(genus: usize) -> Arc<SurfaceGroup> {
    static GROUPS: OnceLock<Mutex<HashMap<usize, Arc<SurfaceGroup>>>> = OnceLock::new();
    let map = GROUPS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap();
    guard
        .entry(genus)
        .or_insert_with(|| Arc::new(SurfaceGroup::new(genus)))
        .clone()
}

/// `a1 b1 a1⁻¹ b1⁻¹ ⋯ ag bg ag⁻¹ bg⁻¹` in local letters.
pub fn relator(genus: usize) -> Vec<Letter> {
    let mut r = Vec::with_capacity(4 * genus);
    for i in 0..genus {
        let a = (2 * i) as u16;
        let b = a + 1;
        r.extend([Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)]);
    }
    r
}

impl SurfaceGroup {
    fn new(genus: usize) -> Self {
        assert!(genus >= 2, "surface genus must be at least 2");
        let r = relator(genus);
        let n = r.len();
        let mut conjugates_by_start = vec![Vec::new(); 4 * genus];
        for base in [r.clone(), invert(&r)] {
            for s in 0..n {
                let rot: Vec<Letter> = base[s..].iter().chain(&base[..s]).copied().collect();
                conjugates_by_start[rot[0].code()].push(rot);
            }
        }
        SurfaceGroup {
            genus,
            conjugates_by_start,
            ball: Mutex::new(Arc::new(Ball::identity())),
            geodesic_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    fn relator_len(&self) -> usize {
        4 * self.genus
    }

    /// Iterated Dehn reduction: free reduction plus replacing any subword that is more
    /// than half of a cyclic conjugate of the relator (or its inverse) by the shorter
    /// complement. The result is empty iff the word is trivial.
    pub fn dehn_reduce(&self, w: &[Letter]) -> Vec<Letter> {
        let n = self.relator_len();
        let mut v = freely_reduced(w);
        'outer: loop {
            for i in 0..v.len() {
                for c in &self.conjugates_by_start[v[i].code()] {
                    let l = v[i..].iter().zip(c).take_while(|(x, y)| x == y).count();
                    if 2 * l > n {
                        let replacement = invert(&c[l..]);
                        v.splice(i..i + l, replacement);
                        free_reduce(&mut v);
                        continue 'outer;
                    }
                }
            }
            return v;
        }
    }

    pub fn is_trivial(&self, w: &[Letter]) -> bool {
        self.dehn_reduce(w).is_empty()
    }

    pub fn equal(&self, u: &[Letter], v: &[Letter]) -> bool {
        let mut w = invert(u);
        w.extend_from_slice(v);
        self.is_trivial(&w)
    }

    /// Breadth-first ball of at least the given radius.
    pub fn ball(&self, radius: usize) -> Arc<Ball> {
        let mut guard = self.ball.lock().unwrap();
        if guard.radius < radius {
            let mut b = (**guard).clone();
            b.extend_to(self, radius);
            *guard = Arc::new(b);
        }
        guard.clone()
    }

    /// Exact geodesic length and the shortlex least geodesic word.
    pub fn geodesic(&self, w: &[Letter], cap: usize) -> Result<(usize, Vec<Letter>)> {
        let reduced = self.dehn_reduce(w);
        if reduced.is_empty() {
            return Ok((0, Vec::new()));
        }
        if let Some(hit) = self.geodesic_memo.lock().unwrap().get(&reduced) {
            return Ok(hit.clone());
        }
        let len = reduced.len();
        if len > cap {
            return Err(Error::undetermined(format!(
                "surface geodesic beyond radius cap {cap} (reduced length {len})"
            )));
        }
        let result = if len <= cap / 2 || len <= 1 {
            let ball = self.ball(len);
            let id = ball.find(self, &reduced).expect("element lies in the ball of its length");
            (ball.dist(id), ball.word(id).to_vec())
        } else {
            let half = len.div_ceil(2);
            let ball = self.ball(half);
            match ball.find(self, &reduced) {
                Some(id) if ball.dist(id) <= half => (ball.dist(id), ball.word(id).to_vec()),
                _ => {
                    // Every geodesic longer than `half` passes through the sphere S(half).
                    let mut best: Option<Vec<Letter>> = None;
                    for y in ball.layer(half) {
                        let mut z = invert(ball.word(y));
                        z.extend_from_slice(&reduced);
                        if let Some(zid) = ball.find(self, &z) {
                            let mut cand = ball.word(y).to_vec();
                            cand.extend_from_slice(ball.word(zid));
                            let better = match &best {
                                None => true,
                                Some(b) => (cand.len(), &cand) < (b.len(), b),
                            };
                            if better {
                                best = Some(cand);
                            }
                        }
                    }
                    let b = best.expect("a geodesic of length ≤ 2·half exists");
                    (b.len(), b)
                }
            }
        };
        self.geodesic_memo
            .lock()
            .unwrap()
            .insert(reduced, result.clone());
        Ok(result)
    }

    /// Minimal length of a conjugate, and the shortlex geodesic words of every
    /// minimal-length conjugate found (closed under rotation and short conjugation).
    pub fn minimal_conjugates(&self, w: &[Letter], cap: usize) -> Result<(usize, Vec<Vec<Letter>>)> {
        let (mut m, mut cur) = self.geodesic(w, cap)?;
        if m == 0 {
            return Ok((0, vec![Vec::new()]));
        }
        let conjugators = self.short_conjugators();
        let ball_radius = cap / 2;

        // descent
        'descend: loop {
            for cand in self.neighbours(&cur, &conjugators, m <= ball_radius) {
                let (d, rep) = if m <= ball_radius {
                    let ball = self.ball(m);
                    match ball.find(self, &cand) {
                        Some(id) => (ball.dist(id), ball.word(id).to_vec()),
                        None => continue,
                    }
                } else {
                    match self.geodesic(&cand, cap) {
                        Ok(x) => x,
                        Err(_) => continue,
                    }
                };
                if d < m {
                    m = d;
                    cur = rep;
                    if m == 0 {
                        return Ok((0, vec![Vec::new()]));
                    }
                    continue 'descend;
                }
            }
            break;
        }

        // closure of the minimal level
        let mut seen: HashSet<Vec<Letter>> = HashSet::new();
        let mut queue = vec![cur.clone()];
        seen.insert(cur);
        while let Some(x) = queue.pop() {
            for cand in self.neighbours(&x, &conjugators, m <= ball_radius) {
                let rep = if m <= ball_radius {
                    let ball = self.ball(m);
                    match ball.find(self, &cand) {
                        Some(id) if ball.dist(id) == m => ball.word(id).to_vec(),
                        _ => continue,
                    }
                } else {
                    match self.geodesic(&cand, cap) {
                        Ok((d, rep)) if d == m => rep,
                        _ => continue,
                    }
                };
                if seen.insert(rep.clone()) {
                    queue.push(rep);
                }
            }
        }
        let mut all: Vec<Vec<Letter>> = seen.into_iter().collect();
        all.sort();
        Ok((m, all))
    }

    fn short_conjugators(&self) -> Vec<Vec<Letter>> {
        let letters: Vec<Letter> = (0..2 * self.generator_count()).map(Letter::from_code).collect();
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

    fn neighbours(&self, w: &[Letter], conjugators: &[Vec<Letter>], with_conjugators: bool) -> Vec<Vec<Letter>> {
        let n = w.len();
        let mut out: Vec<Vec<Letter>> = (1..n)
            .map(|s| w[s..].iter().chain(&w[..s]).copied().collect())
            .collect();
        if with_conjugators {
            for u in conjugators {
                let mut c = u.clone();
                c.extend_from_slice(w);
                c.extend(invert(u));
                out.push(freely_reduced(&c));
            }
        }
        out
    }
}

/// Images under a few homomorphisms onto free groups, hashed. Equal elements share a key.
fn bucket_key(genus: usize, w: &[Letter]) -> u64 {
    let mut hasher = DefaultHasher::new();
    // a_i -> x_i, b_i -> 1 | a_i -> 1, b_i -> x_i | a_i, b_i -> x_i | handle-pair fold
    for hom in 0..4u8 {
        let mut img: Vec<i32> = Vec::with_capacity(w.len());
        for l in w {
            let handle = (l.gen / 2) as i32;
            let is_a = l.gen % 2 == 0;
            let target = match hom {
                0 => is_a.then_some(handle + 1),
                1 => (!is_a).then_some(handle + 1),
                2 => Some(handle + 1),
                _ => {
                    let pair = handle / 2;
                    if 2 * pair + 1 >= genus as i32 {
                        None
                    } else {
                        // a1->x, b1->y, a2->y, b2->x: [x,y][y,x] = 1
                        let first = handle % 2 == 0;
                        let x = 2 * pair + 1;
                        let y = 2 * pair + 2;
                        Some(if is_a == first { x } else { y })
                    }
                }
            };
            if let Some(t) = target {
                let s = if l.inv { -t } else { t };
                if img.last() == Some(&-s) {
                    img.pop();
                } else {
                    img.push(s);
                }
            }
        }
        img.hash(&mut hasher);
    }
    hasher.finish()
}

/// A ball in the Cayley graph of one surface group, stored layer by layer.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: usize,
    words: Vec<Vec<Letter>>,
    layer_start: Vec<usize>,
    index: HashMap<u64, Vec<u32>>,
}

impl Ball {
    fn identity() -> Self {
        let mut index = HashMap::new();
        // the key of the empty word does not depend on the genus
        index.insert(bucket_key(2, &[]), vec![0]);
        Ball {
            radius: 0,
            words: vec![Vec::new()],
            layer_start: vec![0, 1],
            index,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, id: usize) -> &[Letter] {
        &self.words[id]
    }

    pub fn dist(&self, id: usize) -> usize {
        self.words[id].len()
    }

    pub fn layer(&self, r: usize) -> std::ops::Range<usize> {
        self.layer_start[r]..self.layer_start[r + 1]
    }

    /// Elements in order of distance, shortlex least geodesic words.
    pub fn words(&self) -> &[Vec<Letter>] {
        &self.words
    }

    pub fn find(&self, group: &SurfaceGroup, w: &[Letter]) -> Option<usize> {
        let key = bucket_key(group.genus, w);
        let bucket = self.index.get(&key)?;
        bucket
            .iter()
            .map(|&id| id as usize)
            .find(|&id| group.equal(&self.words[id], w))
    }

    fn extend_to(&mut self, group: &SurfaceGroup, radius: usize) {
        let letters: Vec<Letter> = (0..2 * group.generator_count()).map(Letter::from_code).collect();
        while self.radius < radius {
            let prev = self.layer(self.radius);
            for parent in prev {
                for &l in &letters {
                    let pw = &self.words[parent];
                    if pw.last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut cand = pw.clone();
                    cand.push(l);
                    if self.find(group, &cand).is_none() {
                        let id = self.words.len() as u32;
                        self.index
                            .entry(bucket_key(group.genus, &cand))
                            .or_default()
                            .push(id);
                        self.words.push(cand);
                    }
                }
            }
            self.radius += 1;
            self.layer_start.push(self.words.len());
        }
    }
}
