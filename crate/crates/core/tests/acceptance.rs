//! Acceptance criteria. Runs without the libtest harness and prints one
//! `PASS`/`FAIL` line per criterion; exits non-zero if any criterion fails.
//!
//! The oracles here are deliberately independent of the library: separability by
//! Whitehead-orbit closure over plain byte words, Cayley distance by breadth-first
//! search over numerically faithful matrix representations, and translation length
//! by direct minimization of displacement in upper half-space.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepstab::group::{cyclic_class, enumerate_ball, enumerate_separable_classes, reduce, GroupWord, Letter, Presentation};
use sepstab::hyperbolic::{classify, rep_from_traces, IsometryClass, MoebiusMap, Representation, H3Point};
use sepstab::scan::{certify_cell, render_csv, run_scan, scan_records, ScanConfig};
use sepstab::stability::{
    automorphism_census, certify, default_test_set, score, NestingParams, RejectionKind, VerdictKind,
};
use sepstab::whitehead::{classify_labeled, is_separable_free, minimize, whitehead_graph, LabeledVerdict};

const TOL: f64 = 1e-10;
/// Frozen once from the displacement oracle; certify and the oracle must both reproduce it.
const SCHOTTKY_MIN_RATIO_GOLDEN: f64 = 2.063437068895503;
const GOLDEN_TOL: f64 = 1e-6;
const CONJUGATION_DRIFT: f64 = 1e-8;

// ---------- free-group words as byte codes: generator 2k, inverse 2k+1 ----------

type Code = Vec<u8>;

fn inv(c: u8) -> u8 {
    c ^ 1
}

fn inverse(w: &[u8]) -> Code {
    w.iter().rev().map(|&c| inv(c)).collect()
}

fn cyc_reduce(w: &[u8]) -> Code {
    let mut s: Code = Vec::with_capacity(w.len());
    for &c in w {
        if s.last() == Some(&inv(c)) {
            s.pop();
        } else {
            s.push(c);
        }
    }
    let (mut i, mut j) = (0, s.len());
    while j - i >= 2 && s[i] == inv(s[j - 1]) {
        i += 1;
        j -= 1;
    }
    s[i..j].to_vec()
}

/// Unoriented conjugacy class key: least rotation of the word or its inverse.
fn class_key(w: &[u8]) -> Code {
    let mut best: Option<Code> = None;
    for v in [w.to_vec(), inverse(w)] {
        for r in 0..v.len().max(1) {
            let rot: Code = v[r..].iter().chain(&v[..r]).copied().collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn all_classes(n: usize, max_len: usize) -> BTreeSet<Code> {
    fn grow(n: usize, max_len: usize, w: &mut Code, out: &mut BTreeSet<Code>) {
        if !w.is_empty() && w[0] != inv(*w.last().unwrap()) {
            out.insert(class_key(w));
        }
        if w.len() == max_len {
            return;
        }
        for c in 0..2 * n as u8 {
            if w.last() != Some(&inv(c)) {
                w.push(c);
                grow(n, max_len, w, out);
                w.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    grow(n, max_len, &mut Vec::new(), &mut out);
    out
}

fn substitute(images: &[Code], w: &[u8]) -> Code {
    let mut out = Vec::new();
    for &c in w {
        let img = &images[(c / 2) as usize];
        if c % 2 == 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(inverse(img));
        }
    }
    cyc_reduce(&out)
}

/// Signed permutations and every multiplication automorphism `y ↦ y, yx, x⁻¹y, x⁻¹yx`.
fn whitehead_automorphisms(n: usize) -> Vec<Vec<Code>> {
    let mut out = Vec::new();
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..=k).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k);
                q
            }))
            .collect();
    }
    for perm in &perms {
        for signs in 0..1u32 << n {
            out.push(
                (0..n)
                    .map(|g| vec![(2 * perm[g] + ((signs >> g) & 1) as usize) as u8])
                    .collect(),
            );
        }
    }
    for x in 0..2 * n as u8 {
        let others: Vec<usize> = (0..n).filter(|&g| g != (x / 2) as usize).collect();
        for choice in 1..4usize.pow(others.len() as u32) {
            let mut images: Vec<Code> = (0..n as u8).map(|g| vec![2 * g]).collect();
            let mut ch = choice;
            for &y in &others {
                let yc = 2 * y as u8;
                images[y] = match ch % 4 {
                    0 => vec![yc],
                    1 => vec![yc, x],
                    2 => vec![inv(x), yc],
                    _ => vec![inv(x), yc, x],
                };
                ch /= 4;
            }
            out.push(images);
        }
    }
    out
}

/// Classes of length ≤ `max_len` in the Whitehead orbit of a class that omits a
/// generator. By peak reduction such an orbit path never exceeds the longer end,
/// so the length cap loses nothing.
fn separable_oracle(n: usize, max_len: usize) -> HashSet<Code> {
    let autos = whitehead_automorphisms(n);
    let mut seen: HashSet<Code> = HashSet::new();
    let mut queue = VecDeque::new();
    for w in all_classes(n, max_len) {
        let used: HashSet<u8> = w.iter().map(|c| c / 2).collect();
        if used.len() < n && seen.insert(w.clone()) {
            queue.push_back(w);
        }
    }
    while let Some(w) = queue.pop_front() {
        for a in &autos {
            let v = substitute(a, &w);
            if !v.is_empty() && v.len() <= max_len {
                let k = class_key(&v);
                if seen.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
    }
    seen
}

fn to_word(w: &[u8]) -> GroupWord {
    GroupWord(w.iter().map(|&c| Letter::new((c / 2) as u16, c % 2 == 1)).collect())
}

// ---------- plain 2×2 complex matrices ----------

type M = [Complex64; 4];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mul(x: &M, y: &M) -> M {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn minv(x: &M) -> M {
    let det = x[0] * x[3] - x[1] * x[2];
    [x[3] / det, -x[1] / det, -x[2] / det, x[0] / det]
}

fn ident() -> M {
    [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
}

fn eval_code(gens: &[M], w: &[u8]) -> M {
    w.iter().fold(ident(), |acc, &l| {
        let g = if l % 2 == 0 { gens[(l / 2) as usize] } else { minv(&gens[(l / 2) as usize]) };
        mul(&acc, &g)
    })
}

/// Sign-normalized entries rounded to 1e-6, as a hashable key for an element of PSL(2,ℂ).
fn matrix_key(m: &M) -> [i64; 8] {
    let lead = m.iter().find(|z| z.norm() > 1e-7).copied().unwrap_or(c(1.0, 0.0));
    let s = if lead.re > 1e-9 || (lead.re.abs() <= 1e-9 && lead.im > 0.0) { 1.0 } else { -1.0 };
    let mut k = [0i64; 8];
    for (i, z) in m.iter().enumerate() {
        k[2 * i] = (s * z.re * 1e6).round() as i64;
        k[2 * i + 1] = (s * z.im * 1e6).round() as i64;
    }
    k
}

/// Breadth-first search of the Cayley graph, identifying elements through a
/// representation that is faithful on the ball. Returns (shortlex-first word, distance).
fn numeric_ball(gens: &[M], radius: usize) -> Vec<(Code, usize)> {
    let n = gens.len();
    let mut seen: HashSet<[i64; 8]> = HashSet::new();
    seen.insert(matrix_key(&ident()));
    let mut out = vec![(Vec::new(), 0)];
    let mut frontier = vec![(Vec::new(), ident())];
    for r in 1..=radius {
        let mut next = Vec::new();
        for (w, m) in &frontier {
            for l in 0..2 * n as u8 {
                let g = if l % 2 == 0 { gens[(l / 2) as usize] } else { minv(&gens[(l / 2) as usize]) };
                let m2 = mul(m, &g);
                if seen.insert(matrix_key(&m2)) {
                    let mut w2: Code = w.clone();
                    w2.push(l);
                    out.push((w2.clone(), r));
                    next.push((w2, m2));
                }
            }
        }
        frontier = next;
    }
    out
}

fn schottky_matrices() -> [M; 2] {
    let s = 3f64.sqrt();
    [
        [c(2.0, 0.0), c(s, 0.0), c(s, 0.0), c(2.0, 0.0)],
        [c(2.0, 0.0), c(0.0, s), c(0.0, -s), c(2.0, 0.0)],
    ]
}

/// Ford ping-pong: the isometric circles of A, A⁻¹, B, B⁻¹ bound disjoint discs.
fn ping_pong_holds(gens: &[M]) -> bool {
    let mut discs = Vec::new();
    for g in gens {
        for h in [*g, minv(g)] {
            if h[2].norm() < 1e-12 {
                return false;
            }
            discs.push((-h[3] / h[2], 1.0 / h[2].norm()));
        }
    }
    (0..discs.len()).all(|i| (i + 1..discs.len()).all(|j| (discs[i].0 - discs[j].0).norm() > discs[i].1 + discs[j].1))
}

/// Fuchsian genus-two group of the regular octagon with angles π/4,
/// in the disc model; side `i` is paired with side `i+2`.
fn genus_two_fuchsian() -> [M; 4] {
    let pi = std::f64::consts::PI;
    let rot = |p: f64| -> M { [Complex64::from_polar(1.0, p / 2.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, -p / 2.0)] };
    let r = (1.0 / (pi / 8.0).tan()).acosh();
    let tr: M = [c(r.cosh(), 0.0), c(r.sinh(), 0.0), c(r.sinh(), 0.0), c(r.cosh(), 0.0)];
    let theta = |k: usize| 2.0 * pi * k as f64 / 8.0;
    let t = |th: f64| mul(&mul(&rot(th), &tr), &rot(-th));
    let pairing = |i: usize| {
        let j = (i + 2) % 8;
        mul(&t(theta(i)), &rot(theta(i) + pi - theta(j)))
    };
    [pairing(0), minv(&pairing(1)), pairing(4), minv(&pairing(5))]
}

/// A loxodromic with fixed points ±0.3 (inside the octagon) and multiplier 100;
/// by Klein combination it generates a free product with the Fuchsian group.
fn handle_matrix() -> M {
    let k = 1.0 / 0.6f64.sqrt();
    let cm: M = [c(0.3 * k, 0.0), c(-0.3 * k, 0.0), c(k, 0.0), c(k, 0.0)];
    let d: M = [c(10.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.1, 0.0)];
    mul(&mul(&cm, &d), &minv(&cm))
}

fn to_moebius(m: &M) -> MoebiusMap {
    MoebiusMap::new(m[0], m[1], m[2], m[3]).expect("invertible")
}

// ---------- translation length by displacement minimization ----------

fn act(m: &M, p: (Complex64, f64)) -> (Complex64, f64) {
    let (z, h) = p;
    let q = m[2] * z + m[3];
    let den = q.norm_sqr() + m[2].norm_sqr() * h * h;
    let zz = ((m[0] * z + m[1]) * q.conj() + m[0] * m[2].conj() * h * h) / den;
    (zz, h / den)
}

fn h3_distance(p: (Complex64, f64), q: (Complex64, f64)) -> f64 {
    let num = (p.0 - q.0).norm_sqr() + (p.1 - q.1).powi(2);
    (1.0 + num / (2.0 * p.1 * q.1)).acosh()
}

/// `inf_x d(x, g x)` by restarted Nelder–Mead in the coordinates (x, y, log h).
fn displacement_min(g: &M) -> f64 {
    let f = |v: &[f64; 3]| {
        let p = (c(v[0], v[1]), v[2].exp());
        h3_distance(p, act(g, p))
    };
    let mut best = [0.0f64; 3];
    for restart in 0..6 {
        let step = if restart == 0 { 0.5 } else { 0.05 };
        let mut simplex: Vec<[f64; 3]> = vec![best];
        for k in 0..3 {
            let mut v = best;
            v[k] += step;
            simplex.push(v);
        }
        let mut vals: Vec<f64> = simplex.iter().map(f).collect();
        for _ in 0..20_000 {
            let mut idx = [0usize, 1, 2, 3];
            idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
            simplex = idx.iter().map(|&i| simplex[i]).collect();
            vals = idx.iter().map(|&i| vals[i]).collect();
            if vals[3] - vals[0] < 1e-15 {
                break;
            }
            let mut cen = [0.0; 3];
            for v in &simplex[..3] {
                for k in 0..3 {
                    cen[k] += v[k] / 3.0;
                }
            }
            let along = |t: f64| -> [f64; 3] {
                let mut v = [0.0; 3];
                for k in 0..3 {
                    v[k] = cen[k] + t * (simplex[3][k] - cen[k]);
                }
                v
            };
            let xr = along(-1.0);
            let fr = f(&xr);
            if fr < vals[0] {
                let xe = along(-2.0);
                let fe = f(&xe);
                if fe < fr {
                    simplex[3] = xe;
                    vals[3] = fe;
                } else {
                    simplex[3] = xr;
                    vals[3] = fr;
                }
            } else if fr < vals[2] {
                simplex[3] = xr;
                vals[3] = fr;
            } else {
                let xc = if fr < vals[3] { along(-0.5) } else { along(0.5) };
                let fc = f(&xc);
                if fc < vals[3].min(fr) {
                    simplex[3] = xc;
                    vals[3] = fc;
                } else {
                    for i in 1..4 {
                        for k in 0..3 {
                            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
                        }
                        vals[i] = f(&simplex[i]);
                    }
                }
            }
        }
        let i = (0..4).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
        best = simplex[i];
    }
    f(&best)
}

// ---------- criteria ----------

type Outcome = (bool, String);

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (n, max_len) in [(2usize, 8usize), (3, 6)] {
        let p = Presentation::free(n).unwrap();
        let oracle = separable_oracle(n, max_len);
        let classes = all_classes(n, max_len);
        let mut mismatches = 0;
        let mut separable = 0;
        for w in &classes {
            let class = cyclic_class(&p, &to_word(w)).unwrap();
            let lib = is_separable_free(&p, &class).map(|c| c.separable);
            let expected = oracle.contains(w);
            separable += usize::from(expected);
            if lib != Ok(expected) {
                mismatches += 1;
            }
        }
        ok &= mismatches == 0;
        details.push(format!(
            "F{n} len<={max_len}: {} classes, {separable} separable, {mismatches} mismatches",
            classes.len()
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 60.0;
    (ok, format!("{}; {secs:.1}s (limit 60s)", details.join("; ")))
}

fn criterion_2() -> Outcome {
    let p = Presentation::free(2).unwrap();
    let oracle = separable_oracle(2, 8);
    let mut tested = 0;
    let mut disconnected = Vec::new();
    for w in all_classes(2, 8) {
        if oracle.contains(&w) {
            continue;
        }
        let class = cyclic_class(&p, &to_word(&w)).unwrap();
        let (min, _) = minimize(&p, &class).unwrap();
        tested += 1;
        if !whitehead_graph(&p, &min).unwrap().is_connected() {
            disconnected.push(min.display(&p));
        }
    }
    let comm = cyclic_class(&p, &p.parse_word("a b a' b'").unwrap()).unwrap();
    let g = whitehead_graph(&p, &comm).unwrap();
    let comm_separable = is_separable_free(&p, &comm).unwrap().separable;
    let ok = disconnected.is_empty() && g.is_connected() && g.cut_vertices().is_empty() && !comm_separable;
    (
        ok,
        format!(
            "{tested} minimized non-separable classes, {} with disconnected graph; commutator: connected={}, cut vertices={}, separable={comm_separable}",
            disconnected.len(),
            g.is_connected(),
            g.cut_vertices().len()
        ),
    )
}

fn ball_agreement(p: &Presentation, gens: &[M], radius: usize) -> (bool, String) {
    let oracle = numeric_ball(gens, radius);
    let mut wrong_length = 0;
    for (w, d) in &oracle {
        if reduce(p, &to_word(w)).unwrap().length() != *d {
            wrong_length += 1;
        }
    }
    let lib = enumerate_ball(p, radius).unwrap();
    let dist: HashMap<[i64; 8], usize> = oracle
        .iter()
        .map(|(w, d)| (matrix_key(&eval_code(gens, w)), *d))
        .collect();
    let mut wrong_ball = 0;
    for e in &lib {
        let w: Code = e
            .normal_form
            .to_word()
            .letters()
            .iter()
            .map(|l| 2 * l.gen as u8 + u8::from(l.inv))
            .collect();
        if dist.get(&matrix_key(&eval_code(gens, &w))) != Some(&e.distance) {
            wrong_ball += 1;
        }
    }
    let ok = wrong_length == 0 && wrong_ball == 0 && lib.len() == oracle.len();
    (
        ok,
        format!(
            "{} oracle elements, {} library elements, {wrong_length} length mismatches, {wrong_ball} ball mismatches",
            oracle.len(),
            lib.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let f2 = Presentation::free(2).unwrap();
    let (ok1, d1) = ball_agreement(&f2, &schottky_matrices(), 6);

    let body = Presentation::new(vec![2], 1).unwrap();
    let fuchs = genus_two_fuchsian();
    let mut gens = vec![ident(); body.generator_count()];
    for (name, m) in ["a1", "b1", "a2", "b2"].iter().zip(fuchs.iter()) {
        gens[body.generator_index(name).unwrap() as usize] = *m;
    }
    gens[body.generator_index("t1").unwrap() as usize] = handle_matrix();
    // the octagon group must satisfy the surface relator
    let rel = body.parse_word("a1 b1 a1' b1' a2 b2 a2' b2'").unwrap();
    let rel_code: Code = rel.letters().iter().map(|l| 2 * l.gen as u8 + u8::from(l.inv)).collect();
    let r = eval_code(&gens, &rel_code);
    let rel_ok = matrix_key(&r) == matrix_key(&ident());
    let (ok2, d2) = ball_agreement(&body, &gens, 4);
    let secs = start.elapsed().as_secs_f64();
    (
        ok1 && ok2 && rel_ok && secs < 300.0,
        format!("F2 radius 6: {d1}; S2*<t> radius 4: {d2}; relator holds={rel_ok}; {secs:.1}s (limit 300s)"),
    )
}

fn criterion_4() -> Outcome {
    let body = Presentation::new(vec![2], 1).unwrap();
    let classes = enumerate_separable_classes(&body, 4, 0).unwrap();
    let mut inconsistent = Vec::new();
    for cl in &classes {
        if classify_labeled(&body, cl).unwrap() != LabeledVerdict::ConsistentWithSeparable {
            inconsistent.push(cl.display(&body));
        }
    }
    let ta = cyclic_class(&body, &body.parse_word("t1 a1").unwrap()).unwrap();
    let ta_verdict = classify_labeled(&body, &ta).unwrap();
    let ok = inconsistent.is_empty() && ta_verdict == LabeledVerdict::NotSeparableCertified;
    (
        ok,
        format!(
            "{} separable classes, {} not CONSISTENT_WITH_SEPARABLE; t1 a1 -> {ta_verdict:?} (expected NotSeparableCertified; \
             t1 a1 is primitive, sent to t1 by t1 -> t1 a1', and its graph is one edge between distinct vertices)",
            classes.len(),
            inconsistent.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let f2 = Presentation::free(2).unwrap();
    let mats = schottky_matrices();
    let ping_pong = ping_pong_holds(&mats);
    let rep = Representation::new(f2.clone(), mats.iter().map(to_moebius).collect(), H3Point::origin()).unwrap();
    let v = certify(&rep, &f2, 8, 0, &NestingParams::default(), TOL).unwrap();
    let lib_ratio = v.score.as_ref().map(|s| s.min_ratio).unwrap_or(f64::NAN);

    let mut oracle_ratio = f64::INFINITY;
    let mut oracle_word = Code::new();
    let mut words: Vec<Code> = separable_oracle(2, 8).into_iter().collect();
    words.sort_by(|u, v| (u.len(), u).cmp(&(v.len(), v)));
    for w in words {
        let ell = displacement_min(&eval_code(&mats, &w));
        let ratio = ell / w.len() as f64;
        if ratio < oracle_ratio {
            oracle_ratio = ratio;
            oracle_word = w;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = ping_pong
        && v.kind == VerdictKind::CertifiedAtDepth
        && lib_ratio > 0.0
        && (lib_ratio - SCHOTTKY_MIN_RATIO_GOLDEN).abs() <= GOLDEN_TOL
        && (oracle_ratio - SCHOTTKY_MIN_RATIO_GOLDEN).abs() <= GOLDEN_TOL
        && secs < 30.0;
    (
        ok,
        format!(
            "ping-pong={ping_pong}; verdict {:?}; min_ratio {lib_ratio:.12}, oracle {oracle_ratio:.12} at {}, golden {SCHOTTKY_MIN_RATIO_GOLDEN} (tol {GOLDEN_TOL}); {secs:.1}s (limit 30s)",
            v.kind,
            f2.format_word(to_word(&oracle_word).letters())
        ),
    )
}

fn criterion_6() -> Outcome {
    let f2 = Presentation::free(2).unwrap();
    let rep = rep_from_traces(c(2.0, 0.0), c(3.0, 0.0), c(3.0, 0.0)).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for tol in [TOL, TOL / 10.0] {
        let v = certify(&rep, &f2, 8, 0, &NestingParams::default(), tol).unwrap();
        let w = v.witness.as_ref().map(|w| w.class.clone()).unwrap_or_default();
        ok &= v.kind == VerdictKind::Rejected && v.rejection == Some(RejectionKind::Parabolic) && w == "a";
        parts.push(format!("tol {tol:e}: {:?}/{:?} witness {w:?}", v.kind, v.rejection));
    }
    (ok, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let f2 = Presentation::free(2).unwrap();
    let (x, y, z) = (3.0f64, 3.0f64, 3.0f64);
    let fricke = x * x + y * y + z * z - x * y * z - 2.0;
    let rep = rep_from_traces(c(x, 0.0), c(y, 0.0), c(z, 0.0)).unwrap();
    let comm = rep.eval(f2.parse_word("a b a' b'").unwrap().letters());
    let comm_info = classify(&comm, TOL).unwrap();
    let comm_separable = separable_oracle(2, 4).contains(&class_key(&[0, 2, 1, 3]));
    let classes = enumerate_separable_classes(&f2, 12, 0).unwrap();
    let non_lox: Vec<String> = classes
        .iter()
        .filter(|cl| classify(&rep.eval(cl.letters()), TOL).map(|i| i.class) != Ok(IsometryClass::Loxodromic))
        .map(|cl| cl.display(&f2))
        .collect();
    let v = certify(&rep, &f2, 8, 0, &NestingParams::default(), TOL).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ok = fricke == -2.0
        && comm_info.class == IsometryClass::Parabolic
        && !comm_separable
        && non_lox.is_empty()
        && v.kind == VerdictKind::CertifiedAtDepth
        && secs < 120.0;
    (
        ok,
        format!(
            "Fricke tr[a,b] = {fricke}; numeric {:.3e}{:+.3e}i classified {:?}; commutator separable={comm_separable}; \
             {} separable classes <=12, {} non-loxodromic; verdict {:?}; {secs:.1}s (limit 120s)",
            comm_info.trace.re,
            comm_info.trace.im,
            comm_info.class,
            classes.len(),
            non_lox.len(),
            v.kind
        ),
    )
}

fn random_sl2(rng: &mut ChaCha8Rng) -> MoebiusMap {
    loop {
        let mut e = [c(0.0, 0.0); 4];
        for z in &mut e {
            *z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let det = e[0] * e[3] - e[1] * e[2];
        if det.norm() > 0.25 {
            return MoebiusMap::new(e[0], e[1], e[2], e[3]).unwrap();
        }
    }
}

fn criterion_8() -> Outcome {
    let f2 = Presentation::free(2).unwrap();
    let mats = schottky_matrices();
    let rep = Representation::new(f2.clone(), mats.iter().map(to_moebius).collect(), H3Point::origin()).unwrap();
    let depth = 6;
    let base = score(&rep, &f2, depth, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let mut drift = 0.0f64;
    for _ in 0..100 {
        let g = random_sl2(&mut rng);
        let s = score(&rep.conjugated(&g).unwrap(), &f2, depth, 0).unwrap();
        drift = drift.max((s.min_ratio - base.min_ratio).abs()).max((s.max_ratio - base.max_ratio).abs());
    }

    let (a, b) = (Letter::pos(0), Letter::pos(1));
    let mut exact = 0;
    for swap in [false, true] {
        for (ia, ib) in [(false, false), (true, false), (false, true), (true, true)] {
            let (x, y) = if swap { (b, a) } else { (a, b) };
            let images = vec![vec![Letter::new(x.gen, ia)], vec![Letter::new(y.gen, ib)]];
            let s = score(&rep.precompose(&images).unwrap(), &f2, depth, 0).unwrap();
            if s.min_ratio.to_bits() == base.min_ratio.to_bits() && s.max_ratio.to_bits() == base.max_ratio.to_bits() {
                exact += 1;
            }
        }
    }

    let mut violations = 0;
    for _ in 0..20 {
        let gens = vec![random_sl2(&mut rng), random_sl2(&mut rng)];
        let r = Representation::new(f2.clone(), gens, H3Point::origin()).unwrap();
        let ratios: Vec<f64> = (1..=6).map(|n| score(&r, &f2, n, 0).unwrap().min_ratio).collect();
        violations += ratios.windows(2).filter(|w| w[1] > w[0]).count();
    }
    let ok = drift <= CONJUGATION_DRIFT && exact == 8 && violations == 0;
    (
        ok,
        format!(
            "conjugation drift {drift:.3e} (limit {CONJUGATION_DRIFT:e}) over 100; type-I exact {exact}/8; monotonicity violations {violations} over 20 reps, depths 1..6"
        ),
    )
}

fn criterion_9() -> Outcome {
    let f2 = Presentation::free(2).unwrap();
    let w = default_test_set(&f2).unwrap();
    let r = automorphism_census(&f2, &w, 3.0, 6).unwrap();
    (
        r.count == r.count_extended && !r.partial,
        format!(
            "count at budget 6 = {}, at budget 8 = {}, explored {}, partial={}",
            r.count, r.count_extended, r.explored, r.partial
        ),
    )
}

fn scan_config(dir: &std::path::Path, workers: usize) -> ScanConfig {
    let text = format!(
        r#"{{
            "version": "1",
            "presentation": {{"surface_genera": [], "free_rank": 2}},
            "slice": {{
                "kind": "F2_TRACE",
                "base": {{"x": [2.1, 0], "y": [2.1, 0], "z": [4, 0]}},
                "horizontal": {{"param": "x_re", "min": 2.1, "max": 6, "steps": 100}},
                "vertical": {{"param": "y_re", "min": 2.1, "max": 6, "steps": 100}}
            }},
            "depth": 5,
            "workers": {workers},
            "seed": 10,
            "outputs": {{"csv": "scan.csv", "ppm": "scan.ppm", "metadata": "scan.json"}}
        }}"#
    );
    ScanConfig::from_json(&text, Some(dir)).unwrap()
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg8 = scan_config(dir.path(), 8);
    let start = Instant::now();
    let out = run_scan(&cfg8).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let first = std::fs::read(&cfg8.outputs.csv).unwrap();
    let second = render_csv(&scan_records(&cfg8).unwrap()).into_bytes();
    let single = render_csv(&scan_records(&scan_config(dir.path(), 1)).unwrap()).into_bytes();
    let ppm = std::fs::read(&cfg8.outputs.ppm).unwrap();
    let header = b"P6\n100 100\n255\n";
    let header_ok = ppm.starts_with(header) && ppm.len() == header.len() + 3 * 10_000;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg8.seed);
    let mut mismatched = 0;
    for _ in 0..10 {
        let k = rng.gen_range(0..out.records.len());
        let r = &out.records[k];
        let fresh = certify_cell(&cfg8, r.ix, r.iy).unwrap();
        if fresh.verdict != r.verdict
            || fresh.min_ratio.map(f64::to_bits) != r.min_ratio.map(f64::to_bits)
            || fresh.witness != r.witness
        {
            mismatched += 1;
        }
    }
    let ok = out.records.len() == 10_000
        && first == second
        && first == single
        && header_ok
        && mismatched == 0
        && secs < 600.0;
    let c = out.counts;
    (
        ok,
        format!(
            "{} records ({} certified, {} parabolic, {} elliptic, {} undetermined); rerun identical={}; 1-vs-8 workers identical={}; \
             ppm header ok={header_ok}; {mismatched}/10 spot checks differ from certify; {secs:.1}s (limit 600s)",
            out.records.len(),
            c.certified_at_depth,
            c.rejected_parabolic,
            c.rejected_elliptic,
            c.undetermined,
            first == second,
            first == single
        ),
    )
}

fn main() {
    // libtest flags such as --nocapture or a filter are accepted and ignored
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("separability oracle agreement", criterion_1),
        ("Whitehead lemma consistency", criterion_2),
        ("Cayley-length oracle", criterion_3),
        ("labeled-graph dichotomy", criterion_4),
        ("convex-cocompact certification", criterion_5),
        ("rejection soundness", criterion_6),
        ("boundary-point experiment", criterion_7),
        ("invariance suite", criterion_8),
        ("automorphism census stability", criterion_9),
        ("scan determinism and throughput", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        failed += usize::from(!ok);
        println!("criterion {:>2} {}: {name} — {detail}", i + 1, if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
