//! Plain free-group word operations, shared by the handlebody fast paths.

use super::Letter;

/// Free reduction in place.
pub fn free_reduce(w: &mut Vec<Letter>) {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

pub fn freely_reduced(w: &[Letter]) -> Vec<Letter> {
    let mut v = w.to_vec();
    free_reduce(&mut v);
    v
}

/// Free and cyclic reduction.
pub fn cyclically_reduced(w: &[Letter]) -> Vec<Letter> {
    let v = freely_reduced(w);
    let mut lo = 0;
    let mut hi = v.len();
    while hi - lo >= 2 && v[lo] == v[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    v[lo..hi].to_vec()
}

/// Lexicographically least rotation (Booth's algorithm would do; words here are short).
pub fn least_rotation(w: &[Letter]) -> Vec<Letter> {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for start in 1..n {
        for k in 0..n {
            let a = w[(start + k) % n];
            let b = w[(best + k) % n];
            if a != b {
                if a < b {
                    best = start;
                }
                break;
            }
        }
    }
    let mut out = w[best..].to_vec();
    out.extend_from_slice(&w[..best]);
    out
}

/// Canonical representative of the conjugacy class of `w` and `w⁻¹` in a free group.
pub fn canonical_cyclic(w: &[Letter]) -> Vec<Letter> {
    let c = cyclically_reduced(w);
    let a = least_rotation(&c);
    let b = least_rotation(&super::invert(&c));
    a.min(b)
}

/// Whether `w` (already cyclically reduced) equals its canonical form.
pub fn is_canonical_cyclic(w: &[Letter]) -> bool {
    let n = w.len();
    let inv = super::invert(w);
    for start in 0..n {
        for cand in [w, inv.as_slice()] {
            for k in 0..n {
                let a = cand[(start + k) % n];
                let b = w[k];
                if a != b {
                    if a < b {
                        return false;
                    }
                    break;
                }
            }
        }
    }
    true
}

/// Smallest `d` such that `w` is the `n/d`-th power of its length-`d` prefix.
pub fn primitive_root_len(w: &[Letter]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}
