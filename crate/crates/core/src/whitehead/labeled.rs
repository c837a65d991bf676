//! Labeled Whitehead graphs of cyclic words in free products with surface factors.
//!
//! The disc system has one disc per handle letter `t_i` (sides `T_i+`, `T_i-`) and, when
//! there are at least two surface factors, one separating disc per surface factor
//! (sides facing the central ball and facing the surface piece). A cyclic word is read
//! as a cyclic sequence of disc crossings; consecutive crossings are joined by an edge
//! labeled by the piece element read in between.
//!
//! Convention: `t` exits `T-` and enters `T+`; `t'` does the reverse.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::free::free_reduce;
use crate::group::{invert, is_trivial, CyclicClass, FactorKind, GroupWord, Letter, Presentation, Shape};

/// Budget on the number of two-sided partitions tried by the strong cutpoint search.
pub const CUTPOINT_PARTITION_BUDGET: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DiscSide {
    /// Side of the disc dual to handle generator `gen`; `plus` is `T+`.
    Handle { gen: u16, plus: bool },
    /// Side of the disc cutting off surface factor `factor`.
    Separating { factor: usize, central_side: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledEdge {
    pub from: usize,
    pub to: usize,
    /// Surface factor whose piece carries the label; `None` for a simply connected piece.
    pub piece: Option<usize>,
    /// Read from `from` to `to`; traversing backwards inverts it.
    pub label: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabeledWhiteheadGraph {
    pub vertices: Vec<DiscSide>,
    pub edges: Vec<LabeledEdge>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LabeledVerdict {
    NotSeparableCertified,
    ConsistentWithSeparable,
}

fn uses_separating_discs(p: &Presentation) -> bool {
    p.surface_genera().len() >= 2
}

fn check_shape(p: &Presentation) -> Result<()> {
    match p.shape() {
        Shape::SmallBody | Shape::LargeBody => Ok(()),
        s => Err(Error::UnsupportedShape(format!(
            "labeled Whitehead graphs need a SMALL_BODY or LARGE_BODY presentation, got {s:?}"
        ))),
    }
}

fn disc_sides(p: &Presentation) -> Vec<DiscSide> {
    let mut v = Vec::new();
    for (fi, f) in p.factors().iter().enumerate() {
        match f.kind {
            FactorKind::Cyclic => {
                v.push(DiscSide::Handle { gen: f.first_gen, plus: true });
                v.push(DiscSide::Handle { gen: f.first_gen, plus: false });
            }
            FactorKind::Surface { .. } if uses_separating_discs(p) => {
                v.push(DiscSide::Separating { factor: fi, central_side: true });
                v.push(DiscSide::Separating { factor: fi, central_side: false });
            }
            FactorKind::Surface { .. } => {}
        }
    }
    v
}

/// The piece a disc side faces, as a surface factor index (`None` = trivial group).
fn piece_of(p: &Presentation, side: DiscSide) -> Option<usize> {
    match side {
        DiscSide::Separating { factor, central_side: false } => Some(factor),
        DiscSide::Separating { .. } => None,
        DiscSide::Handle { .. } => {
            if uses_separating_discs(p) {
                None
            } else {
                p.factors().iter().position(|f| matches!(f.kind, FactorKind::Surface { .. }))
            }
        }
    }
}

impl LabeledWhiteheadGraph {
    /// A graph given directly by its vertices and edges, for experiments and tests.
    pub fn from_parts(vertices: Vec<DiscSide>, edges: Vec<LabeledEdge>) -> Self {
        LabeledWhiteheadGraph {
            vertices,
            edges,
            note: None,
        }
    }

    pub fn vertex_name(&self, p: &Presentation, v: usize) -> String {
        match self.vertices[v] {
            DiscSide::Handle { gen, plus } => {
                format!("{}{}", p.generator_name(gen).to_uppercase(), if plus { "+" } else { "-" })
            }
            DiscSide::Separating { factor, central_side } => {
                format!("D{factor}{}", if central_side { "c" } else { "s" })
            }
        }
    }

    /// Edge-connected components, as lists of edge indices (vertices without
    /// edges are not reported).
    pub fn components(&self) -> Vec<Vec<usize>> {
        edge_components(self.vertices.len(), &self.edges, None)
    }

    /// Replace each label `l` of an edge `(u, v)` by `h_u l h_v⁻¹`.
    pub fn relabel_by_potentials(&self, potentials: &[Vec<Letter>]) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            let mut w = potentials[e.from].clone();
            w.extend_from_slice(e.label.letters());
            w.extend(invert(&potentials[e.to]));
            free_reduce(&mut w);
            e.label = GroupWord(w);
        }
        g
    }

    pub fn to_text(&self, p: &Presentation) -> String {
        let mut s = String::new();
        let names: Vec<String> = (0..self.vertices.len()).map(|v| self.vertex_name(p, v)).collect();
        let _ = writeln!(s, "vertices: {}", names.join(" "));
        for e in &self.edges {
            let label = if e.label.is_empty() {
                "1".to_string()
            } else {
                p.format_word(e.label.letters())
            };
            let _ = writeln!(s, "edge: {} -- {} [{}]", names[e.from], names[e.to], label);
        }
        if let Some(n) = &self.note {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    pub fn to_dot(&self, p: &Presentation) -> String {
        let mut s = String::from("graph labeled_whitehead {\n");
        for v in 0..self.vertices.len() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.vertex_name(p, v));
        }
        for e in &self.edges {
            let label = if e.label.is_empty() {
                "1".to_string()
            } else {
                p.format_word(e.label.letters())
            };
            let _ = writeln!(s, "  v{} -- v{} [label=\"{label}\"];", e.from, e.to);
        }
        s.push_str("}\n");
        s
    }
}

fn edge_components(n: usize, edges: &[LabeledEdge], removed: Option<usize>) -> Vec<Vec<usize>> {
    // union-find over vertices, skipping `removed`
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        if Some(e.from) == removed || Some(e.to) == removed {
            continue;
        }
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        parent[a] = b;
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        let anchor = if Some(e.from) != removed {
            e.from
        } else if Some(e.to) != removed {
            e.to
        } else {
            // self-loop at the removed vertex: its own piece
            groups.push((usize::MAX, vec![i]));
            continue;
        };
        let r = find(&mut parent, anchor);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Build the labeled graph of a cyclic class.
pub fn labeled_whitehead_graph(p: &Presentation, class: &CyclicClass) -> Result<LabeledWhiteheadGraph> {
    check_shape(p)?;
    let vertices = disc_sides(p);
    let index = |s: DiscSide| vertices.iter().position(|&v| v == s).expect("disc side");
    let sep = uses_separating_discs(p);
    let w = class.letters();

    // crossings (exit, enter) and the piece letters read after each crossing
    let mut crossings: Vec<(usize, usize)> = Vec::new();
    let mut after: Vec<Vec<Letter>> = Vec::new();
    let mut before_first: Vec<Letter> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let l = w[i];
        let fi = p.factor_of(l);
        let f = p.factor(fi);
        match f.kind {
            FactorKind::Cyclic => {
                let (exit, enter) = (
                    DiscSide::Handle { gen: l.gen, plus: l.inv },
                    DiscSide::Handle { gen: l.gen, plus: !l.inv },
                );
                crossings.push((index(exit), index(enter)));
                after.push(Vec::new());
                i += 1;
            }
            FactorKind::Surface { .. } if sep => {
                let mut j = i;
                while j < w.len() && f.contains(w[j]) {
                    j += 1;
                }
                let central = index(DiscSide::Separating { factor: fi, central_side: true });
                let inner = index(DiscSide::Separating { factor: fi, central_side: false });
                crossings.push((central, inner));
                after.push(w[i..j].to_vec());
                crossings.push((inner, central));
                after.push(Vec::new());
                i = j;
            }
            FactorKind::Surface { .. } => {
                match after.last_mut() {
                    Some(a) => a.push(l),
                    None => before_first.push(l),
                }
                i += 1;
            }
        }
    }
    if crossings.is_empty() {
        return Ok(LabeledWhiteheadGraph {
            vertices,
            edges: Vec::new(),
            note: Some("no crossings: w lies in a complementary piece".into()),
        });
    }
    // the letters before the first crossing continue the label after the last one
    after.last_mut().unwrap().extend(before_first);
    let c = crossings.len();
    let edges = (0..c)
        .map(|k| {
            let from = crossings[k].1;
            let to = crossings[(k + 1) % c].0;
            LabeledEdge {
                from,
                to,
                piece: piece_of(p, vertices[from]),
                label: GroupWord(after[k].clone()),
            }
        })
        .collect();
    Ok(LabeledWhiteheadGraph {
        vertices,
        edges,
        note: None,
    })
}

/// Strong connectivity of the component made of the given edges: some cycle carries
/// a nontrivial label. Only fundamental cycles of a spanning tree need checking.
fn component_strongly_connected(p: &Presentation, g: &LabeledWhiteheadGraph, edges: &[usize]) -> Result<bool> {
    let n = g.vertices.len();
    let mut potential: Vec<Option<Vec<Letter>>> = vec![None; n];
    let mut tree = vec![false; g.edges.len()];
    let Some(&first) = edges.first() else { return Ok(false) };
    potential[g.edges[first].from] = Some(Vec::new());
    // grow the tree until no edge attaches a new vertex
    loop {
        let mut grew = false;
        for &i in edges {
            let e = &g.edges[i];
            match (&potential[e.from], &potential[e.to]) {
                (Some(h), None) => {
                    let mut w = h.clone();
                    w.extend_from_slice(e.label.letters());
                    free_reduce(&mut w);
                    potential[e.to] = Some(w);
                    tree[i] = true;
                    grew = true;
                }
                (None, Some(h)) => {
                    let mut w = h.clone();
                    w.extend(invert(e.label.letters()));
                    free_reduce(&mut w);
                    potential[e.from] = Some(w);
                    tree[i] = true;
                    grew = true;
                }
                _ => {}
            }
        }
        if !grew {
            break;
        }
    }
    for &i in edges {
        if tree[i] {
            continue;
        }
        let e = &g.edges[i];
        let mut cycle = potential[e.from].clone().unwrap_or_default();
        cycle.extend_from_slice(e.label.letters());
        cycle.extend(invert(potential[e.to].as_deref().unwrap_or_default()));
        free_reduce(&mut cycle);
        if !cycle.is_empty() && !is_trivial(p, &GroupWord(cycle))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Strong connectivity of each connected component, in [`LabeledWhiteheadGraph::components`] order.
pub fn is_strongly_connected(g: &LabeledWhiteheadGraph, p: &Presentation) -> Result<Vec<bool>> {
    g.components()
        .iter()
        .map(|c| component_strongly_connected(p, g, c))
        .collect()
}

/// A vertex `v` splitting some component as `G₁ ∪ G₂` with `G₁ ∩ G₂ = {v}`, both
/// sides carrying an edge and at least one side not strongly connected.
pub fn has_strong_cutpoint(g: &LabeledWhiteheadGraph, p: &Presentation) -> Result<Option<usize>> {
    let mut tried: u64 = 0;
    for v in 0..g.vertices.len() {
        let pieces: Vec<Vec<usize>> = edge_components(g.vertices.len(), &g.edges, Some(v))
            .into_iter()
            .filter(|piece| piece.iter().any(|&i| g.edges[i].from == v || g.edges[i].to == v))
            .collect();
        if pieces.len() < 2 {
            continue;
        }
        if pieces.len() >= 64 {
            return Err(Error::undetermined("too many pieces at a vertex for the cutpoint search"));
        }
        let k = pieces.len();
        // fix the first piece on side one to skip mirrored partitions
        for mask in 0..(1u64 << (k - 1)) {
            let side_two = mask << 1;
            if side_two == 0 {
                continue;
            }
            tried += 1;
            if tried > CUTPOINT_PARTITION_BUDGET {
                return Err(Error::undetermined(format!(
                    "strong cutpoint search exceeds {CUTPOINT_PARTITION_BUDGET} partitions"
                )));
            }
            let (mut one, mut two) = (Vec::new(), Vec::new());
            for (j, piece) in pieces.iter().enumerate() {
                if side_two >> j & 1 == 1 {
                    two.extend_from_slice(piece);
                } else {
                    one.extend_from_slice(piece);
                }
            }
            if !component_strongly_connected(p, g, &one)? || !component_strongly_connected(p, g, &two)? {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

/// Necessary-condition filter: a separable class has a graph with a component that is
/// not strongly connected or that has a strong cutpoint.
pub fn classify_labeled(p: &Presentation, class: &CyclicClass) -> Result<LabeledVerdict> {
    let g = labeled_whitehead_graph(p, class)?;
    classify_graph(&g, p)
}

pub fn classify_graph(g: &LabeledWhiteheadGraph, p: &Presentation) -> Result<LabeledVerdict> {
    if g.edges.is_empty() {
        return Ok(LabeledVerdict::ConsistentWithSeparable);
    }
    let all_strong = is_strongly_connected(g, p)?.into_iter().all(|s| s);
    if all_strong && has_strong_cutpoint(g, p)?.is_none() {
        Ok(LabeledVerdict::NotSeparableCertified)
    } else {
        Ok(LabeledVerdict::ConsistentWithSeparable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic_class;
    use proptest::prelude::*;

    fn small() -> Presentation {
        Presentation::new(vec![2], 1).unwrap()
    }

    fn graph(p: &Presentation, w: &str) -> LabeledWhiteheadGraph {
        let c = cyclic_class(p, &p.parse_word(w).unwrap()).unwrap();
        labeled_whitehead_graph(p, &c).unwrap()
    }

    #[test]
    fn single_crossing() {
        let p = small();
        let g = graph(&p, "t1");
        assert_eq!(g.edges.len(), 1);
        let e = &g.edges[0];
        assert_ne!(e.from, e.to);
        assert!(e.label.is_empty());
        assert_eq!(is_strongly_connected(&g, &p).unwrap(), [false]);
        assert_eq!(classify_graph(&g, &p).unwrap(), LabeledVerdict::ConsistentWithSeparable);
    }

    #[test]
    fn handle_times_generator() {
        let p = small();
        let g = graph(&p, "t1 a1");
        assert_eq!(g.edges.len(), 1);
        assert_eq!(p.format_word(g.edges[0].label.letters()), "a1");
        // a single edge between two distinct disc sides closes no cycle
        assert_eq!(is_strongly_connected(&g, &p).unwrap(), [false]);
        assert_eq!(has_strong_cutpoint(&g, &p).unwrap(), None);
    }

    #[test]
    fn two_crossings_golden() {
        let p = small();
        let g = graph(&p, "t1 a1 t1' b1");
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 2);
        let mut labels: Vec<String> = g.edges.iter().map(|e| p.format_word(e.label.letters())).collect();
        labels.sort();
        assert_eq!(labels, ["a1", "b1"]);
        // each label sits on a loop at one side of the disc
        assert!(g.edges.iter().all(|e| e.from == e.to));
        assert_eq!(is_strongly_connected(&g, &p).unwrap(), [true, true]);
        assert_eq!(has_strong_cutpoint(&g, &p).unwrap(), None);
        assert_eq!(classify_graph(&g, &p).unwrap(), LabeledVerdict::NotSeparableCertified);
    }

    #[test]
    fn surface_word_has_no_crossings() {
        let p = small();
        let g = graph(&p, "a1 b1");
        assert!(g.edges.is_empty());
        assert!(g.note.is_some());
        assert_eq!(classify_graph(&g, &p).unwrap(), LabeledVerdict::ConsistentWithSeparable);
    }

    #[test]
    fn identity_side_gives_cutpoint() {
        let p = small();
        let a1 = p.parse_word("a1").unwrap();
        let sides = vec![
            DiscSide::Handle { gen: 4, plus: true },
            DiscSide::Handle { gen: 4, plus: false },
        ];
        let edge = |label: GroupWord| LabeledEdge {
            from: 0,
            to: 0,
            piece: Some(0),
            label,
        };
        let g = LabeledWhiteheadGraph::from_parts(sides, vec![edge(a1), edge(GroupWord::identity())]);
        assert_eq!(has_strong_cutpoint(&g, &p).unwrap(), Some(0));
    }

    #[test]
    fn separating_discs_in_large_body() {
        let p = Presentation::new(vec![2, 2], 1).unwrap();
        let g = graph(&p, "a1 a1_2");
        // two surface syllables, two crossings each
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.vertices.len(), 6);
    }

    #[test]
    fn shape_checked() {
        let f2 = Presentation::free(2).unwrap();
        let c = cyclic_class(&f2, &f2.parse_word("a").unwrap()).unwrap();
        assert!(labeled_whitehead_graph(&f2, &c).is_err());
    }

    proptest! {
        #[test]
        fn potentials_preserve_verdicts(
            word in prop::collection::vec((0u16..5, any::<bool>()), 1..10),
            pots in prop::collection::vec(prop::collection::vec((0u16..4, any::<bool>()), 0..4), 20),
        ) {
            let p = small();
            let w = GroupWord(word.into_iter().map(|(g, i)| Letter::new(g, i)).collect());
            let Ok(c) = cyclic_class(&p, &w) else { return Ok(()) };
            let g = labeled_whitehead_graph(&p, &c).unwrap();
            let strong = is_strongly_connected(&g, &p).unwrap();
            let cut = has_strong_cutpoint(&g, &p).unwrap();
            for chunk in pots.chunks(2) {
                let h: Vec<Vec<Letter>> = chunk
                    .iter()
                    .map(|v| v.iter().map(|&(g, i)| Letter::new(g, i)).collect())
                    .collect();
                let r = g.relabel_by_potentials(&h);
                prop_assert_eq!(&is_strongly_connected(&r, &p).unwrap(), &strong);
                prop_assert_eq!(has_strong_cutpoint(&r, &p).unwrap(), cut);
            }
        }
    }
}
