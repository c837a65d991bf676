use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{CyclicClass, Letter, Presentation, Shape};

/// Classical Whitehead graph of a cyclic word in a free group of rank `n`.
///
/// Vertices are the letter codes `0..2n` (`x_i ↦ 2i`, `x_i⁻¹ ↦ 2i+1`); each cyclic
/// two-letter substring `xy` contributes an edge `{x, y⁻¹}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiteheadGraph {
    rank: usize,
    edges: Vec<(usize, usize)>,
}

impl WhiteheadGraph {
    pub fn from_cyclic_word(rank: usize, w: &[Letter]) -> Self {
        let k = w.len();
        let mut edges: Vec<(usize, usize)> = (0..k)
            .map(|i| {
                let x = w[i].code();
                let y = w[(i + 1) % k].inverse().code();
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        WhiteheadGraph { rank, edges }
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.rank
    }

    /// Sorted edge multiset.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn used_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter_map(|(v, &d)| (d > 0).then_some(v))
            .collect()
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter_map(|(v, &d)| (d == 0).then_some(v))
            .collect()
    }

    /// Number of components among used vertices, ignoring `removed`.
    fn components_without(&self, removed: Option<usize>) -> usize {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            if Some(u) == removed || Some(v) == removed {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let used = self.used_vertices();
        let mut seen = vec![false; n];
        let mut count = 0;
        for &s in &used {
            if Some(s) == removed || seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Connectivity of the subgraph on vertices with at least one edge.
    pub fn is_connected(&self) -> bool {
        self.components_without(None) <= 1
    }

    /// Connected with no isolated vertex: the hypothesis of Whitehead's lemma.
    pub fn is_fully_connected(&self) -> bool {
        self.isolated_vertices().is_empty() && self.is_connected()
    }

    /// Used vertices whose removal disconnects the remaining used vertices.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let base = self.components_without(None);
        self.used_vertices()
            .into_iter()
            .filter(|&v| self.components_without(Some(v)) > base)
            .collect()
    }

    pub fn vertex_name(&self, p: &Presentation, v: usize) -> String {
        p.format_word(&[Letter::from_code(v)])
    }

    pub fn to_text(&self, p: &Presentation) -> String {
        let mut s = String::new();
        let names: Vec<String> = (0..self.vertex_count()).map(|v| self.vertex_name(p, v)).collect();
        let _ = writeln!(s, "vertices: {}", names.join(" "));
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "edge: {} -- {}", names[u], names[v]);
        }
        let iso: Vec<&str> = self.isolated_vertices().iter().map(|&v| names[v].as_str()).collect();
        let _ = writeln!(s, "isolated: {}", iso.join(" "));
        let _ = writeln!(s, "connected: {}", self.is_connected());
        let cuts: Vec<&str> = self.cut_vertices().iter().map(|&v| names[v].as_str()).collect();
        let _ = writeln!(s, "cut vertices: {}", cuts.join(" "));
        s
    }

    pub fn to_dot(&self, p: &Presentation) -> String {
        let mut s = String::from("graph whitehead {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.vertex_name(p, v));
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  v{u} -- v{v};");
        }
        s.push_str("}\n");
        s
    }
}

/// Whitehead graph of a cyclic class over a free presentation.
pub fn whitehead_graph(p: &Presentation, class: &CyclicClass) -> Result<WhiteheadGraph> {
    if p.shape() != Shape::Handlebody {
        return Err(Error::UnsupportedShape(
            "classical Whitehead graphs need a free presentation; use labeled_whitehead_graph".into(),
        ));
    }
    Ok(WhiteheadGraph::from_cyclic_word(p.free_rank(), class.letters()))
}
