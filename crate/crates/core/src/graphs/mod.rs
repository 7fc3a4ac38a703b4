//! φ³ Feynman graphs.
//!
//! A graph is a list of typed vertices and a list of edges. Half-edges are
//! implicit: edge `e` owns half-edges `2e` and `2e+1`. Legs (external points
//! and sources) are univalent vertices, so a self-loop, a parallel edge and a
//! leg are all ordinary edges.

pub mod analysis;
pub mod canon;
pub mod generate;
pub mod io;
pub mod named;

use std::fmt;

use crate::error::{Error, Result};

pub use analysis::{
    contract, contract_with_map, divergent_subgraphs, divergent_subgraph_families, extract_subgraph, insert_subgraph,
    DivergentSubgraph, FamilyMember, SubgraphFamily,
};
pub use canon::{canonical_form, sym_factor, CanonicalForm};
pub use generate::{generate_graphs, GenSpec, GraphClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    /// Trivalent interaction vertex.
    Internal,
    /// Bivalent counterterm vertex carrying the Taylor order `r ∈ {0, 2}`.
    Cross(u8),
    /// Univalent source `J`.
    Source,
    /// Univalent external point, optionally carrying a momentum/position label.
    External(Option<u32>),
}

impl VertexKind {
    pub fn valence(self) -> usize {
        match self {
            VertexKind::Internal => 3,
            VertexKind::Cross(_) => 2,
            VertexKind::Source | VertexKind::External(_) => 1,
        }
    }

    /// Legs are the univalent vertices.
    pub fn is_leg(self) -> bool {
        matches!(self, VertexKind::Source | VertexKind::External(_))
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::Internal => write!(f, "i"),
            VertexKind::Cross(r) => write!(f, "c{r}"),
            VertexKind::Source => write!(f, "s"),
            VertexKind::External(None) => write!(f, "e"),
            VertexKind::External(Some(l)) => write!(f, "e{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeynmanGraph {
    kinds: Vec<VertexKind>,
    edges: Vec<[usize; 2]>,
}

/// Counting data of a connected graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphStats {
    /// Legs: external points plus sources.
    pub e: usize,
    /// Edges joining two non-leg vertices.
    pub i: usize,
    /// Trivalent vertices.
    pub v: usize,
    /// Cycle rank.
    pub l: usize,
    pub omega: i64,
}

impl FeynmanGraph {
    /// Validates valences and cross labels.
    pub fn new(kinds: Vec<VertexKind>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let mut deg = vec![0usize; kinds.len()];
        for &[a, b] in &edges {
            if a >= kinds.len() || b >= kinds.len() {
                return Err(Error::InvalidGraph(format!("edge {a}-{b} references a missing vertex")));
            }
            deg[a] += 1;
            deg[b] += 1;
        }
        for (v, k) in kinds.iter().enumerate() {
            if let VertexKind::Cross(r) = k {
                if *r != 0 && *r != 2 {
                    return Err(Error::InvalidGraph(format!("cross label {r} is not 0 or 2")));
                }
            }
            if deg[v] != k.valence() {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} of kind {k} has {} half-edges, needs {}",
                    deg[v],
                    k.valence()
                )));
            }
        }
        let mut labels: Vec<u32> = kinds
            .iter()
            .filter_map(|k| if let VertexKind::External(Some(l)) = k { Some(*l) } else { None })
            .collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph("external labels must be distinct".into()));
        }
        Ok(FeynmanGraph { kinds, edges })
    }

    pub(crate) fn from_parts_unchecked(kinds: Vec<VertexKind>, edges: Vec<[usize; 2]>) -> Self {
        FeynmanGraph { kinds, edges }
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex owning half-edge `h`.
    pub fn half_edge_vertex(&self, h: usize) -> usize {
        self.edges[h / 2][h % 2]
    }

    /// The other half of half-edge `h`.
    pub fn partner(h: usize) -> usize {
        h ^ 1
    }

    /// Half-edges owned by each vertex, in edge order.
    pub fn half_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.kinds.len()];
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            out[a].push(2 * e);
            out[b].push(2 * e + 1);
        }
        out
    }

    /// Edge indices incident to each vertex (self-loops listed twice).
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.kinds.len()];
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            out[a].push(e);
            out[b].push(e);
        }
        out
    }

    pub fn legs(&self) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&v| self.kinds[v].is_leg()).collect()
    }

    pub fn non_leg_vertices(&self) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&v| !self.kinds[v].is_leg()).collect()
    }

    pub fn internal_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == VertexKind::Internal).count()
    }

    pub fn cross_count(&self) -> usize {
        self.kinds.iter().filter(|k| matches!(k, VertexKind::Cross(_))).count()
    }

    pub fn source_count(&self) -> usize {
        self.kinds.iter().filter(|k| **k == VertexKind::Source).count()
    }

    pub fn leg_count(&self) -> usize {
        self.kinds.iter().filter(|k| k.is_leg()).count()
    }

    /// Edges whose both ends are non-leg vertices.
    pub fn inner_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.kinds[self.edges[e][0]].is_leg() && !self.kinds[self.edges[e][1]].is_leg())
            .collect()
    }

    pub fn components(&self) -> usize {
        let n = self.kinds.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut comps = n;
        for &[a, b] in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.kinds.is_empty() || self.components() == 1
    }

    /// Cycle rank `#edges - #vertices + #components`.
    pub fn loops(&self) -> usize {
        self.edges.len() + self.components() - self.kinds.len()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.loops() == 0
    }

    /// Edges whose removal disconnects the graph.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.kinds.len();
        let inc = self.incidence();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = Vec::new();
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // Iterative DFS; the parent edge (not vertex) is skipped so parallel edges count as cycles.
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < inc[v].len() {
                    let e = inc[v][*idx];
                    *idx += 1;
                    if e == pe {
                        continue;
                    }
                    let [a, b] = self.edges[e];
                    let w = if a == v { b } else { a };
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(u, _, _)) = stack.last() {
                        low[u] = low[u].min(low[v]);
                        if low[v] > disc[u] {
                            out.push(pe);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Connected, with at least one non-leg vertex, and no inner edge is a bridge.
    pub fn is_1pi(&self) -> Result<bool> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.non_leg_vertices().is_empty() {
            return Ok(false);
        }
        let inner = self.inner_edges();
        Ok(!self.bridges().iter().any(|e| inner.contains(e)))
    }

    /// Counting data; the superficial degree is `ω = D·L − 2I`.
    ///
    /// Rejects disconnected and crossed graphs. For `V ≥ 1` the φ³ relations
    /// `3V = E + 2I` and `ω = D + (D−6)/2·V − (D−2)/2·E` are verified as well.
    pub fn stats(&self, d: i64) -> Result<GraphStats> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.cross_count() > 0 {
            return Err(Error::InvalidGraph("the superficial degree is defined here for cross-free graphs".into()));
        }
        let s = self.counts(d);
        if s.v >= 1 {
            if 3 * s.v != s.e + 2 * s.i {
                return Err(Error::Computation("3V = E + 2I violated".into()));
            }
            let v = s.v as i64;
            let e = s.e as i64;
            if 2 * s.omega != 2 * d + (d - 6) * v - (d - 2) * e {
                return Err(Error::Computation("superficial degree formulas disagree".into()));
            }
        }
        Ok(s)
    }

    /// Superficial degree by mass-dimension counting, valid with crosses:
    /// `ω = D·L − 2I + 2·#crosses`. For cross-free graphs this is `D·L − 2I`.
    pub fn omega(&self, d: i64) -> i64 {
        self.counts(d).omega
    }

    fn counts(&self, d: i64) -> GraphStats {
        let i = self.inner_edges().len();
        let l = self.loops();
        GraphStats {
            e: self.leg_count(),
            i,
            v: self.internal_count(),
            l,
            omega: d * l as i64 - 2 * i as i64 + 2 * self.cross_count() as i64,
        }
    }

    /// Replaces every external label by `None`.
    pub fn unlabeled(&self) -> FeynmanGraph {
        let kinds = self
            .kinds
            .iter()
            .map(|k| if let VertexKind::External(_) = k { VertexKind::External(None) } else { *k })
            .collect();
        FeynmanGraph { kinds, edges: self.edges.clone() }
    }

    /// Labels the external points `1..=k` in vertex order.
    pub fn with_labeled_externals(&self) -> FeynmanGraph {
        let mut next = 0;
        let kinds = self
            .kinds
            .iter()
            .map(|k| {
                if let VertexKind::External(_) = k {
                    next += 1;
                    VertexKind::External(Some(next))
                } else {
                    *k
                }
            })
            .collect();
        FeynmanGraph { kinds, edges: self.edges.clone() }
    }

    /// Relabels vertices by `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> FeynmanGraph {
        let mut kinds = vec![VertexKind::Internal; self.kinds.len()];
        for (old, &new) in perm.iter().enumerate() {
            kinds[new] = self.kinds[old];
        }
        let edges = self.edges.iter().map(|&[a, b]| [perm[a], perm[b]]).collect();
        FeynmanGraph { kinds, edges }
    }

    /// Vertex adjacent to a leg.
    pub fn leg_anchor(&self, leg: usize) -> usize {
        let e = self.edges.iter().find(|e| e[0] == leg || e[1] == leg).expect("legs have one edge");
        if e[0] == leg {
            e[1]
        } else {
            e[0]
        }
    }
}

impl fmt::Display for FeynmanGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", canonical_form(self).encoding)
    }
}

#[cfg(test)]
mod tests {
    use super::named;

    #[test]
    fn counts_of_named_graphs() {
        let se = named::oneloop_se();
        assert_eq!(se.stats(4).unwrap().omega, 0);
        assert_eq!(se.stats(6).unwrap().omega, 2);
        assert_eq!(named::triangle().stats(6).unwrap().omega, 0);
        assert_eq!(named::rung_bubble().stats(4).unwrap().omega, -4);
        assert!(se.is_1pi().unwrap());
        assert!(!named::free_propagator().is_1pi().unwrap());
        assert!(!named::two_bubbles().is_1pi().unwrap());
    }
}
