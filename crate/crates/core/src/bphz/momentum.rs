//! Integer momentum combinations and spanning-tree routing.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{divergent_subgraphs, FeynmanGraph, VertexKind};

/// Integer combination `Σ aᵢ qᵢ + Σ bⱼ pⱼ` of loop and external momenta.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Momentum {
    pub loops: Vec<i64>,
    pub ext: Vec<i64>,
}

impl Momentum {
    pub fn zero(loops: usize, ext: usize) -> Self {
        Momentum { loops: vec![0; loops], ext: vec![0; ext] }
    }

    pub fn loop_var(i: usize, loops: usize, ext: usize) -> Self {
        let mut m = Self::zero(loops, ext);
        m.loops[i] = 1;
        m
    }

    pub fn ext_var(j: usize, loops: usize, ext: usize) -> Self {
        let mut m = Self::zero(loops, ext);
        m.ext[j] = 1;
        m
    }

    pub fn is_zero(&self) -> bool {
        self.loops.iter().chain(&self.ext).all(|&c| c == 0)
    }

    pub fn has_loops(&self) -> bool {
        self.loops.iter().any(|&c| c != 0)
    }

    pub fn has_ext(&self) -> bool {
        self.ext.iter().any(|&c| c != 0)
    }

    pub fn loop_part(&self) -> Momentum {
        Momentum { loops: self.loops.clone(), ext: vec![0; self.ext.len()] }
    }

    pub fn ext_part(&self) -> Momentum {
        Momentum { loops: vec![0; self.loops.len()], ext: self.ext.clone() }
    }

    pub fn add(&self, o: &Momentum) -> Momentum {
        Momentum {
            loops: self.loops.iter().zip(&o.loops).map(|(a, b)| a + b).collect(),
            ext: self.ext.iter().zip(&o.ext).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Momentum {
        Momentum { loops: self.loops.iter().map(|a| -a).collect(), ext: self.ext.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, o: &Momentum) -> Momentum {
        self.add(&o.neg())
    }

    /// Sign making the first non-zero coefficient positive, and the normalized momentum.
    pub fn normalized(&self) -> (i64, Momentum) {
        match self.loops.iter().chain(&self.ext).find(|&&c| c != 0) {
            Some(&c) if c < 0 => (-1, self.neg()),
            _ => (1, self.clone()),
        }
    }

    /// Renames loop `i` to `map[i]` in a space of `loops` loop momenta.
    pub fn relabel_loops(&self, map: &[usize], loops: usize) -> Momentum {
        let mut out = vec![0; loops];
        for (i, &c) in self.loops.iter().enumerate() {
            out[map[i]] += c;
        }
        Momentum { loops: out, ext: self.ext.clone() }
    }

    /// Same coefficients in a space with `ext` external momenta (padded or truncated).
    pub fn with_ext_len(&self, ext: usize) -> Momentum {
        let mut e = self.ext.clone();
        e.resize(ext, 0);
        Momentum { loops: self.loops.clone(), ext: e }
    }
}

impl fmt::Display for Momentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let parts = self
            .loops
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, format!("q{}", i + 1)))
            .chain(self.ext.iter().enumerate().map(|(j, &c)| (c, format!("p{}", j + 1))));
        for (c, name) in parts {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{mag}{name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Momentum assignment of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomentumRouting {
    pub loops: usize,
    /// Independent external momenta: one less than the number of external points.
    pub externals: usize,
    /// Momentum of edge `e`, flowing from `edges[e][0]` to `edges[e][1]`.
    pub edges: Vec<Momentum>,
    /// Momentum entering at each vertex; non-zero only at external points.
    pub inflow: Vec<Momentum>,
    /// Edges carrying a bare loop momentum.
    pub chords: Vec<usize>,
}

impl MomentumRouting {
    /// Exact signed momentum balance at every vertex.
    pub fn check_conservation(&self, g: &FeynmanGraph) -> Result<()> {
        let mut net = self.inflow.clone();
        for (e, &[a, b]) in g.edges().iter().enumerate() {
            net[a] = net[a].sub(&self.edges[e]);
            net[b] = net[b].add(&self.edges[e]);
        }
        match net.iter().position(|m| !m.is_zero()) {
            None => Ok(()),
            Some(v) => Err(Error::Computation(format!("momentum is not conserved at vertex {v}: {}", net[v]))),
        }
    }
}

/// External points in momentum order: by label when every point is labeled, else by vertex index.
pub fn external_order(g: &FeynmanGraph) -> Vec<usize> {
    let mut ext: Vec<(Option<u32>, usize)> = (0..g.vertex_count())
        .filter_map(|v| if let VertexKind::External(l) = g.kind(v) { Some((l, v)) } else { None })
        .collect();
    if ext.iter().all(|(l, _)| l.is_some()) {
        ext.sort();
    }
    ext.into_iter().map(|(_, v)| v).collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Spanning-tree routing with conservation checked.
///
/// The tree is grown greedily over edges ordered by the size of the smallest
/// divergent subgraph (in six dimensions) containing the edge, then by edge
/// index, so each such subgraph's loops are carried by its own chords. Chord
/// `j` (in edge order) carries `q_{j+1}`; external point `i` injects `p_i`,
/// and the last one injects `−Σ pᵢ`.
pub fn route_momenta(g: &FeynmanGraph) -> Result<MomentumRouting> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.source_count() > 0 {
        return Err(Error::InvalidGraph("momentum routing needs a graph without sources".into()));
    }
    let n = g.vertex_count();
    let loops = g.loops();
    let ext_points = external_order(g);
    let nx = ext_points.len().saturating_sub(1);
    let mut inflow = vec![Momentum::zero(loops, nx); n];
    for (i, &v) in ext_points.iter().enumerate() {
        if i < nx {
            inflow[v] = Momentum::ext_var(i, loops, nx);
        } else {
            let mut m = Momentum::zero(loops, nx);
            for j in 0..nx {
                m.ext[j] = -1;
            }
            inflow[v] = m;
        }
    }

    let mut rank = vec![usize::MAX; g.edge_count()];
    if let Ok(subs) = divergent_subgraphs(g, 6) {
        for s in &subs {
            for (e, &[a, b]) in g.edges().iter().enumerate() {
                if s.vertices.contains(&a) && s.vertices.contains(&b) {
                    rank[e] = rank[e].min(s.vertices.len());
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| (rank[e], e));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut in_tree = vec![false; g.edge_count()];
    for &e in &order {
        let [a, b] = g.edges()[e];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            in_tree[e] = true;
        }
    }
    let chords: Vec<usize> = (0..g.edge_count()).filter(|&e| !in_tree[e]).collect();
    debug_assert_eq!(chords.len(), loops);

    let mut edges = vec![Momentum::zero(loops, nx); g.edge_count()];
    let mut net = inflow.clone();
    for (j, &e) in chords.iter().enumerate() {
        let q = Momentum::loop_var(j, loops, nx);
        let [a, b] = g.edges()[e];
        net[a] = net[a].sub(&q);
        net[b] = net[b].add(&q);
        edges[e] = q;
    }
    // Root the tree at the last external point and push subtree totals upward.
    let root = ext_points.last().copied().unwrap_or(0);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        if in_tree[e] {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
    }
    let mut visit = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut up: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut i = 0;
    while i < visit.len() {
        let v = visit[i];
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                up[w] = Some((v, e));
                visit.push(w);
            }
        }
        i += 1;
    }
    for &v in visit.iter().rev() {
        if let Some((p, e)) = up[v] {
            let flow = net[v].clone();
            net[p] = net[p].add(&flow);
            edges[e] = if g.edges()[e] == [v, p] { flow } else { flow.neg() };
        }
    }
    let routing = MomentumRouting { loops, externals: nx, edges, inflow, chords };
    routing.check_conservation(g)?;
    Ok(routing)
}
