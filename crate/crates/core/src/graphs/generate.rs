//! Exhaustive generation of φ³ graphs up to isomorphism.
//!
//! Graphs are grown one edge at a time from a root leg. Every partial graph is
//! reduced to canonical form (with the number of free half-edges of each vertex
//! as part of its colour), so each isomorphism class of partial graphs is
//! expanded once. The next edge always starts at the first unsaturated vertex in
//! canonical order; any fixed choice is complete because a missing edge of that
//! vertex can always be added next.

use std::collections::{BTreeMap, HashSet};

use super::canon::canonicalize;
use super::{canonical_form, FeynmanGraph, VertexKind};
use crate::error::{Error, Result};

/// Default cap on the number of trivalent vertices.
pub const HARD_VERTEX_LIMIT: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphClass {
    Trees,
    Connected,
    OnePi,
}

impl std::str::FromStr for GraphClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trees" => Ok(GraphClass::Trees),
            "connected" => Ok(GraphClass::Connected),
            "onepi" | "1pi" => Ok(GraphClass::OnePi),
            _ => Err(Error::InvalidArgument(format!("unknown graph class {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    /// Number of external points.
    pub externals: usize,
    /// Whether the external points carry distinct labels `1..=externals`.
    pub labeled: bool,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub class: GraphClass,
    /// Allow any number of source leaves.
    pub sources: bool,
    pub max_loops: Option<usize>,
    pub vertex_limit: usize,
}

impl GenSpec {
    pub fn new(externals: usize, max_vertices: usize, class: GraphClass) -> Self {
        GenSpec {
            externals,
            labeled: true,
            min_vertices: 0,
            max_vertices,
            class,
            sources: false,
            max_loops: None,
            vertex_limit: HARD_VERTEX_LIMIT,
        }
    }
}

fn kind_code(k: VertexKind) -> u32 {
    match k {
        VertexKind::Internal => 0,
        VertexKind::Cross(r) => 1 + r as u32,
        VertexKind::Source => 10,
        VertexKind::External(None) => 11,
        VertexKind::External(Some(l)) => 20 + l,
    }
}

#[derive(Clone)]
struct Partial {
    kinds: Vec<VertexKind>,
    free: Vec<u8>,
    adj: Vec<Vec<u8>>,
    edges: usize,
}

impl Partial {
    fn add_vertex(&mut self, k: VertexKind) -> usize {
        let n = self.kinds.len();
        self.kinds.push(k);
        self.free.push(k.valence() as u8);
        for row in &mut self.adj {
            row.push(0);
        }
        self.adj.push(vec![0; n + 1]);
        n
    }

    fn add_edge(&mut self, a: usize, b: usize) {
        self.free[a] -= 1;
        self.free[b] -= 1;
        self.adj[a][b] += 1;
        if a != b {
            self.adj[b][a] += 1;
        }
        self.edges += 1;
    }

    fn cycle_rank(&self) -> usize {
        self.edges + 1 - self.kinds.len()
    }

    fn count(&self, k: VertexKind) -> usize {
        self.kinds.iter().filter(|&&x| x == k).count()
    }

    /// Relabels into canonical order and returns the dedupe key.
    fn canonical(self) -> (Vec<u32>, Partial) {
        let raw: Vec<(u32, u8)> = self.kinds.iter().zip(&self.free).map(|(&k, &f)| (kind_code(k), f)).collect();
        let mut distinct = raw.clone();
        distinct.sort();
        distinct.dedup();
        let colours: Vec<u32> = raw.iter().map(|c| distinct.binary_search(c).expect("present") as u32).collect();
        let c = canonicalize(&colours, &self.adj);
        let n = self.kinds.len();
        let kinds: Vec<VertexKind> = c.order.iter().map(|&v| self.kinds[v]).collect();
        let free: Vec<u8> = c.order.iter().map(|&v| self.free[v]).collect();
        let adj: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| self.adj[c.order[i]][c.order[j]]).collect()).collect();
        let mut key = Vec::with_capacity(2 * n + n * n);
        for i in 0..n {
            key.push(kind_code(kinds[i]));
            key.push(free[i] as u32);
        }
        for i in 0..n {
            for j in i..n {
                key.push(adj[i][j] as u32);
            }
        }
        (key, Partial { kinds, free, adj, edges: self.edges })
    }

    fn to_graph(&self) -> Result<FeynmanGraph> {
        let n = self.kinds.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i..n {
                for _ in 0..self.adj[i][j] {
                    edges.push([i, j]);
                }
            }
        }
        FeynmanGraph::new(self.kinds.clone(), edges)
    }
}

/// All connected graphs with exactly `v` trivalent vertices, `k` external points,
/// `s` sources and `l` loops, one per isomorphism class.
fn generate_exact(v: usize, k: usize, labeled: bool, s: usize, l: usize) -> Result<Vec<FeynmanGraph>> {
    let ext = |i: usize| if labeled { VertexKind::External(Some(i as u32)) } else { VertexKind::External(None) };
    let mut root = Partial { kinds: Vec::new(), free: Vec::new(), adj: Vec::new(), edges: 0 };
    if k > 0 {
        root.add_vertex(ext(1));
    } else if s > 0 {
        root.add_vertex(VertexKind::Source);
    } else if v > 0 {
        root.add_vertex(VertexKind::Internal);
    } else {
        return Ok(Vec::new());
    }
    let mut level = vec![root];
    let mut done = Vec::new();
    while !level.is_empty() {
        let mut next: BTreeMap<Vec<u32>, Partial> = BTreeMap::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for p in level {
            let Some(u) = p.free.iter().position(|&f| f > 0) else {
                let complete = p.count(VertexKind::Internal) == v
                    && p.count(VertexKind::Source) == s
                    && p.kinds.iter().filter(|x| matches!(x, VertexKind::External(_))).count() == k
                    && p.cycle_rank() == l;
                if complete {
                    done.push(p.to_graph()?);
                }
                continue;
            };
            let mut children = Vec::new();
            for w in u..p.kinds.len() {
                if (w == u && p.free[u] >= 2) || (w != u && p.free[w] > 0) {
                    if p.cycle_rank() + 1 > l {
                        continue;
                    }
                    let mut c = p.clone();
                    c.add_edge(u, w);
                    children.push(c);
                }
            }
            let mut fresh: Vec<VertexKind> = Vec::new();
            if p.count(VertexKind::Internal) < v {
                fresh.push(VertexKind::Internal);
            }
            if p.count(VertexKind::Source) < s {
                fresh.push(VertexKind::Source);
            }
            let used: Vec<VertexKind> =
                p.kinds.iter().copied().filter(|x| matches!(x, VertexKind::External(_))).collect();
            if used.len() < k {
                if labeled {
                    fresh.extend((1..=k).map(ext).filter(|x| !used.contains(x)));
                } else {
                    fresh.push(ext(0));
                }
            }
            for kind in fresh {
                let mut c = p.clone();
                let w = c.add_vertex(kind);
                c.add_edge(u, w);
                children.push(c);
            }
            for c in children {
                let (key, canon) = c.canonical();
                if seen.insert(key.clone()) {
                    next.insert(key, canon);
                }
            }
        }
        level = next.into_values().collect();
    }
    Ok(done)
}

/// One representative per isomorphism class, sorted by canonical encoding.
pub fn generate_graphs(spec: &GenSpec) -> Result<Vec<FeynmanGraph>> {
    if spec.max_vertices > spec.vertex_limit {
        return Err(Error::BoundExceeded(format!(
            "{} vertices requested, limit is {}",
            spec.max_vertices, spec.vertex_limit
        )));
    }
    let k = spec.externals;
    let mut by_code: BTreeMap<String, FeynmanGraph> = BTreeMap::new();
    for v in spec.min_vertices..=spec.max_vertices {
        // Half-edges: 3v + k + s = 2·edges, loops = edges − (v + k + s) + 1, so s = v + 2 − k − 2l.
        let max_l = (v + 2).saturating_sub(k) / 2;
        for l in 0..=max_l {
            if spec.class == GraphClass::Trees && l > 0 {
                break;
            }
            if spec.max_loops.is_some_and(|m| l > m) {
                break;
            }
            let s = (v + 2) as i64 - k as i64 - 2 * l as i64;
            if s < 0 || (!spec.sources && s != 0) {
                continue;
            }
            for g in generate_exact(v, k, spec.labeled, s as usize, l)? {
                let keep = match spec.class {
                    GraphClass::Trees => g.is_tree(),
                    GraphClass::Connected => true,
                    GraphClass::OnePi => g.is_1pi()?,
                };
                if keep {
                    by_code.insert(canonical_form(&g).encoding, g);
                }
            }
        }
    }
    Ok(by_code.into_values().collect())
}
