//! Canonical labeling by colour refinement and individualization.
//!
//! The search explores every leaf of the refinement tree. Leaves that produce
//! the minimal relabeled adjacency form exactly one orbit of the vertex
//! automorphism group, which acts freely on them, so their number is `|Aut|`.

use std::collections::BTreeMap;

use num_traits::One;

use super::{FeynmanGraph, VertexKind};
use crate::ring::{int, Rational};

/// Result of canonical labeling on a coloured multigraph.
#[derive(Clone, Debug)]
pub(crate) struct Canon {
    /// `order[pos]` is the original vertex placed at canonical position `pos`.
    pub order: Vec<usize>,
    /// Number of colour-preserving vertex automorphisms.
    pub automorphisms: u64,
}

fn refine(cells: &mut [u32], adj: &[Vec<u8>]) {
    let n = cells.len();
    let mut count = distinct(cells);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u8)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u32, u8)> =
                    (0..n).filter(|&u| adj[v][u] > 0).map(|u| (cells[u], adj[v][u])).collect();
                nb.sort_unstable();
                (cells[v], nb)
            })
            .collect();
        rank_into(&sigs, cells);
        let c = distinct(cells);
        if c == count {
            return;
        }
        count = c;
    }
}

fn distinct(cells: &[u32]) -> usize {
    let mut v = cells.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn rank_into<T: Ord + Clone>(sigs: &[T], cells: &mut [u32]) {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    for (v, s) in sigs.iter().enumerate() {
        cells[v] = sorted.binary_search(s).expect("present") as u32;
    }
}

fn leaf_key(colours: &[u32], adj: &[Vec<u8>], order: &[usize]) -> Vec<u32> {
    let n = order.len();
    let mut key = Vec::with_capacity(n + n * (n + 1) / 2);
    key.extend(order.iter().map(|&v| colours[v]));
    for i in 0..n {
        for j in i..n {
            key.push(adj[order[i]][order[j]] as u32);
        }
    }
    key
}

struct Search<'a> {
    colours: &'a [u32],
    adj: &'a [Vec<u8>],
    best: Option<(Vec<u32>, Vec<usize>)>,
    count: u64,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Vec<u32>) {
        refine(&mut cells, self.adj);
        let n = cells.len();
        let mut sizes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, &c) in cells.iter().enumerate() {
            sizes.entry(c).or_default().push(v);
        }
        match sizes.iter().find(|(_, vs)| vs.len() > 1) {
            None => {
                let mut order = vec![0; n];
                for (v, &c) in cells.iter().enumerate() {
                    order[c as usize] = v;
                }
                let key = leaf_key(self.colours, self.adj, &order);
                match &self.best {
                    Some((k, _)) if *k < key => {}
                    Some((k, _)) if *k == key => self.count += 1,
                    _ => {
                        self.best = Some((key, order));
                        self.count = 1;
                    }
                }
            }
            Some((&target, members)) => {
                for &v in members {
                    let next: Vec<u32> = cells
                        .iter()
                        .enumerate()
                        .map(|(w, &c)| 2 * c + u32::from(c == target && w != v))
                        .collect();
                    self.run(next);
                }
            }
        }
    }
}

/// Canonical order and automorphism count of a vertex-coloured multigraph.
///
/// `adj[u][v]` is the number of edges between `u` and `v` (self-loops on the diagonal).
pub(crate) fn canonicalize(colours: &[u32], adj: &[Vec<u8>]) -> Canon {
    if colours.is_empty() {
        return Canon { order: Vec::new(), automorphisms: 1 };
    }
    let mut s = Search { colours, adj, best: None, count: 0 };
    s.run(colours.to_vec());
    let (_, order) = s.best.expect("at least one leaf");
    Canon { order, automorphisms: s.count }
}

pub(crate) fn adjacency(g: &FeynmanGraph) -> Vec<Vec<u8>> {
    let n = g.vertex_count();
    let mut adj = vec![vec![0u8; n]; n];
    for &[a, b] in g.edges() {
        if a == b {
            adj[a][a] += 1;
        } else {
            adj[a][b] += 1;
            adj[b][a] += 1;
        }
    }
    adj
}

pub(crate) fn kind_colours(kinds: &[VertexKind]) -> Vec<u32> {
    let mut distinct: Vec<VertexKind> = kinds.to_vec();
    distinct.sort();
    distinct.dedup();
    kinds.iter().map(|k| distinct.binary_search(k).expect("present") as u32).collect()
}

/// Canonical labeling of a Feynman graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Isomorphism-invariant encoding `V:..|E:..|X:..`.
    pub encoding: String,
    /// `order[pos]` is the original vertex at canonical position `pos`.
    pub order: Vec<usize>,
    /// Vertex automorphisms fixing labeled externals.
    pub vertex_automorphisms: u64,
    /// Half-edge automorphisms: vertex automorphisms times edge permutations and self-loop flips.
    pub automorphisms: u64,
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn canonical_form(g: &FeynmanGraph) -> CanonicalForm {
    let adj = adjacency(g);
    let c = canonicalize(&kind_colours(g.kinds()), &adj);
    let n = g.vertex_count();
    let mut extra = 1u64;
    for u in 0..n {
        extra *= factorial(adj[u][u] as u64) * (1u64 << adj[u][u]);
        for v in u + 1..n {
            extra *= factorial(adj[u][v] as u64);
        }
    }
    let encoding = encode(g, &c.order, &adj);
    CanonicalForm {
        encoding,
        order: c.order,
        vertex_automorphisms: c.automorphisms,
        automorphisms: c.automorphisms * extra,
    }
}

fn encode(g: &FeynmanGraph, order: &[usize], adj: &[Vec<u8>]) -> String {
    let non_leg: Vec<usize> = order.iter().copied().filter(|&v| !g.kind(v).is_leg()).collect();
    let legs: Vec<usize> = order.iter().copied().filter(|&v| g.kind(v).is_leg()).collect();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in non_leg.iter().enumerate() {
        index[v] = i;
    }
    let vpart: Vec<String> = non_leg.iter().map(|&v| g.kind(v).to_string()).collect();
    let mut epart = Vec::new();
    for (i, &u) in non_leg.iter().enumerate() {
        for (j, &v) in non_leg.iter().enumerate().skip(i) {
            let m = adj[u][v];
            if m > 0 {
                epart.push(if m == 1 { format!("{i}-{j}") } else { format!("{i}-{j}x{m}") });
            }
        }
    }
    let mut xpart: Vec<String> = Vec::new();
    let mut seen = vec![false; g.vertex_count()];
    for &l in &legs {
        if seen[l] {
            continue;
        }
        seen[l] = true;
        let a = g.leg_anchor(l);
        if g.kind(a).is_leg() {
            seen[a] = true;
            let mut pair = [g.kind(l).to_string(), g.kind(a).to_string()];
            pair.sort();
            xpart.push(format!("{}~{}", pair[0], pair[1]));
        } else {
            xpart.push(format!("{}@{}", g.kind(l), index[a]));
        }
    }
    format!("V:{}|E:{}|X:{}", vpart.join(","), epart.join(","), xpart.join(","))
}

/// Symmetry factor: order of the half-edge automorphism group fixing labeled externals.
pub fn sym_factor(g: &FeynmanGraph) -> Rational {
    int(canonical_form(g).automorphisms as i64)
}

/// `1 / Sym(g)`.
pub fn inverse_sym(g: &FeynmanGraph) -> Rational {
    Rational::one() / sym_factor(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::named;

    #[test]
    fn presentations_agree() {
        let t = named::triangle();
        let p = t.permuted(&[5, 4, 3, 2, 1, 0]);
        assert_eq!(canonical_form(&t).encoding, canonical_form(&p).encoding);
        assert_eq!(canonical_form(&t).encoding, "V:i,i,i|E:0-1,0-2,1-2|X:e@0,e@1,e@2");
    }

    #[test]
    fn symmetry_factors() {
        assert_eq!(sym_factor(&named::oneloop_se().with_labeled_externals()), int(2));
        assert_eq!(sym_factor(&named::tadpole().with_labeled_externals()), int(2));
        assert_eq!(sym_factor(&named::triangle().with_labeled_externals()), int(1));
        assert_eq!(sym_factor(&named::triangle()), int(6));
    }
}
