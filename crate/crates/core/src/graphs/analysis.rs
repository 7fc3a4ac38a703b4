//! Divergent subgraphs, families, contraction and re-insertion.

use std::collections::BTreeSet;

use super::{FeynmanGraph, VertexKind};
use crate::error::{Error, Result};

/// A proper, 1PI, superficially divergent subgraph given by its (non-leg) vertex set.
///
/// Subgraphs are vertex-induced: in a 1PI φ³ graph a divergent subgraph with two
/// or three legs always contains every edge between its vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivergentSubgraph {
    pub vertices: Vec<usize>,
    pub legs: usize,
    pub loops: usize,
    pub omega: i64,
}

/// A member of a family: a subgraph and the Taylor order attached to it
/// (`Some(r)` for two-leg members, `None` for vertex members).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyMember {
    pub vertices: Vec<usize>,
    pub legs: usize,
    pub label: Option<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgraphFamily {
    pub members: Vec<FamilyMember>,
}

/// The subgraph on `vertices` (non-leg vertices of `g`), with every boundary
/// half-edge turned into a fresh unlabeled external point. Legs are appended in
/// the order of the boundary edges.
pub fn extract_subgraph(g: &FeynmanGraph, vertices: &[usize]) -> Result<FeynmanGraph> {
    let mut index = vec![usize::MAX; g.vertex_count()];
    let mut kinds = Vec::new();
    for &v in vertices {
        if v >= g.vertex_count() || g.kind(v).is_leg() {
            return Err(Error::InvalidArgument(format!("vertex {v} cannot belong to a subgraph")));
        }
        if index[v] != usize::MAX {
            return Err(Error::InvalidArgument(format!("vertex {v} listed twice")));
        }
        index[v] = kinds.len();
        kinds.push(g.kind(v));
    }
    let mut edges = Vec::new();
    for &[a, b] in g.edges() {
        match (index[a] != usize::MAX, index[b] != usize::MAX) {
            (true, true) => edges.push([index[a], index[b]]),
            (true, false) | (false, true) => {
                let inside = if index[a] != usize::MAX { index[a] } else { index[b] };
                kinds.push(VertexKind::External(None));
                edges.push([inside, kinds.len() - 1]);
            }
            (false, false) => {}
        }
    }
    Ok(FeynmanGraph::from_parts_unchecked(kinds, edges))
}

/// All proper 1PI subgraphs with two or three legs and `ω ≥ 0` in dimension `d`.
pub fn divergent_subgraphs(g: &FeynmanGraph, d: i64) -> Result<Vec<DivergentSubgraph>> {
    let nl = g.non_leg_vertices();
    if nl.len() > 20 {
        return Err(Error::BoundExceeded(format!("{} vertices is too many for subset enumeration", nl.len())));
    }
    let mut out = Vec::new();
    let full = (1u32 << nl.len()) - 1;
    for mask in 1..full {
        let vs: Vec<usize> = (0..nl.len()).filter(|i| mask >> i & 1 == 1).map(|i| nl[i]).collect();
        if vs.len() < 2 && !vs.iter().any(|&v| g.edges().iter().any(|e| e[0] == v && e[1] == v)) {
            continue;
        }
        let sub = extract_subgraph(g, &vs)?;
        if !sub.is_connected() || sub.loops() == 0 || !sub.is_1pi()? {
            continue;
        }
        let legs = sub.leg_count();
        if legs != 2 && legs != 3 {
            continue;
        }
        let omega = sub.omega(d);
        if omega < 0 {
            continue;
        }
        out.push(DivergentSubgraph { vertices: vs, legs, loops: sub.loops(), omega });
    }
    out.sort();
    Ok(out)
}

fn labels_for(s: &DivergentSubgraph) -> Vec<Option<u8>> {
    if s.legs == 2 {
        [0u8, 2].into_iter().filter(|&r| (r as i64) <= s.omega).map(Some).collect()
    } else {
        vec![None]
    }
}

/// All non-empty families of pairwise disjoint divergent subgraphs, expanded over labels.
pub fn divergent_subgraph_families(g: &FeynmanGraph, d: i64) -> Result<Vec<SubgraphFamily>> {
    let subs = divergent_subgraphs(g, d)?;
    let sets: Vec<BTreeSet<usize>> = subs.iter().map(|s| s.vertices.iter().copied().collect()).collect();
    let mut out = Vec::new();
    // Depth-first over index-increasing disjoint choices.
    fn rec(
        start: usize,
        chosen: &mut Vec<usize>,
        subs: &[DivergentSubgraph],
        sets: &[BTreeSet<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        for i in start..subs.len() {
            if chosen.iter().all(|&j| sets[j].is_disjoint(&sets[i])) {
                chosen.push(i);
                out.push(chosen.clone());
                rec(i + 1, chosen, subs, sets, out);
                chosen.pop();
            }
        }
    }
    let mut choices = Vec::new();
    rec(0, &mut Vec::new(), &subs, &sets, &mut choices);
    for choice in choices {
        let mut partial: Vec<Vec<FamilyMember>> = vec![Vec::new()];
        for &i in &choice {
            let mut next = Vec::new();
            for p in &partial {
                for lab in labels_for(&subs[i]) {
                    let mut q = p.clone();
                    q.push(FamilyMember { vertices: subs[i].vertices.clone(), legs: subs[i].legs, label: lab });
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(|members| SubgraphFamily { members }));
    }
    out.sort();
    Ok(out)
}

/// Contraction map: the quotient graph, the new vertex of each member, and the
/// image of every old vertex (`None` for vertices swallowed into a member).
pub struct Contraction {
    pub graph: FeynmanGraph,
    pub member_vertex: Vec<usize>,
    pub vertex_map: Vec<Option<usize>>,
}

/// Contracts each member to a vertex: three-leg members to an interaction vertex,
/// two-leg members to a cross carrying the member's label. Edge order is preserved.
pub fn contract_with_map(g: &FeynmanGraph, members: &[FamilyMember]) -> Result<Contraction> {
    let n = g.vertex_count();
    let mut owner = vec![usize::MAX; n];
    for (m, mem) in members.iter().enumerate() {
        for &v in &mem.vertices {
            if v >= n || g.kind(v).is_leg() {
                return Err(Error::InvalidArgument(format!("vertex {v} cannot belong to a subgraph")));
            }
            if owner[v] != usize::MAX {
                return Err(Error::InvalidArgument("family members overlap".into()));
            }
            owner[v] = m;
        }
        let sub = extract_subgraph(g, &mem.vertices)?;
        if sub.leg_count() != mem.legs {
            return Err(Error::InvalidArgument(format!(
                "member declares {} legs but has {}",
                mem.legs,
                sub.leg_count()
            )));
        }
        match (mem.legs, mem.label) {
            (3, None) | (2, Some(0)) | (2, Some(2)) => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "member with {} legs cannot carry label {:?}",
                    mem.legs, mem.label
                )))
            }
        }
    }
    let mut kinds = Vec::new();
    let mut vertex_map = vec![None; n];
    let mut member_vertex = vec![usize::MAX; members.len()];
    for v in 0..n {
        match owner[v] {
            usize::MAX => {
                vertex_map[v] = Some(kinds.len());
                kinds.push(g.kind(v));
            }
            m => {
                if member_vertex[m] == usize::MAX {
                    member_vertex[m] = kinds.len();
                    kinds.push(match members[m].label {
                        None => VertexKind::Internal,
                        Some(r) => VertexKind::Cross(r),
                    });
                }
            }
        }
    }
    let image = |v: usize| if owner[v] == usize::MAX { vertex_map[v].expect("kept") } else { member_vertex[owner[v]] };
    let mut edges = Vec::new();
    for &[a, b] in g.edges() {
        if owner[a] != usize::MAX && owner[a] == owner[b] {
            continue;
        }
        edges.push([image(a), image(b)]);
    }
    let graph = FeynmanGraph::new(kinds, edges)?;
    Ok(Contraction { graph, member_vertex, vertex_map })
}

pub fn contract(g: &FeynmanGraph, fam: &SubgraphFamily) -> Result<FeynmanGraph> {
    Ok(contract_with_map(g, &fam.members)?.graph)
}

/// Replaces vertex `x` of `h` by `gamma`: the `i`-th edge at `x` (in edge order)
/// is attached where the `i`-th leg of `gamma` was.
pub fn insert_subgraph(h: &FeynmanGraph, x: usize, gamma: &FeynmanGraph) -> Result<FeynmanGraph> {
    let legs = gamma.legs();
    let incident: Vec<usize> = (0..h.edge_count()).filter(|&e| h.edges()[e].contains(&x)).collect();
    if incident.len() != legs.len() || incident.iter().any(|&e| h.edges()[e] == [x, x]) {
        return Err(Error::InvalidArgument("vertex valence does not match the subgraph's legs".into()));
    }
    let mut kinds = Vec::new();
    let mut map_h = vec![usize::MAX; h.vertex_count()];
    for v in 0..h.vertex_count() {
        if v != x {
            map_h[v] = kinds.len();
            kinds.push(h.kind(v));
        }
    }
    let mut map_g = vec![usize::MAX; gamma.vertex_count()];
    for v in gamma.non_leg_vertices() {
        map_g[v] = kinds.len();
        kinds.push(gamma.kind(v));
    }
    let mut edges = Vec::new();
    for (e, &[a, b]) in h.edges().iter().enumerate() {
        if let Some(i) = incident.iter().position(|&f| f == e) {
            let anchor = map_g[gamma.leg_anchor(legs[i])];
            let other = if a == x { map_h[b] } else { map_h[a] };
            edges.push([other, anchor]);
        } else {
            edges.push([map_h[a], map_h[b]]);
        }
    }
    for &[a, b] in gamma.edges() {
        if !gamma.kind(a).is_leg() && !gamma.kind(b).is_leg() {
            edges.push([map_g[a], map_g[b]]);
        }
    }
    FeynmanGraph::new(kinds, edges)
}
