use std::collections::BTreeMap;

use proptest::prelude::*;
use renorm_core::graphs::{
    canonical_form, contract, divergent_subgraph_families, extract_subgraph, generate_graphs, named, sym_factor,
    FeynmanGraph, GenSpec, GraphClass, VertexKind,
};
use renorm_core::ring::{int, Rational};

/// Counts Wick contractions: every perfect matching of the half-edges of `n`
/// labeled trivalent vertices and `k` labeled external points, bucketed by
/// canonical encoding of the (connected) resulting graph.
fn wick_census(k: usize, n: usize) -> BTreeMap<String, u64> {
    let mut kinds: Vec<VertexKind> = (1..=k as u32).map(|l| VertexKind::External(Some(l))).collect();
    kinds.extend(std::iter::repeat_n(VertexKind::Internal, n));
    let mut owner = Vec::new();
    for (v, kind) in kinds.iter().enumerate() {
        owner.extend(std::iter::repeat_n(v, kind.valence()));
    }
    let mut out = BTreeMap::new();
    let mut used = vec![false; owner.len()];
    let mut edges = Vec::new();
    fn rec(
        owner: &[usize],
        used: &mut [bool],
        edges: &mut Vec<[usize; 2]>,
        kinds: &[VertexKind],
        out: &mut BTreeMap<String, u64>,
    ) {
        let Some(a) = used.iter().position(|u| !u) else {
            let g = FeynmanGraph::new(kinds.to_vec(), edges.clone()).unwrap();
            if g.is_connected() {
                *out.entry(canonical_form(&g).encoding).or_insert(0) += 1;
            }
            return;
        };
        used[a] = true;
        for b in a + 1..owner.len() {
            if !used[b] {
                used[b] = true;
                edges.push([owner[a], owner[b]]);
                rec(owner, used, edges, kinds, out);
                edges.pop();
                used[b] = false;
            }
        }
        used[a] = false;
    }
    rec(&owner, &mut used, &mut edges, &kinds, &mut out);
    out
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn check_against_wick(k: usize, n: usize) {
    let census = wick_census(k, n);
    let gs: Vec<_> = generate_graphs(&GenSpec { min_vertices: n, ..GenSpec::new(k, n, GraphClass::Connected) })
        .unwrap()
        .into_iter()
        .filter(|g| g.internal_count() == n)
        .collect();
    assert_eq!(gs.len(), census.len(), "class count for k={k}, n={n}");
    let total = factorial(n as u64) * 6u64.pow(n as u32);
    for g in &gs {
        let code = canonical_form(g).encoding;
        let count = census.get(&code).copied().unwrap_or_else(|| panic!("{code} missing from the Wick census"));
        assert_eq!(int(total as i64) / int(count as i64), sym_factor(g), "{code}");
    }
}

#[test]
fn wick_oracle_one_point_three_vertices() {
    check_against_wick(1, 3);
}

#[test]
fn wick_oracle_two_point_four_vertices() {
    check_against_wick(2, 4);
}

#[test]
fn wick_oracle_two_point_two_vertices() {
    check_against_wick(2, 2);
}

#[test]
fn wick_oracle_three_point_three_vertices() {
    check_against_wick(3, 3);
}

#[test]
fn power_counting_table() {
    let se = named::oneloop_se();
    assert_eq!(se.stats(4).unwrap().omega, 0);
    assert_eq!(se.stats(6).unwrap().omega, 2);
    assert_eq!(named::triangle().stats(6).unwrap().omega, 0);
    assert_eq!(named::rung_bubble().stats(4).unwrap().omega, -4);
    let nested = named::nested2loop();
    // Triangle side and the four-leg box side of the nested graph.
    let gamma = extract_subgraph(&nested, &[1, 2, 3]).unwrap();
    let gamma_prime = extract_subgraph(&nested, &[2, 3, 4, 5]).unwrap();
    assert_eq!(gamma.stats(6).unwrap().omega, 0);
    assert_eq!(gamma_prime.stats(6).unwrap().omega, -2);
    let b = named::threeloop_b();
    assert_eq!(b.stats(6).unwrap().omega, 2);
    assert_eq!(extract_subgraph(&b, &[2, 3]).unwrap().stats(6).unwrap().omega, 2);
}

#[test]
fn one_pi_examples() {
    assert!(named::oneloop_se().is_1pi().unwrap());
    assert!(!named::two_bubbles().is_1pi().unwrap());
    assert!(!named::free_propagator().is_1pi().unwrap());
}

#[test]
fn crosses_rejected_by_stats() {
    assert!(named::crossed_se(0, 2).stats(6).is_err());
}

#[test]
fn nested_family_and_quotient() {
    let g = named::nested2loop();
    let fams = divergent_subgraph_families(&g, 6).unwrap();
    assert_eq!(fams.len(), 1);
    let q = contract(&g, &fams[0]).unwrap();
    assert_eq!(canonical_form(&q).encoding, canonical_form(&named::triangle()).encoding);
}

#[test]
fn threeloop_families_with_labels() {
    let g = named::threeloop_b();
    let fams = divergent_subgraph_families(&g, 6).unwrap();
    // {γ₁}, {γ₂} with two labels each, {γ₁, γ₂} with four label pairs.
    assert_eq!(fams.len(), 8);
    let doubly: Vec<_> = fams.iter().filter(|f| f.members.len() == 2).collect();
    assert_eq!(doubly.len(), 4);
    let q = contract(&g, doubly[0]).unwrap();
    assert_eq!(q.cross_count(), 2);
    assert_eq!(q.internal_count(), 2);
}

#[test]
fn one_loop_has_no_families() {
    assert!(divergent_subgraph_families(&named::oneloop_se(), 6).unwrap().is_empty());
    assert!(divergent_subgraph_families(&named::triangle(), 6).unwrap().is_empty());
}

#[test]
fn named_symmetry_factors() {
    assert_eq!(sym_factor(&named::tadpole()), int(2));
    assert_eq!(sym_factor(&named::oneloop_se().with_labeled_externals()), int(2));
    let balanced = generate_graphs(&GenSpec { sources: true, ..GenSpec::new(1, 3, GraphClass::Trees) }).unwrap();
    let syms: Vec<Rational> = balanced.iter().filter(|g| g.internal_count() == 3).map(sym_factor).collect();
    assert!(syms.contains(&int(8)));
}

#[test]
fn generation_bound_enforced() {
    assert!(generate_graphs(&GenSpec::new(2, 11, GraphClass::Connected)).is_err());
}

fn all_generated() -> Vec<FeynmanGraph> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.extend(generate_graphs(&GenSpec::new(k, 4, GraphClass::Connected)).unwrap());
    }
    out
}

#[test]
fn generated_graphs_satisfy_counting_relations() {
    for g in all_generated() {
        if g.internal_count() == 0 {
            continue;
        }
        for d in [4, 6] {
            let s = g.stats(d).unwrap();
            assert_eq!(s.l + s.v, s.i + 1, "{g}");
            assert_eq!(3 * s.v, s.e + 2 * s.i, "{g}");
        }
    }
}

#[test]
fn families_are_disjoint_divergent_and_1pi() {
    let mut gs: Vec<FeynmanGraph> = Vec::new();
    for k in 2..=3 {
        gs.extend(
            generate_graphs(&GenSpec { labeled: false, ..GenSpec::new(k, 6, GraphClass::OnePi) })
                .unwrap()
                .into_iter()
                .filter(|g| g.loops() <= 3),
        );
    }
    gs.extend([named::nested2loop(), named::threeloop_b()]);
    for g in &gs {
        for fam in divergent_subgraph_families(g, 6).unwrap() {
            let mut seen = std::collections::BTreeSet::new();
            for m in &fam.members {
                for v in &m.vertices {
                    assert!(seen.insert(*v), "overlap in {g}");
                }
                let sub = extract_subgraph(g, &m.vertices).unwrap();
                assert!(sub.is_1pi().unwrap());
                assert!(sub.stats(6).unwrap().omega >= 0);
                assert!(m.vertices.len() < g.internal_count());
            }
            let q = contract(g, &fam).unwrap();
            let removed: usize =
                fam.members.iter().map(|m| m.vertices.len() - usize::from(m.legs == 3)).sum();
            assert_eq!(q.internal_count(), g.internal_count() - removed);
        }
    }
}

fn random_perm(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let j = (s >> 33) as usize % (i + 1);
        p.swap(i, j);
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn encoding_invariant_under_relabeling(idx in 0usize..40, seed in any::<u64>()) {
        let gs = all_generated();
        let g = &gs[idx % gs.len()];
        let p = random_perm(g.vertex_count(), seed);
        let h = g.permuted(&p);
        prop_assert_eq!(canonical_form(g).encoding, canonical_form(&h).encoding);
        prop_assert_eq!(sym_factor(g), sym_factor(&h));
    }
}
