use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::{One, Zero};
use renorm_core::graphs::{FeynmanGraph, VertexKind};
use renorm_core::greens::{
    connected_to_full, ds_expansion, el_tree_expansion, render_json, render_text, tree_amplitude, ExpansionTerm,
    Sources,
};
use renorm_core::ring::{int, rat, Rational};

fn golden(name: &str, text: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("RENORM_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, want, "{name}");
}

#[test]
fn golden_term_lists() {
    golden("el_trees_3.txt", &render_text(&el_tree_expansion(3).unwrap()));
    golden("ds_k1_J0_3.txt", &render_text(&ds_expansion(1, Sources::J0, 3).unwrap()));
    golden("ds_k2_J0_4.txt", &render_text(&ds_expansion(2, Sources::J0, 4).unwrap()));
    golden("ds_k1_Jext_3.txt", &render_text(&ds_expansion(1, Sources::Jext, 3).unwrap()));
    golden("ds_k3_J0_3.txt", &render_text(&ds_expansion(3, Sources::J0, 3).unwrap()));
    let parts: String = connected_to_full(4).unwrap().iter().map(|p| format!("{p}\n")).collect();
    golden("partitions_4.txt", &parts);
}

fn coefficients_at(terms: &[ExpansionTerm], order: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> =
        terms.iter().filter(|t| t.vertices == order).map(|t| int(1) / t.sym.clone()).collect();
    v.sort();
    v
}

#[test]
fn displayed_tree_coefficients() {
    let trees = el_tree_expansion(3).unwrap();
    assert_eq!(coefficients_at(&trees, 0), vec![int(1)]);
    assert_eq!(coefficients_at(&trees, 1), vec![rat(1, 2)]);
    assert_eq!(coefficients_at(&trees, 2), vec![rat(1, 2)]);
    assert!(coefficients_at(&trees, 3).contains(&rat(1, 8)));
    assert!(trees.iter().all(|t| t.loops == 0));
}

#[test]
fn displayed_loop_coefficients() {
    let one = ds_expansion(1, Sources::J0, 3).unwrap();
    assert_eq!(coefficients_at(&one, 1), vec![rat(1, 2)]);
    assert_eq!(one.iter().filter(|t| t.vertices == 3 && t.sym == int(4)).count(), 2);
    let two = ds_expansion(2, Sources::J0, 4).unwrap();
    assert_eq!(coefficients_at(&two, 2), vec![rat(1, 2), rat(1, 2)]);
    assert!(two.iter().filter(|t| t.vertices == 2).all(|t| t.loops == 1));
    assert_eq!(two.iter().filter(|t| t.vertices == 4).count(), 10);
    let jext = ds_expansion(1, Sources::Jext, 2).unwrap();
    let hbar_lambda2: Vec<_> = jext.iter().filter(|t| t.loops == 1 && t.vertices == 2).collect();
    assert_eq!(hbar_lambda2.len(), 2);
    assert!(hbar_lambda2.iter().all(|t| t.sym == int(2)));
}

/// Half-edge automorphisms by brute force: kind-preserving vertex permutations
/// that preserve edge multiplicities, times the permutations of parallel edges
/// and the flips of self-loops.
fn brute_sym(g: &FeynmanGraph) -> u64 {
    let n = g.vertex_count();
    let mut mult = vec![vec![0u32; n]; n];
    for &[a, b] in g.edges() {
        mult[a][b] += 1;
        if a != b {
            mult[b][a] += 1;
        }
    }
    let fixed = |k: VertexKind| matches!(k, VertexKind::External(Some(_)));
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    fn rec(i: usize, g: &FeynmanGraph, mult: &[Vec<u32>], perm: &mut Vec<usize>, used: &mut Vec<bool>, count: &mut u64, fixed: &dyn Fn(VertexKind) -> bool) {
        let n = perm.len();
        if i == n {
            *count += 1;
            return;
        }
        for w in 0..n {
            if used[w] || g.kind(w) != g.kind(i) || (fixed(g.kind(i)) && w != i) {
                continue;
            }
            if (0..i).any(|j| mult[i][j] != mult[w][perm[j]]) || mult[i][i] != mult[w][w] {
                continue;
            }
            perm[i] = w;
            used[w] = true;
            rec(i + 1, g, mult, perm, used, count, fixed);
            used[w] = false;
        }
    }
    rec(0, g, &mult, &mut perm, &mut vec![false; n], &mut count, &fixed);
    let fact = |m: u32| (1..=m as u64).product::<u64>();
    let mut edge_factor = 1u64;
    for (a, row) in mult.iter().enumerate() {
        edge_factor *= 2u64.pow(row[a]) * fact(row[a]);
        edge_factor *= row[a + 1..].iter().map(|&m| fact(m)).product::<u64>();
    }
    count * edge_factor
}

#[test]
fn coefficients_recomputed_independently() {
    let mut all = el_tree_expansion(4).unwrap();
    all.extend(ds_expansion(1, Sources::J0, 3).unwrap());
    all.extend(ds_expansion(2, Sources::J0, 4).unwrap());
    all.extend(ds_expansion(1, Sources::Jext, 3).unwrap());
    all.extend(ds_expansion(3, Sources::J0, 3).unwrap());
    for t in all {
        let g = &t.graph;
        let v = g.kinds().iter().filter(|k| **k == VertexKind::Internal).count();
        let loops = g.edge_count() + 1 - g.vertex_count();
        let sym = brute_sym(g);
        assert_eq!((t.vertices, t.loops, t.sym.clone()), (v, loops, int(sym as i64)), "{}", t.encoding);
        let want = format!(
            "{}",
            renorm_core::ring::Poly::from_terms([(
                {
                    let mut m = renorm_core::ring::Monomial::one();
                    for _ in 0..loops {
                        m = m.mul(&renorm_core::ring::Monomial::var("hbar"));
                    }
                    for _ in 0..v {
                        m = m.mul(&renorm_core::ring::Monomial::var("lambda"));
                    }
                    m
                },
                rat(1, sym as i64)
            )])
        );
        assert_eq!(t.coefficient.to_string(), want);
    }
}

#[test]
fn classical_limit_is_the_tree_expansion() {
    for n in 0..=4 {
        let trees = el_tree_expansion(n).unwrap();
        let classical: Vec<ExpansionTerm> =
            ds_expansion(1, Sources::Jext, n).unwrap().into_iter().filter(|t| t.loops == 0).collect();
        assert_eq!(classical, trees);
    }
}

/// `φ = J + (λ/2)(φ² + ħ ∂_J φ)` solved order by order in λ; keys are `(J power, ħ power)`.
type Poly2 = BTreeMap<(u32, u32), Rational>;

fn zero_dimensional_solution(max_order: usize) -> Vec<Poly2> {
    let mul = |a: &Poly2, b: &Poly2| {
        let mut out = Poly2::new();
        for ((j1, h1), x) in a {
            for ((j2, h2), y) in b {
                *out.entry((j1 + j2, h1 + h2)).or_insert_with(Rational::zero) += x * y;
            }
        }
        out
    };
    let mut phi: Vec<Poly2> = vec![Poly2::from([((1, 0), Rational::one())])];
    for n in 1..=max_order {
        let mut next = Poly2::new();
        for a in 0..n {
            for (k, c) in mul(&phi[a], &phi[n - 1 - a]) {
                *next.entry(k).or_insert_with(Rational::zero) += c * rat(1, 2);
            }
        }
        for ((j, h), c) in &phi[n - 1] {
            if *j > 0 {
                *next.entry((j - 1, h + 1)).or_insert_with(Rational::zero) += c * int(*j as i64) * rat(1, 2);
            }
        }
        next.retain(|_, c| !c.is_zero());
        phi.push(next);
    }
    phi
}

#[test]
fn sums_match_the_zero_dimensional_recursion() {
    let phi = zero_dimensional_solution(4);
    let grouped = |terms: &[ExpansionTerm], by_sources: bool| {
        let mut m: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for t in terms {
            let s = if by_sources { t.sources } else { 0 };
            *m.entry((t.vertices, t.loops, s)).or_insert_with(Rational::zero) += int(1) / t.sym.clone();
        }
        m
    };
    // J ≠ 0, one point: every monomial of φ.
    let jext = grouped(&ds_expansion(1, Sources::Jext, 4).unwrap(), true);
    let mut want = BTreeMap::new();
    for (n, p) in phi.iter().enumerate() {
        for ((j, h), c) in p {
            want.insert((n, *h as usize, *j as usize), c.clone());
        }
    }
    assert_eq!(jext, want);
    // J = 0, k points: (k−1)! × coefficient of J^{k−1}.
    for (k, max) in [(1usize, 3usize), (2, 4), (3, 3)] {
        let got = grouped(&ds_expansion(k, Sources::J0, max).unwrap(), false);
        let mut want = BTreeMap::new();
        let fact: i64 = (1..k as i64).product();
        for (n, p) in phi.iter().enumerate().take(max + 1) {
            for ((j, h), c) in p {
                if *j as usize == k - 1 {
                    want.insert((n, *h as usize, 0), c.clone() * int(fact));
                }
            }
        }
        assert_eq!(got, want, "k = {k}");
    }
}

#[test]
fn partition_weights() {
    let two = connected_to_full(2).unwrap();
    assert_eq!(two.len(), 2);
    assert!(two.iter().any(|p| p.blocks == vec![vec![1], vec![2]] && p.hbar_power == 0));
    assert!(two.iter().any(|p| p.blocks == vec![vec![1, 2]] && p.hbar_power == 1));
    let three = connected_to_full(3).unwrap();
    let mut powers: Vec<usize> = three.iter().map(|p| p.hbar_power).collect();
    powers.sort();
    assert_eq!(powers, vec![0, 1, 1, 1, 2]);
    let four = connected_to_full(4).unwrap();
    assert_eq!(four.len(), 15);
    assert!(four.iter().any(|p| p.blocks.len() == 1 && p.hbar_power == 3));
    let pairs: Vec<_> = four.iter().filter(|p| p.blocks.len() == 2 && p.blocks.iter().all(|b| b.len() == 2)).collect();
    assert_eq!(pairs.len(), 3);
    assert!(pairs.iter().all(|p| p.hbar_power == 2));
    for k in 1..=6 {
        for p in connected_to_full(k).unwrap() {
            let mut seen: Vec<usize> = p.blocks.concat();
            seen.sort();
            assert_eq!(seen, (1..=k).collect::<Vec<_>>());
            assert!(p.blocks.iter().all(|b| !b.is_empty()));
            assert_eq!(p.hbar_power, k - p.blocks.len());
        }
    }
}

#[test]
fn tree_amplitudes() {
    let trees = el_tree_expansion(1).unwrap();
    assert_eq!(tree_amplitude(&trees[0].graph).unwrap().to_string(), "∫ d^D y1 G0(x-y1) J(y1)");
    let cherry = tree_amplitude(&trees[1].graph).unwrap();
    assert_eq!((cherry.propagators.len(), cherry.sources.len(), cherry.integrated.len()), (3, 2, 3));
    let tadpole = ds_expansion(1, Sources::J0, 1).unwrap();
    assert!(tree_amplitude(&tadpole[0].graph).is_err());
    if let Ok(root_only) = FeynmanGraph::new(vec![VertexKind::External(Some(1))], vec![]) {
        assert!(tree_amplitude(&root_only).is_err());
    }
}

#[test]
fn bounds_and_json() {
    assert!(el_tree_expansion(7).is_err());
    assert!(ds_expansion(4, Sources::J0, 2).is_err());
    let v = render_json(&ds_expansion(1, Sources::J0, 1).unwrap());
    assert_eq!(v[0]["coefficient"], "1/2*hbar*lambda");
    assert_eq!(v[0]["loops"], 1);
}
