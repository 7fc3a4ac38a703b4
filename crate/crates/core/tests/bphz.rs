use std::collections::BTreeSet;

use proptest::prelude::*;
use renorm_core::bphz::engine::{Bphz, ExternalMomenta, NumericBphz, RegulatorConfig};
use renorm_core::bphz::ladder::{renormalization_ladder, tail_slope};
use renorm_core::bphz::quadrature::{integrate, CompiledIntegrand, NodeSet, QuadratureSpec};
use renorm_core::bphz::rota_baxter::{eval_at_zero_sides, rota_baxter_check, RationalFunction, RotaBaxterModel};
use renorm_core::bphz::{graph_integrand, route_momenta, standard_presentation, taylor_subtract, Factor, Momentum};
use renorm_core::ck::{ck_generators, CkGenerator, CkHopf};
use renorm_core::graphs::io::parse_encoding;
use renorm_core::graphs::{contract, divergent_subgraph_families, named, FeynmanGraph, VertexKind};
use renorm_core::hopf::{coproduct, Element, Monomial, Tensor};
use renorm_core::ring::{int, rat};

fn std_graph(g: &FeynmanGraph) -> FeynmanGraph {
    standard_presentation(g).unwrap()
}

fn box_graph() -> FeynmanGraph {
    use VertexKind::*;
    let kinds = vec![Internal, Internal, Internal, Internal, External(None), External(None), External(None), External(None)];
    FeynmanGraph::new(kinds, vec![[0, 1], [1, 2], [2, 3], [3, 0], [0, 4], [1, 5], [2, 6], [3, 7]]).unwrap()
}

/// Momenta on edges between non-leg vertices, as strings.
fn inner_momenta(g: &FeynmanGraph) -> Vec<Momentum> {
    let r = route_momenta(g).unwrap();
    g.edges()
        .iter()
        .zip(&r.edges)
        .filter(|(&[a, b], _)| !g.kind(a).is_leg() && !g.kind(b).is_leg())
        .map(|(_, m)| m.normalized().1)
        .collect()
}

#[test]
fn routing_conserves_momentum() {
    let mut graphs: Vec<FeynmanGraph> =
        ck_generators(2).unwrap().iter().map(|g| g.graph().with_labeled_externals()).collect();
    graphs.extend([named::threeloop_b(), named::crossed_se(0, 2), box_graph()].map(|g| g.with_labeled_externals()));
    for g in graphs {
        let r = route_momenta(&g).unwrap();
        r.check_conservation(&g).unwrap();
        assert_eq!(r.chords.len(), g.loops());
        assert_eq!(r.externals, g.leg_count() - 1);
    }
}

#[test]
fn tree_routing_has_no_loop_momenta() {
    use VertexKind::*;
    let tree = FeynmanGraph::new(
        vec![Internal, External(Some(1)), External(Some(2)), External(Some(3))],
        vec![[0, 1], [0, 2], [0, 3]],
    )
    .unwrap();
    let r = route_momenta(&tree).unwrap();
    assert_eq!(r.loops, 0);
    assert!(r.edges.iter().all(|m| !m.has_loops() && m.has_ext()));
}

#[test]
fn disconnected_routing_fails() {
    let g = FeynmanGraph::new(vec![VertexKind::External(Some(1)), VertexKind::External(Some(2))], vec![]);
    if let Ok(g) = g {
        assert!(route_momenta(&g).is_err());
    }
}

#[test]
fn self_energy_carries_q_and_p_minus_q() {
    let g = std_graph(&named::oneloop_se());
    let shown: BTreeSet<String> = inner_momenta(&g).iter().map(|m| m.to_string()).collect();
    assert_eq!(shown, BTreeSet::from(["q1".to_string(), "q1-p1".to_string()]));
    assert_eq!(graph_integrand(&g).unwrap().to_string(), "1/((q1)^2+m^2) * 1/((q1-p1)^2+m^2)");
}

#[test]
fn triangle_routing_matches_up_to_loop_shift() {
    // {q, q+p₂, q−p₁} and ours have the same set of pairwise differences,
    // so they differ by a shift of the loop momentum.
    let ours = inner_momenta(&std_graph(&named::triangle()));
    let diffs = |ms: &[Momentum]| -> BTreeSet<Momentum> {
        let mut s = BTreeSet::new();
        for a in ms {
            for b in ms {
                if a != b {
                    s.insert(a.sub(b).normalized().1);
                }
            }
        }
        s
    };
    let q = Momentum::loop_var(0, 1, 2);
    let (p1, p2) = (Momentum::ext_var(0, 1, 2), Momentum::ext_var(1, 1, 2));
    let reference = vec![q.clone(), q.add(&p2), q.sub(&p1)];
    assert_eq!(diffs(&ours), diffs(&reference));
    assert!(ours.iter().all(|m| m.loops == vec![1]));
}

#[test]
fn nested_integrands() {
    let b = Bphz::new(6).unwrap();
    let g = std_graph(&named::nested2loop());
    let i = graph_integrand(&g).unwrap();
    assert_eq!(i.terms.len(), 1);
    assert_eq!(i.terms[0].factors.len(), 6);
    // Contracted graph: three propagators.
    let fams = divergent_subgraph_families(&g, 6).unwrap();
    assert_eq!(fams.len(), 1);
    let quotient = graph_integrand(&contract(&g, &fams[0]).unwrap()).unwrap();
    assert_eq!(quotient.loops, 1);
    assert_eq!(quotient.terms[0].factors.len(), 3);
    // Ī = I − 1/(q₁²+m²)³ · I(Γ/γ)(q₂).
    let pi = b.prepared_integrand(&g).unwrap();
    assert_eq!(pi.terms.len(), 2);
    let q1 = Momentum::loop_var(0, 2, 2);
    let ct = pi.terms.iter().find(|t| t.coeff == int(-1)).unwrap();
    assert!(ct.factors.contains(&Factor::Prop(q1.clone(), 3)));
    assert_eq!(ct.factors.iter().filter(|f| matches!(f, Factor::Prop(l, _) if l.loops == vec![0, 1])).count(), 3);
    // C(Γ): −∫[I(Γ)|₀ − 1/(q₁²+m²)³ · 1/(q₂²+m²)³].
    let c = b.counterterm_integrand(&g, 0).unwrap();
    assert_eq!(c.terms.len(), 2);
    let q2 = Momentum::loop_var(1, 2, 0);
    let q1 = Momentum::loop_var(0, 2, 0);
    assert!(c.terms.iter().any(|t| t.coeff == int(1)
        && t.factors == vec![Factor::Prop(q2.clone(), 3), Factor::Prop(q1.clone(), 3)]));
    assert!(c.terms.iter().any(|t| t.coeff == int(-1) && t.factors.len() == 3));
}

#[test]
fn three_loop_prepared_structure() {
    let b = Bphz::new(6).unwrap();
    let g = std_graph(&named::threeloop_b());
    let fams = b.family_terms(&g).unwrap();
    // Two self-energy subgraphs, each with labels 0 and 2: 4 singles and 4 pairs.
    let singles = fams.iter().filter(|f| f.members.len() == 1).count();
    let pairs = fams.iter().filter(|f| f.members.len() == 2).count();
    assert_eq!((singles, pairs), (4, 4));
    assert!(fams.iter().flat_map(|f| &f.members).all(|k| k.1 == 0 || k.1 == 2));
    assert!(b.counterterm_integrand(&g, 2).is_ok());
}

#[test]
fn one_loop_prepared_is_bare() {
    let b = Bphz::new(6).unwrap();
    for g in [named::oneloop_se(), named::triangle()] {
        let g = std_graph(&g);
        assert_eq!(b.prepared_integrand(&g).unwrap(), graph_integrand(&g).unwrap());
    }
}

#[test]
fn one_loop_counterterm_integrands() {
    let b4 = Bphz::new(4).unwrap();
    assert_eq!(b4.counterterm_integrand(&named::oneloop_se(), 0).unwrap().to_string(), "-1/((q1)^2+m^2)^2");
    assert!(b4.counterterm_integrand(&named::oneloop_se(), 2).is_err());
    let b6 = Bphz::new(6).unwrap();
    assert_eq!(b6.counterterm_integrand(&named::triangle(), 0).unwrap().to_string(), "-1/((q1)^2+m^2)^3");
    assert_eq!(b6.counterterm_integrand(&named::oneloop_se(), 0).unwrap().to_string(), "-1/((q1)^2+m^2)^2");
    // Rotational average in D=6: ((q²/3 + m²))/(q²+m²)⁴.
    assert_eq!(
        b6.counterterm_integrand(&named::oneloop_se(), 2).unwrap().to_string(),
        "1/((q1)^2+m^2)^3 - 2/3 * (q1)^2 * 1/((q1)^2+m^2)^4"
    );
    assert!(b6.counterterm_integrand(&named::triangle(), 2).is_err());
    assert!(b6.counterterm_integrand(&named::oneloop_se(), 1).is_err());
    assert!(b6.counterterm_integrand(&box_graph(), 0).is_err());
}

#[test]
fn scalar_second_order_coefficient() {
    // With one-component momenta the second-order counterterm is −(3q²−m²)/(q²+m²)⁴.
    let i = graph_integrand(&std_graph(&named::oneloop_se())).unwrap();
    let c = i.isotropic_coefficient(2, 1).unwrap().scale(&int(-1));
    let ci = CompiledIntegrand::new(&c, &[], 1).unwrap();
    for q in [0.0, 0.3, 1.0, 2.5, 7.0] {
        let want = -(3.0 * q * q - 1.0) / (q * q + 1.0_f64).powi(4);
        assert!((ci.eval::<f64>(&[&[q]]) - want).abs() < 1e-14);
    }
}

#[test]
fn zeroth_order_subtraction_matches_closed_form() {
    // I − I|₀ = (2p·q − p²) / ((q²+m²)² ((p−q)²+m²)).
    let i = graph_integrand(&std_graph(&named::oneloop_se())).unwrap();
    let d = taylor_subtract(&i, 0).unwrap();
    let p = vec![0.7, -0.2, 0.4, 1.1];
    let ci = CompiledIntegrand::new(&d, std::slice::from_ref(&p), 4).unwrap();
    let mut rng = 12345u64;
    for _ in 0..50 {
        let q: Vec<f64> = (0..4)
            .map(|_| {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((rng >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 6.0
            })
            .collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let pq: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a - b).collect();
        let want = (2.0 * dot(&p, &q) - dot(&p, &p)) / ((dot(&q, &q) + 1.0).powi(2) * (dot(&pq, &pq) + 1.0));
        assert!((ci.eval::<f64>(&[&q]) - want).abs() < 1e-13 * (1.0 + want.abs()));
    }
    let free = renorm_core::bphz::Integrand::one(1, 1);
    assert!(taylor_subtract(&free, 0).unwrap().is_zero());
}

#[test]
fn convergent_graph_is_not_subtracted() {
    let b = Bphz::new(6).unwrap();
    let g = std_graph(&box_graph());
    assert_eq!(b.renormalized_integrand(&g).unwrap(), graph_integrand(&g).unwrap());
}

#[test]
fn odd_taylor_coefficients_integrate_to_zero() {
    let mut spec = QuadratureSpec::monte_carlo(100_000, 99);
    spec.antithetic = false;
    for (d, g) in [(4usize, named::oneloop_se()), (6, named::oneloop_se()), (6, named::triangle())] {
        let i = graph_integrand(&std_graph(&g)).unwrap();
        let odd = i.taylor_coefficients(1).unwrap().pop().unwrap();
        let p: Vec<Vec<f64>> = ExternalMomenta::along_axes(i.externals, 1.0, d).unwrap().0;
        let nodes = NodeSet::ball(d, 30.0, &spec).unwrap();
        let est = integrate(&CompiledIntegrand::new(&odd, &p, d).unwrap(), &nodes).unwrap();
        let sigma = est.sigma.unwrap();
        assert!(est.value.abs() <= 3.0 * sigma, "D={d}: {} vs σ {sigma}", est.value);
    }
}

#[test]
fn subtracted_tails() {
    let cases = [(4, named::oneloop_se(), -5.0, 0.3), (6, named::oneloop_se(), -7.0, 0.5), (6, named::triangle(), -7.0, 0.5)];
    for (d, g, want, tol) in cases {
        let b = Bphz::new(d).unwrap();
        let f = b.subtracted_integrand_exact(&g).unwrap();
        let p = ExternalMomenta::along_axes(f.externals, 1.0, d as usize).unwrap();
        let fit = tail_slope(&f, &p, d as usize, 10.0, 1000.0, 25).unwrap();
        assert!((fit.slope - want).abs() <= tol, "D={d} slope {}", fit.slope);
    }
}

#[test]
fn cutoff_ladder_d4() {
    let spec = QuadratureSpec::monte_carlo(250_000, 42);
    let p = ExternalMomenta::along_axes(1, 1.0, 4).unwrap();
    let rep = renormalization_ladder(&named::oneloop_se(), &p, 4, &[10.0, 20.0, 40.0, 80.0], &spec).unwrap();
    assert!(rep.bare_fit.slope > 0.0 && rep.bare_fit.r2 >= 0.999, "{:?}", rep.bare_fit);
    // ∫d⁴q/(2π)⁴ q⁻⁴ per unit ln Λ is 1/(8π²).
    let b = 1.0 / (8.0 * std::f64::consts::PI.powi(2));
    assert!((rep.bare_fit.slope - b).abs() < 0.02 * b);
    for w in rep.cauchy.windows(2) {
        let s = w[0].sigma.unwrap().hypot(1.5 * w[1].sigma.unwrap());
        assert!(1.5 * w[1].difference.abs() <= w[0].difference.abs() + 2.0 * s, "{w:?}");
    }
}

#[test]
fn memoized_counterterms_ignore_evaluation_order() {
    let cfg = RegulatorConfig::new(6, 10.0, 300, 5);
    let a = NumericBphz::new(cfg.clone()).unwrap();
    let b = NumericBphz::new(cfg).unwrap();
    let nested = named::nested2loop();
    let tri = named::triangle();
    let a1 = a.counterterm(&nested, 0).unwrap();
    let a2 = a.counterterm(&tri, 0).unwrap();
    let b2 = b.counterterm(&tri, 0).unwrap();
    let rev: Vec<usize> = (0..nested.vertex_count()).rev().collect();
    let b1 = b.counterterm(&nested.permuted(&rev), 0).unwrap();
    assert_eq!(a1.to_bits(), b1.to_bits());
    assert_eq!(a2.to_bits(), b2.to_bits());
}

#[test]
fn ar_equals_a_star_c_up_to_two_loops() {
    let nb = NumericBphz::new(RegulatorConfig::new(6, 15.0, 400, 3)).unwrap();
    let mut seen = BTreeSet::new();
    for g in ck_generators(2).unwrap() {
        let graph = g.graph();
        if graph.cross_count() > 0 || !seen.insert(g.encoding.clone()) {
            continue;
        }
        let p = ExternalMomenta::along_axes(graph.leg_count() - 1, 1.0, 6).unwrap();
        let rep = nb.check_ar_equals_a_star_c(&graph, &p).unwrap();
        assert!(rep.relative_deviation <= 1e-9, "{g}: {rep:?}");
        if graph.loops() == 1 {
            assert_eq!(rep.terms.len(), 1 + Bphz::new(6).unwrap().labels(&graph).unwrap().len());
        }
    }
    let rep = nb.check_ar_equals_a_star_c(&named::nested2loop(), &ExternalMomenta::along_axes(2, 1.0, 6).unwrap()).unwrap();
    assert_eq!(rep.terms.len(), 3);
}

#[test]
fn families_regroup_into_the_coproduct() {
    let h = CkHopf::new();
    let b = Bphz::new(6).unwrap();
    let mut gens: Vec<CkGenerator> = ck_generators(2).unwrap().into_iter().filter(|g| !g.has_crosses()).collect();
    gens.push(CkGenerator::new(&named::threeloop_b(), Some(0)).unwrap());
    for g in gens {
        let graph = std_graph(&g.graph());
        let label = |gr: &FeynmanGraph, r: u8| if gr.leg_count() == 2 { Some(r) } else { None };
        let mut t = Tensor::default();
        let whole = Monomial::gen(g.clone());
        t.add_term(whole.clone(), Monomial::one(), int(1));
        t.add_term(Monomial::one(), whole, int(1));
        for ft in b.family_terms(&graph).unwrap() {
            let q = CkGenerator::new(&ft.quotient, label(&ft.quotient, g.label.unwrap_or(0))).unwrap();
            let members = ft
                .members
                .iter()
                .map(|(enc, r)| {
                    let sub = parse_encoding(enc).unwrap();
                    CkGenerator::new(&sub, label(&sub, *r)).unwrap()
                })
                .collect();
            t.add_term(Monomial::gen(q), Monomial::from_factors(members), int(1));
        }
        assert_eq!(t, coproduct(&h, &Element::gen(g.clone())).unwrap(), "{g}");
    }
}

#[test]
fn rota_baxter_models() {
    for model in [RotaBaxterModel::EvalAtZero, RotaBaxterModel::PolePart] {
        let rep = rota_baxter_check(model, 200, 2024);
        assert!(rep.all_passed(), "{rep:?}");
    }
    let rep = rota_baxter_check(RotaBaxterModel::Taylor(1), 200, 2024);
    assert!(rep.passed < rep.trials && !rep.counterexamples.is_empty());
    assert!(rota_baxter_check(RotaBaxterModel::Taylor(0), 200, 7).all_passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_at_zero_both_sides_are_twice_the_product(
        a in prop::collection::vec(-20i64..20, 1..5),
        b in prop::collection::vec(-20i64..20, 1..5),
        d0 in 1i64..9,
        e0 in 1i64..9,
    ) {
        let f = RationalFunction { num: a.iter().map(|&x| int(x)).collect(), den: vec![int(d0), int(3)] };
        let g = RationalFunction { num: b.iter().map(|&x| int(x)).collect(), den: vec![int(e0), int(-1), int(2)] };
        let (l, r) = eval_at_zero_sides(&f, &g);
        let want = f.at_zero() * g.at_zero() * int(2);
        prop_assert_eq!(&l, &want);
        prop_assert_eq!(&r, &want);
        prop_assert_eq!(f.at_zero(), rat(a[0], d0));
    }
}
