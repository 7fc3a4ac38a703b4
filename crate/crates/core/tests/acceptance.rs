//! One PASS/FAIL line per acceptance criterion.
//!
//! Exits non-zero only when a criterion fails that is not in `KNOWN_DEVIATIONS`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renorm_core::bphz::engine::{rational_from_f64, ExternalMomenta, NumericBphz, RegulatorConfig};
use renorm_core::bphz::ladder::{renormalization_ladder, tail_slope};
use renorm_core::bphz::quadrature::QuadratureSpec;
use renorm_core::bphz::rota_baxter::{rota_baxter_check, RotaBaxterModel};
use renorm_core::bphz::Bphz;
use renorm_core::ck::{bare_coupling_series, ck_generators, hd_to_hck, project_pi, z_factor_series, CkGenerator, CkHopf};
use renorm_core::graphs::{
    extract_subgraph, generate_graphs, named, FeynmanGraph, GenSpec, GraphClass,
};
use renorm_core::greens::{ds_expansion, el_tree_expansion, Sources};
use renorm_core::hopf::instances::{FaaDiBruno, Gl2, Sl2, SymmetricFunctions, Unshuffle, X};
use renorm_core::hopf::{
    check_hopf_axioms, character_series, convolve, coproduct, Character, Element, HopfAlgebra, Monomial, Tensor,
};
use renorm_core::ring::{int, rat, Poly, Rational};
use renorm_core::series::{
    diff_compose, diff_inverse, dyson_transform, series_mul, series_recip, SeriesKind, TruncatedSeries,
};

type Outcome = Result<(), String>;

/// Criteria expected to fail, with the reason recorded in the decisions ledger.
const KNOWN_DEVIATIONS: &[(u32, &str)] = &[(
    3,
    "displayed 1/Sym weights at ħ²λ³ (one-point) and ħ²λ⁴ (two-point) differ from automorphism counts",
)];

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sym(name: &str) -> Poly {
    Poly::symbol(name)
}

fn symbolic(kind: SeriesKind, prefix: &str, order: usize) -> TruncatedSeries<Poly> {
    let mut c = vec![Poly::one()];
    c.extend((1..=order).map(|i| sym(&format!("{prefix}{i}"))));
    TruncatedSeries::new(kind, c).expect("unit constant term")
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-12..=12), rng.random_range(1..=7))
}

fn random_series(rng: &mut ChaCha8Rng, kind: SeriesKind, order: usize) -> TruncatedSeries<Rational> {
    let mut c = vec![Rational::one()];
    c.extend((0..order).map(|_| random_rational(rng)));
    TruncatedSeries::new(kind, c).expect("unit constant term")
}

fn criterion_1() -> Outcome {
    let f = symbolic(SeriesKind::Invertible, "f", 2);
    let r = series_recip(&f).map_err(|e| e.to_string())?;
    let (f1, f2) = (sym("f1"), sym("f2"));
    ensure(r.coeff(1) == &(Poly::zero() - f1.clone()), "(f⁻¹)₁ ≠ −f₁")?;
    ensure(r.coeff(2) == &(&f1 * &f1 - f2.clone()), "(f⁻¹)₂ ≠ f₁² − f₂")?;
    let f = symbolic(SeriesKind::Diffeomorphism, "f", 3);
    let g = symbolic(SeriesKind::Diffeomorphism, "g", 3);
    let h = diff_compose(&f, &g).map_err(|e| e.to_string())?;
    let (f3, g1, g2, g3) = (sym("f3"), sym("g1"), sym("g2"), sym("g3"));
    ensure(h.coeff(1) == &(&f1 + &g1), "z² coefficient")?;
    ensure(h.coeff(2) == &(&(&g2 + &f2) + &(&f1 * &g1).scale(&int(2))), "z³ coefficient")?;
    let z4 = &(&(&g3 + &f3) + &(&f1 * &(&g2.scale(&int(2)) + &(&g1 * &g1)))) + &(&f2 * &g1).scale(&int(3));
    ensure(h.coeff(3) == &z4, "z⁴ coefficient")?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let n = rng.random_range(1..=10);
        for kind in [SeriesKind::Invertible, SeriesKind::Diffeomorphism] {
            let (a, b, c) = (random_series(&mut rng, kind, n), random_series(&mut rng, kind, n), random_series(&mut rng, kind, n));
            let e = TruncatedSeries::identity(kind, n);
            let (op, inv): (fn(&_, &_) -> _, fn(&_) -> _) = match kind {
                SeriesKind::Invertible => (series_mul::<Rational>, series_recip::<Rational>),
                _ => (diff_compose::<Rational>, diff_inverse::<Rational>),
            };
            let ab_c = op(&op(&a, &b).map_err(|e| e.to_string())?, &c).map_err(|e| e.to_string())?;
            let a_bc = op(&a, &op(&b, &c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(ab_c == a_bc, format!("{kind} associativity"))?;
            ensure(op(&a, &e).map_err(|e| e.to_string())? == a, format!("{kind} identity"))?;
            let ai = inv(&a).map_err(|e| e.to_string())?;
            ensure(op(&a, &ai).map_err(|e| e.to_string())? == e, format!("{kind} inverse"))?;
            ensure(op(&ai, &a).map_err(|e| e.to_string())? == e, format!("{kind} left inverse"))?;
        }
    }
    Ok(())
}

fn random_character<H: HopfAlgebra<Gen = X>>(h: &H, rng: &mut ChaCha8Rng) -> Character<X, Rational> {
    Character::new(h.name(), (1..=8).map(|i| (X(i), random_rational(rng))).collect::<BTreeMap<_, _>>())
}

fn criterion_2() -> Outcome {
    let reports = [
        ("unshuffle", check_hopf_axioms(&Unshuffle { vars: 2 }, 6)),
        ("symmetric", check_hopf_axioms(&SymmetricFunctions, 6)),
        ("faa-di-bruno", check_hopf_axioms(&FaaDiBruno, 6)),
        ("sl2", check_hopf_axioms(&Sl2, 0)),
        ("gl2", check_hopf_axioms(&Gl2, 0)),
    ];
    for (name, r) in &reports {
        ensure(r.all_passed(), format!("{name}: {:?}", r.failures().next()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let (a, b) = (random_character(&SymmetricFunctions, &mut rng), random_character(&SymmetricFunctions, &mut rng));
        let conv = convolve(&SymmetricFunctions, &a, &b).map_err(|e| e.to_string())?;
        let lhs = character_series(&SymmetricFunctions, &conv, 8).map_err(|e| e.to_string())?;
        let rhs = series_mul(
            &character_series(&SymmetricFunctions, &a, 8).map_err(|e| e.to_string())?,
            &character_series(&SymmetricFunctions, &b, 8).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, "convolution ≠ series product")?;
        let (a, b) = (random_character(&FaaDiBruno, &mut rng), random_character(&FaaDiBruno, &mut rng));
        let conv = convolve(&FaaDiBruno, &a, &b).map_err(|e| e.to_string())?;
        let lhs = character_series(&FaaDiBruno, &conv, 8).map_err(|e| e.to_string())?;
        let rhs = diff_compose(
            &character_series(&FaaDiBruno, &a, 8).map_err(|e| e.to_string())?,
            &character_series(&FaaDiBruno, &b, 8).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, "convolution ≠ composition")?;
    }
    Ok(())
}

fn weights_at(terms: &[renorm_core::greens::ExpansionTerm], order: usize) -> Vec<Rational> {
    let mut v: Vec<Rational> = terms.iter().filter(|t| t.vertices == order).map(|t| int(1) / t.sym.clone()).collect();
    v.sort();
    v
}

fn criterion_3() -> Outcome {
    let mut problems = Vec::new();
    let trees = el_tree_expansion(3).map_err(|e| e.to_string())?;
    let displayed = [(0, int(1)), (1, rat(1, 2)), (2, rat(1, 2)), (3, rat(1, 8))];
    for (n, w) in displayed {
        if !weights_at(&trees, n).contains(&w) {
            problems.push(format!("tree λ^{n}: {w} missing"));
        }
    }
    let one = ds_expansion(1, Sources::J0, 3).map_err(|e| e.to_string())?;
    if weights_at(&one, 1) != vec![rat(1, 2)] {
        problems.push("ħλ/2 tadpole".into());
    }
    let got = weights_at(&one, 3);
    if got != vec![rat(1, 4), rat(1, 4)] {
        problems.push(format!("one-point λ³: got {} terms {:?}, displayed [1/4, 1/4]", got.len(), got.iter().map(|q| q.to_string()).collect::<Vec<_>>()));
    }
    let two = ds_expansion(2, Sources::J0, 4).map_err(|e| e.to_string())?;
    if weights_at(&two, 2) != vec![rat(1, 2), rat(1, 2)] {
        problems.push("two-point ħλ² terms".into());
    }
    let got = weights_at(&two, 4);
    let mut want = vec![rat(1, 2); 2];
    want.extend(vec![rat(1, 4); 8]);
    want.sort();
    if got != want {
        let count = |w: Rational| got.iter().filter(|x| **x == w).count();
        problems.push(format!(
            "two-point λ⁴: {} terms with 1/2, {} with 1/4, {} with 1/8; displayed 2 and 8",
            count(rat(1, 2)),
            count(rat(1, 4)),
            count(rat(1, 8))
        ));
    }
    ensure(problems.is_empty(), problems.join("; "))
}

fn induced_omegas(g: &FeynmanGraph, d: i64) -> Result<Vec<i64>, String> {
    let inner = g.non_leg_vertices();
    let mut out = Vec::new();
    for mask in 1u32..(1 << inner.len()) - 1 {
        let vs: Vec<usize> = inner.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();
        let sub = extract_subgraph(g, &vs).map_err(|e| e.to_string())?;
        if sub.loops() > 0 && sub.is_connected() && sub.is_1pi().map_err(|e| e.to_string())? {
            out.push(sub.omega(d));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn criterion_4() -> Outcome {
    ensure(named::oneloop_se().omega(4) == 0, "D=4 one-loop")?;
    ensure(named::oneloop_se().omega(6) == 2, "D=6 one-loop")?;
    ensure(named::triangle().omega(6) == 0, "D=6 triangle")?;
    let mut spec = GenSpec::new(2, 6, GraphClass::OnePi);
    spec.min_vertices = 6;
    let six = generate_graphs(&spec).map_err(|e| e.to_string())?;
    ensure(!six.is_empty() && six.iter().all(|g| g.internal_count() != 6 || g.omega(4) == -4), "D=4 E=2 V=6")?;
    let nested = induced_omegas(&named::nested2loop(), 6)?;
    ensure(named::nested2loop().omega(6) == 0 && nested.contains(&0) && nested.contains(&-2), format!("nested subgraphs {nested:?}"))?;
    let b = named::threeloop_b();
    let divergent: Vec<i64> = renorm_core::graphs::divergent_subgraphs(&b, 6)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| extract_subgraph(&b, &s.vertices).map(|g| g.omega(6)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(b.omega(6) == 2 && !divergent.is_empty() && divergent.iter().all(|&w| w == 2), format!("three-loop {divergent:?}"))
}

fn criterion_5() -> Outcome {
    let h = CkHopf::new();
    let big = CkGenerator::new(&named::nested2loop(), None).map_err(|e| e.to_string())?;
    let tri = CkGenerator::new(&named::triangle(), None).map_err(|e| e.to_string())?;
    let d = coproduct(&h, &Element::gen(big.clone())).map_err(|e| e.to_string())?;
    let mut want = Tensor::default();
    want.add_term(Monomial::gen(big.clone()), Monomial::one(), int(1));
    want.add_term(Monomial::one(), Monomial::gen(big), int(1));
    want.add_term(Monomial::gen(tri.clone()), Monomial::gen(tri), int(1));
    ensure(d == want, "nested coproduct")?;
    let r = check_hopf_axioms(&h, 3);
    ensure(r.all_passed(), format!("{:?}", r.failures().next()))
}

fn criterion_6() -> Outcome {
    let spec = QuadratureSpec::monte_carlo(1_000_000, 42);
    let p = ExternalMomenta::along_axes(1, 1.0, 4).map_err(|e| e.to_string())?;
    let rep = renormalization_ladder(&named::oneloop_se(), &p, 4, &[10.0, 20.0, 40.0, 80.0], &spec).map_err(|e| e.to_string())?;
    ensure(rep.bare_fit.slope > 0.0 && rep.bare_fit.r2 >= 0.999, format!("bare fit {:?}", rep.bare_fit))?;
    for w in rep.cauchy.windows(2) {
        let s = w[0].sigma.unwrap_or(0.0).hypot(1.5 * w[1].sigma.unwrap_or(0.0));
        ensure(1.5 * w[1].difference.abs() <= w[0].difference.abs() + 2.0 * s, format!("Cauchy steps {w:?}"))?;
    }
    for (d, g, want, tol) in [(4, named::oneloop_se(), -5.0, 0.3), (6, named::oneloop_se(), -7.0, 0.5), (6, named::triangle(), -7.0, 0.5)] {
        let f = Bphz::new(d).and_then(|b| b.subtracted_integrand_exact(&g)).map_err(|e| e.to_string())?;
        let p = ExternalMomenta::along_axes(f.externals, 1.0, d as usize).map_err(|e| e.to_string())?;
        let fit = tail_slope(&f, &p, d as usize, 10.0, 1000.0, 25).map_err(|e| e.to_string())?;
        ensure((fit.slope - want).abs() <= tol, format!("D={d} tail slope {}", fit.slope))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let nb = NumericBphz::new(RegulatorConfig::new(6, 20.0, 1000, 7)).map_err(|e| e.to_string())?;
    for g in [named::oneloop_se(), named::triangle(), named::nested2loop()] {
        let p = ExternalMomenta::along_axes(g.leg_count() - 1, 1.0, 6).map_err(|e| e.to_string())?;
        let rep = nb.check_ar_equals_a_star_c(&g, &p).map_err(|e| e.to_string())?;
        ensure(rep.relative_deviation <= 1e-9, format!("{}: deviation {:e}", rep.graph, rep.relative_deviation))?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    for model in [RotaBaxterModel::EvalAtZero, RotaBaxterModel::PolePart] {
        let r = rota_baxter_check(model, 200, 8);
        ensure(r.all_passed(), format!("{model}: {} of {}", r.passed, r.trials))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let err = |e: renorm_core::Error| e.to_string();
    let nb = NumericBphz::new(RegulatorConfig::new(6, 20.0, 20_000, 9)).map_err(err)?;
    let gens = ck_generators(1).map_err(err)?;
    let character = |nb: &NumericBphz| -> Result<Character<CkGenerator, Rational>, String> {
        let mut values = BTreeMap::new();
        for g in &gens {
            let c = nb.counterterm(&g.graph(), g.label.unwrap_or(0)).map_err(err)?;
            values.insert(g.clone(), rational_from_f64(c).map_err(err)?);
        }
        Ok(Character::new("ck", values))
    };
    let alpha = character(&nb)?;
    ensure(alpha == character(&nb)?, "memoized values changed")?;
    let z = z_factor_series(1).map_err(err)?;
    let lift = |c: &Rational| c.clone();
    // Odd λ powers of every Z vanish, so padding order 2 to order 3 with zero is exact.
    let pad = |s: &renorm_core::ck::GraphSeries<Rational>| -> Result<TruncatedSeries<Poly>, String> {
        let p = project_pi(&s.evaluate(&alpha, lift).map_err(err)?).map_err(err)?;
        let mut c: Vec<Poly> = p.coeffs().iter().map(|q| Poly::constant(q.clone())).collect();
        c.push(Poly::zero());
        TruncatedSeries::new(SeriesKind::Invertible, c).map_err(err)
    };
    let (z1, z3, zm) = (pad(&z.z1)?, pad(&z.z3)?, pad(&z.zm)?);
    let g = TruncatedSeries::new(SeriesKind::Plain, vec![Poly::zero(), Poly::one(), Poly::zero(), Poly::zero()]).map_err(err)?;
    let lb = dyson_transform(&g, &z3, &zm, &z1, 0, &Poly::symbol("m")).map_err(err)?;
    let x1 = alpha.eval(&hd_to_hck(1, 1).map_err(err)?).map_err(err)?;
    ensure(Poly::constant(x1.clone()) == *lb.coeff(2), format!("x₁: {x1} vs {}", lb.coeff(2)))?;
    let x2 = alpha.eval(&hd_to_hck(2, 1).map_err(err)?).map_err(err)?;
    ensure(Poly::constant(x2.clone()) == *lb.coeff(3), format!("x₂: {x2} vs {}", lb.coeff(3)))?;
    let pi = project_pi(&bare_coupling_series(&z).map_err(err)?.evaluate(&alpha, lift).map_err(err)?).map_err(err)?;
    ensure(pi.coeff(2) == &x2, format!("π(λ_b) at λ³: {} vs {x2}", pi.coeff(2)))?;
    ensure(!x2.is_zero(), "λ³ coefficient unexpectedly zero")
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    renorm_core::bphz::configure_threads_from_env();
    let criteria: [Criterion; 9] = [
        (1, "series groups: inversion, composition through z⁴, group axioms", criterion_1),
        (2, "Hopf axioms and character duality", criterion_2),
        (3, "expansion coefficients against the displayed expansions", criterion_3),
        (4, "superficial degree table", criterion_4),
        (5, "graph Hopf algebra: nested coproduct, axioms to three loops", criterion_5),
        (6, "cutoff ladder, Cauchy decrease and subtracted tails", criterion_6),
        (7, "Ar = A ⋆ C on shared nodes", criterion_7),
        (8, "Rota–Baxter identity on two models", criterion_8),
        (9, "Faà di Bruno inclusion against λ Z1 Z3^(-3/2)", criterion_9),
    ];
    let limits: BTreeMap<u32, Duration> =
        [(1, 10), (5, 120), (6, 300)].into_iter().map(|(k, s)| (k, Duration::from_secs(s))).collect();
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let t0 = Instant::now();
        let mut outcome = run();
        let elapsed = t0.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limits.get(&id)) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.1?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS [{id}] {title} ({elapsed:.2?})"),
            Err(msg) => {
                let known = KNOWN_DEVIATIONS.iter().find(|(k, _)| *k == id);
                match known {
                    Some((_, why)) => println!("FAIL [{id}] {title}: {msg} (known deviation: {why})"),
                    None => {
                        unexpected += 1;
                        println!("FAIL [{id}] {title}: {msg}");
                    }
                }
            }
        }
    }
    std::process::exit(if unexpected == 0 { 0 } else { 1 });
}
