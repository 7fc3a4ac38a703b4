use num_traits::{One, Zero};
use proptest::prelude::*;
use renorm_core::ring::{int, rat, Poly, Rational};
use renorm_core::series::{
    diff_compose, diff_inverse, dyson_transform, semidirect_inverse, semidirect_mul, series_mul, series_pow,
    series_recip, SemidirectPair, SeriesKind, TruncatedSeries, BARE_MASS_SYMBOL,
};

fn sym(name: &str) -> Poly {
    Poly::symbol(name)
}

fn symbolic(kind: SeriesKind, prefix: &str, order: usize) -> TruncatedSeries<Poly> {
    let mut c = vec![Poly::one()];
    c.extend((1..=order).map(|i| sym(&format!("{prefix}{i}"))));
    TruncatedSeries::new(kind, c).unwrap()
}

#[test]
fn reciprocal_identities() {
    let f = symbolic(SeriesKind::Invertible, "f", 2);
    let r = series_recip(&f).unwrap();
    let (f1, f2) = (sym("f1"), sym("f2"));
    assert_eq!(r.coeff(1), &(Poly::zero() - f1.clone()));
    assert_eq!(r.coeff(2), &(&f1 * &f1 - f2));
}

#[test]
fn composition_through_z4() {
    // f(g(z)) = g + f₁g² + f₂g³ + f₃g⁴ expanded by hand.
    let f = symbolic(SeriesKind::Diffeomorphism, "f", 3);
    let g = symbolic(SeriesKind::Diffeomorphism, "g", 3);
    let h = diff_compose(&f, &g).unwrap();
    let (f1, f2, f3) = (sym("f1"), sym("f2"), sym("f3"));
    let (g1, g2, g3) = (sym("g1"), sym("g2"), sym("g3"));
    assert_eq!(h.coeff(1), &(&f1 + &g1));
    assert_eq!(h.coeff(2), &(&(&g2 + &f2) + &(&f1 * &g1).scale(&int(2))));
    let z4 = &(&(&g3 + &f3) + &(&f1 * &(&g2.scale(&int(2)) + &(&g1 * &g1)))) + &(&f2 * &g1).scale(&int(3));
    assert_eq!(h.coeff(3), &z4);
    let inv = diff_inverse(&f).unwrap();
    assert_eq!(inv.coeff(1), &(Poly::zero() - f1.clone()));
    assert_eq!(inv.coeff(2), &(&(&f1 * &f1).scale(&int(2)) - &f2));
}

#[test]
fn compose_small_example() {
    let f = TruncatedSeries::<Poly>::parse_in("z+z^2", "z", SeriesKind::Diffeomorphism, 3).unwrap();
    let h = diff_compose(&f, &f).unwrap();
    let want: Vec<Poly> = [0, 1, 2, 2, 1].iter().map(|&c| Poly::from_int(c)).collect();
    assert_eq!(h.z_coefficients(), want);
}

#[test]
fn dyson_transform_with_trivial_factors() {
    // Z = 1 maps m_b → m and λ_b → λ.
    let one = TruncatedSeries::<Poly>::identity(SeriesKind::Invertible, 3);
    let g = TruncatedSeries::new(
        SeriesKind::Plain,
        vec![sym(BARE_MASS_SYMBOL), Poly::zero(), &sym(BARE_MASS_SYMBOL) * &sym(BARE_MASS_SYMBOL), Poly::one()],
    )
    .unwrap();
    let out = dyson_transform(&g, &one, &one, &one, 2, &sym("m")).unwrap();
    assert_eq!(out.coeffs(), &[sym("m"), Poly::zero(), &sym("m") * &sym("m"), Poly::one()]);
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn series(kind: SeriesKind, order: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
    prop::collection::vec(rational(), order).prop_map(move |mut c| {
        c.insert(0, Rational::one());
        TruncatedSeries::new(kind, c).unwrap()
    })
}

fn triple(kind: SeriesKind) -> impl Strategy<Value = (TruncatedSeries<Rational>, TruncatedSeries<Rational>, TruncatedSeries<Rational>)> {
    (1usize..=10).prop_flat_map(move |n| (series(kind, n), series(kind, n), series(kind, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invertible_series_form_a_group((f, g, h) in triple(SeriesKind::Invertible)) {
        let e = TruncatedSeries::identity(SeriesKind::Invertible, f.order());
        let fg_h = series_mul(&series_mul(&f, &g).unwrap(), &h).unwrap();
        let f_gh = series_mul(&f, &series_mul(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(&fg_h, &f_gh);
        prop_assert_eq!(&series_mul(&f, &e).unwrap(), &f);
        prop_assert_eq!(&series_mul(&f, &series_recip(&f).unwrap()).unwrap(), &e);
        prop_assert_eq!(series_mul(&f, &g).unwrap(), series_mul(&g, &f).unwrap());
        let sq = series_pow(&f, &rat(1, 2)).unwrap();
        prop_assert_eq!(&series_mul(&sq, &sq).unwrap(), &f);
    }

    #[test]
    fn diffeomorphisms_form_a_group((f, g, h) in triple(SeriesKind::Diffeomorphism)) {
        let e = TruncatedSeries::identity(SeriesKind::Diffeomorphism, f.order());
        let a = diff_compose(&diff_compose(&f, &g).unwrap(), &h).unwrap();
        let b = diff_compose(&f, &diff_compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(&diff_compose(&f, &e).unwrap(), &f);
        prop_assert_eq!(&diff_compose(&e, &f).unwrap(), &f);
        let inv = diff_inverse(&f).unwrap();
        prop_assert_eq!(&diff_compose(&f, &inv).unwrap(), &e);
        prop_assert_eq!(&diff_compose(&inv, &f).unwrap(), &e);
    }

    #[test]
    fn semidirect_product_is_a_group(
        (d1, d2, d3) in triple(SeriesKind::Diffeomorphism),
        seed in any::<u64>(),
    ) {
        let n = d1.order();
        let mk = |s: u64| {
            let c: Vec<Rational> = (0..=n).map(|i| if i == 0 { Rational::one() } else { rat(((s >> (i % 60)) % 11) as i64 - 5, 1 + (i as i64 % 4)) }).collect();
            TruncatedSeries::new(SeriesKind::Invertible, c).unwrap()
        };
        let a = SemidirectPair::new(d1, mk(seed)).unwrap();
        let b = SemidirectPair::new(d2, mk(seed.rotate_left(17))).unwrap();
        let c = SemidirectPair::new(d3, mk(seed.rotate_left(33))).unwrap();
        let ab_c = semidirect_mul(&semidirect_mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = semidirect_mul(&a, &semidirect_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let e = SemidirectPair::identity(n);
        prop_assert_eq!(semidirect_mul(&a, &semidirect_inverse(&a).unwrap()).unwrap(), e.clone());
        prop_assert_eq!(semidirect_mul(&e, &a).unwrap(), a);
    }
}

#[test]
fn dyson_transform_of_the_coupling() {
    // G = λ_b with k = 0 returns λ Z1 Z3^{-3/2}.
    let z1 = symbolic(SeriesKind::Invertible, "a", 3);
    let z3 = symbolic(SeriesKind::Invertible, "b", 3);
    let zm = symbolic(SeriesKind::Invertible, "c", 3);
    let g = TruncatedSeries::new(SeriesKind::Plain, vec![Poly::zero(), Poly::one(), Poly::zero(), Poly::zero()]).unwrap();
    let out = dyson_transform(&g, &z3, &zm, &z1, 0, &sym("m")).unwrap();
    let lb = renorm_core::series::bare_coupling(&z1, &z3).unwrap();
    assert_eq!(out.coeffs(), &lb.z_coefficients()[..4]);
    let (a1, b1) = (sym("a1"), sym("b1"));
    assert_eq!(out.coeff(2), &(&a1 - &b1.scale(&rat(3, 2))));
}
