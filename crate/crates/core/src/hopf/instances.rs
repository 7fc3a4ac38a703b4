//! Concrete Hopf algebras: unshuffle, symmetric functions, Faà di Bruno, SL2 and GL2.

use std::fmt;

use num_traits::{One, Zero};

use super::{Element, HopfAlgebra, Monomial, SeriesRealization, Tensor};
use crate::error::{Error, Result};
use crate::ring::{int, Rational};
use crate::series::SeriesKind;

/// Indexed generator `x_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct X(pub usize);

impl fmt::Display for X {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

fn primitive(g: X) -> Tensor<X> {
    let mut t = Tensor::default();
    t.add_term(Monomial::gen(g), Monomial::one(), Rational::one());
    t.add_term(Monomial::one(), Monomial::gen(g), Rational::one());
    t
}

/// Polynomials in `vars` variables, each primitive: `Δx_i = x_i ⊗ 1 + 1 ⊗ x_i`.
#[derive(Clone, Copy, Debug)]
pub struct Unshuffle {
    pub vars: usize,
}

impl HopfAlgebra for Unshuffle {
    type Gen = X;

    fn name(&self) -> String {
        format!("unshuffle({})", self.vars)
    }

    fn grade(&self, _g: &X) -> usize {
        1
    }

    fn coproduct_gen(&self, g: &X) -> Result<Tensor<X>> {
        Ok(primitive(*g))
    }

    fn counit_gen(&self, _g: &X) -> Rational {
        Rational::zero()
    }

    fn antipode_closed(&self, g: &X) -> Option<Element<X>> {
        Some(-Element::gen(*g))
    }

    fn is_cocommutative(&self) -> bool {
        true
    }

    fn generators_up_to(&self, max_grade: usize) -> Vec<X> {
        if max_grade == 0 {
            return Vec::new();
        }
        (1..=self.vars).map(X).collect()
    }

    fn check_generator(&self, g: &X) -> Result<()> {
        if g.0 == 0 || g.0 > self.vars {
            return Err(Error::UnknownGenerator(format!("{g} is not among x1..x{}", self.vars)));
        }
        Ok(())
    }
}

/// Coordinates of invertible series: `Δx_n = Σ_{k=0}^n x_k ⊗ x_{n-k}` with `x_0 = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetricFunctions;

fn x_mono(n: usize) -> Monomial<X> {
    if n == 0 {
        Monomial::one()
    } else {
        Monomial::gen(X(n))
    }
}

fn check_indexed(g: &X) -> Result<()> {
    if g.0 == 0 {
        return Err(Error::UnknownGenerator("x0 is the unit, not a generator".into()));
    }
    Ok(())
}

impl HopfAlgebra for SymmetricFunctions {
    type Gen = X;

    fn name(&self) -> String {
        "symmetric".into()
    }

    fn grade(&self, g: &X) -> usize {
        g.0
    }

    fn coproduct_gen(&self, g: &X) -> Result<Tensor<X>> {
        check_indexed(g)?;
        let mut t = Tensor::default();
        for k in 0..=g.0 {
            t.add_term(x_mono(k), x_mono(g.0 - k), Rational::one());
        }
        Ok(t)
    }

    fn counit_gen(&self, _g: &X) -> Rational {
        Rational::zero()
    }

    fn is_cocommutative(&self) -> bool {
        true
    }

    fn generators_up_to(&self, max_grade: usize) -> Vec<X> {
        (1..=max_grade).map(X).collect()
    }

    fn check_generator(&self, g: &X) -> Result<()> {
        check_indexed(g)
    }
}

impl SeriesRealization for SymmetricFunctions {
    fn series_kind(&self) -> SeriesKind {
        SeriesKind::Invertible
    }
    fn coefficient_generator(&self, n: usize) -> X {
        X(n)
    }
}

/// Coordinates of formal diffeomorphisms `z + Σ x_n z^{n+1}` under composition.
///
/// `Δx_n = Σ_{m=0}^n x_m ⊗ [z^{n-m}] (Σ_p x_p z^p)^{m+1}`, `x_0 = 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FaaDiBruno;

impl HopfAlgebra for FaaDiBruno {
    type Gen = X;

    fn name(&self) -> String {
        "faa-di-bruno".into()
    }

    fn grade(&self, g: &X) -> usize {
        g.0
    }

    fn coproduct_gen(&self, g: &X) -> Result<Tensor<X>> {
        check_indexed(g)?;
        let n = g.0;
        // base[p] = x_p as an element; power holds base^{m+1} truncated at z^n.
        let base: Vec<Element<X>> = (0..=n).map(|p| Element::from_monomial(x_mono(p))).collect();
        let mut power = base.clone();
        let mut t = Tensor::default();
        for m in 0..=n {
            if m > 0 {
                let mut next = vec![Element::zero(); n + 1];
                for (i, a) in power.iter().enumerate() {
                    for (j, b) in base.iter().enumerate().take(n + 1 - i) {
                        next[i + j] = next[i + j].clone() + a * b;
                    }
                }
                power = next;
            }
            for (r, c) in power[n - m].terms() {
                t.add_term(x_mono(m), r.clone(), c.clone());
            }
        }
        Ok(t)
    }

    fn counit_gen(&self, _g: &X) -> Rational {
        Rational::zero()
    }

    fn is_cocommutative(&self) -> bool {
        false
    }

    fn generators_up_to(&self, max_grade: usize) -> Vec<X> {
        (1..=max_grade).map(X).collect()
    }

    fn check_generator(&self, g: &X) -> Result<()> {
        check_indexed(g)
    }
}

impl SeriesRealization for FaaDiBruno {
    fn series_kind(&self) -> SeriesKind {
        SeriesKind::Diffeomorphism
    }
    fn coefficient_generator(&self, n: usize) -> X {
        X(n)
    }
}

/// Matrix coordinate functions; `T` is the inverse determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatrixGen {
    A,
    B,
    C,
    D,
    T,
}

impl fmt::Display for MatrixGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MatrixGen::A => "a",
            MatrixGen::B => "b",
            MatrixGen::C => "c",
            MatrixGen::D => "d",
            MatrixGen::T => "t",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for MatrixGen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(MatrixGen::A),
            "b" => Ok(MatrixGen::B),
            "c" => Ok(MatrixGen::C),
            "d" => Ok(MatrixGen::D),
            "t" => Ok(MatrixGen::T),
            _ => Err(Error::UnknownGenerator(s.into())),
        }
    }
}

use MatrixGen::{A, B, C, D, T};

fn matrix_coproduct(g: &MatrixGen) -> Tensor<MatrixGen> {
    // Δ m_ij = Σ_k m_ik ⊗ m_kj for the matrix [[a, b], [c, d]].
    let pairs: &[(MatrixGen, MatrixGen)] = match g {
        A => &[(A, A), (B, C)],
        B => &[(A, B), (B, D)],
        C => &[(C, A), (D, C)],
        D => &[(C, B), (D, D)],
        T => &[(T, T)],
    };
    let mut t = Tensor::default();
    for (l, r) in pairs {
        t.add_term(Monomial::gen(*l), Monomial::gen(*r), Rational::one());
    }
    t
}

fn matrix_counit(g: &MatrixGen) -> Rational {
    match g {
        B | C => Rational::zero(),
        _ => Rational::one(),
    }
}

/// Rewrites every monomial divisible by `lead` into `1 + rest` repeatedly.
///
/// `lead` is the leading monomial of the single defining relation under lex
/// order with `a` largest, so the rewriting terminates in a unique normal form.
fn reduce(e: Element<MatrixGen>, lead: &[MatrixGen], rest: &[MatrixGen]) -> Element<MatrixGen> {
    let mut todo = e;
    let mut done = Element::zero();
    while !todo.is_zero() {
        let mut next = Element::zero();
        for (m, c) in todo.terms() {
            let mut fs = m.factors().to_vec();
            let mut ok = true;
            for l in lead {
                match fs.iter().position(|x| x == l) {
                    Some(i) => {
                        fs.remove(i);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                done.add_term(m.clone(), c.clone());
                continue;
            }
            let quotient = Monomial::from_factors(fs);
            next.add_term(quotient.clone(), c.clone());
            next.add_term(quotient.mul(&Monomial::from_factors(rest.to_vec())), c.clone());
        }
        todo = next;
    }
    done
}

/// `C[a,b,c,d] / (ad - bc - 1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sl2;

impl HopfAlgebra for Sl2 {
    type Gen = MatrixGen;

    fn name(&self) -> String {
        "sl2".into()
    }

    fn grade(&self, _g: &MatrixGen) -> usize {
        0
    }

    fn coproduct_gen(&self, g: &MatrixGen) -> Result<Tensor<MatrixGen>> {
        self.check_generator(g)?;
        Ok(matrix_coproduct(g))
    }

    fn counit_gen(&self, g: &MatrixGen) -> Rational {
        matrix_counit(g)
    }

    fn antipode_closed(&self, g: &MatrixGen) -> Option<Element<MatrixGen>> {
        Some(match g {
            A => Element::gen(D),
            B => -Element::gen(B),
            C => -Element::gen(C),
            D => Element::gen(A),
            T => return None,
        })
    }

    fn normalize(&self, e: Element<MatrixGen>) -> Element<MatrixGen> {
        reduce(e, &[A, D], &[B, C])
    }

    fn is_graded_connected(&self) -> bool {
        false
    }

    fn is_cocommutative(&self) -> bool {
        false
    }

    fn generators_up_to(&self, _max_grade: usize) -> Vec<MatrixGen> {
        vec![A, B, C, D]
    }

    fn check_generator(&self, g: &MatrixGen) -> Result<()> {
        if *g == T {
            return Err(Error::UnknownGenerator("t is not a coordinate of sl2".into()));
        }
        Ok(())
    }
}

/// `C[a,b,c,d,t] / ((ad - bc)t - 1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gl2;

impl HopfAlgebra for Gl2 {
    type Gen = MatrixGen;

    fn name(&self) -> String {
        "gl2".into()
    }

    fn grade(&self, _g: &MatrixGen) -> usize {
        0
    }

    fn coproduct_gen(&self, g: &MatrixGen) -> Result<Tensor<MatrixGen>> {
        Ok(matrix_coproduct(g))
    }

    fn counit_gen(&self, g: &MatrixGen) -> Rational {
        matrix_counit(g)
    }

    /// Entries of the inverse matrix `t·[[d, -b], [-c, a]]`, and `S(t) = ad - bc`.
    fn antipode_closed(&self, g: &MatrixGen) -> Option<Element<MatrixGen>> {
        let m = |v: Vec<MatrixGen>| Element::from_monomial(Monomial::from_factors(v));
        Some(match g {
            A => m(vec![D, T]),
            B => -m(vec![B, T]),
            C => -m(vec![C, T]),
            D => m(vec![A, T]),
            T => m(vec![A, D]) - m(vec![B, C]),
        })
    }

    fn normalize(&self, e: Element<MatrixGen>) -> Element<MatrixGen> {
        reduce(e, &[A, D, T], &[B, C, T])
    }

    fn is_graded_connected(&self) -> bool {
        false
    }

    fn is_cocommutative(&self) -> bool {
        false
    }

    fn generators_up_to(&self, _max_grade: usize) -> Vec<MatrixGen> {
        vec![A, B, C, D, T]
    }
}

/// Closed-form antipode of the symmetric-function generators, used as a test oracle:
/// `S(x_n) = Σ over compositions (n_1..n_k) of n of (-1)^k x_{n_1}...x_{n_k}`.
pub fn symmetric_antipode_oracle(n: usize) -> Element<X> {
    fn rec(rest: usize, acc: &mut Vec<usize>, out: &mut Element<X>) {
        if rest == 0 {
            let sign = if acc.len().is_multiple_of(2) { 1 } else { -1 };
            out.add_term(Monomial::from_factors(acc.iter().map(|&k| X(k)).collect()), int(sign));
            return;
        }
        for k in 1..=rest {
            acc.push(k);
            rec(rest - k, acc, out);
            acc.pop();
        }
    }
    let mut out = Element::zero();
    rec(n, &mut Vec::new(), &mut out);
    out
}
