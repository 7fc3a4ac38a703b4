//! Exact checks of `T[fg] + T[f]T[g] = T[T[f]g + fT[g]]` on toy models.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ring::{rat, Rational};

/// Finite Laurent series `Σ cₖ εᵏ`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent(pub BTreeMap<i32, Rational>);

impl Laurent {
    pub fn monomial(k: i32, c: Rational) -> Self {
        let mut l = Laurent::default();
        l.add_term(k, c);
        l
    }

    fn add_term(&mut self, k: i32, c: Rational) {
        let e = self.0.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// Terms with exponent in `range`.
    fn keep(&self, keep: impl Fn(i32) -> bool) -> Laurent {
        Laurent(self.0.iter().filter(|(k, _)| keep(**k)).map(|(k, c)| (*k, c.clone())).collect())
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, c)| format!("({c})e^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rational function `num(x)/den(x)` with `den(0) ≠ 0`; coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: Vec<Rational>,
    pub den: Vec<Rational>,
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

impl RationalFunction {
    pub fn constant(c: Rational) -> Self {
        RationalFunction { num: vec![c], den: vec![Rational::one()] }
    }

    pub fn at_zero(&self) -> Rational {
        let n = self.num.first().cloned().unwrap_or_else(Rational::zero);
        n / self.den[0].clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction { num: poly_mul(&self.num, &o.num), den: poly_mul(&self.den, &o.den) }
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalFunction {
            num: poly_add(&poly_mul(&self.num, &o.den), &poly_mul(&o.num, &self.den)),
            den: poly_mul(&self.den, &o.den),
        }
    }
}

/// Which operator `T` is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RotaBaxterModel {
    /// `T[f] = f(0)` on rational functions regular at the origin.
    EvalAtZero,
    /// Projection of Laurent polynomials onto strictly negative powers.
    PolePart,
    /// Truncation of polynomials to degree `≤ n`; fails the identity for `n ≥ 1`.
    Taylor(u32),
}

impl fmt::Display for RotaBaxterModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotaBaxterModel::EvalAtZero => write!(f, "eval-at-zero"),
            RotaBaxterModel::PolePart => write!(f, "pole-part"),
            RotaBaxterModel::Taylor(n) => write!(f, "taylor-{n}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RotaBaxterReport {
    pub model: RotaBaxterModel,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    /// Up to five violating pairs, as text.
    pub counterexamples: Vec<String>,
}

impl RotaBaxterReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=9))
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<Rational> {
    (0..=rng.random_range(0..=max_degree)).map(|_| small_rational(rng)).collect()
}

fn random_rational_function(rng: &mut ChaCha8Rng) -> RationalFunction {
    let num = random_poly(rng, 4);
    let mut den = random_poly(rng, 3);
    while den[0].is_zero() {
        den[0] = small_rational(rng);
    }
    RationalFunction { num, den }
}

fn random_laurent(rng: &mut ChaCha8Rng, lowest: i32, highest: i32) -> Laurent {
    let mut l = Laurent::default();
    for _ in 0..rng.random_range(1..=5) {
        l.add_term(rng.random_range(lowest..=highest), small_rational(rng));
    }
    l
}

/// Both sides of the identity for Laurent-type operators.
pub fn laurent_sides(t: &dyn Fn(&Laurent) -> Laurent, f: &Laurent, g: &Laurent) -> (Laurent, Laurent) {
    let (tf, tg) = (t(f), t(g));
    let lhs = t(&f.mul(g)).add(&tf.mul(&tg));
    let rhs = t(&tf.mul(g).add(&f.mul(&tg)));
    (lhs, rhs)
}

pub fn pole_part(l: &Laurent) -> Laurent {
    l.keep(|k| k < 0)
}

pub fn truncate(n: u32) -> impl Fn(&Laurent) -> Laurent {
    move |l: &Laurent| l.keep(|k| k >= 0 && k <= n as i32)
}

/// Both sides for `T[f] = f(0)`.
pub fn eval_at_zero_sides(f: &RationalFunction, g: &RationalFunction) -> (Rational, Rational) {
    let (tf, tg) = (f.at_zero(), g.at_zero());
    let lhs = f.mul(g).at_zero() + tf.clone() * tg.clone();
    let rhs = RationalFunction::constant(tf).mul(g).add(&f.mul(&RationalFunction::constant(tg))).at_zero();
    (lhs, rhs)
}

/// `trials` seeded random pairs, each side computed in exact arithmetic.
pub fn rota_baxter_check(model: RotaBaxterModel, trials: usize, seed: u64) -> RotaBaxterReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut counterexamples = Vec::new();
    for _ in 0..trials {
        let outcome = match model {
            RotaBaxterModel::EvalAtZero => {
                let (f, g) = (random_rational_function(&mut rng), random_rational_function(&mut rng));
                let (l, r) = eval_at_zero_sides(&f, &g);
                (l == r, format!("f={f:?} g={g:?}: {l} vs {r}"))
            }
            RotaBaxterModel::PolePart => {
                let (f, g) = (random_laurent(&mut rng, -4, 4), random_laurent(&mut rng, -4, 4));
                let (l, r) = laurent_sides(&pole_part, &f, &g);
                (l == r, format!("f={f} g={g}: {l} vs {r}"))
            }
            RotaBaxterModel::Taylor(n) => {
                let (f, g) = (random_laurent(&mut rng, 0, 4), random_laurent(&mut rng, 0, 4));
                let (l, r) = laurent_sides(&truncate(n), &f, &g);
                (l == r, format!("f={f} g={g}: {l} vs {r}"))
            }
        };
        if outcome.0 {
            passed += 1;
        } else if counterexamples.len() < 5 {
            counterexamples.push(outcome.1);
        }
    }
    RotaBaxterReport { model, seed, trials, passed, counterexamples }
}
