//! Rational loop integrands as sums of products of propagators and scalar products.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::momentum::{route_momenta, Momentum, MomentumRouting};
use crate::error::{Error, Result};
use crate::graphs::{FeynmanGraph, VertexKind};
use crate::ring::{int, Rational};

/// One multiplicative factor. Masses are in units of `m`, so `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `1/(ℓ² + m²)^n`.
    Prop(Momentum, u32),
    /// Euclidean scalar product `a·b`.
    Dot(Momentum, Momentum),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Prop(l, 1) => write!(f, "1/(({l})^2+m^2)"),
            Factor::Prop(l, n) => write!(f, "1/(({l})^2+m^2)^{n}"),
            Factor::Dot(a, b) if a == b => write!(f, "({a})^2"),
            Factor::Dot(a, b) => write!(f, "({a})·({b})"),
        }
    }
}

/// A rational coefficient times a product of factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub factors: Vec<Factor>,
}

impl Term {
    /// Folds signs into the coefficient, merges equal propagators and sorts.
    fn normalize(mut self) -> Option<Term> {
        let mut props: BTreeMap<Momentum, u32> = BTreeMap::new();
        let mut dots = Vec::new();
        for fac in self.factors {
            match fac {
                Factor::Prop(l, n) => {
                    if n > 0 {
                        *props.entry(l.normalized().1).or_insert(0) += n;
                    }
                }
                Factor::Dot(a, b) => {
                    if a.is_zero() || b.is_zero() {
                        return None;
                    }
                    let (sa, a) = a.normalized();
                    let (sb, b) = b.normalized();
                    if sa * sb < 0 {
                        self.coeff = -self.coeff;
                    }
                    dots.push(if a <= b { Factor::Dot(a, b) } else { Factor::Dot(b, a) });
                }
            }
        }
        if self.coeff.is_zero() {
            return None;
        }
        dots.sort();
        let mut factors: Vec<Factor> = dots;
        let mut props: Vec<(Momentum, u32)> = props.into_iter().collect();
        props.sort_by_key(|(l, _)| (l.has_ext(), l.clone()));
        factors.extend(props.into_iter().map(|(l, n)| Factor::Prop(l, n)));
        Some(Term { coeff: self.coeff, factors })
    }
}

/// `Σ coeff · Π factors` over `loops` loop momenta and `externals` external momenta.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Integrand {
    pub loops: usize,
    pub externals: usize,
    pub terms: Vec<Term>,
}

impl Integrand {
    pub fn zero(loops: usize, externals: usize) -> Self {
        Integrand { loops, externals, terms: Vec::new() }
    }

    pub fn one(loops: usize, externals: usize) -> Self {
        Integrand { loops, externals, terms: vec![Term { coeff: Rational::one(), factors: Vec::new() }] }
    }

    pub fn from_terms(loops: usize, externals: usize, terms: Vec<Term>) -> Self {
        let mut merged: BTreeMap<Vec<Factor>, Rational> = BTreeMap::new();
        for t in terms.into_iter().filter_map(Term::normalize) {
            *merged.entry(t.factors).or_insert_with(Rational::zero) += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(factors, coeff)| Term { coeff, factors })
            .collect();
        Integrand { loops, externals, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_space(&self, o: &Integrand) -> Result<()> {
        if self.loops != o.loops || self.externals != o.externals {
            return Err(Error::InvalidArgument(format!(
                "integrands live on different momenta: ({}, {}) vs ({}, {})",
                self.loops, self.externals, o.loops, o.externals
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Integrand) -> Result<Integrand> {
        self.same_space(o)?;
        let terms = self.terms.iter().chain(&o.terms).cloned().collect();
        Ok(Integrand::from_terms(self.loops, self.externals, terms))
    }

    pub fn sub(&self, o: &Integrand) -> Result<Integrand> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Integrand {
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * c, factors: t.factors.clone() }).collect();
        Integrand::from_terms(self.loops, self.externals, terms)
    }

    pub fn mul(&self, o: &Integrand) -> Result<Integrand> {
        self.same_space(o)?;
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Term { coeff: &a.coeff * &b.coeff, factors });
            }
        }
        Ok(Integrand::from_terms(self.loops, self.externals, terms))
    }

    /// Moves loop `i` to `map[i]` in a space of `loops` loops and `externals` external momenta.
    pub fn relabel(&self, map: &[usize], loops: usize, externals: usize) -> Result<Integrand> {
        if map.len() != self.loops || map.iter().any(|&j| j >= loops) {
            return Err(Error::InvalidArgument("loop relabeling does not fit".into()));
        }
        if externals < self.externals && self.terms.iter().any(|t| t.factors.iter().any(factor_has_ext)) {
            return Err(Error::InvalidArgument("cannot drop external momenta that occur".into()));
        }
        let mv = |m: &Momentum| m.relabel_loops(map, loops).with_ext_len(externals);
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone(),
                factors: t
                    .factors
                    .iter()
                    .map(|fac| match fac {
                        Factor::Prop(l, n) => Factor::Prop(mv(l), *n),
                        Factor::Dot(a, b) => Factor::Dot(mv(a), mv(b)),
                    })
                    .collect(),
            })
            .collect();
        Ok(Integrand::from_terms(loops, externals, terms))
    }

    /// Whether any factor depends on an external momentum.
    pub fn depends_on_externals(&self) -> bool {
        self.terms.iter().any(|t| t.factors.iter().any(factor_has_ext))
    }

    /// Exact Taylor coefficients in the external momenta, `c_r` for `r = 0..=order`:
    /// with `p → t·p`, `c_r` is the coefficient of `tʳ`, so `Σ c_r` is the Taylor
    /// polynomial of degree `order` at `p = 0`. Odd orders are kept.
    pub fn taylor_coefficients(&self, order: usize) -> Result<Vec<Integrand>> {
        if order > 2 {
            return Err(Error::InvalidArgument(format!("Taylor order {order} exceeds the supported degree 2")));
        }
        let mut out = vec![Vec::new(); order + 1];
        for t in &self.terms {
            // Truncated product of per-factor series in t.
            let mut acc: Vec<Vec<Term>> = vec![Vec::new(); order + 1];
            acc[0].push(Term { coeff: t.coeff.clone(), factors: Vec::new() });
            for fac in &t.factors {
                let series = factor_series(fac, order);
                let mut next: Vec<Vec<Term>> = vec![Vec::new(); order + 1];
                for (i, lhs) in acc.iter().enumerate() {
                    for (j, rhs) in series.iter().enumerate() {
                        if i + j > order {
                            continue;
                        }
                        for a in lhs {
                            for b in rhs {
                                let mut factors = a.factors.clone();
                                factors.extend(b.factors.iter().cloned());
                                next[i + j].push(Term { coeff: &a.coeff * &b.coeff, factors });
                            }
                        }
                    }
                }
                acc = next;
            }
            for (r, ts) in acc.into_iter().enumerate() {
                out[r].extend(ts);
            }
        }
        Ok(out.into_iter().map(|ts| Integrand::from_terms(self.loops, self.externals, ts)).collect())
    }

    /// `T^order[self]`, the exact Taylor polynomial in the external momenta at zero.
    pub fn taylor_polynomial(&self, order: usize) -> Result<Integrand> {
        let mut acc = Integrand::zero(self.loops, self.externals);
        for c in self.taylor_coefficients(order)? {
            acc = acc.add(&c)?;
        }
        Ok(acc)
    }

    /// Rotationally averaged order-`r` coefficient, stripped of `(p₁·p₁)^{r/2}`.
    ///
    /// Order 0 sets the external momenta to zero. Order 2 needs a single external
    /// momentum and replaces `(a·p)(b·p)` by `(a·b)(p·p)/D`, which leaves the
    /// integral over a rotation-invariant loop domain unchanged; the result then
    /// factorizes as `(p·p) ×` a function of the loop momenta alone.
    pub fn isotropic_coefficient(&self, r: usize, d: i64) -> Result<Integrand> {
        match r {
            0 => Ok(self.taylor_coefficients(0)?.remove(0)),
            2 => {
                if self.externals != 1 {
                    return Err(Error::InvalidArgument(
                        "the averaged second-order coefficient needs exactly one external momentum".into(),
                    ));
                }
                let c2 = self.taylor_coefficients(2)?.remove(2);
                let mut terms = Vec::new();
                for t in c2.terms {
                    let mut coeff = t.coeff;
                    let mut factors = Vec::new();
                    let mut mixed = Vec::new();
                    for fac in t.factors {
                        match fac {
                            Factor::Dot(a, b) if a.has_ext() && b.has_ext() => coeff *= int(a.ext[0] * b.ext[0]),
                            Factor::Dot(a, b) if a.has_ext() => {
                                coeff *= int(a.ext[0]);
                                mixed.push(b);
                            }
                            Factor::Dot(a, b) if b.has_ext() => {
                                coeff *= int(b.ext[0]);
                                mixed.push(a);
                            }
                            other => factors.push(other),
                        }
                    }
                    match mixed.len() {
                        0 => {}
                        2 => {
                            coeff /= int(d);
                            factors.push(Factor::Dot(mixed[0].clone(), mixed[1].clone()));
                        }
                        _ => return Err(Error::Computation("second-order term is not quadratic in p".into())),
                    }
                    terms.push(Term { coeff, factors });
                }
                Ok(Integrand::from_terms(self.loops, self.externals, terms))
            }
            _ => Err(Error::InvalidArgument(format!("averaged Taylor coefficient of order {r} is not supported"))),
        }
    }

    /// `Σ_{r even, r ≤ order}` averaged coefficients times `(p₁·p₁)^{r/2}`.
    pub fn isotropic_taylor(&self, order: usize, d: i64) -> Result<Integrand> {
        let mut acc = self.isotropic_coefficient(0, d)?;
        if order >= 2 {
            let p2 = Integrand::from_terms(
                self.loops,
                self.externals,
                vec![Term {
                    coeff: Rational::one(),
                    factors: vec![Factor::Dot(
                        Momentum::ext_var(0, self.loops, self.externals),
                        Momentum::ext_var(0, self.loops, self.externals),
                    )],
                }],
            );
            acc = acc.add(&self.isotropic_coefficient(2, d)?.mul(&p2)?)?;
        }
        Ok(acc)
    }

    /// Number of distinct momenta appearing in the integrand.
    pub fn momenta(&self) -> Vec<Momentum> {
        let mut ms: Vec<Momentum> = self
            .terms
            .iter()
            .flat_map(|t| {
                t.factors.iter().flat_map(|fac| match fac {
                    Factor::Prop(l, _) => vec![l.clone()],
                    Factor::Dot(a, b) => vec![a.clone(), b.clone()],
                })
            })
            .collect();
        ms.sort();
        ms.dedup();
        ms
    }
}

fn factor_has_ext(f: &Factor) -> bool {
    match f {
        Factor::Prop(l, _) => l.has_ext(),
        Factor::Dot(a, b) => a.has_ext() || b.has_ext(),
    }
}

fn term(coeff: Rational, factors: Vec<Factor>) -> Term {
    Term { coeff, factors }
}

/// Coefficients of `t⁰, t¹, t²` of a factor under `p → t·p`.
fn factor_series(fac: &Factor, order: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new(); order + 1];
    match fac {
        Factor::Prop(l, n) => {
            let (l0, l1) = (l.loop_part(), l.ext_part());
            let n = *n;
            let nn = int(n as i64);
            out[0].push(term(Rational::one(), vec![Factor::Prop(l0.clone(), n)]));
            if l1.is_zero() {
                return out;
            }
            // (A + 2tB + t²C)^{-n}, A = l0² + m², B = l0·l1, C = l1².
            if order >= 1 {
                out[1].push(term(
                    int(-2) * &nn,
                    vec![Factor::Dot(l0.clone(), l1.clone()), Factor::Prop(l0.clone(), n + 1)],
                ));
            }
            if order >= 2 {
                out[2].push(term(-nn.clone(), vec![Factor::Dot(l1.clone(), l1.clone()), Factor::Prop(l0.clone(), n + 1)]));
                out[2].push(term(
                    int(2) * &nn * int(n as i64 + 1),
                    vec![Factor::Dot(l0.clone(), l1.clone()), Factor::Dot(l0.clone(), l1), Factor::Prop(l0, n + 2)],
                ));
            }
        }
        Factor::Dot(a, b) => {
            let (a0, a1, b0, b1) = (a.loop_part(), a.ext_part(), b.loop_part(), b.ext_part());
            out[0].push(term(Rational::one(), vec![Factor::Dot(a0.clone(), b0.clone())]));
            if order >= 1 {
                out[1].push(term(Rational::one(), vec![Factor::Dot(a0, b1.clone())]));
                out[1].push(term(Rational::one(), vec![Factor::Dot(a1.clone(), b0)]));
            }
            if order >= 2 {
                out[2].push(term(Rational::one(), vec![Factor::Dot(a1, b1)]));
            }
        }
    }
    out
}

impl fmt::Display for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let mag = t.coeff.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || t.factors.is_empty() {
                parts.push(mag.to_string());
            }
            parts.extend(t.factors.iter().map(|x| x.to_string()));
            write!(f, "{}", parts.join(" * "))?;
        }
        Ok(())
    }
}

/// Product of propagators over inner edges; a cross of label `r` multiplies by
/// `(k·k)^{r/2}` with `k` its through-momentum. The `(2π)^{-D}` per loop is
/// applied by the quadrature, not stored here.
pub fn build_integrand(g: &FeynmanGraph, routing: &MomentumRouting) -> Result<Integrand> {
    if routing.edges.len() != g.edge_count() {
        return Err(Error::InvalidArgument("routing does not match the graph's edges".into()));
    }
    let mut factors = Vec::new();
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        if !g.kind(a).is_leg() && !g.kind(b).is_leg() {
            factors.push(Factor::Prop(routing.edges[e].clone(), 1));
        }
    }
    for v in 0..g.vertex_count() {
        if let VertexKind::Cross(r) = g.kind(v) {
            let e = g.edges().iter().position(|x| x.contains(&v)).expect("crosses have edges");
            let k = routing.edges[e].clone();
            for _ in 0..r / 2 {
                factors.push(Factor::Dot(k.clone(), k.clone()));
            }
        }
    }
    Ok(Integrand::from_terms(routing.loops, routing.externals, vec![Term { coeff: Rational::one(), factors }]))
}

/// Routes and builds in one step.
pub fn graph_integrand(g: &FeynmanGraph) -> Result<Integrand> {
    build_integrand(g, &route_momenta(g)?)
}

/// `i − T^order[i]` with the exact Taylor polynomial.
pub fn taylor_subtract(i: &Integrand, order: usize) -> Result<Integrand> {
    i.sub(&i.taylor_polynomial(order)?)
}
