//! The Hopf algebra of divergent 1PI φ³ graphs in six dimensions, and graph-indexed series.
//!
//! Generators are isomorphism classes of 1PI graphs with two or three
//! (unlabeled) legs. Two-leg generators carry a Taylor label `r ∈ {0, 2}`.
//! The coproduct sums over families of disjoint divergent proper subgraphs,
//! contracting each family on the left and multiplying its members on the right.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{
    canonical_form, contract, divergent_subgraph_families, extract_subgraph, generate_graphs, io, FeynmanGraph,
    GenSpec, GraphClass,
};
use crate::hopf::{Character, Element, HopfAlgebra, Monomial, Tensor};
use crate::ring::{binomial, int, rat, Rational, Ring};
use crate::series::{SeriesKind, TruncatedSeries};

/// Space-time dimension in which the graph Hopf algebra is built.
pub const CK_DIMENSION: i64 = 6;

/// A generator: canonical encoding of a 1PI graph with unlabeled legs, plus a label.
///
/// Ordered by loop number first, so monomials list small graphs first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CkGenerator {
    pub loops: usize,
    pub legs: usize,
    /// Trivalent vertices.
    pub vertices: usize,
    pub encoding: String,
    /// `Some(r)` for two-leg graphs, `None` for three-leg graphs.
    pub label: Option<u8>,
}

impl CkGenerator {
    /// Validates and canonicalizes. A two-leg graph without a label gets label 0;
    /// a three-leg graph accepts `None` or `Some(0)`.
    pub fn new(g: &FeynmanGraph, label: Option<u8>) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        if g.source_count() > 0 {
            return Err(Error::InvalidGraph("graph generators have no sources".into()));
        }
        let legs = g.leg_count();
        let label = match (legs, label) {
            (2, None) => Some(0),
            (2, Some(r @ (0 | 2))) => Some(r),
            (3, None | Some(0)) => None,
            (2 | 3, Some(r)) => {
                return Err(Error::InvalidArgument(format!("label {r} is not admissible for a {legs}-leg graph")))
            }
            _ => return Err(Error::InvalidGraph(format!("graph generators have 2 or 3 legs, found {legs}"))),
        };
        if !g.is_1pi()? {
            return Err(Error::InvalidGraph("graph generators are 1PI".into()));
        }
        let loops = g.loops();
        if loops == 0 {
            return Err(Error::InvalidGraph("graph generators have at least one loop".into()));
        }
        let encoding = canonical_form(&g.unlabeled()).encoding;
        Ok(CkGenerator { loops, legs, vertices: g.internal_count(), encoding, label })
    }

    /// Parses `<graph>` or `<graph>(r)`, where `<graph>` is a built-in name, an
    /// encoding or a JSON literal.
    pub fn parse(src: &str) -> Result<Self> {
        let t = src.trim();
        let (body, label) = match t.strip_suffix(')').and_then(|s| s.rsplit_once('(')) {
            Some((b, r)) => (b, Some(r.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad label in {t}")))?)),
            None => (t, None),
        };
        CkGenerator::new(&io::parse_graph(body)?, label)
    }

    pub fn graph(&self) -> FeynmanGraph {
        io::parse_encoding(&self.encoding).expect("stored encodings parse")
    }

    pub fn has_crosses(&self) -> bool {
        self.encoding.split('|').next().is_some_and(|v| v.contains('c'))
    }

    /// `Σ 1/Sym` over the leg-labeled graphs in this class, which is `E!/|Aut|`
    /// with `Aut` the automorphisms of the unlabeled graph.
    pub fn weight(&self) -> Rational {
        let aut = canonical_form(&self.graph()).automorphisms;
        let legs_factorial: i64 = (1..=self.legs as i64).product();
        int(legs_factorial) / int(aut as i64)
    }
}

impl fmt::Display for CkGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(r) => write!(f, "[{}]({r})", self.encoding),
            None => write!(f, "[{}]", self.encoding),
        }
    }
}

/// Cross-free generators with at most `max_loops` loops, both labels for two-leg graphs.
pub fn ck_generators(max_loops: usize) -> Result<Vec<CkGenerator>> {
    let mut out = Vec::new();
    for legs in [2usize, 3] {
        let spec = GenSpec {
            labeled: false,
            max_loops: Some(max_loops),
            ..GenSpec::new(legs, 2 * max_loops + legs - 2, GraphClass::OnePi)
        };
        for g in generate_graphs(&spec)? {
            if g.loops() == 0 {
                continue;
            }
            if legs == 2 {
                out.push(CkGenerator::new(&g, Some(0))?);
                out.push(CkGenerator::new(&g, Some(2))?);
            } else {
                out.push(CkGenerator::new(&g, None)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The graph Hopf algebra with a memoized coproduct.
pub struct CkHopf {
    cache: Mutex<BTreeMap<CkGenerator, Tensor<CkGenerator>>>,
}

impl Default for CkHopf {
    fn default() -> Self {
        CkHopf { cache: Mutex::new(BTreeMap::new()) }
    }
}

impl CkHopf {
    pub fn new() -> Self {
        Self::default()
    }

    fn compute_coproduct(&self, g: &CkGenerator) -> Result<Tensor<CkGenerator>> {
        let graph = g.graph();
        let me = Monomial::gen(g.clone());
        let mut t = Tensor::default();
        t.add_term(me.clone(), Monomial::one(), Rational::one());
        t.add_term(Monomial::one(), me, Rational::one());
        for fam in divergent_subgraph_families(&graph, CK_DIMENSION)? {
            let quotient = contract(&graph, &fam)?;
            let left = CkGenerator::new(&quotient, g.label)?;
            let mut right = Vec::with_capacity(fam.members.len());
            for m in &fam.members {
                right.push(CkGenerator::new(&extract_subgraph(&graph, &m.vertices)?, m.label)?);
            }
            t.add_term(Monomial::gen(left), Monomial::from_factors(right), Rational::one());
        }
        Ok(t)
    }
}

impl HopfAlgebra for CkHopf {
    type Gen = CkGenerator;

    fn name(&self) -> String {
        "ck".into()
    }

    fn grade(&self, g: &CkGenerator) -> usize {
        g.loops
    }

    fn coproduct_gen(&self, g: &CkGenerator) -> Result<Tensor<CkGenerator>> {
        if let Some(t) = self.cache.lock().expect("cache lock").get(g) {
            return Ok(t.clone());
        }
        let t = self.compute_coproduct(g)?;
        self.cache.lock().expect("cache lock").insert(g.clone(), t.clone());
        Ok(t)
    }

    fn counit_gen(&self, _g: &CkGenerator) -> Rational {
        Rational::zero()
    }

    fn is_cocommutative(&self) -> bool {
        false
    }

    fn generators_up_to(&self, max_grade: usize) -> Vec<CkGenerator> {
        ck_generators(max_grade).unwrap_or_default()
    }

    fn check_generator(&self, g: &CkGenerator) -> Result<()> {
        let again = CkGenerator::new(&g.graph(), g.label)?;
        if &again != g {
            return Err(Error::UnknownGenerator(format!("{g} is not in canonical form")));
        }
        Ok(())
    }
}

/// A series `Σ f_Γ λ^Γ` indexed by monomials of generators.
///
/// The formal power `λ^Γ` of a monomial is `λ^{offset + 2·loops}` where the
/// offset is 1 for diffeomorphism-kind series and 0 otherwise. For a single
/// three-leg graph in a diffeomorphism this is `λ^V`; for a two-leg graph in
/// an invertible series it is again `λ^V`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSeries<R> {
    kind: SeriesKind,
    max_loops: usize,
    terms: BTreeMap<Monomial<CkGenerator>, R>,
}

fn monomial_loops(m: &Monomial<CkGenerator>) -> usize {
    m.factors().iter().map(|g| g.loops).sum()
}

impl<R: Ring> GraphSeries<R> {
    /// The unit of the kind: `1` (or `λ` for diffeomorphisms).
    pub fn identity(kind: SeriesKind, max_loops: usize) -> Self {
        let mut terms = BTreeMap::new();
        if kind != SeriesKind::Plain {
            terms.insert(Monomial::one(), R::one());
        }
        GraphSeries { kind, max_loops, terms }
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn max_loops(&self) -> usize {
        self.max_loops
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<CkGenerator>, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial<CkGenerator>) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    /// Adds `c` at `m`; monomials beyond the loop bound are dropped.
    pub fn add_term(&mut self, m: Monomial<CkGenerator>, c: R) {
        if monomial_loops(&m) > self.max_loops || c.is_zero() {
            return;
        }
        let sum = self.terms.remove(&m).unwrap_or_else(R::zero) + c;
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    fn check_unit(&self) -> Result<()> {
        if self.kind != SeriesKind::Plain && self.coefficient(&Monomial::one()) != R::one() {
            return Err(Error::InvalidSeries(format!("{} graph series needs unit leading coefficient", self.kind.tag())));
        }
        Ok(())
    }

    /// Exponent of `λ` carried by a monomial.
    pub fn lambda_power(&self, m: &Monomial<CkGenerator>) -> usize {
        usize::from(self.kind == SeriesKind::Diffeomorphism) + 2 * monomial_loops(m)
    }

    /// Product, truncated at the smaller loop bound. Diffeomorphisms may only be
    /// multiplied by invertible series (the result is again a diffeomorphism).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        use SeriesKind::*;
        let kind = match (self.kind, other.kind) {
            (Invertible, Invertible) => Invertible,
            (Diffeomorphism, Invertible) | (Invertible, Diffeomorphism) => Diffeomorphism,
            (Plain, Invertible | Plain) | (Invertible, Plain) => Plain,
            (a, b) => {
                return Err(Error::KindMismatch { expected: "a kind compatible with the product".into(), found: format!("{} and {}", a.tag(), b.tag()) })
            }
        };
        let mut out = GraphSeries { kind, max_loops: self.max_loops.min(other.max_loops), terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// `λ·s` for an invertible `s`: reinterprets it as a diffeomorphism.
    pub fn times_lambda(&self) -> Result<Self> {
        if self.kind != SeriesKind::Invertible {
            return Err(Error::KindMismatch { expected: "inv".into(), found: self.kind.tag().into() });
        }
        Ok(GraphSeries { kind: SeriesKind::Diffeomorphism, ..self.clone() })
    }

    /// Binomial power `s^a` of an invertible series.
    pub fn pow(&self, a: &Rational) -> Result<Self> {
        if self.kind != SeriesKind::Invertible {
            return Err(Error::KindMismatch { expected: "inv".into(), found: self.kind.tag().into() });
        }
        self.check_unit()?;
        let mut x = self.clone();
        x.kind = SeriesKind::Plain;
        x.terms.remove(&Monomial::one());
        let mut out = GraphSeries::identity(SeriesKind::Invertible, self.max_loops);
        let mut xk = GraphSeries::<R>::identity(SeriesKind::Invertible, self.max_loops);
        // Every monomial of x has at least one loop, so x^k vanishes past max_loops.
        for k in 1..=self.max_loops {
            xk = xk.mul(&x)?;
            let c = R::from_rational(&binomial(a, k));
            for (m, v) in &xk.terms {
                out.add_term(m.clone(), c.clone() * v.clone());
            }
        }
        Ok(out)
    }

    /// Replaces every coefficient `f_Γ` by `f_Γ · α(Γ)`.
    pub fn evaluate<S: Ring>(&self, alpha: &Character<CkGenerator, S>, lift: impl Fn(&R) -> S) -> Result<GraphSeries<S>> {
        let mut out = GraphSeries { kind: self.kind, max_loops: self.max_loops, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), lift(c) * alpha.eval_monomial(m)?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value
    where
        R: fmt::Display,
    {
        json!({
            "kind": self.kind.tag(),
            "max_loops": self.max_loops,
            "terms": self.terms.iter().map(|(m, c)| json!({
                "lambda_power": self.lambda_power(m),
                "monomial": m.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "coeff": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl GraphSeries<Rational> {
    /// Coefficients become the formal combinations `f_Γ · Γ` in the graph algebra.
    pub fn formal(&self) -> GraphSeries<Element<CkGenerator>> {
        let mut out = GraphSeries { kind: self.kind, max_loops: self.max_loops, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Element::from_monomial(m.clone()).scale(c));
        }
        out
    }
}

impl<R: Ring + fmt::Display> fmt::Display for GraphSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, c)| format!("({c}) λ^{} {m}", self.lambda_power(m))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Projection `π`: sums the coefficients of equal `λ` power into an ordinary
/// series of the same kind and order `2·max_loops`.
pub fn project_pi<R: Ring>(s: &GraphSeries<R>) -> Result<TruncatedSeries<R>> {
    let n = 2 * s.max_loops;
    let mut coeffs = vec![R::zero(); n + 1];
    for (m, c) in &s.terms {
        let i = 2 * monomial_loops(m);
        coeffs[i] = coeffs[i].clone() + c.clone();
    }
    TruncatedSeries::new(s.kind, coeffs)
}

/// Renormalization factors as graph series. Each generator appears with
/// weight `±Σ 1/Sym` over its leg-labeled presentations; the generator itself
/// stands for its counterterm.
#[derive(Clone, Debug, PartialEq)]
pub struct ZFactors {
    /// `Z1 = 1 + Σ_{E=3} C(Γ)/Sym(Γ) λ^{V−1}`.
    pub z1: GraphSeries<Rational>,
    /// `Z3 = 1 − Σ_{E=2} C(Γ₍₂₎)/Sym(Γ) λ^V`.
    pub z3: GraphSeries<Rational>,
    /// `Zm = 1 − Σ_{E=2} C(Γ₍₀₎)/Sym(Γ) λ^V`.
    pub zm: GraphSeries<Rational>,
}

pub fn z_factor_series(max_loops: usize) -> Result<ZFactors> {
    let mut z1 = GraphSeries::identity(SeriesKind::Invertible, max_loops);
    let mut z3 = z1.clone();
    let mut zm = z1.clone();
    for g in ck_generators(max_loops)? {
        let w = g.weight();
        let m = Monomial::gen(g.clone());
        match (g.legs, g.label) {
            (3, _) => z1.add_term(m, w),
            (2, Some(2)) => z3.add_term(m, -w),
            (2, _) => zm.add_term(m, -w),
            _ => unreachable!("generators have 2 or 3 legs"),
        }
    }
    Ok(ZFactors { z1, z3, zm })
}

/// `λ_b = λ Z1 Z3^{-3/2}` as a graph-indexed diffeomorphism.
pub fn bare_coupling_series(z: &ZFactors) -> Result<GraphSeries<Rational>> {
    z.z1.times_lambda()?.mul(&z.z3.pow(&rat(-3, 2))?)
}

/// `m_b/m = Zm^{1/2} Z3^{-1/2}` as a graph-indexed invertible series.
pub fn bare_mass_ratio_series(z: &ZFactors) -> Result<GraphSeries<Rational>> {
    z.zm.pow(&rat(1, 2))?.mul(&z.z3.pow(&rat(-1, 2))?)
}

/// Image of the Faà di Bruno generator `x_n`: the `λ^{n+1}` coefficient of `λ_b`
/// as a combination of graph generators. It vanishes for odd `n`, since every
/// generator shifts the power of `λ` by twice its loop number.
pub fn hd_to_hck(n: usize, max_loops: usize) -> Result<Element<CkGenerator>> {
    if n == 0 {
        return Ok(Element::one());
    }
    if n.div_ceil(2) > max_loops {
        return Err(Error::BoundExceeded(format!("x_{n} needs graphs with {} loops, bound is {max_loops}", n.div_ceil(2))));
    }
    if n % 2 == 1 {
        return Ok(Element::zero());
    }
    let lb = bare_coupling_series(&z_factor_series(n / 2)?)?;
    let pi = project_pi(&lb.formal())?;
    Ok(pi.coeff(n).clone())
}

/// Ring morphism from the Faà di Bruno algebra: `x_n ↦ hd_to_hck(n)`.
pub fn hd_element_to_hck(x: &Element<crate::hopf::instances::X>, max_loops: usize) -> Result<Element<CkGenerator>> {
    let mut images: BTreeMap<usize, Element<CkGenerator>> = BTreeMap::new();
    x.map_generators(|g| {
        if let Some(e) = images.get(&g.0) {
            return Ok(e.clone());
        }
        let e = hd_to_hck(g.0, max_loops)?;
        images.insert(g.0, e.clone());
        Ok(e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::named;
    use crate::hopf::coproduct;

    #[test]
    fn nested_coproduct() {
        let h = CkHopf::new();
        let g = CkGenerator::new(&named::nested2loop(), None).unwrap();
        let d = coproduct(&h, &Element::gen(g.clone())).unwrap();
        assert_eq!(d.len(), 3);
        let tri = CkGenerator::new(&named::triangle(), None).unwrap();
        assert_eq!(d.coefficient(&Monomial::gen(tri.clone()), &Monomial::gen(tri)), Rational::one());
    }

    #[test]
    fn one_loop_weights() {
        assert_eq!(CkGenerator::new(&named::oneloop_se(), None).unwrap().weight(), rat(1, 2));
        assert_eq!(CkGenerator::new(&named::triangle(), None).unwrap().weight(), int(1));
    }

    #[test]
    fn x2_image() {
        let tri = CkGenerator::new(&named::triangle(), None).unwrap();
        let se2 = CkGenerator::new(&named::oneloop_se(), Some(2)).unwrap();
        let want = Element::gen(tri) + Element::gen(se2).scale(&rat(3, 4));
        assert_eq!(hd_to_hck(2, 1).unwrap(), want);
        assert!(hd_to_hck(1, 1).unwrap().is_zero());
    }
}
