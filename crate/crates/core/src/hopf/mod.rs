//! Commutative Hopf algebras presented by generators.
//!
//! An [`Element`] is a rational linear combination of commutative monomials in
//! the generators of an instance. Instances implement [`HopfAlgebra`] by giving
//! the coproduct, counit and (optionally) antipode on generators; everything
//! else is extended multiplicatively here.

pub mod instances;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{FromRational, Rational, Ring};
use crate::series::{SeriesKind, TruncatedSeries};

/// Bound satisfied by generator types.
pub trait Generator: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync {}
impl<T: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync> Generator for T {}

/// A commutative monomial: a sorted multiset of generators. The empty monomial is `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<G>(Vec<G>);

impl<G: Generator> Monomial<G> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(g: G) -> Self {
        Monomial(vec![g])
    }

    pub fn from_factors(mut v: Vec<G>) -> Self {
        v.sort();
        Monomial(v)
    }

    pub fn factors(&self) -> &[G] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                v.push(self.0[i].clone());
                i += 1;
            } else {
                v.push(other.0[j].clone());
                j += 1;
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        Monomial(v)
    }

    /// Generators with multiplicities, in order.
    pub fn powers(&self) -> Vec<(G, usize)> {
        let mut out: Vec<(G, usize)> = Vec::new();
        for g in &self.0 {
            match out.last_mut() {
                Some((h, k)) if h == g => *k += 1,
                _ => out.push((g.clone(), 1)),
            }
        }
        out
    }
}

impl<G: Generator> fmt::Display for Monomial<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .powers()
            .into_iter()
            .map(|(g, k)| if k == 1 { g.to_string() } else { format!("{g}^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn coeff_prefix(c: &Rational, body: &str, first: bool) -> String {
    let neg = c < &Rational::zero();
    let a = if neg { -c.clone() } else { c.clone() };
    let sign = match (first, neg) {
        (true, true) => "-".to_string(),
        (true, false) => String::new(),
        (false, true) => " - ".to_string(),
        (false, false) => " + ".to_string(),
    };
    if body == "1" {
        format!("{sign}{a}")
    } else if a.is_one() {
        format!("{sign}{body}")
    } else {
        format!("{sign}{a}*{body}")
    }
}

/// Rational linear combination of monomials. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Element<G: Ord> {
    terms: BTreeMap<Monomial<G>, Rational>,
}

impl<G: Generator> Element<G> {
    pub fn gen(g: G) -> Self {
        Self::from_monomial(Monomial::gen(g))
    }

    pub fn from_monomial(m: Monomial<G>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::one());
        Element { terms }
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Element::zero();
        e.add_term(Monomial::one(), c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial<G>, Rational)>>(it: I) -> Self {
        let mut e = Element::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn add_term(&mut self, m: Monomial<G>, c: Rational) {
        add_into(&mut self.terms, m, c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<G>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial<G>) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Element::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    /// Applies a multiplicative map given on generators.
    pub fn map_generators<H: Generator>(&self, mut f: impl FnMut(&G) -> Result<Element<H>>) -> Result<Element<H>> {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            let mut prod = Element::one();
            for g in m.factors() {
                prod = prod * f(g)?;
            }
            out = out + prod.scale(c);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    json!({
                        "coeff": c.to_string(),
                        "monomial": m.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl<G: Generator> fmt::Display for Element<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            write!(f, "{}", coeff_prefix(c, &m.to_string(), i == 0))?;
        }
        Ok(())
    }
}

impl<G: Generator> Zero for Element<G> {
    fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<G: Generator> One for Element<G> {
    fn one() -> Self {
        Element::from_monomial(Monomial::one())
    }
}

impl<G: Generator> FromRational for Element<G> {
    fn from_rational(q: &Rational) -> Self {
        Element::constant(q.clone())
    }
}

impl<G: Generator> Add for Element<G> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<G: Generator> Sub for Element<G> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<G: Generator> Neg for Element<G> {
    type Output = Self;
    fn neg(self) -> Self {
        Element { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<G: Generator> Mul for Element<G> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a, G: Generator> Mul<&'a Element<G>> for &'a Element<G> {
    type Output = Element<G>;
    fn mul(self, rhs: &'a Element<G>) -> Element<G> {
        let mut out = Element::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

/// Element of `H ⊗ H`, keyed by ordered pairs of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<G: Ord> {
    terms: BTreeMap<(Monomial<G>, Monomial<G>), Rational>,
}

impl<G: Generator> Default for Tensor<G> {
    fn default() -> Self {
        Tensor { terms: BTreeMap::new() }
    }
}

impl<G: Generator> Tensor<G> {
    pub fn add_term(&mut self, l: Monomial<G>, r: Monomial<G>, c: Rational) {
        add_into(&mut self.terms, (l, r), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial<G>, Monomial<G>), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, l: &Monomial<G>, r: &Monomial<G>) -> Rational {
        self.terms.get(&(l.clone(), r.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    /// `a ⊗ b` for elements `a`, `b`.
    pub fn pure(a: &Element<G>, b: &Element<G>) -> Self {
        let mut t = Tensor::default();
        for (l, x) in a.terms() {
            for (r, y) in b.terms() {
                t.add_term(l.clone(), r.clone(), x * y);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((l, r), c) in &other.terms {
            t.add_term(l.clone(), r.clone(), c.clone());
        }
        t
    }

    /// Slot-wise product in `H ⊗ H`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut t = Tensor::default();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                t.add_term(a.mul(c), b.mul(d), x * y);
            }
        }
        t
    }

    /// Exchanges the two tensor factors.
    pub fn flip(&self) -> Self {
        let mut t = Tensor::default();
        for ((l, r), c) in &self.terms {
            t.add_term(r.clone(), l.clone(), c.clone());
        }
        t
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((l, r), c)| {
                    json!({
                        "coeff": c.to_string(),
                        "left": l.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        "right": r.factors().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

impl<G: Generator> fmt::Display for Tensor<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((l, r), c)) in self.terms.iter().enumerate() {
            write!(f, "{}", coeff_prefix(c, &format!("{l} ⊗ {r}"), i == 0))?;
        }
        Ok(())
    }
}

/// Element of `H ⊗ H ⊗ H`, used for coassociativity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3<G: Ord> {
    terms: BTreeMap<(Monomial<G>, Monomial<G>, Monomial<G>), Rational>,
}

impl<G: Generator> Default for Tensor3<G> {
    fn default() -> Self {
        Tensor3 { terms: BTreeMap::new() }
    }
}

impl<G: Generator> Tensor3<G> {
    pub fn add_term(&mut self, a: Monomial<G>, b: Monomial<G>, c: Monomial<G>, k: Rational) {
        add_into(&mut self.terms, (a, b, c), k);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A commutative Hopf algebra presented by generators.
pub trait HopfAlgebra: Sync {
    type Gen: Generator;

    fn name(&self) -> String;

    /// Degree of a generator; meaningful only for graded instances.
    fn grade(&self, g: &Self::Gen) -> usize;

    fn coproduct_gen(&self, g: &Self::Gen) -> Result<Tensor<Self::Gen>>;

    fn counit_gen(&self, g: &Self::Gen) -> Rational;

    /// Closed-form antipode on a generator, when the instance knows one.
    fn antipode_closed(&self, _g: &Self::Gen) -> Option<Element<Self::Gen>> {
        None
    }

    /// Rewrites an element into normal form modulo the defining relations.
    fn normalize(&self, e: Element<Self::Gen>) -> Element<Self::Gen> {
        e
    }

    fn is_graded_connected(&self) -> bool {
        true
    }

    fn is_cocommutative(&self) -> bool;

    /// All generators of grade `1..=max_grade` (every generator for ungraded instances).
    fn generators_up_to(&self, max_grade: usize) -> Vec<Self::Gen>;

    /// Rejects generators outside the instance's universe.
    fn check_generator(&self, _g: &Self::Gen) -> Result<()> {
        Ok(())
    }
}

/// Grade of a monomial (sum over factors).
pub fn monomial_grade<H: HopfAlgebra>(h: &H, m: &Monomial<H::Gen>) -> usize {
    m.factors().iter().map(|g| h.grade(g)).sum()
}

fn normalize_tensor<H: HopfAlgebra>(h: &H, t: Tensor<H::Gen>) -> Tensor<H::Gen> {
    // Group by left monomial, normalize the right slot, then expand left normal forms.
    let mut by_left: BTreeMap<Monomial<H::Gen>, Element<H::Gen>> = BTreeMap::new();
    for ((l, r), c) in t.terms {
        let e = by_left.entry(l).or_insert_with(Element::zero);
        e.add_term(r, c);
    }
    let mut out = Tensor::default();
    for (l, rights) in by_left {
        let rn = h.normalize(rights);
        let ln = h.normalize(Element::from_monomial(l));
        out = out.add(&Tensor::pure(&ln, &rn));
    }
    out
}

/// Product in the algebra, reduced modulo relations.
pub fn product<H: HopfAlgebra>(h: &H, a: &Element<H::Gen>, b: &Element<H::Gen>) -> Element<H::Gen> {
    h.normalize(a * b)
}

/// Coproduct of an arbitrary element, extended multiplicatively from generators.
pub fn coproduct<H: HopfAlgebra>(h: &H, x: &Element<H::Gen>) -> Result<Tensor<H::Gen>> {
    let mut cache: BTreeMap<H::Gen, Tensor<H::Gen>> = BTreeMap::new();
    let mut out = Tensor::default();
    for (m, c) in x.terms() {
        let mut acc = Tensor::pure(&Element::one(), &Element::one());
        for g in m.factors() {
            if !cache.contains_key(g) {
                h.check_generator(g)?;
                cache.insert(g.clone(), h.coproduct_gen(g)?);
            }
            acc = acc.mul(&cache[g]);
        }
        for ((l, r), k) in acc.terms {
            out.add_term(l, r, k * c);
        }
    }
    Ok(normalize_tensor(h, out))
}

pub fn counit<H: HopfAlgebra>(h: &H, x: &Element<H::Gen>) -> Rational {
    let mut acc = Rational::zero();
    for (m, c) in x.terms() {
        let mut v = c.clone();
        for g in m.factors() {
            v *= h.counit_gen(g);
            if v.is_zero() {
                break;
            }
        }
        acc += v;
    }
    acc
}

/// Memo table for the antipode on generators.
pub struct AntipodeCache<G: Ord> {
    table: BTreeMap<G, Element<G>>,
}

impl<G: Generator> Default for AntipodeCache<G> {
    fn default() -> Self {
        AntipodeCache { table: BTreeMap::new() }
    }
}

impl<G: Generator> AntipodeCache<G> {
    /// Antipode of one generator.
    ///
    /// Instances with a closed form use it; graded connected instances otherwise
    /// use `S(g) = ε(g) - Σ' S(g') g''` over the coproduct terms other than `g ⊗ 1`.
    pub fn generator<H: HopfAlgebra<Gen = G>>(&mut self, h: &H, g: &G) -> Result<Element<G>> {
        if let Some(s) = self.table.get(g) {
            return Ok(s.clone());
        }
        h.check_generator(g)?;
        let s = if let Some(s) = h.antipode_closed(g) {
            s
        } else if !h.is_graded_connected() {
            return Err(Error::NotConnected(h.name()));
        } else {
            let grade = h.grade(g);
            let me = Monomial::gen(g.clone());
            let mut acc = Element::constant(h.counit_gen(g));
            for ((l, r), c) in h.coproduct_gen(g)?.terms() {
                if *l == me && r.is_one() {
                    continue;
                }
                if monomial_grade(h, l) >= grade {
                    return Err(Error::Computation(format!(
                        "coproduct of {g} is not graded: left factor {l}"
                    )));
                }
                let sl = self.monomial(h, l)?;
                acc = acc - (sl * Element::from_monomial(r.clone())).scale(c);
            }
            h.normalize(acc)
        };
        self.table.insert(g.clone(), s.clone());
        Ok(s)
    }

    fn monomial<H: HopfAlgebra<Gen = G>>(&mut self, h: &H, m: &Monomial<G>) -> Result<Element<G>> {
        let mut acc = Element::one();
        for g in m.factors() {
            acc = product(h, &acc, &self.generator(h, g)?);
        }
        Ok(acc)
    }

    /// Antipode of an element (an algebra morphism, since the algebra is commutative).
    pub fn element<H: HopfAlgebra<Gen = G>>(&mut self, h: &H, x: &Element<G>) -> Result<Element<G>> {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out = out + self.monomial(h, m)?.scale(c);
        }
        Ok(h.normalize(out))
    }
}

pub fn antipode<H: HopfAlgebra>(h: &H, x: &Element<H::Gen>) -> Result<Element<H::Gen>> {
    AntipodeCache::default().element(h, x)
}

/// `(Δ ⊗ Id)Δ x` as a triple tensor.
pub fn coproduct_left<H: HopfAlgebra>(h: &H, t: &Tensor<H::Gen>) -> Result<Tensor3<H::Gen>> {
    let mut out = Tensor3::default();
    for ((l, r), c) in t.terms() {
        for ((a, b), k) in coproduct(h, &Element::from_monomial(l.clone()))?.terms() {
            out.add_term(a.clone(), b.clone(), r.clone(), c * k);
        }
    }
    Ok(out)
}

/// `(Id ⊗ Δ)Δ x` as a triple tensor.
pub fn coproduct_right<H: HopfAlgebra>(h: &H, t: &Tensor<H::Gen>) -> Result<Tensor3<H::Gen>> {
    let mut out = Tensor3::default();
    for ((l, r), c) in t.terms() {
        for ((a, b), k) in coproduct(h, &Element::from_monomial(r.clone()))?.terms() {
            out.add_term(l.clone(), a.clone(), b.clone(), c * k);
        }
    }
    Ok(out)
}

/// `m ∘ (S ⊗ Id)` or `m ∘ (Id ⊗ S)` applied to a tensor.
pub fn antipode_contract<H: HopfAlgebra>(
    h: &H,
    cache: &mut AntipodeCache<H::Gen>,
    t: &Tensor<H::Gen>,
    left: bool,
) -> Result<Element<H::Gen>> {
    let mut out = Element::zero();
    for ((l, r), c) in t.terms() {
        let (a, b) = if left {
            (cache.element(h, &Element::from_monomial(l.clone()))?, Element::from_monomial(r.clone()))
        } else {
            (Element::from_monomial(l.clone()), cache.element(h, &Element::from_monomial(r.clone()))?)
        };
        out = out + (a * b).scale(c);
    }
    Ok(h.normalize(out))
}

/// Which axiom an [`AxiomCheck`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Coassociativity,
    CounitLeft,
    CounitRight,
    AntipodeLeft,
    AntipodeRight,
    Involution,
    Graded,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Coassociativity => "coassociativity",
            Axiom::CounitLeft => "counit-left",
            Axiom::CounitRight => "counit-right",
            Axiom::AntipodeLeft => "antipode-left",
            Axiom::AntipodeRight => "antipode-right",
            Axiom::Involution => "antipode-involution",
            Axiom::Graded => "graded",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub generator: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub instance: String,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance,
            "all_passed": self.all_passed(),
            "checks": self.checks.iter().map(|c| json!({
                "axiom": c.axiom.to_string(),
                "generator": c.generator,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks the Hopf axioms on every generator up to `max_grade`.
///
/// `S∘S = Id` is checked for every instance since all instances here are commutative.
pub fn check_hopf_axioms<H: HopfAlgebra>(h: &H, max_grade: usize) -> AxiomReport {
    let mut report = AxiomReport { instance: h.name(), checks: Vec::new() };
    let mut cache = AntipodeCache::default();
    for g in h.generators_up_to(max_grade) {
        let name = g.to_string();
        let mut push = |axiom: Axiom, r: Result<bool>| {
            let (passed, detail) = match r {
                Ok(p) => (p, None),
                Err(e) => (false, Some(e.to_string())),
            };
            report.checks.push(AxiomCheck { axiom, generator: name.clone(), passed, detail });
        };
        let x = Element::gen(g.clone());
        let delta = coproduct(h, &x);
        let delta = match delta {
            Ok(d) => d,
            Err(e) => {
                push(Axiom::Coassociativity, Err(e));
                continue;
            }
        };
        push(
            Axiom::Coassociativity,
            (|| Ok(coproduct_left(h, &delta)? == coproduct_right(h, &delta)?))(),
        );
        let eps_left = h.normalize(Element::from_terms(
            delta.terms().map(|((l, r), c)| (r.clone(), c * counit(h, &Element::from_monomial(l.clone())))),
        ));
        push(Axiom::CounitLeft, Ok(eps_left == h.normalize(x.clone())));
        let eps_right = h.normalize(Element::from_terms(
            delta.terms().map(|((l, r), c)| (l.clone(), c * counit(h, &Element::from_monomial(r.clone())))),
        ));
        push(Axiom::CounitRight, Ok(eps_right == h.normalize(x.clone())));
        let unit = Element::constant(h.counit_gen(&g));
        push(Axiom::AntipodeLeft, antipode_contract(h, &mut cache, &delta, true).map(|e| e == unit));
        push(Axiom::AntipodeRight, antipode_contract(h, &mut cache, &delta, false).map(|e| e == unit));
        push(
            Axiom::Involution,
            (|| {
                let s = cache.generator(h, &g)?;
                Ok(cache.element(h, &s)? == h.normalize(x.clone()))
            })(),
        );
        if h.is_graded_connected() {
            let grade = h.grade(&g);
            push(
                Axiom::Graded,
                Ok(delta.terms().all(|((l, r), _)| monomial_grade(h, l) + monomial_grade(h, r) == grade)),
            );
        }
    }
    report
}

/// True when `Δg` is invariant under exchanging tensor factors.
pub fn is_cocommutative_on<H: HopfAlgebra>(h: &H, g: &H::Gen) -> Result<bool> {
    let d = coproduct(h, &Element::gen(g.clone()))?;
    Ok(d == d.flip())
}

/// A character given by its values on generators, extended multiplicatively.
#[derive(Clone, Debug, PartialEq)]
pub struct Character<G: Ord, R> {
    pub instance: String,
    pub values: BTreeMap<G, R>,
}

impl<G: Generator, R: Ring> Character<G, R> {
    pub fn new(instance: impl Into<String>, values: BTreeMap<G, R>) -> Self {
        Character { instance: instance.into(), values }
    }

    pub fn value(&self, g: &G) -> Result<&R> {
        self.values.get(g).ok_or_else(|| Error::UnknownGenerator(format!("character has no value at {g}")))
    }

    pub fn eval_monomial(&self, m: &Monomial<G>) -> Result<R> {
        let mut acc = R::one();
        for g in m.factors() {
            acc = acc * self.value(g)?.clone();
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &Element<G>) -> Result<R> {
        let mut acc = R::zero();
        for (m, c) in x.terms() {
            acc = acc + R::from_rational(c) * self.eval_monomial(m)?;
        }
        Ok(acc)
    }

    /// Evaluates `α ⊗ β` on a tensor and multiplies in the target.
    pub fn eval_tensor(&self, other: &Self, t: &Tensor<G>) -> Result<R> {
        let mut acc = R::zero();
        for ((l, r), c) in t.terms() {
            acc = acc + R::from_rational(c) * self.eval_monomial(l)? * other.eval_monomial(r)?;
        }
        Ok(acc)
    }
}

fn same_instance<G: Generator, R: Ring>(h: &str, a: &Character<G, R>) -> Result<()> {
    if a.instance != h {
        return Err(Error::InvalidArgument(format!("character of {} used with {}", a.instance, h)));
    }
    Ok(())
}

/// The counit as a character on the given generators.
pub fn counit_character<H: HopfAlgebra, R: Ring>(h: &H, gens: &[H::Gen]) -> Character<H::Gen, R> {
    Character::new(h.name(), gens.iter().map(|g| (g.clone(), R::from_rational(&h.counit_gen(g)))).collect())
}

/// Convolution `α ⋆ β = m ∘ (α ⊗ β) ∘ Δ`, defined on the generators where `α` is.
pub fn convolve<H: HopfAlgebra, R: Ring>(
    h: &H,
    a: &Character<H::Gen, R>,
    b: &Character<H::Gen, R>,
) -> Result<Character<H::Gen, R>> {
    same_instance(&h.name(), a)?;
    same_instance(&h.name(), b)?;
    let mut values = BTreeMap::new();
    for g in a.values.keys() {
        let d = coproduct(h, &Element::gen(g.clone()))?;
        values.insert(g.clone(), a.eval_tensor(b, &d)?);
    }
    Ok(Character::new(h.name(), values))
}

/// Convolution inverse `α ∘ S`.
pub fn char_inverse<H: HopfAlgebra, R: Ring>(h: &H, a: &Character<H::Gen, R>) -> Result<Character<H::Gen, R>> {
    same_instance(&h.name(), a)?;
    let mut cache = AntipodeCache::default();
    let mut values = BTreeMap::new();
    for g in a.values.keys() {
        let s = cache.generator(h, g)?;
        values.insert(g.clone(), a.eval(&s)?);
    }
    Ok(Character::new(h.name(), values))
}

/// Instances whose characters are realized by a series group.
pub trait SeriesRealization: HopfAlgebra {
    fn series_kind(&self) -> SeriesKind;
    /// Generator standing for the coefficient at index `n ≥ 1`.
    fn coefficient_generator(&self, n: usize) -> Self::Gen;
}

/// The series `Σ α(x_n)` of kind fixed by the instance, with `α(x_0) = 1`.
pub fn character_series<H: SeriesRealization, R: Ring>(
    h: &H,
    a: &Character<H::Gen, R>,
    order: usize,
) -> Result<TruncatedSeries<R>> {
    same_instance(&h.name(), a)?;
    let mut coeffs = vec![R::one()];
    for n in 1..=order {
        coeffs.push(a.value(&h.coefficient_generator(n))?.clone());
    }
    TruncatedSeries::new(h.series_kind(), coeffs)
}

/// Inverse of [`character_series`].
pub fn series_character<H: SeriesRealization, R: Ring>(h: &H, s: &TruncatedSeries<R>) -> Result<Character<H::Gen, R>> {
    if s.kind() != h.series_kind() {
        return Err(Error::KindMismatch { expected: h.series_kind().tag().into(), found: s.kind().tag().into() });
    }
    let values = (1..=s.order()).map(|n| (h.coefficient_generator(n), s.coeff(n).clone())).collect();
    Ok(Character::new(h.name(), values))
}
