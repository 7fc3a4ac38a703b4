//! Prepared integrands, counterterms and renormalized amplitudes.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::integrand::{graph_integrand, Factor, Integrand, Term};
use super::momentum::Momentum;
use super::quadrature::{integrate, CompiledIntegrand, Estimate, NodeSet, QuadratureSpec};
use crate::error::{Error, Result};
use crate::graphs::io::parse_encoding;
use crate::graphs::{
    canonical_form, contract, divergent_subgraph_families, extract_subgraph, FeynmanGraph, SubgraphFamily,
    VertexKind,
};
use crate::ring::{int, Rational};

/// Deepest loop order the recursion accepts.
pub const MAX_RECURSION_LOOPS: usize = 4;

/// Canonical vertex and edge order, keeping the caller's external labels when
/// every external point has one and numbering them in canonical order otherwise.
pub fn standard_presentation(g: &FeynmanGraph) -> Result<FeynmanGraph> {
    let cf = canonical_form(&g.unlabeled());
    let parsed = parse_encoding(&cf.encoding)?;
    let legs: Vec<usize> = cf.order.iter().copied().filter(|&v| g.kind(v).is_leg()).collect();
    let all_labeled = legs.iter().all(|&v| matches!(g.kind(v), VertexKind::External(Some(_))));
    let first_leg = parsed.non_leg_vertices().len();
    let kinds = parsed
        .kinds()
        .iter()
        .enumerate()
        .map(|(v, &k)| match k {
            VertexKind::External(_) if all_labeled => g.kind(legs[v - first_leg]),
            VertexKind::External(_) => VertexKind::External(Some((v - first_leg + 1) as u32)),
            other => other,
        })
        .collect();
    FeynmanGraph::new(kinds, parsed.edges().to_vec())
}

/// Memo key: unlabeled canonical encoding and Taylor label.
pub type CountertermKey = (String, u8);

fn key_of(g: &FeynmanGraph, r: u8) -> CountertermKey {
    (canonical_form(&g.unlabeled()).encoding, r)
}

/// One family term of the prepared integrand.
#[derive(Clone, Debug)]
pub struct FamilyTerm {
    pub family: SubgraphFamily,
    pub quotient: FeynmanGraph,
    /// Integrand of the quotient on its own loop momenta.
    pub quotient_integrand: Integrand,
    /// Counterterm keys of the members, in member order.
    pub members: Vec<CountertermKey>,
    /// Loops of each member.
    pub member_loops: Vec<usize>,
}

/// Exact symbolic layer, for one space-time dimension.
#[derive(Debug)]
pub struct Bphz {
    pub dimension: i64,
    counterterms: Mutex<HashMap<CountertermKey, Integrand>>,
}

impl Bphz {
    pub fn new(dimension: i64) -> Result<Self> {
        if dimension != 4 && dimension != 6 {
            return Err(Error::InvalidArgument(format!("dimension must be 4 or 6, got {dimension}")));
        }
        Ok(Bphz { dimension, counterterms: Mutex::new(HashMap::new()) })
    }

    /// Superficial degree of a cross-free graph.
    pub fn omega(&self, g: &FeynmanGraph) -> Result<i64> {
        Ok(g.stats(self.dimension)?.omega)
    }

    fn check_input(&self, g: &FeynmanGraph) -> Result<()> {
        if !g.is_1pi()? {
            return Err(Error::InvalidGraph("the recursion needs a 1PI graph".into()));
        }
        if g.cross_count() > 0 {
            return Err(Error::InvalidGraph("crossed graphs are evaluated, not subtracted".into()));
        }
        if g.loops() > MAX_RECURSION_LOOPS {
            return Err(Error::BoundExceeded(format!(
                "{} loops exceeds the recursion bound {MAX_RECURSION_LOOPS}",
                g.loops()
            )));
        }
        Ok(())
    }

    /// Families of divergent proper subgraphs of the standard presentation, with quotient integrands.
    pub fn family_terms(&self, g_std: &FeynmanGraph) -> Result<Vec<FamilyTerm>> {
        let mut out = Vec::new();
        for family in divergent_subgraph_families(g_std, self.dimension)? {
            let quotient = contract(g_std, &family)?;
            let quotient_integrand = graph_integrand(&quotient)?;
            let mut members = Vec::new();
            let mut member_loops = Vec::new();
            for m in &family.members {
                let sub = extract_subgraph(g_std, &m.vertices)?;
                member_loops.push(sub.loops());
                members.push(key_of(&sub, m.label.unwrap_or(0)));
            }
            out.push(FamilyTerm { family, quotient, quotient_integrand, members, member_loops });
        }
        Ok(out)
    }

    /// `Ī(Γ) = I(Γ) + Σ_families Π(−T[Ī(γᵢ)]) · I(Γ/{γᵢ})`, on the standard presentation.
    ///
    /// Members take the first loop momenta, in member order; the quotient takes the rest.
    /// Two-leg members of label 2 use the averaged second-order coefficient, with
    /// the `k²` carried by the cross of the quotient.
    pub fn prepared_integrand(&self, g: &FeynmanGraph) -> Result<Integrand> {
        self.check_input(g)?;
        let g = standard_presentation(g)?;
        let base = graph_integrand(&g)?;
        let (l, e) = (base.loops, base.externals);
        let mut acc = base;
        for ft in self.family_terms(&g)? {
            let mut prod = Integrand::one(l, e);
            let mut next = 0;
            for (key, &ml) in ft.members.iter().zip(&ft.member_loops) {
                let c = self.counterterm_integrand_by_key(key)?;
                prod = prod.mul(&c.relabel(&(next..next + ml).collect::<Vec<_>>(), l, e)?)?;
                next += ml;
            }
            let lq = ft.quotient_integrand.loops;
            prod = prod.mul(&ft.quotient_integrand.relabel(&(next..next + lq).collect::<Vec<_>>(), l, e)?)?;
            next += lq;
            if next != l {
                return Err(Error::Computation(format!("loop bookkeeping failed: {next} of {l} loops placed")));
            }
            acc = acc.add(&prod)?;
        }
        Ok(acc)
    }

    fn counterterm_integrand_by_key(&self, key: &CountertermKey) -> Result<Integrand> {
        if let Some(c) = self.counterterms.lock().expect("memo lock").get(key) {
            return Ok(c.clone());
        }
        let g = standard_presentation(&parse_encoding(&key.0)?)?;
        self.check_input(&g)?;
        let omega = self.omega(&g)?;
        let r = key.1;
        if r % 2 == 1 || r as i64 > omega {
            return Err(Error::InvalidArgument(format!("label {r} needs an even order ≤ ω = {omega}")));
        }
        let c = self.prepared_integrand(&g)?.isotropic_coefficient(r as usize, self.dimension)?.scale(&int(-1));
        let c = c.relabel(&(0..c.loops).collect::<Vec<_>>(), c.loops, 0)?;
        self.counterterm_integrand_by_key_insert(key.clone(), c.clone());
        Ok(c)
    }

    fn counterterm_integrand_by_key_insert(&self, key: CountertermKey, c: Integrand) {
        self.counterterms.lock().expect("memo lock").entry(key).or_insert(c);
    }

    /// Integrand of `C(Γ_(r)) = −(1/r!) ∂ʳ_p|₀ ∫ Ī(Γ)`, stripped of `(p·p)^{r/2}`.
    pub fn counterterm_integrand(&self, g: &FeynmanGraph, r: u8) -> Result<Integrand> {
        self.check_input(g)?;
        self.counterterm_integrand_by_key(&key_of(g, r))
    }

    /// Even Taylor labels `r ≤ ω(Γ)`.
    pub fn labels(&self, g: &FeynmanGraph) -> Result<Vec<u8>> {
        let omega = self.omega(g)?;
        Ok([0u8, 2].into_iter().filter(|&r| r as i64 <= omega).collect())
    }

    /// `Ī(Γ) − T^ω[Ī(Γ)]` with the averaged Taylor operator, written as
    /// `Ī(Γ) + Σ_r c_r · (p·p)^{r/2}` with `c_r` the counterterm integrands.
    pub fn renormalized_integrand(&self, g: &FeynmanGraph) -> Result<Integrand> {
        let pi = self.prepared_integrand(g)?;
        let (l, e) = (pi.loops, pi.externals);
        let mut acc = pi;
        for r in self.labels(g)? {
            let c = self.counterterm_integrand(g, r)?.relabel(&(0..l).collect::<Vec<_>>(), l, e)?;
            acc = acc.add(&c.mul(&p_squared_power(l, e, r))?)?;
        }
        Ok(acc)
    }

    /// `Ī(Γ) − T^ω[Ī(Γ)]` with the exact (pointwise) Taylor polynomial.
    pub fn subtracted_integrand_exact(&self, g: &FeynmanGraph) -> Result<Integrand> {
        let pi = self.prepared_integrand(g)?;
        let omega = self.omega(g)?;
        if omega < 0 {
            return Ok(pi);
        }
        pi.sub(&pi.taylor_polynomial(omega as usize)?)
    }

    /// Snapshot of the memoized counterterm integrands.
    pub fn counterterm_table(&self) -> Vec<(CountertermKey, Integrand)> {
        let mut v: Vec<_> =
            self.counterterms.lock().expect("memo lock").iter().map(|(k, i)| (k.clone(), i.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// `(p₁·p₁)^{r/2}` as an integrand.
fn p_squared_power(loops: usize, externals: usize, r: u8) -> Integrand {
    let p = Momentum::ext_var(0, loops, externals);
    let factors = (0..r / 2).map(|_| Factor::Dot(p.clone(), p.clone())).collect();
    Integrand::from_terms(loops, externals, vec![Term { coeff: int(1), factors }])
}

/// Cutoff, dimension and quadrature.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegulatorConfig {
    pub cutoff: f64,
    pub dimension: i64,
    pub quadrature: QuadratureSpec,
}

impl RegulatorConfig {
    pub fn new(dimension: i64, cutoff: f64, samples: usize, seed: u64) -> Self {
        RegulatorConfig { cutoff, dimension, quadrature: QuadratureSpec::monte_carlo(samples, seed) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(Error::InvalidArgument(format!("cutoff must be positive, got {}", self.cutoff)));
        }
        if self.dimension != 4 && self.dimension != 6 {
            return Err(Error::InvalidArgument(format!("dimension must be 4 or 6, got {}", self.dimension)));
        }
        if self.quadrature.samples < 2 {
            return Err(Error::InvalidArgument("at least two quadrature samples are needed".into()));
        }
        Ok(())
    }
}

/// External momenta `p₁, …` as Euclidean vectors (units of `m`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExternalMomenta(pub Vec<Vec<f64>>);

impl ExternalMomenta {
    /// `p_j = magnitude · e_j` for `j = 1..=count`.
    pub fn along_axes(count: usize, magnitude: f64, dim: usize) -> Result<Self> {
        if count > dim {
            return Err(Error::InvalidArgument(format!("{count} axes do not fit in {dim} dimensions")));
        }
        Ok(ExternalMomenta(
            (0..count)
                .map(|j| {
                    let mut v = vec![0.0; dim];
                    v[j] = magnitude;
                    v
                })
                .collect(),
        ))
    }

    fn p_squared(&self) -> f64 {
        self.0.first().map_or(0.0, |p| p.iter().map(|x| x * x).sum())
    }
}

/// Counterterm value in either mode.
#[derive(Clone, Debug, PartialEq)]
pub enum CountertermData {
    Numeric(f64),
    Symbolic(Integrand),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountertermValue {
    pub graph: String,
    pub label: u8,
    pub value: CountertermData,
}

/// Both sides of `Ar = A ⋆ C` on shared nodes.
#[derive(Clone, Debug, Serialize)]
pub struct AStarCReport {
    pub graph: String,
    pub renormalized: f64,
    pub convolution: f64,
    /// `|lhs − rhs| / max(|lhs|, |rhs|, largest term)`.
    pub relative_deviation: f64,
    /// Named contributions to the right side.
    pub terms: Vec<(String, f64)>,
}

/// Numeric evaluation under a cutoff, with memoized counterterm values.
#[derive(Debug)]
pub struct NumericBphz {
    pub symbolic: Bphz,
    pub cfg: RegulatorConfig,
    nodes: NodeSet,
    values: Mutex<HashMap<CountertermKey, f64>>,
}

impl NumericBphz {
    pub fn new(cfg: RegulatorConfig) -> Result<Self> {
        cfg.validate()?;
        let nodes = NodeSet::ball(cfg.dimension as usize, cfg.cutoff, &cfg.quadrature)?;
        Ok(NumericBphz { symbolic: Bphz::new(cfg.dimension)?, cfg, nodes, values: Mutex::new(HashMap::new()) })
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn integrate(&self, i: &Integrand, p: &ExternalMomenta) -> Result<Estimate> {
        let needed = if i.depends_on_externals() { i.externals } else { 0 };
        if p.0.len() < needed {
            return Err(Error::InvalidArgument(format!("{needed} external momenta needed, {} given", p.0.len())));
        }
        let ci = CompiledIntegrand::new(i, &p.0[..needed.max(p.0.len().min(i.externals))], self.nodes.dim)?;
        integrate(&ci, &self.nodes)
    }

    /// Bare regularized amplitude `A_Λ(Γ; p)`; crossed graphs allowed.
    pub fn amplitude(&self, g: &FeynmanGraph, p: &ExternalMomenta) -> Result<Estimate> {
        self.integrate(&graph_integrand(&standard_presentation(g)?)?, p)
    }

    fn counterterm_by_key(&self, key: &CountertermKey) -> Result<f64> {
        if let Some(v) = self.values.lock().expect("memo lock").get(key) {
            return Ok(*v);
        }
        let c = self.symbolic.counterterm_integrand_by_key(key)?;
        let v = self.integrate(&c, &ExternalMomenta(Vec::new()))?.value;
        Ok(*self.values.lock().expect("memo lock").entry(key.clone()).or_insert(v))
    }

    /// `C_r(Γ)` under the cutoff.
    pub fn counterterm(&self, g: &FeynmanGraph, r: u8) -> Result<f64> {
        self.symbolic.check_input(g)?;
        self.counterterm_by_key(&key_of(g, r))
    }

    pub fn counterterm_value(&self, g: &FeynmanGraph, r: u8) -> Result<CountertermValue> {
        Ok(CountertermValue {
            graph: canonical_form(&g.unlabeled()).encoding,
            label: r,
            value: CountertermData::Numeric(self.counterterm(g, r)?),
        })
    }

    /// `Ar_Λ(Γ; p)`; for `ω < 0` only subdivergences are subtracted.
    pub fn renormalized_amplitude(&self, g: &FeynmanGraph, p: &ExternalMomenta) -> Result<Estimate> {
        self.integrate(&self.symbolic.renormalized_integrand(g)?, p)
    }

    /// `(A ⋆ C)(Γ) = A(Γ) + C(Γ) + Σ A(Γ/{γᵢ}) Π C(γᵢ)` against `Ar(Γ)`, same nodes.
    pub fn check_ar_equals_a_star_c(&self, g: &FeynmanGraph, p: &ExternalMomenta) -> Result<AStarCReport> {
        let lhs = self.renormalized_amplitude(g, p)?.value;
        let g_std = standard_presentation(g)?;
        let mut terms = vec![("A(G)".to_string(), self.amplitude(&g_std, p)?.value)];
        for r in self.symbolic.labels(&g_std)? {
            let c = self.counterterm(&g_std, r)?;
            terms.push((format!("C(G({r}))·p^{r}"), c * p.p_squared().powi(r as i32 / 2)));
        }
        for ft in self.symbolic.family_terms(&g_std)? {
            let a = self.integrate(&ft.quotient_integrand, p)?.value;
            let mut prod = a;
            let mut names = Vec::new();
            for key in &ft.members {
                prod *= self.counterterm_by_key(key)?;
                names.push(format!("C([{}]({}))", key.0, key.1));
            }
            terms.push((format!("A(G/{{..}})·{}", names.join("·")), prod));
        }
        let rhs: f64 = terms.iter().map(|(_, v)| v).sum();
        let scale = terms.iter().map(|(_, v)| v.abs()).fold(lhs.abs().max(rhs.abs()), f64::max);
        let relative_deviation = if scale == 0.0 { 0.0 } else { (lhs - rhs).abs() / scale };
        Ok(AStarCReport {
            graph: canonical_form(&g.unlabeled()).encoding,
            renormalized: lhs,
            convolution: rhs,
            relative_deviation,
            terms,
        })
    }

    /// Memoized counterterm values.
    pub fn counterterm_ledger(&self) -> Vec<(CountertermKey, f64)> {
        let mut v: Vec<_> = self.values.lock().expect("memo lock").iter().map(|(k, x)| (k.clone(), *x)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

/// Exact rational image of a finite float (for feeding numeric values into exact algebra).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Computation(format!("{x} is not finite")))
}

/// Float image of a rational.
pub fn f64_from_rational(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
