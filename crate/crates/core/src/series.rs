//! Truncated formal power series and the groups they carry.
//!
//! Three kinds share one container. An *invertible* series stores `f_n` as the
//! coefficient of `z^n` with `f_0 = 1`; a *diffeomorphism* stores `f_n` as the
//! coefficient of `z^{n+1}` with `f_0 = 1`; a *plain* series is an unconstrained
//! power series in `z^n` indexing (used for Green's functions and graph
//! projections, whose constant term is not normalized).

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{binomial, Poly, Rational, Ring};

/// Symbol that a bare Green's function uses for the bare mass.
pub const BARE_MASS_SYMBOL: &str = "m_b";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesKind {
    #[serde(rename = "inv")]
    Invertible,
    #[serde(rename = "diff")]
    Diffeomorphism,
    #[serde(rename = "plain")]
    Plain,
}

impl SeriesKind {
    pub fn tag(self) -> &'static str {
        match self {
            SeriesKind::Invertible => "inv",
            SeriesKind::Diffeomorphism => "diff",
            SeriesKind::Plain => "plain",
        }
    }

    /// Power of `z` multiplying the coefficient stored at index `n`.
    pub fn z_power(self, n: usize) -> usize {
        match self {
            SeriesKind::Diffeomorphism => n + 1,
            _ => n,
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<R> {
    kind: SeriesKind,
    coeffs: Vec<R>,
}

impl<R: Ring> TruncatedSeries<R> {
    /// Validates the kind invariant; `coeffs` has length `order + 1`.
    pub fn new(kind: SeriesKind, coeffs: Vec<R>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSeries("a series needs at least one coefficient".into()));
        }
        if kind != SeriesKind::Plain && !coeffs[0].is_one() {
            return Err(Error::InvalidSeries(format!(
                "{kind} series must have leading coefficient 1"
            )));
        }
        Ok(TruncatedSeries { kind, coeffs })
    }

    /// The group unit: `1` for invertible and plain series, `z` for diffeomorphisms.
    pub fn identity(kind: SeriesKind, order: usize) -> Self {
        let mut coeffs = vec![R::zero(); order + 1];
        coeffs[0] = R::one();
        TruncatedSeries { kind, coeffs }
    }

    pub fn zero_plain(order: usize) -> Self {
        TruncatedSeries { kind: SeriesKind::Plain, coeffs: vec![R::zero(); order + 1] }
    }

    /// Builds a series from coefficients of `z^0, z^1, ...`, truncating or padding to `order`.
    pub fn from_z_coefficients(kind: SeriesKind, z: &[R], order: usize) -> Result<Self> {
        let at = |k: usize| z.get(k).cloned().unwrap_or_else(R::zero);
        let coeffs: Vec<R> = match kind {
            SeriesKind::Diffeomorphism => {
                if !at(0).is_zero() {
                    return Err(Error::InvalidSeries("a diffeomorphism has no constant term".into()));
                }
                (0..=order).map(|n| at(n + 1)).collect()
            }
            _ => (0..=order).map(at).collect(),
        };
        Self::new(kind, coeffs)
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    /// Coefficients of `z^0 .. z^{top}` where `top` is the highest stored power.
    pub fn z_coefficients(&self) -> Vec<R> {
        match self.kind {
            SeriesKind::Diffeomorphism => std::iter::once(R::zero()).chain(self.coeffs.iter().cloned()).collect(),
            _ => self.coeffs.clone(),
        }
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderMismatch { left: order, right: self.order() });
        }
        Ok(TruncatedSeries { kind: self.kind, coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Reinterprets as a plain series with the same `z^n` coefficients (diffeomorphisms gain a zero constant term and lose their top coefficient).
    pub fn to_plain(&self) -> Self {
        let z = self.z_coefficients();
        TruncatedSeries { kind: SeriesKind::Plain, coeffs: z[..=self.order()].to_vec() }
    }

    /// Maps every coefficient through `f`, keeping the kind.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Result<TruncatedSeries<S>> {
        TruncatedSeries::new(self.kind, self.coeffs.iter().map(f).collect())
    }

    fn expect_kind(&self, kinds: &[SeriesKind]) -> Result<()> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: kinds.iter().map(|k| k.tag()).collect::<Vec<_>>().join("|"),
                found: self.kind.tag().into(),
            })
        }
    }
}

fn same_order<R: Ring>(f: &TruncatedSeries<R>, g: &TruncatedSeries<R>) -> Result<usize> {
    if f.order() != g.order() {
        return Err(Error::OrderMismatch { left: f.order(), right: g.order() });
    }
    Ok(f.order())
}

/// Product of dense `z`-polynomials keeping powers up to `top`.
fn mul_trunc<R: Ring>(a: &[R], b: &[R], top: usize) -> Vec<R> {
    let mut out = vec![R::zero(); top + 1];
    for (i, x) in a.iter().enumerate().take(top + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(top + 1 - i) {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// `Σ_n outer[n] · inner^n`, truncated at `top`.
fn substitute_dense<R: Ring>(outer: &[R], inner: &[R], top: usize) -> Vec<R> {
    // Without a constant term, `inner^n` starts at `z^n`; otherwise `outer` must be finite.
    let shifts = inner.first().is_none_or(|c| c.is_zero());
    let mut acc = vec![R::zero(); top + 1];
    let mut power = vec![R::zero(); top + 1];
    power[0] = R::one();
    for (n, c) in outer.iter().enumerate() {
        if shifts && n > top {
            break;
        }
        if n > 0 {
            power = mul_trunc(&power, inner, top);
        }
        if c.is_zero() {
            continue;
        }
        for k in if shifts { n } else { 0 }..=top {
            if !power[k].is_zero() {
                acc[k] = acc[k].clone() + c.clone() * power[k].clone();
            }
        }
    }
    acc
}

/// Cauchy product `(fg)_n = Σ_{p+q=n} f_p g_q`.
///
/// Two invertible series give an invertible series; a plain factor gives a plain result.
pub fn series_mul<R: Ring>(f: &TruncatedSeries<R>, g: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    let n = same_order(f, g)?;
    let allowed = [SeriesKind::Invertible, SeriesKind::Plain];
    f.expect_kind(&allowed)?;
    g.expect_kind(&allowed)?;
    let kind = if f.kind == SeriesKind::Invertible && g.kind == SeriesKind::Invertible {
        SeriesKind::Invertible
    } else {
        SeriesKind::Plain
    };
    Ok(TruncatedSeries { kind, coeffs: mul_trunc(&f.coeffs, &g.coeffs, n) })
}

/// Multiplicative inverse by the recursion `g_n = -Σ_{k=1}^n f_k g_{n-k}`.
pub fn series_recip<R: Ring>(f: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    f.expect_kind(&[SeriesKind::Invertible])?;
    let n = f.order();
    let mut g = vec![R::zero(); n + 1];
    g[0] = R::one();
    for k in 1..=n {
        let mut acc = R::zero();
        for j in 1..=k {
            acc = acc + f.coeffs[j].clone() * g[k - j].clone();
        }
        g[k] = -acc;
    }
    Ok(TruncatedSeries { kind: SeriesKind::Invertible, coeffs: g })
}

/// Generalized binomial power `f^a` of an invertible series for rational `a`.
pub fn series_pow<R: Ring>(f: &TruncatedSeries<R>, a: &Rational) -> Result<TruncatedSeries<R>> {
    f.expect_kind(&[SeriesKind::Invertible])?;
    let n = f.order();
    let mut x = f.coeffs.clone();
    x[0] = R::zero();
    let binoms: Vec<R> = (0..=n).map(|k| R::from_rational(&binomial(a, k))).collect();
    Ok(TruncatedSeries { kind: SeriesKind::Invertible, coeffs: substitute_dense(&binoms, &x, n) })
}

/// Composition `(f∘g)(z) = f(g(z)) = Σ_n f_n g(z)^{n+1}` of two diffeomorphisms.
pub fn diff_compose<R: Ring>(f: &TruncatedSeries<R>, g: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    let n = same_order(f, g)?;
    f.expect_kind(&[SeriesKind::Diffeomorphism])?;
    g.expect_kind(&[SeriesKind::Diffeomorphism])?;
    // f(w) = Σ f_n w^{n+1}: shift f into dense form with a zero constant term.
    let outer = f.z_coefficients();
    let dense = substitute_dense(&outer, &g.z_coefficients(), n + 1);
    Ok(TruncatedSeries { kind: SeriesKind::Diffeomorphism, coeffs: dense[1..].to_vec() })
}

/// Compositional inverse, solved order by order from `f(h(z)) = z`.
pub fn diff_inverse<R: Ring>(f: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    f.expect_kind(&[SeriesKind::Diffeomorphism])?;
    let n = f.order();
    let mut h = TruncatedSeries::<R>::identity(SeriesKind::Diffeomorphism, n);
    for k in 1..=n {
        // With h_k = 0 the k-th coefficient of f∘h is exactly what h_k must cancel.
        let fk = f.truncate(k)?;
        let hk = h.truncate(k)?;
        let c = diff_compose(&fk, &hk)?.coeffs[k].clone();
        h.coeffs[k] = -c;
    }
    Ok(h)
}

/// Substitution `F(g(z))` of a diffeomorphism into an invertible or plain series.
pub fn series_substitute<R: Ring>(
    outer: &TruncatedSeries<R>,
    g: &TruncatedSeries<R>,
) -> Result<TruncatedSeries<R>> {
    let n = same_order(outer, g)?;
    outer.expect_kind(&[SeriesKind::Invertible, SeriesKind::Plain])?;
    g.expect_kind(&[SeriesKind::Diffeomorphism])?;
    Ok(TruncatedSeries { kind: outer.kind, coeffs: substitute_dense(&outer.coeffs, &g.z_coefficients(), n) })
}

/// An element `(f, F)` of the semidirect product of diffeomorphisms and invertible series.
#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectPair<R> {
    pub diff: TruncatedSeries<R>,
    pub inv: TruncatedSeries<R>,
}

impl<R: Ring> SemidirectPair<R> {
    pub fn new(diff: TruncatedSeries<R>, inv: TruncatedSeries<R>) -> Result<Self> {
        diff.expect_kind(&[SeriesKind::Diffeomorphism])?;
        inv.expect_kind(&[SeriesKind::Invertible])?;
        same_order(&diff, &inv)?;
        Ok(SemidirectPair { diff, inv })
    }

    pub fn identity(order: usize) -> Self {
        SemidirectPair {
            diff: TruncatedSeries::identity(SeriesKind::Diffeomorphism, order),
            inv: TruncatedSeries::identity(SeriesKind::Invertible, order),
        }
    }
}

/// `(f,F)·(g,G) = (f∘g, (F∘g)·G)`.
pub fn semidirect_mul<R: Ring>(a: &SemidirectPair<R>, b: &SemidirectPair<R>) -> Result<SemidirectPair<R>> {
    same_order(&a.diff, &b.diff)?;
    let diff = diff_compose(&a.diff, &b.diff)?;
    let inv = series_mul(&series_substitute(&a.inv, &b.diff)?, &b.inv)?;
    Ok(SemidirectPair { diff, inv })
}

/// `(f,F)^{-1} = (f^{-1}, (F∘f^{-1})^{-1})`.
pub fn semidirect_inverse<R: Ring>(a: &SemidirectPair<R>) -> Result<SemidirectPair<R>> {
    let diff = diff_inverse(&a.diff)?;
    let inv = series_recip(&series_substitute(&a.inv, &diff)?)?;
    Ok(SemidirectPair { diff, inv })
}

/// Bare coupling `λ_b = λ Z1 Z3^{-3/2}` as a diffeomorphism in `λ`.
pub fn bare_coupling<R: Ring>(z1: &TruncatedSeries<R>, z3: &TruncatedSeries<R>) -> Result<TruncatedSeries<R>> {
    same_order(z1, z3)?;
    let h = series_mul(z1, &series_pow(z3, &crate::ring::rat(-3, 2))?)?;
    TruncatedSeries::new(SeriesKind::Diffeomorphism, h.coeffs)
}

/// Bare mass `m_b = m Zm^{1/2} Z3^{-1/2}` as a plain series in `λ`.
pub fn bare_mass<R: Ring>(zm: &TruncatedSeries<R>, z3: &TruncatedSeries<R>, m: &R) -> Result<TruncatedSeries<R>> {
    same_order(zm, z3)?;
    let h = series_mul(
        &series_pow(zm, &crate::ring::rat(1, 2))?,
        &series_pow(z3, &crate::ring::rat(-1, 2))?,
    )?;
    Ok(TruncatedSeries { kind: SeriesKind::Plain, coeffs: h.coeffs.into_iter().map(|c| m.clone() * c).collect() })
}

/// Renormalized Green's function `Z3^{-k/2}(λ) G(m_b(m,λ), λ_b(λ))`.
///
/// `g_bare` is read as a series in `λ_b` (index `n` multiplies `λ_b^n`) whose
/// coefficients are polynomials in [`BARE_MASS_SYMBOL`]; the result is a plain
/// series in `λ`.
pub fn dyson_transform(
    g_bare: &TruncatedSeries<Poly>,
    z3: &TruncatedSeries<Poly>,
    zm: &TruncatedSeries<Poly>,
    z1: &TruncatedSeries<Poly>,
    k: u32,
    m: &Poly,
) -> Result<TruncatedSeries<Poly>> {
    let n = same_order(g_bare, z3)?;
    same_order(z3, zm)?;
    same_order(z3, z1)?;
    let lambda_b = bare_coupling(z1, z3)?;
    let m_b = bare_mass(zm, z3, m)?;
    let lb_dense = lambda_b.z_coefficients();
    let mut acc = vec![Poly::zero(); n + 1];
    let mut lb_power = vec![Poly::zero(); n + 1];
    lb_power[0] = Poly::one();
    for (j, gj) in g_bare.coeffs.iter().enumerate() {
        if j > 0 {
            lb_power = mul_trunc(&lb_power, &lb_dense, n);
        }
        if gj.is_zero() {
            continue;
        }
        // Substitute m_b(λ) into the polynomial coefficient.
        let in_mass = gj.coefficients_in(BARE_MASS_SYMBOL);
        let gj_lambda = substitute_dense(&in_mass, &m_b.coeffs, n);
        let term = mul_trunc(&gj_lambda, &lb_power, n);
        for (a, t) in acc.iter_mut().zip(term) {
            *a = &*a + &t;
        }
    }
    let scale = series_pow(z3, &crate::ring::rat(-(k as i64), 2))?;
    Ok(TruncatedSeries { kind: SeriesKind::Plain, coeffs: mul_trunc(&scale.coeffs, &acc, n) })
}

/// Two-point function from its 1PI part: `G0 (1 - Σ G0)^{-1}`.
pub fn two_point_from_1pi<R: Ring>(sigma: &TruncatedSeries<R>, g0: &R) -> Result<TruncatedSeries<R>> {
    if !sigma.coeffs[0].is_zero() {
        return Err(Error::InvalidSeries("the self-energy series must start at order 1".into()));
    }
    let mut denom = sigma.coeffs.iter().map(|s| -(s.clone() * g0.clone())).collect::<Vec<_>>();
    denom[0] = R::one();
    let inv = series_recip(&TruncatedSeries { kind: SeriesKind::Invertible, coeffs: denom })?;
    Ok(TruncatedSeries { kind: SeriesKind::Plain, coeffs: inv.coeffs.into_iter().map(|c| g0.clone() * c).collect() })
}

impl<R: Ring + fmt::Display> fmt::Display for TruncatedSeries<R> {
    /// Renders as a polynomial in `z`, e.g. `z + 2*z^2 + (a + b)*z^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = self.kind.z_power(n);
            let cs = c.to_string();
            let atomic = !cs[1..].contains([' ', '+']) && !cs[1..].contains(" - ");
            let zpart = match p {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{p}"),
            };
            let term = if p == 0 {
                cs
            } else if c.is_one() {
                zpart
            } else if cs == "-1" {
                format!("-{zpart}")
            } else if atomic {
                format!("{cs}*{zpart}")
            } else {
                format!("({cs})*{zpart}")
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for t in &parts[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        write!(f, "{out}")
    }
}

/// JSON form `{"kind": "inv"|"diff"|"plain", "order": N, "coeffs": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub kind: SeriesKind,
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl<R: Ring + fmt::Display> TruncatedSeries<R> {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson { kind: self.kind, order: self.order(), coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
    }
}

impl TruncatedSeries<Poly> {
    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if j.coeffs.len() != j.order + 1 {
            return Err(Error::InvalidSeries(format!(
                "order {} needs {} coefficients, got {}",
                j.order,
                j.order + 1,
                j.coeffs.len()
            )));
        }
        let coeffs = j.coeffs.iter().map(|s| Poly::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(j.kind, coeffs)
    }

    /// Parses a polynomial in the variable `var` (e.g. `"z + z^2"`) into a series of the given kind.
    pub fn parse_in(src: &str, var: &str, kind: SeriesKind, order: usize) -> Result<Self> {
        let p = Poly::parse(src)?;
        let z = p.coefficients_in(var);
        Self::from_z_coefficients(kind, &z, order)
    }
}

impl<R: Ring> TruncatedSeries<R> {
    /// Converts rational coefficients into the target ring.
    pub fn embed<S: Ring>(&self) -> TruncatedSeries<S>
    where
        R: Into<Rational>,
    {
        TruncatedSeries {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|c| S::from_rational(&c.clone().into())).collect(),
        }
    }
}
