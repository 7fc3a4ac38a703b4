//! Cutoff ladders, logarithmic fits and large-momentum tails.

use serde::Serialize;

use super::engine::{standard_presentation, Bphz, ExternalMomenta, NumericBphz, RegulatorConfig};
use super::integrand::{graph_integrand, Integrand};
use super::quadrature::{integrate, CompiledIntegrand, NodeSet, QuadratureSpec};
use crate::error::{Error, Result};
use crate::graphs::{canonical_form, FeynmanGraph};

/// Least-squares line `y = slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("a fit needs at least two paired points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("fit abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit { slope, intercept: my - slope * mx, r2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderPoint {
    pub cutoff: f64,
    pub bare: f64,
    pub bare_sigma: Option<f64>,
    pub renormalized: f64,
    pub renormalized_sigma: Option<f64>,
    /// `(r, C_r(Γ))` for the overall counterterms.
    pub counterterms: Vec<(u8, f64)>,
}

/// Change of `Ar` between consecutive cutoffs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CauchyStep {
    pub from: f64,
    pub to: f64,
    pub difference: f64,
    pub sigma: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub graph: String,
    pub dimension: i64,
    pub loops: usize,
    pub quadrature: QuadratureSpec,
    pub points: Vec<LadderPoint>,
    /// `A_Λ ≈ intercept + slope · ln Λ`.
    pub bare_fit: LinearFit,
    pub cauchy: Vec<CauchyStep>,
}

fn check_cutoffs(lambdas: &[f64]) -> Result<()> {
    if lambdas.len() < 2 || lambdas.iter().any(|l| !l.is_finite()) || lambdas.windows(2).any(|w| w[1] <= w[0]) || lambdas[0] <= 0.0 {
        return Err(Error::InvalidArgument("cutoffs must be positive and strictly increasing, at least two".into()));
    }
    Ok(())
}

/// Bare and renormalized amplitudes along increasing cutoffs.
///
/// One-loop graphs are integrated shell by shell, each shell `[Λ_{i−1}, Λ_i]`
/// with its own `spec.samples` nodes, so consecutive differences are
/// independent shell integrals with their own errors. Multi-loop graphs use a
/// fresh product rule per cutoff.
pub fn renormalization_ladder(
    g: &FeynmanGraph,
    p: &ExternalMomenta,
    dimension: i64,
    lambdas: &[f64],
    spec: &QuadratureSpec,
) -> Result<LadderReport> {
    check_cutoffs(lambdas)?;
    let bphz = Bphz::new(dimension)?;
    let g_std = standard_presentation(g)?;
    let labels = bphz.labels(&g_std)?;
    let dim = dimension as usize;
    let mut points = Vec::new();
    let mut cauchy = Vec::new();
    if g_std.loops() == 1 {
        let compile = |i: &Integrand| {
            let n = if i.depends_on_externals() { i.externals } else { 0 };
            if p.0.len() < n {
                return Err(Error::InvalidArgument(format!("{n} external momenta needed")));
            }
            CompiledIntegrand::new(i, &p.0[..n], dim)
        };
        let bare = compile(&graph_integrand(&g_std)?)?;
        let ren = compile(&bphz.renormalized_integrand(&g_std)?)?;
        let cts = labels
            .iter()
            .map(|&r| Ok((r, compile(&bphz.counterterm_integrand(&g_std, r)?)?)))
            .collect::<Result<Vec<_>>>()?;
        let (mut b, mut bv, mut a, mut av) = (0.0, 0.0, 0.0, 0.0);
        let mut c = vec![0.0; cts.len()];
        let mut lo = 0.0;
        for (i, &hi) in lambdas.iter().enumerate() {
            let nodes = NodeSet::shell(dim, lo, hi, spec, i as u64)?;
            let eb = integrate(&bare, &nodes)?;
            let er = integrate(&ren, &nodes)?;
            b += eb.value;
            bv += eb.sigma.unwrap_or(0.0).powi(2);
            a += er.value;
            av += er.sigma.unwrap_or(0.0).powi(2);
            for (k, (_, ci)) in cts.iter().enumerate() {
                c[k] += integrate(ci, &nodes)?.value;
            }
            if i > 0 {
                cauchy.push(CauchyStep { from: lo, to: hi, difference: er.value, sigma: er.sigma });
            }
            points.push(LadderPoint {
                cutoff: hi,
                bare: b,
                bare_sigma: Some(bv.sqrt()),
                renormalized: a,
                renormalized_sigma: Some(av.sqrt()),
                counterterms: cts.iter().map(|(r, _)| *r).zip(c.iter().copied()).collect(),
            });
            lo = hi;
        }
    } else {
        for &lambda in lambdas {
            let nb = NumericBphz::new(RegulatorConfig { cutoff: lambda, dimension, quadrature: spec.clone() })?;
            let counterterms = labels.iter().map(|&r| Ok((r, nb.counterterm(&g_std, r)?))).collect::<Result<_>>()?;
            points.push(LadderPoint {
                cutoff: lambda,
                bare: nb.amplitude(&g_std, p)?.value,
                bare_sigma: None,
                renormalized: nb.renormalized_amplitude(&g_std, p)?.value,
                renormalized_sigma: None,
                counterterms,
            });
        }
        for w in points.windows(2) {
            cauchy.push(CauchyStep {
                from: w[0].cutoff,
                to: w[1].cutoff,
                difference: w[1].renormalized - w[0].renormalized,
                sigma: None,
            });
        }
    }
    let xs: Vec<f64> = lambdas.iter().map(|l| l.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|pt| pt.bare).collect();
    Ok(LadderReport {
        graph: canonical_form(&g_std.unlabeled()).encoding,
        dimension,
        loops: g_std.loops(),
        quadrature: spec.clone(),
        points,
        bare_fit: fit_linear(&xs, &ys)?,
        cauchy,
    })
}

/// Fixed generic unit direction in `R^dim`.
pub fn generic_direction(dim: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..dim).map(|k| 1.0 / (1.0 + 0.7 * k as f64 + 0.13 * (k * k) as f64)).collect();
    let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.into_iter().map(|x| x / n).collect()
}

/// Log–log slope of `|f(r·n̂)|` for a one-loop integrand over `points`
/// logarithmically spaced radii in `[r_min, r_max]`.
pub fn tail_slope(
    f: &Integrand,
    p: &ExternalMomenta,
    dim: usize,
    r_min: f64,
    r_max: f64,
    points: usize,
) -> Result<LinearFit> {
    if f.loops != 1 {
        return Err(Error::InvalidArgument("tail slopes are defined for one-loop integrands".into()));
    }
    if !(r_min > 0.0 && r_max > r_min) || points < 2 {
        return Err(Error::InvalidArgument("need 0 < r_min < r_max and two points".into()));
    }
    let n = if f.depends_on_externals() { f.externals } else { 0 };
    if p.0.len() < n {
        return Err(Error::InvalidArgument(format!("{n} external momenta needed")));
    }
    let ci = CompiledIntegrand::new(f, &p.0[..n], dim)?;
    let dir = generic_direction(dim);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 0..points {
        let r = r_min * (r_max / r_min).powf(k as f64 / (points - 1) as f64);
        let q: Vec<f64> = dir.iter().map(|x| r * x).collect();
        let v = ci.eval::<f64>(&[&q]).abs();
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Computation(format!("integrand is {v} at radius {r}")));
        }
        xs.push(r.ln());
        ys.push(v.ln());
    }
    fit_linear(&xs, &ys)
}
