//! Monte Carlo quadrature in spherical coordinates.
//!
//! The radius is sampled through `s = ln(1 + r²)`, stratified uniformly on the
//! shell's `s` range, with directions uniform on the sphere. In these variables
//! a logarithmically divergent one-loop integrand has a flat radial profile.
//! Every loop momentum of a multi-loop integral ranges over the same node set
//! (a product rule), so integrals of factorized integrands factorize exactly.

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::integrand::{Factor, Integrand};
use crate::error::{Error, Result};
use crate::ring::Rational;

/// Largest number of node tuples a single product-rule integral may visit.
pub const MAX_PRODUCT_NODES: f64 = 2.0e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuadratureMethod {
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    /// Nodes per loop momentum.
    pub samples: usize,
    pub seed: u64,
    /// Pair every node `q` with `−q`.
    pub antithetic: bool,
}

impl QuadratureSpec {
    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec { method: QuadratureMethod::MonteCarlo, samples, seed, antithetic: true }
    }
}

/// Surface area of the unit sphere in `R^d`, via `A_d = 2π/(d−2)·A_{d−2}`.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI / (d - 2) as f64 * sphere_area(d - 2),
    }
}

/// Weighted nodes for one loop momentum on a radial shell, including `(2π)^{-D}`.
#[derive(Clone, Debug)]
pub struct NodeSet {
    pub dim: usize,
    /// Row-major, `len = dim × weights.len()`.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Nodes `2k` and `2k+1` are mirror images.
    pub antithetic: bool,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// Nodes on `r_lo ≤ |q| ≤ r_hi`. `stream` separates the random streams of shells.
    pub fn shell(dim: usize, r_lo: f64, r_hi: f64, spec: &QuadratureSpec, stream: u64) -> Result<Self> {
        if !(r_lo >= 0.0 && r_hi > r_lo && r_hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad radial range [{r_lo}, {r_hi}]")));
        }
        if spec.samples < 2 {
            return Err(Error::InvalidArgument("at least two samples are needed".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(stream);
        let base = if spec.antithetic { spec.samples / 2 } else { spec.samples };
        let (s_lo, s_hi) = ((r_lo * r_lo).ln_1p(), (r_hi * r_hi).ln_1p());
        let jac = sphere_area(dim) / (2.0 * std::f64::consts::PI).powi(dim as i32);
        let mut points = Vec::with_capacity(dim * spec.samples);
        let mut weights = Vec::with_capacity(spec.samples);
        for i in 0..base {
            let u = (i as f64 + rng.random::<f64>()) / base as f64;
            let s = s_lo + u * (s_hi - s_lo);
            let r = s.exp_m1().sqrt();
            let mut dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut dir {
                *x /= norm;
            }
            // d^D q = S_{D-1} r^{D-2} (1+r²)/2 ds.
            let w = (s_hi - s_lo) / base as f64 * jac * r.powi(dim as i32 - 2) * (1.0 + r * r) / 2.0;
            if spec.antithetic {
                points.extend(dir.iter().map(|x| r * x));
                points.extend(dir.iter().map(|x| -r * x));
                weights.push(w / 2.0);
                weights.push(w / 2.0);
            } else {
                points.extend(dir.iter().map(|x| r * x));
                weights.push(w);
            }
        }
        Ok(NodeSet { dim, points, weights, antithetic: spec.antithetic })
    }

    /// Nodes on the cutoff ball `|q| ≤ Λ`.
    pub fn ball(dim: usize, cutoff: f64, spec: &QuadratureSpec) -> Result<Self> {
        Self::shell(dim, 0.0, cutoff, spec, 0)
    }
}

/// Value with a Monte Carlo standard error (one-loop integrals only).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub sigma: Option<f64>,
}

/// An integrand prepared for fast evaluation at fixed external momenta.
#[derive(Clone, Debug)]
pub struct CompiledIntegrand {
    pub loops: usize,
    dim: usize,
    /// Loop coefficients and the fixed external offset of each distinct momentum.
    moms: Vec<(Vec<(usize, f64)>, Vec<f64>)>,
    terms: Vec<(f64, Vec<(usize, i32)>, Vec<(usize, usize)>)>,
}

fn to_f64(q: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

impl CompiledIntegrand {
    /// `externals[j]` is the vector `p_{j+1}` in `R^dim`.
    pub fn new(i: &Integrand, externals: &[Vec<f64>], dim: usize) -> Result<Self> {
        if externals.len() < i.externals && i.depends_on_externals() {
            return Err(Error::InvalidArgument(format!(
                "integrand needs {} external momenta, {} given",
                i.externals,
                externals.len()
            )));
        }
        if externals.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidArgument(format!("external momenta must have {dim} components")));
        }
        let list = i.momenta();
        let moms = list
            .iter()
            .map(|m| {
                let loops = m.loops.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c as f64)).collect();
                let mut off = vec![0.0; dim];
                for (j, &c) in m.ext.iter().enumerate() {
                    if c != 0 {
                        for (o, x) in off.iter_mut().zip(&externals[j]) {
                            *o += c as f64 * x;
                        }
                    }
                }
                (loops, off)
            })
            .collect();
        let idx = |m: &crate::bphz::Momentum| list.binary_search(m).expect("listed");
        let terms = i
            .terms
            .iter()
            .map(|t| {
                let mut props = Vec::new();
                let mut dots = Vec::new();
                for fac in &t.factors {
                    match fac {
                        Factor::Prop(l, n) => props.push((idx(l), *n as i32)),
                        Factor::Dot(a, b) => dots.push((idx(a), idx(b))),
                    }
                }
                (to_f64(&t.coeff), props, dots)
            })
            .collect();
        Ok(CompiledIntegrand { loops: i.loops, dim, moms, terms })
    }

    /// Value at loop momenta `qs` (each of length `dim`), using `scratch` for momentum vectors.
    pub fn eval_with<F: Float>(&self, qs: &[&[F]], scratch: &mut Vec<F>) -> F {
        let d = self.dim;
        scratch.clear();
        scratch.resize(self.moms.len() * (d + 1), F::zero());
        for (k, (lc, off)) in self.moms.iter().enumerate() {
            let v = &mut scratch[k * (d + 1)..k * (d + 1) + d];
            for (x, o) in v.iter_mut().zip(off) {
                *x = F::from(*o).expect("finite");
            }
            for &(l, c) in lc {
                let c = F::from(c).expect("finite");
                for (x, q) in v.iter_mut().zip(qs[l]) {
                    *x = *x + c * *q;
                }
            }
            let sq = v.iter().fold(F::zero(), |acc, x| acc + *x * *x);
            scratch[k * (d + 1) + d] = F::one() / (sq + F::one());
        }
        let mut total = F::zero();
        for (c, props, dots) in &self.terms {
            let mut t = F::from(*c).expect("finite");
            for &(k, n) in props {
                t = t * scratch[k * (d + 1) + d].powi(n);
            }
            for &(a, b) in dots {
                let va = &scratch[a * (d + 1)..a * (d + 1) + d];
                let vb = &scratch[b * (d + 1)..b * (d + 1) + d];
                t = t * va.iter().zip(vb).fold(F::zero(), |acc, (x, y)| acc + *x * *y);
            }
            total = total + t;
        }
        total
    }

    pub fn eval<F: Float>(&self, qs: &[&[F]]) -> F {
        self.eval_with(qs, &mut Vec::new())
    }
}

fn non_finite(v: f64, at: &[usize]) -> Error {
    Error::Computation(format!("quadrature produced a non-finite value {v} at node tuple {at:?}"))
}

/// Product-rule integral over `nodes^L`. Deterministic: per-row sums are
/// computed in parallel and added in index order.
pub fn integrate(ci: &CompiledIntegrand, nodes: &NodeSet) -> Result<Estimate> {
    let l = ci.loops;
    let n = nodes.len();
    if l == 0 {
        let v = ci.eval::<f64>(&[]);
        return if v.is_finite() { Ok(Estimate { value: v, sigma: None }) } else { Err(non_finite(v, &[])) };
    }
    if (n as f64).powi(l as i32) > MAX_PRODUCT_NODES {
        return Err(Error::BoundExceeded(format!("{n}^{l} quadrature nodes is too many")));
    }
    if l == 1 {
        let vals: Vec<f64> = (0..n)
            .into_par_iter()
            .map_init(Vec::new, |scratch, i| nodes.weights[i] * ci.eval_with(&[nodes.point(i)], scratch))
            .collect();
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(non_finite(vals[i], &[i]));
        }
        let value: f64 = vals.iter().sum();
        // Standard error from independent units (mirror pairs when antithetic).
        let units: Vec<f64> =
            if nodes.antithetic { vals.chunks(2).map(|c| c.iter().sum()).collect() } else { vals.clone() };
        let m = units.len() as f64;
        let mean = value / m;
        let var = units.iter().map(|u| (u - mean) * (u - mean)).sum::<f64>() / (m - 1.0).max(1.0);
        return Ok(Estimate { value, sigma: Some((var * m).sqrt()) });
    }
    let rows: Vec<std::result::Result<f64, (f64, Vec<usize>)>> = (0..n)
        .into_par_iter()
        .map_init(Vec::new, |scratch, i0| {
            let mut idx = vec![0usize; l];
            idx[0] = i0;
            let mut sum = 0.0;
            loop {
                let qs: Vec<&[f64]> = idx.iter().map(|&k| nodes.point(k)).collect();
                let w: f64 = idx.iter().map(|&k| nodes.weights[k]).product();
                let v = ci.eval_with(&qs, scratch);
                if !v.is_finite() {
                    return Err((v, idx));
                }
                sum += w * v;
                // Odometer over positions 1..l.
                let mut pos = l - 1;
                loop {
                    if pos == 0 {
                        return Ok(sum);
                    }
                    idx[pos] += 1;
                    if idx[pos] < n {
                        break;
                    }
                    idx[pos] = 0;
                    pos -= 1;
                }
            }
        })
        .collect();
    let mut value = 0.0;
    for r in rows {
        match r {
            Ok(v) => value += v,
            Err((v, at)) => return Err(non_finite(v, &at)),
        }
    }
    Ok(Estimate { value, sigma: None })
}

/// Reads `RENORM_THREADS` and configures the global thread pool once.
pub fn configure_threads_from_env() {
    if let Some(n) = std::env::var("RENORM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((sphere_area(3) - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!((sphere_area(4) - 2.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert!((sphere_area(6) - std::f64::consts::PI.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn ball_volume() {
        // ∫_{|q|≤R} d^4q/(2π)^4 = π²R⁴/2 / (2π)^4.
        let spec = QuadratureSpec::monte_carlo(20_000, 1);
        let nodes = NodeSet::ball(4, 2.0, &spec).unwrap();
        let one = CompiledIntegrand::new(&Integrand::one(1, 0), &[], 4).unwrap();
        let v = integrate(&one, &nodes).unwrap().value;
        let exact = std::f64::consts::PI.powi(2) * 16.0 / 2.0 / (2.0 * std::f64::consts::PI).powi(4);
        assert!((v - exact).abs() < 1e-3 * exact, "{v} vs {exact}");
    }
}
