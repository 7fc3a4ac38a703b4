use clap::{Args, Subcommand};
use serde_json::json;

use renorm_core::series::{diff_compose, diff_inverse, dyson_transform, series_mul, series_recip};
use renorm_core::{Poly, PolySeries, SeriesKind};

use crate::output::{Failure, Output};

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    /// Cauchy product of invertible series: (fg)_n = Σ_{p+q=n} f_p g_q.
    Mul(Pair),
    /// Reciprocal 1/f by recursion: (1/f)_1 = −f_1, (1/f)_2 = f_1² − f_2, ...
    Recip(Single),
    /// Composition f∘g of diffeomorphisms z + Σ f_n z^{n+1}:
    /// (f∘g)_1 = f_1 + g_1, (f∘g)_2 = f_2 + 2f_1g_1 + g_2, (f∘g)_3 = f_3 + 2f_1g_2 + f_1g_1² + 3f_2g_1 + g_3.
    Compose(Pair),
    /// Compositional inverse of a diffeomorphism (Lagrange reversion): (f⁻¹)_1 = −f_1, (f⁻¹)_2 = 2f_1² − f_2.
    Invert(Single),
    /// Renormalized Green's function Z3^{−k/2} G(m_b, λ_b) with λ_b = λ Z1 Z3^{−3/2}
    /// and m_b² = m² Zm Z3^{−1}; G is a series in λ_b whose coefficients may use m_b.
    Dyson(Dyson),
}

#[derive(Args, Debug)]
pub struct Single {
    /// Polynomial in z, e.g. "1 + a*z + z^2".
    #[arg(long)]
    f: String,
    /// Highest power of z kept.
    #[arg(long)]
    order: usize,
}

#[derive(Args, Debug)]
pub struct Pair {
    /// Polynomial in z.
    #[arg(long)]
    f: String,
    /// Polynomial in z.
    #[arg(long)]
    g: String,
    /// Highest power of z kept.
    #[arg(long)]
    order: usize,
}

#[derive(Args, Debug)]
pub struct Dyson {
    /// Bare Green's function as a polynomial in `lb` (coefficients may contain m_b).
    #[arg(long)]
    g: String,
    /// Z1 as a polynomial in `lambda`.
    #[arg(long, default_value = "1")]
    z1: String,
    /// Z3 as a polynomial in `lambda`.
    #[arg(long, default_value = "1")]
    z3: String,
    /// Zm as a polynomial in `lambda`.
    #[arg(long, default_value = "1")]
    zm: String,
    /// Number of external points (power of Z3^{−1/2}).
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Highest power of λ kept.
    #[arg(long)]
    order: usize,
}

fn parse(src: &str, var: &str, kind: SeriesKind, order: usize) -> Result<PolySeries, Failure> {
    let internal = match kind {
        SeriesKind::Diffeomorphism => order
            .checked_sub(1)
            .ok_or_else(|| Failure::validation("a diffeomorphism needs order ≥ 1"))?,
        _ => order,
    };
    Ok(PolySeries::parse_in(src, var, kind, internal)?)
}

fn emit(s: &PolySeries) -> Output {
    Output::new(s.to_string(), serde_json::to_value(s.to_json()).unwrap_or_default())
}

pub fn run(cmd: &SeriesCmd) -> Result<Output, Failure> {
    use SeriesKind::{Diffeomorphism, Invertible, Plain};
    let out = match cmd {
        SeriesCmd::Mul(a) => series_mul(&parse(&a.f, "z", Invertible, a.order)?, &parse(&a.g, "z", Invertible, a.order)?)?,
        SeriesCmd::Recip(a) => series_recip(&parse(&a.f, "z", Invertible, a.order)?)?,
        SeriesCmd::Compose(a) => {
            diff_compose(&parse(&a.f, "z", Diffeomorphism, a.order)?, &parse(&a.g, "z", Diffeomorphism, a.order)?)?
        }
        SeriesCmd::Invert(a) => diff_inverse(&parse(&a.f, "z", Diffeomorphism, a.order)?)?,
        SeriesCmd::Dyson(a) => {
            let g = parse(&a.g, "lb", Plain, a.order)?;
            let z = |s: &str| parse(s, "lambda", Invertible, a.order);
            let r = dyson_transform(&g, &z(&a.z3)?, &z(&a.zm)?, &z(&a.z1)?, a.k, &Poly::symbol("m"))?;
            let terms: Vec<String> = r
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_empty())
                .map(|(n, c)| format!("({c})*lambda^{n}"))
                .collect();
            let text = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            return Ok(Output::new(text, json!({ "variable": "lambda", "series": r.to_json() })));
        }
    };
    Ok(emit(&out))
}

