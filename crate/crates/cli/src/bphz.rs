use clap::{Args, Subcommand};
use serde_json::json;

use renorm_core::bphz::rota_baxter::{rota_baxter_check, RotaBaxterModel};
use renorm_core::bphz::{
    graph_integrand, renormalization_ladder, standard_presentation, Bphz, ExternalMomenta, NumericBphz, QuadratureSpec,
    RegulatorConfig,
};
use renorm_core::graphs::io::parse_graph;
use renorm_core::graphs::FeynmanGraph;

use crate::output::{Failure, Output};

#[derive(Subcommand, Debug)]
pub enum BphzCmd {
    /// Integrands: bare I(Γ), prepared Ī(Γ) = I(Γ) + Σ_γ Π C(γ_i) I(Γ/γ), and renormalized Ī(Γ) − T^ω Ī(Γ).
    Integrand(GraphArgs),
    /// Counterterm C(Γ_(r)) = −(1/r!) ∂ʳ_p Ī(Γ)|_{p=0}, symbolic, and its value under a cutoff Λ.
    Counterterm(CountertermArgs),
    /// Cutoff ladder: bare A_Λ fitted to a + b ln Λ, renormalized Ar_Λ with Cauchy differences |Ar_{2Λ} − Ar_Λ|.
    Renormalize(RenormalizeArgs),
    /// Ar(Γ) = (A ⋆ C)(Γ) = A(Γ) + C(Γ) + Σ_γ A(Γ/γ) Π C(γ_i) on shared quadrature nodes.
    Astarc(NumericArgs),
    /// Rota–Baxter identity T[fg] + T[f]T[g] = T[T[f]g + fT[g]] on seeded random pairs.
    Rotabaxter(RotaBaxterArgs),
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Built-in name, encoding or JSON literal of a 1PI graph.
    #[arg(long)]
    graph: String,
    /// Space-time dimension, 4 or 6.
    #[arg(long = "D", default_value_t = 6)]
    dimension: i64,
}

#[derive(Args, Debug)]
pub struct CountertermArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Taylor label r (0 or 2); all labels r ≤ ω if omitted.
    #[arg(long)]
    r: Option<u8>,
    /// Evaluate under this cutoff (units of m).
    #[arg(long)]
    lambda: Option<f64>,
    /// Monte Carlo nodes per loop momentum.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct RenormalizeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Magnitude of each external momentum p_j = p e_j (units of m).
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Increasing cutoffs, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
    lambda_ladder: Vec<f64>,
    /// Monte Carlo nodes per shell (one loop) or per loop momentum.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct NumericArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 20.0)]
    lambda: f64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct RotaBaxterArgs {
    /// eval-at-zero, pole-part or taylor-N.
    #[arg(long, default_value = "pole-part")]
    model: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// Node counts that keep the product rule affordable.
fn default_samples(g: &FeynmanGraph) -> usize {
    match g.loops() {
        0 | 1 => 200_000,
        2 => 1_000,
        _ => 60,
    }
}

fn load(a: &GraphArgs) -> Result<(FeynmanGraph, Bphz), Failure> {
    let g = standard_presentation(&parse_graph(&a.graph)?)?;
    Ok((g, Bphz::new(a.dimension)?))
}

fn momenta(g: &FeynmanGraph, p: f64, d: i64) -> Result<ExternalMomenta, Failure> {
    Ok(ExternalMomenta::along_axes(g.leg_count().saturating_sub(1), p, d as usize)?)
}

fn model(s: &str) -> Result<RotaBaxterModel, Failure> {
    match s {
        "eval-at-zero" => Ok(RotaBaxterModel::EvalAtZero),
        "pole-part" => Ok(RotaBaxterModel::PolePart),
        _ => s
            .strip_prefix("taylor-")
            .and_then(|n| n.parse().ok())
            .map(RotaBaxterModel::Taylor)
            .ok_or_else(|| Failure::validation(format!("unknown model {s}"))),
    }
}

pub fn run(cmd: &BphzCmd) -> Result<Output, Failure> {
    match cmd {
        BphzCmd::Integrand(a) => {
            let (g, b) = load(a)?;
            let bare = graph_integrand(&g)?;
            let prepared = b.prepared_integrand(&g)?;
            let renormalized = b.renormalized_integrand(&g)?;
            let omega = b.omega(&g)?;
            let text = format!(
                "omega = {omega}\nbare: {bare}\nprepared: {prepared}\nrenormalized: {renormalized}\n"
            );
            Ok(Output::new(
                text,
                json!({
                    "D": a.dimension,
                    "omega": omega,
                    "bare": bare.to_string(),
                    "prepared": prepared.to_string(),
                    "renormalized": renormalized.to_string(),
                }),
            ))
        }
        BphzCmd::Counterterm(a) => {
            let (g, b) = load(&a.graph)?;
            let labels = match a.r {
                Some(r) => vec![r],
                None => b.labels(&g)?,
            };
            let numeric = match a.lambda {
                Some(l) => Some(NumericBphz::new(RegulatorConfig::new(
                    a.graph.dimension,
                    l,
                    a.samples.unwrap_or_else(|| default_samples(&g)),
                    a.seed,
                ))?),
                None => None,
            };
            let mut text = String::new();
            let mut items = Vec::new();
            for r in labels {
                let c = b.counterterm_integrand(&g, r)?;
                let value = numeric.as_ref().map(|n| n.counterterm(&g, r)).transpose()?;
                text.push_str(&format!("C_{r}: {c}\n"));
                if let Some(v) = value {
                    text.push_str(&format!("C_{r}(Λ) = {v:.12e}\n"));
                }
                items.push(json!({ "r": r, "integrand": c.to_string(), "value": value }));
            }
            Ok(Output::new(text, json!({ "D": a.graph.dimension, "cutoff": a.lambda, "counterterms": items })))
        }
        BphzCmd::Renormalize(a) => {
            let (g, _) = load(&a.graph)?;
            let p = momenta(&g, a.p, a.graph.dimension)?;
            let spec = QuadratureSpec::monte_carlo(a.samples.unwrap_or_else(|| default_samples(&g)), a.seed);
            let rep = renormalization_ladder(&g, &p, a.graph.dimension, &a.lambda_ladder, &spec)?;
            let mut text = format!(
                "{} D={} L={}\nLambda  A  Ar\n",
                rep.graph, rep.dimension, rep.loops
            );
            for pt in &rep.points {
                text.push_str(&format!("{}  {:.9e}  {:.9e}\n", pt.cutoff, pt.bare, pt.renormalized));
            }
            text.push_str(&format!(
                "fit A = a + b ln Λ: b = {:.6e}, r² = {:.6}\n",
                rep.bare_fit.slope, rep.bare_fit.r2
            ));
            for c in &rep.cauchy {
                text.push_str(&format!("|Ar({}) − Ar({})| = {:.3e}\n", c.to, c.from, c.difference.abs()));
            }
            Ok(Output::new(text, serde_json::to_value(&rep).map_err(|e| Failure::computation(e.to_string()))?))
        }
        BphzCmd::Astarc(a) => {
            let (g, _) = load(&a.graph)?;
            let p = momenta(&g, a.p, a.graph.dimension)?;
            let samples = a.samples.unwrap_or_else(|| default_samples(&g).min(2_000));
            let nb = NumericBphz::new(RegulatorConfig::new(a.graph.dimension, a.lambda, samples, a.seed))?;
            let rep = nb.check_ar_equals_a_star_c(&g, &p)?;
            let mut text = format!(
                "Ar = {:.12e}\nA⋆C = {:.12e}\nrelative deviation = {:.3e}\n",
                rep.renormalized, rep.convolution, rep.relative_deviation
            );
            for (name, v) in &rep.terms {
                text.push_str(&format!("  {name} = {v:.12e}\n"));
            }
            Ok(Output::new(text, serde_json::to_value(&rep).map_err(|e| Failure::computation(e.to_string()))?))
        }
        BphzCmd::Rotabaxter(a) => {
            let rep = rota_baxter_check(model(&a.model)?, a.trials, a.seed);
            let mut text = format!("{}: {}/{} pairs satisfy the identity\n", rep.model, rep.passed, rep.trials);
            for c in &rep.counterexamples {
                text.push_str(&format!("  counterexample {c}\n"));
            }
            Ok(Output::new(text, serde_json::to_value(&rep).map_err(|e| Failure::computation(e.to_string()))?))
        }
    }
}
