use clap::{Args, Subcommand};
use serde_json::{json, Value};

use renorm_core::greens::{
    connected_to_full, ds_expansion, el_tree_expansion, render_json, render_text, tree_amplitude, Sources,
};

use crate::output::{Failure, Output};

#[derive(Subcommand, Debug)]
pub enum GreensCmd {
    /// Tree solution of the field equation φ = G0·J + (λ/2) G0·φ²: rooted trees with λ^V/Sym and their integrals.
    Trees(OrderArg),
    /// Connected k-point functions from the Dyson–Schwinger equation: Σ ħ^L λ^V/Sym over connected graphs.
    Ds(DsArgs),
    /// Full k-point function as a sum over set partitions of connected ones, weight ħ^{k − #blocks}.
    Partitions(PartitionArgs),
}

#[derive(Args, Debug)]
pub struct OrderArg {
    /// Highest power of λ.
    #[arg(long)]
    order: usize,
}

#[derive(Args, Debug)]
pub struct DsArgs {
    /// Number of points, 1 to 3.
    #[arg(long)]
    k: usize,
    /// J0 (sources off) or Jext (sources on).
    #[arg(long, default_value = "J0")]
    sources: String,
    #[arg(long)]
    order: usize,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long)]
    k: usize,
}

pub fn run(cmd: &GreensCmd) -> Result<Output, Failure> {
    match cmd {
        GreensCmd::Trees(a) => {
            let terms = el_tree_expansion(a.order)?;
            let mut text = String::new();
            let mut items = Vec::new();
            for (t, mut j) in terms.iter().zip(json_items(render_json(&terms))) {
                let amp = tree_amplitude(&t.graph).map(|a| a.to_string()).ok();
                text.push_str(&format!("{t}"));
                if let Some(a) = &amp {
                    text.push_str(&format!("    {a}"));
                }
                text.push('\n');
                j["amplitude"] = json!(amp);
                items.push(j);
            }
            Ok(Output::new(text, Value::Array(items)))
        }
        GreensCmd::Ds(a) => {
            let sources: Sources = a.sources.parse()?;
            let terms = ds_expansion(a.k, sources, a.order)?;
            Ok(Output::new(render_text(&terms), render_json(&terms)))
        }
        GreensCmd::Partitions(a) => {
            let parts = connected_to_full(a.k)?;
            let text: String = parts.iter().map(|p| format!("{p}\n")).collect();
            Ok(Output::new(text, Value::Array(parts.iter().map(|p| p.to_json()).collect())))
        }
    }
}

fn json_items(v: Value) -> Vec<Value> {
    match v {
        Value::Array(a) => a,
        other => vec![other],
    }
}
