use clap::{Args, Subcommand};
use serde_json::json;

use renorm_core::graphs::io::{parse_graph, to_dot, to_json};
use renorm_core::graphs::{canonical_form, generate_graphs, sym_factor, GenSpec, GraphClass, VertexKind};

use crate::output::{Failure, Output};

#[derive(Subcommand, Debug)]
pub enum GraphsCmd {
    /// Isomorphism classes of φ³ graphs with k external points and at most V vertices,
    /// each with its symmetry factor Sym = |Aut|.
    Enumerate(EnumerateArgs),
    /// Counting data E, I, V, L = I − V + 1 and superficial degree ω = D·L − 2I.
    Stats(StatsArgs),
    /// Symmetry factor Sym(Γ) = |Aut(Γ)|, automorphisms fixing each external point.
    Sym(SymArgs),
    /// Graphviz rendering.
    Dot(GraphArg),
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Number of external points.
    #[arg(long)]
    k: usize,
    /// Largest number of trivalent vertices.
    #[arg(long)]
    max_vertices: usize,
    /// `trees`, `connected` or `onepi`.
    #[arg(long, default_value = "connected")]
    class: String,
    /// Allow source leaves J.
    #[arg(long)]
    sources: bool,
    /// Treat the external points as indistinguishable.
    #[arg(long)]
    unlabeled: bool,
    #[arg(long)]
    max_loops: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GraphArg {
    /// Built-in name (oneloop-se, triangle, nested2loop, threeloop-b, ...), encoding "V:..|E:..", or JSON.
    #[arg(long)]
    graph: String,
}

#[derive(Args, Debug)]
pub struct SymArgs {
    #[arg(long)]
    graph: String,
    /// Let automorphisms permute the external points.
    #[arg(long)]
    unlabeled: bool,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    graph: String,
    /// Space-time dimension D.
    #[arg(long = "D", default_value_t = 6)]
    dimension: i64,
}

pub fn run(cmd: &GraphsCmd) -> Result<Output, Failure> {
    match cmd {
        GraphsCmd::Enumerate(a) => {
            let class: GraphClass = a.class.parse()?;
            let spec = GenSpec {
                labeled: !a.unlabeled,
                sources: a.sources,
                max_loops: a.max_loops,
                ..GenSpec::new(a.k, a.max_vertices, class)
            };
            let graphs = generate_graphs(&spec)?;
            let mut text = String::new();
            let mut items = Vec::new();
            let mut dot = String::new();
            for g in &graphs {
                let enc = canonical_form(g).encoding;
                let sym = sym_factor(g);
                text.push_str(&format!("V={} L={} Sym={} {}\n", g.internal_count(), g.loops(), sym, enc));
                items.push(json!({
                    "encoding": enc,
                    "vertices": g.internal_count(),
                    "loops": g.loops(),
                    "sym": sym.to_string(),
                }));
                dot.push_str(&to_dot(g));
            }
            text.push_str(&format!("{} classes\n", graphs.len()));
            Ok(Output::new(text, json!({ "count": graphs.len(), "graphs": items })).with_dot(dot))
        }
        GraphsCmd::Stats(a) => {
            let g = parse_graph(&a.graph)?;
            let s = g.stats(a.dimension)?;
            let text = format!("E={} I={} V={} L={} omega={} (D={})", s.e, s.i, s.v, s.l, s.omega, a.dimension);
            Ok(Output::new(
                text,
                json!({
                    "encoding": canonical_form(&g).encoding,
                    "D": a.dimension, "E": s.e, "I": s.i, "V": s.v, "L": s.l, "omega": s.omega,
                }),
            ))
        }
        GraphsCmd::Sym(a) => {
            let g = parse_graph(&a.graph)?;
            let labeled = g.kinds().iter().any(|k| matches!(k, VertexKind::External(Some(_))));
            let g = match (a.unlabeled, labeled) {
                (true, _) => g.unlabeled(),
                (false, false) => g.with_labeled_externals(),
                (false, true) => g,
            };
            let sym = sym_factor(&g);
            Ok(Output::new(sym.to_string(), json!({ "encoding": canonical_form(&g).encoding, "sym": sym.to_string() })))
        }
        GraphsCmd::Dot(a) => {
            let g = parse_graph(&a.graph)?;
            let dot = to_dot(&g);
            Ok(Output::new(dot.clone(), to_json(&g)).with_dot(dot))
        }
    }
}
