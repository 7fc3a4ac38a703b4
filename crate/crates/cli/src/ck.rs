use clap::{Args, Subcommand, ValueEnum};
use serde_json::json;

use renorm_core::ck::{
    bare_coupling_series, bare_mass_ratio_series, hd_to_hck, project_pi, z_factor_series, CkGenerator, CkHopf,
};
use renorm_core::hopf::{antipode, coproduct, Element};

use crate::output::{Failure, Output};

#[derive(Subcommand, Debug)]
pub enum CkCmd {
    /// Δ(Γ) = Γ⊗1 + 1⊗Γ + Σ_{γ} Γ/γ ⊗ γ over families γ of disjoint divergent 1PI subgraphs.
    Coproduct(GeneratorArg),
    /// S(Γ) = −Γ − Σ_{γ} S(γ) Γ/γ, the counterterm recursion without evaluation.
    Antipode(GeneratorArg),
    /// Z1 = 1 + Σ_{E=3} Γ/Sym(Γ) λ^{2L}, Z3 = 1 − Σ_{E=2} Γ(2)/Sym(Γ) λ^{2L}, Zm = 1 − Σ_{E=2} Γ(0)/Sym(Γ) λ^{2L}.
    Zfactors(LoopArg),
    /// Image of the Faà di Bruno generator x_n: the λ^{n+1} coefficient of λ_b = λ Z1 Z3^{−3/2}.
    Inclusion(InclusionArgs),
    /// Projection π onto ordinary series: sum of graph coefficients at each power of λ.
    Project(ProjectArgs),
}

#[derive(Args, Debug)]
pub struct GeneratorArg {
    /// 1PI graph (name, encoding or JSON), with "(0)" or "(2)" appended for two-point labels.
    #[arg(long)]
    graph: String,
}

#[derive(Args, Debug)]
pub struct LoopArg {
    #[arg(long, default_value_t = 1)]
    max_loops: usize,
}

#[derive(Args, Debug)]
pub struct InclusionArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    max_loops: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Z1,
    Z3,
    Zm,
    /// λ_b = λ Z1 Z3^{−3/2}.
    LambdaB,
    /// m_b/m = Zm^{1/2} Z3^{−1/2}.
    MassRatio,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[arg(long, value_enum)]
    series: Which,
    #[arg(long, default_value_t = 1)]
    max_loops: usize,
}

fn element_output(key: &str, g: &CkGenerator, e: &Element<CkGenerator>) -> Output {
    Output::new(e.to_string(), json!({ "generator": g.to_string(), key: e.to_json() }))
}

pub fn run(cmd: &CkCmd) -> Result<Output, Failure> {
    let h = CkHopf::new();
    match cmd {
        CkCmd::Coproduct(a) => {
            let g = CkGenerator::parse(&a.graph)?;
            let t = coproduct(&h, &Element::gen(g.clone()))?;
            Ok(Output::new(t.to_string(), json!({ "generator": g.to_string(), "coproduct": t.to_json() })))
        }
        CkCmd::Antipode(a) => {
            let g = CkGenerator::parse(&a.graph)?;
            Ok(element_output("antipode", &g, &antipode(&h, &Element::gen(g.clone()))?))
        }
        CkCmd::Zfactors(a) => {
            let z = z_factor_series(a.max_loops)?;
            let text = format!("Z1 = {}\nZ3 = {}\nZm = {}\n", z.z1, z.z3, z.zm);
            Ok(Output::new(text, json!({ "z1": z.z1.to_json(), "z3": z.z3.to_json(), "zm": z.zm.to_json() })))
        }
        CkCmd::Inclusion(a) => {
            let e = hd_to_hck(a.n, a.max_loops)?;
            Ok(Output::new(e.to_string(), json!({ "n": a.n, "image": e.to_json() })))
        }
        CkCmd::Project(a) => {
            let z = z_factor_series(a.max_loops)?;
            let s = match a.series {
                Which::Z1 => z.z1,
                Which::Z3 => z.z3,
                Which::Zm => z.zm,
                Which::LambdaB => bare_coupling_series(&z)?,
                Which::MassRatio => bare_mass_ratio_series(&z)?,
            };
            let pi = project_pi(&s.formal())?;
            let mut text = String::new();
            for (n, c) in pi.coeffs().iter().enumerate() {
                text.push_str(&format!("[{n}] {c}\n"));
            }
            Ok(Output::new(
                text,
                json!({
                    "kind": pi.kind().tag(),
                    "graph_series": s.to_json(),
                    "coefficients": pi.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                }),
            ))
        }
    }
}
