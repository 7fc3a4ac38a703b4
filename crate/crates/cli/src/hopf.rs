use std::collections::BTreeMap;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::json;

use renorm_core::hopf::instances::{FaaDiBruno, Gl2, MatrixGen, Sl2, SymmetricFunctions, Unshuffle, X};
use renorm_core::hopf::{
    antipode, char_inverse, character_series, check_hopf_axioms, convolve, coproduct, AxiomReport, Character, Element,
    Generator, HopfAlgebra, Monomial, SeriesRealization,
};
use renorm_core::ring::parse_rational;
use renorm_core::{Error, Poly, Rational};

use crate::output::{Failure, Output};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    /// Polynomials with primitive generators: Δx = x⊗1 + 1⊗x.
    Unshuffle,
    /// Symmetric functions: Δx_n = Σ_{p+q=n} x_p ⊗ x_q, x_0 = 1.
    Symmetric,
    /// Faà di Bruno: Δx_n = Σ_m x_m ⊗ [z^{n−m}] (Σ_p x_p z^p)^{m+1}, x_0 = 1.
    Fdb,
    /// Coordinate functions of SL(2): Δm_ij = Σ_k m_ik ⊗ m_kj, ad − bc = 1.
    Sl2,
    /// Coordinate functions of GL(2) with t = 1/det.
    Gl2,
}

#[derive(Subcommand, Debug)]
pub enum HopfCmd {
    /// Coproduct Δ of an element, extended multiplicatively.
    Coproduct(ElementArgs),
    /// Antipode by the recursion S(x) = −x − Σ' S(x') x'' (closed forms for the matrix instances).
    Antipode(ElementArgs),
    /// Coassociativity, counit, m(S⊗id)Δ = m(id⊗S)Δ = ηε and S∘S = id on all generators up to a grade.
    Axioms(AxiomArgs),
    /// Convolution α⋆β = m(α⊗β)Δ of characters and its realization in the series group
    /// (product of series for symmetric functions, composition for Faà di Bruno).
    Convolve(ConvolveArgs),
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    #[arg(long, value_enum)]
    instance: Instance,
    /// Polynomial in the generators, e.g. "x1*x2 - 2*x3" or "a*d - b*c".
    #[arg(long)]
    element: String,
    /// Number of variables for the unshuffle instance.
    #[arg(long, default_value_t = 2)]
    vars: usize,
}

#[derive(Args, Debug)]
pub struct AxiomArgs {
    #[arg(long, value_enum)]
    instance: Instance,
    /// Highest generator grade checked.
    #[arg(long, default_value_t = 6)]
    max_grade: usize,
    #[arg(long, default_value_t = 2)]
    vars: usize,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    /// `symmetric` or `fdb`.
    #[arg(long, value_enum)]
    instance: Instance,
    /// Values α(x_1), α(x_2), ... separated by commas.
    #[arg(long)]
    a: String,
    /// Values β(x_1), β(x_2), ... separated by commas.
    #[arg(long)]
    b: String,
}

fn parse_x(name: &str) -> renorm_core::Result<X> {
    name.strip_prefix('x')
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .map(X)
        .ok_or_else(|| Error::UnknownGenerator(name.into()))
}

/// Reads a polynomial whose variables are generator names.
fn parse_element<G: Generator>(src: &str, gen: impl Fn(&str) -> renorm_core::Result<G>) -> Result<Element<G>, Failure> {
    let p = Poly::parse(src)?;
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let mut factors = Vec::new();
        for (name, e) in m.factors() {
            let g = gen(name)?;
            factors.extend(std::iter::repeat_n(g, *e as usize));
        }
        terms.push((Monomial::from_factors(factors), c.clone()));
    }
    Ok(Element::from_terms(terms))
}

fn element_action<H: HopfAlgebra>(
    h: &H,
    cmd: &HopfCmd,
    src: &str,
    gen: impl Fn(&str) -> renorm_core::Result<H::Gen>,
) -> Result<Output, Failure> {
    let x = parse_element(src, gen)?;
    for (m, _) in x.terms() {
        for g in m.factors() {
            h.check_generator(g)?;
        }
    }
    Ok(match cmd {
        HopfCmd::Coproduct(_) => {
            let t = coproduct(h, &x)?;
            Output::new(t.to_string(), json!({ "instance": h.name(), "element": x.to_string(), "coproduct": t.to_json() }))
        }
        _ => {
            let s = antipode(h, &x)?;
            Output::new(s.to_string(), json!({ "instance": h.name(), "element": x.to_string(), "antipode": s.to_json() }))
        }
    })
}

fn axiom_output(r: AxiomReport) -> Output {
    let mut text = format!(
        "{}: {} checks, {}\n",
        r.instance,
        r.checks.len(),
        if r.all_passed() { "all passed" } else { "FAILURES" }
    );
    for c in r.failures() {
        text.push_str(&format!("  {} at {}: {}\n", c.axiom, c.generator, c.detail.clone().unwrap_or_default()));
    }
    Output::new(text, r.to_json())
}

fn values(src: &str) -> Result<Vec<Rational>, Failure> {
    src.split(',').map(|s| parse_rational(s.trim()).map_err(Failure::from)).collect()
}

fn convolve_in<H: SeriesRealization<Gen = X>>(h: &H, a: &[Rational], b: &[Rational]) -> Result<Output, Failure> {
    if a.len() != b.len() {
        return Err(Failure::validation(format!("{} values for α but {} for β", a.len(), b.len())));
    }
    let character = |v: &[Rational]| {
        Character::new(h.name(), v.iter().enumerate().map(|(i, q)| (X(i + 1), q.clone())).collect::<BTreeMap<_, _>>())
    };
    let (ca, cb) = (character(a), character(b));
    let conv = convolve(h, &ca, &cb)?;
    let inv = char_inverse(h, &ca)?;
    let n = a.len();
    let series = character_series(h, &conv, n)?;
    let list = |c: &Character<X, Rational>| c.values.iter().map(|(g, q)| format!("{g} = {q}")).collect::<Vec<_>>();
    let text = format!(
        "α⋆β: {}\nseries: {}\nα⁻¹: {}\n",
        list(&conv).join(", "),
        series,
        list(&inv).join(", ")
    );
    let json = json!({
        "instance": h.name(),
        "convolution": conv.values.iter().map(|(g, q)| (g.to_string(), q.to_string())).collect::<BTreeMap<_, _>>(),
        "series": series.to_json(),
        "inverse_of_a": inv.values.iter().map(|(g, q)| (g.to_string(), q.to_string())).collect::<BTreeMap<_, _>>(),
    });
    Ok(Output::new(text, json))
}

pub fn run(cmd: &HopfCmd) -> Result<Output, Failure> {
    match cmd {
        HopfCmd::Coproduct(a) | HopfCmd::Antipode(a) => match a.instance {
            Instance::Unshuffle => element_action(&Unshuffle { vars: a.vars }, cmd, &a.element, parse_x),
            Instance::Symmetric => element_action(&SymmetricFunctions, cmd, &a.element, parse_x),
            Instance::Fdb => element_action(&FaaDiBruno, cmd, &a.element, parse_x),
            Instance::Sl2 => element_action(&Sl2, cmd, &a.element, MatrixGen::from_str),
            Instance::Gl2 => element_action(&Gl2, cmd, &a.element, MatrixGen::from_str),
        },
        HopfCmd::Axioms(a) => Ok(axiom_output(match a.instance {
            Instance::Unshuffle => check_hopf_axioms(&Unshuffle { vars: a.vars }, a.max_grade),
            Instance::Symmetric => check_hopf_axioms(&SymmetricFunctions, a.max_grade),
            Instance::Fdb => check_hopf_axioms(&FaaDiBruno, a.max_grade),
            Instance::Sl2 => check_hopf_axioms(&Sl2, a.max_grade),
            Instance::Gl2 => check_hopf_axioms(&Gl2, a.max_grade),
        })),
        HopfCmd::Convolve(c) => {
            let (a, b) = (values(&c.a)?, values(&c.b)?);
            match c.instance {
                Instance::Symmetric => convolve_in(&SymmetricFunctions, &a, &b),
                Instance::Fdb => convolve_in(&FaaDiBruno, &a, &b),
                _ => Err(Failure::validation("convolve supports the symmetric and fdb instances")),
            }
        }
    }
}
