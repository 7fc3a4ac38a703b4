//! Term lists for tree solutions, connected Green's functions and the
//! connected-to-full partition expansion.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graphs::{canonical_form, generate_graphs, sym_factor, FeynmanGraph, GenSpec, GraphClass, VertexKind};
use crate::ring::{int, Monomial, Poly, Rational};

/// Largest λ order accepted by the expansions.
pub const MAX_EXPANSION_ORDER: usize = 6;

/// Whether the source `J` is switched on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sources {
    J0,
    Jext,
}

impl std::str::FromStr for Sources {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J0" | "j0" | "0" => Ok(Sources::J0),
            "Jext" | "jext" | "J" => Ok(Sources::Jext),
            _ => Err(Error::InvalidArgument(format!("unknown source setting {s}"))),
        }
    }
}

/// One graph with coefficient `ħ^L λ^V / Sym`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTerm {
    pub graph: FeynmanGraph,
    pub encoding: String,
    pub loops: usize,
    pub vertices: usize,
    pub sources: usize,
    pub sym: Rational,
    pub coefficient: Poly,
}

impl ExpansionTerm {
    pub fn new(graph: FeynmanGraph) -> Self {
        let loops = graph.loops();
        let vertices = graph.internal_count();
        let sym = sym_factor(&graph);
        let mut m = Monomial::one();
        for _ in 0..loops {
            m = m.mul(&Monomial::var("hbar"));
        }
        for _ in 0..vertices {
            m = m.mul(&Monomial::var("lambda"));
        }
        let coefficient = Poly::from_terms([(m, int(1) / sym.clone())]);
        ExpansionTerm {
            encoding: canonical_form(&graph).encoding,
            sources: graph.source_count(),
            graph,
            loops,
            vertices,
            sym,
            coefficient,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "encoding": self.encoding,
            "order": self.vertices,
            "loops": self.loops,
            "sources": self.sources,
            "sym": self.sym.to_string(),
            "coefficient": self.coefficient.to_string(),
        })
    }
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} × {}", self.coefficient, self.encoding)
    }
}

fn check_order(max_order: usize) -> Result<()> {
    if max_order > MAX_EXPANSION_ORDER {
        return Err(Error::BoundExceeded(format!("order {max_order} exceeds {MAX_EXPANSION_ORDER}")));
    }
    Ok(())
}

fn sorted(graphs: Vec<FeynmanGraph>) -> Vec<ExpansionTerm> {
    let mut terms: Vec<ExpansionTerm> = graphs.into_iter().map(ExpansionTerm::new).collect();
    terms.sort_by(|a, b| (a.vertices, &a.encoding).cmp(&(b.vertices, &b.encoding)));
    terms
}

/// Rooted trees solving the classical field equation, with `λ^V / Sym`.
pub fn el_tree_expansion(max_order: usize) -> Result<Vec<ExpansionTerm>> {
    check_order(max_order)?;
    let mut spec = GenSpec::new(1, max_order, GraphClass::Trees);
    spec.sources = true;
    Ok(sorted(generate_graphs(&spec)?))
}

/// Connected `k`-point graphs through `λ^{max_order}`, with `ħ^L λ^V / Sym`.
pub fn ds_expansion(k: usize, sources: Sources, max_order: usize) -> Result<Vec<ExpansionTerm>> {
    check_order(max_order)?;
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("k must be 1, 2 or 3, got {k}")));
    }
    let mut spec = GenSpec::new(k, max_order, GraphClass::Connected);
    spec.sources = sources == Sources::Jext;
    Ok(sorted(generate_graphs(&spec)?))
}

/// `"coeff × encoding"` per line.
pub fn render_text(terms: &[ExpansionTerm]) -> String {
    terms.iter().map(|t| format!("{t}\n")).collect()
}

pub fn render_json(terms: &[ExpansionTerm]) -> Value {
    Value::Array(terms.iter().map(ExpansionTerm::to_json).collect())
}

/// A set partition of `1..=k` weighted by `ħ^{k − #blocks}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTerm {
    pub blocks: Vec<Vec<usize>>,
    pub hbar_power: usize,
}

impl PartitionTerm {
    pub fn weight(&self) -> Poly {
        let mut m = Monomial::one();
        for _ in 0..self.hbar_power {
            m = m.mul(&Monomial::var("hbar"));
        }
        Poly::from_terms([(m, int(1))])
    }

    pub fn to_json(&self) -> Value {
        json!({ "blocks": self.blocks, "hbar_power": self.hbar_power, "weight": self.weight().to_string() })
    }
}

impl fmt::Display for PartitionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("G({})", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{} × {}", self.weight(), blocks.join(" "))
    }
}

/// Full Green's function of `k` points as a sum over set partitions of connected ones.
pub fn connected_to_full(k: usize) -> Result<Vec<PartitionTerm>> {
    if k == 0 || k > 6 {
        return Err(Error::InvalidArgument(format!("k must lie in 1..=6, got {k}")));
    }
    // Restricted growth strings enumerate each partition once.
    fn rec(i: usize, k: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<PartitionTerm>) {
        if i > k {
            out.push(PartitionTerm { blocks: blocks.clone(), hbar_power: k - blocks.len() });
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, k, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(1, k, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Position-space value of a tree: integrated points, propagators and sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeAmplitude {
    pub integrated: Vec<String>,
    pub propagators: Vec<(String, String)>,
    pub sources: Vec<String>,
}

impl fmt::Display for TreeAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.integrated.is_empty() {
            let measure: Vec<String> = self.integrated.iter().map(|y| format!("d^D {y}")).collect();
            write!(f, "∫ {} ", measure.join(" "))?;
        }
        let mut parts: Vec<String> = self.propagators.iter().map(|(a, b)| format!("G0({a}-{b})")).collect();
        parts.extend(self.sources.iter().map(|y| format!("J({y})")));
        write!(f, "{}", parts.join(" "))
    }
}

/// Labels the root `x` and the other vertices `y1, y2, …` breadth-first.
pub fn tree_amplitude(t: &FeynmanGraph) -> Result<TreeAmplitude> {
    let roots: Vec<usize> = (0..t.vertex_count()).filter(|&v| matches!(t.kind(v), VertexKind::External(_))).collect();
    if roots.len() != 1 || t.edge_count() == 0 || !t.is_connected() || !t.is_tree() {
        return Err(Error::InvalidGraph("expected a rooted tree with one external point and at least one edge".into()));
    }
    if t.cross_count() > 0 {
        return Err(Error::InvalidGraph("trees carry no crossed vertices".into()));
    }
    let adj = t.incidence();
    let mut names = vec![String::new(); t.vertex_count()];
    names[roots[0]] = "x".into();
    let mut queue = vec![roots[0]];
    let mut amp = TreeAmplitude { integrated: Vec::new(), propagators: Vec::new(), sources: Vec::new() };
    let mut i = 0;
    while i < queue.len() {
        let v = queue[i];
        for &e in &adj[v] {
            let [a, b] = t.edges()[e];
            let w = if a == v { b } else { a };
            if !names[w].is_empty() {
                continue;
            }
            names[w] = format!("y{}", amp.integrated.len() + 1);
            amp.integrated.push(names[w].clone());
            amp.propagators.push((names[v].clone(), names[w].clone()));
            if t.kind(w) == VertexKind::Source {
                amp.sources.push(names[w].clone());
            }
            queue.push(w);
        }
        i += 1;
    }
    Ok(amp)
}
