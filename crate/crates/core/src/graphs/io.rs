//! Text, DOT and JSON forms of graphs.

use serde_json::{json, Value};

use super::{canonical_form, FeynmanGraph, VertexKind};
use crate::error::{Error, Result};

fn parse_kind(s: &str) -> Result<VertexKind> {
    let bad = || Error::Parse(format!("unknown vertex kind {s:?}"));
    Ok(match s {
        "i" => VertexKind::Internal,
        "s" => VertexKind::Source,
        "e" => VertexKind::External(None),
        _ if s.starts_with('c') => VertexKind::Cross(s[1..].parse().map_err(|_| bad())?),
        _ if s.starts_with('e') => VertexKind::External(Some(s[1..].parse().map_err(|_| bad())?)),
        _ => return Err(bad()),
    })
}

fn parse_index(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("bad vertex index {s:?}")))
}

/// Parses a canonical encoding `V:<kinds>|E:<a-b[xm]>|X:<leg@v or leg~leg>`.
pub fn parse_encoding(src: &str) -> Result<FeynmanGraph> {
    let parts: Vec<&str> = src.trim().split('|').collect();
    let field = |i: usize, tag: &str| -> Result<&str> {
        parts
            .get(i)
            .and_then(|p| p.strip_prefix(tag))
            .ok_or_else(|| Error::Parse(format!("encoding needs a {tag} section in position {}", i + 1)))
    };
    if parts.len() != 3 {
        return Err(Error::Parse("encoding has three sections V:|E:|X:".into()));
    }
    let items = |s: &str| -> Vec<String> { s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect() };
    let mut kinds = Vec::new();
    for k in items(field(0, "V:")?) {
        let kind = parse_kind(&k)?;
        if kind.is_leg() {
            return Err(Error::Parse("legs belong in the X section".into()));
        }
        kinds.push(kind);
    }
    let n = kinds.len();
    let mut edges = Vec::new();
    for e in items(field(1, "E:")?) {
        let (pair, mult) = match e.split_once('x') {
            Some((p, m)) => (p, m.parse::<usize>().map_err(|_| Error::Parse(format!("bad multiplicity in {e}")))?),
            None => (e.as_str(), 1),
        };
        let (a, b) = pair.split_once('-').ok_or_else(|| Error::Parse(format!("bad edge {e}")))?;
        let (a, b) = (parse_index(a)?, parse_index(b)?);
        if a >= n || b >= n {
            return Err(Error::Parse(format!("edge {e} references a missing vertex")));
        }
        for _ in 0..mult {
            edges.push([a, b]);
        }
    }
    for x in items(field(2, "X:")?) {
        if let Some((l1, l2)) = x.split_once('~') {
            kinds.push(parse_kind(l1)?);
            kinds.push(parse_kind(l2)?);
            edges.push([kinds.len() - 2, kinds.len() - 1]);
        } else {
            let (l, at) = x.split_once('@').ok_or_else(|| Error::Parse(format!("bad leg {x}")))?;
            let kind = parse_kind(l)?;
            if !kind.is_leg() {
                return Err(Error::Parse(format!("{l} is not a leg kind")));
            }
            let at = parse_index(at)?;
            if at >= n {
                return Err(Error::Parse(format!("leg {x} references a missing vertex")));
            }
            kinds.push(kind);
            edges.push([at, kinds.len() - 1]);
        }
    }
    FeynmanGraph::new(kinds, edges)
}

/// DOT rendering: external points as dots, sources and crosses as labeled crosses,
/// interaction vertices as points.
pub fn to_dot(g: &FeynmanGraph) -> String {
    let cf = canonical_form(g);
    let mut pos = vec![0; g.vertex_count()];
    for (p, &v) in cf.order.iter().enumerate() {
        pos[v] = p;
    }
    let mut out = String::from("graph G {\n");
    for (p, &v) in cf.order.iter().enumerate() {
        let attrs = match g.kind(v) {
            VertexKind::Internal => "shape=point".to_string(),
            VertexKind::Cross(r) => format!("shape=plaintext,label=\"×({r})\""),
            VertexKind::Source => "shape=plaintext,label=\"×J\"".to_string(),
            VertexKind::External(None) => "shape=circle,style=filled,width=0.12,label=\"\"".to_string(),
            VertexKind::External(Some(l)) => format!("shape=circle,style=filled,width=0.12,xlabel=\"{l}\",label=\"\""),
        };
        out.push_str(&format!("  v{p} [{attrs}];\n"));
    }
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().map(|&[a, b]| (pos[a].min(pos[b]), pos[a].max(pos[b]))).collect();
    edges.sort();
    for (a, b) in edges {
        out.push_str(&format!("  v{a} -- v{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// JSON mirror of the half-edge structure.
pub fn to_json(g: &FeynmanGraph) -> Value {
    let he = g.half_edges();
    json!({
        "encoding": canonical_form(g).encoding,
        "vertices": g.kinds().iter().enumerate().map(|(v, k)| json!({
            "id": v,
            "kind": k.to_string(),
            "half_edges": he[v],
        })).collect::<Vec<_>>(),
        "edges": g.edges(),
    })
}

/// Reads `{"vertices": ["i", "e1", ...], "edges": [[0, 1], ...]}`; vertex entries may
/// also be objects with a `"kind"` field, as produced by [`to_json`].
pub fn from_json(v: &Value) -> Result<FeynmanGraph> {
    let verts = v.get("vertices").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing vertices".into()))?;
    let mut kinds = Vec::new();
    for x in verts {
        let s = x
            .as_str()
            .or_else(|| x.get("kind").and_then(Value::as_str))
            .ok_or_else(|| Error::Parse("vertex entries are kind strings".into()))?;
        kinds.push(parse_kind(s)?);
    }
    let es = v.get("edges").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing edges".into()))?;
    let mut edges = Vec::new();
    for e in es {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse("edges are pairs".into()))?;
        let idx = |x: &Value| x.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse("edge ends are indices".into()));
        edges.push([idx(&pair[0])?, idx(&pair[1])?]);
    }
    FeynmanGraph::new(kinds, edges)
}

/// Accepts a built-in name, an encoding, or a JSON literal.
pub fn parse_graph(src: &str) -> Result<FeynmanGraph> {
    let t = src.trim();
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        from_json(&v)
    } else if t.starts_with("V:") {
        parse_encoding(t)
    } else {
        super::named::by_name(t)
    }
}
