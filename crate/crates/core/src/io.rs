//! Text and JSON formats for graphs, lists, operation tables, vertex
//! orders and newmain witnesses.
//!
//! Graph text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! vertex a
//! edge a b p      # b = blue, r = red, p = purple (both)
//! swap b c        # optional involution used as the switch map
//! ```
//!
//! Vertices are declared on first use. The JSON mirror is
//! `{"vertices": [...], "edges": [{"u": .., "v": .., "c": "b|r|p"}], "swap": [[u, v], ..]}`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{BrGraph, EdgeKind, VertexId};
use crate::hom::ListAssignment;
use crate::order::{NewmainWitness, VertexOrder};
use crate::poly::Polymorphism3;
use crate::switching::{Involution, SwitchGraph};

/// A parsed graph with its optional switch map.
#[derive(Clone, Debug)]
pub struct GraphFile {
    pub graph: BrGraph,
    pub swap: Option<Involution>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace separated tokens of a line with their 1-based columns, up to
/// any comment.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

fn build_swap(
    g: &BrGraph,
    pairs: &[(VertexId, VertexId)],
    at: &[(usize, usize)],
) -> Result<Option<Involution>> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let mut map: Vec<Option<VertexId>> = vec![None; g.len()];
    for (k, &(u, v)) in pairs.iter().enumerate() {
        let (line, column) = at[k];
        for (x, y) in [(u, v), (v, u)] {
            match map[x.index()] {
                Some(prev) if prev != y => {
                    return Err(parse_error(
                        line,
                        column,
                        format!("`{}` swapped twice", g.name(x)),
                    ));
                }
                _ => map[x.index()] = Some(y),
            }
        }
    }
    let full = map
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.unwrap_or(VertexId::from(i)))
        .collect();
    Involution::new(full).map(Some)
}

/// Parses the line-oriented graph format.
pub fn parse_graph_text(src: &str) -> Result<GraphFile> {
    let mut g = BrGraph::new();
    let mut swaps = Vec::new();
    let mut swap_at = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(line);
        let Some(&(col, word)) = toks.first() else {
            continue;
        };
        let arity = |n: usize| -> Result<()> {
            if toks.len() != n + 1 {
                let column = toks.get(n + 1).map_or(line.len() + 1, |t| t.0);
                return Err(parse_error(
                    ln,
                    column,
                    format!("`{word}` takes {n} argument(s)"),
                ));
            }
            Ok(())
        };
        match word {
            "vertex" => {
                arity(1)?;
                let (c, name) = toks[1];
                if g.vertex(name).is_some() {
                    return Err(parse_error(ln, c, format!("duplicate vertex `{name}`")));
                }
                g.add_vertex(name)?;
            }
            "edge" => {
                arity(3)?;
                let (c, code) = toks[3];
                let kind = EdgeKind::from_code(code).ok_or_else(|| {
                    parse_error(
                        ln,
                        c,
                        format!("edge colour must be b, r or p, found `{code}`"),
                    )
                })?;
                g.add_named_edge(toks[1].1, toks[2].1, kind);
            }
            "swap" => {
                arity(2)?;
                let u = declare(&mut g, toks[1].1);
                let v = declare(&mut g, toks[2].1);
                swaps.push((u, v));
                swap_at.push((ln, toks[1].0));
            }
            other => return Err(parse_error(ln, col, format!("unknown directive `{other}`"))),
        }
    }
    let swap = build_swap(&g, &swaps, &swap_at)?;
    Ok(GraphFile { graph: g, swap })
}

fn declare(g: &mut BrGraph, name: &str) -> VertexId {
    match g.vertex(name) {
        Some(v) => v,
        None => g.add_vertex(name).expect("name is new"),
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    u: String,
    v: String,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    #[serde(default)]
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    swap: Vec<[String; 2]>,
}

fn json_error(e: serde_json::Error) -> Error {
    parse_error(e.line(), e.column(), e.to_string())
}

fn graph_from_json(doc: GraphJson) -> Result<GraphFile> {
    let mut g = BrGraph::new();
    for name in &doc.vertices {
        g.add_vertex(name.clone())?;
    }
    for e in &doc.edges {
        let kind = EdgeKind::from_code(&e.c).ok_or_else(|| {
            Error::Unsupported(format!("edge colour must be b, r or p, found `{}`", e.c))
        })?;
        g.add_named_edge(&e.u, &e.v, kind);
    }
    let pairs: Vec<(VertexId, VertexId)> = doc
        .swap
        .iter()
        .map(|[u, v]| (declare(&mut g, u), declare(&mut g, v)))
        .collect();
    let at = vec![(0, 0); pairs.len()];
    let swap = build_swap(&g, &pairs, &at)?;
    Ok(GraphFile { graph: g, swap })
}

pub fn parse_graph_json(src: &str) -> Result<GraphFile> {
    graph_from_json(serde_json::from_str(src).map_err(json_error)?)
}

/// Parses either format, choosing JSON when the input starts with `{`.
pub fn parse_graph(src: &str) -> Result<GraphFile> {
    if src.trim_start().starts_with('{') {
        parse_graph_json(src)
    } else {
        parse_graph_text(src)
    }
}

fn swap_pairs(g: &BrGraph, swap: Option<&Involution>) -> Vec<[String; 2]> {
    swap.map(|s| {
        s.pairs()
            .into_iter()
            .map(|(u, v)| [g.name(u).to_string(), g.name(v).to_string()])
            .collect()
    })
    .unwrap_or_default()
}

pub fn graph_to_text(g: &BrGraph, swap: Option<&Involution>) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {}\n", g.name(v)));
    }
    for (u, v, kind) in g.all_edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            g.name(u),
            g.name(v),
            kind.code()
        ));
    }
    for [u, v] in swap_pairs(g, swap) {
        out.push_str(&format!("swap {u} {v}\n"));
    }
    out
}

pub fn graph_to_json(g: &BrGraph, swap: Option<&Involution>) -> Value {
    let doc = GraphJson {
        vertices: g.names().to_vec(),
        edges: g
            .all_edges()
            .into_iter()
            .map(|(u, v, kind)| EdgeJson {
                u: g.name(u).to_string(),
                v: g.name(v).to_string(),
                c: kind.code().to_string(),
            })
            .collect(),
        swap: swap_pairs(g, swap),
    };
    serde_json::to_value(doc).expect("graph serializes")
}

/// Parses `list <vertex> <h1> <h2> ...` lines; vertices without a line get
/// the full list. With `switching`, names refer to `P(H)` and a bare name
/// of `H` stands for both of its copies.
pub fn parse_lists(
    src: &str,
    source: &BrGraph,
    target: &BrGraph,
    switching: Option<&SwitchGraph>,
) -> Result<ListAssignment> {
    let mut lists = ListAssignment::full(source.len(), target.len());
    let mut seen = vec![false; source.len()];
    for (ln, line) in src.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(line);
        let Some(&(col, word)) = toks.first() else {
            continue;
        };
        if word != "list" {
            return Err(parse_error(
                ln,
                col,
                format!("expected `list`, found `{word}`"),
            ));
        }
        let Some(&(vc, vname)) = toks.get(1) else {
            return Err(parse_error(ln, line.len() + 1, "missing vertex name"));
        };
        let v = source
            .vertex(vname)
            .ok_or_else(|| parse_error(ln, vc, format!("unknown vertex `{vname}`")))?;
        if std::mem::replace(&mut seen[v.index()], true) {
            return Err(parse_error(ln, vc, format!("second list for `{vname}`")));
        }
        let mut list = Vec::new();
        for &(c, name) in &toks[2..] {
            if let Some(x) = target.vertex(name) {
                list.push(x);
            } else if let Some(base) =
                switching.and_then(|pg| pg.base.vertex(name).map(|b| (pg, b)))
            {
                let (pg, b) = base;
                list.extend([pg.lift(b, 1), pg.lift(b, 2)]);
            } else {
                return Err(parse_error(
                    ln,
                    c,
                    format!("unknown target vertex `{name}`"),
                ));
            }
        }
        if list.is_empty() {
            return Err(parse_error(ln, vc, format!("empty list for `{vname}`")));
        }
        lists.set(v, list);
    }
    Ok(lists)
}

/// Parses `f <x1> <x2> <x3> -> <y>` lines into a total table.
pub fn parse_table(src: &str, target: &BrGraph) -> Result<Polymorphism3> {
    let n = target.len();
    let mut table: Vec<Option<VertexId>> = vec![None; n * n * n];
    for (ln, line) in src.lines().enumerate() {
        let ln = ln + 1;
        let toks = tokens(line);
        let Some(&(col, word)) = toks.first() else {
            continue;
        };
        if word != "f" {
            return Err(parse_error(
                ln,
                col,
                format!("expected `f`, found `{word}`"),
            ));
        }
        if toks.len() != 6 || toks[4].1 != "->" {
            return Err(parse_error(ln, col, "expected `f <x1> <x2> <x3> -> <y>`"));
        }
        let mut ids = [VertexId(0); 4];
        for (k, &i) in [1, 2, 3, 5].iter().enumerate() {
            let (c, name) = toks[i];
            ids[k] = target
                .vertex(name)
                .ok_or_else(|| parse_error(ln, c, format!("unknown vertex `{name}`")))?;
        }
        let idx = (ids[0].index() * n + ids[1].index()) * n + ids[2].index();
        match table[idx] {
            Some(prev) if prev != ids[3] => {
                return Err(parse_error(
                    ln,
                    toks[5].0,
                    "conflicting value for this triple",
                ));
            }
            _ => table[idx] = Some(ids[3]),
        }
    }
    let got = table.iter().filter(|e| e.is_some()).count();
    if got != table.len() {
        return Err(Error::TableNotTotal {
            expected: table.len(),
            got,
        });
    }
    Polymorphism3::from_table(n, table.into_iter().map(|e| e.expect("total")).collect())
}

/// Parses whitespace separated vertex names, lowest first.
pub fn parse_order(src: &str, g: &BrGraph) -> Result<VertexOrder> {
    let mut seq = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        for (c, name) in tokens(line) {
            seq.push(
                g.vertex(name)
                    .ok_or_else(|| parse_error(ln + 1, c, format!("unknown vertex `{name}`")))?,
            );
        }
    }
    VertexOrder::new(seq, g.len())
}

#[derive(Serialize, Deserialize)]
struct WitnessJson {
    h_plus: GraphJson,
    order: Vec<String>,
    r: String,
    #[serde(rename = "L", default)]
    leaves: Vec<String>,
    #[serde(rename = "B", default)]
    removed: Vec<[String; 2]>,
}

pub fn witness_to_json(w: &NewmainWitness) -> Value {
    let g = &w.h_plus;
    let names = |vs: &[VertexId]| {
        vs.iter()
            .map(|&v| g.name(v).to_string())
            .collect::<Vec<_>>()
    };
    let GraphJson {
        vertices, edges, ..
    } = serde_json::from_value(graph_to_json(g, None)).expect("graph json round-trips");
    let doc = WitnessJson {
        h_plus: GraphJson {
            vertices,
            edges,
            swap: Vec::new(),
        },
        order: names(w.order.as_slice()),
        r: g.name(w.r).to_string(),
        leaves: names(&w.leaves),
        removed: w
            .removed
            .iter()
            .map(|&(u, v)| [g.name(u).to_string(), g.name(v).to_string()])
            .collect(),
    };
    serde_json::to_value(doc).expect("witness serializes")
}

/// Parses a witness; its invariants are checked by `newmain_build`.
pub fn witness_from_json(src: &str) -> Result<NewmainWitness> {
    let doc: WitnessJson = serde_json::from_str(src).map_err(json_error)?;
    let h_plus = graph_from_json(doc.h_plus)?.graph;
    let id = |name: &str| h_plus.require(name);
    let order = doc
        .order
        .iter()
        .map(|n| id(n))
        .collect::<Result<Vec<_>>>()?;
    let order = VertexOrder::new(order, h_plus.len())?;
    let r = id(&doc.r)?;
    let leaves = doc
        .leaves
        .iter()
        .map(|n| id(n))
        .collect::<Result<Vec<_>>>()?;
    let mut removed = doc
        .removed
        .iter()
        .map(|[u, v]| {
            let (a, b) = (id(u)?, id(v)?);
            Ok((a.min(b), a.max(b)))
        })
        .collect::<Result<Vec<_>>>()?;
    removed.sort();
    removed.dedup();
    Ok(NewmainWitness {
        h_plus,
        order,
        r,
        leaves,
        removed,
    })
}
