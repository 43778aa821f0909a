#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sgh_core::io::{parse_graph, GraphFile};
use sgh_core::{BrGraph, Colour, EdgeKind, Graph, VertexId};

pub fn fixture(name: &str) -> GraphFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_graph(&src).unwrap()
}

pub fn v(g: &BrGraph, name: &str) -> VertexId {
    g.vertex(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

/// Every slot (including loops) independently none, blue, red or purple.
pub fn random_brgraph(rng: &mut ChaCha8Rng, n: usize, loops: bool) -> BrGraph {
    let mut g = BrGraph::unnamed(n);
    for u in 0..n {
        for w in u..n {
            if u == w && !loops {
                continue;
            }
            let kind = match rng.gen_range(0..4) {
                0 => None,
                1 => Some(EdgeKind::Blue),
                2 => Some(EdgeKind::Red),
                _ => Some(EdgeKind::Purple),
            };
            if let Some(k) = kind {
                g.add_edge(VertexId::from(u), VertexId::from(w), k);
            }
        }
    }
    g
}

/// All br-graphs on `n` labelled vertices, loops included: 4^(slots).
pub fn all_brgraphs(n: usize) -> Vec<BrGraph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |w| (u, w))).collect();
    let total = 4usize.pow(slots.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut g = BrGraph::unnamed(n);
            for &(u, w) in &slots {
                let (u, w) = (VertexId::from(u), VertexId::from(w));
                match code % 4 {
                    1 => g.add_edge(u, w, EdgeKind::Blue),
                    2 => g.add_edge(u, w, EdgeKind::Red),
                    3 => g.add_edge(u, w, EdgeKind::Purple),
                    _ => {}
                }
                code /= 4;
            }
            g
        })
        .collect()
}

/// Every map `V(g) -> V(h)` in lexicographic order.
pub fn all_maps(n: usize, m: usize) -> impl Iterator<Item = Vec<VertexId>> {
    let total = if n == 0 {
        1
    } else {
        m.checked_pow(n as u32).unwrap()
    };
    (0..total).map(move |mut code| {
        let mut out = vec![VertexId(0); n];
        for slot in out.iter_mut().rev() {
            *slot = VertexId::from(code % m);
            code /= m;
        }
        out
    })
}

/// Colour-preserving homomorphism check written independently of the
/// library: compare every ordered pair of source vertices.
pub fn brute_is_hom(g: &BrGraph, h: &BrGraph, map: &[VertexId]) -> bool {
    g.vertices().all(|x| {
        g.vertices().all(|y| {
            Colour::BOTH
                .iter()
                .all(|&c| !g.has(c, x, y) || h.has(c, map[x.index()], map[y.index()]))
        })
    })
}

/// Switching written independently: flip the colour of every non-loop
/// pure edge crossing the cut.
pub fn brute_switch(g: &BrGraph, mask: u32) -> BrGraph {
    let mut out = BrGraph::unnamed(g.len());
    for x in g.vertices() {
        for y in g.vertices().filter(|&y| y >= x) {
            let cross = x != y && ((mask >> x.0) & 1) != ((mask >> y.0) & 1);
            let (b, r) = (g.has_blue(x, y), g.has_red(x, y));
            let (b, r) = if cross { (r, b) } else { (b, r) };
            if let Some(k) = EdgeKind::from_colours(b, r) {
                out.add_edge(x, y, k);
            }
        }
    }
    out
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, loops: bool) -> Graph {
    let mut g = Graph::unnamed(n);
    for u in 0..n {
        for w in u..n {
            if (u != w || loops) && rng.gen_bool(p) {
                g.add_edge(VertexId::from(u), VertexId::from(w));
            }
        }
    }
    g
}
