//! Colour-preserving isomorphisms between br-graphs by signature pruning and
//! backtracking. Exponential in the worst case; meant for small graphs.

use crate::error::{Error, Result};
use crate::graph::{BrGraph, Colour, VertexId};

/// Per-vertex invariant: degrees by colour class and loop colours.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Signature {
    blue_only: usize,
    red_only: usize,
    purple: usize,
    blue_loop: bool,
    red_loop: bool,
}

fn signatures(g: &BrGraph) -> Vec<Signature> {
    g.vertices()
        .map(|v| {
            let mut sig = Signature {
                blue_only: 0,
                red_only: 0,
                purple: 0,
                blue_loop: g.has_blue(v, v),
                red_loop: g.has_red(v, v),
            };
            for w in g.vertices().filter(|&w| w != v) {
                match (g.has_blue(v, w), g.has_red(v, w)) {
                    (true, true) => sig.purple += 1,
                    (true, false) => sig.blue_only += 1,
                    (false, true) => sig.red_only += 1,
                    _ => {}
                }
            }
            sig
        })
        .collect()
}

struct Matcher<'a> {
    g1: &'a BrGraph,
    g2: &'a BrGraph,
    sig1: Vec<Signature>,
    sig2: Vec<Signature>,
    order: Vec<VertexId>,
    map: Vec<Option<VertexId>>,
    used: Vec<bool>,
}

impl<'a> Matcher<'a> {
    fn new(g1: &'a BrGraph, g2: &'a BrGraph) -> Option<Matcher<'a>> {
        if g1.len() != g2.len() {
            return None;
        }
        for colour in Colour::BOTH {
            if g1.edges(colour).len() != g2.edges(colour).len() {
                return None;
            }
        }
        let sig1 = signatures(g1);
        let sig2 = signatures(g2);
        let mut s1: Vec<_> = sig1.iter().map(sig_key).collect();
        let mut s2: Vec<_> = sig2.iter().map(sig_key).collect();
        s1.sort();
        s2.sort();
        if s1 != s2 {
            return None;
        }
        Some(Matcher {
            order: search_order(g1),
            map: vec![None; g1.len()],
            used: vec![false; g2.len()],
            g1,
            g2,
            sig1,
            sig2,
        })
    }

    fn consistent(&self, v: VertexId, image: VertexId) -> bool {
        if self.sig1[v.index()] != self.sig2[image.index()] {
            return false;
        }
        self.map.iter().enumerate().all(|(w, m)| match m {
            None => true,
            Some(wi) => {
                let w = VertexId::from(w);
                Colour::BOTH
                    .iter()
                    .all(|&c| self.g1.has(c, v, w) == self.g2.has(c, image, *wi))
            }
        })
    }

    /// Visits complete bijections; stops when `visit` returns false.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[VertexId]) -> bool) -> bool {
        if depth == self.order.len() {
            let full: Vec<VertexId> = self.map.iter().map(|m| m.unwrap()).collect();
            return visit(&full);
        }
        let v = self.order[depth];
        for cand in self.g2.vertices() {
            if self.used[cand.index()] || !self.consistent(v, cand) {
                continue;
            }
            self.map[v.index()] = Some(cand);
            self.used[cand.index()] = true;
            let go_on = self.run(depth + 1, visit);
            self.map[v.index()] = None;
            self.used[cand.index()] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn sig_key(s: &Signature) -> (usize, usize, usize, bool, bool) {
    (s.blue_only, s.red_only, s.purple, s.blue_loop, s.red_loop)
}

/// BFS order over the underlying graph so each new vertex tends to touch
/// already-mapped ones.
fn search_order(g: &BrGraph) -> Vec<VertexId> {
    let under = g.underlying();
    let mut seen = vec![false; g.len()];
    let mut order = Vec::with_capacity(g.len());
    let mut starts: Vec<VertexId> = g.vertices().collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(under.degree(v)));
    for s in starts {
        if seen[s.index()] {
            continue;
        }
        seen[s.index()] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in under.neighbours(u) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// A bijection `V(g1) -> V(g2)` preserving blue and red edges exactly, if
/// one exists. `result[v]` is the image of `v`.
pub fn brgraph_isomorphic(g1: &BrGraph, g2: &BrGraph) -> Option<Vec<VertexId>> {
    let mut matcher = Matcher::new(g1, g2)?;
    let mut found = None;
    matcher.run(0, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// All colour-preserving automorphisms of `g`, failing once more than
/// `limit` have been seen.
pub fn automorphisms(g: &BrGraph, limit: usize) -> Result<Vec<Vec<VertexId>>> {
    let mut matcher = Matcher::new(g, g).expect("a graph matches itself");
    let mut all = Vec::new();
    let mut overflow = false;
    matcher.run(0, &mut |m| {
        if all.len() == limit {
            overflow = true;
            return false;
        }
        all.push(m.to_vec());
        true
    });
    if overflow {
        return Err(Error::TooLarge {
            size: limit + 1,
            limit,
        });
    }
    Ok(all)
}

/// Checks that `map` is a colour-preserving bijection `g1 -> g2`.
pub fn is_isomorphism(g1: &BrGraph, g2: &BrGraph, map: &[VertexId]) -> bool {
    if g1.len() != g2.len() || map.len() != g1.len() {
        return false;
    }
    let mut hit = vec![false; g2.len()];
    for &m in map {
        if m.index() >= g2.len() || std::mem::replace(&mut hit[m.index()], true) {
            return false;
        }
    }
    g1.vertices().all(|u| {
        g1.vertices().all(|v| {
            Colour::BOTH
                .iter()
                .all(|&c| g1.has(c, u, v) == g2.has(c, map[u.index()], map[v.index()]))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKind;

    #[test]
    fn identity_is_found() {
        let mut g = BrGraph::new();
        g.add_named_edge("a", "b", EdgeKind::Blue);
        g.add_named_edge("b", "c", EdgeKind::Red);
        g.add_named_edge("c", "c", EdgeKind::Purple);
        let m = brgraph_isomorphic(&g, &g).unwrap();
        assert!(is_isomorphism(&g, &g, &m));
    }

    #[test]
    fn colours_must_match() {
        let mut blue = BrGraph::new();
        blue.add_named_edge("u", "v", EdgeKind::Blue);
        let mut red = BrGraph::new();
        red.add_named_edge("u", "v", EdgeKind::Red);
        assert!(brgraph_isomorphic(&blue, &red).is_none());
    }

    #[test]
    fn automorphisms_of_purple_path() {
        let mut g = BrGraph::new();
        g.add_named_edge("a", "b", EdgeKind::Purple);
        g.add_named_edge("b", "c", EdgeKind::Purple);
        let autos = automorphisms(&g, 10).unwrap();
        assert_eq!(autos.len(), 2);
        assert!(automorphisms(&BrGraph::unnamed(5), 10).is_err());
    }
}
