use super::{check_props, decode, encode, one_off_patterns, PolyProps, Polymorphism3, Target};
use crate::csp::{self, Network, ValueOrder, MAX_VALUES};
use crate::error::{Error, Result};
use crate::graph::{Colour, VertexId};

/// Result of a polymorphism search at arity 3.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Polymorphism3),
    /// The whole space was searched; no ternary operation qualifies.
    Exhausted,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Polymorphism3> {
        match self {
            SearchOutcome::Found(f) => Some(f),
            SearchOutcome::Exhausted => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// One variable per ordered triple; edge preservation per colour links
/// triples that are coordinatewise adjacent, and WNU adds equality links
/// between the three one-off patterns.
struct PolyNetwork {
    n: usize,
    neighbours: [Vec<Vec<VertexId>>; 2],
    rows: [Vec<u64>; 2],
    identity: Vec<u64>,
    wnu: bool,
}

impl Network for PolyNetwork {
    fn num_vars(&self) -> usize {
        self.n * self.n * self.n
    }

    fn for_each_arc(&self, y: usize, f: &mut dyn FnMut(usize, &[u64])) {
        let n = self.n;
        let v = decode(n, y);
        for c in 0..2 {
            let nb = &self.neighbours[c];
            for &a in &nb[v[0].index()] {
                for &b in &nb[v[1].index()] {
                    for &d in &nb[v[2].index()] {
                        let x = encode(n, [a, b, d]);
                        if x != y {
                            f(x, &self.rows[c]);
                        }
                    }
                }
            }
        }
        if self.wnu {
            if let Some((p, q)) = one_off(v) {
                for pat in one_off_patterns(p, q) {
                    let x = encode(n, pat);
                    if x != y {
                        f(x, &self.identity);
                    }
                }
            }
        }
    }
}

/// `(x, y)` when the triple is a permutation of `(x, x, y)` with `x != y`.
fn one_off(v: [VertexId; 3]) -> Option<(VertexId, VertexId)> {
    match v {
        [a, b, c] if a == b && b != c => Some((a, c)),
        [a, b, c] if a == c && a != b => Some((a, b)),
        [a, b, c] if b == c && a != b => Some((b, a)),
        _ => None,
    }
}

fn bit(v: VertexId) -> u64 {
    1u64 << v.0
}

/// Searches for a ternary polymorphism of `target` with the `required`
/// properties, trying values in increasing id order.
///
/// Supported requirements: idempotent, conservative, semi-conservative,
/// WNU and NU3. Any witness is re-checked with [`check_props`].
pub fn search_poly3(target: &Target, required: PolyProps) -> Result<SearchOutcome> {
    run(target, required, ValueOrder::Ascending)
}

/// As [`search_poly3`], trying values in the given order at every branch.
/// Vertices missing from `order` are never chosen at a branch.
pub fn search_poly3_ordered(
    target: &Target,
    required: PolyProps,
    order: &[VertexId],
) -> Result<SearchOutcome> {
    run(
        target,
        required,
        ValueOrder::Custom(order.iter().map(|v| v.0 as u8).collect()),
    )
}

fn run(target: &Target, required: PolyProps, order: ValueOrder) -> Result<SearchOutcome> {
    if required.symmetric || required.parity_symmetric {
        return Err(Error::Unsupported(
            "symmetry requirements are checked, not searched".into(),
        ));
    }
    let n = target.len();
    if n > MAX_VALUES {
        return Err(Error::TooLarge {
            size: n,
            limit: MAX_VALUES,
        });
    }
    if n == 0 {
        return Ok(SearchOutcome::Found(Polymorphism3::from_fn(0, |x| x[0])));
    }
    let g = &target.graph;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let loops = Colour::BOTH.map(|c| {
        g.vertices()
            .filter(|&v| g.has(c, v, v))
            .fold(0u64, |acc, v| acc | bit(v))
    });
    let mut domains = vec![full; n * n * n];
    for (i, dom) in domains.iter_mut().enumerate() {
        let x = decode(n, i);
        if required.conservative {
            *dom &= x.iter().fold(0, |acc, &v| acc | bit(v));
        }
        if required.semi_conservative {
            *dom &= target.closure(x).iter().fold(0, |acc, &v| acc | bit(v));
        }
        if (required.idempotent || required.wnu || required.nu3) && x[0] == x[1] && x[1] == x[2] {
            *dom &= bit(x[0]);
        }
        if required.nu3 {
            if let Some((p, _)) = one_off(x) {
                *dom &= bit(p);
            }
        }
        // a triple adjacent to itself must map to a looped vertex
        for (c, colour) in Colour::BOTH.into_iter().enumerate() {
            if x.iter().all(|&v| g.has(colour, v, v)) {
                *dom &= loops[c];
            }
        }
    }
    let net = PolyNetwork {
        n,
        neighbours: Colour::BOTH
            .map(|c| g.vertices().map(|v| g.neighbours(c, v).to_vec()).collect()),
        rows: Colour::BOTH.map(|c| g.adjacency_bits(c)),
        identity: (0..n).map(|b| 1u64 << b).collect(),
        wnu: required.wnu,
    };
    let Some(sol) = csp::solve(&net, domains, &order) else {
        return Ok(SearchOutcome::Exhausted);
    };
    let f = Polymorphism3::from_table(n, sol.into_iter().map(|v| VertexId(v as u32)).collect())?;
    let report = check_props(target, &f, required)?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::SelfCheck(format!(
            "search produced a table failing {}",
            bad.prop.name()
        )));
    }
    Ok(SearchOutcome::Found(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BrGraph, EdgeKind};
    use crate::switching::switching_graph;

    fn purple_edge() -> BrGraph {
        let mut g = BrGraph::new();
        g.add_named_edge("u", "v", EdgeKind::Purple);
        g
    }

    #[test]
    fn purple_edge_has_conservative_nu3() {
        let t = Target::new(purple_edge());
        let out = search_poly3(&t, PolyProps::parse("conservative,nu3").unwrap()).unwrap();
        assert!(out.is_found());
    }

    #[test]
    fn pure_triangle_has_no_conservative_wnu() {
        let mut g = BrGraph::new();
        g.add_named_edge("a", "b", EdgeKind::Red);
        g.add_named_edge("b", "c", EdgeKind::Red);
        g.add_named_edge("c", "a", EdgeKind::Red);
        let t = Target::new(g);
        let out = search_poly3(&t, PolyProps::parse("conservative,wnu").unwrap()).unwrap();
        assert!(!out.is_found());
    }

    #[test]
    fn switching_graph_of_edge_has_semi_conservative_wnu() {
        let pg = switching_graph(&purple_edge());
        let out = search_poly3(
            &Target::switching(&pg),
            PolyProps::parse("semi,wnu").unwrap(),
        )
        .unwrap();
        assert!(out.is_found());
    }

    #[test]
    fn custom_order_changes_the_witness() {
        let t = Target::new(purple_edge());
        let props = PolyProps::none();
        let a = search_poly3_ordered(&t, props, &[VertexId(0), VertexId(1)]).unwrap();
        let b = search_poly3_ordered(&t, props, &[VertexId(1), VertexId(0)]).unwrap();
        assert_ne!(a.found().unwrap(), b.found().unwrap());
    }

    #[test]
    fn symmetry_cannot_be_searched() {
        let t = Target::new(purple_edge());
        assert!(search_poly3(&t, PolyProps::parse("symmetric").unwrap()).is_err());
    }
}
