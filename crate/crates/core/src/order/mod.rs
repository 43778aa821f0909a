//! Min-orderings, the leaf reordering, and the explicit semi-conservative
//! WNU built from an ordered purple graph with some blue edges removed.

mod newmain;

pub use newmain::{
    newmain_build, newmain_premise_search, newmain_props, NewmainBuild, NewmainWitness, PremiseHit,
};

use crate::error::{Error, Result};
use crate::graph::{Graph, Parity, VertexId};

/// A total order on the vertices, listed from lowest to highest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    order: Vec<VertexId>,
    rank: Vec<usize>,
}

impl VertexOrder {
    pub fn new(order: Vec<VertexId>, n: usize) -> Result<VertexOrder> {
        if order.len() != n {
            return Err(Error::NotPermutation(format!(
                "{} entries for {n} vertices",
                order.len()
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (i, v) in order.iter().enumerate() {
            if v.index() >= n || rank[v.index()] != usize::MAX {
                return Err(Error::NotPermutation(format!(
                    "vertex {v} repeated or out of range"
                )));
            }
            rank[v.index()] = i;
        }
        Ok(VertexOrder { order, rank })
    }

    pub fn identity(n: usize) -> VertexOrder {
        VertexOrder::new((0..n).map(VertexId::from).collect(), n)
            .expect("identity is a permutation")
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank(&self, v: VertexId) -> usize {
        self.rank[v.index()]
    }

    pub fn less(&self, u: VertexId, v: VertexId) -> bool {
        self.rank(u) < self.rank(v)
    }

    pub fn min(&self, u: VertexId, v: VertexId) -> VertexId {
        if self.less(v, u) {
            v
        } else {
            u
        }
    }

    pub fn min3(&self, x: [VertexId; 3]) -> VertexId {
        self.min(self.min(x[0], x[1]), x[2])
    }
}

/// A vertex order certified to be a min-ordering of `graph`.
#[derive(Clone, Debug)]
pub struct MinOrdering {
    pub graph: Graph,
    pub order: VertexOrder,
}

/// Pairs compared by the binary minimum. On a bipartite graph only pairs of
/// equal parity matter (the constant parity component of the square); on
/// other graphs every pair does.
struct Sides(Option<Parity>);

impl Sides {
    fn of(g: &Graph) -> Sides {
        Sides(g.bipartition())
    }

    fn same(&self, u: VertexId, v: VertexId) -> bool {
        self.0.as_ref().is_none_or(|p| p.of(u) == p.of(v))
    }
}

/// Vertices `a <= a'`, `b <= b'` with `a ~ b'` and `b ~ a'` but `a !~ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub a: VertexId,
    pub a_prime: VertexId,
    pub b: VertexId,
    pub b_prime: VertexId,
}

/// First violation of the under-bar identity, scanning `a, b', b, a'` in
/// vertex id order. On bipartite graphs `a` and `a'` range over one side.
pub fn underbar_violation(g: &Graph, order: &VertexOrder) -> Option<Violation> {
    let sides = Sides::of(g);
    for a in g.vertices() {
        for &b_prime in g.neighbours(a) {
            for b in g.vertices().filter(|&b| !order.less(b_prime, b)) {
                if g.adjacent(a, b) {
                    continue;
                }
                for &a_prime in g.neighbours(b) {
                    if !order.less(a_prime, a) && sides.same(a, a_prime) {
                        return Some(Violation {
                            a,
                            a_prime,
                            b,
                            b_prime,
                        });
                    }
                }
            }
        }
    }
    None
}

/// First pair of edges `x1 ~ y1`, `x2 ~ y2` with `min(x1, x2) !~ min(y1, y2)`,
/// where on bipartite graphs `x1` and `x2` have equal parity.
pub fn binary_min_violation(g: &Graph, order: &VertexOrder) -> Option<[(VertexId, VertexId); 2]> {
    let sides = Sides::of(g);
    let edges: Vec<(VertexId, VertexId)> = g
        .vertices()
        .flat_map(|u| g.neighbours(u).iter().map(move |&v| (u, v)))
        .collect();
    for &(x1, y1) in &edges {
        for &(x2, y2) in edges.iter().filter(|e| sides.same(x1, e.0)) {
            if !g.adjacent(order.min(x1, x2), order.min(y1, y2)) {
                return Some([(x1, y1), (x2, y2)]);
            }
        }
    }
    None
}

/// Whether `order` is a min-ordering of `g`; on failure, a violating
/// quadruple. The under-bar check is cross-checked against the direct
/// binary-min polymorphism check.
pub fn is_min_ordering(g: &Graph, order: &VertexOrder) -> Result<Option<Violation>> {
    if order.len() != g.len() {
        return Err(Error::NotPermutation(
            "order does not cover the graph".into(),
        ));
    }
    let underbar = underbar_violation(g, order);
    let direct = binary_min_violation(g, order);
    if underbar.is_some() != direct.is_some() {
        return Err(Error::SelfCheck(
            "under-bar and binary-min checks disagree".into(),
        ));
    }
    Ok(underbar)
}

/// False when the newest vertex `w`, placed above the rest of `placed`,
/// completes a violation with vertices already placed.
fn extends(g: &Graph, sides: &Sides, rank: &[usize], placed: &[VertexId], w: VertexId) -> bool {
    let le = |u: VertexId, v: VertexId| rank[u.index()] <= rank[v.index()];
    for &a in placed {
        for &b in placed {
            if g.adjacent(a, b) {
                continue;
            }
            // every violating quadruple on the placed set that involves w
            for &ap in g.neighbours(b) {
                if rank[ap.index()] == usize::MAX || !le(a, ap) || !sides.same(a, ap) {
                    continue;
                }
                for &bp in g.neighbours(a) {
                    if rank[bp.index()] == usize::MAX || !le(b, bp) {
                        continue;
                    }
                    if [a, b, ap, bp].contains(&w) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Calls `visit` on every min-ordering of `g` in lexicographic order of the
/// bottom-up vertex sequence, until `visit` returns false.
pub fn for_each_min_ordering(g: &Graph, mut visit: impl FnMut(&VertexOrder) -> bool) {
    let n = g.len();
    let mut rank = vec![usize::MAX; n];
    let mut placed: Vec<VertexId> = Vec::with_capacity(n);
    let sides = Sides::of(g);
    fn go(
        g: &Graph,
        sides: &Sides,
        rank: &mut Vec<usize>,
        placed: &mut Vec<VertexId>,
        visit: &mut dyn FnMut(&VertexOrder) -> bool,
    ) -> bool {
        let n = g.len();
        if placed.len() == n {
            let order = VertexOrder::new(placed.clone(), n).expect("placement is a permutation");
            return visit(&order);
        }
        for w in g.vertices() {
            if rank[w.index()] != usize::MAX {
                continue;
            }
            rank[w.index()] = placed.len();
            placed.push(w);
            let ok = extends(g, sides, rank, placed, w);
            let go_on = !ok || go(g, sides, rank, placed, visit);
            placed.pop();
            rank[w.index()] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
    go(g, &sides, &mut rank, &mut placed, &mut visit);
}

/// The lexicographically first min-ordering of `g`, if any.
pub fn find_min_ordering(g: &Graph) -> Result<Option<MinOrdering>> {
    let mut found = None;
    for_each_min_ordering(g, |o| {
        found = Some(o.clone());
        false
    });
    let Some(order) = found else {
        return Ok(None);
    };
    if is_min_ordering(g, &order)?.is_some() {
        return Err(Error::SelfCheck(
            "backtracking produced a non-min-ordering".into(),
        ));
    }
    Ok(Some(MinOrdering {
        graph: g.clone(),
        order,
    }))
}

/// Moves the leaf `leaf` up to just above the highest neighbour of its
/// unique neighbour (other than the leaf itself). Left unchanged when the
/// leaf is already above it or the neighbour has no other neighbours; moving
/// a leaf down can break the min-ordering.
pub fn leaf_lift(m: &MinOrdering, leaf: VertexId) -> Result<MinOrdering> {
    let g = &m.graph;
    if leaf.index() >= g.len() {
        return Err(Error::UnknownVertex(leaf.to_string()));
    }
    if !g.is_leaf(leaf) || g.has_loop(leaf) {
        return Err(Error::NotALeaf(g.name(leaf).to_string()));
    }
    let hub = g.neighbours(leaf)[0];
    let Some(highest) = g
        .neighbours(hub)
        .iter()
        .copied()
        .filter(|&v| v != leaf)
        .max_by_key(|&v| m.order.rank(v))
    else {
        return Ok(m.clone());
    };
    if m.order.less(highest, leaf) {
        return Ok(m.clone());
    }
    let mut seq: Vec<VertexId> = m
        .order
        .as_slice()
        .iter()
        .copied()
        .filter(|&v| v != leaf)
        .collect();
    let at = seq
        .iter()
        .position(|&v| v == highest)
        .expect("neighbour is ordered")
        + 1;
    seq.insert(at, leaf);
    let order = VertexOrder::new(seq, g.len())?;
    if is_min_ordering(g, &order)?.is_some() {
        return Err(Error::SelfCheck(
            "lifted order is not a min-ordering".into(),
        ));
    }
    Ok(MinOrdering {
        graph: g.clone(),
        order,
    })
}
