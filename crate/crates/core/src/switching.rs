//! Switching: vertex-set switches, switch-equivalence, the switching graph
//! `P(H)` and the bipartite product `H x P`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{BrGraph, Colour, EdgeKind, VertexId};

/// A set of vertices to switch at, as a membership mask over the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SwitchSet(Vec<bool>);

impl SwitchSet {
    pub fn empty(n: usize) -> SwitchSet {
        SwitchSet(vec![false; n])
    }

    pub fn from_vertices(
        n: usize,
        vertices: impl IntoIterator<Item = VertexId>,
    ) -> Result<SwitchSet> {
        let mut mask = vec![false; n];
        for v in vertices {
            *mask
                .get_mut(v.index())
                .ok_or_else(|| Error::UnknownVertex(v.to_string()))? = true;
        }
        Ok(SwitchSet(mask))
    }

    pub fn from_mask(mask: Vec<bool>) -> SwitchSet {
        SwitchSet(mask)
    }

    pub fn universe_len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0[v.index()]
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        (0..self.0.len())
            .filter(|&i| self.0[i])
            .map(VertexId::from)
            .collect()
    }

    pub fn symmetric_difference(&self, other: &SwitchSet) -> SwitchSet {
        SwitchSet(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }

    pub fn names(&self, g: &BrGraph) -> Vec<String> {
        self.vertices()
            .into_iter()
            .map(|v| g.name(v).to_string())
            .collect()
    }
}

/// Swaps blue and red on every non-loop edge with exactly one endpoint in `s`.
pub fn switch_at(g: &BrGraph, s: &SwitchSet) -> Result<BrGraph> {
    if s.universe_len() != g.len() {
        return Err(Error::VertexSetMismatch(format!(
            "switch set over {} vertices, graph has {}",
            s.universe_len(),
            g.len()
        )));
    }
    let mut out = BrGraph::with_vertices(g.names().iter().cloned())?;
    for (u, v, kind) in g.all_edges() {
        let crossing = u != v && s.contains(u) != s.contains(v);
        let kind = match (crossing, kind) {
            (true, EdgeKind::Blue) => EdgeKind::Red,
            (true, EdgeKind::Red) => EdgeKind::Blue,
            (_, k) => k,
        };
        out.add_edge(u, v, kind);
    }
    Ok(out)
}

/// A same/opposite-side constraint between two vertices of a cut.
#[derive(Clone, Copy, Debug)]
struct CutConstraint {
    u: VertexId,
    v: VertexId,
    opposite: bool,
}

/// Labels vertices 0/1 satisfying every constraint, the least vertex of each
/// constraint component getting 0. `None` when the system is inconsistent.
fn solve_cut(n: usize, constraints: &[CutConstraint]) -> Option<Vec<bool>> {
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for c in constraints {
        adj[c.u.index()].push((c.v.index(), c.opposite));
        adj[c.v.index()].push((c.u.index(), c.opposite));
    }
    let mut label: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let lu = label[u].unwrap();
            for &(w, opposite) in &adj[u] {
                let want = lu ^ opposite;
                match label[w] {
                    None => {
                        label[w] = Some(want);
                        queue.push_back(w);
                    }
                    Some(lw) if lw != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(label.into_iter().map(|l| l.unwrap()).collect())
}

/// Reorders `g2` so its vertex ids line up with the names of `g1`.
pub fn align_by_names(g1: &BrGraph, g2: &BrGraph) -> Result<BrGraph> {
    if g1.len() != g2.len() {
        return Err(Error::VertexSetMismatch(format!(
            "{} vs {} vertices",
            g1.len(),
            g2.len()
        )));
    }
    let mut perm = Vec::with_capacity(g1.len());
    for name in g1.names() {
        perm.push(g2.vertex(name).ok_or_else(|| {
            Error::VertexSetMismatch(format!("`{name}` missing from second graph"))
        })?);
    }
    let mut out = BrGraph::with_vertices(g1.names().iter().cloned())?;
    for u in g1.vertices() {
        for v in g1.vertices().filter(|&v| v >= u) {
            let (pu, pv) = (perm[u.index()], perm[v.index()]);
            for colour in Colour::BOTH {
                if g2.has(colour, pu, pv) {
                    out.add_coloured(colour, u, v);
                }
            }
        }
    }
    Ok(out)
}

/// A switch set taking `g1` to `g2`, if any. Vertices are matched by name.
/// The returned set is the one where the least vertex of every constraint
/// component stays unswitched.
pub fn are_switch_equivalent(g1: &BrGraph, g2: &BrGraph) -> Result<Option<SwitchSet>> {
    let g2 = align_by_names(g1, g2)?;
    let mut constraints = Vec::new();
    for u in g1.vertices() {
        for v in g1.vertices().filter(|&v| v >= u) {
            let (k1, k2) = (g1.kind(u, v), g2.kind(u, v));
            if u == v {
                if k1 != k2 {
                    return Ok(None);
                }
                continue;
            }
            match (k1, k2) {
                (None, None) | (Some(EdgeKind::Purple), Some(EdgeKind::Purple)) => {}
                (Some(a), Some(b)) if a == b => constraints.push(CutConstraint {
                    u,
                    v,
                    opposite: false,
                }),
                (Some(EdgeKind::Blue), Some(EdgeKind::Red))
                | (Some(EdgeKind::Red), Some(EdgeKind::Blue)) => constraints.push(CutConstraint {
                    u,
                    v,
                    opposite: true,
                }),
                _ => return Ok(None),
            }
        }
    }
    let Some(mask) = solve_cut(g1.len(), &constraints) else {
        return Ok(None);
    };
    let s = SwitchSet::from_mask(mask);
    if switch_at(g1, &s)? != g2 {
        return Err(Error::SelfCheck(
            "switch set does not reproduce the target graph".into(),
        ));
    }
    Ok(Some(s))
}

/// A switch set after which every pure edge of `g` is red (so blue is
/// contained in red), if one exists.
pub fn normalize_blue_into_red(g: &BrGraph) -> Option<SwitchSet> {
    let constraints: Vec<CutConstraint> = g
        .all_edges()
        .into_iter()
        .filter(|&(u, v, _)| u != v)
        .filter_map(|(u, v, kind)| match kind {
            EdgeKind::Purple => None,
            EdgeKind::Red => Some(CutConstraint {
                u,
                v,
                opposite: false,
            }),
            EdgeKind::Blue => Some(CutConstraint {
                u,
                v,
                opposite: true,
            }),
        })
        .collect();
    // A pure blue loop can never be made red.
    if g.vertices().any(|v| g.kind(v, v) == Some(EdgeKind::Blue)) {
        return None;
    }
    solve_cut(g.len(), &constraints).map(SwitchSet::from_mask)
}

/// A permutation of the vertex set that is its own inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution(Vec<VertexId>);

impl Involution {
    pub fn new(map: Vec<VertexId>) -> Result<Involution> {
        let n = map.len();
        for (i, &m) in map.iter().enumerate() {
            if m.index() >= n || map[m.index()].index() != i {
                return Err(Error::NotPermutation(format!(
                    "not an involution at vertex {i}"
                )));
            }
        }
        Ok(Involution(map))
    }

    pub fn identity(n: usize) -> Involution {
        Involution((0..n).map(VertexId::from).collect())
    }

    #[inline]
    pub fn apply(&self, v: VertexId) -> VertexId {
        self.0[v.index()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    /// Checks that the map preserves both colours of `g`.
    pub fn is_automorphism_of(&self, g: &BrGraph) -> bool {
        self.len() == g.len()
            && Colour::BOTH.iter().all(|&c| {
                g.edges(c)
                    .into_iter()
                    .all(|(u, v)| g.has(c, self.apply(u), self.apply(v)))
            })
    }

    /// Pairs `(v, s(v))` with `v < s(v)`.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(i, m)| i < m.index())
            .map(|(i, &m)| (VertexId::from(i), m))
            .collect()
    }
}

/// The switching graph of a br-graph together with its switch map.
///
/// Vertex `(v, 1)` has id `v` and `(v, 2)` has id `n + v`; names are
/// `<name>.1` and `<name>.2`.
#[derive(Clone, Debug)]
pub struct SwitchGraph {
    pub base: BrGraph,
    pub graph: BrGraph,
    pub switch: Involution,
}

impl SwitchGraph {
    pub fn lift(&self, v: VertexId, copy: u8) -> VertexId {
        debug_assert!(copy == 1 || copy == 2);
        VertexId::from(v.index() + (copy as usize - 1) * self.base.len())
    }

    /// `(v, copy)` for a vertex of the switching graph, copy in `{1, 2}`.
    pub fn project(&self, x: VertexId) -> (VertexId, u8) {
        let n = self.base.len();
        if x.index() < n {
            (x, 1)
        } else {
            (VertexId::from(x.index() - n), 2)
        }
    }
}

/// Builds `P(H)`: two copies of `H`, and for every edge `uv` of one colour
/// the edges `(u,1)(v,2)` and `(u,2)(v,1)` of the other colour.
pub fn switching_graph(h: &BrGraph) -> SwitchGraph {
    let n = h.len();
    let mut graph = BrGraph::new();
    for copy in ["1", "2"] {
        for name in h.names() {
            graph
                .add_vertex(format!("{name}.{copy}"))
                .expect("copy names are distinct when base names are");
        }
    }
    let lift = |v: VertexId, copy: usize| VertexId::from(v.index() + copy * n);
    for colour in Colour::BOTH {
        for (u, v) in h.edges(colour) {
            graph.add_coloured(colour, lift(u, 0), lift(v, 0));
            graph.add_coloured(colour, lift(u, 1), lift(v, 1));
            graph.add_coloured(colour.other(), lift(u, 0), lift(v, 1));
            graph.add_coloured(colour.other(), lift(u, 1), lift(v, 0));
        }
    }
    let switch = Involution(
        (0..2 * n)
            .map(|i| VertexId::from((i + n) % (2 * n)))
            .collect(),
    );
    SwitchGraph {
        base: h.clone(),
        graph,
        switch,
    }
}

/// `H x P`: vertices `(v, i)` for `i` in `{0, 1}`, with `(u,i)(v,1-i)` of a
/// colour for every edge `uv` of that colour.
///
/// Vertex `(v, i)` has id `i * n + v` and name `<name>:<i>`.
#[derive(Clone, Debug)]
pub struct BipartiteProduct {
    pub base: BrGraph,
    pub graph: BrGraph,
    /// The parity switch `(v, i) -> (v, 1 - i)`.
    pub parity_switch: Involution,
}

impl BipartiteProduct {
    pub fn lift(&self, v: VertexId, parity: u8) -> VertexId {
        VertexId::from(v.index() + parity as usize * self.base.len())
    }

    /// `(pi_H(x), pi_P(x))`.
    pub fn project(&self, x: VertexId) -> (VertexId, u8) {
        let n = self.base.len();
        if x.index() < n {
            (x, 0)
        } else {
            (VertexId::from(x.index() - n), 1)
        }
    }
}

pub fn product_with_p(h: &BrGraph) -> BipartiteProduct {
    let n = h.len();
    let mut graph = BrGraph::new();
    for parity in 0..2 {
        for name in h.names() {
            graph
                .add_vertex(format!("{name}:{parity}"))
                .expect("product names are distinct when base names are");
        }
    }
    for colour in Colour::BOTH {
        for (u, v) in h.edges(colour) {
            graph.add_coloured(colour, u, VertexId::from(v.index() + n));
            graph.add_coloured(colour, VertexId::from(u.index() + n), v);
        }
    }
    let parity_switch = Involution(
        (0..2 * n)
            .map(|i| VertexId::from((i + n) % (2 * n)))
            .collect(),
    );
    BipartiteProduct {
        base: h.clone(),
        graph,
        parity_switch,
    }
}
