//! (List) homomorphisms and (list) switch-homomorphisms between br-graphs,
//! cores and switch-cores.

use crate::csp::{self, Network, ValueOrder, MAX_VALUES};
use crate::error::{Error, Result};
use crate::graph::{BrGraph, Colour, VertexId};
use crate::switching::{switch_at, switching_graph, Involution, SwitchGraph, SwitchSet};

/// A list `L(v)` of allowed images for every vertex of the source graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<VertexId>>,
}

impl ListAssignment {
    pub fn full(source_len: usize, target_len: usize) -> ListAssignment {
        let all: Vec<VertexId> = (0..target_len).map(VertexId::from).collect();
        ListAssignment {
            lists: vec![all; source_len],
        }
    }

    pub fn new(lists: Vec<Vec<VertexId>>) -> ListAssignment {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    pub fn list(&self, v: VertexId) -> &[VertexId] {
        &self.lists[v.index()]
    }

    pub fn set(&mut self, v: VertexId, mut list: Vec<VertexId>) {
        list.sort();
        list.dedup();
        self.lists[v.index()] = list;
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// True when every list is closed under `s`.
    pub fn is_closed_under(&self, s: &Involution) -> bool {
        self.first_unclosed(s).is_none()
    }

    fn first_unclosed(&self, s: &Involution) -> Option<usize> {
        self.lists
            .iter()
            .position(|l| l.iter().any(|&x| l.binary_search(&s.apply(x)).is_err()))
    }

    fn validate(&self, g: &BrGraph, h: &BrGraph) -> Result<()> {
        if self.lists.len() != g.len() {
            return Err(Error::VertexSetMismatch(format!(
                "{} lists for {} source vertices",
                self.lists.len(),
                g.len()
            )));
        }
        for (v, list) in self.lists.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::EmptyList(g.name(VertexId::from(v)).to_string()));
            }
            if let Some(bad) = list.iter().find(|x| x.index() >= h.len()) {
                return Err(Error::UnknownVertex(bad.to_string()));
            }
        }
        Ok(())
    }
}

/// A vertex map `V(G) -> V(H)`; `map[v]` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub map: Vec<VertexId>,
}

impl Homomorphism {
    pub fn image(&self, v: VertexId) -> VertexId {
        self.map[v.index()]
    }
}

/// Checks that `map` sends blue edges to blue edges and red to red.
pub fn is_homomorphism(g: &BrGraph, h: &BrGraph, map: &[VertexId]) -> bool {
    map.len() == g.len()
        && map.iter().all(|m| m.index() < h.len())
        && Colour::BOTH.iter().all(|&c| {
            g.edges(c)
                .into_iter()
                .all(|(u, v)| h.has(c, map[u.index()], map[v.index()]))
        })
}

struct HomNetwork {
    /// Non-loop neighbours in the source, per colour.
    source: [Vec<Vec<usize>>; 2],
    /// Target adjacency rows, per colour.
    target: [Vec<u64>; 2],
}

impl Network for HomNetwork {
    fn num_vars(&self) -> usize {
        self.source[0].len()
    }

    fn for_each_arc(&self, y: usize, f: &mut dyn FnMut(usize, &[u64])) {
        for c in 0..2 {
            for &x in &self.source[c][y] {
                f(x, &self.target[c]);
            }
        }
    }
}

fn colour_slot(c: Colour) -> usize {
    match c {
        Colour::Blue => 0,
        Colour::Red => 1,
    }
}

/// A list-respecting colour-preserving homomorphism `g -> h`, if any.
///
/// Arc consistency over the blue and red relations, then backtracking on the
/// smallest domain with values tried in increasing id order.
pub fn list_hom(g: &BrGraph, h: &BrGraph, lists: &ListAssignment) -> Result<Option<Homomorphism>> {
    lists.validate(g, h)?;
    if h.len() > MAX_VALUES {
        return Err(Error::TooLarge {
            size: h.len(),
            limit: MAX_VALUES,
        });
    }
    let mut domains: Vec<u64> = g
        .vertices()
        .map(|v| {
            lists
                .list(v)
                .iter()
                .fold(0u64, |acc, x| acc | (1u64 << x.0))
        })
        .collect();
    let mut source: [Vec<Vec<usize>>; 2] = [vec![Vec::new(); g.len()], vec![Vec::new(); g.len()]];
    for c in Colour::BOTH {
        let loops = h
            .vertices()
            .filter(|&x| h.has(c, x, x))
            .fold(0u64, |acc, x| acc | (1u64 << x.0));
        for v in g.vertices() {
            for &w in g.neighbours(c, v) {
                if w == v {
                    domains[v.index()] &= loops;
                } else {
                    source[colour_slot(c)][v.index()].push(w.index());
                }
            }
        }
    }
    let net = HomNetwork {
        source,
        target: [
            h.adjacency_bits(Colour::Blue),
            h.adjacency_bits(Colour::Red),
        ],
    };
    let found = csp::solve(&net, domains, &ValueOrder::Ascending).map(|sol| Homomorphism {
        map: sol.into_iter().map(|x| VertexId(x as u32)).collect(),
    });
    if let Some(f) = &found {
        if !is_homomorphism(g, h, &f.map) {
            return Err(Error::SelfCheck(
                "solver returned a non-homomorphism".into(),
            ));
        }
    }
    Ok(found)
}

/// A switch-homomorphism: switching `g` at `switch_set` makes `map` a
/// homomorphism to the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchHom {
    pub switch_set: SwitchSet,
    pub map: Homomorphism,
}

/// Checks a claimed switch-homomorphism `g -> h`.
pub fn is_switch_hom(g: &BrGraph, h: &BrGraph, sh: &SwitchHom) -> Result<bool> {
    let switched = switch_at(g, &sh.switch_set)?;
    Ok(is_homomorphism(&switched, h, &sh.map.map))
}

fn switch_hom_via(
    g: &BrGraph,
    h: &BrGraph,
    pg: &SwitchGraph,
    lists: &ListAssignment,
) -> Result<Option<SwitchHom>> {
    let Some(psi) = list_hom(g, &pg.graph, lists)? else {
        return Ok(None);
    };
    let mut mask = vec![false; g.len()];
    let mut map = Vec::with_capacity(g.len());
    for v in g.vertices() {
        let (base, copy) = pg.project(psi.image(v));
        mask[v.index()] = copy == 2;
        map.push(base);
    }
    let sh = SwitchHom {
        switch_set: SwitchSet::from_mask(mask),
        map: Homomorphism { map },
    };
    if !is_switch_hom(g, h, &sh)? {
        return Err(Error::SelfCheck(
            "projected map is not a switch-homomorphism".into(),
        ));
    }
    Ok(Some(sh))
}

/// A switch-homomorphism `g -> h`, found as a homomorphism `g -> P(h)`.
pub fn switch_hom(g: &BrGraph, h: &BrGraph) -> Result<Option<SwitchHom>> {
    let pg = switching_graph(h);
    let lists = ListAssignment::full(g.len(), pg.graph.len());
    switch_hom_via(g, h, &pg, &lists)
}

/// A switch-homomorphism `g -> h` respecting lists over `V(P(h))`. Every
/// list must be closed under the switch map.
pub fn list_switch_hom(
    g: &BrGraph,
    h: &BrGraph,
    lists: &ListAssignment,
) -> Result<Option<SwitchHom>> {
    let pg = switching_graph(h);
    lists.validate(g, &pg.graph)?;
    if let Some(v) = lists.first_unclosed(&pg.switch) {
        return Err(Error::NonSymmetricList(
            g.name(VertexId::from(v)).to_string(),
        ));
    }
    switch_hom_via(g, h, &pg, lists)
}

/// An induced subgraph together with a map onto it from the whole graph.
#[derive(Clone, Debug)]
pub struct Retract {
    /// Vertices of the subgraph, in increasing id order.
    pub vertices: Vec<VertexId>,
    pub graph: BrGraph,
    /// For a core, a homomorphism into `vertices`; for a switch-core the
    /// switching and map of a switch-homomorphism.
    pub switch_set: Option<SwitchSet>,
    pub map: Homomorphism,
}

/// Subsets of `0..n` by increasing size, lexicographic within a size.
fn subsets_by_size(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..=n).flat_map(move |k| Combinations::new(n, k))
}

struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

fn ids(subset: &[usize]) -> Vec<VertexId> {
    subset.iter().map(|&i| VertexId::from(i)).collect()
}

/// Smallest induced subgraph `C` with a homomorphism `h -> C`, found by
/// trying retractions onto subsets by size, then lexicographically.
pub fn core_retract(h: &BrGraph) -> Result<Retract> {
    for subset in subsets_by_size(h.len()) {
        let members = ids(&subset);
        let mut lists = ListAssignment::new(vec![members.clone(); h.len()]);
        for &c in &members {
            lists.set(c, vec![c]);
        }
        if h.is_empty() {
            return Ok(Retract {
                vertices: Vec::new(),
                graph: h.clone(),
                switch_set: None,
                map: Homomorphism { map: Vec::new() },
            });
        }
        if members.is_empty() {
            continue;
        }
        if let Some(map) = list_hom(h, h, &lists)? {
            return Ok(Retract {
                graph: h.induced(&members)?,
                vertices: members,
                switch_set: None,
                map,
            });
        }
    }
    unreachable!("the whole graph retracts onto itself")
}

pub fn core_of(h: &BrGraph) -> Result<BrGraph> {
    Ok(core_retract(h)?.graph)
}

/// Smallest induced subgraph `C` with a switch-homomorphism `h -> C`.
///
/// Each candidate is tested as a list homomorphism `h -> P(h)` with
/// `L(c) = {(c,1), (c,2)}` on `C` and `C x {1,2}` elsewhere. The returned
/// map sends vertices into `h`, with images inside `C`.
pub fn switch_core_retract(h: &BrGraph) -> Result<Retract> {
    if h.is_empty() {
        return Ok(Retract {
            vertices: Vec::new(),
            graph: h.clone(),
            switch_set: Some(SwitchSet::empty(0)),
            map: Homomorphism { map: Vec::new() },
        });
    }
    let pg = switching_graph(h);
    for subset in subsets_by_size(h.len()).filter(|s| !s.is_empty()) {
        let members = ids(&subset);
        let both: Vec<VertexId> = members
            .iter()
            .flat_map(|&c| [pg.lift(c, 1), pg.lift(c, 2)])
            .collect();
        let mut lists = ListAssignment::new(vec![both; h.len()]);
        for &c in &members {
            lists.set(c, vec![pg.lift(c, 1), pg.lift(c, 2)]);
        }
        if let Some(sh) = switch_hom_via(h, h, &pg, &lists)? {
            return Ok(Retract {
                graph: h.induced(&members)?,
                vertices: members,
                switch_set: Some(sh.switch_set),
                map: sh.map,
            });
        }
    }
    unreachable!("the whole graph switch-retracts onto itself")
}

pub fn switch_core_of(h: &BrGraph) -> Result<BrGraph> {
    Ok(switch_core_retract(h)?.graph)
}

/// Smallest induced subgraph `C` of `g` with a retraction `r: g -> C` that
/// keeps every vertex inside its orbit under `s` (`r(x)` is `x` or `s(x)`).
/// This is the core of `g` with all `s`-closed lists added as unary
/// relations; for a switching graph it identifies clone pairs.
pub fn symmetric_list_core(g: &BrGraph, s: &Involution) -> Result<Retract> {
    if s.len() != g.len() {
        return Err(Error::VertexSetMismatch(
            "involution does not match graph".into(),
        ));
    }
    let orbits: Vec<Vec<VertexId>> = g
        .vertices()
        .filter(|&v| s.apply(v) >= v)
        .map(|v| {
            if s.apply(v) == v {
                vec![v]
            } else {
                vec![v, s.apply(v)]
            }
        })
        .collect();
    // every choice of a nonempty part of each orbit
    let mut candidates: Vec<Vec<VertexId>> = vec![Vec::new()];
    for orbit in &orbits {
        let options: Vec<Vec<VertexId>> = match orbit.as_slice() {
            [a] => vec![vec![*a]],
            [a, b] => vec![vec![*a], vec![*b], vec![*a, *b]],
            _ => unreachable!(),
        };
        candidates = candidates
            .iter()
            .flat_map(|c| {
                options.iter().map(move |o| {
                    let mut next = c.clone();
                    next.extend(o);
                    next
                })
            })
            .collect();
    }
    for c in candidates.iter_mut() {
        c.sort();
    }
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for members in candidates {
        let lists = ListAssignment::new(
            g.vertices()
                .map(|x| {
                    [x, s.apply(x)]
                        .into_iter()
                        .filter(|y| members.binary_search(y).is_ok())
                        .collect()
                })
                .collect(),
        );
        let mut pinned = lists.clone();
        for &c in &members {
            pinned.set(c, vec![c]);
        }
        if let Some(map) = list_hom(g, g, &pinned)? {
            return Ok(Retract {
                graph: g.induced(&members)?,
                vertices: members,
                switch_set: None,
                map,
            });
        }
    }
    unreachable!("the identity retraction always exists")
}

/// Number of coloured edge slots: a purple edge counts twice, a loop once
/// per colour it carries. This is the edge count used against the two-edge
/// threshold for `sHom`.
pub fn edge_slots(g: &BrGraph) -> usize {
    g.edges(Colour::Blue).len() + g.edges(Colour::Red).len()
}

/// Edge slots of each connected component, ordered by lowest vertex.
/// A target component receives whole components of the input, so the
/// two-slot threshold applies per component.
pub fn component_edge_slots(g: &BrGraph) -> Vec<usize> {
    let under = g.underlying();
    let mut comp = vec![usize::MAX; g.len()];
    let mut slots = Vec::new();
    for start in g.vertices() {
        if comp[start.index()] != usize::MAX {
            continue;
        }
        let id = slots.len();
        comp[start.index()] = id;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in under.neighbours(v) {
                if comp[w.index()] == usize::MAX {
                    comp[w.index()] = id;
                    stack.push(w);
                }
            }
        }
        slots.push(0);
    }
    for colour in [Colour::Blue, Colour::Red] {
        for (u, _) in g.edges(colour) {
            slots[comp[u.index()]] += 1;
        }
    }
    slots
}

/// Largest number of edge slots a switch-core component may have for
/// `sHom` to be polynomial.
pub const SHOM_TRACTABLE_EDGE_SLOTS: usize = 2;

/// Whether every component stays within the tractable slot count.
pub fn shom_tractable(component_slots: &[usize]) -> bool {
    component_slots
        .iter()
        .all(|&s| s <= SHOM_TRACTABLE_EDGE_SLOTS)
}
