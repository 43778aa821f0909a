//! Blue/red graphs, plain graphs and the small utilities built on them.
//!
//! Vertices are dense integer ids `0..n`; names are carried alongside for
//! input and output only. Edges are unordered pairs and loops are stored as
//! `(v, v)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vertex identifier, an index into the owning graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    #[inline]
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Colour {
    Blue,
    Red,
}

impl Colour {
    pub const BOTH: [Colour; 2] = [Colour::Blue, Colour::Red];

    pub fn other(self) -> Colour {
        match self {
            Colour::Blue => Colour::Red,
            Colour::Red => Colour::Blue,
        }
    }
}

/// The colour set of a single edge as written in input files.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EdgeKind {
    Blue,
    Red,
    Purple,
}

impl EdgeKind {
    pub fn code(self) -> char {
        match self {
            EdgeKind::Blue => 'b',
            EdgeKind::Red => 'r',
            EdgeKind::Purple => 'p',
        }
    }

    pub fn from_code(s: &str) -> Option<EdgeKind> {
        match s {
            "b" => Some(EdgeKind::Blue),
            "r" => Some(EdgeKind::Red),
            "p" => Some(EdgeKind::Purple),
            _ => None,
        }
    }

    pub fn from_colours(blue: bool, red: bool) -> Option<EdgeKind> {
        match (blue, red) {
            (true, true) => Some(EdgeKind::Purple),
            (true, false) => Some(EdgeKind::Blue),
            (false, true) => Some(EdgeKind::Red),
            (false, false) => None,
        }
    }

    pub fn has(self, colour: Colour) -> bool {
        matches!(
            (self, colour),
            (EdgeKind::Purple, _) | (EdgeKind::Blue, Colour::Blue) | (EdgeKind::Red, Colour::Red)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Names {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl Names {
    fn unnamed(n: usize) -> Names {
        let mut names = Names::default();
        for i in 0..n {
            names
                .push(format!("v{i}"))
                .expect("generated names are distinct");
        }
        names
    }

    fn push(&mut self, name: String) -> Result<VertexId> {
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let id = VertexId::from(self.names.len());
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }
}

/// Symmetric adjacency relation stored both as a dense matrix and as sorted
/// neighbour lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Adjacency {
    n: usize,
    matrix: Vec<bool>,
    lists: Vec<Vec<VertexId>>,
}

impl Adjacency {
    fn grow(&mut self) {
        let n = self.n + 1;
        let mut matrix = vec![false; n * n];
        for u in 0..self.n {
            matrix[u * n..u * n + self.n]
                .copy_from_slice(&self.matrix[u * self.n..(u + 1) * self.n]);
        }
        self.matrix = matrix;
        self.lists.push(Vec::new());
        self.n = n;
    }

    fn with_len(n: usize) -> Adjacency {
        Adjacency {
            n,
            matrix: vec![false; n * n],
            lists: vec![Vec::new(); n],
        }
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = (u.index(), v.index());
        if self.matrix[a * self.n + b] {
            return false;
        }
        self.matrix[a * self.n + b] = true;
        self.matrix[b * self.n + a] = true;
        insert_sorted(&mut self.lists[a], v);
        if a != b {
            insert_sorted(&mut self.lists[b], u);
        }
        true
    }

    fn remove(&mut self, u: VertexId, v: VertexId) {
        let (a, b) = (u.index(), v.index());
        self.matrix[a * self.n + b] = false;
        self.matrix[b * self.n + a] = false;
        self.lists[a].retain(|&w| w != v);
        self.lists[b].retain(|&w| w != u);
    }

    #[inline]
    fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.matrix[u.index() * self.n + v.index()]
    }

    fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (u, list) in self.lists.iter().enumerate() {
            for &v in list {
                if u <= v.index() {
                    out.push((VertexId::from(u), v));
                }
            }
        }
        out
    }

    fn bits(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bit rows need at most 64 vertices");
        self.lists
            .iter()
            .map(|l| l.iter().fold(0u64, |acc, v| acc | (1u64 << v.0)))
            .collect()
    }
}

fn insert_sorted(list: &mut Vec<VertexId>, v: VertexId) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

/// A graph with loops allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    names: Names,
    adj: Adjacency,
}

impl Graph {
    pub fn new() -> Graph {
        Graph::default()
    }

    /// A graph on `n` vertices named `v0 .. v{n-1}` and no edges.
    pub fn unnamed(n: usize) -> Graph {
        Graph {
            names: Names::unnamed(n),
            adj: Adjacency::with_len(n),
        }
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let id = self.names.push(name.into())?;
        self.adj.grow();
        Ok(id)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj.insert(u, v);
    }

    pub fn len(&self) -> usize {
        self.names.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).map(VertexId::from)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<VertexId> {
        self.vertex(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.contains(u, v)
    }

    pub fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adj.lists[v.index()]
    }

    /// Number of distinct neighbours; a loop counts once.
    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbours(v).len()
    }

    pub fn has_loop(&self, v: VertexId) -> bool {
        self.adjacent(v, v)
    }

    /// A vertex with exactly one neighbour, which is not itself.
    pub fn is_leaf(&self, v: VertexId) -> bool {
        matches!(self.neighbours(v), [w] if *w != v)
    }

    /// Edges as pairs `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adj.edges()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.edges().len()
    }

    /// Neighbourhood rows as bit masks. Panics beyond 64 vertices.
    pub fn adjacency_bits(&self) -> Vec<u64> {
        self.adj.bits()
    }

    /// Proper 2-colouring, canonical on the least vertex of each component.
    pub fn bipartition(&self) -> Option<Parity> {
        two_colour(self.len(), |v| self.neighbours(v))
    }

    /// The graph viewed as a red br-graph.
    pub fn to_red_brgraph(&self) -> BrGraph {
        BrGraph {
            names: self.names.clone(),
            blue: Adjacency::with_len(self.len()),
            red: self.adj.clone(),
        }
    }
}

/// A pair of graphs, blue and red, on one vertex set. Purple edges are the
/// pairs present in both.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BrGraph {
    names: Names,
    blue: Adjacency,
    red: Adjacency,
}

impl BrGraph {
    pub fn new() -> BrGraph {
        BrGraph::default()
    }

    /// A br-graph on `n` vertices named `v0 .. v{n-1}` and no edges.
    pub fn unnamed(n: usize) -> BrGraph {
        BrGraph {
            names: Names::unnamed(n),
            blue: Adjacency::with_len(n),
            red: Adjacency::with_len(n),
        }
    }

    pub fn with_vertices<I, S>(names: I) -> Result<BrGraph>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = BrGraph::new();
        for name in names {
            g.add_vertex(name)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let id = self.names.push(name.into())?;
        self.blue.grow();
        self.red.grow();
        Ok(id)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, kind: EdgeKind) {
        if kind.has(Colour::Blue) {
            self.blue.insert(u, v);
        }
        if kind.has(Colour::Red) {
            self.red.insert(u, v);
        }
    }

    pub fn add_coloured(&mut self, colour: Colour, u: VertexId, v: VertexId) {
        self.adjacency_mut(colour).insert(u, v);
    }

    pub fn remove_coloured(&mut self, colour: Colour, u: VertexId, v: VertexId) {
        self.adjacency_mut(colour).remove(u, v);
    }

    /// Adds an edge between named vertices, declaring them if needed.
    pub fn add_named_edge(&mut self, u: &str, v: &str, kind: EdgeKind) -> VertexId {
        let u = self.vertex_or_insert(u);
        let v = self.vertex_or_insert(v);
        self.add_edge(u, v, kind);
        v
    }

    fn vertex_or_insert(&mut self, name: &str) -> VertexId {
        match self.vertex(name) {
            Some(v) => v,
            None => self.add_vertex(name).expect("name is fresh"),
        }
    }

    fn adjacency(&self, colour: Colour) -> &Adjacency {
        match colour {
            Colour::Blue => &self.blue,
            Colour::Red => &self.red,
        }
    }

    fn adjacency_mut(&mut self, colour: Colour) -> &mut Adjacency {
        match colour {
            Colour::Blue => &mut self.blue,
            Colour::Red => &mut self.red,
        }
    }

    pub fn len(&self) -> usize {
        self.names.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).map(VertexId::from)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.names.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<VertexId> {
        self.vertex(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    #[inline]
    pub fn has(&self, colour: Colour, u: VertexId, v: VertexId) -> bool {
        self.adjacency(colour).contains(u, v)
    }

    #[inline]
    pub fn has_blue(&self, u: VertexId, v: VertexId) -> bool {
        self.blue.contains(u, v)
    }

    #[inline]
    pub fn has_red(&self, u: VertexId, v: VertexId) -> bool {
        self.red.contains(u, v)
    }

    pub fn is_purple(&self, u: VertexId, v: VertexId) -> bool {
        self.has_blue(u, v) && self.has_red(u, v)
    }

    pub fn kind(&self, u: VertexId, v: VertexId) -> Option<EdgeKind> {
        EdgeKind::from_colours(self.has_blue(u, v), self.has_red(u, v))
    }

    pub fn neighbours(&self, colour: Colour, v: VertexId) -> &[VertexId] {
        &self.adjacency(colour).lists[v.index()]
    }

    /// Edges of one colour as pairs `(u, v)` with `u <= v`.
    pub fn edges(&self, colour: Colour) -> Vec<(VertexId, VertexId)> {
        self.adjacency(colour).edges()
    }

    /// Every adjacent pair once, with its colour set.
    pub fn all_edges(&self) -> Vec<(VertexId, VertexId, EdgeKind)> {
        self.underlying()
            .edges()
            .into_iter()
            .map(|(u, v)| (u, v, self.kind(u, v).expect("edge of underlying graph")))
            .collect()
    }

    pub fn adjacency_bits(&self, colour: Colour) -> Vec<u64> {
        self.adjacency(colour).bits()
    }

    pub fn colour_graph(&self, colour: Colour) -> Graph {
        Graph {
            names: self.names.clone(),
            adj: self.adjacency(colour).clone(),
        }
    }

    pub fn red_graph(&self) -> Graph {
        self.colour_graph(Colour::Red)
    }

    pub fn blue_graph(&self) -> Graph {
        self.colour_graph(Colour::Blue)
    }

    /// The graph whose edges are the blue and the red edges together.
    pub fn underlying(&self) -> Graph {
        let mut adj = self.red.clone();
        for (u, v) in self.blue.edges() {
            adj.insert(u, v);
        }
        Graph {
            names: self.names.clone(),
            adj,
        }
    }

    pub fn has_loop(&self, v: VertexId) -> bool {
        self.has_blue(v, v) || self.has_red(v, v)
    }

    pub fn is_irreflexive(&self) -> bool {
        self.vertices().all(|v| !self.has_loop(v))
    }

    pub fn first_loop(&self) -> Option<VertexId> {
        self.vertices().find(|&v| self.has_loop(v))
    }

    /// Parity of a proper 2-colouring of the underlying graph, if one exists.
    pub fn bipartition(&self) -> Option<Parity> {
        self.underlying().bipartition()
    }

    /// The subgraph induced on `subset`. Vertices keep their names and are
    /// renumbered in increasing id order.
    pub fn induced(&self, subset: &[VertexId]) -> Result<BrGraph> {
        let mut keep: Vec<VertexId> = subset.to_vec();
        keep.sort();
        keep.dedup();
        if let Some(bad) = keep.iter().find(|v| v.index() >= self.len()) {
            return Err(Error::UnknownVertex(bad.to_string()));
        }
        let mut out = BrGraph::new();
        for &v in &keep {
            out.add_vertex(self.name(v))?;
        }
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate().skip(i) {
                for colour in Colour::BOTH {
                    if self.has(colour, u, v) {
                        out.add_coloured(colour, VertexId::from(i), VertexId::from(j));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Same structure with vertices renamed through `rename`.
    pub fn renamed(&self, mut rename: impl FnMut(&str) -> String) -> Result<BrGraph> {
        let mut names = Names::default();
        for name in &self.names.names {
            names.push(rename(name))?;
        }
        Ok(BrGraph {
            names,
            blue: self.blue.clone(),
            red: self.red.clone(),
        })
    }
}

/// Proper 2-colouring of a graph, `0` or `1` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parity(Vec<u8>);

impl Parity {
    pub fn of(&self, v: VertexId) -> u8 {
        self.0[v.index()]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// Checks that adjacent vertices of `g` get different parities.
    pub fn is_proper_for(&self, g: &Graph) -> bool {
        self.0.len() == g.len() && g.edges().iter().all(|&(u, v)| self.of(u) != self.of(v))
    }
}

fn two_colour<'a>(n: usize, neighbours: impl Fn(VertexId) -> &'a [VertexId]) -> Option<Parity> {
    let mut colour: Vec<Option<u8>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(0);
        queue.push_back(VertexId::from(start));
        while let Some(u) = queue.pop_front() {
            let cu = colour[u.index()].unwrap();
            for &w in neighbours(u) {
                match colour[w.index()] {
                    None => {
                        colour[w.index()] = Some(1 - cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Parity(colour.into_iter().map(|c| c.unwrap()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_ab(kind: EdgeKind) -> BrGraph {
        let mut g = BrGraph::new();
        g.add_named_edge("u", "v", kind);
        g
    }

    #[test]
    fn purple_edge_underlying_is_single_edge() {
        let g = path_ab(EdgeKind::Purple);
        let u = g.underlying();
        assert_eq!(u.len(), 2);
        assert_eq!(u.edges(), vec![(VertexId(0), VertexId(1))]);
    }

    #[test]
    fn separate_loops_survive_union() {
        let mut g = BrGraph::new();
        g.add_named_edge("u", "u", EdgeKind::Blue);
        g.add_named_edge("v", "v", EdgeKind::Red);
        let u = g.underlying();
        assert_eq!(
            u.edges(),
            vec![(VertexId(0), VertexId(0)), (VertexId(1), VertexId(1))]
        );
    }

    #[test]
    fn bipartition_rejects_odd_cycles_and_loops() {
        let mut tri = BrGraph::new();
        tri.add_named_edge("a", "b", EdgeKind::Blue);
        tri.add_named_edge("b", "c", EdgeKind::Red);
        tri.add_named_edge("c", "a", EdgeKind::Purple);
        assert!(tri.bipartition().is_none());

        let mut looped = BrGraph::new();
        looped.add_named_edge("a", "a", EdgeKind::Red);
        assert!(looped.bipartition().is_none());
    }

    #[test]
    fn bipartition_is_canonical_per_component() {
        let mut g = BrGraph::with_vertices(["a", "b", "c", "d"]).unwrap();
        g.add_edge(VertexId(1), VertexId(0), EdgeKind::Red);
        g.add_edge(VertexId(3), VertexId(2), EdgeKind::Blue);
        let p = g.bipartition().unwrap();
        assert_eq!(p.as_slice(), &[0, 1, 0, 1]);
        assert!(p.is_proper_for(&g.underlying()));
    }

    #[test]
    fn induced_identity_and_empty() {
        let mut g = BrGraph::new();
        g.add_named_edge("a", "b", EdgeKind::Blue);
        g.add_named_edge("b", "c", EdgeKind::Purple);
        g.add_named_edge("c", "c", EdgeKind::Red);
        let all: Vec<_> = g.vertices().collect();
        assert_eq!(g.induced(&all).unwrap(), g);
        assert_eq!(g.induced(&[]).unwrap().len(), 0);
        assert!(matches!(
            g.induced(&[VertexId(7)]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn duplicate_vertex_rejected() {
        assert!(matches!(
            BrGraph::with_vertices(["a", "a"]),
            Err(Error::DuplicateVertex(_))
        ));
    }

    #[test]
    fn leaves_exclude_loops() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        let c = g.add_vertex("c").unwrap();
        g.add_edge(a, b);
        g.add_edge(c, c);
        assert!(g.is_leaf(a));
        assert!(g.is_leaf(b));
        assert!(!g.is_leaf(c));
    }
}
