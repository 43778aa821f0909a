//! Ternary polymorphisms: property checks, constraint search, excluders and
//! permutable triples, the explicit NU3 of a triple-free graph, and the
//! transport between `H` and `H x P`.

mod excluder;
mod search;
mod transport;

pub use excluder::{
    excluder, hr_nu3, permutable_triples, ExcluderCertificate, ExcluderTable, PermutableTriple,
};
pub use search::{search_poly3, search_poly3_ordered, SearchOutcome};
pub use transport::{lift_to_bipartite, project_from_bipartite};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BrGraph, Colour, Graph, VertexId};
use crate::iso::automorphisms;
use crate::switching::{BipartiteProduct, Involution, SwitchGraph};

/// The structure a polymorphism acts on: a br-graph, optionally with the
/// switch map used for semi-conservativity and the parity switch used for
/// parity symmetry.
#[derive(Clone, Debug)]
pub struct Target {
    pub graph: BrGraph,
    pub switch: Option<Involution>,
    pub parity_switch: Option<Involution>,
}

impl Target {
    pub fn new(graph: BrGraph) -> Target {
        Target {
            graph,
            switch: None,
            parity_switch: None,
        }
    }

    /// A plain graph, read as a br-graph with only red edges.
    pub fn from_graph(g: &Graph) -> Target {
        Target::new(g.to_red_brgraph())
    }

    pub fn with_switch(graph: BrGraph, switch: Involution) -> Result<Target> {
        if switch.len() != graph.len() {
            return Err(Error::VertexSetMismatch(
                "switch map does not match graph".into(),
            ));
        }
        Ok(Target {
            graph,
            switch: Some(switch),
            parity_switch: None,
        })
    }

    /// `P(H)` with its switch map.
    pub fn switching(pg: &SwitchGraph) -> Target {
        Target {
            graph: pg.graph.clone(),
            switch: Some(pg.switch.clone()),
            parity_switch: None,
        }
    }

    /// `H x P` with its parity switch. If `base_switch` is an involution of
    /// `H`, it is carried over as `(v, i) -> (s(v), i)`.
    pub fn product(prod: &BipartiteProduct, base_switch: Option<&Involution>) -> Target {
        let switch = base_switch.map(|s| {
            let map = prod
                .graph
                .vertices()
                .map(|x| {
                    let (v, i) = prod.project(x);
                    prod.lift(s.apply(v), i)
                })
                .collect();
            Involution::new(map).expect("a lifted involution is an involution")
        });
        Target {
            graph: prod.graph.clone(),
            switch,
            parity_switch: Some(prod.parity_switch.clone()),
        }
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// `{x1, x2, x3}` closed under the switch map (identity when absent).
    pub fn closure(&self, x: [VertexId; 3]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = x.to_vec();
        if let Some(s) = &self.switch {
            out.extend(x.iter().map(|&v| s.apply(v)));
        }
        out.sort();
        out.dedup();
        out
    }
}

/// A total ternary operation on `n` vertices, stored densely with
/// `(x, y, z)` at index `x n^2 + y n + z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polymorphism3 {
    n: usize,
    table: Vec<VertexId>,
}

impl fmt::Debug for Polymorphism3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polymorphism3(n = {})", self.n)
    }
}

impl Polymorphism3 {
    pub fn from_fn(n: usize, mut f: impl FnMut([VertexId; 3]) -> VertexId) -> Polymorphism3 {
        let mut table = Vec::with_capacity(n * n * n);
        for i in 0..n * n * n {
            table.push(f(decode(n, i)));
        }
        Polymorphism3 { n, table }
    }

    pub fn from_table(n: usize, table: Vec<VertexId>) -> Result<Polymorphism3> {
        if table.len() != n * n * n {
            return Err(Error::TableNotTotal {
                expected: n * n * n,
                got: table.len(),
            });
        }
        if let Some(bad) = table.iter().find(|v| v.index() >= n) {
            return Err(Error::UnknownVertex(bad.to_string()));
        }
        Ok(Polymorphism3 { n, table })
    }

    /// The projection onto coordinate `i`.
    pub fn projection(n: usize, i: usize) -> Polymorphism3 {
        Polymorphism3::from_fn(n, |x| x[i])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn apply(&self, x: [VertexId; 3]) -> VertexId {
        self.table[encode(self.n, x)]
    }

    pub fn table(&self) -> &[VertexId] {
        &self.table
    }

    /// All `(inputs, output)` entries in index order.
    pub fn entries(&self) -> impl Iterator<Item = ([VertexId; 3], VertexId)> + '_ {
        let n = self.n;
        self.table
            .iter()
            .enumerate()
            .map(move |(i, &y)| (decode(n, i), y))
    }
}

pub(crate) fn encode(n: usize, x: [VertexId; 3]) -> usize {
    (x[0].index() * n + x[1].index()) * n + x[2].index()
}

pub(crate) fn decode(n: usize, i: usize) -> [VertexId; 3] {
    [
        VertexId::from(i / (n * n)),
        VertexId::from(i / n % n),
        VertexId::from(i % n),
    ]
}

/// One checkable property of a ternary operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop {
    BluePolymorphism,
    RedPolymorphism,
    Idempotent,
    Conservative,
    SemiConservative,
    Wnu,
    Nu3,
    Symmetric,
    ParitySymmetric,
}

impl Prop {
    pub fn name(self) -> &'static str {
        match self {
            Prop::BluePolymorphism => "blue_polymorphism",
            Prop::RedPolymorphism => "red_polymorphism",
            Prop::Idempotent => "idempotent",
            Prop::Conservative => "conservative",
            Prop::SemiConservative => "semi_conservative",
            Prop::Wnu => "wnu",
            Prop::Nu3 => "nu3",
            Prop::Symmetric => "symmetric",
            Prop::ParitySymmetric => "parity_symmetric",
        }
    }
}

/// A selection of properties beyond edge preservation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyProps {
    pub idempotent: bool,
    pub conservative: bool,
    pub semi_conservative: bool,
    pub wnu: bool,
    pub nu3: bool,
    pub symmetric: bool,
    pub parity_symmetric: bool,
}

impl PolyProps {
    pub fn none() -> PolyProps {
        PolyProps::default()
    }

    /// Parses a comma separated list such as `wnu,semi`.
    pub fn parse(spec: &str) -> Result<PolyProps> {
        let mut p = PolyProps::none();
        for word in spec.split(',').map(str::trim).filter(|w| !w.is_empty()) {
            match word.to_ascii_lowercase().as_str() {
                "idempotent" => p.idempotent = true,
                "conservative" => p.conservative = true,
                "semi" | "semi_conservative" | "semi-conservative" => p.semi_conservative = true,
                "wnu" => p.wnu = true,
                "nu3" | "nu" => p.nu3 = true,
                "symmetric" => p.symmetric = true,
                "parity" | "parity_symmetric" | "parity-symmetric" => p.parity_symmetric = true,
                other => return Err(Error::Unsupported(format!("unknown property `{other}`"))),
            }
        }
        Ok(p)
    }

    /// The requested properties, always preceded by edge preservation in
    /// both colours.
    pub fn props(&self) -> Vec<Prop> {
        let mut out = vec![Prop::BluePolymorphism, Prop::RedPolymorphism];
        let flags = [
            (self.idempotent, Prop::Idempotent),
            (self.conservative, Prop::Conservative),
            (self.semi_conservative, Prop::SemiConservative),
            (self.wnu, Prop::Wnu),
            (self.nu3, Prop::Nu3),
            (self.symmetric, Prop::Symmetric),
            (self.parity_symmetric, Prop::ParitySymmetric),
        ];
        out.extend(flags.iter().filter(|(on, _)| *on).map(|&(_, p)| p));
        out
    }
}

/// Input triples witnessing the failure of a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub inputs: Vec<[VertexId; 3]>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropResult {
    pub prop: Prop,
    pub counterexample: Option<Counterexample>,
}

impl PropResult {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropReport {
    pub results: Vec<PropResult>,
}

impl PropReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(PropResult::holds)
    }

    pub fn holds(&self, prop: Prop) -> Option<bool> {
        self.results
            .iter()
            .find(|r| r.prop == prop)
            .map(PropResult::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropResult> {
        self.results.iter().filter(|r| !r.holds())
    }
}

/// Automorphisms beyond this many make the symmetry check refuse.
pub const AUTOMORPHISM_LIMIT: usize = 5040;

/// Checks edge preservation in both colours plus every property in `which`.
pub fn check_props(target: &Target, f: &Polymorphism3, which: PolyProps) -> Result<PropReport> {
    if f.len() != target.len() {
        return Err(Error::TableNotTotal {
            expected: target.len().pow(3),
            got: f.table.len(),
        });
    }
    let mut results = Vec::new();
    for prop in which.props() {
        let counterexample = match prop {
            Prop::BluePolymorphism => preserves(&target.graph, Colour::Blue, f),
            Prop::RedPolymorphism => preserves(&target.graph, Colour::Red, f),
            Prop::Idempotent => idempotent(f),
            Prop::Conservative => conservative(f, None),
            Prop::SemiConservative => conservative(f, Some(target)),
            Prop::Wnu => idempotent(f).or_else(|| weak_near_unanimity(f)),
            Prop::Nu3 => near_unanimity(f),
            Prop::Symmetric => {
                let autos = automorphisms(&target.graph, AUTOMORPHISM_LIMIT)?;
                commutes_with_all(f, &autos)
            }
            Prop::ParitySymmetric => {
                let p = target
                    .parity_switch
                    .as_ref()
                    .ok_or_else(|| Error::Unsupported("target has no parity switch".into()))?;
                commutes_with_all(f, std::slice::from_ref(&p.as_slice().to_vec()))
            }
        };
        results.push(PropResult {
            prop,
            counterexample,
        });
    }
    Ok(PropReport { results })
}

/// Edge preservation for one colour: for all edges `x_i y_i`, `f(x) f(y)`
/// is an edge. Loops count as edges `x_i x_i`.
fn preserves(g: &BrGraph, colour: Colour, f: &Polymorphism3) -> Option<Counterexample> {
    for (x, fx) in f.entries() {
        for &y0 in g.neighbours(colour, x[0]) {
            for &y1 in g.neighbours(colour, x[1]) {
                for &y2 in g.neighbours(colour, x[2]) {
                    let y = [y0, y1, y2];
                    if !g.has(colour, fx, f.apply(y)) {
                        return Some(Counterexample {
                            inputs: vec![x, y],
                            message: format!("{colour:?} edge not preserved").to_lowercase(),
                        });
                    }
                }
            }
        }
    }
    None
}

fn idempotent(f: &Polymorphism3) -> Option<Counterexample> {
    (0..f.n).map(VertexId::from).find_map(|v| {
        (f.apply([v, v, v]) != v).then(|| Counterexample {
            inputs: vec![[v, v, v]],
            message: "f(x,x,x) != x".into(),
        })
    })
}

fn conservative(f: &Polymorphism3, semi: Option<&Target>) -> Option<Counterexample> {
    f.entries().find_map(|(x, y)| {
        let allowed = match semi {
            Some(t) => t.closure(x).contains(&y),
            None => x.contains(&y),
        };
        (!allowed).then(|| Counterexample {
            inputs: vec![x],
            message: if semi.is_some() {
                "value outside the switch closure of the inputs".into()
            } else {
                "value outside the inputs".into()
            },
        })
    })
}

pub(crate) fn one_off_patterns(x: VertexId, y: VertexId) -> [[VertexId; 3]; 3] {
    [[x, x, y], [x, y, x], [y, x, x]]
}

fn weak_near_unanimity(f: &Polymorphism3) -> Option<Counterexample> {
    for x in (0..f.n).map(VertexId::from) {
        for y in (0..f.n).map(VertexId::from).filter(|&y| y != x) {
            let pats = one_off_patterns(x, y);
            let v = f.apply(pats[0]);
            if pats[1..].iter().any(|&p| f.apply(p) != v) {
                return Some(Counterexample {
                    inputs: pats.to_vec(),
                    message: "f(x,x,y), f(x,y,x), f(y,x,x) differ".into(),
                });
            }
        }
    }
    None
}

fn near_unanimity(f: &Polymorphism3) -> Option<Counterexample> {
    for x in (0..f.n).map(VertexId::from) {
        for y in (0..f.n).map(VertexId::from) {
            if let Some(&p) = one_off_patterns(x, y).iter().find(|&&p| f.apply(p) != x) {
                return Some(Counterexample {
                    inputs: vec![p],
                    message: "majority value not returned".into(),
                });
            }
        }
    }
    None
}

fn commutes_with_all(f: &Polymorphism3, maps: &[Vec<VertexId>]) -> Option<Counterexample> {
    for sigma in maps {
        let s = |v: VertexId| sigma[v.index()];
        if let Some((x, _)) = f
            .entries()
            .find(|&(x, y)| f.apply([s(x[0]), s(x[1]), s(x[2])]) != s(y))
        {
            return Some(Counterexample {
                inputs: vec![x],
                message: "does not commute with an automorphism".into(),
            });
        }
    }
    None
}

/// The operation as lines `f <x1> <x2> <x3> -> <y>`.
pub fn table_to_text(target: &BrGraph, f: &Polymorphism3) -> String {
    let mut out = String::new();
    for (x, y) in f.entries() {
        out.push_str(&format!(
            "f {} {} {} -> {}\n",
            target.name(x[0]),
            target.name(x[1]),
            target.name(x[2]),
            target.name(y)
        ));
    }
    out
}
