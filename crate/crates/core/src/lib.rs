//! Signed (blue/red) graphs, switching, list homomorphisms, polymorphism
//! search and complexity verdicts for switch-homomorphism problems.

pub mod classify;
mod csp;
pub mod error;
pub mod graph;
pub mod hom;
pub mod io;
pub mod iso;
pub mod order;
pub mod poly;
pub mod switching;

pub use classify::{
    classify_lphom, classify_lshom, classify_shom, Answer, Certificate, Problem, Verdict,
};
pub use error::{Error, Result};
pub use graph::{BrGraph, Colour, EdgeKind, Graph, Parity, VertexId};
pub use hom::{
    core_of, list_hom, list_switch_hom, switch_core_of, switch_hom, symmetric_list_core,
    Homomorphism, ListAssignment, Retract, SwitchHom,
};
pub use iso::{automorphisms, brgraph_isomorphic};
pub use order::{
    find_min_ordering, is_min_ordering, leaf_lift, MinOrdering, NewmainWitness, VertexOrder,
};
pub use poly::{check_props, search_poly3, PolyProps, Polymorphism3, SearchOutcome, Target};
pub use switching::{
    are_switch_equivalent, product_with_p, switch_at, switching_graph, BipartiteProduct,
    Involution, SwitchGraph, SwitchSet,
};
