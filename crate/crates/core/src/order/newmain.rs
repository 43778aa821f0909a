use super::{for_each_min_ordering, is_min_ordering, leaf_lift, MinOrdering, VertexOrder};
use crate::error::{Error, Result};
use crate::graph::{BrGraph, Colour, EdgeKind, Graph, VertexId};
use crate::poly::{check_props, PolyProps, Polymorphism3, Target};
use crate::switching::{
    normalize_blue_into_red, switch_at, switching_graph, SwitchGraph, SwitchSet,
};

/// An irreflexive purple graph with a min-ordering, a pivot `r`, a set `L`
/// of leaves, and the blue edges `B` removed from it.
#[derive(Clone, Debug)]
pub struct NewmainWitness {
    pub h_plus: BrGraph,
    pub order: VertexOrder,
    pub r: VertexId,
    pub leaves: Vec<VertexId>,
    /// Removed blue edges as pairs `(u, v)` with `u < v`, sorted.
    pub removed: Vec<(VertexId, VertexId)>,
}

impl NewmainWitness {
    /// Blue edges with both ends strictly above `r`, plus those touching `L`.
    pub fn implied_removed(
        h_plus: &BrGraph,
        order: &VertexOrder,
        r: VertexId,
        leaves: &[VertexId],
    ) -> Vec<(VertexId, VertexId)> {
        h_plus
            .edges(Colour::Blue)
            .into_iter()
            .filter(|&(u, v)| {
                (order.less(r, u) && order.less(r, v)) || leaves.contains(&u) || leaves.contains(&v)
            })
            .collect()
    }

    /// Vertices strictly above `r` and not in `L`.
    pub fn upper(&self) -> Vec<bool> {
        self.h_plus
            .vertices()
            .map(|v| self.order.less(self.r, v) && !self.leaves.contains(&v))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.h_plus;
        let invalid = |m: String| Err(Error::InvalidWitness(m));
        if let Some(v) = g.first_loop() {
            return invalid(format!("h_plus has a loop at `{}`", g.name(v)));
        }
        if let Some((u, v, _)) = g.all_edges().into_iter().find(|e| e.2 != EdgeKind::Purple) {
            return invalid(format!(
                "edge {}-{} of h_plus is not purple",
                g.name(u),
                g.name(v)
            ));
        }
        if self.order.len() != g.len() || self.r.index() >= g.len() {
            return invalid("order or pivot does not match h_plus".into());
        }
        let under = g.underlying();
        if let Some(v) = is_min_ordering(&under, &self.order)? {
            return invalid(format!(
                "not a min-ordering: {} {} {} {}",
                g.name(v.a),
                g.name(v.a_prime),
                g.name(v.b),
                g.name(v.b_prime)
            ));
        }
        if let Some(&l) = self
            .leaves
            .iter()
            .find(|&&l| l.index() >= g.len() || !under.is_leaf(l))
        {
            return Err(Error::NotALeaf(if l.index() < g.len() {
                g.name(l).into()
            } else {
                l.to_string()
            }));
        }
        let mut removed = self.removed.clone();
        for e in removed.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        removed.sort();
        removed.dedup();
        if removed != Self::implied_removed(g, &self.order, self.r, &self.leaves) {
            return invalid("B is not the set of blue edges above r or at the leaves".into());
        }
        Ok(())
    }
}

/// The graph `H = H_plus - B` and the semi-conservative WNU on `P(H)`.
#[derive(Clone, Debug)]
pub struct NewmainBuild {
    /// The witness with its order normalized by leaf lifts.
    pub witness: NewmainWitness,
    pub h: BrGraph,
    pub switching: SwitchGraph,
    pub phi: Polymorphism3,
}

impl NewmainBuild {
    pub fn target(&self) -> Target {
        Target::switching(&self.switching)
    }
}

/// Properties every built operation must have.
pub fn newmain_props() -> PolyProps {
    PolyProps {
        idempotent: true,
        wnu: true,
        semi_conservative: true,
        ..PolyProps::none()
    }
}

fn majority(x: [u8; 3]) -> u8 {
    if x[0] == x[1] || x[0] == x[2] {
        x[0]
    } else {
        x[1]
    }
}

/// Builds `H` and the operation
/// `((a1,x1),(a2,x2),(a3,x3)) -> (min a, I(x))` on `P(H)`, where `I` is the
/// majority when all `a_i` agree or all lie above `r` outside `L`, and else
/// the bit of the first entry attaining the minimum. Triples whose base
/// vertices have mixed parity go to the first entry of majority parity.
pub fn newmain_build(w: &NewmainWitness) -> Result<NewmainBuild> {
    w.validate()?;
    let under = w.h_plus.underlying();
    let mut m = MinOrdering {
        graph: under.clone(),
        order: w.order.clone(),
    };
    for &l in &w.leaves {
        m = leaf_lift(&m, l)?;
    }
    let witness = NewmainWitness {
        removed: NewmainWitness::implied_removed(&w.h_plus, &w.order, w.r, &w.leaves),
        order: m.order,
        ..w.clone()
    };
    if NewmainWitness::implied_removed(&witness.h_plus, &witness.order, witness.r, &witness.leaves)
        != witness.removed
    {
        return Err(Error::InvalidWitness(
            "leaf lifting changed the removed edge set".into(),
        ));
    }
    let mut h = witness.h_plus.clone();
    for &(u, v) in &witness.removed {
        h.remove_coloured(Colour::Blue, u, v);
    }
    let pg = switching_graph(&h);
    let parity = h.bipartition();
    let upper = witness.upper();
    let phi = Polymorphism3::from_fn(pg.graph.len(), |x| {
        let parts = x.map(|v| pg.project(v));
        let a = parts.map(|(v, _)| v);
        if let Some(p) = &parity {
            let pp = a.map(|v| p.of(v));
            if !(pp[0] == pp[1] && pp[1] == pp[2]) {
                let maj = majority(pp);
                return x[pp.iter().position(|&q| q == maj).expect("majority exists")];
            }
        }
        let low = witness.order.min3(a);
        let bits = parts.map(|(_, b)| b);
        let bit = if (a[0] == a[1] && a[1] == a[2]) || a.iter().all(|v| upper[v.index()]) {
            majority(bits)
        } else {
            bits[a
                .iter()
                .position(|&v| v == low)
                .expect("minimum is an entry")]
        };
        pg.lift(low, bit)
    });
    let report = check_props(&Target::switching(&pg), &phi, newmain_props())?;
    if let Some(bad) = report.failures().next() {
        return Err(Error::SelfCheck(format!(
            "built operation fails {}",
            bad.prop.name()
        )));
    }
    Ok(NewmainBuild {
        witness,
        h,
        switching: pg,
        phi,
    })
}

/// A witness for a switching of the input, with the switch set used.
#[derive(Clone, Debug)]
pub struct PremiseHit {
    pub switch_set: SwitchSet,
    pub build: NewmainBuild,
}

/// Nonempty-first subsets of `items` by size, then lexicographically.
fn subsets<T: Copy>(items: &[T]) -> Vec<Vec<T>> {
    let mut all: Vec<Vec<usize>> = (0u64..1 << items.len())
        .map(|mask| (0..items.len()).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all.into_iter()
        .map(|s| s.into_iter().map(|i| items[i]).collect())
        .collect()
}

/// Searches for a witness whose built graph is a switching of `h`.
///
/// `h` is first switched so that blue is contained in red; `H_plus` is then
/// its red graph made purple and `B` its pure red edges. Min-orderings are
/// tried in lexicographic order, pivots from the bottom, and leaf sets by
/// size. The first candidate whose build passes its self-check is returned.
pub fn newmain_premise_search(h: &BrGraph) -> Result<Option<PremiseHit>> {
    if let Some(v) = h.first_loop() {
        return Err(Error::HasLoop(h.name(v).to_string()));
    }
    let Some(switch_set) = normalize_blue_into_red(h) else {
        return Ok(None);
    };
    let normal = switch_at(h, &switch_set)?;
    let mut h_plus = BrGraph::with_vertices(normal.names().iter().cloned())?;
    for (u, v) in normal.edges(Colour::Red) {
        h_plus.add_edge(u, v, EdgeKind::Purple);
    }
    let target_removed: Vec<(VertexId, VertexId)> = normal
        .all_edges()
        .into_iter()
        .filter(|e| e.2 == EdgeKind::Red)
        .map(|(u, v, _)| (u, v))
        .collect();
    let under: Graph = h_plus.underlying();
    let candidates: Vec<VertexId> = under
        .vertices()
        .filter(|&l| {
            under.is_leaf(l) && {
                let n = under.neighbours(l)[0];
                target_removed.contains(&(l.min(n), l.max(n)))
            }
        })
        .collect();
    let leaf_sets = subsets(&candidates);
    let mut hit = None;
    let mut failure = None;
    for_each_min_ordering(&under, |order| {
        for &r in order.as_slice() {
            for leaves in &leaf_sets {
                let removed = NewmainWitness::implied_removed(&h_plus, order, r, leaves);
                if removed != target_removed {
                    continue;
                }
                let w = NewmainWitness {
                    h_plus: h_plus.clone(),
                    order: order.clone(),
                    r,
                    leaves: leaves.clone(),
                    removed,
                };
                match newmain_build(&w) {
                    Ok(build) => {
                        hit = Some(build);
                        return false;
                    }
                    Err(Error::SelfCheck(_)) | Err(Error::InvalidWitness(_)) => continue,
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                }
            }
        }
        true
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let Some(build) = hit else {
        return Ok(None);
    };
    if build.h != normal {
        return Err(Error::SelfCheck(
            "built graph differs from the switched input".into(),
        ));
    }
    Ok(Some(PremiseHit { switch_set, build }))
}
