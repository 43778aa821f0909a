use super::Polymorphism3;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::switching::BipartiteProduct;

/// The parity-symmetric operation on `H x P` induced by `f` on `H`.
///
/// On triples of one parity, `(f(v1, v2, v3), parity)`; otherwise the first
/// entry whose parity is shared by at least two entries.
pub fn lift_to_bipartite(f: &Polymorphism3, prod: &BipartiteProduct) -> Result<Polymorphism3> {
    if f.len() != prod.base.len() {
        return Err(Error::TableNotTotal {
            expected: prod.base.len().pow(3),
            got: f.len().pow(3),
        });
    }
    Ok(Polymorphism3::from_fn(prod.graph.len(), |x| {
        let parts = x.map(|v| prod.project(v));
        let parities = parts.map(|(_, p)| p);
        if parities[0] == parities[1] && parities[1] == parities[2] {
            prod.lift(f.apply(parts.map(|(v, _)| v)), parities[0])
        } else {
            let majority = if parities[0] == parities[1] || parities[0] == parities[2] {
                parities[0]
            } else {
                parities[1]
            };
            let i = parities
                .iter()
                .position(|&p| p == majority)
                .expect("majority exists");
            x[i]
        }
    }))
}

/// The operation `pi_H(F((v1,0), (v2,0), (v3,0)))` on `H`, defined for
/// parity-symmetric `F` only.
pub fn project_from_bipartite(
    big: &Polymorphism3,
    prod: &BipartiteProduct,
) -> Result<Polymorphism3> {
    if big.len() != prod.graph.len() {
        return Err(Error::TableNotTotal {
            expected: prod.graph.len().pow(3),
            got: big.len().pow(3),
        });
    }
    let p = |v: VertexId| prod.parity_switch.apply(v);
    if let Some((x, _)) = big.entries().find(|&(x, y)| big.apply(x.map(p)) != p(y)) {
        let names: Vec<&str> = x.iter().map(|&v| prod.graph.name(v)).collect();
        return Err(Error::NotParitySymmetric(names.join(", ")));
    }
    Ok(Polymorphism3::from_fn(prod.base.len(), |v| {
        prod.project(big.apply(v.map(|a| prod.lift(a, 0)))).0
    }))
}
