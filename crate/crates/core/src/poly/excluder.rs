use std::collections::VecDeque;

use serde_json::{json, Value};

use super::Polymorphism3;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Three equal-length walks from `triple`: the two walks off the target
/// position end at a common vertex and the target walk avoids both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcluderCertificate {
    pub triple: [VertexId; 3],
    /// Position (0, 1 or 2) of the excluded entry.
    pub target: usize,
    pub walks: [Vec<VertexId>; 3],
}

fn others(target: usize) -> [usize; 2] {
    [(target + 1) % 3, (target + 2) % 3]
}

impl ExcluderCertificate {
    pub fn len(&self) -> usize {
        self.walks[0].len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Re-checks every defining condition against `g`.
    pub fn verify(&self, g: &Graph) -> bool {
        let len = self.walks[0].len();
        if self.target > 2 || len == 0 || self.walks.iter().any(|w| w.len() != len) {
            return false;
        }
        if self.walks.iter().flatten().any(|v| v.index() >= g.len()) {
            return false;
        }
        if (0..3).any(|j| self.walks[j][0] != self.triple[j]) {
            return false;
        }
        let walks_ok = self
            .walks
            .iter()
            .all(|w| w.windows(2).all(|p| g.adjacent(p[0], p[1])));
        let [o1, o2] = others(self.target);
        let t = &self.walks[self.target];
        let avoids = (1..len).all(|i| {
            !g.adjacent(t[i - 1], self.walks[o1][i]) && !g.adjacent(t[i - 1], self.walks[o2][i])
        });
        walks_ok && avoids && self.walks[o1][len - 1] == self.walks[o2][len - 1]
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        let names = |w: &[VertexId]| w.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
        json!({
            "triple": names(&self.triple),
            "target": g.name(self.triple[self.target]),
            "target_index": self.target,
            "walks": self.walks.iter().map(|w| names(w)).collect::<Vec<_>>(),
        })
    }
}

/// For every state `(u1, u2, u3)` and target position, whether an excluder
/// starts there. Computed by one backward search per target position from
/// the accepting states.
pub struct ExcluderTable<'g> {
    graph: &'g Graph,
    rows: Vec<u64>,
    reach: [Vec<bool>; 3],
}

impl<'g> ExcluderTable<'g> {
    pub fn compute(g: &'g Graph) -> Result<ExcluderTable<'g>> {
        if g.len() > 64 {
            return Err(Error::TooLarge {
                size: g.len(),
                limit: 64,
            });
        }
        let rows = g.adjacency_bits();
        let reach = [0, 1, 2].map(|t| backward(g.len(), &rows, t));
        Ok(ExcluderTable {
            graph: g,
            rows,
            reach,
        })
    }

    fn index(&self, x: [VertexId; 3]) -> usize {
        super::encode(self.graph.len(), x)
    }

    /// Whether `triple` has an excluder for position `target`.
    pub fn has(&self, triple: [VertexId; 3], target: usize) -> bool {
        self.reach[target][self.index(triple)]
    }

    pub fn is_permutable(&self, triple: [VertexId; 3]) -> bool {
        distinct(triple) && (0..3).all(|t| self.has(triple, t))
    }

    /// Ordered triples of distinct vertices with all three excluders, in
    /// lexicographic order.
    pub fn permutable(&self) -> Vec<[VertexId; 3]> {
        let n = self.graph.len();
        (0..n * n * n)
            .map(|i| super::decode(n, i))
            .filter(|&x| self.is_permutable(x))
            .collect()
    }

    /// A shortest excluder, found by forward search through states that
    /// can still reach acceptance.
    pub fn certificate(&self, triple: [VertexId; 3], target: usize) -> Option<ExcluderCertificate> {
        if !self.has(triple, target) {
            return None;
        }
        let n = self.graph.len();
        let [o1, o2] = others(target);
        let start = self.index(triple);
        let mut parent = vec![u32::MAX; n * n * n];
        parent[start] = start as u32;
        let mut queue = VecDeque::from([start]);
        let mut end = None;
        while let Some(s) = queue.pop_front() {
            let u = super::decode(n, s);
            if u[o1] == u[o2] {
                end = Some(s);
                break;
            }
            let block = !self.rows[u[target].index()];
            let mut cand = [0u64; 3];
            cand[target] = self.rows[u[target].index()];
            cand[o1] = self.rows[u[o1].index()] & block;
            cand[o2] = self.rows[u[o2].index()] & block;
            for_each_product(cand, |v| {
                let i = self.index(v);
                if self.reach[target][i] && parent[i] == u32::MAX {
                    parent[i] = s as u32;
                    queue.push_back(i);
                }
            });
        }
        let mut states = vec![end?];
        while let Some(&s) = states.last() {
            let p = parent[s] as usize;
            if p == s {
                break;
            }
            states.push(p);
        }
        states.reverse();
        let walks = [0, 1, 2].map(|j| states.iter().map(|&s| super::decode(n, s)[j]).collect());
        let cert = ExcluderCertificate {
            triple,
            target,
            walks,
        };
        debug_assert!(cert.verify(self.graph));
        Some(cert)
    }
}

fn distinct(x: [VertexId; 3]) -> bool {
    x[0] != x[1] && x[1] != x[2] && x[0] != x[2]
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

fn for_each_product(sets: [u64; 3], mut f: impl FnMut([VertexId; 3])) {
    for a in bits(sets[0]) {
        for b in bits(sets[1]) {
            for c in bits(sets[2]) {
                f([a, b, c].map(VertexId::from));
            }
        }
    }
}

/// States from which an accepting state is reachable for `target`.
fn backward(n: usize, rows: &[u64], target: usize) -> Vec<bool> {
    let [o1, o2] = others(target);
    let mut seen = vec![false; n * n * n];
    let mut queue = VecDeque::new();
    for (i, mark) in seen.iter_mut().enumerate() {
        let x = super::decode(n, i);
        if x[o1] == x[o2] {
            *mark = true;
            queue.push_back(i);
        }
    }
    while let Some(s) = queue.pop_front() {
        let v = super::decode(n, s);
        // predecessors u: u_j ~ v_j, and u_target adjacent to neither other successor
        let mut cand = [0u64; 3];
        cand[target] = rows[v[target].index()] & !rows[v[o1].index()] & !rows[v[o2].index()];
        cand[o1] = rows[v[o1].index()];
        cand[o2] = rows[v[o2].index()];
        for_each_product(cand, |u| {
            let i = super::encode(n, u);
            if !seen[i] {
                seen[i] = true;
                queue.push_back(i);
            }
        });
    }
    seen
}

/// An excluder for position `target` of `triple`, if one exists.
pub fn excluder(
    g: &Graph,
    triple: [VertexId; 3],
    target: usize,
) -> Result<Option<ExcluderCertificate>> {
    if let Some(bad) = triple.iter().find(|v| v.index() >= g.len()) {
        return Err(Error::UnknownVertex(bad.to_string()));
    }
    if target > 2 {
        return Err(Error::Unsupported(format!("target position {target}")));
    }
    Ok(ExcluderTable::compute(g)?.certificate(triple, target))
}

/// A permutable triple with one excluder per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutableTriple {
    pub triple: [VertexId; 3],
    pub certificates: [ExcluderCertificate; 3],
}

impl PermutableTriple {
    pub fn verify(&self, g: &Graph) -> bool {
        distinct(self.triple)
            && self
                .certificates
                .iter()
                .enumerate()
                .all(|(t, c)| c.target == t && c.triple == self.triple && c.verify(g))
    }

    pub fn to_json(&self, g: &Graph) -> Value {
        json!({
            "triple": self.triple.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
            "excluders": self.certificates.iter().map(|c| c.to_json(g)).collect::<Vec<_>>(),
        })
    }
}

/// All permutable triples of `g` with their certificates, in lexicographic
/// order.
pub fn permutable_triples(g: &Graph) -> Result<Vec<PermutableTriple>> {
    let table = ExcluderTable::compute(g)?;
    Ok(table
        .permutable()
        .into_iter()
        .map(|triple| PermutableTriple {
            triple,
            certificates: [0, 1, 2].map(|t| table.certificate(triple, t).expect("excluder exists")),
        })
        .collect())
}

/// The conservative NU3 of a graph without permutable triples: the
/// majority if two entries agree, else `x_i` for the least `i` without an
/// `x_i`-excluder.
pub fn hr_nu3(g: &Graph) -> Result<Polymorphism3> {
    let table = ExcluderTable::compute(g)?;
    if let Some(&t) = table.permutable().first() {
        return Err(Error::PermutableTriple(t.map(|v| g.name(v).to_string())));
    }
    Ok(Polymorphism3::from_fn(g.len(), |x| {
        if x[0] == x[1] || x[0] == x[2] {
            x[0]
        } else if x[1] == x[2] {
            x[1]
        } else {
            let i = (0..3)
                .find(|&i| !table.has(x, i))
                .expect("no permutable triples");
            x[i]
        }
    }))
}
