//! Binary constraint networks over small domains (at most 64 values, one
//! bit each), solved by AC-3 style propagation and backtracking. Variables
//! are chosen by smallest domain relative to how often propagation has
//! failed there, which keeps refutations short while staying deterministic.
//!
//! Constraints are not materialised: a [`Network`] enumerates the arcs into
//! a variable on demand, which keeps polymorphism searches with `n^3`
//! variables and `(2e)^3` arcs cheap in memory.

use std::collections::VecDeque;

pub(crate) const MAX_VALUES: usize = 64;

pub(crate) trait Network {
    fn num_vars(&self) -> usize;

    /// Calls `f(x, rows)` for every constraint between `x` and `y`, where
    /// `rows[b]` is the set of values of `x` compatible with `y = b`.
    fn for_each_arc(&self, y: usize, f: &mut dyn FnMut(usize, &[u64]));
}

/// Order in which values are tried at a branching variable.
#[derive(Clone, Debug, Default)]
pub(crate) enum ValueOrder {
    #[default]
    Ascending,
    /// Values in the listed order; values not listed are never tried.
    Custom(Vec<u8>),
}

struct Solver<'a, N: Network> {
    net: &'a N,
    domains: Vec<u64>,
    trail: Vec<(usize, u64)>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    /// Failure counts, bumped at both ends of an arc that wiped a domain.
    weight: Vec<u32>,
}

impl<N: Network> Solver<'_, N> {
    fn set(&mut self, var: usize, dom: u64) {
        let old = self.domains[var];
        if old != dom {
            self.trail.push((var, old));
            self.domains[var] = dom;
            if !self.queued[var] {
                self.queued[var] = true;
                self.queue.push_back(var);
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, old) = self.trail.pop().unwrap();
            self.domains[var] = old;
        }
    }

    fn propagate(&mut self) -> bool {
        let mut supports: Vec<(usize, u64)> = Vec::new();
        while let Some(y) = self.queue.pop_front() {
            self.queued[y] = false;
            let dy = self.domains[y];
            supports.clear();
            self.net.for_each_arc(y, &mut |x, rows| {
                let mut support = 0u64;
                let mut bits = dy;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    support |= rows[b];
                }
                supports.push((x, support));
            });
            for &(x, support) in &supports {
                let d = self.domains[x] & support;
                if d == 0 {
                    self.weight[x] += 1;
                    self.weight[y] += 1;
                    self.clear_queue();
                    return false;
                }
                self.set(x, d);
            }
        }
        true
    }

    fn clear_queue(&mut self) {
        for v in self.queue.drain(..) {
            self.queued[v] = false;
        }
    }

    /// Unfixed variable minimising domain size over failure weight; ties
    /// go to the lowest index.
    fn select(&self) -> Option<usize> {
        let mut best: Option<(u64, u64, usize)> = None;
        for (v, &d) in self.domains.iter().enumerate() {
            let size = d.count_ones() as u64;
            if size < 2 {
                continue;
            }
            let w = self.weight[v] as u64;
            if best.is_none_or(|(s, bw, _)| size * bw < s * w) {
                best = Some((size, w, v));
            }
        }
        best.map(|(_, _, v)| v)
    }
}

fn pick(remaining: u64, order: &ValueOrder) -> Option<u8> {
    match order {
        ValueOrder::Ascending => (remaining != 0).then(|| remaining.trailing_zeros() as u8),
        ValueOrder::Custom(list) => list.iter().copied().find(|&v| remaining & (1u64 << v) != 0),
    }
}

struct Frame {
    var: usize,
    remaining: u64,
    mark: usize,
}

/// First solution in search order, or `None` once the space is exhausted.
pub(crate) fn solve<N: Network>(net: &N, initial: Vec<u64>, order: &ValueOrder) -> Option<Vec<u8>> {
    assert_eq!(initial.len(), net.num_vars());
    if initial.contains(&0) {
        return None;
    }
    let n = initial.len();
    let mut s = Solver {
        net,
        domains: initial,
        trail: Vec::new(),
        queue: (0..n).collect(),
        queued: vec![true; n],
        weight: vec![1; n],
    };
    if !s.propagate() {
        return None;
    }
    let mut stack: Vec<Frame> = Vec::new();
    'descend: loop {
        match s.select() {
            None => {
                return Some(s.domains.iter().map(|d| d.trailing_zeros() as u8).collect());
            }
            Some(var) => stack.push(Frame {
                var,
                remaining: s.domains[var],
                mark: s.trail.len(),
            }),
        }
        loop {
            let top = stack.last_mut()?;
            let (var, mark) = (top.var, top.mark);
            let Some(val) = pick(top.remaining, order) else {
                stack.pop();
                continue;
            };
            top.remaining &= !(1u64 << val);
            s.undo(mark);
            s.set(var, 1u64 << val);
            if s.propagate() {
                continue 'descend;
            }
            s.undo(mark);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Graph colouring: variables are vertices, every edge forbids equality.
    struct Colouring {
        adj: Vec<Vec<usize>>,
        neq: Vec<u64>,
    }

    impl Colouring {
        fn new(n: usize, edges: &[(usize, usize)], k: usize) -> Colouring {
            let mut adj = vec![Vec::new(); n];
            for &(u, v) in edges {
                adj[u].push(v);
                adj[v].push(u);
            }
            let all = (1u64 << k) - 1;
            Colouring {
                adj,
                neq: (0..k).map(|b| all & !(1u64 << b)).collect(),
            }
        }
    }

    impl Network for Colouring {
        fn num_vars(&self) -> usize {
            self.adj.len()
        }
        fn for_each_arc(&self, y: usize, f: &mut dyn FnMut(usize, &[u64])) {
            for &x in &self.adj[y] {
                f(x, &self.neq);
            }
        }
    }

    #[test]
    fn colours_an_odd_cycle_with_three_but_not_two() {
        let c5 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let two = Colouring::new(5, &c5, 2);
        assert!(solve(&two, vec![0b11; 5], &ValueOrder::Ascending).is_none());
        let three = Colouring::new(5, &c5, 3);
        let sol = solve(&three, vec![0b111; 5], &ValueOrder::Ascending).unwrap();
        for (u, v) in c5 {
            assert_ne!(sol[u], sol[v]);
        }
        // ascending value order gives the lexicographically least colouring
        assert_eq!(sol, vec![0, 1, 0, 1, 2]);
    }

    #[test]
    fn custom_order_is_respected() {
        let k2 = Colouring::new(2, &[(0, 1)], 2);
        let sol = solve(&k2, vec![0b11; 2], &ValueOrder::Custom(vec![1, 0])).unwrap();
        assert_eq!(sol, vec![1, 0]);
    }

    #[test]
    fn k4_is_not_three_colourable() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let net = Colouring::new(4, &edges, 3);
        assert!(solve(&net, vec![0b111; 4], &ValueOrder::Ascending).is_none());
    }
}
