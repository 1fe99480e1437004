//! Feasible flows with lower and upper arc bounds.
//!
//! A circulation with bounds `lo <= f <= hi` is reduced to a max-flow
//! problem on the residual capacities `hi - lo`, with a super source and
//! super sink absorbing the imbalance the lower bounds create. Max-flow is
//! Dinic's algorithm.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

struct Dinic {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Returns (node, index) of the forward arc.
    fn add(&mut self, u: usize, v: usize, cap: i64) -> (usize, usize) {
        let fwd = self.adj[u].len();
        let back = self.adj[v].len() + usize::from(u == v);
        self.adj[u].push(Arc {
            to: v,
            cap,
            rev: back,
        });
        self.adj[v].push(Arc {
            to: u,
            cap: 0,
            rev: fwd,
        });
        (u, fwd)
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for a in &self.adj[u] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, limit: i64) -> i64 {
        if u == t {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let a = self.adj[u][self.iter[u]];
            if a.cap > 0 && self.level[u] < self.level[a.to] {
                let pushed = self.dfs(a.to, t, limit.min(a.cap));
                if pushed > 0 {
                    self.adj[u][self.iter[u]].cap -= pushed;
                    self.adj[a.to][a.rev].cap += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// A directed network with `[lo, hi]` bounds on every arc.
#[derive(Clone, Debug, Default)]
pub struct BoundedNetwork {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl BoundedNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, lo: i64, hi: i64) -> usize {
        debug_assert!(from < self.nodes && to < self.nodes);
        self.arcs.push((from, to, lo, hi));
        self.arcs.len() - 1
    }

    /// An integral circulation respecting every bound, indexed by arc, or
    /// `None` if there is none.
    pub fn feasible_circulation(&self) -> Option<Vec<i64>> {
        if self.arcs.iter().any(|&(_, _, lo, hi)| lo > hi) {
            return None;
        }
        let source = self.nodes;
        let sink = self.nodes + 1;
        let mut net = Dinic::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let handles: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|&(u, v, lo, hi)| {
                excess[v] += lo;
                excess[u] -= lo;
                net.add(u, v, hi - lo)
            })
            .collect();
        let mut demand = 0;
        for (node, &ex) in excess.iter().enumerate() {
            if ex > 0 {
                net.add(source, node, ex);
                demand += ex;
            } else if ex < 0 {
                net.add(node, sink, -ex);
            }
        }
        if net.max_flow(source, sink) != demand {
            return None;
        }
        Some(
            handles
                .iter()
                .zip(&self.arcs)
                .map(|(&(u, idx), &(_, _, lo, hi))| lo + (hi - lo - net.adj[u][idx].cap))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_cycle_with_lower_bound() {
        let mut net = BoundedNetwork::new();
        let a = net.add_node();
        let b = net.add_node();
        let c = net.add_node();
        net.add_arc(a, b, 2, 5);
        net.add_arc(b, c, 0, 3);
        net.add_arc(c, a, 1, 4);
        let f = net.feasible_circulation().unwrap();
        assert_eq!(f[0], f[1]);
        assert_eq!(f[1], f[2]);
        assert!((2..=3).contains(&f[0]));
    }

    #[test]
    fn infeasible_bounds() {
        let mut net = BoundedNetwork::new();
        let a = net.add_node();
        let b = net.add_node();
        net.add_arc(a, b, 3, 3);
        net.add_arc(b, a, 0, 2);
        assert!(net.feasible_circulation().is_none());
    }

    #[test]
    fn parallel_paths_split() {
        let mut net = BoundedNetwork::new();
        let s = net.add_node();
        let t = net.add_node();
        let x = net.add_arc(s, t, 0, 1);
        let y = net.add_arc(s, t, 0, 1);
        net.add_arc(t, s, 2, 2);
        let f = net.feasible_circulation().unwrap();
        assert_eq!(f[x] + f[y], 2);
    }
}
