//! Brute-force reference solvers for tiny instances.
//!
//! These share no code with the construction path beyond the data types and
//! are used to cross-check it.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::detach::{Factorization, Params};
use crate::error::{Error, Result};
use crate::laminar::{within_bounds, LaminarFamily};

/// Largest `λ·C(n, h)` the factorization search accepts.
pub const ORACLE_EDGE_LIMIT: usize = 40;

/// Largest ground set `exhaustive_select` enumerates.
pub const EXHAUSTIVE_GROUND_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            time_limit: Duration::from_secs(120),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unknown {
    TooLarge,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Found(Factorization),
    /// Exhaustively refuted.
    None,
    Unknown(Unknown),
}

fn shape_key(shape: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = (shape as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Search<'a> {
    edges: Vec<Vec<usize>>,
    /// Bitmask of edge indices containing each vertex.
    edges_of: Vec<u64>,
    /// residual[c][v]: degree vertex v still needs in color c.
    residual: Vec<Vec<usize>>,
    /// Edges color c still needs.
    needed: Vec<usize>,
    /// Copies of each edge shape color c holds, with an additive hash of
    /// the counts for quick comparison.
    shape_count: Vec<Vec<u8>>,
    shape_hash: Vec<u64>,
    /// Distinct edge shapes; edge `i` has shape `i % shapes`.
    shapes: usize,
    /// Per-color union-find over the vertices, undone on backtrack.
    parent: Vec<Vec<usize>>,
    size: Vec<Vec<usize>>,
    components: Vec<usize>,
    assignment: Vec<usize>,
    params: &'a Params,
    require_connected: bool,
    /// Skip colors that `shadowed` reports.
    merge_labels: bool,
    budget: SearchBudget,
    started: Instant,
    nodes: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn root(&self, c: usize, mut v: usize) -> usize {
        while self.parent[c][v] != v {
            v = self.parent[c][v];
        }
        v
    }

    /// An earlier color of the same degree holds exactly the same edge
    /// shapes as `c`. Swapping the two labels, and the matching copies of
    /// repeated edges, turns any solution using `c` here into one using the
    /// earlier color, so `c` need not be tried.
    fn shadowed(&self, c: usize) -> bool {
        let r = &self.params.r;
        (0..c).any(|d| {
            r[d] == r[c]
                && self.shape_hash[d] == self.shape_hash[c]
                && self.shape_count[d] == self.shape_count[c]
        })
    }

    /// Distinct components of color `c` the edge touches.
    fn touched(&self, c: usize, e: &[usize]) -> usize {
        let mut roots: Vec<usize> = e.iter().map(|&v| self.root(c, v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Assigns color `c` to edge `idx`, returning the union-find roots
    /// that were attached under another root.
    fn assign(&mut self, idx: usize, c: usize) -> Vec<usize> {
        let mut joined = Vec::new();
        for i in 0..self.edges[idx].len() {
            let v = self.edges[idx][i];
            self.residual[c][v] -= 1;
            let (a, b) = (self.root(c, self.edges[idx][0]), self.root(c, v));
            if a != b {
                let (big, small) = if self.size[c][a] >= self.size[c][b] {
                    (a, b)
                } else {
                    (b, a)
                };
                self.parent[c][small] = big;
                self.size[c][big] += self.size[c][small];
                self.components[c] -= 1;
                joined.push(small);
            }
        }
        self.needed[c] -= 1;
        self.shape_count[c][idx % self.shapes] += 1;
        self.shape_hash[c] = self.shape_hash[c].wrapping_add(shape_key(idx % self.shapes));
        self.assignment.push(c);
        joined
    }

    fn unassign(&mut self, idx: usize, c: usize, joined: Vec<usize>) {
        self.assignment.pop();
        self.needed[c] += 1;
        self.shape_count[c][idx % self.shapes] -= 1;
        self.shape_hash[c] = self.shape_hash[c].wrapping_sub(shape_key(idx % self.shapes));
        for small in joined.into_iter().rev() {
            let big = self.parent[c][small];
            self.size[c][big] -= self.size[c][small];
            self.parent[c][small] = small;
            self.components[c] += 1;
        }
        for &v in &self.edges[idx] {
            self.residual[c][v] += 1;
        }
    }

    /// Forward check on residual degrees: in every color, each vertex must
    /// be able to reach its residual degree using unassigned edges that fit
    /// the color, while the rest of the color's edges avoid it. Returns the
    /// per-color masks of fitting edges.
    fn fitting(&self, next: usize) -> Option<Vec<u64>> {
        let remaining =
            if next >= 64 { 0 } else { !0u64 << next } & (u64::MAX >> (64 - self.edges.len()));
        let mut out = Vec::with_capacity(self.residual.len());
        for (c, residual) in self.residual.iter().enumerate() {
            let mut fits = remaining;
            for (v, &left) in residual.iter().enumerate().skip(1) {
                if left == 0 {
                    fits &= !self.edges_of[v];
                }
            }
            let need = self.needed[c];
            if (fits.count_ones() as usize) < need {
                return None;
            }
            for (v, &left) in residual.iter().enumerate().skip(1) {
                let through = (fits & self.edges_of[v]).count_ones() as usize;
                let avoiding = (fits & !self.edges_of[v]).count_ones() as usize;
                if left > need || left > through || need - left > avoiding {
                    return None;
                }
            }
            out.push(fits);
        }
        Some(out)
    }

    fn run(&mut self, idx: usize) -> bool {
        if idx == self.edges.len() {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes.is_multiple_of(4096) && self.started.elapsed() > self.budget.time_limit)
        {
            self.exhausted = true;
            return false;
        }
        let Some(fits) = self.fitting(idx) else {
            return false;
        };
        let bit = 1u64 << idx;
        let e = &self.edges[idx];
        let mut order: Vec<(usize, usize)> = (0..self.residual.len())
            .filter(|&c| idx > 0 || c == 0)
            .filter(|&c| fits[c] & bit != 0)
            .filter(|&c| !self.merge_labels || !self.shadowed(c))
            .map(|c| {
                let touched = if self.require_connected && self.params.wants_connected(c) {
                    self.touched(c, e)
                } else {
                    0
                };
                (c, touched)
            })
            .collect();
        // colors where the edge joins more components go first
        order.sort_by_key(|&(c, touched)| (std::cmp::Reverse(touched), c));
        for (c, _) in order {
            let joined = self.assign(idx, c);
            let ok = !(self.require_connected
                && self.needed[c] == 0
                && self.params.wants_connected(c)
                && self.components[c] != 1);
            if ok && self.run(idx + 1) {
                return true;
            }
            self.unassign(idx, c, joined);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Searches for an `(r_1, …, r_k)`-factorization of `λK_n^h` by backtracking
/// over edge colors. Edges are taken in rounds, each round listing every
/// h-subset in lexicographic order. The first edge always gets color 1, and
/// of several colors with equal degree and identical contents only the
/// first is tried.
pub fn brute_force_factorize(
    params: &Params,
    require_connected: bool,
    budget: SearchBudget,
) -> Result<OracleOutcome> {
    factorize(params, require_connected, budget, true)
}

fn factorize(
    params: &Params,
    require_connected: bool,
    budget: SearchBudget,
    merge_labels: bool,
) -> Result<OracleOutcome> {
    let (n, h, lambda) = (params.n, params.h, params.lambda);
    if h == 0 || n <= h {
        return Err(Error::Unsupported(format!(
            "need n > h >= 1, got n = {n}, h = {h}"
        )));
    }
    if lambda == 0 || params.r.is_empty() || params.r.contains(&0) {
        return Err(Error::Param("lambda and every r_i must be positive".into()));
    }
    let within = u64::try_from(params.edge_count())
        .map(|c| c <= ORACLE_EDGE_LIMIT as u64)
        .unwrap_or(false);
    if !within {
        return Ok(OracleOutcome::Unknown(Unknown::TooLarge));
    }

    // Degree counting: color c has r_c·n/h edges, and they must add up to
    // the edge total.
    let mut needed = Vec::with_capacity(params.k());
    for &rc in &params.r {
        if rc * n % h != 0 {
            return Ok(OracleOutcome::None);
        }
        needed.push(rc * n / h);
    }
    let shapes: Vec<Vec<usize>> = (1..=n).combinations(h).collect();
    let edges: Vec<Vec<usize>> = shapes
        .iter()
        .cycle()
        .take(shapes.len() * lambda)
        .cloned()
        .collect();
    let shapes = shapes.len();
    if needed.iter().sum::<usize>() != edges.len() {
        return Ok(OracleOutcome::None);
    }

    let mut edges_of = vec![0u64; n + 1];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            edges_of[v] |= 1 << i;
        }
    }
    let k = params.k();
    let mut search = Search {
        edges_of,
        parent: vec![(0..=n).collect(); k],
        size: vec![vec![1; n + 1]; k],
        components: vec![n; k],
        shape_count: vec![vec![0; shapes]; k],
        shape_hash: vec![0; k],
        shapes,
        residual: params.r.iter().map(|&rc| vec![rc; n + 1]).collect(),
        needed,
        assignment: Vec::with_capacity(edges.len()),
        edges,
        params,
        require_connected,
        merge_labels,
        budget,
        started: Instant::now(),
        nodes: 0,
        exhausted: false,
    };
    if search.run(0) {
        let mut factors = vec![Vec::new(); params.k()];
        for (e, &c) in search.edges.iter().zip(&search.assignment) {
            factors[c].push(e.iter().map(|&v| v as u32).collect());
        }
        let mut f = Factorization {
            n,
            h,
            lambda,
            r: params.r.clone(),
            factors,
        };
        f.canonicalize();
        Ok(OracleOutcome::Found(f))
    } else if search.exhausted {
        Ok(OracleOutcome::Unknown(Unknown::BudgetExhausted))
    } else {
        Ok(OracleOutcome::None)
    }
}

/// Every `A ⊆ ground` with `|A ∩ P| ≈ |P|/m` for all `P` in both families
/// and the ground set itself.
pub fn exhaustive_select<T: Ord + Clone>(
    ground: &BTreeSet<T>,
    fam_a: &LaminarFamily<T>,
    fam_b: &LaminarFamily<T>,
    m: usize,
) -> Result<Vec<BTreeSet<T>>> {
    if ground.len() > EXHAUSTIVE_GROUND_LIMIT {
        return Err(Error::TooLarge(format!(
            "ground set of {} elements, limit {EXHAUSTIVE_GROUND_LIMIT}",
            ground.len()
        )));
    }
    if m == 0 {
        return Err(Error::Param("divisor m must be at least 1".into()));
    }
    let elements: Vec<&T> = ground.iter().collect();
    let mask_of = |set: &BTreeSet<T>| -> u32 {
        elements
            .iter()
            .enumerate()
            .filter(|(_, x)| set.contains(x))
            .fold(0u32, |acc, (i, _)| acc | (1 << i))
    };
    let masks: Vec<(u32, usize)> = std::iter::once(ground)
        .chain(fam_a.sets().iter().map(|s| &s.members))
        .chain(fam_b.sets().iter().map(|s| &s.members))
        .map(|s| (mask_of(s), s.len()))
        .collect();
    Ok((0u32..1 << elements.len())
        .filter(|&a| {
            masks
                .iter()
                .all(|&(p, size)| within_bounds((a & p).count_ones() as usize, size, m))
        })
        .map(|a| {
            elements
                .iter()
                .enumerate()
                .filter(|(i, _)| a >> i & 1 == 1)
                .map(|(_, &x)| x.clone())
                .collect()
        })
        .collect())
}
