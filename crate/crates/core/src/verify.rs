//! Stage invariants during construction and validity of a finished
//! factorization.
//!
//! `verify_factorization` only looks at the [`Factorization`] value, so it
//! checks external files and oracle output the same way it checks
//! construction output.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::detach::{connectivity_applies, Factorization, Params};
use crate::hypercore::{small_binom, ColoredMultiHypergraph, VertexId};
use crate::wings::{color_class_connected, wing_decomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Level(usize),
    Final,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Level(l) => write!(f, "stage {l}"),
            Stage::Final => write!(f, "final"),
        }
    }
}

impl Serialize for Stage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Stage::Level(l) => s.serialize_u64(*l as u64),
            Stage::Final => s.serialize_str("final"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn from_witness(name: &str, witness: Option<String>) -> Self {
        Check {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub stage: Stage,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    fn new(stage: Stage, checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        VerificationReport {
            stage,
            checks,
            overall,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
    }
}

pub const STAGE_DEGREE: &str = "degree";
pub const STAGE_MULTIPLICITY: &str = "multiplicity";
pub const STAGE_HINGE_BOUND: &str = "hinge-bound";
pub const STAGE_CONNECTIVITY: &str = "connectivity";
pub const STAGE_WING_DEGREE: &str = "wing-degree";

/// Evaluates the stage-`ell` invariants on `g`.
///
/// With `m = n - ell + 1`: α has degree `r_i·m` and every other vertex degree
/// `r_i` in each color; every shape `{α^p} ∪ U` occurs `λ·C(m, p)` times; no
/// edge holds more than `m` α-hinges; colors with `r_i >= 2` are connected
/// (when `h >= 2`) and for `ell < n` their big-wing hinge count is `r_i·m`.
pub fn verify_stage(g: &ColoredMultiHypergraph, ell: usize, params: &Params) -> VerificationReport {
    let stage = Stage::Level(ell);
    if ell == 0 || ell > params.n || g.n_current() != ell || g.k() != params.k() {
        return VerificationReport::new(
            stage,
            vec![Check::from_witness(
                "shape",
                Some(format!(
                    "{} vertices and {} colors at stage {ell} for n = {}, k = {}",
                    g.n_current(),
                    g.k(),
                    params.n,
                    params.k()
                )),
            )],
        );
    }
    let m = params.n - ell + 1;
    let alpha = g.alpha();
    let h = params.h;
    let mut checks = Vec::new();

    let degree = g.vertices().find_map(|u| {
        params.r.iter().enumerate().find_map(|(i, &ri)| {
            let expected = if u == alpha { ri * m } else { ri };
            let actual = g.degree(u, Some(i + 1)).unwrap_or(usize::MAX);
            (actual != expected).then(|| {
                format!(
                    "vertex {u}, color {}: expected {expected}, found {actual}",
                    i + 1
                )
            })
        })
    });
    checks.push(Check::from_witness(STAGE_DEGREE, degree));

    let multiplicity = (|| {
        let mut counts: HashMap<(usize, Vec<VertexId>), usize> = HashMap::new();
        for e in g.edges() {
            let others: Vec<VertexId> = e.others(alpha).collect();
            if others.windows(2).any(|w| w[0] == w[1]) {
                return Some(format!("edge {} repeats a vertex other than α", e.id()));
            }
            *counts
                .entry((e.multiplicity_of(alpha), others))
                .or_default() += 1;
        }
        let rest: Vec<VertexId> = g.vertices().filter(|&v| v != alpha).collect();
        for p in 0..=h {
            let expected = params.lambda * small_binom(m, p);
            for set in rest.iter().copied().combinations(h - p) {
                let actual = counts.get(&(p, set.clone())).copied().unwrap_or(0);
                if actual != expected {
                    return Some(format!(
                        "m(α^{p}, {set:?}): expected {expected}, found {actual}"
                    ));
                }
            }
        }
        None
    })();
    checks.push(Check::from_witness(STAGE_MULTIPLICITY, multiplicity));

    let hinge_bound = g.edges().iter().find_map(|e| {
        let p = e.multiplicity_of(alpha);
        (p > m).then(|| format!("edge {} has {p} α-hinges, bound {m}", e.id()))
    });
    checks.push(Check::from_witness(STAGE_HINGE_BOUND, hinge_bound));

    let connectivity = params
        .r
        .iter()
        .enumerate()
        .find(|&(i, _)| params.wants_connected(i) && !color_class_connected(g, i + 1))
        .map(|(i, _)| format!("color {} is disconnected", i + 1));
    checks.push(Check::from_witness(STAGE_CONNECTIVITY, connectivity));

    if ell < params.n {
        let wing_degree = params.r.iter().enumerate().find_map(|(i, &ri)| {
            if !params.wants_connected(i) {
                return None;
            }
            let delta = wing_decomposition(g, i + 1).delta();
            (delta != ri * m)
                .then(|| format!("color {}: expected {}, found {delta}", i + 1, ri * m))
        });
        checks.push(Check::from_witness(STAGE_WING_DEGREE, wing_degree));
    }

    VerificationReport::new(stage, checks)
}

pub const EDGE_SHAPE: &str = "edge-shape";
pub const MULTIPLICITY: &str = "multiplicity";
pub const REGULARITY: &str = "regularity";
pub const CONNECTIVITY: &str = "connectivity";
pub const PARAMETERS: &str = "parameters";

/// Largest `C(n, h)` for which every subset is enumerated individually.
const ENUMERATION_LIMIT: usize = 10_000_000;

/// Vertex set of an edge, restricted to `1..=n`.
fn support(edge: &[u32], n: usize) -> Vec<u32> {
    let mut s: Vec<u32> = edge
        .iter()
        .copied()
        .filter(|&v| v >= 1 && v as usize <= n)
        .collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// First vertex of `1..=n` not reachable from vertex 1, if any.
fn unreachable_vertex(n: usize, edges: &[Vec<u32>]) -> Option<u32> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (id, e) in edges.iter().enumerate() {
        for v in e {
            incident[*v as usize].push(id);
        }
    }
    let mut seen = vec![false; n + 1];
    let mut used = vec![false; edges.len()];
    seen[1] = true;
    let mut queue = VecDeque::from([1usize]);
    while let Some(u) = queue.pop_front() {
        for &id in &incident[u] {
            if std::mem::replace(&mut used[id], true) {
                continue;
            }
            for &w in &edges[id] {
                if !std::mem::replace(&mut seen[w as usize], true) {
                    queue.push_back(w as usize);
                }
            }
        }
    }
    (1..=n).find(|&v| !seen[v]).map(|v| v as u32)
}

/// Checks that `f` is an `(r_1, …, r_k)`-factorization of `λK_n^h`.
///
/// Edge-level checks after the first use the vertex set of each edge, so a
/// malformed edge is reported by `edge-shape` alone.
pub fn verify_factorization(f: &Factorization) -> VerificationReport {
    let (n, h, lambda) = (f.n, f.h, f.lambda);
    let mut checks = Vec::new();

    let shape = f.factors.iter().enumerate().find_map(|(i, factor)| {
        factor.iter().find_map(|e| {
            let distinct: BTreeSet<u32> = e.iter().copied().collect();
            if e.len() != h {
                Some(format!(
                    "factor {}: edge {e:?} has size {}, expected {h}",
                    i + 1,
                    e.len()
                ))
            } else if distinct.len() != e.len() {
                Some(format!("factor {}: edge {e:?} repeats a vertex", i + 1))
            } else if e.iter().any(|&v| v == 0 || v as usize > n) {
                Some(format!("factor {}: edge {e:?} leaves 1..={n}", i + 1))
            } else {
                None
            }
        })
    });
    checks.push(Check::from_witness(EDGE_SHAPE, shape));

    let supports: Vec<Vec<Vec<u32>>> = f
        .factors
        .iter()
        .map(|factor| factor.iter().map(|e| support(e, n)).collect())
        .collect();

    let multiplicity = {
        let mut counts: HashMap<&[u32], usize> = HashMap::new();
        for e in supports.iter().flatten() {
            *counts.entry(e.as_slice()).or_default() += 1;
        }
        let total = crate::hypercore::binom_u64(n as u64, h as i64)
            .and_then(|c| usize::try_from(c).ok())
            .filter(|&c| c <= ENUMERATION_LIMIT);
        match total {
            Some(_) => (1..=n as u32).combinations(h).find_map(|set| {
                let actual = counts.get(set.as_slice()).copied().unwrap_or(0);
                (actual != lambda)
                    .then(|| format!("subset {set:?}: expected {lambda}, found {actual}"))
            }),
            None => Some(format!("C({n}, {h}) is too large to enumerate")),
        }
    };
    checks.push(Check::from_witness(MULTIPLICITY, multiplicity));

    let regularity = supports
        .iter()
        .zip(&f.r)
        .enumerate()
        .find_map(|(i, (factor, &ri))| {
            let mut deg = vec![0usize; n + 1];
            for e in factor {
                for &v in e {
                    deg[v as usize] += 1;
                }
            }
            (1..=n).find(|&v| deg[v] != ri).map(|v| {
                format!(
                    "factor {}: vertex {v} has degree {}, expected {ri}",
                    i + 1,
                    deg[v]
                )
            })
        });
    checks.push(Check::from_witness(REGULARITY, regularity));

    let connectivity = supports
        .iter()
        .zip(&f.r)
        .enumerate()
        .find_map(|(i, (factor, &ri))| {
            if !connectivity_applies(h, ri) || n == 0 {
                return None;
            }
            unreachable_vertex(n, factor)
                .map(|v| format!("factor {}: vertex {v} not reachable from vertex 1", i + 1))
        });
    checks.push(Check::from_witness(CONNECTIVITY, connectivity));

    let parameters = if f.r.len() != f.factors.len() {
        Some(format!(
            "{} degrees declared for {} factors",
            f.r.len(),
            f.factors.len()
        ))
    } else if n <= h || h == 0 {
        Some(format!("need n > h >= 1, got n = {n}, h = {h}"))
    } else {
        let sum: usize = f.r.iter().sum();
        let target = lambda * small_binom(n - 1, h - 1);
        (sum != target).then(|| format!("sum of r = {sum}, lambda * C(n-1, h-1) = {target}"))
    };
    checks.push(Check::from_witness(PARAMETERS, parameters));

    VerificationReport::new(Stage::Final, checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detach::{initial_amalgam, Params};

    fn walecki() -> Factorization {
        Factorization {
            n: 5,
            h: 2,
            lambda: 1,
            r: vec![2, 2],
            factors: vec![
                vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![1, 5]],
                vec![vec![1, 3], vec![3, 5], vec![2, 5], vec![2, 4], vec![1, 4]],
            ],
        }
    }

    #[test]
    fn hand_built_walecki_passes() {
        let rep = verify_factorization(&walecki());
        assert!(rep.overall, "{rep:?}");
        assert_eq!(rep.checks.len(), 5);
    }

    #[test]
    fn two_triangles_fail_connectivity_only() {
        let f = Factorization {
            n: 6,
            h: 2,
            lambda: 1,
            r: vec![2, 2, 1],
            factors: vec![
                vec![
                    vec![1, 2],
                    vec![2, 3],
                    vec![1, 3],
                    vec![4, 5],
                    vec![5, 6],
                    vec![4, 6],
                ],
                vec![
                    vec![1, 4],
                    vec![2, 4],
                    vec![2, 5],
                    vec![3, 5],
                    vec![3, 6],
                    vec![1, 6],
                ],
                vec![vec![1, 5], vec![2, 6], vec![3, 4]],
            ],
        };
        let rep = verify_factorization(&f);
        assert_eq!(rep.failed().collect::<Vec<_>>(), vec![CONNECTIVITY]);
        assert!(rep
            .check(CONNECTIVITY)
            .unwrap()
            .witness
            .as_ref()
            .unwrap()
            .contains("factor 1"));
    }

    #[test]
    fn duplicated_edge_breaks_multiplicity() {
        let mut f = walecki();
        f.factors[0][0] = vec![1, 3];
        let rep = verify_factorization(&f);
        assert!(!rep.check(MULTIPLICITY).unwrap().passed);
    }

    #[test]
    fn base_stage_passes() {
        let params = Params::new(5, 2, 1, vec![2, 2]);
        let g = initial_amalgam(&params).unwrap();
        let rep = verify_stage(&g, 1, &params);
        assert!(rep.overall, "{rep:?}");
        assert_eq!(g.multiplicity(g.alpha(), 2, &[]).unwrap(), 10);
        assert_eq!(wing_decomposition(&g, 1).delta(), 10);
    }

    #[test]
    fn recolored_edge_fails_degree() {
        let params = Params::new(5, 2, 1, vec![2, 2]);
        let mut g = initial_amalgam(&params).unwrap();
        let id = g.color_edges(1).next().unwrap().id();
        g.set_color(id, 2).unwrap();
        let rep = verify_stage(&g, 1, &params);
        let degree = rep.check(STAGE_DEGREE).unwrap();
        assert!(!degree.passed);
        assert!(degree.witness.as_ref().unwrap().contains("color 1"));
    }

    #[test]
    fn wrong_stage_index_is_reported() {
        let params = Params::new(5, 2, 1, vec![2, 2]);
        let g = initial_amalgam(&params).unwrap();
        assert!(!verify_stage(&g, 2, &params).overall);
    }
}
