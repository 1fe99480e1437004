//! Feasibility, the initial amalgam, and the detachment loop.
//!
//! Construction starts from a single vertex α carrying `λ·C(n, h)` loops and
//! splits one new vertex off α per step. At stage `ℓ` (ℓ vertices) the split
//! picks an equalized selection of α-hinges with divisor `n - ℓ + 1` and moves
//! exactly those hinges to the new vertex. After `n - 1` splits the
//! hypergraph is `λK_n^h` with each color class a connected factor.

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercore::{binom, ColoredMultiHypergraph, VertexId};
use crate::laminar::{build_family_a, build_family_b, equalized_select};
use crate::verify::{verify_factorization, verify_stage, VerificationReport};
use crate::wings::wing_decomposition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub h: usize,
    pub lambda: usize,
    pub r: Vec<usize>,
}

impl Params {
    pub fn new(n: usize, h: usize, lambda: usize, r: Vec<usize>) -> Self {
        Params { n, h, lambda, r }
    }

    pub fn k(&self) -> usize {
        self.r.len()
    }

    /// Whether factor `i` (0-based) must be connected: `r_i >= 2`, and
    /// `h >= 2` since singleton edges never join two vertices.
    pub fn wants_connected(&self, i: usize) -> bool {
        connectivity_applies(self.h, self.r[i])
    }

    /// `λ·C(n, h)`.
    pub fn edge_count(&self) -> BigUint {
        binom(self.n as u64, self.h as i64) * BigUint::from(self.lambda)
    }

    /// `λ·C(n-1, h-1)`, the degree of every vertex of `λK_n^h`.
    pub fn total_degree(&self) -> BigUint {
        binom(self.n as u64 - 1, self.h as i64 - 1) * BigUint::from(self.lambda)
    }

    fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(Error::Param("h must be at least 1".into()));
        }
        if self.n <= self.h {
            return Err(Error::Unsupported(format!(
                "need n > h, got n = {} and h = {}",
                self.n, self.h
            )));
        }
        if self.lambda == 0 {
            return Err(Error::Param("lambda must be at least 1".into()));
        }
        if self.r.is_empty() {
            return Err(Error::Param("r must have at least one entry".into()));
        }
        if let Some(i) = self.r.iter().position(|&x| x == 0) {
            return Err(Error::Param(format!("r[{}] must be positive", i + 1)));
        }
        Ok(())
    }
}

pub(crate) fn connectivity_applies(h: usize, ri: usize) -> bool {
    h >= 2 && ri >= 2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub params: Params,
    pub conditions: Vec<ConditionCheck>,
    /// Per factor: whether connectivity is guaranteed (`r_i >= 2`, `h >= 2`).
    pub connected: Vec<bool>,
    pub ok: bool,
}

impl FeasibilityReport {
    pub fn violations(&self) -> impl Iterator<Item = &ConditionCheck> {
        self.conditions.iter().filter(|c| !c.holds)
    }
}

/// Decides whether `λK_n^h` has an `(r_1, …, r_k)`-factorization.
pub fn check_feasibility(params: &Params) -> Result<FeasibilityReport> {
    params.validate()?;
    let (n, h) = (params.n, params.h);
    let mut conditions: Vec<ConditionCheck> = params
        .r
        .iter()
        .enumerate()
        .map(|(i, &ri)| {
            let product = ri as u128 * n as u128;
            ConditionCheck {
                name: format!("divisibility[{}]", i + 1),
                holds: product.is_multiple_of(h as u128),
                detail: format!(
                    "h = {h} must divide r_{} * n = {ri} * {n} = {product}",
                    i + 1
                ),
            }
        })
        .collect();
    let sum: BigUint = params.r.iter().map(|&x| BigUint::from(x)).sum();
    let target = params.total_degree();
    conditions.push(ConditionCheck {
        name: "degree-sum".into(),
        holds: sum == target,
        detail: format!("sum of r = {sum}, lambda * C(n-1, h-1) = {target}"),
    });
    let ok = conditions.iter().all(|c| c.holds);
    Ok(FeasibilityReport {
        params: params.clone(),
        connected: (0..params.k()).map(|i| params.wants_connected(i)).collect(),
        conditions,
        ok,
    })
}

/// How much stage checking `construct` performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    /// Every stage invariant after every split, plus the final check.
    Full,
    /// Only the final factorization.
    Final,
    Off,
}

impl CheckMode {
    pub fn default_for(params: &Params) -> Self {
        if params.n <= 10 {
            CheckMode::Full
        } else {
            CheckMode::Final
        }
    }
}

/// The amalgam vertex is given the last output label.
pub fn amalgam_id(params: &Params) -> VertexId {
    VertexId(params.n as u32)
}

/// One vertex α with `r_i·n/h` loops `{α^h}` of each color `i`.
pub fn initial_amalgam(params: &Params) -> Result<ColoredMultiHypergraph> {
    let report = check_feasibility(params)?;
    if !report.ok {
        return Err(Error::Infeasible(Box::new(report)));
    }
    if u32::try_from(params.n).is_err() {
        return Err(Error::TooLarge(format!("n = {} vertices", params.n)));
    }
    let alpha = amalgam_id(params);
    let mut g = ColoredMultiHypergraph::new(params.h, params.k(), alpha)?;
    let edge = vec![alpha; params.h];
    for (i, &ri) in params.r.iter().enumerate() {
        for _ in 0..ri * params.n / params.h {
            g.add_edge(&edge, i + 1)?;
        }
    }
    Ok(g)
}

/// Splits a new vertex `β = ℓ` off α, taking the stage-`ℓ` hypergraph to
/// stage `ℓ + 1`. Returns `β`.
pub fn split_step(
    g: &mut ColoredMultiHypergraph,
    ell: usize,
    params: &Params,
    seed: u64,
) -> Result<VertexId> {
    if ell == 0 || ell >= params.n {
        return Err(Error::Param(format!(
            "split stage must be in 1..{}, got {ell}",
            params.n
        )));
    }
    if g.n_current() != ell {
        return Err(Error::Param(format!(
            "hypergraph has {} vertices, expected {ell}",
            g.n_current()
        )));
    }
    let m = params.n - ell + 1;
    let decomps: Vec<_> = (1..=g.k()).map(|c| wing_decomposition(g, c)).collect();
    let fam_a = build_family_a(g, &decomps)?;
    let fam_b = build_family_b(g)?;
    let selection = equalized_select(fam_a.ground(), &fam_a, &fam_b, m, seed)?;
    if !selection.satisfies(&fam_a) || !selection.satisfies(&fam_b) {
        return Err(Error::Invariant(format!(
            "stage {ell}: selection violates a rounding bound"
        )));
    }

    let beta = VertexId(ell as u32);
    g.add_vertex(beta)?;
    let chosen: Vec<_> = selection.chosen.into_iter().collect();
    g.detach(&chosen, beta)?;

    for (i, &ri) in params.r.iter().enumerate() {
        let d = g.degree(beta, Some(i + 1))?;
        if d != ri {
            return Err(Error::Invariant(format!(
                "stage {ell}: new vertex has degree {d} in color {}, expected {ri}",
                i + 1
            )));
        }
    }
    if let Some(e) = g.edges().iter().find(|e| e.multiplicity_of(beta) > 1) {
        return Err(Error::Invariant(format!(
            "stage {ell}: edge {} received two hinges",
            e.id()
        )));
    }
    Ok(beta)
}

/// A finished factorization of `λK_n^h` over vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub n: usize,
    pub h: usize,
    pub lambda: usize,
    pub r: Vec<usize>,
    /// `factors[i]` holds the edges of color `i + 1`.
    pub factors: Vec<Vec<Vec<u32>>>,
}

impl Factorization {
    pub fn params(&self) -> Params {
        Params::new(self.n, self.h, self.lambda, self.r.clone())
    }

    /// Sorts vertices within edges and edges within factors.
    pub fn canonicalize(&mut self) {
        for factor in &mut self.factors {
            for e in factor.iter_mut() {
                e.sort_unstable();
            }
            factor.sort();
        }
    }

    pub fn edge_count(&self) -> usize {
        self.factors.iter().map(Vec::len).sum()
    }
}

/// Reads the color classes off a stage-`n` hypergraph.
pub fn to_factorization(g: &ColoredMultiHypergraph, params: &Params) -> Factorization {
    let mut factors = vec![Vec::new(); g.k()];
    for e in g.edges() {
        factors[e.color() - 1].push(e.verts().iter().map(|v| v.0).collect());
    }
    let mut f = Factorization {
        n: params.n,
        h: params.h,
        lambda: params.lambda,
        r: params.r.clone(),
        factors,
    };
    f.canonicalize();
    f
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub factorization: Factorization,
    /// Stage reports for `ℓ = 1..=n` when checking is `Full`.
    pub stages: Vec<VerificationReport>,
    pub final_report: Option<VerificationReport>,
}

fn require(report: VerificationReport) -> Result<VerificationReport> {
    if report.overall {
        Ok(report)
    } else {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.witness.as_deref().unwrap_or("-")))
            .collect();
        Err(Error::Invariant(format!(
            "{} failed: {}",
            report.stage,
            failed.join(", ")
        )))
    }
}

/// Runs the whole construction with the given checking level.
pub fn construct_checked(params: &Params, seed: u64, mode: CheckMode) -> Result<Construction> {
    let mut g = initial_amalgam(params)?;
    let mut stages = Vec::new();
    if mode == CheckMode::Full {
        stages.push(require(verify_stage(&g, 1, params))?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for ell in 1..params.n {
        split_step(&mut g, ell, params, rng.next_u64())?;
        if mode == CheckMode::Full {
            stages.push(require(verify_stage(&g, ell + 1, params))?);
        }
    }
    let factorization = to_factorization(&g, params);
    let final_report = match mode {
        CheckMode::Off => None,
        _ => Some(require(verify_factorization(&factorization))?),
    };
    Ok(Construction {
        factorization,
        stages,
        final_report,
    })
}

/// Builds a factorization with the default checking level for `params`.
pub fn construct(params: &Params, seed: u64) -> Result<Factorization> {
    construct_checked(params, seed, CheckMode::default_for(params)).map(|c| c.factorization)
}
