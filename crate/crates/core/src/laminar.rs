//! Laminar families over the α-hinges and equalized selection.
//!
//! Two laminar families are built at every detachment step. Family A nests
//! edge hinge sets inside wing hinge sets inside the per-color sets; family B
//! groups hinges by the shape `{α^p} ∪ U` of their edge. [`equalized_select`]
//! picks a subset that meets every member set in `⌊|P|/m⌋` or `⌈|P|/m⌉`
//! elements, found as an integral flow through the two laminar forests.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::BoundedNetwork;
use crate::hypercore::{ColoredMultiHypergraph, HingeRef, VertexId};
use crate::wings::WingDecomposition;

/// Where a member set came from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SetTag {
    /// All α-hinges in edges of this color.
    Color(usize),
    /// Union of the wing hinge sets of this color with at least two hinges.
    BigWings(usize),
    Wing {
        color: usize,
        index: usize,
    },
    Edge(usize),
    /// α-hinges of all edges equal to `{α^p} ∪ U`.
    Cell {
        p: usize,
        u: Vec<VertexId>,
    },
    Other(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberSet<T> {
    pub tag: SetTag,
    pub members: BTreeSet<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaminarFamily<T> {
    ground: BTreeSet<T>,
    sets: Vec<MemberSet<T>>,
}

/// Nesting structure of a laminar family over element indices.
struct Forest {
    /// Parent of each distinct nonempty set; `None` means the virtual root.
    parent: Vec<Option<usize>>,
    sizes: Vec<usize>,
    /// Smallest set containing each element.
    leaf_of: Vec<Option<usize>>,
}

impl<T: Ord + Clone> LaminarFamily<T> {
    pub fn new(ground: BTreeSet<T>) -> Self {
        LaminarFamily {
            ground,
            sets: Vec::new(),
        }
    }

    pub fn ground(&self) -> &BTreeSet<T> {
        &self.ground
    }

    pub fn sets(&self) -> &[MemberSet<T>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn push(&mut self, tag: SetTag, members: BTreeSet<T>) -> Result<()> {
        if !members.is_subset(&self.ground) {
            return Err(Error::Param(format!(
                "member set {tag:?} is not contained in the ground set"
            )));
        }
        self.sets.push(MemberSet { tag, members });
        Ok(())
    }

    /// Pairwise nested-or-disjoint test.
    pub fn is_laminar(&self) -> bool {
        self.sets.iter().enumerate().all(|(i, a)| {
            self.sets[i + 1..].iter().all(|b| {
                a.members.is_subset(&b.members)
                    || b.members.is_subset(&a.members)
                    || a.members.is_disjoint(&b.members)
            })
        })
    }

    /// Builds the nesting forest, failing if the family is not laminar.
    fn forest(&self, index: &BTreeMap<&T, usize>) -> Result<Forest> {
        let mut distinct: Vec<Vec<usize>> = self
            .sets
            .iter()
            .filter(|s| !s.members.is_empty())
            .map(|s| s.members.iter().map(|x| index[x]).collect())
            .collect();
        distinct.sort_by(|a: &Vec<usize>, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        distinct.dedup();

        let mut leaf_of: Vec<Option<usize>> = vec![None; index.len()];
        let mut parent = Vec::with_capacity(distinct.len());
        let mut sizes = Vec::with_capacity(distinct.len());
        for (id, set) in distinct.iter().enumerate() {
            let above = leaf_of[set[0]];
            if set.iter().any(|&x| leaf_of[x] != above) {
                return Err(Error::Invariant(
                    "member sets overlap without nesting; family is not laminar".into(),
                ));
            }
            for &x in set {
                leaf_of[x] = Some(id);
            }
            parent.push(above);
            sizes.push(set.len());
        }
        Ok(Forest {
            parent,
            sizes,
            leaf_of,
        })
    }

    /// Verifies laminarity via the forest construction (linear time).
    pub fn validate(&self) -> Result<()> {
        let index: BTreeMap<&T, usize> = self
            .ground
            .iter()
            .enumerate()
            .map(|(i, x)| (x, i))
            .collect();
        self.forest(&index).map(|_| ())
    }
}

/// `⌊size/m⌋ <= count <= ⌈size/m⌉`.
pub fn within_bounds(count: usize, size: usize, m: usize) -> bool {
    count >= size / m && count <= size.div_ceil(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection<T> {
    pub chosen: BTreeSet<T>,
    pub m: usize,
}

impl<T: Ord> Selection<T> {
    pub fn meets(&self, set: &BTreeSet<T>) -> bool {
        within_bounds(self.chosen.intersection(set).count(), set.len(), self.m)
    }

    /// Checks the rounding bounds for every member of `family` and its ground.
    pub fn satisfies(&self, family: &LaminarFamily<T>) -> bool
    where
        T: Clone,
    {
        self.meets(family.ground()) && family.sets().iter().all(|s| self.meets(&s.members))
    }
}

/// Chooses `A ⊆ ground` with `|A ∩ P| ≈ |P|/m` for every `P` in `fam_a`,
/// `fam_b` and `{ground}`. Deterministic for a fixed seed.
pub fn equalized_select<T: Ord + Clone>(
    ground: &BTreeSet<T>,
    fam_a: &LaminarFamily<T>,
    fam_b: &LaminarFamily<T>,
    m: usize,
    seed: u64,
) -> Result<Selection<T>> {
    if m == 0 {
        return Err(Error::Param("divisor m must be at least 1".into()));
    }
    if fam_a.ground() != ground || fam_b.ground() != ground {
        return Err(Error::Param("families must share the ground set".into()));
    }
    let elements: Vec<&T> = ground.iter().collect();
    let index: BTreeMap<&T, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let forest_a = fam_a.forest(&index)?;
    let forest_b = fam_b.forest(&index)?;

    let lo = |size: usize| (size / m) as i64;
    let hi = |size: usize| size.div_ceil(m) as i64;

    // Flow runs root_a -> A sets (downward) -> elements -> B sets (upward)
    // -> root_b -> root_a, so the flow through any set node equals the number
    // of chosen elements it contains.
    let mut net = BoundedNetwork::new();
    let root_a = net.add_node();
    let nodes_a: Vec<usize> = forest_a.parent.iter().map(|_| net.add_node()).collect();
    let root_b = net.add_node();
    let nodes_b: Vec<usize> = forest_b.parent.iter().map(|_| net.add_node()).collect();

    for (id, parent) in forest_a.parent.iter().enumerate() {
        let from = parent.map_or(root_a, |p| nodes_a[p]);
        let size = forest_a.sizes[id];
        net.add_arc(from, nodes_a[id], lo(size), hi(size));
    }
    for (id, parent) in forest_b.parent.iter().enumerate() {
        let to = parent.map_or(root_b, |p| nodes_b[p]);
        let size = forest_b.sizes[id];
        net.add_arc(nodes_b[id], to, lo(size), hi(size));
    }
    net.add_arc(root_b, root_a, lo(elements.len()), hi(elements.len()));

    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let element_arcs: Vec<(usize, usize)> = order
        .iter()
        .map(|&x| {
            let from = forest_a.leaf_of[x].map_or(root_a, |s| nodes_a[s]);
            let to = forest_b.leaf_of[x].map_or(root_b, |s| nodes_b[s]);
            (x, net.add_arc(from, to, 0, 1))
        })
        .collect();

    let flow = net.feasible_circulation().ok_or_else(|| {
        Error::Invariant("no equalized selection exists for laminar inputs".into())
    })?;
    let chosen = element_arcs
        .iter()
        .filter(|&&(_, arc)| flow[arc] == 1)
        .map(|&(x, _)| elements[x].clone())
        .collect();
    Ok(Selection { chosen, m })
}

/// Family A: per color, the color's α-hinges, the big-wing union, every
/// wing, and every α-incident edge.
pub fn build_family_a(
    g: &ColoredMultiHypergraph,
    decomps: &[WingDecomposition],
) -> Result<LaminarFamily<HingeRef>> {
    let alpha = g.alpha();
    let ground: BTreeSet<HingeRef> = g.hinges_at(alpha)?.into_iter().collect();
    let mut fam = LaminarFamily::new(ground);
    for color in 1..=g.k() {
        let hinges = g
            .color_edges(color)
            .flat_map(|e| g.edge_hinges(e.id(), alpha))
            .collect();
        fam.push(SetTag::Color(color), hinges)?;
    }
    for d in decomps {
        fam.push(SetTag::BigWings(d.color), d.big_hinges.clone())?;
        for (index, w) in d.wings.iter().enumerate() {
            fam.push(
                SetTag::Wing {
                    color: d.color,
                    index,
                },
                w.hinges.iter().copied().collect(),
            )?;
        }
    }
    for e in g.edges() {
        let hinges: BTreeSet<HingeRef> = g.edge_hinges(e.id(), alpha).into_iter().collect();
        if !hinges.is_empty() {
            fam.push(SetTag::Edge(e.id()), hinges)?;
        }
    }
    fam.validate()?;
    Ok(fam)
}

/// Family B: α-hinges grouped by edge shape `{α^p} ∪ U`, `p >= 1`.
pub fn build_family_b(g: &ColoredMultiHypergraph) -> Result<LaminarFamily<HingeRef>> {
    let alpha = g.alpha();
    let ground: BTreeSet<HingeRef> = g.hinges_at(alpha)?.into_iter().collect();
    let mut cells: BTreeMap<(usize, Vec<VertexId>), BTreeSet<HingeRef>> = BTreeMap::new();
    for e in g.edges() {
        let p = e.multiplicity_of(alpha);
        if p == 0 {
            continue;
        }
        cells
            .entry((p, e.others(alpha).collect()))
            .or_default()
            .extend(g.edge_hinges(e.id(), alpha));
    }
    let mut fam = LaminarFamily::new(ground);
    for ((p, u), members) in cells {
        fam.push(SetTag::Cell { p, u }, members)?;
    }
    Ok(fam)
}
