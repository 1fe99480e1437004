//! Multiset hypergraphs with colored edge instances and addressable hinges.
//!
//! Edges are stored as individual instances with stable ids. An edge is a
//! sorted multiset of vertices; the `j`-th occurrence of a vertex inside an
//! edge is addressed by a [`HingeRef`] with `slot == j`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// One occurrence of `vertex` inside edge `edge_id`.
///
/// Slots are 1-based and positional: slot `j` is the `j`-th copy of `vertex`
/// in the edge. A reference goes stale as soon as its edge is mutated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HingeRef {
    pub edge_id: usize,
    pub vertex: VertexId,
    pub slot: usize,
    epoch: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeInstance {
    id: usize,
    verts: Vec<VertexId>,
    color: usize,
    epoch: u32,
}

impl EdgeInstance {
    pub fn id(&self) -> usize {
        self.id
    }

    /// Vertices in ascending order, repeated according to multiplicity.
    pub fn verts(&self) -> &[VertexId] {
        &self.verts
    }

    pub fn color(&self) -> usize {
        self.color
    }

    pub fn multiplicity_of(&self, v: VertexId) -> usize {
        self.verts.iter().filter(|&&u| u == v).count()
    }

    /// The vertices other than `v`, with multiplicity.
    pub fn others(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.verts.iter().copied().filter(move |&u| u != v)
    }

    fn hinges(&self, v: VertexId) -> impl Iterator<Item = HingeRef> + '_ {
        (1..=self.multiplicity_of(v)).map(move |slot| HingeRef {
            edge_id: self.id,
            vertex: v,
            slot,
            epoch: self.epoch,
        })
    }
}

/// An h-uniform, k-edge-colored multi-hypergraph with a distinguished
/// amalgam vertex.
#[derive(Clone, Debug)]
pub struct ColoredMultiHypergraph {
    h: usize,
    k: usize,
    alpha: VertexId,
    vertices: BTreeSet<VertexId>,
    edges: Vec<EdgeInstance>,
}

impl ColoredMultiHypergraph {
    /// Creates a hypergraph whose only vertex is the amalgam `alpha`.
    pub fn new(h: usize, k: usize, alpha: VertexId) -> Result<Self> {
        if h == 0 {
            return Err(Error::Param("edge size h must be at least 1".into()));
        }
        if k == 0 {
            return Err(Error::Param("at least one color is required".into()));
        }
        if alpha.0 == 0 {
            return Err(Error::Param("vertex id 0 is reserved".into()));
        }
        Ok(ColoredMultiHypergraph {
            h,
            k,
            alpha,
            vertices: BTreeSet::from([alpha]),
            edges: Vec::new(),
        })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> VertexId {
        self.alpha
    }

    /// Current number of vertices (the stage index during construction).
    pub fn n_current(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edges(&self) -> &[EdgeInstance] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Option<&EdgeInstance> {
        self.edges.get(id)
    }

    pub fn color_edges(&self, color: usize) -> impl Iterator<Item = &EdgeInstance> + '_ {
        self.edges.iter().filter(move |e| e.color == color)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<()> {
        if v.0 == 0 {
            return Err(Error::Param("vertex id 0 is reserved".into()));
        }
        if !self.vertices.insert(v) {
            return Err(Error::Param(format!("vertex {v} already present")));
        }
        Ok(())
    }

    /// Adds an edge instance and returns its id.
    pub fn add_edge(&mut self, verts: &[VertexId], color: usize) -> Result<usize> {
        self.check_color(color)?;
        if verts.len() != self.h {
            return Err(Error::Param(format!(
                "edge has {} vertices, expected {}",
                verts.len(),
                self.h
            )));
        }
        for &v in verts {
            self.check_vertex(v)?;
        }
        let mut verts = verts.to_vec();
        verts.sort_unstable();
        let id = self.edges.len();
        self.edges.push(EdgeInstance {
            id,
            verts,
            color,
            epoch: 0,
        });
        Ok(id)
    }

    pub fn set_color(&mut self, edge_id: usize, color: usize) -> Result<()> {
        self.check_color(color)?;
        let e = self
            .edges
            .get_mut(edge_id)
            .ok_or_else(|| Error::Param(format!("no edge with id {edge_id}")))?;
        e.color = color;
        e.epoch += 1;
        Ok(())
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.vertices.contains(&v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    fn check_color(&self, color: usize) -> Result<()> {
        if (1..=self.k).contains(&color) {
            Ok(())
        } else {
            Err(Error::ColorOutOfRange { color, k: self.k })
        }
    }

    /// Total number of occurrences of `u`, optionally restricted to one color.
    pub fn degree(&self, u: VertexId, color: Option<usize>) -> Result<usize> {
        self.check_vertex(u)?;
        if let Some(c) = color {
            self.check_color(c)?;
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| color.is_none_or(|c| e.color == c))
            .map(|e| e.multiplicity_of(u))
            .sum())
    }

    /// Number of edge instances equal to `{alpha^p} ∪ U`, all colors combined.
    pub fn multiplicity(&self, alpha: VertexId, p: usize, set: &[VertexId]) -> Result<usize> {
        self.check_vertex(alpha)?;
        if p + set.len() != self.h {
            return Err(Error::Param(format!(
                "p + |U| = {} but h = {}",
                p + set.len(),
                self.h
            )));
        }
        let mut target: Vec<VertexId> = set.to_vec();
        if target.contains(&alpha) {
            return Err(Error::Param(format!("{alpha} must not be in U")));
        }
        target.sort_unstable();
        if target.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Param("U must not repeat vertices".into()));
        }
        target.extend(std::iter::repeat_n(alpha, p));
        target.sort_unstable();
        Ok(self.edges.iter().filter(|e| e.verts == target).count())
    }

    /// One reference per occurrence of `u` per edge.
    pub fn hinges_at(&self, u: VertexId) -> Result<Vec<HingeRef>> {
        self.check_vertex(u)?;
        Ok(self.edges.iter().flat_map(|e| e.hinges(u)).collect())
    }

    /// Hinges of `u` inside a single edge.
    pub fn edge_hinges(&self, edge_id: usize, u: VertexId) -> Vec<HingeRef> {
        self.edges
            .get(edge_id)
            .map(|e| e.hinges(u).collect())
            .unwrap_or_default()
    }

    fn validate_hinge(&self, href: &HingeRef) -> Result<()> {
        match self.edges.get(href.edge_id) {
            Some(e)
                if e.epoch == href.epoch
                    && href.slot >= 1
                    && href.slot <= e.multiplicity_of(href.vertex) =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidHinge(*href)),
        }
    }

    /// Replaces the addressed occurrence with `to`. Any other reference into
    /// the same edge becomes stale.
    pub fn move_hinge(&mut self, href: HingeRef, to: VertexId) -> Result<()> {
        self.validate_hinge(&href)?;
        self.check_vertex(to)?;
        let e = &mut self.edges[href.edge_id];
        let pos = e
            .verts
            .iter()
            .position(|&v| v == href.vertex)
            .ok_or(Error::InvalidHinge(href))?;
        e.verts[pos] = to;
        e.verts.sort_unstable();
        e.epoch += 1;
        Ok(())
    }

    /// Moves every hinge in `hrefs` to `to` as one batch. All references are
    /// validated against the current state before anything changes.
    pub fn detach(&mut self, hrefs: &[HingeRef], to: VertexId) -> Result<()> {
        self.check_vertex(to)?;
        let mut seen = BTreeSet::new();
        for href in hrefs {
            self.validate_hinge(href)?;
            if !seen.insert(*href) {
                return Err(Error::InvalidHinge(*href));
            }
        }
        for href in &seen {
            let e = &mut self.edges[href.edge_id];
            let pos = e
                .verts
                .iter()
                .position(|&v| v == href.vertex)
                .ok_or(Error::InvalidHinge(*href))?;
            e.verts[pos] = to;
        }
        let touched: BTreeSet<usize> = seen.iter().map(|h| h.edge_id).collect();
        for id in touched {
            let e = &mut self.edges[id];
            e.verts.sort_unstable();
            e.epoch += 1;
        }
        Ok(())
    }
}

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::from(0u32);
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient as a machine integer, `None` on overflow.
pub fn binom_u64(n: u64, k: i64) -> Option<u64> {
    u64::try_from(binom(n, k)).ok()
}

/// `C(n, k)` for counts the caller already knows are small.
pub(crate) fn small_binom(n: usize, k: usize) -> usize {
    binom_u64(n as u64, k as i64).expect("binomial overflow") as usize
}
