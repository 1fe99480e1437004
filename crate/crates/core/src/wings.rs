//! Connectivity and α-wings of a single color class.
//!
//! A wing is found as one connected component of the color class after every
//! occurrence of α is deleted, together with the α-incident edges that meet
//! it. Pure α-loops have no other vertex and are wings on their own.

use std::collections::{BTreeMap, BTreeSet};

use crate::hypercore::{ColoredMultiHypergraph, HingeRef, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wing {
    /// α-hinges of the wing, `H_W`.
    pub hinges: Vec<HingeRef>,
    pub edge_ids: Vec<usize>,
    /// Includes α.
    pub vertex_set: BTreeSet<VertexId>,
}

impl Wing {
    pub fn d_alpha(&self) -> usize {
        self.hinges.len()
    }
}

#[derive(Clone, Debug)]
pub struct WingDecomposition {
    pub color: usize,
    pub alpha: VertexId,
    pub wings: Vec<Wing>,
    /// Union of the hinge sets of wings with `d_alpha >= 2`.
    pub big_hinges: BTreeSet<HingeRef>,
}

impl WingDecomposition {
    /// `|big_hinges|`.
    pub fn delta(&self) -> usize {
        self.big_hinges.len()
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(len: usize) -> Self {
        Dsu {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// True iff every declared vertex and every vertex appearing in an edge lie
/// in one component of the vertex–edge incidence structure.
pub fn is_connected<'a, V, E>(vertices: V, edges: E) -> bool
where
    V: IntoIterator<Item = VertexId>,
    E: IntoIterator<Item = &'a [VertexId]>,
{
    let edges: Vec<&[VertexId]> = edges.into_iter().collect();
    let mut all: BTreeSet<VertexId> = vertices.into_iter().collect();
    for e in &edges {
        all.extend(e.iter().copied());
    }
    if all.len() <= 1 {
        return true;
    }
    let index: BTreeMap<VertexId, usize> = all.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dsu = Dsu::new(all.len());
    for e in &edges {
        for w in e.windows(2) {
            dsu.union(index[&w[0]], index[&w[1]]);
        }
    }
    let root = dsu.find(0);
    (1..all.len()).all(|i| dsu.find(i) == root)
}

/// Connectivity of color class `color`, spanning all vertices of `g`.
pub fn color_class_connected(g: &ColoredMultiHypergraph, color: usize) -> bool {
    is_connected(g.vertices(), g.color_edges(color).map(|e| e.verts()))
}

/// The α-wings of color class `color` at `g.alpha()`.
pub fn wing_decomposition(g: &ColoredMultiHypergraph, color: usize) -> WingDecomposition {
    let alpha = g.alpha();
    let max_id = g.vertices().map(VertexId::index).max().unwrap_or(0);
    let mut dsu = Dsu::new(max_id + 1);
    let edges: Vec<_> = g.color_edges(color).collect();
    for e in &edges {
        let mut others = e.others(alpha);
        if let Some(first) = others.next() {
            for v in others {
                dsu.union(first.index(), v.index());
            }
        }
    }

    let mut wings = Vec::new();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &edges {
        match e.others(alpha).next() {
            None => wings.push(Wing {
                hinges: g.edge_hinges(e.id(), alpha),
                edge_ids: vec![e.id()],
                vertex_set: BTreeSet::from([alpha]),
            }),
            Some(v) => groups.entry(dsu.find(v.index())).or_default().push(e.id()),
        }
    }
    for edge_ids in groups.into_values() {
        let hinges: Vec<HingeRef> = edge_ids
            .iter()
            .flat_map(|&id| g.edge_hinges(id, alpha))
            .collect();
        if hinges.is_empty() {
            // component not touching α
            continue;
        }
        let mut vertex_set: BTreeSet<VertexId> = edge_ids
            .iter()
            .flat_map(|&id| g.edge(id).map(|e| e.verts().to_vec()).unwrap_or_default())
            .collect();
        vertex_set.insert(alpha);
        wings.push(Wing {
            hinges,
            edge_ids,
            vertex_set,
        });
    }
    wings.sort_by_key(|w| w.edge_ids[0]);

    let big_hinges = wings
        .iter()
        .filter(|w| w.d_alpha() >= 2)
        .flat_map(|w| w.hinges.iter().copied())
        .collect();
    WingDecomposition {
        color,
        alpha,
        wings,
        big_hinges,
    }
}

/// Whether detaching the hinges in `moved` from α keeps a connected color
/// class connected: some wing with `d_alpha >= 2` must have at least one but
/// not all of its hinges moved.
pub fn split_is_connected(decomp: &WingDecomposition, moved: &BTreeSet<HingeRef>) -> bool {
    decomp.wings.iter().filter(|w| w.d_alpha() >= 2).any(|w| {
        let hit = w.hinges.iter().filter(|h| moved.contains(h)).count();
        hit >= 1 && hit < w.d_alpha()
    })
}
