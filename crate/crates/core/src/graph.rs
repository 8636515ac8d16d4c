//! Labeled realizations and constructive realization of degree sequences.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphicality::{erdos_gallai, restricted_realization};
use crate::sequence::{BipartiteDegreeSequence, DegreeSequence, ForbiddenSet, Sequence};

pub type Edge = (usize, usize);

/// Vertex layout of a realization. Simple edges are stored as `(a, b)` with
/// `a < b`; bipartite edges as `(u, w)` with `u < nu` and `w < nw`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Layout {
    Simple { n: usize },
    Bipartite { nu: usize, nw: usize },
}

impl Layout {
    pub fn normalize(&self, (a, b): Edge) -> Edge {
        match self {
            Layout::Simple { .. } => (a.min(b), a.max(b)),
            Layout::Bipartite { .. } => (a, b),
        }
    }

    /// Number of vertex pairs that could carry an edge, ignoring forbidden
    /// pairs.
    pub fn pair_count(&self) -> usize {
        match *self {
            Layout::Simple { n } => n * n.saturating_sub(1) / 2,
            Layout::Bipartite { nu, nw } => nu * nw,
        }
    }

    /// Every pair admissible under this layout, in lexicographic order.
    pub fn chords(&self, forbidden: &ForbiddenSet) -> Vec<Edge> {
        match *self {
            Layout::Simple { n } => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
            Layout::Bipartite { nu, nw } => (0..nu)
                .flat_map(|u| (0..nw).map(move |w| (u, w)))
                .filter(|&(u, w)| !forbidden.contains(u, w))
                .collect(),
        }
    }
}

/// A labeled simple or bipartite graph given by its sorted edge list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Realization {
    layout: Layout,
    edges: Vec<Edge>,
}

impl Realization {
    pub fn new(layout: Layout, edges: impl IntoIterator<Item = Edge>) -> Self {
        let set: BTreeSet<Edge> = edges.into_iter().map(|e| layout.normalize(e)).collect();
        Self { layout, edges: set.into_iter().collect() }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&self.layout.normalize(e)).is_ok()
    }

    /// Degree of every vertex: for bipartite layouts `(U degrees, W degrees)`
    /// concatenated.
    pub fn degrees(&self) -> Vec<usize> {
        match self.layout {
            Layout::Simple { n } => {
                let mut d = vec![0; n];
                for &(a, b) in &self.edges {
                    d[a] += 1;
                    d[b] += 1;
                }
                d
            }
            Layout::Bipartite { nu, nw } => {
                let mut d = vec![0; nu + nw];
                for &(u, w) in &self.edges {
                    d[u] += 1;
                    d[nu + w] += 1;
                }
                d
            }
        }
    }

    pub fn bipartite_degrees(&self) -> Option<BipartiteDegreeSequence> {
        match self.layout {
            Layout::Bipartite { nu, .. } => {
                let d = self.degrees();
                Some(BipartiteDegreeSequence::new(d[..nu].to_vec(), d[nu..].to_vec()))
            }
            Layout::Simple { .. } => None,
        }
    }

    pub fn avoids(&self, forbidden: &ForbiddenSet) -> bool {
        match self.layout {
            Layout::Simple { .. } => true,
            Layout::Bipartite { .. } => self.edges.iter().all(|&(u, w)| !forbidden.contains(u, w)),
        }
    }

    /// Adjacency lists (simple layout only; bipartite vertices are numbered
    /// `U` first, then `W`).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let (n, off) = match self.layout {
            Layout::Simple { n } => (n, 0),
            Layout::Bipartite { nu, nw } => (nu + nw, nu),
        };
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b + off);
            adj[b + off].push(a);
        }
        adj
    }
}

/// Havel–Hakimi construction of a simple realization.
pub fn realize_simple(d: &DegreeSequence) -> Result<Realization> {
    if !erdos_gallai(d.degrees()) {
        return Err(Error::NotGraphical);
    }
    let n = d.len();
    if n == 0 {
        return Ok(Realization::new(Layout::Simple { n }, []));
    }
    let mut residual: Vec<(usize, usize)> = d.degrees().iter().copied().zip(0..n).collect();
    let mut edges = Vec::new();
    loop {
        residual.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let (k, v) = residual[0];
        if k == 0 {
            break;
        }
        residual[0].0 = 0;
        for slot in residual.iter_mut().skip(1).take(k) {
            if slot.0 == 0 {
                return Err(Error::NotGraphical);
            }
            slot.0 -= 1;
            edges.push((v, slot.1));
        }
    }
    Ok(Realization::new(Layout::Simple { n }, edges))
}

/// Max-flow realization of a bipartite sequence avoiding `forbidden`.
pub fn realize_bipartite(bd: &BipartiteDegreeSequence, forbidden: &ForbiddenSet) -> Result<Realization> {
    forbidden.check_bounds(bd.u.len(), bd.w.len())?;
    let edges = restricted_realization(&bd.u, &bd.w, forbidden).ok_or(Error::NotGraphical)?;
    Ok(Realization::new(Layout::Bipartite { nu: bd.u.len(), nw: bd.w.len() }, edges))
}

/// One realization of any sequence kind. Directed sequences are realized in
/// Gale's representation: edge `(u, w)` is the arc `u -> w`. Extra forbidden
/// pairs apply to bipartite and directed inputs.
pub fn realize(seq: &Sequence, forbidden: Option<&ForbiddenSet>) -> Result<Realization> {
    let empty = ForbiddenSet::new();
    match seq {
        Sequence::Simple(d) => realize_simple(d),
        Sequence::Bipartite(bd) => realize_bipartite(bd, forbidden.unwrap_or(&empty)),
        Sequence::Directed(dd) => {
            let (bd, mut f) = dd.gale_representation();
            for (u, w) in forbidden.unwrap_or(&empty).iter() {
                f.insert(u, w);
            }
            realize_bipartite(&bd, &f)
        }
    }
}
