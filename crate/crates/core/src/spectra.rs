//! Degree spectra matrices (per-vertex neighbour counts by neighbour degree),
//! their component sequences, graphicality, and the DSM-preserving chain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::{run_sampler, stream_rng, ChainState, Coordinate, Embedding, ProductChain, SampleConfig};
use crate::error::{Error, Result};
use crate::graph::{realize_bipartite, realize_simple, Layout, Realization};
use crate::graphicality::{erdos_gallai, gale_ryser};
use crate::sequence::{BipartiteDegreeSequence, DegreeSequence, ForbiddenSet};
use crate::swap::Kernel;

/// Column `v` lists, for `i = 1..=delta`, how many neighbours of `v` have
/// degree `i` (entry `i - 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSpectraMatrix {
    pub delta: usize,
    pub columns: Vec<Vec<usize>>,
}

impl DegreeSpectraMatrix {
    pub fn vertex_count(&self) -> usize {
        self.columns.len()
    }

    /// Degrees implied by the column sums.
    pub fn degrees(&self) -> Vec<usize> {
        self.columns.iter().map(|c| c.iter().sum()).collect()
    }

    /// Number of neighbours of `v` with degree `i`.
    pub fn entry(&self, v: usize, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.columns[v].get(i - 1).copied().unwrap_or(0)
    }

    fn classes(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, d) in self.degrees().into_iter().enumerate() {
            classes.entry(d).or_default().push(v);
        }
        classes
    }

    /// Structural checks: column lengths, degrees within `delta`, neighbour
    /// classes that exist, and matching totals between every pair of
    /// classes (an even total inside a class).
    pub fn check_consistency(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InconsistentMatrix(msg));
        for (v, c) in self.columns.iter().enumerate() {
            if c.len() != self.delta {
                return bad(format!("column {v} has length {}, expected {}", c.len(), self.delta));
            }
        }
        let classes = self.classes();
        if let Some((&d, _)) = classes.iter().next_back().filter(|(&d, _)| d > self.delta) {
            return bad(format!("degree {d} exceeds delta {}", self.delta));
        }
        for (v, c) in self.columns.iter().enumerate() {
            for (k, &x) in c.iter().enumerate() {
                if x > 0 && !classes.contains_key(&(k + 1)) {
                    return bad(format!("vertex {v} has neighbours of degree {} but no such vertex exists", k + 1));
                }
            }
        }
        for (&i, vi) in &classes {
            for (&j, vj) in classes.range(i..) {
                let from_i: usize = vi.iter().map(|&v| self.entry(v, j)).sum();
                let from_j: usize = vj.iter().map(|&v| self.entry(v, i)).sum();
                if i == j && from_i % 2 == 1 {
                    return bad(format!("odd total {from_i} inside degree class {i}"));
                }
                if i != j && from_i != from_j {
                    return bad(format!("classes {i} and {j} disagree: {from_i} vs {from_j}"));
                }
            }
        }
        Ok(())
    }

    /// Edge counts between degree classes `i ≤ j`, derived from the matrix.
    pub fn joint_degree_matrix(&self) -> BTreeMap<(usize, usize), usize> {
        let classes = self.classes();
        let mut out = BTreeMap::new();
        for (&i, vi) in &classes {
            for &j in classes.keys().filter(|&&j| j >= i) {
                let total: usize = vi.iter().map(|&v| self.entry(v, j)).sum();
                let edges = if i == j { total / 2 } else { total };
                if edges > 0 {
                    out.insert((i, j), edges);
                }
            }
        }
        out
    }
}

pub fn degree_spectra(r: &Realization) -> DegreeSpectraMatrix {
    let degrees = r.degrees();
    let delta = degrees.iter().copied().max().unwrap_or(0);
    let columns = r
        .adjacency()
        .iter()
        .map(|nbrs| {
            let mut col = vec![0; delta];
            for &u in nbrs {
                col[degrees[u] - 1] += 1;
            }
            col
        })
        .collect();
    DegreeSpectraMatrix { delta, columns }
}

/// Edge counts between degree classes of a realization.
pub fn joint_degree_matrix(r: &Realization) -> BTreeMap<(usize, usize), usize> {
    let d = r.degrees();
    let mut out = BTreeMap::new();
    for &(a, b) in r.edges() {
        *out.entry((d[a].min(d[b]), d[a].max(d[b]))).or_insert(0) += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentKind {
    Simple { degrees: Vec<usize> },
    Bipartite { u: Vec<usize>, w: Vec<usize> },
}

/// The subgraph between degree classes `i` and `j` (inside class `i` when
/// `i = j`), with the vertices of each class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSequence {
    pub i: usize,
    pub j: usize,
    pub class_i: Vec<usize>,
    pub class_j: Vec<usize>,
    pub sequence: ComponentKind,
}

impl ComponentSequence {
    pub fn is_graphical(&self) -> bool {
        match &self.sequence {
            ComponentKind::Simple { degrees } => erdos_gallai(degrees),
            ComponentKind::Bipartite { u, w } => gale_ryser(u, w),
        }
    }
}

pub fn component_sequences(m: &DegreeSpectraMatrix) -> Result<Vec<ComponentSequence>> {
    m.check_consistency()?;
    let classes = m.classes();
    let mut out = Vec::new();
    for (&i, vi) in classes.iter().filter(|(&i, _)| i > 0) {
        for (&j, vj) in classes.range(i..) {
            let u: Vec<usize> = vi.iter().map(|&v| m.entry(v, j)).collect();
            if u.iter().all(|&x| x == 0) {
                continue;
            }
            let sequence = if i == j {
                ComponentKind::Simple { degrees: u }
            } else {
                ComponentKind::Bipartite { u, w: vj.iter().map(|&v| m.entry(v, i)).collect() }
            };
            out.push(ComponentSequence {
                i,
                j,
                class_i: vi.clone(),
                class_j: if i == j { Vec::new() } else { vj.clone() },
                sequence,
            });
        }
    }
    Ok(out)
}

/// Graphical iff consistent and every component sequence is graphical.
pub fn dsm_graphical(m: &DegreeSpectraMatrix) -> bool {
    component_sequences(m).is_ok_and(|cs| cs.iter().all(ComponentSequence::is_graphical))
}

fn component_start(c: &ComponentSequence) -> Result<(Realization, Embedding)> {
    if !c.is_graphical() {
        return Err(Error::NotGraphical);
    }
    match &c.sequence {
        ComponentKind::Simple { degrees } => Ok((
            realize_simple(&DegreeSequence::new(degrees.clone())?)?,
            Embedding { u_map: c.class_i.clone(), w_map: Vec::new() },
        )),
        ComponentKind::Bipartite { u, w } => Ok((
            realize_bipartite(&BipartiteDegreeSequence::new(u.clone(), w.clone()), &ForbiddenSet::new())?,
            Embedding { u_map: c.class_i.clone(), w_map: c.class_j.clone() },
        )),
    }
}

/// A graph with spectra matrix `m`: every component realized on its own and
/// the edge sets united.
pub fn dsm_witness(m: &DegreeSpectraMatrix) -> Result<Realization> {
    Ok(dsm_chain(m, 0)?.assemble())
}

/// Product chain with one coordinate per component sequence.
pub fn dsm_chain(m: &DegreeSpectraMatrix, seed: u64) -> Result<ProductChain> {
    let components = component_sequences(m)?;
    let mut coords = Vec::with_capacity(components.len());
    for (k, c) in components.iter().enumerate() {
        let (start, embedding) = component_start(c)?;
        let kernel = Kernel::c4_only(start.layout());
        let chain = ChainState::new(&start, ForbiddenSet::new(), kernel, stream_rng(seed, k as u64 + 1));
        coords.push(Coordinate { chain, embedding });
    }
    Ok(ProductChain::new(Layout::Simple { n: m.vertex_count() }, Vec::new(), coords, seed))
}

pub fn dsm_sample(m: &DegreeSpectraMatrix, cfg: &SampleConfig) -> Result<Vec<Realization>> {
    run_sampler(|seed| dsm_chain(m, seed), cfg)
}
