//! Degree sequence types for simple, bipartite and directed graphs, plus the
//! forbidden chord sets used by restricted bipartite problems.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree sequence of a simple graph on labeled vertices `0..n`.
///
/// The degrees are kept in the caller's labeling. `order` is the stable
/// permutation that lists the labels by non-increasing degree, so
/// `degrees[order[k]]` is the k-th entry of the canonical view.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
    order: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        let n = degrees.len();
        if let Some(&bad) = degrees.iter().find(|&&d| d + 1 > n) {
            return Err(Error::InvalidSequence(format!(
                "degree {bad} exceeds n-1 = {}",
                n.saturating_sub(1)
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]));
        Ok(Self { degrees, order })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Labels sorted by non-increasing degree (stable).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Non-increasing view of the degrees.
    pub fn canonical(&self) -> Vec<usize> {
        self.order.iter().map(|&i| self.degrees[i]).collect()
    }

    /// Maps a value indexed by canonical position back to user labels.
    pub fn to_user_order<T: Clone>(&self, canonical: &[T]) -> Vec<T> {
        let mut out: Vec<Option<T>> = vec![None; canonical.len()];
        for (pos, &label) in self.order.iter().enumerate() {
            out[label] = Some(canonical[pos].clone());
        }
        out.into_iter().map(|v| v.expect("permutation")).collect()
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn is_graphical(&self) -> bool {
        crate::graphicality::erdos_gallai(&self.degrees)
    }
}

/// Bipartite degree sequence with classes `U` and `W`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteDegreeSequence {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
}

impl BipartiteDegreeSequence {
    pub fn new(u: Vec<usize>, w: Vec<usize>) -> Self {
        Self { u, w }
    }

    /// Number of chords (`|U| * |W|`), before removing forbidden pairs.
    pub fn chord_count(&self) -> usize {
        self.u.len() * self.w.len()
    }

    pub fn is_graphical(&self) -> bool {
        crate::graphicality::gale_ryser(&self.u, &self.w)
    }
}

/// Out/in degree bi-sequence of a simple directed graph (no loops).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedDegreeSequence {
    out: Vec<usize>,
    inn: Vec<usize>,
}

impl DirectedDegreeSequence {
    pub fn new(out: Vec<usize>, inn: Vec<usize>) -> Result<Self> {
        if out.len() != inn.len() {
            return Err(Error::InvalidSequence(format!(
                "out-degree length {} differs from in-degree length {}",
                out.len(),
                inn.len()
            )));
        }
        Ok(Self { out, inn })
    }

    pub fn out_degrees(&self) -> &[usize] {
        &self.out
    }

    pub fn in_degrees(&self) -> &[usize] {
        &self.inn
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    /// Gale's bipartite representation: `U` carries out-degrees, `W`
    /// in-degrees, and the diagonal pairs `(u_x, w_x)` are non-chords.
    pub fn gale_representation(&self) -> (BipartiteDegreeSequence, ForbiddenSet) {
        (
            BipartiteDegreeSequence::new(self.out.clone(), self.inn.clone()),
            ForbiddenSet::diagonal(self.len()),
        )
    }

    pub fn is_graphical(&self) -> bool {
        crate::graphicality::directed_graphical(self)
    }
}

/// Set of `(u, w)` index pairs excluded from bipartite realizations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ForbiddenSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl ForbiddenSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn diagonal(n: usize) -> Self {
        (0..n).map(|i| (i, i)).collect()
    }

    pub fn insert(&mut self, u: usize, w: usize) -> bool {
        self.pairs.insert((u, w))
    }

    pub fn contains(&self, u: usize, w: usize) -> bool {
        self.pairs.contains(&(u, w))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    /// At most one forbidden pair per `u` index and per `w` index.
    pub fn is_one_factor(&self) -> bool {
        let mut us = BTreeSet::new();
        let mut ws = BTreeSet::new();
        self.pairs.iter().all(|&(u, w)| us.insert(u) && ws.insert(w))
    }

    pub fn check_bounds(&self, nu: usize, nw: usize) -> Result<()> {
        match self.pairs.iter().find(|&&(u, w)| u >= nu || w >= nw) {
            Some(&(u, w)) => Err(Error::InvalidSequence(format!(
                "forbidden pair ({u}, {w}) outside {nu}x{nw}"
            ))),
            None => Ok(()),
        }
    }

    pub fn shifted(&self, du: usize, dw: usize) -> Self {
        self.pairs.iter().map(|&(u, w)| (u + du, w + dw)).collect()
    }
}

impl FromIterator<(usize, usize)> for ForbiddenSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Self { pairs: iter.into_iter().collect() }
    }
}

/// Any of the three sequence kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sequence {
    Simple(DegreeSequence),
    Bipartite(BipartiteDegreeSequence),
    Directed(DirectedDegreeSequence),
}

impl Sequence {
    pub fn kind(&self) -> &'static str {
        match self {
            Sequence::Simple(_) => "simple",
            Sequence::Bipartite(_) => "bipartite",
            Sequence::Directed(_) => "directed",
        }
    }
}
