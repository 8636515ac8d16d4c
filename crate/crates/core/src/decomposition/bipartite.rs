//! Splitted bipartite sequences: the `Ψ` correspondence with split
//! sequences, bipartite composition, decomposition, and the directed
//! (forbidden 1-factor) variant.

use serde::{Deserialize, Serialize};

use super::split::{sorted_desc, GoodPair, SplitSequence};
use crate::error::{Error, Result};
use crate::graphicality::gale_ryser;
use crate::sequence::ForbiddenSet;

/// Bipartite degree sequence with designated primary class `𝔘` and
/// secondary class `𝔚`. Primary entries may be zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplittedBipartiteSequence {
    pub primary: Vec<usize>,
    pub secondary: Vec<usize>,
}

impl SplittedBipartiteSequence {
    pub fn new(primary: Vec<usize>, secondary: Vec<usize>) -> Self {
        Self { primary, secondary }
    }

    pub fn is_graphical(&self) -> bool {
        gale_ryser(&self.primary, &self.secondary)
    }

    /// Both classes sorted non-increasingly.
    pub fn canonical(&self) -> Self {
        Self::new(sorted_desc(&self.primary), sorted_desc(&self.secondary))
    }

    /// Equality of the bipartite degree sequences up to reordering within
    /// each class.
    pub fn same_sequence(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Degree sequence of the split graph `Ψ⁻¹(self)`.
    pub fn split_lift(&self) -> Result<Vec<usize>> {
        Ok(psi_inverse(self)?.degrees())
    }
}

/// `Ψ`: drop the clique on `U`, so `𝔲 = d(U) ⊖ (|U|-1)` and `𝔴 = d(W)`.
pub fn psi(s: &SplitSequence) -> SplittedBipartiteSequence {
    let clique = s.u().len().saturating_sub(1);
    SplittedBipartiteSequence::new(s.u().iter().map(|&d| d - clique).collect(), s.w().to_vec())
}

/// `Ψ⁻¹`: add the clique back, `d(U) = 𝔲 ⊕ (|𝔘|-1)`.
pub fn psi_inverse(sb: &SplittedBipartiteSequence) -> Result<SplitSequence> {
    let clique = sb.primary.len().saturating_sub(1);
    if let Some(&bad) = sb.primary.iter().find(|&&d| d > sb.secondary.len()) {
        return Err(Error::InvalidSplit(format!(
            "primary degree {bad} exceeds secondary class size {}",
            sb.secondary.len()
        )));
    }
    SplitSequence::new(sb.primary.iter().map(|&d| d + clique).collect(), sb.secondary.clone())
}

/// `𝔊₁ ∘ 𝔊₂`: primaries `𝔘 ∪ 𝔛`, secondaries `𝔚 ∪ 𝔜`, plus all edges of
/// `K_{𝔘,𝔜}`. Classes are concatenated in operand order.
pub fn compose_bipartite(
    a: &SplittedBipartiteSequence,
    b: &SplittedBipartiteSequence,
) -> SplittedBipartiteSequence {
    let mut primary: Vec<usize> = a.primary.iter().map(|&d| d + b.secondary.len()).collect();
    primary.extend(&b.primary);
    let mut secondary = a.secondary.clone();
    secondary.extend(b.secondary.iter().map(|&d| d + a.primary.len()));
    SplittedBipartiteSequence::new(primary, secondary)
}

/// Pairs `(p, q)` with `0 < p < |𝔘|`, `0 < q < |𝔚|` and
/// `Σ_{i≤p} 𝔲_i = p·q + Σ_{i>q} 𝔴_i`, over the canonical (sorted) classes.
/// Empty iff the sequence is indecomposable.
pub fn bipartite_good_pairs(sb: &SplittedBipartiteSequence) -> Vec<GoodPair> {
    let c = sb.canonical();
    pairs_of_sorted(&c.primary, &c.secondary)
}

fn pairs_of_sorted(u: &[usize], w: &[usize]) -> Vec<GoodPair> {
    let mut out = Vec::new();
    let total_w: usize = w.iter().sum();
    let mut head = 0;
    for p in 1..u.len() {
        head += u[p - 1];
        let mut w_prefix = 0;
        for q in 1..w.len() {
            w_prefix += w[q - 1];
            if head == p * q + (total_w - w_prefix) {
                out.push(GoodPair { p, q });
            }
        }
    }
    out
}

/// A factor of a bipartite decomposition together with the labels (indices
/// into the input's primary and secondary classes) it owns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteFactor {
    pub sequence: SplittedBipartiteSequence,
    pub good_pair: Option<GoodPair>,
    pub primary_labels: Vec<usize>,
    pub secondary_labels: Vec<usize>,
    /// Forbidden pairs inside this factor, in factor-local indices.
    pub forbidden: ForbiddenSet,
}

/// Canonical decomposition of a splitted bipartite sequence into
/// indecomposable factors, listed left to right. Each step peels the head
/// belonging to the minimal pair (smallest `p`, then smallest `q`).
pub fn canonical_decompose_bipartite(sb: &SplittedBipartiteSequence) -> Result<Vec<SplittedBipartiteSequence>> {
    Ok(factorize_bipartite(sb, &ForbiddenSet::new())?
        .into_iter()
        .map(|f| f.sequence)
        .collect())
}

/// Labeled factorization of a (possibly restricted) bipartite sequence.
///
/// Forbidden pairs falling between a head's primaries and the remainder's
/// secondaries would contradict the forced `K_{𝔘,𝔜}` edges; such pairs are
/// skipped in favour of the next pair. Forbidden pairs between a head's
/// secondaries and the remainder's primaries are never chords anyway and
/// are dropped.
pub fn factorize_bipartite(sb: &SplittedBipartiteSequence, forbidden: &ForbiddenSet) -> Result<Vec<BipartiteFactor>> {
    forbidden.check_bounds(sb.primary.len(), sb.secondary.len())?;
    if !crate::graphicality::restricted_bipartite_graphical(&sb.primary, &sb.secondary, forbidden) {
        return Err(Error::NotGraphical);
    }
    let by_degree = |degrees: &[usize]| {
        let mut labels: Vec<usize> = (0..degrees.len()).collect();
        labels.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]));
        labels
    };
    let mut prim = by_degree(&sb.primary);
    let mut sec = by_degree(&sb.secondary);
    let mut u: Vec<usize> = prim.iter().map(|&l| sb.primary[l]).collect();
    let mut w: Vec<usize> = sec.iter().map(|&l| sb.secondary[l]).collect();

    let mut factors = Vec::new();
    loop {
        let usable = pairs_of_sorted(&u, &w).into_iter().find(|&GoodPair { p, q }| {
            prim[..p].iter().all(|&a| sec[..q].iter().all(|&b| !forbidden.contains(a, b)))
        });
        let Some(pair) = usable else {
            factors.push(make_factor(u, w, prim, sec, None, forbidden));
            return Ok(factors);
        };
        let GoodPair { p, q } = pair;
        let head_u: Vec<usize> = u[..p].iter().map(|&d| d - q).collect();
        let head_w = w[q..].to_vec();
        factors.push(make_factor(
            head_u,
            head_w,
            prim[..p].to_vec(),
            sec[q..].to_vec(),
            Some(pair),
            forbidden,
        ));
        u = u[p..].to_vec();
        w = w[..q].iter().map(|&d| d - p).collect();
        prim = prim[p..].to_vec();
        sec.truncate(q);
    }
}

fn make_factor(
    u: Vec<usize>,
    w: Vec<usize>,
    prim: Vec<usize>,
    sec: Vec<usize>,
    good_pair: Option<GoodPair>,
    forbidden: &ForbiddenSet,
) -> BipartiteFactor {
    let local = prim
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| sec.iter().enumerate().map(move |(j, &b)| (i, j, a, b)))
        .filter(|&(_, _, a, b)| forbidden.contains(a, b))
        .map(|(i, j, _, _)| (i, j))
        .collect();
    BipartiteFactor {
        sequence: SplittedBipartiteSequence::new(u, w),
        good_pair,
        primary_labels: prim,
        secondary_labels: sec,
        forbidden: local,
    }
}

/// Left-to-right composition of a list of factors.
pub fn recompose_bipartite(factors: &[SplittedBipartiteSequence]) -> Option<SplittedBipartiteSequence> {
    let mut iter = factors.iter().rev();
    let last = iter.next()?.clone();
    Some(iter.fold(last, |acc, f| compose_bipartite(f, &acc)))
}

/// Splitted bipartite sequence with a forbidden partial 1-factor, the unit of
/// directed composition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedSequence {
    pub sequence: SplittedBipartiteSequence,
    pub forbidden: ForbiddenSet,
}

impl RestrictedSequence {
    pub fn new(sequence: SplittedBipartiteSequence, forbidden: ForbiddenSet) -> Result<Self> {
        forbidden.check_bounds(sequence.primary.len(), sequence.secondary.len())?;
        if !forbidden.is_one_factor() {
            return Err(Error::ForbiddenSetNotMatching(format!("{forbidden:?}")));
        }
        Ok(Self { sequence, forbidden })
    }
}

/// Bipartite composition carrying the forbidden 1-factors along: the result
/// forbids `𝓕₁ ∪ 𝓕₂` with the second set shifted past the first operand.
pub fn compose_directed(a: &RestrictedSequence, b: &RestrictedSequence) -> Result<RestrictedSequence> {
    for f in [&a.forbidden, &b.forbidden] {
        if !f.is_one_factor() {
            return Err(Error::ForbiddenSetNotMatching(format!("{f:?}")));
        }
    }
    let sequence = compose_bipartite(&a.sequence, &b.sequence);
    let shifted = b.forbidden.shifted(a.sequence.primary.len(), a.sequence.secondary.len());
    let forbidden: ForbiddenSet = a.forbidden.iter().chain(shifted.iter()).collect();
    RestrictedSequence::new(sequence, forbidden)
}

/// `3 ≤ d_max ≤ ¼·√M`, checked exactly as `16·d_max² ≤ M`.
pub fn greenhill_condition(degrees: &[usize]) -> bool {
    let dmax = degrees.iter().copied().max().unwrap_or(0);
    let m: usize = degrees.iter().sum();
    dmax >= 3 && 16 * dmax * dmax <= m
}
