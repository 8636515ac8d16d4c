//! Split sequences, good pairs and the canonical decomposition of simple
//! degree sequences into indecomposable split components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphicality::{erdos_gallai, gale_ryser};
use crate::sequence::DegreeSequence;

/// Degree sequence of a split graph `<U, W>`: `U` induces a clique, `W` an
/// independent set. Degrees are taken in the split graph itself. The pair is
/// ordered; `U` and `W` may not both be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSequence {
    u: Vec<usize>,
    w: Vec<usize>,
}

impl SplitSequence {
    /// Checks that a split graph with clique `U` and independent set `W`
    /// realizes the degrees: every `U` degree is at least `|U|-1` and the
    /// cross edges form a graphical bipartite sequence.
    pub fn new(u: Vec<usize>, w: Vec<usize>) -> Result<Self> {
        if u.is_empty() && w.is_empty() {
            return Err(Error::InvalidSplit("both classes empty".into()));
        }
        let clique = u.len().saturating_sub(1);
        if u.iter().any(|&d| d < clique) {
            return Err(Error::InvalidSplit(format!(
                "primary degree below clique degree {clique}"
            )));
        }
        let cross: Vec<usize> = u.iter().map(|&d| d - clique).collect();
        if !gale_ryser(&cross, &w) {
            return Err(Error::InvalidSplit("cross edges not realizable".into()));
        }
        Ok(Self { u, w })
    }

    pub(crate) fn new_unchecked(u: Vec<usize>, w: Vec<usize>) -> Self {
        Self { u, w }
    }

    pub fn u(&self) -> &[usize] {
        &self.u
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.u.len() + self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `U` degrees followed by `W` degrees.
    pub fn degrees(&self) -> Vec<usize> {
        self.u.iter().chain(&self.w).copied().collect()
    }

    /// Same multiset of degrees within each class, ignoring order.
    pub fn same_classes(&self, other: &SplitSequence) -> bool {
        sorted_desc(&self.u) == sorted_desc(&other.u) && sorted_desc(&self.w) == sorted_desc(&other.w)
    }
}

pub(crate) fn sorted_desc(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// `(p, q)` with `0 < p + q < n` certifying a decomposition: the first `p`
/// vertices (canonical order) form the clique class, the last `q` the
/// independent class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GoodPair {
    pub p: usize,
    pub q: usize,
}

/// The arithmetic of one good pair: `lhs = p*(n-q-1) + tail_sum`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub head_sum: usize,
    pub clique_term: usize,
    pub tail_sum: usize,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.head_sum == self.clique_term + self.tail_sum
    }
}

pub fn certificate(canonical: &[usize], pair: GoodPair) -> Certificate {
    let n = canonical.len();
    let GoodPair { p, q } = pair;
    Certificate {
        n,
        p,
        q,
        head_sum: canonical[..p].iter().sum(),
        clique_term: p * (n - q - 1),
        tail_sum: canonical[n - q..].iter().sum(),
    }
}

/// All good pairs of a non-increasing sequence, ascending by `p` then `q`.
pub fn good_pairs(canonical: &[usize]) -> Vec<GoodPair> {
    let n = canonical.len();
    let mut prefix = vec![0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + canonical[i];
    }
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n - p {
            if p + q == 0 {
                continue;
            }
            let tail = prefix[n] - prefix[n - q];
            if prefix[p] == p * (n - q - 1) + tail {
                out.push(GoodPair { p, q });
            }
        }
    }
    out
}

/// Hammer–Simeone recognition. Returns `<U, W>` with `U` the first `m`
/// vertices in canonical order, where `m` is the largest `i` with
/// `d_i >= i - 1`.
pub fn is_split(d: &DegreeSequence) -> Result<Option<SplitSequence>> {
    if !d.is_graphical() {
        return Err(Error::NotGraphical);
    }
    Ok(split_of_canonical(&d.canonical()))
}

pub(crate) fn split_of_canonical(c: &[usize]) -> Option<SplitSequence> {
    if c.is_empty() {
        return None;
    }
    let m = (1..=c.len()).filter(|&i| c[i - 1] + 1 >= i).max().unwrap_or(0);
    let head: usize = c[..m].iter().sum();
    let tail: usize = c[m..].iter().sum();
    (head == m * m.saturating_sub(1) + tail)
        .then(|| SplitSequence::new_unchecked(c[..m].to_vec(), c[m..].to_vec()))
}

/// Degree sequence of `<U, W> ∘ G`: `U` gains `|V(G)|`, `G` gains `|U|`,
/// listed as `U`, `W`, then `G`.
pub fn compose(s: &SplitSequence, g: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = s.u.iter().map(|&d| d + g.len()).collect();
    out.extend(&s.w);
    out.extend(g.iter().map(|&d| d + s.u.len()));
    out
}

/// One indecomposable split factor of a canonical decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitComponent {
    pub split: SplitSequence,
    /// Good pair used to peel this component off, absent for a final split
    /// remainder.
    pub good_pair: Option<GoodPair>,
    pub certificate: Option<Certificate>,
    /// Number of vertices to the right (subtracted from the `U` degrees).
    pub rest_size: usize,
    /// Canonical positions in the input of the `U` and `W` vertices.
    pub u_positions: Vec<usize>,
    pub w_positions: Vec<usize>,
}

/// `G = S_1 ∘ S_2 ∘ ... ∘ S_l ∘ G_0`, every factor indecomposable and `G_0`
/// (the tail) non-split if present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalDecomposition {
    pub n: usize,
    pub components: Vec<SplitComponent>,
    pub tail: Option<Vec<usize>>,
    pub tail_positions: Vec<usize>,
}

impl CanonicalDecomposition {
    /// Composes the factors right to left; vertices listed `U_1, W_1, U_2,
    /// W_2, ..., G_0`.
    pub fn recompose(&self) -> Vec<usize> {
        let base = self.tail.clone().unwrap_or_default();
        self.components.iter().rev().fold(base, |g, c| compose(&c.split, &g))
    }

    /// Recomposed degrees placed at their recorded canonical positions. For a
    /// correct decomposition this equals the input's canonical sequence.
    pub fn recompose_canonical(&self) -> Vec<usize> {
        let flat = self.recompose();
        let mut out = vec![0; self.n];
        for (value, pos) in flat.into_iter().zip(self.positions_in_order()) {
            out[pos] = value;
        }
        out
    }

    /// Canonical positions in the order used by [`Self::recompose`].
    pub fn positions_in_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n);
        for c in &self.components {
            out.extend(&c.u_positions);
            out.extend(&c.w_positions);
        }
        out.extend(&self.tail_positions);
        out
    }
}

/// Canonical decomposition. Each step peels the head given by the minimal
/// good pair (smallest `p`, then smallest `q`) and checks that the head has
/// no good pair of its own.
pub fn canonical_decompose(d: &DegreeSequence) -> Result<CanonicalDecomposition> {
    if !erdos_gallai(d.degrees()) {
        return Err(Error::NotGraphical);
    }
    decompose_canonical_slice(&d.canonical())
}

pub(crate) fn decompose_canonical_slice(canonical: &[usize]) -> Result<CanonicalDecomposition> {
    let n = canonical.len();
    let mut cur = canonical.to_vec();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut components = Vec::new();
    let mut tail = None;
    let mut tail_positions = Vec::new();
    while !cur.is_empty() {
        let Some(&pair) = good_pairs(&cur).first() else {
            match split_of_canonical(&cur) {
                Some(split) => components.push(SplitComponent {
                    split,
                    good_pair: None,
                    certificate: None,
                    rest_size: 0,
                    u_positions: pos[..split_len_u(&cur)].to_vec(),
                    w_positions: pos[split_len_u(&cur)..].to_vec(),
                }),
                None => {
                    tail = Some(cur.clone());
                    tail_positions = pos.clone();
                }
            }
            break;
        };
        let m = cur.len();
        let GoodPair { p, q } = pair;
        let rest = m - p - q;
        let u: Vec<usize> = cur[..p].iter().map(|&x| x - rest).collect();
        let w = cur[m - q..].to_vec();
        let head = sorted_desc(&[u.clone(), w.clone()].concat());
        if !good_pairs(&head).is_empty() {
            return Err(Error::InvalidSplit(format!("head for {pair:?} is decomposable")));
        }
        components.push(SplitComponent {
            split: SplitSequence::new(u, w)?,
            good_pair: Some(pair),
            certificate: Some(certificate(&cur, pair)),
            rest_size: rest,
            u_positions: pos[..p].to_vec(),
            w_positions: pos[m - q..].to_vec(),
        });
        cur = cur[p..m - q].iter().map(|&x| x - p).collect();
        pos = pos[p..m - q].to_vec();
    }
    Ok(CanonicalDecomposition { n, components, tail, tail_positions })
}

fn split_len_u(c: &[usize]) -> usize {
    split_of_canonical(c).map(|s| s.u.len()).unwrap_or(0)
}
