//! Counting bipartite degree sequences: almost-half-regular classes, the
//! full census on `n+n` vertices, and classes built by composing blocks.

use std::collections::HashSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{recompose_bipartite, SplittedBipartiteSequence};
use crate::error::{Error, Result};
use crate::graphicality::gale_ryser;

pub const DEFAULT_MAX_CENSUS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub kind: String,
    pub parameter: usize,
    #[serde(with = "decimal")]
    pub count: BigUint,
    pub method: Method,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("not a decimal integer"))
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// `2·C(2m, m) - m² - 1`.
pub fn count_almost_half_regular(m: usize) -> BigUint {
    let m = m as u64;
    binomial(2 * m, m) * 2u32 - BigUint::from(m * m + 1)
}

/// Non-increasing sequences of length `len` with entries at most `max`.
pub fn non_increasing(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for x in (0..=max).rev() {
            prefix.push(x);
            rec(len, x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, max, &mut Vec::with_capacity(len), &mut out);
    out
}

fn almost_regular(s: &[usize]) -> bool {
    match (s.iter().max(), s.iter().min()) {
        (Some(a), Some(b)) => a - b <= 1,
        _ => true,
    }
}

/// Ordered graphical pairs `(u, w)` on `m+m` vertices, both non-increasing,
/// with at least one almost-regular class.
pub fn count_almost_half_regular_exhaustive(m: usize) -> BigUint {
    let seqs = non_increasing(m, m);
    let count: usize = seqs
        .par_iter()
        .map(|u| seqs.iter().filter(|w| (almost_regular(u) || almost_regular(w)) && gale_ryser(u, w)).count())
        .sum();
    BigUint::from(count)
}

/// Graphical ordered pairs `(u, w)` of non-increasing sequences on `n+n`
/// vertices with entries at most `n`.
pub fn count_bipartite_graphical(n: usize, max_n: usize) -> Result<BigUint> {
    if n > max_n {
        return Err(Error::TooLarge { chords: n * n, cap: max_n * max_n });
    }
    let seqs = non_increasing(n, n);
    let mut by_sum: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); n * n + 1];
    for s in &seqs {
        by_sum[s.iter().sum::<usize>()].push(s);
    }
    let count: usize = seqs
        .par_iter()
        .map(|u| by_sum[u.iter().sum::<usize>()].iter().filter(|w| gale_ryser(u, w)).count())
        .sum();
    Ok(BigUint::from(count))
}

/// `count_bipartite_graphical(block)^(n / block)`: distinct sequences
/// obtained by composing `n / block` graphical blocks of size
/// `block+block`.
pub fn count_composed_class(n: usize, block: usize, max_n: usize) -> Result<BigUint> {
    if block == 0 || !n.is_multiple_of(block) {
        return Err(Error::Divisibility { n, block });
    }
    Ok(count_bipartite_graphical(block, max_n)?.pow((n / block) as u32))
}

/// All graphical splitted bipartite sequences on `k+k` vertices, classes
/// non-increasing.
pub fn graphical_blocks(k: usize) -> Vec<SplittedBipartiteSequence> {
    let seqs = non_increasing(k, k);
    seqs.iter()
        .flat_map(|u| seqs.iter().filter(|w| gale_ryser(u, w)).map(|w| SplittedBipartiteSequence::new(u.clone(), w.clone())))
        .collect()
}

/// Composes every ordered tuple of `count` blocks of size `k+k` and returns
/// `(tuples, distinct composed sequences)`, comparing up to reordering
/// within each class.
pub fn composition_distinctness(k: usize, count: usize) -> (usize, usize) {
    let blocks = graphical_blocks(k);
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..count {
        tuples = tuples
            .into_iter()
            .flat_map(|t| (0..blocks.len()).map(move |b| [t.clone(), vec![b]].concat()))
            .collect();
    }
    let composed: HashSet<SplittedBipartiteSequence> = tuples
        .par_iter()
        .map(|t| {
            let parts: Vec<SplittedBipartiteSequence> = t.iter().map(|&b| blocks[b].clone()).collect();
            recompose_bipartite(&parts).expect("non-empty tuple").canonical()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    (tuples.len(), composed.len())
}
