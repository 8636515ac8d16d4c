//! Tyshkevich composition and canonical decomposition for split, splitted
//! bipartite and directed (restricted) degree sequences.

mod bipartite;
mod split;

pub use bipartite::{
    bipartite_good_pairs, canonical_decompose_bipartite, compose_bipartite, compose_directed,
    factorize_bipartite, greenhill_condition, psi, psi_inverse, recompose_bipartite, BipartiteFactor,
    RestrictedSequence, SplittedBipartiteSequence,
};
pub use split::{
    canonical_decompose, certificate, compose, good_pairs, is_split, CanonicalDecomposition, Certificate,
    GoodPair, SplitComponent, SplitSequence,
};
