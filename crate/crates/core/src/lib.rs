//! Uniform sampling of labeled simple, bipartite and directed graphs with a
//! prescribed degree sequence.
//!
//! Sequences are split into their canonical (Tyshkevich) components, every
//! component runs its own lazy swap chain, and samples are reassembled with
//! the forced edges of the composition. The [`space`] module holds the exact
//! desk-scale machinery (realization graphs, spectra, product checks) used to
//! audit the chains.

pub mod chain;
pub mod decomposition;
pub mod enumeration;
pub mod error;
mod flow;
pub mod graph;
pub mod graphicality;
pub mod io;
pub mod sequence;
pub mod space;
pub mod spectra;
pub mod swap;

pub use error::{Error, Result};
pub use graph::{Edge, Layout, Realization};
pub use sequence::{BipartiteDegreeSequence, DegreeSequence, DirectedDegreeSequence, ForbiddenSet, Sequence};
