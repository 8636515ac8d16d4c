//! Lazy swap chains, the product chain over canonical components, and the
//! sampler that reassembles full realizations.
//!
//! Seeds: a master seed `s` drives `ChaCha8Rng::seed_from_u64(s)`. The
//! coordinate selector uses stream 0 and coordinate `i` uses stream `i + 1`.
//! Independent chains of one run use master seeds `s + c` for chain `c`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{canonical_decompose, factorize_bipartite, SplittedBipartiteSequence};
use crate::error::Result;
use crate::graph::{realize, realize_bipartite, realize_simple, Edge, Layout, Realization};
use crate::sequence::{BipartiteDegreeSequence, DegreeSequence, ForbiddenSet, Sequence};
use crate::swap::{EdgeState, Kernel};

pub type ChainRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A single lazy swap chain on one realization space.
#[derive(Debug, Clone)]
pub struct ChainState {
    state: EdgeState,
    kernel: Kernel,
    rng: ChainRng,
    step_count: u64,
}

impl ChainState {
    pub fn new(start: &Realization, forbidden: ForbiddenSet, kernel: Kernel, rng: ChainRng) -> Self {
        Self { state: EdgeState::new(start, forbidden), kernel, rng, step_count: 0 }
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn realization(&self) -> Realization {
        self.state.realization()
    }

    /// One lazy transition; returns whether the graph changed.
    pub fn step(&mut self) -> bool {
        self.step_count += 1;
        self.state.step(self.kernel, &mut self.rng)
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }
}

/// How a coordinate's local vertices sit in the assembled graph. A simple
/// local layout only uses `u_map`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub u_map: Vec<usize>,
    pub w_map: Vec<usize>,
}

impl Embedding {
    fn edge(&self, local: Layout, global: Layout, (a, b): Edge) -> Edge {
        let e = match local {
            Layout::Simple { .. } => (self.u_map[a], self.u_map[b]),
            Layout::Bipartite { .. } => (self.u_map[a], self.w_map[b]),
        };
        global.normalize(e)
    }
}

#[derive(Debug, Clone)]
pub struct Coordinate {
    pub chain: ChainState,
    pub embedding: Embedding,
}

/// `K` independent coordinate chains; each step picks one coordinate
/// uniformly and advances it. Forced edges never change.
#[derive(Debug, Clone)]
pub struct ProductChain {
    layout: Layout,
    forced: Vec<Edge>,
    coordinates: Vec<Coordinate>,
    selector: ChainRng,
    step_count: u64,
}

impl ProductChain {
    pub fn new(layout: Layout, forced: Vec<Edge>, coordinates: Vec<Coordinate>, seed: u64) -> Self {
        Self { layout, forced, coordinates, selector: stream_rng(seed, 0), step_count: 0 }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coordinates
    }

    pub fn forced(&self) -> &[Edge] {
        &self.forced
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// Advances one uniformly chosen coordinate. Returns the index chosen.
    pub fn product_step(&mut self) -> usize {
        self.step_count += 1;
        let k = self.coordinates.len();
        if k == 0 {
            return 0;
        }
        let i = if k == 1 { 0 } else { self.selector.gen_range(0..k) };
        self.coordinates[i].chain.step();
        i
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.product_step();
        }
    }

    /// Current realization with forced edges and all coordinates mapped in.
    pub fn assemble(&self) -> Realization {
        let mut edges = self.forced.clone();
        for c in &self.coordinates {
            let local = c.chain.state.layout();
            edges.extend(
                c.chain.realization().edges().iter().map(|&e| c.embedding.edge(local, self.layout, e)),
            );
        }
        Realization::new(self.layout, edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factorize {
    Auto,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub burn_in: u64,
    pub thin: u64,
    pub count: usize,
    pub seed: u64,
    pub factorize: Factorize,
    /// Number of independent chains; samples are split between them and
    /// concatenated in chain order.
    pub chains: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { burn_in: 1000, thin: 100, count: 1, seed: 0, factorize: Factorize::Auto, chains: 1 }
    }
}

fn coordinate(
    start: &Realization,
    forbidden: ForbiddenSet,
    embedding: Embedding,
    seed: u64,
    stream: u64,
) -> Coordinate {
    let kernel = Kernel::for_problem(start.layout(), &forbidden);
    Coordinate { chain: ChainState::new(start, forbidden, kernel, stream_rng(seed, stream)), embedding }
}

/// The product chain used by [`sample`]. With `Factorize::Off` it has a
/// single coordinate covering the whole graph.
pub fn build_chain(seq: &Sequence, forbidden: Option<&ForbiddenSet>, factorize: Factorize, seed: u64) -> Result<ProductChain> {
    let empty = ForbiddenSet::new();
    let extra = forbidden.unwrap_or(&empty);
    if factorize == Factorize::Off {
        let start = realize(seq, forbidden)?;
        let f = match seq {
            Sequence::Simple(_) => ForbiddenSet::new(),
            Sequence::Bipartite(_) => extra.clone(),
            Sequence::Directed(dd) => ForbiddenSet::diagonal(dd.len()).iter().chain(extra.iter()).collect(),
        };
        let (nu, nw) = match start.layout() {
            Layout::Simple { n } => (n, 0),
            Layout::Bipartite { nu, nw } => (nu, nw),
        };
        let embedding = Embedding { u_map: (0..nu).collect(), w_map: (0..nw).collect() };
        let layout = start.layout();
        return Ok(ProductChain::new(layout, Vec::new(), vec![coordinate(&start, f, embedding, seed, 1)], seed));
    }
    match seq {
        Sequence::Simple(d) => simple_product(d, seed),
        Sequence::Bipartite(bd) => bipartite_product(bd, extra, seed),
        Sequence::Directed(dd) => {
            let (bd, diag) = dd.gale_representation();
            let f: ForbiddenSet = diag.iter().chain(extra.iter()).collect();
            bipartite_product(&bd, &f, seed)
        }
    }
}

fn simple_product(d: &DegreeSequence, seed: u64) -> Result<ProductChain> {
    let dec = canonical_decompose(d)?;
    let label = |pos: usize| d.order()[pos];
    let layout = Layout::Simple { n: d.len() };
    let mut forced = Vec::new();
    let mut coords = Vec::new();
    let mut later: Vec<usize> = dec.positions_in_order().into_iter().map(label).collect();
    for c in &dec.components {
        let us: Vec<usize> = c.u_positions.iter().map(|&p| label(p)).collect();
        let ws: Vec<usize> = c.w_positions.iter().map(|&p| label(p)).collect();
        later.drain(..us.len() + ws.len());
        for (i, &a) in us.iter().enumerate() {
            forced.extend(us[i + 1..].iter().map(|&b| (a, b)));
            forced.extend(later.iter().map(|&b| (a, b)));
        }
        let clique = us.len().saturating_sub(1);
        let bd = BipartiteDegreeSequence::new(c.split.u().iter().map(|&x| x - clique).collect(), c.split.w().to_vec());
        let start = realize_bipartite(&bd, &ForbiddenSet::new())?;
        let stream = coords.len() as u64 + 1;
        coords.push(coordinate(&start, ForbiddenSet::new(), Embedding { u_map: us, w_map: ws }, seed, stream));
    }
    if let Some(tail) = &dec.tail {
        let start = realize_simple(&DegreeSequence::new(tail.clone())?)?;
        let map: Vec<usize> = dec.tail_positions.iter().map(|&p| label(p)).collect();
        let stream = coords.len() as u64 + 1;
        coords.push(coordinate(&start, ForbiddenSet::new(), Embedding { u_map: map, w_map: Vec::new() }, seed, stream));
    }
    Ok(ProductChain::new(layout, forced, coords, seed))
}

fn bipartite_product(bd: &BipartiteDegreeSequence, forbidden: &ForbiddenSet, seed: u64) -> Result<ProductChain> {
    let sb = SplittedBipartiteSequence::new(bd.u.clone(), bd.w.clone());
    let factors = factorize_bipartite(&sb, forbidden)?;
    let layout = Layout::Bipartite { nu: bd.u.len(), nw: bd.w.len() };
    let mut forced = Vec::new();
    let mut coords = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for later in &factors[i + 1..] {
            for &a in &f.primary_labels {
                forced.extend(later.secondary_labels.iter().map(|&b| (a, b)));
            }
        }
        let local = BipartiteDegreeSequence::new(f.sequence.primary.clone(), f.sequence.secondary.clone());
        let start = realize_bipartite(&local, &f.forbidden)?;
        let embedding = Embedding { u_map: f.primary_labels.clone(), w_map: f.secondary_labels.clone() };
        coords.push(coordinate(&start, f.forbidden.clone(), embedding, seed, i as u64 + 1));
    }
    Ok(ProductChain::new(layout, forced, coords, seed))
}

/// Draws `cfg.count` realizations: burn in, then record and thin. Runs
/// `cfg.chains` independent chains in parallel; output order depends only on
/// the configuration.
pub fn sample(seq: &Sequence, forbidden: Option<&ForbiddenSet>, cfg: &SampleConfig) -> Result<Vec<Realization>> {
    run_sampler(|seed| build_chain(seq, forbidden, cfg.factorize, seed), cfg)
}

/// Sampling loop shared by every product chain. `build` receives the master
/// seed of each independent chain.
pub fn run_sampler<F>(build: F, cfg: &SampleConfig) -> Result<Vec<Realization>>
where
    F: Fn(u64) -> Result<ProductChain> + Sync,
{
    let chains = cfg.chains.max(1);
    let per_chain: Vec<usize> = (0..chains).map(|c| cfg.count / chains + usize::from(c < cfg.count % chains)).collect();
    let runs: Vec<Result<Vec<Realization>>> = per_chain
        .par_iter()
        .enumerate()
        .map(|(c, &count)| {
            let mut chain = build(cfg.seed.wrapping_add(c as u64))?;
            chain.run(cfg.burn_in);
            let mut out = Vec::with_capacity(count);
            for k in 0..count {
                if k > 0 {
                    chain.run(cfg.thin.max(1));
                }
                out.push(chain.assemble());
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::with_capacity(cfg.count);
    for r in runs {
        out.extend(r?);
    }
    Ok(out)
}
