//! Exhaustive realization spaces: enumeration, realization graphs with their
//! exact lazy transition matrices, spectra, and product checks.

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{stream_rng, ChainState};
use crate::decomposition::{
    canonical_decompose, compose, compose_directed, factorize_bipartite, psi_inverse, RestrictedSequence,
    SplitSequence, SplittedBipartiteSequence,
};
use crate::error::{Error, Result};
use crate::graph::{Edge, Layout, Realization};
use crate::graphicality::{erdos_gallai, gale_ryser, restricted_bipartite_graphical};
use crate::sequence::{BipartiteDegreeSequence, DegreeSequence, ForbiddenSet, Sequence};
use crate::swap::{enumerate_swaps, Kernel, SwapKind};

pub const DEFAULT_MAX_CHORDS: usize = 24;

/// Chord cap from `DEGMIX_MAX_CHORDS`, falling back to the default.
pub fn max_chords_from_env() -> usize {
    std::env::var("DEGMIX_MAX_CHORDS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_CHORDS)
}

/// A realization problem: layout, target degrees (`U` then `W` for
/// bipartite layouts) and non-chords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub layout: Layout,
    pub degrees: Vec<usize>,
    pub forbidden: ForbiddenSet,
}

impl Problem {
    pub fn simple(degrees: &[usize]) -> Self {
        Self { layout: Layout::Simple { n: degrees.len() }, degrees: degrees.to_vec(), forbidden: ForbiddenSet::new() }
    }

    pub fn bipartite(u: &[usize], w: &[usize], forbidden: ForbiddenSet) -> Self {
        Self {
            layout: Layout::Bipartite { nu: u.len(), nw: w.len() },
            degrees: [u, w].concat(),
            forbidden,
        }
    }

    pub fn from_sequence(seq: &Sequence, extra: Option<&ForbiddenSet>) -> Self {
        let empty = ForbiddenSet::new();
        let extra = extra.unwrap_or(&empty);
        match seq {
            Sequence::Simple(d) => Self::simple(d.degrees()),
            Sequence::Bipartite(bd) => Self::bipartite(&bd.u, &bd.w, extra.clone()),
            Sequence::Directed(dd) => {
                let (bd, diag) = dd.gale_representation();
                Self::bipartite(&bd.u, &bd.w, diag.iter().chain(extra.iter()).collect())
            }
        }
    }

    pub fn chord_count(&self) -> usize {
        self.layout.chords(&self.forbidden).len()
    }

    pub fn default_kernel(&self) -> Kernel {
        Kernel::for_problem(self.layout, &self.forbidden)
    }
}

/// Every labeled realization of `problem`, sorted. Fails with `TooLarge`
/// when the chord count exceeds `max_chords`.
pub fn enumerate_realizations(problem: &Problem, max_chords: usize) -> Result<Vec<Realization>> {
    let chords = problem.chord_count();
    if chords > max_chords {
        return Err(Error::TooLarge { chords, cap: max_chords });
    }
    let mut found = match problem.layout {
        Layout::Simple { n } => {
            if problem.degrees.len() != n || !erdos_gallai(&problem.degrees) {
                return Ok(Vec::new());
            }
            enumerate_simple(&problem.degrees)
        }
        Layout::Bipartite { nu, nw } => {
            let (u, w) = problem.degrees.split_at(nu.min(problem.degrees.len()));
            if u.len() != nu || w.len() != nw || !restricted_bipartite_graphical(u, w, &problem.forbidden) {
                return Ok(Vec::new());
            }
            enumerate_bipartite(u, w, &problem.forbidden)
        }
    };
    let layout = problem.layout;
    let mut out: Vec<Realization> = found.drain(..).map(|edges| Realization::new(layout, edges)).collect();
    out.sort();
    Ok(out)
}

/// Vertex by vertex: vertex `a` picks its later neighbours among vertices
/// with residual degree left; a branch survives only if the residual of
/// the remaining vertices is still graphical.
fn enumerate_simple(degrees: &[usize]) -> Vec<Vec<Edge>> {
    fn rec(a: usize, residual: &mut Vec<usize>, edges: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
        let n = residual.len();
        if a == n {
            out.push(edges.clone());
            return;
        }
        for combo in simple_choices(a, residual) {
            apply_simple(a, &combo, residual, edges, 1);
            rec(a + 1, residual, edges, out);
            apply_simple(a, &combo, residual, edges, -1);
        }
    }
    if degrees.is_empty() {
        return vec![Vec::new()];
    }
    simple_choices(0, degrees)
        .into_par_iter()
        .flat_map_iter(|combo| {
            let mut residual = degrees.to_vec();
            let mut edges = Vec::new();
            let mut out = Vec::new();
            apply_simple(0, &combo, &mut residual, &mut edges, 1);
            rec(1, &mut residual, &mut edges, &mut out);
            out
        })
        .collect()
}

fn simple_choices(a: usize, residual: &[usize]) -> Vec<Vec<usize>> {
    let n = residual.len();
    let cands: Vec<usize> = (a + 1..n).filter(|&b| residual[b] > 0).collect();
    if residual[a] > cands.len() {
        return Vec::new();
    }
    cands
        .into_iter()
        .combinations(residual[a])
        .filter(|combo| {
            let mut rest = residual[a + 1..].to_vec();
            for &b in combo {
                rest[b - a - 1] -= 1;
            }
            erdos_gallai(&rest)
        })
        .collect()
}

fn apply_simple(a: usize, combo: &[usize], residual: &mut [usize], edges: &mut Vec<Edge>, dir: i32) {
    if dir > 0 {
        residual[a] -= combo.len();
        for &b in combo {
            residual[b] -= 1;
            edges.push((a, b));
        }
    } else {
        residual[a] += combo.len();
        for &b in combo {
            residual[b] += 1;
        }
        edges.truncate(edges.len() - combo.len());
    }
}

fn enumerate_bipartite(u: &[usize], w: &[usize], forbidden: &ForbiddenSet) -> Vec<Vec<Edge>> {
    // residual feasibility of the rows after `a`, against the current columns
    fn feasible(a: usize, u: &[usize], rw: &[usize], forbidden: &ForbiddenSet) -> bool {
        let rest = &u[a + 1..];
        if forbidden.is_empty() {
            return gale_ryser(rest, rw);
        }
        let local: ForbiddenSet =
            forbidden.iter().filter(|&(x, _)| x > a).map(|(x, y)| (x - a - 1, y)).collect();
        restricted_bipartite_graphical(rest, rw, &local)
    }
    fn choices(a: usize, u: &[usize], rw: &[usize], forbidden: &ForbiddenSet) -> Vec<Vec<usize>> {
        let cands: Vec<usize> = (0..rw.len()).filter(|&b| rw[b] > 0 && !forbidden.contains(a, b)).collect();
        if u[a] > cands.len() {
            return Vec::new();
        }
        cands
            .into_iter()
            .combinations(u[a])
            .filter(|combo| {
                let mut next = rw.to_vec();
                for &b in combo {
                    next[b] -= 1;
                }
                feasible(a, u, &next, forbidden)
            })
            .collect()
    }
    fn rec(a: usize, u: &[usize], rw: &mut Vec<usize>, f: &ForbiddenSet, edges: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
        if a == u.len() {
            out.push(edges.clone());
            return;
        }
        for combo in choices(a, u, rw, f) {
            for &b in &combo {
                rw[b] -= 1;
                edges.push((a, b));
            }
            rec(a + 1, u, rw, f, edges, out);
            for &b in &combo {
                rw[b] += 1;
            }
            edges.truncate(edges.len() - combo.len());
        }
    }
    if u.is_empty() {
        return vec![Vec::new()];
    }
    choices(0, u, w, forbidden)
        .into_par_iter()
        .flat_map_iter(|combo| {
            let mut rw = w.to_vec();
            let mut edges = Vec::new();
            for &b in &combo {
                rw[b] -= 1;
                edges.push((0, b));
            }
            let mut out = Vec::new();
            rec(1, u, &mut rw, forbidden, &mut edges, &mut out);
            out
        })
        .collect()
}

/// The realization graph: realizations as vertices, single swaps as edges,
/// with the exact transition probabilities of the lazy kernel.
#[derive(Debug, Clone)]
pub struct RealizationGraph {
    pub problem: Problem,
    pub kernel: Kernel,
    pub vertices: Vec<Realization>,
    index: HashMap<Realization, usize>,
    /// Per vertex: `(neighbour, move kind, probability)`.
    pub adjacency: Vec<Vec<(usize, SwapKind, f64)>>,
}

impl RealizationGraph {
    pub fn build(problem: &Problem, kernel: Kernel, max_chords: usize) -> Result<Self> {
        let vertices = enumerate_realizations(problem, max_chords)?;
        let index: HashMap<Realization, usize> = vertices.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let adjacency = vertices
            .par_iter()
            .map(|r| {
                let mut row: Vec<(usize, SwapKind, f64)> = enumerate_swaps(r, &problem.forbidden, kernel)
                    .into_iter()
                    .map(|m| {
                        let target = index[&m.apply_to(r)];
                        (target, m.kind, kernel.move_probability(m.kind, r.edge_count()))
                    })
                    .collect();
                row.sort_by_key(|&(t, _, _)| t);
                row
            })
            .collect();
        Ok(Self { problem: problem.clone(), kernel, vertices, index, adjacency })
    }

    pub fn for_sequence(seq: &Sequence, extra: Option<&ForbiddenSet>, c6: Option<bool>, max_chords: usize) -> Result<Self> {
        let problem = Problem::from_sequence(seq, extra);
        let mut kernel = problem.default_kernel();
        if let Some(c6) = c6 {
            kernel.c6 = c6;
        }
        Self::build(&problem, kernel, max_chords)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, r: &Realization) -> Option<usize> {
        self.index.get(r).copied()
    }

    /// Undirected swap edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&(j, _, _)| i < j).map(move |&(j, _, _)| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn probability(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0 - self.adjacency[i].iter().map(|&(_, _, p)| p).sum::<f64>();
        }
        self.adjacency[i]
            .binary_search_by_key(&j, |&(t, _, _)| t)
            .map(|k| self.adjacency[i][k].2)
            .unwrap_or(0.0)
    }

    pub fn transition_matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.adjacency.iter().enumerate() {
            let mut moved = 0.0;
            for &(j, _, p) in row {
                m[(i, j)] += p;
                moved += p;
            }
            m[(i, i)] += 1.0 - moved;
        }
        m
    }

    /// Number of connected components of the swap graph.
    pub fn components(&self) -> usize {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(t, _, _) in &self.adjacency[v] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components() <= 1
    }

    /// Largest deviation from a symmetric, row-stochastic, at-least-half-lazy
    /// kernel. Zero up to rounding for a correct chain.
    pub fn kernel_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.adjacency.iter().enumerate() {
            let moved: f64 = row.iter().map(|&(_, _, p)| p).sum();
            worst = worst.max((0.5 - (1.0 - moved)).max(0.0));
            for &(j, _, p) in row {
                worst = worst.max((p - self.probability(j, i)).abs());
            }
        }
        worst
    }

    /// `max_x |(uP)(x) - u(x)|` for the uniform vector `u`.
    pub fn stationarity_residual(&self) -> f64 {
        let n = self.len() as f64;
        (0..self.len())
            .map(|y| {
                let inflow: f64 = self.adjacency[y].iter().map(|&(x, _, _)| self.probability(x, y) / n).sum();
                (inflow + self.probability(y, y) / n - 1.0 / n).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Second largest eigenvalue of a symmetric matrix (`0` for a `1x1`
/// matrix).
pub fn lambda2(m: &DMatrix<f64>) -> f64 {
    if m.nrows() < 2 {
        return 0.0;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev[1]
}

pub const EXACT_CONDUCTANCE_LIMIT: usize = 20;

/// Conductance of a uniform-stationary kernel by minimising over every cut
/// `S` with `|S| ≤ n/2`.
pub fn exact_conductance(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    assert!(n <= EXACT_CONDUCTANCE_LIMIT, "exact conductance needs at most {EXACT_CONDUCTANCE_LIMIT} states");
    if n < 2 {
        return 1.0;
    }
    let out: Vec<f64> = (0..n).map(|v| (0..n).filter(|&u| u != v).map(|u| m[(v, u)]).sum()).collect();
    let mut cut = vec![0.0f64; 1 << n];
    let mut best = f64::INFINITY;
    for mask in 1usize..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let prev = mask & (mask - 1);
        let inside: f64 = (0..n).filter(|&u| prev >> u & 1 == 1).map(|u| m[(v, u)]).sum();
        cut[mask] = cut[prev] + out[v] - 2.0 * inside;
        let size = mask.count_ones() as usize;
        if 2 * size <= n {
            best = best.min(cut[mask] / size as f64);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub realization_count: usize,
    pub lambda2: f64,
    pub relaxation_time: f64,
    /// Exact conductance, present up to `EXACT_CONDUCTANCE_LIMIT` states.
    pub conductance: Option<f64>,
    /// Single-realization chain; `lambda2` is reported as 0.
    pub trivial: bool,
}

impl SpectralReport {
    /// `Φ²/2 ≤ 1 - λ₂ ≤ 2Φ`, vacuous without a conductance value.
    pub fn cheeger_holds(&self) -> bool {
        match self.conductance {
            Some(phi) if !self.trivial => {
                let gap = 1.0 - self.lambda2;
                phi * phi / 2.0 <= gap + 1e-10 && gap <= 2.0 * phi + 1e-10
            }
            _ => true,
        }
    }
}

pub fn spectral_report(rg: &RealizationGraph) -> Result<SpectralReport> {
    let components = rg.components();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let n = rg.len();
    if n <= 1 {
        return Ok(SpectralReport {
            realization_count: n,
            lambda2: 0.0,
            relaxation_time: 1.0,
            conductance: None,
            trivial: true,
        });
    }
    let m = rg.transition_matrix();
    let l2 = lambda2(&m);
    Ok(SpectralReport {
        realization_count: n,
        lambda2: l2,
        relaxation_time: 1.0 / (1.0 - l2),
        conductance: (n <= EXACT_CONDUCTANCE_LIMIT).then(|| exact_conductance(&m)),
        trivial: false,
    })
}

/// Transition matrix of the product chain: pick one of the `K` factors
/// uniformly and step it. States are ordered with the first factor most
/// significant.
pub fn product_transition(factors: &[DMatrix<f64>]) -> DMatrix<f64> {
    let k = factors.len() as f64;
    let sizes: Vec<usize> = factors.iter().map(|m| m.nrows()).collect();
    let total: usize = sizes.iter().product();
    let mut out = DMatrix::zeros(total, total);
    for (i, p) in factors.iter().enumerate() {
        let before: usize = sizes[..i].iter().product();
        let after: usize = sizes[i + 1..].iter().product();
        let lifted = DMatrix::<f64>::identity(before, before).kronecker(&p.kronecker(&DMatrix::identity(after, after)));
        out += lifted / k;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductEigenCheck {
    pub factor_lambda2: Vec<f64>,
    pub product_lambda2: f64,
    pub predicted: f64,
}

impl ProductEigenCheck {
    pub fn error(&self) -> f64 {
        (self.product_lambda2 - self.predicted).abs()
    }
}

/// Compares `λ₂` of the assembled product matrix with
/// `(K - 1 + max_i λ₂,ᵢ) / K`.
pub fn product_eigen_check(factors: &[DMatrix<f64>]) -> ProductEigenCheck {
    let factor_lambda2: Vec<f64> = factors.iter().map(lambda2).collect();
    let k = factors.len() as f64;
    let best = factor_lambda2
        .iter()
        .zip(factors)
        .filter(|(_, m)| m.nrows() > 1)
        .map(|(&l, _)| l)
        .fold(f64::NEG_INFINITY, f64::max);
    let predicted = (k - 1.0 + best) / k;
    ProductEigenCheck { product_lambda2: lambda2(&product_transition(factors)), predicted, factor_lambda2 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductWitness {
    pub composed_vertices: usize,
    pub composed_edges: usize,
    pub factor_vertices: Vec<usize>,
    pub factor_edges: Vec<usize>,
    /// Per factor and move kind: composed transition probability divided by
    /// the factor's, constant over all edges of that kind.
    pub weight_ratios: Vec<Vec<(SwapKind, f64)>>,
}

/// Checks that `composed` is the Cartesian product of `factors` under the
/// map `restrict` (realization ↦ tuple of factor realizations): the map is
/// a bijection, swap edges are exactly the edges changing one coordinate by
/// a factor swap of the same kind, and transition weights agree up to one
/// constant per factor and kind.
pub fn verify_cartesian_product(
    composed: &RealizationGraph,
    factors: &[&RealizationGraph],
    restrict: impl Fn(&Realization) -> Vec<Realization> + Sync,
) -> Result<ProductWitness> {
    let mismatch = |msg: String| Err(Error::ProductMismatch(msg));
    let factor_vertices: Vec<usize> = factors.iter().map(|f| f.len()).collect();
    let expected: usize = factor_vertices.iter().product();
    if composed.len() != expected {
        return mismatch(format!("{} composed realizations, factors give {expected}", composed.len()));
    }
    let mut tuples = Vec::with_capacity(composed.len());
    for r in &composed.vertices {
        let parts = restrict(r);
        if parts.len() != factors.len() {
            return mismatch(format!("restriction produced {} parts", parts.len()));
        }
        let mut t = Vec::with_capacity(parts.len());
        for (f, part) in factors.iter().zip(&parts) {
            match f.index_of(part) {
                Some(i) => t.push(i),
                None => return mismatch(format!("{part:?} is not a factor realization (from {r:?})")),
            }
        }
        tuples.push(t);
    }
    let mut distinct = tuples.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != tuples.len() {
        return mismatch("restriction is not injective".into());
    }
    let mut ratios: Vec<Vec<(SwapKind, f64)>> = vec![Vec::new(); factors.len()];
    for (x, row) in composed.adjacency.iter().enumerate() {
        for &(y, kind, p) in row {
            let diff: Vec<usize> = (0..factors.len()).filter(|&i| tuples[x][i] != tuples[y][i]).collect();
            let [i] = diff[..] else {
                return mismatch(format!("swap {x}->{y} changes {} coordinates", diff.len()));
            };
            let (a, b) = (tuples[x][i], tuples[y][i]);
            let Some(&(_, fk, fp)) = factors[i].adjacency[a].iter().find(|&&(t, _, _)| t == b) else {
                return mismatch(format!("swap {x}->{y} has no counterpart in factor {i}"));
            };
            if fk != kind {
                return mismatch(format!("swap {x}->{y} is {kind:?} but {fk:?} in factor {i}"));
            }
            let r = p / fp;
            match ratios[i].iter().find(|&&(k, _)| k == kind) {
                Some(&(_, r0)) if (r - r0).abs() > 1e-9 * r0.abs().max(1.0) => {
                    return mismatch(format!("weight ratio {r} differs from {r0} in factor {i}"));
                }
                Some(_) => {}
                None => ratios[i].push((kind, r)),
            }
        }
    }
    let factor_edges: Vec<usize> = factors.iter().map(|f| f.edge_count()).collect();
    let predicted: usize = (0..factors.len())
        .map(|i| factor_edges[i] * factor_vertices.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).product::<usize>())
        .sum();
    if composed.edge_count() != predicted {
        return mismatch(format!("{} composed swap edges, product rule gives {predicted}", composed.edge_count()));
    }
    Ok(ProductWitness {
        composed_vertices: composed.len(),
        composed_edges: composed.edge_count(),
        factor_vertices,
        factor_edges,
        weight_ratios: ratios,
    })
}

fn simple_restriction(r: &Realization, lo: usize, hi: usize) -> Realization {
    Realization::new(
        Layout::Simple { n: hi - lo },
        r.edges().iter().filter(|&&(a, b)| a >= lo && b < hi).map(|&(a, b)| (a - lo, b - lo)),
    )
}

/// `S ∘ G` for a split sequence `S` and a simple sequence `G`, both factors
/// taken as simple realization spaces. Composed vertices are `U`, `W`, `G`.
pub fn check_split_composition(s: &SplitSequence, g: &[usize], max_chords: usize) -> Result<ProductWitness> {
    let composed = Problem::simple(&compose(s, g));
    let split_n = s.len();
    let n = split_n + g.len();
    let kernel = |p: &Problem| Kernel::c4_only(p.layout);
    let c = RealizationGraph::build(&composed, kernel(&composed), max_chords)?;
    let p1 = Problem::simple(&s.degrees());
    let p2 = Problem::simple(g);
    let f1 = RealizationGraph::build(&p1, kernel(&p1), max_chords)?;
    let f2 = RealizationGraph::build(&p2, kernel(&p2), max_chords)?;
    verify_cartesian_product(&c, &[&f1, &f2], |r| vec![simple_restriction(r, 0, split_n), simple_restriction(r, split_n, n)])
}

fn bipartite_restriction(r: &Realization, u: (usize, usize), w: (usize, usize)) -> Realization {
    Realization::new(
        Layout::Bipartite { nu: u.1 - u.0, nw: w.1 - w.0 },
        r.edges()
            .iter()
            .filter(|&&(a, b)| a >= u.0 && a < u.1 && b >= w.0 && b < w.1)
            .map(|&(a, b)| (a - u.0, b - w.0)),
    )
}

/// `𝔊₁ ∘ 𝔊₂` of two restricted splitted bipartite sequences; with
/// non-empty forbidden 1-factors this is the directed case.
pub fn check_bipartite_composition(a: &RestrictedSequence, b: &RestrictedSequence, max_chords: usize) -> Result<ProductWitness> {
    let composed = compose_directed(a, b)?;
    let problem = |r: &RestrictedSequence| Problem::bipartite(&r.sequence.primary, &r.sequence.secondary, r.forbidden.clone());
    let pc = problem(&composed);
    let kernel = pc.default_kernel();
    let with_layout = |p: &Problem| Kernel { layout: p.layout, c6: kernel.c6 };
    let (pa, pb) = (problem(a), problem(b));
    let c = RealizationGraph::build(&pc, kernel, max_chords)?;
    let fa = RealizationGraph::build(&pa, with_layout(&pa), max_chords)?;
    let fb = RealizationGraph::build(&pb, with_layout(&pb), max_chords)?;
    let (nu, nw) = (a.sequence.primary.len(), a.sequence.secondary.len());
    let (tu, tw) = (nu + b.sequence.primary.len(), nw + b.sequence.secondary.len());
    verify_cartesian_product(&c, &[&fa, &fb], |r| {
        vec![bipartite_restriction(r, (0, nu), (0, nw)), bipartite_restriction(r, (nu, tu), (nw, tw))]
    })
}

/// Realization graphs of a splitted bipartite sequence and of its split
/// lift `Ψ⁻¹` coincide: dropping the clique is a bijection that maps swaps
/// to swaps.
pub fn check_psi_isomorphism(sb: &SplittedBipartiteSequence, max_chords: usize) -> Result<ProductWitness> {
    let split = psi_inverse(sb)?;
    let lift = Problem::simple(&split.degrees());
    let bip = Problem::bipartite(&sb.primary, &sb.secondary, ForbiddenSet::new());
    let c = RealizationGraph::build(&lift, Kernel::c4_only(lift.layout), max_chords)?;
    let f = RealizationGraph::build(&bip, Kernel::c4_only(bip.layout), max_chords)?;
    let nu = sb.primary.len();
    verify_cartesian_product(&c, &[&f], |r| {
        vec![Realization::new(
            bip.layout,
            r.edges().iter().filter(|&&(a, b)| a < nu && b >= nu).map(|&(a, b)| (a, b - nu)),
        )]
    })
}

/// Splitted bipartite factor lifted to a split graph, composed with a
/// simple sequence; also checks the lift against the bipartite factor.
pub fn check_lifted_composition(sb: &SplittedBipartiteSequence, g: &[usize], max_chords: usize) -> Result<ProductWitness> {
    check_psi_isomorphism(sb, max_chords)?;
    check_split_composition(&psi_inverse(sb)?, g, max_chords)
}

/// Total variation distance between the `k`-step law from `start` (exact
/// kernel power) and the uniform distribution.
pub fn exact_tv(rg: &RealizationGraph, start: usize, k: usize) -> f64 {
    let n = rg.len();
    let stay: Vec<f64> = (0..n).map(|i| rg.probability(i, i)).collect();
    let mut v = vec![0.0; n];
    v[start] = 1.0;
    for _ in 0..k {
        let mut next: Vec<f64> = v.iter().zip(&stay).map(|(a, s)| a * s).collect();
        for (x, row) in rg.adjacency.iter().enumerate() {
            if v[x] == 0.0 {
                continue;
            }
            for &(y, _, p) in row {
                next[y] += v[x] * p;
            }
        }
        v = next;
    }
    tv_from_uniform(&v)
}

pub fn tv_from_uniform(dist: &[f64]) -> f64 {
    let u = 1.0 / dist.len() as f64;
    0.5 * dist.iter().map(|&p| (p - u).abs()).sum::<f64>()
}

/// Runs the chain of `rg` for `steps` steps from `start` and returns the
/// visit frequencies (including the start).
pub fn empirical_occupation(rg: &RealizationGraph, start: usize, steps: u64, seed: u64) -> Vec<f64> {
    let mut chain = ChainState::new(&rg.vertices[start], rg.problem.forbidden.clone(), rg.kernel, stream_rng(seed, 1));
    let mut counts = vec![0u64; rg.len()];
    counts[start] += 1;
    for _ in 0..steps {
        chain.step();
        counts[rg.index_of(&chain.realization()).expect("chain left the realization space")] += 1;
    }
    let total = (steps + 1) as f64;
    counts.into_iter().map(|c| c as f64 / total).collect()
}

pub fn empirical_tv(rg: &RealizationGraph, start: usize, steps: u64, seed: u64) -> f64 {
    tv_from_uniform(&empirical_occupation(rg, start, steps, seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub swaps_checked: usize,
    pub violations: usize,
}

/// Vertex blocks (one per canonical component, tail included) of a simple
/// sequence, in user labels.
pub fn simple_blocks(d: &DegreeSequence) -> Result<Vec<Vec<usize>>> {
    let dec = canonical_decompose(d)?;
    let label = |p: &usize| d.order()[*p];
    let mut blocks: Vec<Vec<usize>> = dec
        .components
        .iter()
        .map(|c| c.u_positions.iter().chain(&c.w_positions).map(label).collect())
        .collect();
    if dec.tail.is_some() {
        blocks.push(dec.tail_positions.iter().map(label).collect());
    }
    Ok(blocks)
}

/// Blocks of a bipartite problem from its labeled factorization; `W`
/// vertices are offset by `|U|`.
pub fn bipartite_blocks(bd: &BipartiteDegreeSequence, forbidden: &ForbiddenSet) -> Result<Vec<Vec<usize>>> {
    let sb = SplittedBipartiteSequence::new(bd.u.clone(), bd.w.clone());
    let nu = bd.u.len();
    Ok(factorize_bipartite(&sb, forbidden)?
        .into_iter()
        .map(|f| f.primary_labels.iter().copied().chain(f.secondary_labels.iter().map(|&w| w + nu)).collect())
        .collect())
}

/// Every swap available from every realization must touch vertices of a
/// single block.
pub fn swap_locality(rg: &RealizationGraph, blocks: &[Vec<usize>]) -> LocalityReport {
    let nv = match rg.problem.layout {
        Layout::Simple { n } => n,
        Layout::Bipartite { nu, nw } => nu + nw,
    };
    let mut block_of = vec![usize::MAX; nv];
    for (b, vs) in blocks.iter().enumerate() {
        for &v in vs {
            block_of[v] = b;
        }
    }
    let (checked, violations) = rg
        .vertices
        .par_iter()
        .map(|r| {
            let moves = enumerate_swaps(r, &rg.problem.forbidden, rg.kernel);
            let bad = moves
                .iter()
                .filter(|m| {
                    let vs = m.vertices(rg.problem.layout);
                    vs.iter().any(|&v| block_of[v] == usize::MAX || block_of[v] != block_of[vs[0]])
                })
                .count();
            (moves.len(), bad)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    LocalityReport { swaps_checked: checked, violations }
}

/// Whether `u` induces a clique and the remaining vertices an independent
/// set in the simple realization `r`.
pub fn is_split_partition(r: &Realization, u: &[usize]) -> bool {
    let Layout::Simple { n } = r.layout() else {
        return false;
    };
    let mut in_u = vec![false; n];
    for &v in u {
        in_u[v] = true;
    }
    let clique = u.iter().tuple_combinations().all(|(&a, &b)| r.has_edge((a, b)));
    let independent = r.edges().iter().all(|&(a, b)| in_u[a] || in_u[b]);
    clique && independent
}
