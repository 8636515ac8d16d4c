//! Swap moves (C4 and C6) and the mutable edge state the chains walk on.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Layout, Realization};
use crate::sequence::ForbiddenSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SwapKind {
    C4,
    C6,
}

/// A degree-preserving rewiring: `removed` edges are present before the
/// move, `added` ones absent (and chords).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SwapMove {
    pub kind: SwapKind,
    pub removed: Vec<Edge>,
    pub added: Vec<Edge>,
}

impl SwapMove {
    /// Vertices touched by the move. Bipartite `W` vertices are offset by
    /// `nu`.
    pub fn vertices(&self, layout: Layout) -> Vec<usize> {
        let off = match layout {
            Layout::Simple { .. } => 0,
            Layout::Bipartite { nu, .. } => nu,
        };
        let mut v: Vec<usize> = self.removed.iter().flat_map(|&(a, b)| [a, b + off]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn apply_to(&self, r: &Realization) -> Realization {
        let removed: HashSet<Edge> = self.removed.iter().copied().collect();
        Realization::new(
            r.layout(),
            r.edges().iter().copied().filter(|e| !removed.contains(e)).chain(self.added.iter().copied()),
        )
    }
}

/// Which moves a chain proposes. `c6` enables the hexagon moves needed for
/// bipartite problems with a forbidden 1-factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kernel {
    pub layout: Layout,
    pub c6: bool,
}

impl Kernel {
    /// Default kernel: C6 moves on whenever the forbidden set is a non-empty
    /// 1-factor of a bipartite layout.
    pub fn for_problem(layout: Layout, forbidden: &ForbiddenSet) -> Self {
        let c6 = matches!(layout, Layout::Bipartite { .. }) && !forbidden.is_empty() && forbidden.is_one_factor();
        Self { layout, c6 }
    }

    pub fn c4_only(layout: Layout) -> Self {
        Self { layout, c6: false }
    }

    fn matchings(&self) -> f64 {
        match self.layout {
            Layout::Simple { .. } => 3.0,
            Layout::Bipartite { .. } => 2.0,
        }
    }

    /// Exact probability that one lazy step performs a particular valid move
    /// of the given kind on a graph with `edges` edges.
    pub fn move_probability(&self, kind: SwapKind, edges: usize) -> f64 {
        let e = edges as f64;
        let branch = if self.c6 { 0.5 } else { 1.0 };
        match kind {
            SwapKind::C4 => 0.5 * branch * (2.0 / (e * (e - 1.0))) / self.matchings(),
            SwapKind::C6 => 0.5 * branch * 3.0 / (e * (e - 1.0) * (e - 2.0)),
        }
    }
}

fn distinct4(a: usize, b: usize, c: usize, d: usize) -> bool {
    a != b && a != c && a != d && b != c && b != d && c != d
}

/// Every valid move from `r`, deduplicated, in a deterministic order.
pub fn enumerate_swaps(r: &Realization, forbidden: &ForbiddenSet, kernel: Kernel) -> Vec<SwapMove> {
    let edges = r.edges();
    let present: HashSet<Edge> = edges.iter().copied().collect();
    let layout = r.layout();
    let free = |e: Edge| {
        let e = layout.normalize(e);
        !present.contains(&e)
            && match layout {
                Layout::Simple { .. } => e.0 != e.1,
                Layout::Bipartite { .. } => !forbidden.contains(e.0, e.1),
            }
    };
    let mut out = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            let candidates: Vec<[Edge; 2]> = match layout {
                Layout::Simple { .. } => {
                    if !distinct4(a, b, c, d) {
                        continue;
                    }
                    vec![[(a, c), (b, d)], [(a, d), (b, c)]]
                }
                Layout::Bipartite { .. } => {
                    if a == c || b == d {
                        continue;
                    }
                    vec![[(a, d), (c, b)]]
                }
            };
            for [x, y] in candidates {
                if free(x) && free(y) {
                    out.push(SwapMove {
                        kind: SwapKind::C4,
                        removed: vec![edges[i], edges[j]],
                        added: vec![layout.normalize(x), layout.normalize(y)],
                    });
                }
            }
        }
    }
    if kernel.c6 {
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                for k in j + 1..edges.len() {
                    for tri in [[i, j, k], [i, k, j]] {
                        let t = [edges[tri[0]], edges[tri[1]], edges[tri[2]]];
                        if let Some(added) = hexagon(&t, &free, forbidden) {
                            out.push(SwapMove { kind: SwapKind::C6, removed: t.to_vec(), added });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Tests the C6 pattern on an ordered edge triple `(a1,b1),(a2,b2),(a3,b3)`:
/// adds `(a1,b2),(a2,b3),(a3,b1)` when those are free chords and
/// `(a1,b3),(a2,b1),(a3,b2)` are all forbidden.
fn hexagon(t: &[Edge; 3], free: &impl Fn(Edge) -> bool, forbidden: &ForbiddenSet) -> Option<Vec<Edge>> {
    let [(a1, b1), (a2, b2), (a3, b3)] = *t;
    if a1 == a2 || a1 == a3 || a2 == a3 || b1 == b2 || b1 == b3 || b2 == b3 {
        return None;
    }
    let blocked = forbidden.contains(a1, b3) && forbidden.contains(a2, b1) && forbidden.contains(a3, b2);
    let added = [(a1, b2), (a2, b3), (a3, b1)];
    (blocked && added.iter().all(|&e| free(e))).then(|| added.to_vec())
}

/// Mutable edge set with O(1) membership and uniform edge picking.
#[derive(Debug, Clone)]
pub struct EdgeState {
    layout: Layout,
    forbidden: ForbiddenSet,
    edges: Vec<Edge>,
    index: HashMap<Edge, usize>,
}

impl EdgeState {
    pub fn new(r: &Realization, forbidden: ForbiddenSet) -> Self {
        let edges = r.edges().to_vec();
        let index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Self { layout: r.layout(), forbidden, edges, index }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn forbidden(&self) -> &ForbiddenSet {
        &self.forbidden
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn realization(&self) -> Realization {
        Realization::new(self.layout, self.edges.iter().copied())
    }

    fn free(&self, e: Edge) -> bool {
        let e = self.layout.normalize(e);
        !self.index.contains_key(&e)
            && match self.layout {
                Layout::Simple { .. } => e.0 != e.1,
                Layout::Bipartite { .. } => !self.forbidden.contains(e.0, e.1),
            }
    }

    fn replace(&mut self, slot: usize, e: Edge) {
        let e = self.layout.normalize(e);
        let old = std::mem::replace(&mut self.edges[slot], e);
        self.index.remove(&old);
        self.index.insert(e, slot);
    }

    /// One lazy step of `kernel`. Returns whether the state changed.
    pub fn step<R: Rng + ?Sized>(&mut self, kernel: Kernel, rng: &mut R) -> bool {
        if rng.gen::<bool>() {
            return false;
        }
        if kernel.c6 && rng.gen::<bool>() {
            self.propose_c6(rng)
        } else {
            self.propose_c4(rng)
        }
    }

    fn propose_c4<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let m = self.edges.len();
        if m < 2 {
            return false;
        }
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let ((a, b), (c, d)) = (self.edges[i], self.edges[j]);
        let pick = match self.layout {
            Layout::Simple { .. } => {
                if !distinct4(a, b, c, d) {
                    return false;
                }
                match rng.gen_range(0..3) {
                    0 => return false,
                    1 => [(a, c), (b, d)],
                    _ => [(a, d), (b, c)],
                }
            }
            Layout::Bipartite { .. } => {
                if a == c || b == d {
                    return false;
                }
                if rng.gen_range(0..2) == 0 {
                    return false;
                }
                [(a, d), (c, b)]
            }
        };
        if !(self.free(pick[0]) && self.free(pick[1])) {
            return false;
        }
        self.replace(i, pick[0]);
        self.replace(j, pick[1]);
        true
    }

    fn propose_c6<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let m = self.edges.len();
        if m < 3 {
            return false;
        }
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let mut k = rng.gen_range(0..m - 2);
        if k >= lo {
            k += 1;
        }
        if k >= hi {
            k += 1;
        }
        let t = [self.edges[i], self.edges[j], self.edges[k]];
        let Some(added) = hexagon(&t, &|e| self.free(e), &self.forbidden) else {
            return false;
        };
        self.replace(i, added[0]);
        self.replace(j, added[1]);
        self.replace(k, added[2]);
        true
    }
}
