//! Graphicality tests: Erdős–Gallai, Gale–Ryser, restricted bipartite
//! feasibility and directed sequences through Gale's representation.

use crate::flow::FlowNetwork;
use crate::sequence::{DirectedDegreeSequence, ForbiddenSet};

/// Whether `degrees` is the degree sequence of some simple graph.
pub fn erdos_gallai(degrees: &[usize]) -> bool {
    let n = degrees.len();
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<usize>() % 2 != 0 {
        return false;
    }
    if d.first().is_some_and(|&m| m >= n) {
        return false;
    }
    let mut lhs = 0;
    for k in 1..=n {
        lhs += d[k - 1];
        let rhs = k * (k - 1) + d[k..].iter().map(|&x| x.min(k)).sum::<usize>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Whether `(u, w)` has a simple bipartite realization.
pub fn gale_ryser(u: &[usize], w: &[usize]) -> bool {
    if u.iter().sum::<usize>() != w.iter().sum::<usize>() {
        return false;
    }
    if u.iter().any(|&x| x > w.len()) || w.iter().any(|&x| x > u.len()) {
        return false;
    }
    let mut a = u.to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    let mut lhs = 0;
    for (k, &ak) in a.iter().enumerate() {
        lhs += ak;
        let rhs: usize = w.iter().map(|&b| b.min(k + 1)).sum();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Realization of `(u, w)` avoiding `forbidden`, found by max-flow on the
/// chord graph. Returns the `(u, w)` edge list, or `None` if infeasible.
pub(crate) fn restricted_realization(
    u: &[usize],
    w: &[usize],
    forbidden: &ForbiddenSet,
) -> Option<Vec<(usize, usize)>> {
    let total: usize = u.iter().sum();
    if total != w.iter().sum::<usize>() {
        return None;
    }
    let (nu, nw) = (u.len(), w.len());
    let source = nu + nw;
    let sink = source + 1;
    let mut net = FlowNetwork::new(nu + nw + 2);
    for (i, &d) in u.iter().enumerate() {
        net.add_arc(source, i, d);
    }
    for (j, &d) in w.iter().enumerate() {
        net.add_arc(nu + j, sink, d);
    }
    let mut chords = Vec::new();
    for i in 0..nu {
        for j in 0..nw {
            if !forbidden.contains(i, j) {
                chords.push(((i, j), net.add_arc(i, nu + j, 1)));
            }
        }
    }
    if net.max_flow(source, sink) != total {
        return None;
    }
    Some(
        chords
            .into_iter()
            .filter(|&(_, handle)| net.flow_on(handle, 1) == 1)
            .map(|(edge, _)| edge)
            .collect(),
    )
}

/// Whether `(u, w)` has a realization that avoids every pair in `forbidden`.
pub fn restricted_bipartite_graphical(u: &[usize], w: &[usize], forbidden: &ForbiddenSet) -> bool {
    restricted_realization(u, w, forbidden).is_some()
}

/// Whether `dd` is realized by a simple digraph (no loops; antiparallel arcs
/// allowed).
pub fn directed_graphical(dd: &DirectedDegreeSequence) -> bool {
    let (bd, f) = dd.gale_representation();
    restricted_bipartite_graphical(&bd.u, &bd.w, &f)
}
