//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's graphicality or enumeration code.

#![allow(dead_code)]

/// Havel–Hakimi on a simple degree sequence.
pub fn simple_graphical(d: &[usize]) -> bool {
    let mut d: Vec<usize> = d.to_vec();
    loop {
        d.sort_unstable_by(|a, b| b.cmp(a));
        let Some(&top) = d.first() else { return true };
        if top == 0 {
            return true;
        }
        d.remove(0);
        if top > d.len() {
            return false;
        }
        for x in d.iter_mut().take(top) {
            if *x == 0 {
                return false;
            }
            *x -= 1;
        }
    }
}

/// Greedy bipartite realization: each `u` vertex takes the largest residual
/// `w` degrees.
pub fn bipartite_graphical(u: &[usize], w: &[usize]) -> bool {
    if u.iter().sum::<usize>() != w.iter().sum::<usize>() {
        return false;
    }
    let mut w = w.to_vec();
    for &du in u {
        if du > w.len() {
            return false;
        }
        w.sort_unstable_by(|a, b| b.cmp(a));
        for x in w.iter_mut().take(du) {
            if *x == 0 {
                return false;
            }
            *x -= 1;
        }
    }
    true
}

/// Non-increasing sequences of length `len` with entries in `0..=max`.
pub fn non_increasing(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s: Vec<usize>| {
                let cap = s.last().copied().unwrap_or(max);
                (0..=cap).map(move |x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// All graphical non-increasing simple sequences on `1..=max_n` vertices.
pub fn graphical_simple_sequences(max_n: usize) -> Vec<Vec<usize>> {
    (1..=max_n)
        .flat_map(|n| non_increasing(n, n - 1))
        .filter(|d| simple_graphical(d))
        .collect()
}

/// Degree spectra computed straight from an edge list: column `v`, entry
/// `i - 1` counts neighbours of `v` with degree `i`.
pub fn spectra_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut deg = vec![0; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    let delta = deg.iter().copied().max().unwrap_or(0);
    let mut cols = vec![vec![0; delta]; n];
    for &(a, b) in edges {
        cols[a][deg[b] - 1] += 1;
        cols[b][deg[a] - 1] += 1;
    }
    cols
}

pub fn sorted_desc(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}
