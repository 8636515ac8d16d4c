//! Small Dinic max-flow used for restricted bipartite feasibility and
//! realization.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: usize,
    rev: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self { adj: vec![Vec::new(); nodes] }
    }

    /// Adds an arc and returns its handle `(from, index)`.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: usize) -> (usize, usize) {
        let fwd = self.adj[from].len();
        let back = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Arc { to, cap, rev: back });
        self.adj[to].push(Arc { to: from, cap: 0, rev: fwd });
        (from, fwd)
    }

    /// Flow currently carried by an arc, given its original capacity.
    pub(crate) fn flow_on(&self, handle: (usize, usize), original_cap: usize) -> usize {
        original_cap - self.adj[handle.0][handle.1].cap
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                for a in &self.adj[v] {
                    if a.cap > 0 && level[a.to] == usize::MAX {
                        level[a.to] = level[v] + 1;
                        queue.push_back(a.to);
                    }
                }
            }
            if level[sink] == usize::MAX {
                return total;
            }
            let mut iter = vec![0; n];
            loop {
                let pushed = self.augment(source, sink, usize::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(
        &mut self,
        v: usize,
        sink: usize,
        limit: usize,
        level: &[usize],
        iter: &mut [usize],
    ) -> usize {
        if v == sink {
            return limit;
        }
        while iter[v] < self.adj[v].len() {
            let Arc { to, cap, rev } = self.adj[v][iter[v]];
            if cap > 0 && level[to] == level[v] + 1 {
                let got = self.augment(to, sink, limit.min(cap), level, iter);
                if got > 0 {
                    self.adj[v][iter[v]].cap -= got;
                    self.adj[to][rev].cap += got;
                    return got;
                }
            }
            iter[v] += 1;
        }
        0
    }
}
