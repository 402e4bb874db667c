use std::collections::VecDeque;

use super::{slot, slot_letter, StallingsGraph};
use crate::word::letters_in_order;

/// Incremental Stallings folding over a union-find of vertices.
///
/// Each edge is stored as two half-edges. Inserting a half-edge whose
/// `(source, letter)` slot is already taken merges the two targets; merging
/// re-queues the absorbed vertex's half-edges at the surviving vertex, which
/// is always the smaller id. The folded graph does not depend on the order
/// merges happen in, and [`Folder::finish`] renumbers canonically.
pub(crate) struct Folder {
    rank: usize,
    parent: Vec<usize>,
    out: Vec<Vec<Option<usize>>>,
    pending: VecDeque<(usize, i32, usize)>,
}

impl Folder {
    pub(crate) fn new(rank: usize) -> Self {
        Folder { rank, parent: Vec::new(), out: Vec::new(), pending: VecDeque::new() }
    }

    pub(crate) fn from_graph(graph: &StallingsGraph) -> Self {
        let mut folder = Folder::new(graph.rank());
        for _ in 0..graph.vertex_count() {
            folder.add_vertex();
        }
        for (v, slots) in graph.adjacency().iter().enumerate() {
            folder.out[v].clone_from(slots);
        }
        folder
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.out.push(vec![None; 2 * self.rank]);
        id
    }

    pub(crate) fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn add_edge(&mut self, source: usize, letter: i32, target: usize) {
        self.pending.push_back((source, letter, target));
        self.pending.push_back((target, -letter, source));
        self.process();
    }

    /// Attaches a fresh path spelling `letters` from `start`; returns its end.
    pub(crate) fn add_path(&mut self, start: usize, letters: &[i32]) -> usize {
        let mut cur = start;
        for &letter in letters {
            let next = self.add_vertex();
            self.add_edge(cur, letter, next);
            cur = next;
        }
        cur
    }

    /// Attaches a petal spelling `letters` at `base`.
    pub(crate) fn add_loop(&mut self, base: usize, letters: &[i32]) {
        let Some((&last, body)) = letters.split_last() else {
            return;
        };
        let end = self.add_path(base, body);
        self.add_edge(end, last, base);
    }

    fn process(&mut self) {
        while let Some((u, letter, v)) = self.pending.pop_front() {
            let u = self.find(u);
            let v = self.find(v);
            match self.out[u][slot(letter)] {
                None => self.out[u][slot(letter)] = Some(v),
                Some(w) => {
                    let w = self.find(w);
                    if w != v {
                        self.union(w, v);
                    }
                }
            }
        }
    }

    fn union(&mut self, a: usize, b: usize) {
        let (keep, absorbed) = if a < b { (a, b) } else { (b, a) };
        self.parent[absorbed] = keep;
        let moved = std::mem::replace(&mut self.out[absorbed], vec![None; 2 * self.rank]);
        for (s, target) in moved.into_iter().enumerate() {
            if let Some(t) = target {
                self.pending.push_back((keep, slot_letter(s), t));
            }
        }
    }

    /// Canonical folded graph reachable from `base`, optionally pruned to its
    /// core. The second component maps each original vertex to its new id, or
    /// `None` when it was pruned.
    pub(crate) fn finish(mut self, base: usize, prune: bool) -> (StallingsGraph, Vec<Option<usize>>) {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|v| self.find(v)).collect();
        let base = roots[base];
        let mut adj: Vec<Vec<Option<usize>>> = vec![vec![None; 2 * self.rank]; n];
        for v in 0..n {
            if roots[v] == v {
                for (s, t) in self.out[v].iter().enumerate() {
                    adj[v][s] = t.map(|t| roots[t]);
                }
            }
        }
        let mut alive: Vec<bool> = (0..n).map(|v| roots[v] == v).collect();
        if prune {
            let mut degree: Vec<usize> = adj.iter().map(|s| s.iter().flatten().count()).collect();
            let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && v != base && degree[v] <= 1).collect();
            while let Some(v) = stack.pop() {
                if !alive[v] {
                    continue;
                }
                alive[v] = false;
                for s in 0..2 * self.rank {
                    if let Some(t) = adj[v][s].take() {
                        if t != v {
                            let mirror = s ^ 1;
                            adj[t][mirror] = None;
                            degree[t] -= 1;
                            if t != base && alive[t] && degree[t] <= 1 {
                                stack.push(t);
                            }
                        }
                    }
                }
            }
        }
        // Breadth-first renumbering in shortlex letter order.
        let mut new_id = vec![usize::MAX; n];
        let mut order = vec![base];
        new_id[base] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for l in letters_in_order(self.rank) {
                if let Some(t) = adj[v][slot(l)] {
                    if new_id[t] == usize::MAX {
                        new_id[t] = order.len();
                        order.push(t);
                    }
                }
            }
        }
        let renumbered: Vec<Vec<Option<usize>>> = order
            .iter()
            .map(|&v| adj[v].iter().map(|t| t.map(|t| new_id[t])).collect())
            .collect();
        let mapping = (0..n)
            .map(|v| {
                let r = roots[v];
                (alive[r] && new_id[r] != usize::MAX).then(|| new_id[r])
            })
            .collect();
        (StallingsGraph::from_adjacency(self.rank, renumbered), mapping)
    }
}
