//! Labeled graphs over a free basis and Stallings folding.

use petgraph::unionfind::UnionFind;

use crate::word::{Letter, Word};

/// Directed graph whose edges carry letters. Every edge `u --x--> v` is
/// stored twice, as the `x` slot of `u` and the `x^-1` slot of `v`, so a
/// folded graph is one where every slot holds at most one target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    rank: usize,
    adj: Vec<Vec<Option<usize>>>,
}

impl LabeledGraph {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of positive (generator-labeled) edges.
    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|slots| slots.iter().step_by(2).filter(|s| s.is_some()).count())
            .sum()
    }

    pub fn target(&self, v: usize, x: Letter) -> Option<usize> {
        self.adj[v][x.rank_key()]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|s| s.is_some()).count()
    }

    /// Follow `w` from `v`; `None` when some edge is missing.
    pub fn walk(&self, v: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(v, |cur, &x| self.target(cur, x))
    }

    /// Positive edges `(source, generator, target)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (u, slots) in self.adj.iter().enumerate() {
            for (key, t) in slots.iter().enumerate().step_by(2) {
                if let Some(t) = t {
                    out.push((u, key / 2, *t));
                }
            }
        }
        out
    }

    /// Every vertex has every slot filled: the graph covers the rose.
    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|slots| slots.iter().all(Option::is_some))
    }

    pub fn is_folded(&self) -> bool {
        // Slots hold single targets by construction; check the two-sided
        // storage is consistent, which rules out hidden duplicate labels.
        self.adj.iter().enumerate().all(|(u, slots)| {
            slots.iter().enumerate().all(|(key, t)| match t {
                Some(t) => {
                    let inv = Letter::from_rank_key(key).inverse().rank_key();
                    self.adj[*t][inv] == Some(u)
                }
                None => true,
            })
        })
    }
}

/// Incremental folding: edges are inserted one at a time and identified
/// vertices are merged until no vertex has two edges with the same label in
/// the same direction.
pub(crate) struct Folder {
    rank: usize,
    uf: UnionFind<usize>,
    slots: Vec<Vec<Option<usize>>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    pub fn new(vertex_count: usize, rank: usize) -> Self {
        Folder {
            rank,
            uf: UnionFind::new(vertex_count),
            slots: vec![vec![None; 2 * rank]; vertex_count],
            pending: Vec::new(),
        }
    }

    /// Add a path spelling `w` from `from` through fresh vertices
    /// `fresh[0..]` and ending at `to`. `fresh` must hold `|w| - 1` vertices;
    /// an empty `w` identifies `from` with `to`.
    pub fn add_path(&mut self, from: usize, w: &Word, fresh: &[usize], to: usize) {
        if w.is_empty() {
            self.pending.push((from, to));
            self.drain();
            return;
        }
        debug_assert_eq!(fresh.len() + 1, w.len());
        let mut cur = from;
        for (i, &x) in w.letters().iter().enumerate() {
            let next = if i + 1 == w.len() { to } else { fresh[i] };
            self.add_edge(cur, x, next);
            cur = next;
        }
    }

    pub fn add_edge(&mut self, u: usize, x: Letter, v: usize) {
        self.insert(u, x, v);
        self.drain();
    }

    fn insert(&mut self, u: usize, x: Letter, v: usize) {
        let u = self.uf.find_mut(u);
        let v = self.uf.find_mut(v);
        for (from, key, to) in [(u, x.rank_key(), v), (v, x.inverse().rank_key(), u)] {
            match self.slots[from][key] {
                Some(w) => {
                    let w = self.uf.find_mut(w);
                    if w != to {
                        self.pending.push((w, to));
                    }
                }
                None => self.slots[from][key] = Some(to),
            }
        }
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.uf.find_mut(a);
            let b = self.uf.find_mut(b);
            if a == b {
                continue;
            }
            self.uf.union(a, b);
            let root = self.uf.find_mut(a);
            let other = if root == a { b } else { a };
            let moved = std::mem::replace(&mut self.slots[other], vec![None; 2 * self.rank]);
            for (key, t) in moved.into_iter().enumerate() {
                if let Some(t) = t {
                    self.insert(root, Letter::from_rank_key(key), t);
                }
            }
        }
    }

    /// Finish folding, prune hanging trees away from `protected`, and
    /// renumber vertices breadth-first from `protected[0]` in letter order.
    /// Returns the graph and the new indices of the protected vertices.
    pub fn finish(mut self, protected: &[usize]) -> (LabeledGraph, Vec<usize>) {
        self.drain();
        let n = self.slots.len();
        let reps: Vec<usize> = (0..n).map(|v| self.uf.find_mut(v)).collect();
        let mut adj: Vec<Vec<Option<usize>>> = self
            .slots
            .iter()
            .map(|s| s.iter().map(|t| t.map(|t| reps[t])).collect())
            .collect();
        let keep: Vec<usize> = protected.iter().map(|&p| reps[p]).collect();
        let mut alive: Vec<bool> = (0..n).map(|v| reps[v] == v).collect();

        // Core pruning: strip degree <= 1 vertices that are not protected.
        let degree = |adj: &Vec<Vec<Option<usize>>>, v: usize| adj[v].iter().filter(|s| s.is_some()).count();
        let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || keep.contains(&v) || degree(&adj, v) > 1 {
                continue;
            }
            alive[v] = false;
            for key in 0..2 * self.rank {
                if let Some(t) = adj[v][key].take() {
                    let inv = Letter::from_rank_key(key).inverse().rank_key();
                    adj[t][inv] = None;
                    stack.push(t);
                }
            }
        }

        let mut order: Vec<usize> = Vec::new();
        let mut index: Vec<Option<usize>> = vec![None; n];
        let root = keep[0];
        index[root] = Some(0);
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for t in adj[v].iter().flatten() {
                if index[*t].is_none() {
                    index[*t] = Some(order.len());
                    order.push(*t);
                }
            }
        }
        let graph = LabeledGraph {
            rank: self.rank,
            adj: order
                .iter()
                .map(|&v| adj[v].iter().map(|t| t.map(|t| index[t].expect("connected"))).collect())
                .collect(),
        };
        let protected_out = keep.iter().map(|&k| index[k].expect("protected vertex reachable")).collect();
        (graph, protected_out)
    }
}
