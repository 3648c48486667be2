use std::fmt;

use super::graph::{Folder, LabeledGraph};
use crate::error::{Error, Result};
use crate::group::GroupOracle;
use crate::word::{free_reduce, shortlex_cmp, Letter, Word};

/// Folded core graph of a finitely generated subgroup `H` of a free group.
/// Vertex 0 is the basepoint; reduced basepoint loops spell exactly `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsGraph {
    graph: LabeledGraph,
    generators: Vec<Word>,
}

pub fn stallings_from_generators(oracle: &GroupOracle, gens: &[Word]) -> Result<StallingsGraph> {
    if !oracle.is_free() {
        return Err(Error::Unsupported(format!(
            "Stallings graphs need a free group, got {}",
            oracle.presentation()
        )));
    }
    let mut reduced = Vec::new();
    for g in gens {
        let w = oracle.normal_form(g)?;
        if !w.is_empty() && !reduced.contains(&w) {
            reduced.push(w);
        }
    }
    Ok(StallingsGraph::fold(oracle.rank(), reduced))
}

impl StallingsGraph {
    /// The trivial subgroup: one vertex, no edges.
    pub fn trivial(rank: usize) -> Self {
        StallingsGraph::fold(rank, Vec::new())
    }

    fn fold(rank: usize, generators: Vec<Word>) -> Self {
        let n = 1 + generators.iter().map(|g| g.len() - 1).sum::<usize>();
        let mut folder = Folder::new(n, rank);
        let mut next = 1;
        for g in &generators {
            let fresh: Vec<usize> = (next..next + g.len() - 1).collect();
            next += fresh.len();
            folder.add_path(0, g, &fresh, 0);
        }
        let (graph, _) = folder.finish(&[0]);
        StallingsGraph { graph, generators }
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// Reduced, nontrivial generators the graph was folded from.
    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn max_generator_length(&self) -> usize {
        self.generators.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.graph.edge_count() == 0
    }

    /// Does the freely reduced `w` trace a loop at the basepoint?
    pub fn membership(&self, w: &Word) -> bool {
        let w = free_reduce(w.letters().iter().copied());
        self.graph.walk(0, &w) == Some(0)
    }

    /// A folded core graph has finite index iff it covers the rose.
    pub fn is_infinite_index(&self) -> bool {
        !self.graph.is_complete()
    }

    /// `[F : H]` when finite.
    pub fn index(&self) -> Option<usize> {
        self.graph.is_complete().then(|| self.graph.vertex_count())
    }

    /// Elements of `H` of length at most `max_len`, shortlex.
    ///
    /// Every reduced word reads at most one path in a folded graph, so the
    /// search walks reduced paths from the basepoint and keeps the loops.
    pub fn elements(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<Letter>)> = vec![(0, Vec::new())];
        while let Some((v, word)) = stack.pop() {
            if v == 0 {
                out.push(Word::from_letters(word.clone()));
            }
            if word.len() == max_len {
                continue;
            }
            for key in 0..2 * self.rank() {
                let x = Letter::from_rank_key(key);
                if word.last().is_some_and(|l| l.inverse() == x) {
                    continue;
                }
                if let Some(t) = self.graph.target(v, x) {
                    let mut next = word.clone();
                    next.push(x);
                    stack.push((t, next));
                }
            }
        }
        out.sort_by(shortlex_cmp);
        out
    }

    /// Smallest `k > 0` with `u^k` in `H`, if any power of `u` other than the
    /// identity lies in `H`. `u` must be nontrivial.
    pub fn cyclic_intersection(&self, u: &Word) -> Option<usize> {
        let u = free_reduce(u.letters().iter().copied());
        assert!(!u.is_empty(), "cyclic_intersection needs a nontrivial element");
        // u = c v c^-1 with v cyclically reduced; every reduced u^k starts
        // with c, continues with v^k and ends with c^-1.
        let letters = u.letters();
        let mut k = 0;
        while 2 * k + 1 < letters.len() && letters[k] == letters[letters.len() - 1 - k].inverse() {
            k += 1;
        }
        let conj = Word::from_letters(letters[..k].to_vec());
        let core = Word::from_letters(letters[k..letters.len() - k].to_vec());
        let start = self.graph.walk(0, &conj)?;
        let mut cur = start;
        // Reading `core` is a partial injection on vertices, so `start` is
        // periodic iff it returns within `vertex_count` steps.
        for power in 1..=self.graph.vertex_count() {
            cur = self.graph.walk(cur, &core)?;
            if cur == start {
                return Some(power);
            }
        }
        None
    }
}

impl fmt::Display for StallingsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}
