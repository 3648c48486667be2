//! Double cosets `HgK` in free groups as folded automata.
//!
//! Wedging the graph of `H` to the start of a path spelling `g` and the graph
//! of `K` to its end, then folding, gives a graph whose reduced paths from
//! the start to the accept vertex spell exactly the reduced words of `HgK`.
//! The shortlex-least such path is the canonical representative, and its
//! length is `d(HgK, 1)`.

use std::collections::{HashSet, VecDeque};
use std::io::Write;

use rayon::prelude::*;

use super::graph::{Folder, LabeledGraph};
use super::StallingsGraph;
use crate::error::{Error, Result};
use crate::fit::{log_linear_fit, trusted_window};
use crate::group::{ball, GroupOracle};
use crate::word::{free_reduce, Letter, Word};

#[derive(Clone, Debug)]
pub struct DoubleCosetAutomaton {
    graph: LabeledGraph,
    start: usize,
    accept: usize,
}

pub fn double_coset_automaton(h: &StallingsGraph, g: &Word, k: &StallingsGraph) -> DoubleCosetAutomaton {
    assert_eq!(h.rank(), k.rank(), "subgroups of different free groups");
    let g = free_reduce(g.letters().iter().copied());
    let (hg, kg) = (h.graph(), k.graph());
    let nh = hg.vertex_count();
    let path_inner = g.len().saturating_sub(1);
    let k_offset = nh + path_inner;
    let total = k_offset + kg.vertex_count();
    let mut folder = Folder::new(total, h.rank());
    for (u, gen, v) in hg.edges() {
        folder.add_edge(u, Letter::new(gen, false), v);
    }
    for (u, gen, v) in kg.edges() {
        folder.add_edge(k_offset + u, Letter::new(gen, false), k_offset + v);
    }
    let fresh: Vec<usize> = (nh..nh + path_inner).collect();
    folder.add_path(h.basepoint(), &g, &fresh, k_offset + k.basepoint());
    let (graph, protected) = folder.finish(&[h.basepoint(), k_offset + k.basepoint()]);
    DoubleCosetAutomaton { graph, start: protected[0], accept: protected[1] }
}

impl DoubleCosetAutomaton {
    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept(&self) -> usize {
        self.accept
    }

    /// Does the freely reduced form of `w` lie in the double coset?
    pub fn accepts(&self, w: &Word) -> bool {
        let w = free_reduce(w.letters().iter().copied());
        self.graph.walk(self.start, &w) == Some(self.accept)
    }

    /// Shortlex-least reduced word spelling a path from start to accept.
    ///
    /// Breadth-first search over (vertex, last letter) states. Levels are
    /// discovered in shortlex order, so the first state reaching the accept
    /// vertex carries the answer.
    pub fn shortlex_least(&self) -> Word {
        if self.start == self.accept {
            return Word::identity();
        }
        let letters = 2 * self.graph.rank();
        let stride = letters + 1;
        let state = |v: usize, last: Option<usize>| v * stride + last.map_or(0, |k| k + 1);
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.graph.vertex_count() * stride];
        let mut seen = vec![false; parent.len()];
        let mut queue = VecDeque::new();
        let s0 = state(self.start, None);
        seen[s0] = true;
        queue.push_back((self.start, None::<usize>));
        while let Some((v, last)) = queue.pop_front() {
            let from = state(v, last);
            for key in 0..letters {
                let x = Letter::from_rank_key(key);
                if last.is_some_and(|l| Letter::from_rank_key(l).inverse() == x) {
                    continue;
                }
                let Some(t) = self.graph.target(v, x) else { continue };
                let to = state(t, Some(key));
                if seen[to] {
                    continue;
                }
                seen[to] = true;
                parent[to] = Some((from, key));
                if t == self.accept {
                    let mut word = Vec::new();
                    let mut cur = to;
                    while let Some((prev, key)) = parent[cur] {
                        word.push(Letter::from_rank_key(key));
                        cur = prev;
                    }
                    word.reverse();
                    return Word::from_letters(word);
                }
                queue.push_back((t, Some(key)));
            }
        }
        unreachable!("accept vertex is connected to start by construction")
    }
}

/// Canonical representative of `HgK`: its shortlex-least reduced word.
pub fn canonical_rep(h: &StallingsGraph, k: &StallingsGraph, g: &Word) -> Word {
    double_coset_automaton(h, g, k).shortlex_least()
}

/// Double-coset growth `gr_{H,K}(r)` next to orbital growth `gr(r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleCosetGrowthTable {
    pub counts: Vec<u64>,
    pub orbital: Vec<u64>,
    pub ratio: Vec<f64>,
    /// Minimum of `ratio` over the trusted window; an empirical lower
    /// estimate, not an asymptotic constant.
    pub delta: f64,
}

impl DoubleCosetGrowthTable {
    pub fn r_max(&self) -> usize {
        self.counts.len() - 1
    }

    /// Slopes of `ln gr_{H,K}` and `ln gr` over the trusted window.
    pub fn fitted_rates(&self) -> (f64, f64) {
        let window = trusted_window(0, self.r_max());
        let to_f = |v: &[u64]| v.iter().map(|&c| c as f64).collect::<Vec<_>>();
        let hk = log_linear_fit(&to_f(&self.counts), window.clone()).map_or(0.0, |f| f.slope);
        let g = log_linear_fit(&to_f(&self.orbital), window).map_or(0.0, |f| f.slope);
        (hk, g)
    }

    /// CSV with header `r,gr_G,gr_HK,ratio`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["r", "gr_G", "gr_HK", "ratio"])?;
        for r in 0..self.counts.len() {
            wtr.write_record([
                r.to_string(),
                self.orbital[r].to_string(),
                self.counts[r].to_string(),
                self.ratio[r].to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Canonical representatives of every element of `B(r_max)`, in the ball's
/// shortlex order.
pub(crate) fn ball_representatives(
    oracle: &GroupOracle,
    h: &StallingsGraph,
    k: &StallingsGraph,
    r_max: usize,
) -> Result<Vec<(Word, Word)>> {
    require_free(oracle)?;
    let b = ball(oracle, r_max)?;
    let elements = b.to_vec();
    Ok(elements
        .into_par_iter()
        .map(|g| {
            let rep = canonical_rep(h, k, &g);
            (g, rep)
        })
        .collect())
}

pub fn double_coset_growth(
    oracle: &GroupOracle,
    h: &StallingsGraph,
    k: &StallingsGraph,
    r_max: usize,
) -> Result<DoubleCosetGrowthTable> {
    let reps = ball_representatives(oracle, h, k, r_max)?;
    let mut counts = vec![0u64; r_max + 1];
    let mut orbital = vec![0u64; r_max + 1];
    let mut seen: HashSet<&Word> = HashSet::new();
    for (g, rep) in &reps {
        orbital[g.len()] += 1;
        if seen.insert(rep) {
            counts[g.len()] += 1;
        }
    }
    for r in 1..=r_max {
        counts[r] += counts[r - 1];
        orbital[r] += orbital[r - 1];
    }
    let ratio: Vec<f64> = counts.iter().zip(&orbital).map(|(&c, &o)| c as f64 / o as f64).collect();
    let delta = trusted_window(0, r_max).map(|r| ratio[r]).fold(f64::INFINITY, f64::min);
    Ok(DoubleCosetGrowthTable { counts, orbital, ratio, delta })
}

pub(crate) fn require_free(oracle: &GroupOracle) -> Result<()> {
    if oracle.is_free() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "double cosets are computed in free groups only, got {}",
            oracle.presentation()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::stallings_from_generators;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn sub(gens: &[&str]) -> StallingsGraph {
        let f2 = GroupOracle::free(2).unwrap();
        let gens: Vec<Word> = gens.iter().map(|g| w(g)).collect();
        stallings_from_generators(&f2, &gens).unwrap()
    }

    #[test]
    fn cyclic_double_coset_accepts_a_i_b_a_j() {
        let a = sub(&["a"]);
        let aut = double_coset_automaton(&a, &w("b"), &a);
        assert!(aut.graph().is_folded());
        assert!(aut.accepts(&w("b")));
        assert!(aut.accepts(&w("aaabA")));
        assert!(!aut.accepts(&w("bb")));
        assert!(!aut.accepts(&w("")));
        assert_eq!(aut.shortlex_least(), w("b"));
    }

    #[test]
    fn trivial_subgroups_give_singletons() {
        let t = StallingsGraph::trivial(2);
        let aut = double_coset_automaton(&t, &w("ab"), &t);
        assert!(aut.accepts(&w("ab")));
        assert!(!aut.accepts(&w("aab")));
        assert_eq!(aut.shortlex_least(), w("ab"));
    }

    #[test]
    fn path_collapses_into_loop() {
        let a = sub(&["a"]);
        let aut = double_coset_automaton(&a, &w("aaa"), &a);
        assert_eq!(aut.start(), aut.accept());
        assert!(aut.accepts(&w("")));
        assert!(aut.accepts(&w("AAAAA")));
    }

    #[test]
    fn canonical_representatives() {
        let a = sub(&["a"]);
        assert_eq!(canonical_rep(&a, &a, &w("aaabaa")), w("b"));
        assert_eq!(canonical_rep(&a, &a, &w("aaaaa")), w(""));
        let h = sub(&["aa", "b"]);
        let rep = canonical_rep(&h, &a, &w("abaaa"));
        assert!(rep.len() <= 2, "rep {rep}");
    }

    #[test]
    fn growth_small_cases() {
        let f2 = GroupOracle::free(2).unwrap();
        let a = sub(&["a"]);
        let t = double_coset_growth(&f2, &a, &a, 1).unwrap();
        assert_eq!(t.counts, vec![1, 3]);
        let triv = StallingsGraph::trivial(2);
        let t = double_coset_growth(&f2, &triv, &triv, 4).unwrap();
        assert_eq!(t.counts, t.orbital);
        let normal = sub(&["aa", "b", "abA"]);
        let t = double_coset_growth(&f2, &normal, &normal, 5).unwrap();
        assert_eq!(t.counts, vec![1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn csv_layout() {
        let t = DoubleCosetGrowthTable { counts: vec![1, 3], orbital: vec![1, 5], ratio: vec![1.0, 0.6], delta: 0.6 };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "r,gr_G,gr_HK,ratio\n0,1,1,1\n1,5,3,0.6\n");
    }
}
