//! Union-find partition of a ball into double cosets, independent of the
//! folding machinery. Used as an oracle for [`super::canonical_rep`].

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use super::double_coset::{ball_representatives, require_free};
use super::StallingsGraph;
use crate::error::Result;
use crate::group::{ball, GroupOracle};
use crate::word::{shortlex_cmp, Word};

/// Classes of `B(r)` joined inside the buffered ball `B(r + buffer)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForcePartition {
    pub radius: usize,
    pub buffer: usize,
    /// Each class sorted shortlex; classes ordered by their least element.
    pub classes: Vec<Vec<Word>>,
}

impl BruteForcePartition {
    /// Class index of every element of `B(r)`.
    pub fn labels(&self) -> HashMap<&Word, usize> {
        self.classes.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |w| (w, i))).collect()
    }
}

/// One H-move plus one K-move never leaves the buffer from `B(r)`.
pub fn default_buffer(h: &StallingsGraph, k: &StallingsGraph) -> usize {
    2 * h.max_generator_length().max(k.max_generator_length()) + 2
}

pub fn brute_force_double_cosets(
    oracle: &GroupOracle,
    h: &StallingsGraph,
    k: &StallingsGraph,
    r: usize,
    buffer: usize,
) -> Result<BruteForcePartition> {
    require_free(oracle)?;
    let big = ball(oracle, r + buffer)?;
    let elements = big.to_vec();
    let index: HashMap<&Word, usize> = elements.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut uf = UnionFind::new(elements.len());
    for (i, g) in elements.iter().enumerate() {
        for s in h.generators() {
            if let Some(&j) = index.get(&oracle.multiply(s, g)?) {
                uf.union(i, j);
            }
        }
        for t in k.generators() {
            if let Some(&j) = index.get(&oracle.multiply(g, t)?) {
                uf.union(i, j);
            }
        }
    }
    let mut by_root: HashMap<usize, Vec<Word>> = HashMap::new();
    // Elements are in shortlex order, so every class comes out sorted.
    for (i, g) in elements.iter().enumerate().take_while(|(_, g)| g.len() <= r) {
        by_root.entry(uf.find_mut(i)).or_default().push(g.clone());
    }
    let mut classes: Vec<Vec<Word>> = by_root.into_values().collect();
    classes.sort_by(|a, b| shortlex_cmp(&a[0], &b[0]));
    Ok(BruteForcePartition { radius: r, buffer, classes })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionComparison {
    /// Pairs joined by brute force but given different canonical
    /// representatives. Brute-force joins are sound, so any entry here is a
    /// bug in the automaton route.
    pub disagreements: Vec<(Word, Word)>,
    /// Pairs sharing a canonical representative but split by brute force:
    /// the buffer was too small to connect them.
    pub buffer_warnings: Vec<(Word, Word)>,
    pub automaton_classes: usize,
    pub brute_force_classes: usize,
}

impl PartitionComparison {
    pub fn is_exact_match(&self) -> bool {
        self.disagreements.is_empty() && self.buffer_warnings.is_empty()
    }
}

/// Compare the canonical-representative partition of `B(r)` with the
/// brute-force one.
pub fn compare_with_brute_force(
    oracle: &GroupOracle,
    h: &StallingsGraph,
    k: &StallingsGraph,
    r: usize,
    buffer: usize,
) -> Result<PartitionComparison> {
    let brute = brute_force_double_cosets(oracle, h, k, r, buffer)?;
    let labels = brute.labels();
    let reps = ball_representatives(oracle, h, k, r)?;
    let rep_of: HashMap<&Word, &Word> = reps.iter().map(|(g, c)| (g, c)).collect();

    let mut cmp = PartitionComparison { brute_force_classes: brute.classes.len(), ..Default::default() };
    for class in &brute.classes {
        for g in &class[1..] {
            if rep_of[g] != rep_of[&class[0]] {
                cmp.disagreements.push((class[0].clone(), g.clone()));
            }
        }
    }
    let mut first_with_rep: HashMap<&Word, &Word> = HashMap::new();
    for (g, c) in &reps {
        match first_with_rep.get(c) {
            Some(first) => {
                if labels[*first] != labels[g] {
                    cmp.buffer_warnings.push(((*first).clone(), g.clone()));
                }
            }
            None => {
                first_with_rep.insert(c, g);
            }
        }
    }
    cmp.automaton_classes = first_with_rep.len();
    Ok(cmp)
}
