//! Finitely generated subgroups of free groups and their double cosets.

mod brute;
mod double_coset;
mod graph;
mod stallings;

pub use brute::{
    brute_force_double_cosets, compare_with_brute_force, default_buffer, BruteForcePartition,
    PartitionComparison,
};
pub use double_coset::{
    canonical_rep, double_coset_automaton, double_coset_growth, DoubleCosetAutomaton,
    DoubleCosetGrowthTable,
};
pub(crate) use double_coset::ball_representatives;
pub use graph::LabeledGraph;
pub use stallings::{stallings_from_generators, StallingsGraph};

use crate::error::Result;
use crate::group::{ball, GroupOracle};

/// Geodesic quasi-convexity gauge of `H`: the largest distance from a vertex
/// of `[1, h]` to `H` over `h` in `H` with `|h| <= r`.
///
/// `d(p, H)` is the length of the shortest word in the coset `Hp`, computed
/// as a canonical double-coset representative with trivial right factor.
pub fn quasiconvexity_gauge(oracle: &GroupOracle, h: &StallingsGraph, r: usize) -> Result<usize> {
    double_coset::require_free(oracle)?;
    let trivial = StallingsGraph::trivial(h.rank());
    let b = ball(oracle, r)?;
    let mut gauge = 0;
    for g in b.iter().filter(|g| h.membership(g)) {
        for p in oracle.geodesic(g)? {
            gauge = gauge.max(canonical_rep(h, &trivial, &p).len());
        }
    }
    Ok(gauge)
}
