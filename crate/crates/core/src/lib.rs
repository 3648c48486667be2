//! Growth of groups, double cosets and contracting elements at desk scale.
//!
//! The crate is organized bottom-up:
//!
//! - [`word`] and [`group`]: letters, words and normal-form oracles for free
//!   groups, free products of cyclic groups and C'(1/6) groups, with ball
//!   enumeration and orbital growth tables;
//! - [`subgroup`]: Stallings graphs, double-coset automata, canonical
//!   double-coset representatives and double-coset growth;
//! - [`contracting`]: axes, shortest-point projections, barriers and
//!   admissible paths in free groups;
//! - [`experiments`]: runnable, falsifiable experiments with CSV tables and
//!   verdicts, driven by [`config::ExperimentConfig`].

pub mod config;
pub mod contracting;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod group;
pub mod subgroup;
pub mod word;

pub use error::{Error, Result};
pub use group::{ball, growth_table, Ball, GroupOracle, GrowthTable, Presentation};
pub use word::{GeneratorAlphabet, Letter, Word};
