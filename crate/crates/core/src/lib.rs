//! Three-permutation set systems with logarithmic prefix discrepancy.
//!
//! The crate builds the recursive family of three permutations on `[3^k]`
//! (and its left/right shift variants), evaluates the prefix and suffix
//! discrepancy functionals of a ±1 coloring exactly, replays the inductive
//! lower-bound argument as an explicit cut-triple witness, and provides
//! complete search routines (exhaustive enumeration and branch-and-bound)
//! that certify discrepancy lower bounds.
//!
//! Everything here is `no_std` with `alloc`. File formats, timing, sweeps
//! and the command line live in the `threeperm` crate.
//!
//! Elements and positions are 1-based at every public interface.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod construction;
mod error;
pub mod metrics;
pub mod solver;
pub mod witness;

pub use construction::{
    build_family, build_family_tensor, induced_subfamily, BlockLabel, Direction,
    PermutationFamily, PermutationTriple, Variant,
};
pub use error::{Error, Result};
pub use metrics::{
    disc_quadruple, interval_system_discrepancy, prefix_profile, prefix_system_discrepancy,
    Coloring, DiscQuadruple, Extremum, IncrementalProfile, PrefixDisc, PrefixProfile,
};
pub use solver::{
    decide_disc_at_most, exhaustive_min_disc, heuristic_coloring, Decision, DecideConfig,
    DecideResult, ElementOrder, ExactResult, Strategy,
};
pub use witness::{
    build_witness, classify_blocks, extract_bad_prefix, BadPrefix, BlockClassification, Case,
    Configuration, Side, Sign, WitnessBuilder, WitnessTriple,
};

/// `3^k`, or `None` on overflow.
pub fn pow3(k: u32) -> Option<usize> {
    3usize.checked_pow(k)
}

/// Lower bound `⌈k/3 + 1⌉` on the prefix discrepancy of the depth-`k` family.
pub fn theorem_bound(k: u32) -> u32 {
    k.div_ceil(3) + 1
}
