//! Differential-cryptanalysis workbench for SIMON32.
//!
//! The crate builds partial difference distribution tables (pDDTs) for XOR
//! differences through modular addition, measures Hamming-weight behaviour of
//! those differentials over SIMON rounds, and turns the best ones into
//! deterministic differential trails.

pub mod diff;
pub mod error;
pub mod experiments;
pub mod pddt;
mod sampling;
pub mod simon;
pub mod trails;
pub mod word;

pub use diff::{
    and_dp_exact, paper_round_propagate, round_dp_exact, xdp_add, DyadicProb, McEstimate,
};
pub use error::{Error, FormatError, Result};
pub use experiments::{HwExperiment, HwMode, HwSampleSet, StatTestResult};
pub use pddt::{compute_pddt, DiffTriple, PartialDdt, SortedDiffs, ThresholdMode};
pub use simon::{KeySchedule, Rotations, Simon};
pub use trails::{PromisingDiff, PromisingMetric, Trail, TrailRow, Verdict};
pub use word::{hw, CipherState, DiffState, WordSize};
