//! Syntax-tree synthesis through an external SMT optimizer.
//!
//! A [`skeleton::Skeleton`] fixes the tree shape; [`encode`] turns label
//! choice and score propagation over a sample into an SMT-LIB2 script;
//! [`solver`] runs it; [`synth`] decodes and checks the answer.

pub mod encode;
pub mod sexpr;
pub mod skeleton;
pub mod solver;
pub mod synth;

pub use encode::{emit_script, emit_with, ConstraintScript, EncodeOptions, EncodingStyle, Objective};
pub use skeleton::{build_skeleton, skeleton_for_pattern, Label, Labeling, Skeleton, DEFAULT_MAX_DEPTH};
pub use solver::{SolverConfig, SolverError, SolverStatus};
pub use synth::{constraint_opt, decode, pattern_synth, Strategy, SynthConfig, SynthOutcome, Synthesized};

use crate::formula::PatternError;
use crate::valuation::ValuationError;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("sample has no positive traces")]
    NoPositives,
    #[error("depth {depth} exceeds the limit of {cap}")]
    DepthTooLarge { depth: usize, cap: usize },
    #[error("trace {trace} has length {len}, over the limit of {cap}")]
    TraceTooLong { trace: String, len: usize, cap: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("cannot decode solver model: {0}")]
    Decode(String),
    #[error("decoded formula {0} is not consistent with the sample")]
    Inconsistent(String),
    #[error("solver objective {objective} disagrees with evaluated minimum {evaluated}")]
    ObjectiveMismatch { objective: f64, evaluated: f64 },
}
