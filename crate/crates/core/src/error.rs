use crate::comprank::CompRankError;
use crate::formula::{NnfError, ParseError, PatternError};
use crate::sample::SampleError;
use crate::smt::SynthError;
use crate::tracegen::GenError;
use crate::valuation::ValuationError;

/// Any failure surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Nnf(#[from] NnfError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    CompRank(#[from] CompRankError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}
