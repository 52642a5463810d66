//! Mining temporal specifications from finite traces.
//!
//! Candidate formulas in the GF fragment of LTL are ranked by a quantitative
//! valuation that rewards formulas for how strongly the positive traces
//! evidence them. Two search strategies are provided: enumerative
//! compositional ranking ([`comprank`]) and syntax-tree synthesis through an
//! external SMT optimizer ([`smt`]), the latter also driven by user patterns.

pub mod comprank;
pub mod error;
pub mod formula;
pub mod harness;
pub mod sample;
pub mod smt;
pub mod tracegen;
pub mod valuation;

pub use error::Error;
pub use formula::{Formula, Pattern, Prop};
pub use sample::{Sample, Word};
pub use valuation::ValuationParams;
