//! Classical finite-word satisfaction.

use super::Formula;
use crate::sample::{Sample, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("cannot evaluate over the empty word")]
    EmptyWord,
    #[error("position {pos} outside 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
}

/// Truth value of `f` at every position of `w`; index 0 is position 1.
pub fn holds_table(f: &Formula, w: &Word) -> Vec<bool> {
    let n = w.len();
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(p) => w.letters().iter().map(|l| l.contains(p)).collect(),
        Formula::NegAtom(p) => w.letters().iter().map(|l| !l.contains(p)).collect(),
        Formula::Not(c) => holds_table(c, w).into_iter().map(|b| !b).collect(),
        Formula::And(l, r) => {
            let (a, b) = (holds_table(l, w), holds_table(r, w));
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        Formula::Or(l, r) => {
            let (a, b) = (holds_table(l, w), holds_table(r, w));
            a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
        }
        Formula::G(c) => {
            let mut v = holds_table(c, w);
            for t in (0..n.saturating_sub(1)).rev() {
                v[t] = v[t] && v[t + 1];
            }
            v
        }
        Formula::F(c) => {
            let mut v = holds_table(c, w);
            for t in (0..n.saturating_sub(1)).rev() {
                v[t] = v[t] || v[t + 1];
            }
            v
        }
        Formula::X(c) => {
            let v = holds_table(c, w);
            (0..n).map(|t| t + 1 < n && v[t + 1]).collect()
        }
        Formula::U(l, r) => {
            let (a, b) = (holds_table(l, w), holds_table(r, w));
            let mut u = b.clone();
            for t in (0..n.saturating_sub(1)).rev() {
                u[t] = b[t] || (a[t] && u[t + 1]);
            }
            u
        }
    }
}

/// Whether the suffix of `w` starting at 1-based position `i` satisfies `f`.
pub fn holds(f: &Formula, w: &Word, i: usize) -> Result<bool, EvalError> {
    if w.is_empty() {
        return Err(EvalError::EmptyWord);
    }
    if i == 0 || i > w.len() {
        return Err(EvalError::PositionOutOfRange { pos: i, len: w.len() });
    }
    Ok(holds_table(f, w)[i - 1])
}

/// `f` holds on every positive and fails on every negative.
pub fn consistent(f: &Formula, s: &Sample) -> bool {
    s.positives().iter().all(|w| holds_table(f, w)[0])
        && s.negatives().iter().all(|w| !holds_table(f, w)[0])
}
