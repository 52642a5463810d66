//! Quantitative valuation of GF formulas over finite words.
//!
//! Every score table is computed together with the classical truth table of
//! the same subformula. Positivity tests (the `> 0` conditions of the `G` and
//! `F` clauses) read the truth table, which coincides with exact positivity
//! of the score but stays correct when a long discount underflows `f64`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::formula::{Formula, Prop};
use crate::sample::{Sample, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuationError {
    #[error("operator {0} is outside the GF fragment")]
    NonGfFormula(&'static str),
    #[error("position {pos} outside 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("invalid valuation parameter: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConjScheme {
    #[default]
    Product,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DisjScheme {
    #[default]
    Mean,
    Max,
}

impl FromStr for ConjScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "product" => Ok(ConjScheme::Product),
            "min" => Ok(ConjScheme::Min),
            _ => Err(format!("unknown conjunction scheme `{s}` (product|min)")),
        }
    }
}

impl FromStr for DisjScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mean" => Ok(DisjScheme::Mean),
            "max" => Ok(DisjScheme::Max),
            _ => Err(format!("unknown disjunction scheme `{s}` (mean|max)")),
        }
    }
}

impl fmt::Display for ConjScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjScheme::Product => "product",
            ConjScheme::Min => "min",
        })
    }
}

impl fmt::Display for DisjScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisjScheme::Mean => "mean",
            DisjScheme::Max => "max",
        })
    }
}

/// Parses `0.367879`, `4/5` or `1` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
        let d: i64 = d.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
        if d == 0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational64::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 15
    {
        return Err(format!("`{s}` is not a decimal or a/b rational"));
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().map_err(|_| format!("`{s}` is out of range"))?;
    let den = 10i64.pow(frac.len() as u32);
    let r = Rational64::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Valuation parameters. Kept as exact rationals so the solver encoding can
/// use the same constants as the floating-point evaluator.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationParams {
    r: Rational64,
    delta: Rational64,
    pub conj: ConjScheme,
    pub disj: DisjScheme,
    priority: BTreeMap<Prop, Rational64>,
    r_f: f64,
    delta_f: f64,
}

impl Default for ValuationParams {
    /// Learning defaults: r ≈ 1/e, δ = 0.8, product/mean, unit priorities.
    fn default() -> Self {
        Self::new(Rational64::new(367_879, 1_000_000), Rational64::new(4, 5)).unwrap()
    }
}

impl ValuationParams {
    pub fn new(r: Rational64, delta: Rational64) -> Result<Self, ValuationError> {
        let in_unit = |q: &Rational64| *q > Rational64::zero() && *q < Rational64::one();
        if !in_unit(&r) {
            return Err(ValuationError::InvalidParams(format!("r = {r} must lie in (0,1)")));
        }
        if !in_unit(&delta) {
            return Err(ValuationError::InvalidParams(format!("delta = {delta} must lie in (0,1)")));
        }
        Ok(ValuationParams {
            r,
            delta,
            conj: ConjScheme::Product,
            disj: DisjScheme::Mean,
            priority: BTreeMap::new(),
            r_f: r.to_f64().unwrap(),
            delta_f: delta.to_f64().unwrap(),
        })
    }

    /// δ = 0.9, used by the worked FTP example.
    pub fn fixture() -> Self {
        Self::new(Rational64::new(367_879, 1_000_000), Rational64::new(9, 10)).unwrap()
    }

    pub fn with_schemes(mut self, conj: ConjScheme, disj: DisjScheme) -> Self {
        self.conj = conj;
        self.disj = disj;
        self
    }

    pub fn with_priority(mut self, p: Prop, weight: Rational64) -> Result<Self, ValuationError> {
        if weight <= Rational64::zero() {
            return Err(ValuationError::InvalidParams(format!("priority of {p} must be positive")));
        }
        self.priority.insert(p, weight);
        Ok(self)
    }

    pub fn r(&self) -> Rational64 {
        self.r
    }

    pub fn delta(&self) -> Rational64 {
        self.delta
    }

    pub fn r_f64(&self) -> f64 {
        self.r_f
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta_f
    }

    /// π(p); 1 unless overridden.
    pub fn priority(&self, p: &Prop) -> Rational64 {
        self.priority.get(p).copied().unwrap_or_else(Rational64::one)
    }

    pub fn priority_f64(&self, p: &Prop) -> f64 {
        self.priority(p).to_f64().unwrap()
    }

    pub fn priorities(&self) -> &BTreeMap<Prop, Rational64> {
        &self.priority
    }
}

/// Scores and truth values of one formula at every position of one word.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub values: Vec<f64>,
    pub holds: Vec<bool>,
}

impl Table {
    pub fn constant(n: usize, value: f64) -> Self {
        Table { values: vec![value; n], holds: vec![value > 0.0; n] }
    }

    pub fn literal(p: &Prop, negated: bool, w: &Word, params: &ValuationParams) -> Self {
        let pi = params.priority_f64(p);
        let holds: Vec<bool> = w.letters().iter().map(|l| l.contains(p) != negated).collect();
        let values = holds.iter().map(|&h| if h { pi } else { 0.0 }).collect();
        Table { values, holds }
    }

    pub fn and(a: &Table, b: &Table, params: &ValuationParams) -> Self {
        let d = params.delta_f;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| match params.conj {
                ConjScheme::Product => d * x * y,
                ConjScheme::Min => d * x.min(*y),
            })
            .collect();
        let holds = a.holds.iter().zip(&b.holds).map(|(x, y)| *x && *y).collect();
        Table { values, holds }
    }

    pub fn or(a: &Table, b: &Table, params: &ValuationParams) -> Self {
        let d = params.delta_f;
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| match params.disj {
                DisjScheme::Mean => d * (x + y) / 2.0,
                DisjScheme::Max => d * x.max(*y),
            })
            .collect();
        let holds = a.holds.iter().zip(&b.holds).map(|(x, y)| *x || *y).collect();
        Table { values, holds }
    }

    /// `G`: discounted sum over the suffix when the child holds everywhere on it.
    pub fn globally(c: &Table, params: &ValuationParams) -> Self {
        let n = c.values.len();
        let (d, r) = (params.delta_f, params.r_f);
        let mut values = vec![0.0; n];
        let mut holds = vec![false; n];
        for t in (0..n).rev() {
            let rest_ok = t + 1 == n || holds[t + 1];
            if c.holds[t] && rest_ok {
                holds[t] = true;
                let tail = if t + 1 < n { values[t + 1] } else { 0.0 };
                values[t] = d * c.values[t] + r * tail;
            }
        }
        Table { values, holds }
    }

    /// `F`: discounted value at the first position where the child holds.
    pub fn finally(c: &Table, params: &ValuationParams) -> Self {
        let n = c.values.len();
        let (d, r) = (params.delta_f, params.r_f);
        let mut values = vec![0.0; n];
        let mut holds = vec![false; n];
        for t in (0..n).rev() {
            if c.holds[t] {
                holds[t] = true;
                values[t] = d * c.values[t];
            } else if t + 1 < n {
                holds[t] = holds[t + 1];
                values[t] = r * values[t + 1];
            }
        }
        Table { values, holds }
    }
}

/// Tables for `f` over `w`, bottom-up in O(|f|·|w|).
pub fn evaluate(f: &Formula, w: &Word, params: &ValuationParams) -> Result<Table, ValuationError> {
    let n = w.len();
    Ok(match f {
        Formula::True => Table::constant(n, 1.0),
        Formula::False => Table::constant(n, 0.0),
        Formula::Atom(p) => Table::literal(p, false, w, params),
        Formula::NegAtom(p) => Table::literal(p, true, w, params),
        Formula::And(l, r) => Table::and(&evaluate(l, w, params)?, &evaluate(r, w, params)?, params),
        Formula::Or(l, r) => Table::or(&evaluate(l, w, params)?, &evaluate(r, w, params)?, params),
        Formula::G(c) => Table::globally(&evaluate(c, w, params)?, params),
        Formula::F(c) => Table::finally(&evaluate(c, w, params)?, params),
        Formula::Not(_) => return Err(ValuationError::NonGfFormula("! above a non-literal")),
        Formula::X(_) => return Err(ValuationError::NonGfFormula("X")),
        Formula::U(..) => return Err(ValuationError::NonGfFormula("U")),
    })
}

/// V(f, w[t:]) for 1-based `t`.
pub fn value_at(f: &Formula, w: &Word, t: usize, params: &ValuationParams) -> Result<f64, ValuationError> {
    if t == 0 || t > w.len() {
        return Err(ValuationError::PositionOutOfRange { pos: t, len: w.len() });
    }
    Ok(evaluate(f, w, params)?.values[t - 1])
}

pub fn value(f: &Formula, w: &Word, params: &ValuationParams) -> Result<f64, ValuationError> {
    value_at(f, w, 1, params)
}

/// Sum of values over the positive words; negatives do not contribute.
pub fn value_sample(f: &Formula, s: &Sample, params: &ValuationParams) -> Result<f64, ValuationError> {
    s.positives().iter().map(|w| value(f, w, params)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn w(letters: &[&[&str]]) -> Word {
        Word::from_names(letters).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap().to_nnf().unwrap()
    }

    const R: f64 = 0.367879;

    #[test]
    fn g_sum_by_hand() {
        let p = ValuationParams::fixture();
        let aaaa = w(&[&["a"], &["a"], &["a"], &["a"]]);
        let expected = 0.9 * (1.0 + R + R * R + R * R * R);
        assert!((value(&f("G a"), &aaaa, &p).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.3977).abs() < 1e-4);
    }

    #[test]
    fn g_sample_sum() {
        let p = ValuationParams::fixture();
        let s = Sample::new(vec![w(&[&["p"], &["p"]]), w(&[&["p"], &["p"], &["p"], &["p"]])], vec![]).unwrap();
        let v = value_sample(&f("G p"), &s, &p).unwrap();
        assert!((v - 2.6288).abs() < 1e-4, "{v}");
        let dup = Sample::new(vec![w(&[&["p"]]), w(&[&["p"]])], vec![]).unwrap();
        assert!((value_sample(&f("p"), &dup, &p).unwrap() - 2.0).abs() < 1e-12);
        let empty = Sample::new(vec![], vec![w(&[&["p"]])]).unwrap();
        assert_eq!(value_sample(&f("p"), &empty, &p).unwrap(), 0.0);
    }

    #[test]
    fn f_decays_with_distance() {
        let p = ValuationParams::fixture();
        let word = w(&[&[], &[], &[], &["d"]]);
        let t = evaluate(&f("F d"), &word, &p).unwrap();
        let want = [0.9 * R * R * R, 0.9 * R * R, 0.9 * R, 0.9];
        for (got, want) in t.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn f_nesting_penalty() {
        let p = ValuationParams::default();
        let word = w(&[&["q"], &["p"], &[]]);
        let fp = value(&f("F p"), &word, &p).unwrap();
        let ffp = value(&f("F F p"), &word, &p).unwrap();
        assert!((ffp - 0.8 * fp).abs() < 1e-12);
        assert!(ffp < fp);
    }

    #[test]
    fn schemes_by_construction() {
        let word = w(&[&["p"], &["p", "q"]]);
        let base = ValuationParams::fixture();
        let gp = value(&f("G p"), &word, &base).unwrap();
        let fq = value(&f("F q"), &word, &base).unwrap();
        let min = base.clone().with_schemes(ConjScheme::Min, DisjScheme::Max);
        assert!((value(&f("G p & F q"), &word, &min).unwrap() - 0.9 * gp.min(fq)).abs() < 1e-12);
        assert!((value(&f("G p | F q"), &word, &min).unwrap() - 0.9 * gp.max(fq)).abs() < 1e-12);
        assert!((value(&f("G p & F q"), &word, &base).unwrap() - 0.9 * gp * fq).abs() < 1e-12);
        assert!((value(&f("G p | F q"), &word, &base).unwrap() - 0.9 * (gp + fq) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn priority_scales_literals() {
        let p = ValuationParams::default().with_priority(Prop::new("a"), Rational64::new(10, 1)).unwrap();
        let word = w(&[&["a"]]);
        assert_eq!(value(&f("a"), &word, &p).unwrap(), 10.0);
        assert_eq!(value(&f("!b"), &word, &p).unwrap(), 1.0);
        assert_eq!(value(&f("!a"), &word, &p).unwrap(), 0.0);
        assert_eq!(value(&f("!a"), &w(&[&[]]), &p).unwrap(), 10.0);
    }

    #[test]
    fn rejects_x_and_u() {
        let word = w(&[&["p"]]);
        let p = ValuationParams::default();
        assert_eq!(value(&f("X p"), &word, &p), Err(ValuationError::NonGfFormula("X")));
        assert_eq!(value(&f("p U q"), &word, &p), Err(ValuationError::NonGfFormula("U")));
        assert!(matches!(value_at(&f("p"), &word, 2, &p), Err(ValuationError::PositionOutOfRange { .. })));
    }

    #[test]
    fn long_words_keep_positivity() {
        // r^t underflows to 0 around t = 740; truth must not depend on it
        let mut letters: Vec<&[&str]> = vec![&[]; 1500];
        letters.push(&["p"]);
        let word = w(&letters);
        let p = ValuationParams::default();
        let t = evaluate(&f("F p"), &word, &p).unwrap();
        assert!(t.holds[0]);
        let g = evaluate(&f("G F p"), &word, &p).unwrap();
        assert!(g.holds[0]);
    }

    #[test]
    fn params_validation() {
        assert!(ValuationParams::new(Rational64::new(1, 1), Rational64::new(1, 2)).is_err());
        assert!(ValuationParams::new(Rational64::new(1, 2), Rational64::new(0, 1)).is_err());
        assert!(ValuationParams::default().with_priority(Prop::new("a"), Rational64::new(0, 1)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.367879").unwrap(), Rational64::new(367_879, 1_000_000));
        assert_eq!(parse_rational("4/5").unwrap(), Rational64::new(4, 5));
        assert_eq!(parse_rational("10").unwrap(), Rational64::new(10, 1));
        assert_eq!(parse_rational(".5").unwrap(), Rational64::new(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }
}
