//! Finite-word LTL formulas and patterns.
//!
//! [`Formula`] is the syntax tree used for evaluation and for every learned
//! result. Learners only ever produce the GF fragment in negation normal form
//! (literals, `&`, `|`, `G`, `F`); `X` and `U` are kept so that user-supplied
//! formulas can be evaluated classically.

mod eval;
mod parse;
mod pattern;

use std::fmt;
use std::sync::Arc;

pub use eval::{consistent, holds, holds_table, EvalError};

pub use parse::{parse_formula, parse_pattern, ParseError, ParseErrorKind};
pub use pattern::{Hole, Pattern, PatternError};

/// An atomic proposition, identified by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prop(Arc<str>);

impl Prop {
    pub fn new(name: &str) -> Self {
        Prop(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True when `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Debug for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Prop {
    fn from(s: &str) -> Self {
        Prop::new(s)
    }
}

/// LTL syntax tree over finite words.
///
/// Children are reference counted so that enumerative search can share
/// subtrees between candidates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Prop),
    NegAtom(Prop),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    G(Arc<Formula>),
    F(Arc<Formula>),
    X(Arc<Formula>),
    U(Arc<Formula>, Arc<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NnfError {
    #[error("negation over {0} cannot be pushed to the literals")]
    NonNnfConvertible(&'static str),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Prop::new(name))
    }

    pub fn neg_atom(name: &str) -> Self {
        Formula::NegAtom(Prop::new(name))
    }

    /// Negation. Applied to a literal or constant it folds into the dual
    /// literal, so `!p` is always represented as `NegAtom(p)`.
    pub fn not(f: Formula) -> Self {
        match f {
            Formula::Atom(p) => Formula::NegAtom(p),
            Formula::NegAtom(p) => Formula::Atom(p),
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            other => Formula::Not(Arc::new(other)),
        }
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Arc::new(l), Arc::new(r))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::G(Arc::new(f))
    }

    pub fn finally(f: Formula) -> Self {
        Formula::F(Arc::new(f))
    }

    pub fn next(f: Formula) -> Self {
        Formula::X(Arc::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Self {
        Formula::U(Arc::new(l), Arc::new(r))
    }

    /// `l -> r`, desugared to `!l | r`.
    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::or(Formula::not(l), r)
    }

    /// `l <-> r`, desugared to `(!l | r) & (l | !r)`.
    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::and(
            Formula::or(Formula::not(l.clone()), r.clone()),
            Formula::or(l, Formula::not(r)),
        )
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => 1,
            Formula::Not(c) | Formula::G(c) | Formula::F(c) | Formula::X(c) => 1 + c.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::U(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Edge depth of the syntax tree. Literals (including negated atoms) are 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => 0,
            Formula::Not(c) | Formula::G(c) | Formula::F(c) | Formula::X(c) => 1 + c.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::U(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// True when the formula only uses literals, `&`, `|`, `G` and `F`.
    pub fn is_nnf_gf(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) | Formula::True | Formula::False => true,
            Formula::And(l, r) | Formula::Or(l, r) => l.is_nnf_gf() && r.is_nnf_gf(),
            Formula::G(c) | Formula::F(c) => c.is_nnf_gf(),
            Formula::Not(_) | Formula::X(_) | Formula::U(..) => false,
        }
    }

    /// Propositions mentioned anywhere in the formula, sorted and deduplicated.
    pub fn props(&self) -> Vec<Prop> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Propositions in order of first occurrence (left to right).
    pub fn props_in_order(&self) -> Vec<Prop> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        let mut seen = std::collections::HashSet::new();
        out.retain(|p| seen.insert(p.clone()));
        out
    }

    fn collect_props(&self, out: &mut Vec<Prop>) {
        match self {
            Formula::Atom(p) | Formula::NegAtom(p) => out.push(p.clone()),
            Formula::True | Formula::False => {}
            Formula::Not(c) | Formula::G(c) | Formula::F(c) | Formula::X(c) => c.collect_props(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::U(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
        }
    }

    /// Pushes every negation down to the atoms.
    ///
    /// Fails when a negation sits above `X` or `U`, which have no dual in the
    /// supported syntax.
    pub fn to_nnf(&self) -> Result<Formula, NnfError> {
        Ok(match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => self.clone(),
            Formula::Not(c) => c.negated_nnf()?,
            Formula::And(l, r) => Formula::and(l.to_nnf()?, r.to_nnf()?),
            Formula::Or(l, r) => Formula::or(l.to_nnf()?, r.to_nnf()?),
            Formula::G(c) => Formula::globally(c.to_nnf()?),
            Formula::F(c) => Formula::finally(c.to_nnf()?),
            Formula::X(c) => Formula::next(c.to_nnf()?),
            Formula::U(l, r) => Formula::until(l.to_nnf()?, r.to_nnf()?),
        })
    }

    /// NNF of `!self`.
    pub fn negated_nnf(&self) -> Result<Formula, NnfError> {
        Ok(match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(p) => Formula::NegAtom(p.clone()),
            Formula::NegAtom(p) => Formula::Atom(p.clone()),
            Formula::Not(c) => c.to_nnf()?,
            Formula::And(l, r) => Formula::or(l.negated_nnf()?, r.negated_nnf()?),
            Formula::Or(l, r) => Formula::and(l.negated_nnf()?, r.negated_nnf()?),
            Formula::G(c) => Formula::finally(c.negated_nnf()?),
            Formula::F(c) => Formula::globally(c.negated_nnf()?),
            Formula::X(_) => return Err(NnfError::NonNnfConvertible("X")),
            Formula::U(..) => return Err(NnfError::NonNnfConvertible("U")),
        })
    }

    /// Normal form used to deduplicate candidates: children of `&` and `|`
    /// are ordered by their printed form and `f & f`, `f | f` collapse to `f`.
    /// No other rewriting is applied, so `G G p` stays distinct from `G p`.
    pub fn canonical(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::NegAtom(_) => self.clone(),
            Formula::Not(c) => Formula::not(c.canonical()),
            Formula::G(c) => Formula::globally(c.canonical()),
            Formula::F(c) => Formula::finally(c.canonical()),
            Formula::X(c) => Formula::next(c.canonical()),
            Formula::U(l, r) => Formula::until(l.canonical(), r.canonical()),
            Formula::And(l, r) => {
                Self::commutative(l.canonical(), r.canonical(), Formula::And)
            }
            Formula::Or(l, r) => Self::commutative(l.canonical(), r.canonical(), Formula::Or),
        }
    }

    /// Builds `op(a, b)` in canonical child order, collapsing `a == b`.
    /// Assumes both children are already canonical.
    pub fn commutative(
        a: Formula,
        b: Formula,
        op: fn(Arc<Formula>, Arc<Formula>) -> Formula,
    ) -> Formula {
        if a == b {
            return a;
        }
        let (sa, sb) = (a.to_string(), b.to_string());
        if sa <= sb {
            op(Arc::new(a), Arc::new(b))
        } else {
            op(Arc::new(b), Arc::new(a))
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) | Formula::U(..) => 2,
            Formula::Not(_) | Formula::G(_) | Formula::F(_) | Formula::X(_) => 3,
            _ => 4,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints in the input grammar; the output re-parses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("!true"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::NegAtom(p) => write!(f, "!{p}"),
            Formula::Not(c) => {
                f.write_str("!")?;
                write_child(f, c, 3)
            }
            Formula::G(c) | Formula::F(c) | Formula::X(c) => {
                let op = match self {
                    Formula::G(_) => "G ",
                    Formula::F(_) => "F ",
                    _ => "X ",
                };
                f.write_str(op)?;
                write_child(f, c, 3)
            }
            Formula::And(l, r) | Formula::U(l, r) | Formula::Or(l, r) => {
                let (op, prec) = match self {
                    Formula::And(..) => (" & ", 2),
                    Formula::U(..) => (" U ", 2),
                    _ => (" | ", 1),
                };
                write_child(f, l, prec)?;
                f.write_str(op)?;
                write_child(f, r, prec + 1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_nodes() {
        assert_eq!(Formula::atom("p").size(), 1);
        let psi = Formula::and(Formula::atom("q"), Formula::atom("r"));
        assert_eq!(psi.size(), 3);
        assert_eq!(Formula::until(Formula::atom("p"), psi).size(), 5);
        let g = Formula::globally(Formula::or(Formula::atom("p"), Formula::atom("q")));
        assert_eq!(g.size(), 4);
    }

    #[test]
    fn depth_is_edge_depth() {
        assert_eq!(Formula::atom("p").depth(), 0);
        assert_eq!(Formula::globally(Formula::finally(Formula::atom("p"))).depth(), 2);
        let resp = Formula::globally(Formula::or(
            Formula::neg_atom("p"),
            Formula::finally(Formula::atom("s")),
        ));
        assert_eq!(resp.depth(), 3);
    }

    #[test]
    fn nnf_dual_pairs() {
        let f = Formula::not(Formula::globally(Formula::atom("p")));
        assert_eq!(f.to_nnf().unwrap(), Formula::finally(Formula::neg_atom("p")));
        let g = Formula::globally(Formula::atom("p"));
        assert_eq!(g.to_nnf().unwrap(), g);
        let h = Formula::not(Formula::and(
            Formula::atom("p"),
            Formula::finally(Formula::atom("q")),
        ));
        assert_eq!(
            h.to_nnf().unwrap(),
            Formula::or(Formula::neg_atom("p"), Formula::globally(Formula::neg_atom("q")))
        );
    }

    #[test]
    fn nnf_rejects_negated_next_and_until() {
        let f = Formula::not(Formula::next(Formula::atom("p")));
        assert_eq!(f.to_nnf(), Err(NnfError::NonNnfConvertible("X")));
        let g = Formula::not(Formula::until(Formula::atom("p"), Formula::atom("q")));
        assert_eq!(g.to_nnf(), Err(NnfError::NonNnfConvertible("U")));
        // X without negation above it is fine
        assert!(Formula::next(Formula::not(Formula::atom("p"))).to_nnf().is_ok());
    }

    #[test]
    fn canonical_orders_and_collapses() {
        let pq = Formula::and(Formula::atom("q"), Formula::atom("p")).canonical();
        assert_eq!(pq, Formula::and(Formula::atom("p"), Formula::atom("q")));
        let pp = Formula::or(Formula::atom("p"), Formula::atom("p")).canonical();
        assert_eq!(pp, Formula::atom("p"));
        let gg = Formula::globally(Formula::globally(Formula::atom("p")));
        assert_eq!(gg.canonical(), gg);
    }

    #[test]
    fn display_parenthesizes_minimally() {
        let f = Formula::globally(Formula::or(
            Formula::neg_atom("p"),
            Formula::finally(Formula::atom("s")),
        ));
        assert_eq!(f.to_string(), "G (!p | F s)");
        let g = Formula::and(
            Formula::atom("a"),
            Formula::and(Formula::atom("b"), Formula::atom("c")),
        );
        assert_eq!(g.to_string(), "a & (b & c)");
        let h = Formula::or(Formula::and(Formula::atom("a"), Formula::atom("b")), Formula::atom("c"));
        assert_eq!(h.to_string(), "a & b | c");
    }

    #[test]
    fn prop_name_grammar() {
        assert!(Prop::is_valid_name("auth_fail"));
        assert!(Prop::is_valid_name("_x9"));
        assert!(!Prop::is_valid_name("9x"));
        assert!(!Prop::is_valid_name("a-b"));
        assert!(!Prop::is_valid_name(""));
    }
}
