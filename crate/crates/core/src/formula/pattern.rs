use std::collections::HashMap;
use std::fmt;

use super::{Formula, NnfError, Prop};

/// A subformula hole `phi(depth)`. Occurrences share `id` when expansion
/// duplicates a hole (for instance through `<->`); `negated` marks an
/// occurrence that stands for the NNF negation of the filled formula.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Hole {
    pub id: usize,
    pub depth: usize,
    pub negated: bool,
}

/// A formula template with proposition placeholders (`Var`) and holes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Pattern {
    True,
    False,
    Atom(Prop),
    NegAtom(Prop),
    Var(Prop),
    NegVar(Prop),
    Hole(Hole),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Implies(Box<Pattern>, Box<Pattern>),
    Iff(Box<Pattern>, Box<Pattern>),
    G(Box<Pattern>),
    F(Box<Pattern>),
    X(Box<Pattern>),
    U(Box<Pattern>, Box<Pattern>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("operator {0} is not supported in synthesis patterns")]
    UnsupportedOperator(&'static str),
    #[error("no mapping for placeholder ?{0}")]
    UnboundPlaceholder(String),
    #[error("no formula for hole {0}")]
    UnfilledHole(usize),
    #[error(transparent)]
    Nnf(#[from] NnfError),
}

type B = Box<Pattern>;

impl Pattern {
    /// Negation folded into leaves where possible.
    pub fn negate_shallow(p: Pattern) -> Pattern {
        match p {
            Pattern::True => Pattern::False,
            Pattern::False => Pattern::True,
            Pattern::Atom(a) => Pattern::NegAtom(a),
            Pattern::NegAtom(a) => Pattern::Atom(a),
            Pattern::Var(a) => Pattern::NegVar(a),
            Pattern::NegVar(a) => Pattern::Var(a),
            Pattern::Hole(h) => Pattern::Hole(Hole { negated: !h.negated, ..h }),
            other => Pattern::Not(Box::new(other)),
        }
    }

    pub fn from_formula(f: &Formula) -> Pattern {
        let b = |x: &Formula| Box::new(Pattern::from_formula(x));
        match f {
            Formula::True => Pattern::True,
            Formula::False => Pattern::False,
            Formula::Atom(p) => Pattern::Atom(p.clone()),
            Formula::NegAtom(p) => Pattern::NegAtom(p.clone()),
            Formula::Not(c) => Pattern::Not(b(c)),
            Formula::And(l, r) => Pattern::And(b(l), b(r)),
            Formula::Or(l, r) => Pattern::Or(b(l), b(r)),
            Formula::G(c) => Pattern::G(b(c)),
            Formula::F(c) => Pattern::F(b(c)),
            Formula::X(c) => Pattern::X(b(c)),
            Formula::U(l, r) => Pattern::U(b(l), b(r)),
        }
    }

    /// Converts a pattern without placeholders or holes.
    pub fn to_formula(&self) -> Option<Formula> {
        Some(match self {
            Pattern::True => Formula::True,
            Pattern::False => Formula::False,
            Pattern::Atom(p) => Formula::Atom(p.clone()),
            Pattern::NegAtom(p) => Formula::NegAtom(p.clone()),
            Pattern::Var(_) | Pattern::NegVar(_) | Pattern::Hole(_) => return None,
            Pattern::Not(c) => Formula::not(c.to_formula()?),
            Pattern::And(l, r) => Formula::and(l.to_formula()?, r.to_formula()?),
            Pattern::Or(l, r) => Formula::or(l.to_formula()?, r.to_formula()?),
            Pattern::Implies(l, r) => Formula::implies(l.to_formula()?, r.to_formula()?),
            Pattern::Iff(l, r) => Formula::iff(l.to_formula()?, r.to_formula()?),
            Pattern::G(c) => Formula::globally(c.to_formula()?),
            Pattern::F(c) => Formula::finally(c.to_formula()?),
            Pattern::X(c) => Formula::next(c.to_formula()?),
            Pattern::U(l, r) => Formula::until(l.to_formula()?, r.to_formula()?),
        })
    }

    /// Removes `->`/`<->` and pushes negation to the leaves. The result only
    /// contains literals, placeholders (possibly negated), holes (possibly
    /// negated), `&`, `|`, `G` and `F`.
    pub fn expand(&self) -> Result<Pattern, PatternError> {
        self.nnf(false)
    }

    fn nnf(&self, neg: bool) -> Result<Pattern, PatternError> {
        let bx = |p: Pattern| Box::new(p);
        Ok(match self {
            Pattern::True | Pattern::False | Pattern::Atom(_) | Pattern::NegAtom(_)
            | Pattern::Var(_) | Pattern::NegVar(_) | Pattern::Hole(_) => {
                if neg {
                    Pattern::negate_shallow(self.clone())
                } else {
                    self.clone()
                }
            }
            Pattern::Not(c) => c.nnf(!neg)?,
            Pattern::And(l, r) => {
                let (l, r) = (bx(l.nnf(neg)?), bx(r.nnf(neg)?));
                if neg { Pattern::Or(l, r) } else { Pattern::And(l, r) }
            }
            Pattern::Or(l, r) => {
                let (l, r) = (bx(l.nnf(neg)?), bx(r.nnf(neg)?));
                if neg { Pattern::And(l, r) } else { Pattern::Or(l, r) }
            }
            Pattern::Implies(l, r) => {
                Pattern::Or(Box::new(Pattern::Not(l.clone())), r.clone()).nnf(neg)?
            }
            Pattern::Iff(l, r) => Pattern::And(
                Box::new(Pattern::Implies(l.clone(), r.clone())),
                Box::new(Pattern::Implies(r.clone(), l.clone())),
            )
            .nnf(neg)?,
            Pattern::G(c) => {
                let c = bx(c.nnf(neg)?);
                if neg { Pattern::F(c) } else { Pattern::G(c) }
            }
            Pattern::F(c) => {
                let c = bx(c.nnf(neg)?);
                if neg { Pattern::G(c) } else { Pattern::F(c) }
            }
            Pattern::X(_) => return Err(PatternError::UnsupportedOperator("X")),
            Pattern::U(..) => return Err(PatternError::UnsupportedOperator("U")),
        })
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Pattern)) {
        visit(self);
        match self {
            Pattern::Not(c) | Pattern::G(c) | Pattern::F(c) | Pattern::X(c) => c.walk(visit),
            Pattern::And(l, r) | Pattern::Or(l, r) | Pattern::Implies(l, r)
            | Pattern::Iff(l, r) | Pattern::U(l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
            _ => {}
        }
    }

    /// Placeholder names in order of first occurrence.
    pub fn placeholders(&self) -> Vec<Prop> {
        let mut out: Vec<Prop> = Vec::new();
        self.walk(&mut |p| {
            if let Pattern::Var(x) | Pattern::NegVar(x) = p {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        });
        out
    }

    /// Concrete propositions written in the pattern, in order of first occurrence.
    pub fn fixed_props(&self) -> Vec<Prop> {
        let mut out: Vec<Prop> = Vec::new();
        self.walk(&mut |p| {
            if let Pattern::Atom(x) | Pattern::NegAtom(x) = p {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        });
        out
    }

    /// Distinct holes as `(id, depth)`, sorted by id.
    pub fn holes(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        self.walk(&mut |p| {
            if let Pattern::Hole(h) = p {
                if !out.iter().any(|(id, _)| *id == h.id) {
                    out.push((h.id, h.depth));
                }
            }
        });
        out.sort();
        out
    }

    /// Replaces placeholders and holes, keeping the pattern's own sugar.
    pub fn substitute(
        &self,
        mapping: &HashMap<Prop, Prop>,
        fills: &HashMap<usize, Formula>,
    ) -> Result<Pattern, PatternError> {
        let sub = |c: &B| -> Result<B, PatternError> { Ok(Box::new(c.substitute(mapping, fills)?)) };
        let var = |x: &Prop| {
            mapping.get(x).cloned().ok_or_else(|| PatternError::UnboundPlaceholder(x.to_string()))
        };
        Ok(match self {
            Pattern::Var(x) => Pattern::Atom(var(x)?),
            Pattern::NegVar(x) => Pattern::NegAtom(var(x)?),
            Pattern::Hole(h) => {
                let f = fills.get(&h.id).ok_or(PatternError::UnfilledHole(h.id))?;
                if h.negated {
                    Pattern::from_formula(&f.negated_nnf()?)
                } else {
                    Pattern::from_formula(f)
                }
            }
            Pattern::True | Pattern::False | Pattern::Atom(_) | Pattern::NegAtom(_) => self.clone(),
            Pattern::Not(c) => Pattern::Not(sub(c)?),
            Pattern::G(c) => Pattern::G(sub(c)?),
            Pattern::F(c) => Pattern::F(sub(c)?),
            Pattern::X(c) => Pattern::X(sub(c)?),
            Pattern::And(l, r) => Pattern::And(sub(l)?, sub(r)?),
            Pattern::Or(l, r) => Pattern::Or(sub(l)?, sub(r)?),
            Pattern::Implies(l, r) => Pattern::Implies(sub(l)?, sub(r)?),
            Pattern::Iff(l, r) => Pattern::Iff(sub(l)?, sub(r)?),
            Pattern::U(l, r) => Pattern::U(sub(l)?, sub(r)?),
        })
    }

    /// Fully instantiated NNF formula.
    pub fn instantiate(
        &self,
        mapping: &HashMap<Prop, Prop>,
        fills: &HashMap<usize, Formula>,
    ) -> Result<Formula, PatternError> {
        let p = self.substitute(mapping, fills)?;
        let f = p.to_formula().expect("substitution leaves no placeholders");
        Ok(f.to_nnf()?)
    }

    fn precedence(&self) -> u8 {
        match self {
            Pattern::Iff(..) => 0,
            Pattern::Implies(..) => 1,
            Pattern::Or(..) => 2,
            Pattern::And(..) | Pattern::U(..) => 3,
            Pattern::Not(_) | Pattern::G(_) | Pattern::F(_) | Pattern::X(_) => 4,
            _ => 5,
        }
    }
}

fn child(f: &mut fmt::Formatter<'_>, c: &Pattern, min: u8) -> fmt::Result {
    if c.precedence() < min {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::True => f.write_str("true"),
            Pattern::False => f.write_str("!true"),
            Pattern::Atom(p) => write!(f, "{p}"),
            Pattern::NegAtom(p) => write!(f, "!{p}"),
            Pattern::Var(p) => write!(f, "?{p}"),
            Pattern::NegVar(p) => write!(f, "!?{p}"),
            Pattern::Hole(h) => {
                if h.negated {
                    f.write_str("!")?;
                }
                write!(f, "phi({})", h.depth)
            }
            Pattern::Not(c) | Pattern::G(c) | Pattern::F(c) | Pattern::X(c) => {
                f.write_str(match self {
                    Pattern::Not(_) => "!",
                    Pattern::G(_) => "G ",
                    Pattern::F(_) => "F ",
                    _ => "X ",
                })?;
                child(f, c, 4)
            }
            Pattern::Iff(l, r) => {
                child(f, l, 0)?;
                f.write_str(" <-> ")?;
                child(f, r, 1)
            }
            Pattern::Implies(l, r) => {
                child(f, l, 2)?;
                f.write_str(" -> ")?;
                child(f, r, 1)
            }
            Pattern::Or(l, r) => {
                child(f, l, 2)?;
                f.write_str(" | ")?;
                child(f, r, 3)
            }
            Pattern::And(l, r) | Pattern::U(l, r) => {
                child(f, l, 3)?;
                f.write_str(if matches!(self, Pattern::And(..)) { " & " } else { " U " })?;
                child(f, r, 4)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_pattern;
    use super::*;

    #[test]
    fn iff_duplicates_placeholder_with_both_polarities() {
        let p = parse_pattern("G(a <-> ?x)").unwrap().expand().unwrap();
        assert_eq!(p.to_string(), "G ((!a | ?x) & (!?x | a))");
        assert_eq!(p.placeholders(), vec![Prop::new("x")]);
    }

    #[test]
    fn iff_over_hole_produces_dual_occurrence() {
        let p = parse_pattern("G(a <-> phi(1))").unwrap().expand().unwrap();
        let mut occ = Vec::new();
        p.walk(&mut |n| {
            if let Pattern::Hole(h) = n {
                occ.push(*h);
            }
        });
        assert_eq!(occ.len(), 2);
        assert_eq!(occ[0].id, occ[1].id);
        assert_ne!(occ[0].negated, occ[1].negated);
        assert_eq!(p.holes(), vec![(0, 1)]);
    }

    #[test]
    fn instantiate_negated_hole() {
        let p = parse_pattern("G(a <-> phi(1))").unwrap();
        let fills = HashMap::from([(0, Formula::globally(Formula::atom("b")))]);
        let f = p.instantiate(&HashMap::new(), &fills).unwrap();
        let direct = crate::formula::parse_formula("G(a <-> G b)").unwrap().to_nnf().unwrap();
        assert_eq!(f, direct);
        assert_eq!(p.substitute(&HashMap::new(), &fills).unwrap().to_string(), "G (a <-> G b)");
    }

    #[test]
    fn unbound_placeholder_is_an_error() {
        let p = parse_pattern("G ?x").unwrap();
        assert_eq!(
            p.instantiate(&HashMap::new(), &HashMap::new()),
            Err(PatternError::UnboundPlaceholder("x".into()))
        );
    }

    #[test]
    fn until_rejected_at_expansion() {
        let p = parse_pattern("?x U ?y").unwrap();
        assert_eq!(p.expand(), Err(PatternError::UnsupportedOperator("U")));
    }

    #[test]
    fn display_round_trips() {
        for s in ["G (?x -> F ?y)", "G (phi(2) | ?x)", "a <-> b <-> c", "a -> b -> c", "!(a & b) | G !?x"] {
            let p = parse_pattern(s).unwrap();
            assert_eq!(parse_pattern(&p.to_string()).unwrap(), p, "{s}");
        }
    }
}
