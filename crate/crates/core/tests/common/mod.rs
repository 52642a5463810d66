//! Shared helpers for the integration tests: independent reference
//! implementations of satisfaction and valuation, formula enumerators and
//! random instance builders.
#![allow(dead_code)]

use std::path::PathBuf;

use ltlqm::sample::Letter;
use ltlqm::smt::SolverConfig;
use ltlqm::valuation::{ConjScheme, DisjScheme};
use ltlqm::{Formula, Prop, ValuationParams, Word};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// The configured solver, if one can be found.
pub fn solver() -> Option<SolverConfig> {
    SolverConfig::resolve(None).ok().filter(|c| c.path.is_file())
}

pub fn props(names: &[&str]) -> Vec<Prop> {
    names.iter().map(|n| Prop::new(n)).collect()
}

/// All four conjunction/disjunction scheme combinations.
pub fn schemes(base: ValuationParams) -> Vec<ValuationParams> {
    let mut out = Vec::new();
    for c in [ConjScheme::Product, ConjScheme::Min] {
        for d in [DisjScheme::Mean, DisjScheme::Max] {
            out.push(base.clone().with_schemes(c, d));
        }
    }
    out
}

/// Satisfaction straight from the finite-word semantics, 1-based `t`.
pub fn naive_holds(f: &Formula, w: &Word, t: usize) -> bool {
    let n = w.len();
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p) => w.letter(t).contains(p),
        Formula::NegAtom(p) => !w.letter(t).contains(p),
        Formula::Not(c) => !naive_holds(c, w, t),
        Formula::And(a, b) => naive_holds(a, w, t) && naive_holds(b, w, t),
        Formula::Or(a, b) => naive_holds(a, w, t) || naive_holds(b, w, t),
        Formula::G(c) => (t..=n).all(|k| naive_holds(c, w, k)),
        Formula::F(c) => (t..=n).any(|k| naive_holds(c, w, k)),
        Formula::X(c) => t < n && naive_holds(c, w, t + 1),
        Formula::U(a, b) => (t..=n).any(|k| naive_holds(b, w, k) && (t..k).all(|j| naive_holds(a, w, j))),
    }
}

/// Valuation as closed-form sums, without the backward recursion.
pub fn naive_value(f: &Formula, w: &Word, t: usize, params: &ValuationParams) -> f64 {
    let n = w.len();
    let d = params.delta_f64();
    let r = params.r_f64();
    match f {
        Formula::Atom(p) | Formula::NegAtom(p) => {
            if naive_holds(f, w, t) {
                params.priority_f64(p)
            } else {
                0.0
            }
        }
        Formula::And(a, b) => {
            let (x, y) = (naive_value(a, w, t, params), naive_value(b, w, t, params));
            match params.conj {
                ConjScheme::Product => d * x * y,
                ConjScheme::Min => d * x.min(y),
            }
        }
        Formula::Or(a, b) => {
            let (x, y) = (naive_value(a, w, t, params), naive_value(b, w, t, params));
            match params.disj {
                DisjScheme::Mean => d * (x + y) / 2.0,
                DisjScheme::Max => d * x.max(y),
            }
        }
        Formula::G(c) => {
            if !naive_holds(f, w, t) {
                return 0.0;
            }
            d * (t..=n).map(|k| r.powi((k - t) as i32) * naive_value(c, w, k, params)).sum::<f64>()
        }
        Formula::F(c) => match (t..=n).find(|&k| naive_holds(c, w, k)) {
            Some(k) => d * r.powi((k - t) as i32) * naive_value(c, w, k, params),
            None => 0.0,
        },
        other => panic!("no valuation for {other}"),
    }
}

/// Every syntax tree a solver skeleton of edge-depth `d` can express:
/// negation is a node of its own above an atom.
pub fn trees(props: &[Prop], d: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = props.iter().map(|p| Formula::Atom(p.clone())).collect();
    if d == 0 {
        return out;
    }
    let sub = trees(props, d - 1);
    out.extend(props.iter().map(|p| Formula::NegAtom(p.clone())));
    for c in &sub {
        out.push(Formula::globally(c.clone()));
        out.push(Formula::finally(c.clone()));
    }
    for a in &sub {
        for b in &sub {
            out.push(Formula::and(a.clone(), b.clone()));
            out.push(Formula::or(a.clone(), b.clone()));
        }
    }
    out
}

/// Random tree from the same space as [`trees`].
pub fn random_tree<R: Rng>(rng: &mut R, props: &[Prop], d: usize) -> Formula {
    let p = props[rng.gen_range(0..props.len())].clone();
    if d == 0 {
        return Formula::Atom(p);
    }
    match rng.gen_range(0..7) {
        0 => Formula::Atom(p),
        1 => Formula::NegAtom(p),
        2 => Formula::globally(random_tree(rng, props, d - 1)),
        3 => Formula::finally(random_tree(rng, props, d - 1)),
        4 | 5 => Formula::and(random_tree(rng, props, d - 1), random_tree(rng, props, d - 1)),
        _ => Formula::or(random_tree(rng, props, d - 1), random_tree(rng, props, d - 1)),
    }
}

/// Random NNF GF formula of depth at most `d`, literals at depth 0.
pub fn random_formula<R: Rng>(rng: &mut R, props: &[Prop], d: usize) -> Formula {
    let p = props[rng.gen_range(0..props.len())].clone();
    let leaf = if rng.gen_bool(0.5) { Formula::Atom(p) } else { Formula::NegAtom(p) };
    if d == 0 || rng.gen_bool(0.2) {
        return leaf;
    }
    match rng.gen_range(0..4) {
        0 => Formula::globally(random_formula(rng, props, d - 1)),
        1 => Formula::finally(random_formula(rng, props, d - 1)),
        2 => Formula::and(random_formula(rng, props, d - 1), random_formula(rng, props, d - 1)),
        _ => Formula::or(random_formula(rng, props, d - 1), random_formula(rng, props, d - 1)),
    }
}

/// Random word over `props`, each proposition present with probability 1/2.
pub fn random_word<R: Rng>(rng: &mut R, props: &[Prop], len: usize) -> Word {
    let letters = (0..len)
        .map(|_| Letter::new(props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()))
        .collect();
    Word::new(letters).unwrap()
}

/// min over `words` of the valuation of `f`.
pub fn min_value(f: &Formula, words: &[Word], params: &ValuationParams) -> f64 {
    words.iter().map(|w| naive_value(f, w, 1, params)).fold(f64::INFINITY, f64::min)
}
