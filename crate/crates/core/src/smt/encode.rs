//! SMT-LIB2 encoding of label choice and score propagation.
//!
//! Variables:
//! - `x_<node>_<label>`: node `node` carries `label` (`G`, `F`, `AND`, `OR`,
//!   `NOT`, `NOP` or `p_<prop>`);
//! - `m_<placeholder>_p_<prop>`: the placeholder is mapped to `prop`;
//! - `h_<trace>_<node>_<t>`: node `node` holds on trace `trace` (`P1`,
//!   `N2`, ...) at 1-based position `t`;
//! - `y_<trace>_<node>_<t>`: its score there (not declared for negative
//!   traces, which only need to fail);
//! - `m`: the objective, bounded by every positive root score.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use crate::formula::Prop;
use crate::sample::{Sample, Word};
use crate::valuation::{ConjScheme, DisjScheme, ValuationParams};

use super::skeleton::{Fixed, Label, Labeling, NodeKind, SkNode, Skeleton};
use super::SynthError;

pub const DEFAULT_MAX_TRACE_LEN: usize = 200;

/// How `G` and `F` scores are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EncodingStyle {
    /// One equation per position linking it to the next position (linear size).
    #[default]
    Recursive,
    /// The explicit discounted sum for `G` and a disjunction over witness
    /// positions for `F` (quadratic size).
    Unrolled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOptions {
    pub style: EncodingStyle,
    /// Forbid hole nodes from using propositions the pattern already binds
    /// (fixed atoms and placeholder targets). Without this, holes can
    /// reproduce the bound proposition and turn the pattern into a tautology.
    pub restrict_hole_props: bool,
    pub max_trace_len: usize,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            style: EncodingStyle::Recursive,
            restrict_hole_props: true,
            max_trace_len: DEFAULT_MAX_TRACE_LEN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
    /// Scores only, no satisfaction requirement.
    Unconstrained,
}

/// A complete solver input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintScript {
    pub text: String,
    /// Root score variables of the positive traces.
    pub positive_roots: Vec<String>,
}

pub fn xvar(node: usize, label: &Label) -> String {
    format!("x_{node}_{}", label.tag())
}

pub fn mvar(placeholder: &Prop, target: &Prop) -> String {
    format!("m_{placeholder}_p_{target}")
}

pub fn yvar(trace: &str, node: usize, t: usize) -> String {
    format!("y_{trace}_{node}_{t}")
}

pub fn hvar(trace: &str, node: usize, t: usize) -> String {
    format!("h_{trace}_{node}_{t}")
}

fn big(q: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// Exact real literal: `3.0` or `(/ 1.0 3.0)`.
pub fn real(q: &BigRational) -> String {
    let neg = q < &BigRational::zero();
    let a = if neg { -q.clone() } else { q.clone() };
    let body = if a.denom().is_one() {
        format!("{}.0", a.numer())
    } else {
        format!("(/ {}.0 {}.0)", a.numer(), a.denom())
    };
    if neg { format!("(- {body})") } else { body }
}

fn exactly_one(vars: &[String], out: &mut Vec<String>) {
    match vars.len() {
        0 => out.push("false".into()),
        1 => out.push(vars[0].clone()),
        _ => {
            out.push(format!("(or {})", vars.join(" ")));
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    out.push(format!("(not (and {} {}))", vars[i], vars[j]));
                }
            }
        }
    }
}

/// Largest number of label combinations folded into constants per label.
pub const FOLD_BUDGET: usize = 64;

/// Guard conjuncts and exact score per position.
type Cases = Vec<(Vec<String>, Vec<BigRational>)>;

/// Score vectors a node takes under each label combination of its subtree.
#[derive(Default)]
struct Folded {
    cases: Cases,
    /// Label guards (`true` for a fixed operator) whose subtree is too
    /// large to fold; these get positional equations.
    rest: Vec<String>,
}

fn guarded(g: &[String], e: String) -> String {
    match g.len() {
        0 => e,
        1 => format!("(=> {} {e})", g[0]),
        _ => format!("(=> (and {}) {e})", g.join(" ")),
    }
}

fn fixed_sem(op: &Fixed) -> Sem {
    match op {
        Fixed::And => Sem::And,
        Fixed::Or => Sem::Or,
        Fixed::G => Sem::G,
        Fixed::F => Sem::F,
        _ => unreachable!("leaves always fold"),
    }
}

/// Operator a node evaluates once its label is known.
enum Sem {
    And,
    Or,
    G,
    F,
}

struct Consts {
    delta: BigRational,
    half_delta: BigRational,
    r: BigRational,
    conj: ConjScheme,
    disj: DisjScheme,
}

pub struct Encoder<'a> {
    sk: &'a Skeleton,
    params: &'a ValuationParams,
    opts: EncodeOptions,
    c: Consts,
    decls: Vec<String>,
    asserts: Vec<String>,
    positive_roots: Vec<String>,
    bound_props: Vec<Prop>,
}

impl<'a> Encoder<'a> {
    pub fn new(sk: &'a Skeleton, params: &'a ValuationParams, opts: EncodeOptions) -> Self {
        let delta = big(params.delta());
        let c = Consts {
            half_delta: &delta / BigRational::from_integer(BigInt::from(2)),
            delta,
            r: big(params.r()),
            conj: params.conj,
            disj: params.disj,
        };
        let bound_props = sk.pattern.as_ref().map(|p| p.fixed_props()).unwrap_or_default();
        Encoder { sk, params, opts, c, decls: Vec::new(), asserts: Vec::new(), positive_roots: Vec::new(), bound_props }
    }

    fn assert(&mut self, body: String) {
        self.asserts.push(body);
    }

    /// Label and mapping constraints.
    pub fn structure(&mut self) {
        let sk = self.sk;
        for x in &sk.placeholders {
            let vars: Vec<String> = sk.alphabet.iter().map(|p| mvar(x, p)).collect();
            for v in &vars {
                self.decls.push(format!("(declare-const {v} Bool)"));
            }
            let mut out = Vec::new();
            exactly_one(&vars, &mut out);
            self.asserts.extend(out);
        }
        for n in sk.sources() {
            let f = n.free().unwrap();
            let vars: Vec<String> = f.domain.iter().map(|l| xvar(n.id, l)).collect();
            for v in &vars {
                self.decls.push(format!("(declare-const {v} Bool)"));
            }
            let mut out = Vec::new();
            exactly_one(&vars, &mut out);
            self.asserts.extend(out);

            if f.domain.contains(&Label::Nop) {
                let parent = sk.node(n.parent.expect("NOP only below a free parent"));
                let ps = parent.free().expect("free parent").label_src;
                let pd = &sk.node(ps).free().unwrap().domain;
                let activating: &[Label] = if parent.left == Some(n.id) {
                    &[Label::Not, Label::And, Label::Or, Label::G, Label::F]
                } else {
                    &[Label::And, Label::Or]
                };
                let acts: Vec<String> = activating.iter().filter(|l| pd.contains(l)).map(|l| xvar(ps, l)).collect();
                let active = if acts.is_empty() { "false".to_string() } else { format!("(or {})", acts.join(" ")) };
                self.assert(format!("(= {} (not {active}))", xvar(n.id, &Label::Nop)));
            }
            if f.domain.contains(&Label::Not) {
                let l = sk.node(n.left.expect("NOT on internal nodes"));
                let ld = &l.free().unwrap().domain;
                let props: Vec<String> =
                    ld.iter().filter(|x| matches!(x, Label::Prop(_))).map(|x| xvar(l.id, x)).collect();
                self.assert(format!("(=> {} (or {}))", xvar(n.id, &Label::Not), props.join(" ")));
            }
            if self.opts.restrict_hole_props {
                for p in f.domain.iter().filter_map(|l| match l {
                    Label::Prop(p) => Some(p.clone()),
                    _ => None,
                }) {
                    let x = xvar(n.id, &Label::Prop(p.clone()));
                    if self.bound_props.contains(&p) {
                        self.assert(format!("(not {x})"));
                    }
                    for ph in &sk.placeholders {
                        self.assert(format!("(not (and {} {x}))", mvar(ph, &p)));
                    }
                }
            }
        }
    }

    /// Forces a labelling (all label and mapping variables).
    pub fn pin(&mut self, lab: &Labeling) {
        for n in self.sk.sources() {
            if let Some(l) = lab.labels.get(&n.id) {
                self.asserts.push(xvar(n.id, l));
            }
        }
        for (x, p) in &lab.mapping {
            self.asserts.push(mvar(x, p));
        }
    }

    fn lit(&self, p: &Prop, negated: bool, w: &Word, t: usize) -> BigRational {
        if w.letter(t).contains(p) != negated {
            big(self.params.priority(p))
        } else {
            BigRational::zero()
        }
    }

    fn sem_of(&self, label: &Label, dual: bool) -> Sem {
        match (label, dual) {
            (Label::And, false) | (Label::Or, true) => Sem::And,
            (Label::Or, false) | (Label::And, true) => Sem::Or,
            (Label::G, false) | (Label::F, true) => Sem::G,
            (Label::F, false) | (Label::G, true) => Sem::F,
            _ => unreachable!("literal labels are handled by the caller"),
        }
    }

    /// Truth (and, with `scores`, score) definitions of node `n` under
    /// `sem` on one trace.
    fn equations(&self, sem: &Sem, n: &SkNode, trace: &str, w: &Word, scores: bool, table: &[Folded]) -> Vec<String> {
        let len = w.len();
        let d = real(&self.c.delta);
        let r = real(&self.c.r);
        let y = |i: usize, t: usize| yvar(trace, i, t);
        let h = |i: usize, t: usize| hvar(trace, i, t);
        let me = n.id;
        let mut out = Vec::with_capacity(2 * len);
        match sem {
            Sem::And | Sem::Or => {
                let (l, rr) = (n.left.expect("binary"), n.right.expect("binary"));
                let op = if matches!(sem, Sem::And) { "and" } else { "or" };
                for t in 1..=len {
                    out.push(format!("(= {} ({op} {} {}))", h(me, t), h(l, t), h(rr, t)));
                    if !scores {
                        continue;
                    }
                    let (a, b) = (y(l, t), y(rr, t));
                    let e = match (sem, self.c.conj, self.c.disj) {
                        (Sem::And, ConjScheme::Product, _) => {
                            out.extend(self.product(me, l, rr, trace, table, t));
                            continue;
                        }
                        (Sem::And, ConjScheme::Min, _) => format!("(* {d} (ite (<= {a} {b}) {a} {b}))"),
                        (_, _, DisjScheme::Mean) => format!("(* {} (+ {a} {b}))", real(&self.c.half_delta)),
                        (_, _, DisjScheme::Max) => format!("(* {d} (ite (>= {a} {b}) {a} {b}))"),
                    };
                    out.push(format!("(= {} {e})", y(me, t)));
                }
            }
            Sem::G => {
                let c = n.left.expect("unary");
                for t in 1..=len {
                    let hb = if t == len { h(c, t) } else { format!("(and {} {})", h(c, t), h(me, t + 1)) };
                    out.push(format!("(= {} {hb})", h(me, t)));
                    if !scores {
                        continue;
                    }
                    let e = match self.opts.style {
                        EncodingStyle::Recursive if t == len => format!("(* {d} {})", y(c, t)),
                        EncodingStyle::Recursive => format!("(+ (* {d} {}) (* {r} {}))", y(c, t), y(me, t + 1)),
                        EncodingStyle::Unrolled => {
                            let mut pow = BigRational::one();
                            let mut terms = Vec::new();
                            for u in t..=len {
                                terms.push(format!("(* {} {})", real(&(&self.c.delta * &pow)), y(c, u)));
                                pow *= &self.c.r;
                            }
                            if terms.len() == 1 { terms.remove(0) } else { format!("(+ {})", terms.join(" ")) }
                        }
                    };
                    out.push(format!("(= {} (ite {} {e} 0.0))", y(me, t), h(me, t)));
                }
            }
            Sem::F => {
                let c = n.left.expect("unary");
                for t in 1..=len {
                    let hb = if t == len { h(c, t) } else { format!("(or {} {})", h(c, t), h(me, t + 1)) };
                    out.push(format!("(= {} {hb})", h(me, t)));
                    if !scores {
                        continue;
                    }
                    let e = match self.opts.style {
                        EncodingStyle::Recursive => {
                            let later = if t == len { "0.0".to_string() } else { format!("(* {r} {})", y(me, t + 1)) };
                            format!("(ite {} (* {d} {}) {later})", h(c, t), y(c, t))
                        }
                        EncodingStyle::Unrolled => {
                            // nearest witness position wins
                            let mut e = "0.0".to_string();
                            let mut pow: BigRational = num_traits::pow(self.c.r.clone(), len - t);
                            for u in (t..=len).rev() {
                                let k = &self.c.delta * &pow;
                                e = format!("(ite {} (* {} {}) {e})", h(c, u), real(&k), y(c, u));
                                if u > t {
                                    pow /= &self.c.r;
                                }
                            }
                            e
                        }
                    };
                    out.push(format!("(= {} {e})", y(me, t)));
                }
            }
        }
        out
    }

    /// A node with constant score `v` at `t`.
    fn leaf(&self, trace: &str, me: usize, t: usize, v: &BigRational, scores: bool) -> String {
        let h = hvar(trace, me, t);
        let truth = if v.is_zero() { format!("(not {h})") } else { h };
        if scores {
            format!("(and {truth} (= {} {}))", yvar(trace, me, t), real(v))
        } else {
            truth
        }
    }

    fn lit_vec(&self, p: &Prop, negated: bool, w: &Word) -> Vec<BigRational> {
        (1..=w.len()).map(|t| self.lit(p, negated, w, t)).collect()
    }

    /// Exact score vector of `sem` over constant children.
    fn apply(&self, sem: &Sem, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let c = &self.c;
        let len = a.len();
        let zero = BigRational::zero();
        match sem {
            Sem::And | Sem::Or => a
                .iter()
                .zip(b)
                .map(|(x, y)| match (sem, c.conj, c.disj) {
                    (Sem::And, ConjScheme::Product, _) => &c.delta * x * y,
                    (Sem::And, ConjScheme::Min, _) => &c.delta * x.min(y),
                    (_, _, DisjScheme::Mean) => &c.half_delta * (x + y),
                    (_, _, DisjScheme::Max) => &c.delta * x.max(y),
                })
                .collect(),
            Sem::G => {
                let mut out = vec![zero.clone(); len];
                for t in (0..len).rev() {
                    let later_ok = t + 1 == len || out[t + 1] > zero;
                    if a[t] > zero && later_ok {
                        out[t] = &c.delta * &a[t];
                        if t + 1 < len {
                            out[t] = &out[t] + &c.r * &out[t + 1];
                        }
                    }
                }
                out
            }
            Sem::F => {
                let mut out = vec![zero.clone(); len];
                for t in (0..len).rev() {
                    out[t] = if a[t] > zero {
                        &c.delta * &a[t]
                    } else if t + 1 < len {
                        &c.r * &out[t + 1]
                    } else {
                        zero.clone()
                    };
                }
                out
            }
        }
    }

    /// Folds `sem` over the children of `n` when they are fully folded and
    /// the combinations fit the budget.
    fn combine(&self, sem: &Sem, n: &SkNode, table: &[Folded]) -> Option<Cases> {
        let child = |id: Option<usize>| -> Option<&Folded> {
            let f = &table[id.expect("operator nodes have children") - 1];
            f.rest.is_empty().then_some(f)
        };
        match sem {
            Sem::G | Sem::F => {
                let c = child(n.left)?;
                if c.cases.len() > FOLD_BUDGET {
                    return None;
                }
                Some(c.cases.iter().map(|(g, v)| (g.clone(), self.apply(sem, v, &[]))).collect())
            }
            Sem::And | Sem::Or => {
                let (l, r) = (child(n.left)?, child(n.right)?);
                if l.cases.len() * r.cases.len() > FOLD_BUDGET {
                    return None;
                }
                let mut out = Vec::new();
                for (gl, vl) in &l.cases {
                    for (gr, vr) in &r.cases {
                        let mut g = gl.clone();
                        g.extend(gr.iter().cloned());
                        out.push((g, self.apply(sem, vl, vr)));
                    }
                }
                Some(out)
            }
        }
    }

    /// Constant score vectors of every node, bottom-up.
    fn fold_table(&self, w: &Word) -> Vec<Folded> {
        let sk = self.sk;
        let mut table: Vec<Folded> = (0..sk.nodes.len()).map(|_| Folded::default()).collect();
        for n in sk.nodes.iter().rev() {
            let mut f = Folded::default();
            match &n.kind {
                NodeKind::Fixed(Fixed::True) => f.cases.push((vec![], vec![BigRational::one(); w.len()])),
                NodeKind::Fixed(Fixed::False) => f.cases.push((vec![], vec![BigRational::zero(); w.len()])),
                NodeKind::Fixed(Fixed::Lit { prop, negated }) => f.cases.push((vec![], self.lit_vec(prop, *negated, w))),
                NodeKind::Fixed(Fixed::Var { name, negated }) => {
                    for p in &sk.alphabet {
                        f.cases.push((vec![mvar(name, p)], self.lit_vec(p, *negated, w)));
                    }
                }
                NodeKind::Fixed(op) => {
                    let sem = fixed_sem(op);
                    match self.combine(&sem, n, &table) {
                        Some(cs) => f.cases = cs,
                        None => f.rest.push("true".into()),
                    }
                }
                NodeKind::Free(fr) => {
                    let src = fr.label_src;
                    for label in &sk.node(src).free().unwrap().domain {
                        let x = xvar(src, label);
                        match label {
                            Label::Nop => {}
                            Label::Prop(p) => f.cases.push((vec![x], self.lit_vec(p, fr.dual, w))),
                            Label::Not => {
                                let cs = sk.node(n.left.expect("NOT on internal nodes")).free().unwrap().label_src;
                                for l in &sk.node(cs).free().unwrap().domain {
                                    if let Label::Prop(q) = l {
                                        f.cases.push((vec![x.clone(), xvar(cs, l)], self.lit_vec(q, !fr.dual, w)));
                                    }
                                }
                            }
                            op => match self.combine(&self.sem_of(op, fr.dual), n, &table) {
                                Some(cs) => f.cases.extend(cs.into_iter().map(|(mut g, v)| {
                                    g.insert(0, x.clone());
                                    (g, v)
                                })),
                                None => f.rest.push(x),
                            },
                        }
                    }
                }
            }
            table[n.id - 1] = f;
        }
        table
    }

    /// Product conjunction at `t`, linear against every folded case of
    /// either child; the bilinear term is only reached when neither child
    /// is folded.
    fn product(&self, me: usize, l: usize, r: usize, trace: &str, table: &[Folded], t: usize) -> Vec<String> {
        let y = |i: usize| yvar(trace, i, t);
        let mut out = Vec::new();
        for (child, other) in [(l, r), (r, l)] {
            for (g, v) in &table[child - 1].cases {
                let k = &self.c.delta * &v[t - 1];
                let e = if k.is_zero() {
                    format!("(= {} 0.0)", y(me))
                } else {
                    format!("(= {} (* {} {}))", y(me), real(&k), y(other))
                };
                out.push(guarded(g, e));
            }
        }
        let (lr, rr) = (&table[l - 1].rest, &table[r - 1].rest);
        if !lr.is_empty() && !rr.is_empty() {
            let e = format!(
                "(= {} (ite {} (* {} {} {}) 0.0))",
                y(me),
                hvar(trace, me, t),
                real(&self.c.delta),
                y(l),
                y(r)
            );
            let any = |v: &[String]| if v.len() == 1 { v[0].clone() } else { format!("(or {})", v.join(" ")) };
            let conds: Vec<String> = [any(lr), any(rr)].into_iter().filter(|c| c != "true").collect();
            out.push(guarded(&conds, e));
        }
        out
    }

    /// Truth variables and constraints of one trace, plus score variables
    /// unless the trace is negative (negatives only need to fail).
    pub fn trace(&mut self, w: &Word, name: &str, polarity: Polarity) -> Result<(), SynthError> {
        let len = w.len();
        if len > self.opts.max_trace_len {
            return Err(SynthError::TraceTooLong { trace: name.to_string(), len, cap: self.opts.max_trace_len });
        }
        let scores = polarity != Polarity::Negative;
        let sk = self.sk;
        for n in &sk.nodes {
            for t in 1..=len {
                self.decls.push(format!("(declare-const {} Bool)", hvar(name, n.id, t)));
                if scores {
                    self.decls.push(format!("(declare-const {} Real)", yvar(name, n.id, t)));
                }
            }
        }
        let table = self.fold_table(w);
        for n in &sk.nodes {
            // folded label combinations become constants
            for (g, v) in &table[n.id - 1].cases {
                for t in 1..=len {
                    let e = self.leaf(name, n.id, t, &v[t - 1], scores);
                    self.asserts.push(guarded(g, e));
                }
            }
            for guard in &table[n.id - 1].rest {
                let sem = match &n.kind {
                    NodeKind::Fixed(op) => fixed_sem(op),
                    NodeKind::Free(f) => {
                        let label = sk.node(f.label_src).free().unwrap().domain.iter().find(|l| xvar(f.label_src, l) == *guard);
                        self.sem_of(label.expect("rest guards name labels"), f.dual)
                    }
                };
                for e in self.equations(&sem, n, name, w, scores, &table) {
                    self.asserts.push(if guard == "true" { e } else { format!("(=> {guard} {e})") });
                }
            }
        }
        let root = hvar(name, 1, 1);
        match polarity {
            Polarity::Positive => {
                self.asserts.push(root);
                self.positive_roots.push(yvar(name, 1, 1));
            }
            Polarity::Negative => self.asserts.push(format!("(not {root})")),
            Polarity::Unconstrained => {}
        }
        Ok(())
    }

    /// Encodes every trace of the sample (`P1..`, `N1..`).
    pub fn sample(&mut self, s: &Sample) -> Result<(), SynthError> {
        for (i, w) in s.positives().iter().enumerate() {
            self.trace(w, &format!("P{}", i + 1), Polarity::Positive)?;
        }
        for (i, w) in s.negatives().iter().enumerate() {
            self.trace(w, &format!("N{}", i + 1), Polarity::Negative)?;
        }
        Ok(())
    }

    /// Serializes the script.
    pub fn finish(self, objective: Objective) -> Result<ConstraintScript, SynthError> {
        if objective != Objective::None && self.positive_roots.is_empty() {
            return Err(SynthError::NoPositives);
        }
        let mut text = String::new();
        text.push_str("(set-option :produce-models true)\n");
        let mut seen = HashSet::new();
        for d in &self.decls {
            if seen.insert(d) {
                text.push_str(d);
                text.push('\n');
            }
        }
        for a in &self.asserts {
            let _ = writeln!(text, "(assert {a})");
        }
        if objective != Objective::None {
            text.push_str("(declare-const m Real)\n");
            for r in &self.positive_roots {
                let _ = writeln!(text, "(assert (<= m {r}))");
            }
        }
        if objective == Objective::Maximize {
            text.push_str("(maximize m)\n");
        }
        if objective != Objective::Bounded {
            text.push_str(CHECK);
        }
        Ok(ConstraintScript { text, positive_roots: self.positive_roots })
    }
}

pub const CHECK: &str = "(check-sat)\n(get-model)\n";

/// What [`Encoder::finish`] appends after the constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Constraints only, then `check-sat`.
    None,
    /// `m` bounded by every positive root and maximized.
    Maximize,
    /// `m` and its bounds without `check-sat`, for callers that add their
    /// own assertions on `m`.
    Bounded,
}

/// Structure, all traces and the objective in one script.
pub fn emit_script(
    sk: &Skeleton,
    s: &Sample,
    params: &ValuationParams,
    opts: EncodeOptions,
) -> Result<ConstraintScript, SynthError> {
    emit_with(sk, s, params, opts, Objective::Maximize)
}

pub fn emit_with(
    sk: &Skeleton,
    s: &Sample,
    params: &ValuationParams,
    opts: EncodeOptions,
    objective: Objective,
) -> Result<ConstraintScript, SynthError> {
    if s.positives().is_empty() {
        return Err(SynthError::NoPositives);
    }
    let mut e = Encoder::new(sk, params, opts);
    e.structure();
    e.sample(s)?;
    e.finish(objective)
}

#[cfg(test)]
mod tests {
    use super::super::skeleton::{build_skeleton, skeleton_for_pattern};
    use super::*;
    use crate::formula::parse_pattern;

    fn ab() -> Vec<Prop> {
        vec![Prop::new("p"), Prop::new("q")]
    }

    fn structure_of(sk: &Skeleton) -> Vec<String> {
        let params = ValuationParams::default();
        let mut e = Encoder::new(sk, &params, EncodeOptions::default());
        e.structure();
        e.asserts
    }

    #[test]
    fn depth_zero_exactly_one() {
        let sk = build_skeleton(0, &ab()).unwrap();
        assert_eq!(structure_of(&sk), vec!["(or x_1_p_p x_1_p_q)", "(not (and x_1_p_p x_1_p_q))"]);
    }

    #[test]
    fn child_activity_implications() {
        let sk = build_skeleton(1, &ab()).unwrap();
        let a = structure_of(&sk);
        assert!(a.contains(&"(= x_2_NOP (not (or x_1_NOT x_1_AND x_1_OR x_1_G x_1_F)))".to_string()));
        assert!(a.contains(&"(= x_3_NOP (not (or x_1_AND x_1_OR)))".to_string()));
        assert!(a.contains(&"(=> x_1_NOT (or x_2_p_p x_2_p_q))".to_string()));
    }

    #[test]
    fn leaves_declare_no_operator_labels() {
        let sk = build_skeleton(1, &ab()).unwrap();
        let params = ValuationParams::default();
        let mut e = Encoder::new(&sk, &params, EncodeOptions::default());
        e.structure();
        assert!(!e.decls.iter().any(|d| d.contains("x_2_G") || d.contains("x_3_AND")));
        assert!(e.decls.iter().any(|d| d.contains("x_1_G")));
    }

    #[test]
    fn fixed_nodes_have_no_label_vars() {
        let sk = skeleton_for_pattern(&parse_pattern("G ?x").unwrap(), &ab(), 6).unwrap();
        let params = ValuationParams::default();
        let mut e = Encoder::new(&sk, &params, EncodeOptions::default());
        e.structure();
        assert!(e.decls.iter().all(|d| d.starts_with("(declare-const m_x_p_")));
        assert_eq!(e.asserts[0], "(or m_x_p_p m_x_p_q)");
    }

    #[test]
    fn objective_bounds_every_positive() {
        let sk = build_skeleton(0, &ab()).unwrap();
        let s = Sample::new(
            vec![Word::from_names(&[&["p"]]).unwrap(), Word::from_names(&[&["p"], &["q"]]).unwrap()],
            vec![],
        )
        .unwrap();
        let script = emit_script(&sk, &s, &ValuationParams::default(), EncodeOptions::default()).unwrap();
        assert_eq!(script.text.matches("(assert (<= m ").count(), 2);
        assert_eq!(script.text.matches("(maximize m)").count(), 1);
        assert!(!script.text.contains("forall") && !script.text.contains("exists"));
        let none = Sample::new(vec![], vec![Word::from_names(&[&["p"]]).unwrap()]).unwrap();
        assert!(matches!(
            emit_script(&sk, &none, &ValuationParams::default(), EncodeOptions::default()),
            Err(SynthError::NoPositives)
        ));
    }

    #[test]
    fn deterministic_text() {
        let sk = build_skeleton(2, &ab()).unwrap();
        let s = Sample::new(vec![Word::from_names(&[&["p"], &["q"]]).unwrap()], vec![]).unwrap();
        let a = emit_script(&sk, &s, &ValuationParams::default(), EncodeOptions::default()).unwrap();
        let b = emit_script(&sk, &s, &ValuationParams::default(), EncodeOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trace_cap() {
        let sk = build_skeleton(0, &ab()).unwrap();
        let long: Vec<&[&str]> = vec![&["p"]; 201];
        let s = Sample::new(vec![Word::from_names(&long).unwrap()], vec![]).unwrap();
        assert!(matches!(
            emit_script(&sk, &s, &ValuationParams::default(), EncodeOptions::default()),
            Err(SynthError::TraceTooLong { len: 201, .. })
        ));
    }

    #[test]
    fn real_literals() {
        let q = BigRational::new(BigInt::from(367_879), BigInt::from(1_000_000));
        assert_eq!(real(&q), "(/ 367879.0 1000000.0)");
        assert_eq!(real(&BigRational::from_integer(BigInt::from(10))), "10.0");
        assert_eq!(real(&BigRational::zero()), "0.0");
    }
}
