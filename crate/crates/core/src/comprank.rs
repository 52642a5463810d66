//! Compositional ranking: bottom-up enumeration of GF formulas with
//! eventuality pruning.
//!
//! The search runs `depth` iterations. Iteration 1 starts from the literals
//! `p` and `!p`; every iteration drops candidates `f` for which `F f` fails on
//! some positive trace, adds the survivors to `used`, and (except after the
//! last iteration) composes the next level with `G`, `F`, `&` and `|` over
//! `used`. Depth 0 and 1 therefore return literals only, and depth `d`
//! yields formulas of edge-depth at most `d - 1`.
//!
//! A candidate's score and truth tables are derived from its children's
//! tables, so each candidate costs O(|traces|·length). Tables are retained
//! only for formulas that can still be composed.

use std::cmp::Ordering;
use std::sync::Arc;

use rayon::prelude::*;

use crate::formula::{holds_table, Formula};
use crate::sample::Sample;
use crate::valuation::{Table, ValuationParams};

pub const DEFAULT_LEVEL_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompRankError {
    #[error("the sample has no positive traces")]
    EmptySample,
    #[error(
        "level {level} would hold {count} candidates, above the cap of {cap}; \
         lower the depth or raise the cap"
    )]
    LevelCapExceeded { level: usize, count: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredFormula {
    pub formula: Formula,
    pub score: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompRankConfig {
    pub depth: usize,
    pub level_cap: usize,
}

impl CompRankConfig {
    pub fn new(depth: usize) -> Self {
        CompRankConfig { depth, level_cap: DEFAULT_LEVEL_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    /// Edge-depth of the formulas in this level.
    pub level: usize,
    pub candidates: usize,
    pub survivors: usize,
}

/// Output of [`comp_rank`]: consistent formulas sorted by score, plus the
/// search trace.
#[derive(Debug, Clone)]
pub struct Ranking {
    pub results: Vec<ScoredFormula>,
    /// Every formula that passed the eventuality check, in discovery order.
    pub used: Vec<Formula>,
    pub levels: Vec<LevelStats>,
}

/// `F f` holds on every positive trace.
pub fn f_check(f: &Formula, s: &Sample) -> bool {
    s.positives().iter().all(|w| holds_table(f, w).iter().any(|&b| b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    G,
    F,
    And,
    Or,
}

/// A composition step over indices into `used`.
#[derive(Debug, Clone, Copy)]
struct Step {
    op: Op,
    a: usize,
    b: usize,
}

/// Number of entries [`steps`] would return, without allocating them.
fn step_count(n_used: usize, frontier: usize) -> usize {
    let fresh = n_used - frontier;
    // pairs (a, b) with a < b and b >= frontier
    let pairs = (frontier..n_used).map(|b| b as u128).sum::<u128>();
    (2 * fresh as u128 + 2 * pairs).min(usize::MAX as u128) as usize
}

/// All steps with at least one operand in `used[frontier..]`.
fn steps(n_used: usize, frontier: usize) -> Vec<Step> {
    let mut out = Vec::new();
    for a in frontier..n_used {
        out.push(Step { op: Op::G, a, b: a });
        out.push(Step { op: Op::F, a, b: a });
    }
    for b in frontier..n_used {
        for a in 0..b {
            out.push(Step { op: Op::And, a, b });
            out.push(Step { op: Op::Or, a, b });
        }
    }
    out
}

struct Node {
    formula: Formula,
    print: Arc<str>,
    tables: Vec<Table>,
}

fn build(step: Step, nodes: &[Node]) -> Formula {
    let (x, y) = (&nodes[step.a], &nodes[step.b]);
    let pair = || {
        if x.print <= y.print {
            (Arc::new(x.formula.clone()), Arc::new(y.formula.clone()))
        } else {
            (Arc::new(y.formula.clone()), Arc::new(x.formula.clone()))
        }
    };
    match step.op {
        Op::G => Formula::globally(x.formula.clone()),
        Op::F => Formula::finally(x.formula.clone()),
        Op::And => {
            let (l, r) = pair();
            Formula::And(l, r)
        }
        Op::Or => {
            let (l, r) = pair();
            Formula::Or(l, r)
        }
    }
}

fn tables_for(step: Step, nodes: &[Node], params: &ValuationParams) -> Vec<Table> {
    let (x, y) = (&nodes[step.a].tables, &nodes[step.b].tables);
    (0..x.len())
        .map(|k| match step.op {
            Op::G => Table::globally(&x[k], params),
            Op::F => Table::finally(&x[k], params),
            Op::And => Table::and(&x[k], &y[k], params),
            Op::Or => Table::or(&x[k], &y[k], params),
        })
        .collect()
}

struct Verdict {
    survives: bool,
    consistent: bool,
    score: f64,
}

fn judge(tables: &[Table], n_pos: usize) -> Verdict {
    let (pos, neg) = tables.split_at(n_pos);
    let survives = pos.iter().all(|t| t.holds.iter().any(|&b| b));
    let consistent = pos.iter().all(|t| t.holds[0]) && neg.iter().all(|t| !t.holds[0]);
    let score = pos.iter().map(|t| t.values[0]).sum();
    Verdict { survives, consistent, score }
}

/// Deduplicated union of `G f`, `F f`, `f & g` and `f | g` over `used`, in
/// canonical form, excluding formulas already in `used`.
pub fn compose(used: &[Formula]) -> Vec<Formula> {
    let canon: Vec<Formula> = used.iter().map(Formula::canonical).collect();
    let mut seen: std::collections::HashSet<Formula> = canon.iter().cloned().collect();
    let mut out = Vec::new();
    let mut push = |f: Formula| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };
    for f in &canon {
        push(Formula::globally(f.clone()));
        push(Formula::finally(f.clone()));
    }
    for (j, g) in canon.iter().enumerate() {
        for f in &canon[..=j] {
            push(Formula::commutative(f.clone(), g.clone(), Formula::And));
            push(Formula::commutative(f.clone(), g.clone(), Formula::Or));
        }
    }
    out
}

fn order(a: &ScoredFormula, b: &ScoredFormula, pa: &str, pb: &str) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.formula.size().cmp(&b.formula.size()))
        .then(pa.cmp(pb))
}

pub fn comp_rank(
    s: &Sample,
    params: &ValuationParams,
    cfg: &CompRankConfig,
) -> Result<Ranking, CompRankError> {
    if s.positives().is_empty() {
        return Err(CompRankError::EmptySample);
    }
    let n_pos = s.positives().len();
    let words: Vec<_> = s.positives().iter().chain(s.negatives()).collect();

    let mut literals = Vec::new();
    for p in s.alphabet().props() {
        literals.push((Formula::Atom(p.clone()), false, p));
        literals.push((Formula::NegAtom(p.clone()), true, p));
    }
    if literals.len() > cfg.level_cap {
        return Err(CompRankError::LevelCapExceeded {
            level: 0,
            count: literals.len(),
            cap: cfg.level_cap,
        });
    }

    let mut nodes: Vec<Node> = Vec::new();
    let mut levels = Vec::new();
    let mut scored: Vec<ScoredFormula> = Vec::new();

    // level 0
    let level0: Vec<(Node, Verdict)> = literals
        .into_iter()
        .map(|(f, neg, p)| {
            let tables: Vec<Table> = words.iter().map(|w| Table::literal(p, neg, w, params)).collect();
            let v = judge(&tables, n_pos);
            (Node { print: f.to_string().into(), formula: f, tables }, v)
        })
        .collect();
    let prune = cfg.depth >= 1;
    let candidates = level0.len();
    for (node, v) in level0 {
        if !prune || v.survives {
            scored.push(ScoredFormula { formula: node.formula.clone(), score: v.score, consistent: v.consistent });
            nodes.push(node);
        }
    }
    levels.push(LevelStats { level: 0, candidates, survivors: if prune { nodes.len() } else { candidates } });

    let mut frontier = 0;
    for iteration in 2..=cfg.depth {
        let level = iteration - 1;
        let count = step_count(nodes.len(), frontier);
        if count > cfg.level_cap {
            return Err(CompRankError::LevelCapExceeded { level, count, cap: cfg.level_cap });
        }
        let plan = steps(nodes.len(), frontier);
        let last = iteration == cfg.depth;
        frontier = nodes.len();
        let evaluated: Vec<(Step, Option<Vec<Table>>, Verdict)> = plan
            .par_iter()
            .map(|&step| {
                let tables = tables_for(step, &nodes, params);
                let v = judge(&tables, n_pos);
                (step, if last || !v.survives { None } else { Some(tables) }, v)
            })
            .collect();
        let mut survivors = 0;
        let mut fresh = Vec::new();
        for (step, tables, v) in evaluated {
            if !v.survives {
                continue;
            }
            survivors += 1;
            let formula = build(step, &nodes);
            if v.consistent {
                scored.push(ScoredFormula { formula: formula.clone(), score: v.score, consistent: true });
            }
            let print: Arc<str> = formula.to_string().into();
            fresh.push(Node { formula, print, tables: tables.unwrap_or_default() });
        }
        nodes.extend(fresh);
        levels.push(LevelStats { level, candidates: plan.len(), survivors });
        log::debug!("level {level}: {} candidates, {survivors} kept", plan.len());
    }

    let used: Vec<Formula> = if prune { nodes.iter().map(|n| n.formula.clone()).collect() } else { Vec::new() };
    scored.retain(|f| f.consistent);
    let mut keyed: Vec<(String, ScoredFormula)> = scored.into_iter().map(|f| (f.formula.to_string(), f)).collect();
    keyed.sort_by(|(pa, a), (pb, b)| order(a, b, pa, pb));
    Ok(Ranking { results: keyed.into_iter().map(|(_, f)| f).collect(), used, levels })
}
