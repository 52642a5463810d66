//! Solve, decode and cross-check.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::formula::{consistent, Formula, Hole, Pattern, Prop};
use crate::sample::{alphabet, Sample};
use crate::valuation::{value, ValuationParams};

use super::encode::{emit_with, mvar, real, xvar, EncodeOptions, Objective, CHECK};
use super::sexpr::Model;
use super::skeleton::{skeleton_for_pattern, Labeling, Skeleton, DEFAULT_MAX_DEPTH};
use super::solver::{run_solver, SolverConfig, SolverStatus};
use super::SynthError;

/// Relative tolerance of the objective cross-check.
pub const OBJECTIVE_TOL: f64 = 1e-6;

/// How the optimum is requested from the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Repeated satisfiability checks, each demanding a strictly larger
    /// objective than the previous model; the closing `unsat` proves the
    /// last model optimal. Solvers handle the product conjunction far
    /// better this way than through their optimization engines.
    #[default]
    Strengthen,
    /// A single `(maximize m)` query.
    Maximize,
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub encode: EncodeOptions,
    pub strategy: Strategy,
    pub solver: SolverConfig,
    pub timeout: Duration,
    pub max_depth: usize,
}

impl SynthConfig {
    pub fn new(solver: SolverConfig, timeout: Duration) -> Self {
        SynthConfig { encode: EncodeOptions::default(), strategy: Strategy::default(), solver, timeout, max_depth: DEFAULT_MAX_DEPTH }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthesized {
    /// Instantiated formula in NNF.
    pub formula: Formula,
    /// The pattern with placeholders and holes filled, sugar kept.
    pub sugared: String,
    pub mapping: BTreeMap<Prop, Prop>,
    /// Solver-side objective, when it is a rational value.
    pub objective: Option<f64>,
    /// Solver calls made.
    pub rounds: usize,
    /// Minimum value over the positive traces, recomputed by the evaluator.
    pub min_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthOutcome {
    Optimal(Synthesized),
    Unsat,
    Timeout,
}

fn truthy(model: &Model, var: &str) -> Result<bool, SynthError> {
    model.bool(var).map_err(SynthError::Decode)
}

/// Reads the label and mapping booleans of `model`.
pub fn decode(model: &Model, sk: &Skeleton) -> Result<Labeling, SynthError> {
    let mut lab = Labeling::default();
    for n in sk.sources() {
        let domain = &n.free().expect("sources are free").domain;
        let mut chosen = Vec::new();
        for l in domain {
            if truthy(model, &xvar(n.id, l))? {
                chosen.push(l.clone());
            }
        }
        match chosen.len() {
            1 => {
                lab.labels.insert(n.id, chosen.remove(0));
            }
            k => return Err(SynthError::Decode(format!("node {} has {k} labels", n.id))),
        }
    }
    for x in &sk.placeholders {
        let mut targets = Vec::new();
        for p in &sk.alphabet {
            if truthy(model, &mvar(x, p))? {
                targets.push(p.clone());
            }
        }
        match targets.len() {
            1 => {
                lab.mapping.insert(x.clone(), targets.remove(0));
            }
            k => return Err(SynthError::Decode(format!("placeholder {x} has {k} targets"))),
        }
    }
    Ok(lab)
}

/// Formula and sugared print for a labelling.
pub fn realize(sk: &Skeleton, lab: &Labeling) -> Result<(Formula, String), SynthError> {
    let fills = sk.fills(lab)?;
    let mapping: HashMap<Prop, Prop> = lab.mapping.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let pattern = sk.pattern.as_ref().expect("skeletons carry their pattern");
    let formula = pattern.instantiate(&mapping, &fills)?;
    let sugared = pattern.substitute(&mapping, &fills)?.to_string();
    Ok((formula, sugared))
}

/// Minimum value of `f` over the positives.
pub fn min_positive(f: &Formula, s: &Sample, params: &ValuationParams) -> Result<f64, SynthError> {
    let mut m = f64::INFINITY;
    for w in s.positives() {
        m = m.min(value(f, w, params)?);
    }
    Ok(m)
}

/// Optimal instantiation of `pattern` for `s`.
pub fn pattern_synth(
    s: &Sample,
    pattern: &Pattern,
    params: &ValuationParams,
    cfg: &SynthConfig,
) -> Result<SynthOutcome, SynthError> {
    if s.positives().is_empty() {
        return Err(SynthError::NoPositives);
    }
    let sk = skeleton_for_pattern(pattern, &alphabet(s), cfg.max_depth)?;
    let (model, objective, rounds) = match solve(&sk, s, params, cfg)? {
        Solved::Model { model, objective, rounds } => (model, objective, rounds),
        Solved::Unsat => return Ok(SynthOutcome::Unsat),
        Solved::Timeout => return Ok(SynthOutcome::Timeout),
    };
    let lab = decode(&model, &sk)?;
    let (formula, sugared) = realize(&sk, &lab)?;
    if !consistent(&formula, s) {
        return Err(SynthError::Inconsistent(formula.to_string()));
    }
    let min_score = min_positive(&formula, s, params)?;
    let objective = objective.and_then(|q| q.to_f64());
    if let Some(obj) = objective {
        if (obj - min_score).abs() > OBJECTIVE_TOL * min_score.abs().max(1.0) {
            return Err(SynthError::ObjectiveMismatch { objective: obj, evaluated: min_score });
        }
    }
    Ok(SynthOutcome::Optimal(Synthesized { formula, sugared, mapping: lab.mapping, objective, rounds, min_score }))
}

enum Solved {
    Model { model: Model, objective: Option<BigRational>, rounds: usize },
    Unsat,
    Timeout,
}

fn solve(sk: &Skeleton, s: &Sample, params: &ValuationParams, cfg: &SynthConfig) -> Result<Solved, SynthError> {
    match cfg.strategy {
        Strategy::Maximize => {
            let script = emit_with(sk, s, params, cfg.encode, Objective::Maximize)?;
            log::debug!("script: {} bytes", script.text.len());
            Ok(match run_solver(&script.text, &cfg.solver, cfg.timeout)? {
                SolverStatus::Optimal(model) => {
                    let objective = model.real("m").cloned();
                    Solved::Model { model, objective, rounds: 1 }
                }
                SolverStatus::Unsat => Solved::Unsat,
                SolverStatus::Timeout => Solved::Timeout,
            })
        }
        Strategy::Strengthen => {
            let script = emit_with(sk, s, params, cfg.encode, Objective::Bounded)?;
            log::debug!("script: {} bytes", script.text.len());
            let deadline = Instant::now() + cfg.timeout;
            let mut best: Option<(Model, BigRational)> = None;
            let mut rounds = 0;
            loop {
                let left = deadline.saturating_duration_since(Instant::now());
                if left.is_zero() {
                    return Ok(Solved::Timeout);
                }
                let mut text = script.text.clone();
                if let Some((_, v)) = &best {
                    let _ = writeln!(text, "(assert (> m {}))", real(v));
                }
                text.push_str(CHECK);
                rounds += 1;
                match run_solver(&text, &cfg.solver, left)? {
                    SolverStatus::Optimal(model) => {
                        let mut v: Option<BigRational> = None;
                        for r in &script.positive_roots {
                            let y = model
                                .real(r)
                                .ok_or_else(|| SynthError::Decode(format!("no rational value for {r}")))?;
                            if v.as_ref().is_none_or(|v| y < v) {
                                v = Some(y.clone());
                            }
                        }
                        let v = v.expect("at least one positive");
                        log::debug!("round {rounds}: objective {}", v.to_f64().unwrap_or(f64::NAN));
                        best = Some((model, v));
                    }
                    SolverStatus::Unsat => {
                        return Ok(match best {
                            Some((model, v)) => Solved::Model { model, objective: Some(v), rounds },
                            None => Solved::Unsat,
                        })
                    }
                    SolverStatus::Timeout => return Ok(Solved::Timeout),
                }
            }
        }
    }
}

/// Optimal formula of depth at most `depth` for `s`.
pub fn constraint_opt(
    s: &Sample,
    depth: usize,
    params: &ValuationParams,
    cfg: &SynthConfig,
) -> Result<SynthOutcome, SynthError> {
    pattern_synth(s, &Pattern::Hole(Hole { id: 0, depth, negated: false }), params, cfg)
}
