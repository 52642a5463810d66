//! Command implementations behind the `ltlqm` binary, and the benchmark
//! table runner.
//!
//! Every command returns a [`RunReport`]. Reports carry no wall-clock data
//! unless timing is requested, so fixed inputs give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::comprank::{comp_rank, CompRankConfig, CompRankError, DEFAULT_LEVEL_CAP};
use crate::formula::{consistent, holds_table, parse_formula, parse_pattern, Formula, ParseError, Prop};
use crate::sample::{load_sample, parse_traces, print_traces, Letter, Sample, SampleError, Word};
use crate::smt::{constraint_opt, pattern_synth, SolverConfig, SynthConfig, SynthError, SynthOutcome};
use crate::tracegen::{generate_sample, preset, GenConfig, GenError, PRESETS};
use crate::valuation::{parse_rational, value_sample, ValuationParams};

pub const REPORT_SCHEMA: &str = "ltlqm-report/1";

/// Default word-length bound of the equivalence oracle.
pub const DEFAULT_EQ_LEN: usize = 6;
/// Budget of words the equivalence oracle may enumerate.
pub const EQ_WORD_BUDGET: u64 = 400_000;
/// Held-out positives for the "consistent" verdict.
pub const HELD_OUT: usize = 100;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    CompRank(#[from] CompRankError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("{path}:{line}: {msg}")]
    Priority { path: PathBuf, line: usize, msg: String },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl HarnessError {
    /// Process exit code: 1 for bad input, 4 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Synth(
                SynthError::Solver(_)
                | SynthError::Decode(_)
                | SynthError::Inconsistent(_)
                | SynthError::ObjectiveMismatch { .. },
            ) => 4,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Mine,
    Synth,
    Match,
    Gen,
    Eval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Unsat,
    Timeout,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Optimal => 0,
            Status::Unsat => 2,
            Status::Timeout => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub r: String,
    pub delta: String,
    pub conj: String,
    pub disj: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub priority: BTreeMap<String, String>,
}

impl From<&ValuationParams> for ReportParams {
    fn from(p: &ValuationParams) -> Self {
        ReportParams {
            r: p.r().to_string(),
            delta: p.delta().to_string(),
            conj: p.conj.to_string(),
            disj: p.disj.to_string(),
            priority: p.priorities().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportFormula {
    pub formula: String,
    /// Pattern-shaped print, when it differs from `formula`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sugared: Option<String>,
    /// Sum of values over the positive traces.
    pub score: f64,
    /// Minimum value over the positive traces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub preset: String,
    pub length: usize,
    pub mode: EvalMode,
    pub seed: u64,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_sec: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub mode: Mode,
    pub inputs_digest: String,
    pub params: ReportParams,
    pub results: Vec<ReportFormula>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_status: Option<Status>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<EvalRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_sec: Option<f64>,
}

impl RunReport {
    fn new(mode: Mode, digest: String, params: &ValuationParams) -> Self {
        RunReport {
            schema: REPORT_SCHEMA,
            mode,
            inputs_digest: digest,
            params: params.into(),
            results: Vec::new(),
            solver_status: None,
            rows: Vec::new(),
            files: Vec::new(),
            wall_time_sec: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.solver_status.map_or(0, Status::exit_code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(s) = self.solver_status {
            let _ = writeln!(out, "status: {}", serde_json::to_value(s).unwrap().as_str().unwrap());
        }
        for (i, f) in self.results.iter().enumerate() {
            let shown = f.sugared.as_deref().unwrap_or(&f.formula);
            match f.min_score {
                Some(m) => {
                    let _ = writeln!(out, "{:>3}. {shown}  score={:.6} min={:.6}", i + 1, f.score, m);
                }
                None => {
                    let _ = writeln!(out, "{:>3}. {shown}  score={:.6}", i + 1, f.score);
                }
            }
        }
        if !self.rows.is_empty() {
            let _ = writeln!(out, "{:<14} {:>6} {:<6} {:>5} {:>5} {:<10} formula", "preset", "length", "mode", "seed", "depth", "verdict");
            for r in &self.rows {
                let formula = r.formula.clone().or_else(|| r.error.clone()).unwrap_or_else(|| "-".into());
                let verdict = serde_json::to_value(r.verdict).unwrap().as_str().unwrap().to_string();
                let mode = serde_json::to_value(r.mode).unwrap().as_str().unwrap().to_string();
                let _ = write!(out, "{:<14} {:>6} {:<6} {:>5} {:>5} {:<10} {formula}", r.preset, r.length, mode, r.seed, r.depth, verdict);
                if let Some(t) = r.wall_time_sec {
                    let _ = write!(out, "  ({t:.3}s)");
                }
                out.push('\n');
            }
        }
        for f in &self.files {
            let _ = writeln!(out, "wrote {f}");
        }
        if let Some(t) = self.wall_time_sec {
            let _ = writeln!(out, "wall time: {t:.3}s");
        }
        out
    }
}

/// SHA-256 over length-prefixed parts.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn read(path: &Path) -> Result<Vec<u8>, HarnessError> {
    std::fs::read(path).map_err(|source| HarnessError::Sample(SampleError::Io { path: path.to_path_buf(), source }))
}

fn params_bytes(params: &ValuationParams) -> Vec<u8> {
    serde_json::to_vec(&ReportParams::from(params)).unwrap()
}

/// Reads a priority file of `name weight` lines. `#` starts a comment.
pub fn parse_priority(text: &str, path: &Path) -> Result<Vec<(Prop, Rational64)>, HarnessError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| HarnessError::Priority { path: path.to_path_buf(), line: i + 1, msg };
        let mut it = line.split_whitespace();
        let (name, weight) = match (it.next(), it.next(), it.next()) {
            (Some(n), Some(w), None) => (n, w),
            _ => return Err(err(format!("expected `name weight`, got `{line}`"))),
        };
        if !Prop::is_valid_name(name) {
            return Err(err(format!("invalid proposition `{name}`")));
        }
        let w = parse_rational(weight).map_err(err)?;
        if w <= Rational64::from_integer(0) {
            return Err(err(format!("weight of `{name}` must be positive")));
        }
        out.push((Prop::new(name), w));
    }
    Ok(out)
}

pub fn load_priority(path: &Path, params: ValuationParams) -> Result<ValuationParams, HarnessError> {
    let text = String::from_utf8_lossy(&read(path)?).into_owned();
    let mut params = params;
    for (p, w) in parse_priority(&text, path)? {
        params = params
            .with_priority(p, w)
            .map_err(|e| HarnessError::Priority { path: path.to_path_buf(), line: 0, msg: e.to_string() })?;
    }
    Ok(params)
}

fn sample_inputs(pos: &Path, neg: Option<&Path>) -> Result<(Sample, Vec<u8>, Vec<u8>), HarnessError> {
    let pos_bytes = read(pos)?;
    let neg_bytes = match neg {
        Some(n) => read(n)?,
        None => Vec::new(),
    };
    let s = load_sample(pos, neg)?;
    if s.positives().is_empty() {
        return Err(HarnessError::Usage(format!("{}: no positive traces", pos.display())));
    }
    Ok((s, pos_bytes, neg_bytes))
}

fn scored(f: &Formula, s: &Sample, params: &ValuationParams) -> f64 {
    value_sample(f, s, params).expect("GF formulas evaluate")
}

fn timed(start: Instant, timing: bool) -> Option<f64> {
    timing.then(|| start.elapsed().as_secs_f64())
}

pub fn cmd_mine(
    pos: &Path,
    neg: Option<&Path>,
    rank: &CompRankConfig,
    params: &ValuationParams,
    top: usize,
    timing: bool,
) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let (s, pb, nb) = sample_inputs(pos, neg)?;
    let d = rank.depth.to_string();
    let mut rep = RunReport::new(Mode::Mine, digest(&[b"mine", &pb, &nb, d.as_bytes(), &params_bytes(params)]), params);
    let ranking = comp_rank(&s, params, rank)?;
    rep.results = ranking
        .results
        .iter()
        .take(top)
        .map(|f| ReportFormula { formula: f.formula.to_string(), sugared: None, score: f.score, min_score: None })
        .collect();
    rep.wall_time_sec = timed(start, timing);
    Ok(rep)
}

fn synth_report(
    mut rep: RunReport,
    out: SynthOutcome,
    s: &Sample,
    params: &ValuationParams,
) -> RunReport {
    match out {
        SynthOutcome::Optimal(r) => {
            let formula = r.formula.to_string();
            let sugared = (r.sugared != formula).then_some(r.sugared);
            rep.results.push(ReportFormula {
                score: scored(&r.formula, s, params),
                formula,
                sugared,
                min_score: Some(r.min_score),
            });
            rep.solver_status = Some(Status::Optimal);
        }
        SynthOutcome::Unsat => rep.solver_status = Some(Status::Unsat),
        SynthOutcome::Timeout => rep.solver_status = Some(Status::Timeout),
    }
    rep
}

pub fn cmd_synth(
    pos: &Path,
    neg: Option<&Path>,
    depth: usize,
    params: &ValuationParams,
    cfg: &SynthConfig,
    timing: bool,
) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let (s, pb, nb) = sample_inputs(pos, neg)?;
    let d = depth.to_string();
    let rep = RunReport::new(Mode::Synth, digest(&[b"synth", &pb, &nb, d.as_bytes(), &params_bytes(params)]), params);
    let out = constraint_opt(&s, depth, params, cfg)?;
    let mut rep = synth_report(rep, out, &s, params);
    rep.wall_time_sec = timed(start, timing);
    Ok(rep)
}

pub fn cmd_match(
    pos: &Path,
    neg: Option<&Path>,
    pattern: &str,
    params: &ValuationParams,
    cfg: &SynthConfig,
    timing: bool,
) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let (s, pb, nb) = sample_inputs(pos, neg)?;
    let p = parse_pattern(pattern)?;
    let rep =
        RunReport::new(Mode::Match, digest(&[b"match", &pb, &nb, pattern.as_bytes(), &params_bytes(params)]), params);
    let out = pattern_synth(&s, &p, params, cfg)?;
    let mut rep = synth_report(rep, out, &s, params);
    rep.wall_time_sec = timed(start, timing);
    Ok(rep)
}

/// Generator from a preset name or a formula string.
pub fn generator(spec: &str) -> Result<Formula, HarnessError> {
    if let Ok(f) = preset(spec) {
        return Ok(f);
    }
    Ok(parse_formula(spec)?)
}

fn write(path: &Path, text: &str) -> Result<(), HarnessError> {
    std::fs::write(path, text).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

pub fn cmd_gen(cfg: &GenConfig, out_pos: &Path, out_neg: Option<&Path>) -> Result<RunReport, HarnessError> {
    let s = generate_sample(cfg)?;
    let pos = print_traces(s.positives());
    let neg = print_traces(s.negatives());
    let cfg_text = format!(
        "{}|{}|{}|{}|{}|{}|{}",
        cfg.generator, cfg.num_positive, cfg.num_negative, cfg.length, cfg.noise_vars, cfg.p_noise, cfg.seed
    );
    let params = ValuationParams::default();
    let mut rep = RunReport::new(Mode::Gen, digest(&[b"gen", cfg_text.as_bytes()]), &params);
    write(out_pos, &pos)?;
    rep.files.push(out_pos.display().to_string());
    match out_neg {
        Some(p) => {
            write(p, &neg)?;
            rep.files.push(p.display().to_string());
        }
        None if !s.negatives().is_empty() => {
            log::warn!("{} negative traces discarded (no negative output file)", s.negatives().len())
        }
        None => {}
    }
    rep.results.push(ReportFormula {
        formula: cfg.generator.to_string(),
        sugared: None,
        score: scored(&cfg.generator, &s, &params),
        min_score: None,
    });
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Miss,
    Consistent,
    Exact,
}

/// All words of length 1..=`max_len` over `props`, visited in turn.
fn for_each_word(props: &[Prop], max_len: usize, mut f: impl FnMut(&Word) -> bool) -> bool {
    let letters: Vec<Letter> = (0u64..1 << props.len())
        .map(|bits| Letter::new(props.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, p)| p.clone()).collect()))
        .collect();
    for len in 1..=max_len {
        let mut idx = vec![0usize; len];
        loop {
            let w = Word::new(idx.iter().map(|&i| letters[i].clone()).collect()).expect("non-empty");
            if !f(&w) {
                return false;
            }
            let mut k = 0;
            while k < len {
                idx[k] += 1;
                if idx[k] < letters.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == len {
                break;
            }
        }
    }
    true
}

/// Longest word length `<= max_len` whose enumeration fits the budget.
pub fn eq_len(n_props: usize, max_len: usize) -> usize {
    let letters = 1u64 << n_props.min(20);
    let mut total = 0u64;
    let mut count = 1u64;
    for len in 1..=max_len {
        count = count.saturating_mul(letters);
        total = total.saturating_add(count);
        if total > EQ_WORD_BUDGET {
            return (len - 1).max(1);
        }
    }
    max_len
}

/// `a` and `b` agree on every word up to `max_len` over the union of
/// their propositions (the bound shrinks for large alphabets).
pub fn equivalent_upto(a: &Formula, b: &Formula, max_len: usize) -> bool {
    let mut props = a.props();
    props.extend(b.props());
    props.sort();
    props.dedup();
    let len = eq_len(props.len(), max_len);
    for_each_word(&props, len, |w| holds_table(a, w)[0] == holds_table(b, w)[0])
}

/// Generator-relative verdict for a learned formula.
pub fn verdict(learned: &Formula, generator: &Formula, held_out: &Sample) -> Verdict {
    if equivalent_upto(learned, generator, DEFAULT_EQ_LEN) {
        Verdict::Exact
    } else if consistent(learned, held_out) {
        Verdict::Consistent
    } else {
        Verdict::Miss
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    Mine,
    Synth,
}

impl std::str::FromStr for EvalMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "mine" => Ok(EvalMode::Mine),
            "synth" => Ok(EvalMode::Synth),
            _ => Err(format!("unknown mode `{s}` (expected mine or synth)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub presets: Vec<String>,
    pub lengths: Vec<usize>,
    pub modes: Vec<EvalMode>,
    /// Fixed search depth; per generator when absent.
    pub depth: Option<usize>,
    pub level_cap: usize,
    pub seeds: Vec<u64>,
    pub workers: usize,
    pub num_positive: usize,
    pub num_negative: usize,
    pub noise_vars: usize,
    pub p_noise: f64,
    pub params: ValuationParams,
    /// Needed for synth cells.
    pub synth: Option<SynthConfig>,
    pub timing: bool,
}

impl EvalConfig {
    pub fn new(presets: Vec<String>, lengths: Vec<usize>) -> Self {
        EvalConfig {
            presets,
            lengths,
            modes: vec![EvalMode::Mine],
            depth: None,
            level_cap: DEFAULT_LEVEL_CAP,
            seeds: vec![1],
            workers: 1,
            num_positive: 20,
            num_negative: 1,
            noise_vars: 0,
            p_noise: 0.0,
            params: ValuationParams::default(),
            synth: None,
            timing: false,
        }
    }
}

/// Ranking depth that reaches `g`'s shape, capped at 3.
pub fn mine_depth(g: &Formula) -> usize {
    (g.depth() + 1).min(3)
}

/// Solver depth for `g`, capped at 2.
pub fn synth_depth(g: &Formula) -> usize {
    g.depth().min(2)
}

/// Seed of the held-out sample for a cell seed.
fn held_out_seed(seed: u64) -> u64 {
    seed ^ 0x05ee_d0f4_e1d0u64
}

struct Cell {
    preset: String,
    length: usize,
    mode: EvalMode,
    seed: u64,
}

fn run_cell(c: &Cell, cfg: &EvalConfig) -> EvalRow {
    let start = Instant::now();
    let g = preset(&c.preset).expect("presets validated");
    let depth = cfg.depth.unwrap_or(match c.mode {
        EvalMode::Mine => mine_depth(&g),
        EvalMode::Synth => synth_depth(&g),
    });
    let mut row = EvalRow {
        preset: c.preset.clone(),
        length: c.length,
        mode: c.mode,
        seed: c.seed,
        depth,
        formula: None,
        verdict: Verdict::Miss,
        status: None,
        error: None,
        wall_time_sec: None,
    };
    let gen = GenConfig::new(g.clone(), c.length, c.seed)
        .with_counts(cfg.num_positive, cfg.num_negative)
        .with_noise(cfg.noise_vars, cfg.p_noise);
    let held = GenConfig::new(g.clone(), c.length, held_out_seed(c.seed))
        .with_counts(HELD_OUT, 0)
        .with_noise(cfg.noise_vars, cfg.p_noise);
    let result = (|| -> Result<Option<Formula>, HarnessError> {
        let s = generate_sample(&gen)?;
        match c.mode {
            EvalMode::Mine => {
                let r = comp_rank(&s, &cfg.params, &CompRankConfig { depth, level_cap: cfg.level_cap })?;
                Ok(r.results.into_iter().next().map(|f| f.formula))
            }
            EvalMode::Synth => {
                let sc = cfg.synth.as_ref().ok_or_else(|| HarnessError::Usage("synth cells need a solver".into()))?;
                match constraint_opt(&s, depth, &cfg.params, sc)? {
                    SynthOutcome::Optimal(r) => {
                        row.status = Some(Status::Optimal);
                        Ok(Some(r.formula))
                    }
                    SynthOutcome::Unsat => {
                        row.status = Some(Status::Unsat);
                        Ok(None)
                    }
                    SynthOutcome::Timeout => {
                        row.status = Some(Status::Timeout);
                        Ok(None)
                    }
                }
            }
        }
    })();
    match result {
        Ok(Some(f)) => match generate_sample(&held) {
            Ok(h) => {
                row.verdict = verdict(&f, &g, &h);
                row.formula = Some(f.to_string());
            }
            Err(e) => row.error = Some(e.to_string()),
        },
        Ok(None) => {}
        Err(e) => row.error = Some(e.to_string()),
    }
    if cfg.timing {
        row.wall_time_sec = Some(start.elapsed().as_secs_f64());
    }
    row
}

pub fn cmd_eval(cfg: &EvalConfig) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    for p in &cfg.presets {
        preset(p).map_err(|_| {
            let known: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            HarnessError::Usage(format!("unknown preset `{p}` (known: {})", known.join(", ")))
        })?;
    }
    if cfg.modes.contains(&EvalMode::Synth) && cfg.synth.is_none() {
        return Err(HarnessError::Usage("synth cells need a solver".into()));
    }
    let mut cells = Vec::new();
    for p in &cfg.presets {
        for &length in &cfg.lengths {
            for &mode in &cfg.modes {
                for &seed in &cfg.seeds {
                    cells.push(Cell { preset: p.clone(), length, mode, seed });
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| HarnessError::Usage(e.to_string()))?;
    let rows: Vec<EvalRow> = pool.install(|| cells.par_iter().map(|c| run_cell(c, cfg)).collect());
    let desc = format!(
        "{:?}|{:?}|{:?}|{:?}|{}|{:?}|{}|{}|{}|{}",
        cfg.presets, cfg.lengths, cfg.modes, cfg.depth, cfg.level_cap, cfg.seeds, cfg.num_positive, cfg.num_negative, cfg.noise_vars, cfg.p_noise
    );
    let mut rep = RunReport::new(Mode::Eval, digest(&[b"eval", desc.as_bytes(), &params_bytes(&cfg.params)]), &cfg.params);
    rep.rows = rows;
    rep.wall_time_sec = timed(start, cfg.timing);
    Ok(rep)
}

/// Resolves the solver and bundles it with a timeout.
pub fn synth_config(solver: Option<&Path>, timeout: Duration) -> Result<SynthConfig, HarnessError> {
    let sc = SolverConfig::resolve(solver).map_err(SynthError::from)?;
    Ok(SynthConfig::new(sc, timeout))
}

/// Parses a trace file already in memory; used by FFI callers.
pub fn sample_from_text(pos: &str, neg: Option<&str>) -> Result<Sample, HarnessError> {
    let p = parse_traces(pos)?;
    let n = match neg {
        Some(t) => parse_traces(t)?.words,
        None => Vec::new(),
    };
    Ok(Sample::new(p.words, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn priority_file() {
        let got = parse_priority("# weights\nauth_fail 10\n\nq 1/2  # half\n", Path::new("p.txt")).unwrap();
        assert_eq!(got, vec![(Prop::new("auth_fail"), Rational64::from_integer(10)), (Prop::new("q"), Rational64::new(1, 2))]);
        assert!(matches!(parse_priority("a\n", Path::new("p")), Err(HarnessError::Priority { line: 1, .. })));
        assert!(parse_priority("a 1 2\n", Path::new("p")).is_err());
        assert!(parse_priority("a -1\n", Path::new("p")).is_err());
    }

    #[test]
    fn equivalence_oracle() {
        assert!(equivalent_upto(&f("G !p"), &f("!F p"), 6));
        assert!(equivalent_upto(&f("G (p & q)"), &f("G p & G q"), 6));
        // on finite words both say "p at the last position"
        assert!(equivalent_upto(&f("G F p"), &f("F G p"), 6));
        assert!(!equivalent_upto(&f("G F p"), &f("F p"), 6));
        assert!(!equivalent_upto(&f("G p"), &f("G p | G q"), 6));
    }

    #[test]
    fn eq_len_budget() {
        assert_eq!(eq_len(1, 6), 6);
        assert_eq!(eq_len(3, 6), 6);
        assert!(eq_len(4, 6) < 6);
        assert!(eq_len(12, 6) >= 1);
    }

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert_eq!(digest(&[b"x"]).len(), 64);
    }

    #[test]
    fn depth_choices() {
        assert_eq!(mine_depth(&f("G p")), 2);
        assert_eq!(mine_depth(&preset("response2").unwrap()), 3);
        assert_eq!(synth_depth(&f("F p")), 1);
    }

    #[test]
    fn empty_lengths_give_empty_table() {
        let rep = cmd_eval(&EvalConfig::new(vec!["universality1".into()], vec![])).unwrap();
        assert!(rep.rows.is_empty());
        assert!(cmd_eval(&EvalConfig::new(vec!["nope".into()], vec![5])).is_err());
    }
}
