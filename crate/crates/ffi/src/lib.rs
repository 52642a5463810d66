//! C ABI over `ltlqm`.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `*_new`/`*_parse`/`*_from_text` call and released by the matching
//! `*_free`. Functions return an [`LtlqmStatus`]; on failure a message is
//! stored per thread and can be read with [`ltlqm_last_error`].
//!
//! Strings handed out by the library must be released with
//! [`ltlqm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::time::Duration;

use ltlqm::comprank::{comp_rank, CompRankConfig, CompRankError, ScoredFormula};
use ltlqm::formula::{consistent, holds, parse_formula, parse_pattern};
use ltlqm::harness::{sample_from_text, synth_config, HarnessError};
use ltlqm::smt::{constraint_opt, pattern_synth, SynthError, SynthOutcome};
use ltlqm::valuation::{parse_rational, value, value_sample, ConjScheme, DisjScheme};
use ltlqm::{Formula, Prop, Sample, ValuationParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtlqmStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, or an out-of-range argument.
    InvalidArgument = 1,
    /// Formula, pattern or trace text did not parse.
    Parse = 2,
    /// No formula satisfies the constraints.
    Unsat = 3,
    Timeout = 4,
    /// The SMT solver could not be found, crashed, or returned garbage.
    Solver = 5,
    /// A search limit was hit.
    Limit = 6,
    /// A panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtlqmConj {
    Product = 0,
    Min = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtlqmDisj {
    Mean = 0,
    Max = 1,
}

/// Parsed positive and negative traces.
pub struct LtlqmSample(Sample);

pub struct LtlqmFormula(Formula);

/// Valuation parameters: discount, penalty, schemes and priorities.
pub struct LtlqmParams(ValuationParams);

/// Ranked output of the enumerative miner.
pub struct LtlqmRanking(Vec<ScoredFormula>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', "?")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(LtlqmStatus, String);

impl Fail {
    fn arg(msg: impl Into<String>) -> Self {
        Fail(LtlqmStatus::InvalidArgument, msg.into())
    }
}

impl From<HarnessError> for Fail {
    fn from(e: HarnessError) -> Self {
        let status = match &e {
            HarnessError::Sample(_) | HarnessError::Parse(_) | HarnessError::Priority { .. } => LtlqmStatus::Parse,
            HarnessError::Synth(s) => return Fail::from_synth(s, e.to_string()),
            HarnessError::CompRank(_) => LtlqmStatus::Limit,
            _ => LtlqmStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

impl Fail {
    fn from_synth(e: &SynthError, msg: String) -> Self {
        let status = match e {
            SynthError::Pattern(_) => LtlqmStatus::Parse,
            SynthError::DepthTooLarge { .. } | SynthError::TraceTooLong { .. } => LtlqmStatus::Limit,
            SynthError::NoPositives | SynthError::Valuation(_) => LtlqmStatus::InvalidArgument,
            _ => LtlqmStatus::Solver,
        };
        Fail(status, msg)
    }
}

impl From<SynthError> for Fail {
    fn from(e: SynthError) -> Self {
        let msg = e.to_string();
        Fail::from_synth(&e, msg)
    }
}

impl From<CompRankError> for Fail {
    fn from(e: CompRankError) -> Self {
        Fail(LtlqmStatus::Limit, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LtlqmStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LtlqmStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LtlqmStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::arg(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::arg(format!("{what} is not UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::arg(format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::arg(format!("{what} is null")));
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ltlqm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses trace text; `neg` may be null.
///
/// # Safety
/// `pos` and `neg` must be null or nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_sample_from_text(
    pos: *const c_char,
    neg: *const c_char,
    out: *mut *mut LtlqmSample,
) -> LtlqmStatus {
    guard(|| {
        let s = sample_from_text(text(pos, "pos")?, opt_text(neg, "neg")?)?;
        put(out, boxed(LtlqmSample(s)), "out")
    })
}

/// # Safety
/// `s` must be a live sample handle.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_sample_counts(s: *const LtlqmSample, n_pos: *mut usize, n_neg: *mut usize) -> LtlqmStatus {
    guard(|| {
        let s = &get(s, "sample")?.0;
        put(n_pos, s.positives().len(), "n_pos")?;
        put(n_neg, s.negatives().len(), "n_neg")
    })
}

/// # Safety
/// `s` must be null or a sample handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_sample_free(s: *mut LtlqmSample) {
    free(s)
}

/// Parses a formula in the text syntax used by the CLI.
///
/// # Safety
/// `src` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_formula_parse(src: *const c_char, out: *mut *mut LtlqmFormula) -> LtlqmStatus {
    guard(|| {
        let f = parse_formula(text(src, "formula")?).map_err(|e| Fail(LtlqmStatus::Parse, e.to_string()))?;
        put(out, boxed(LtlqmFormula(f)), "out")
    })
}

/// Rewrites into negation normal form over `&`, `|`, `G`, `F`.
///
/// # Safety
/// `f` must be a live formula handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_formula_nnf(f: *const LtlqmFormula, out: *mut *mut LtlqmFormula) -> LtlqmStatus {
    guard(|| {
        let n = get(f, "formula")?.0.to_nnf().map_err(|e| Fail::arg(e.to_string()))?;
        put(out, boxed(LtlqmFormula(n)), "out")
    })
}

/// Canonical text; release with [`ltlqm_string_free`]. Null if `f` is null.
///
/// # Safety
/// `f` must be null or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_formula_to_string(f: *const LtlqmFormula) -> *mut c_char {
    match f.as_ref() {
        Some(f) => CString::new(f.0.to_string()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// Edge depth of the syntax tree; literals have depth 0.
///
/// # Safety
/// `f` must be a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_formula_depth(f: *const LtlqmFormula, out: *mut usize) -> LtlqmStatus {
    guard(|| put(out, get(f, "formula")?.0.depth(), "out"))
}

/// # Safety
/// `f` must be null or a formula handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_formula_free(f: *mut LtlqmFormula) {
    free(f)
}

/// Default parameters.
#[no_mangle]
pub extern "C" fn ltlqm_params_default() -> *mut LtlqmParams {
    boxed(LtlqmParams(ValuationParams::default()))
}

/// Parameters from decimal or `a/b` strings for `r` and `delta`, both in (0, 1).
///
/// # Safety
/// Both strings must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_params_new(
    r: *const c_char,
    delta: *const c_char,
    out: *mut *mut LtlqmParams,
) -> LtlqmStatus {
    guard(|| {
        let r = parse_rational(text(r, "r")?).map_err(Fail::arg)?;
        let d = parse_rational(text(delta, "delta")?).map_err(Fail::arg)?;
        let p = ValuationParams::new(r, d).map_err(|e| Fail::arg(e.to_string()))?;
        put(out, boxed(LtlqmParams(p)), "out")
    })
}

/// # Safety
/// `p` must be a live params handle.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_params_set_schemes(p: *mut LtlqmParams, conj: LtlqmConj, disj: LtlqmDisj) -> LtlqmStatus {
    guard(|| {
        let p = p.as_mut().ok_or_else(|| Fail::arg("params is null"))?;
        let conj = match conj {
            LtlqmConj::Product => ConjScheme::Product,
            LtlqmConj::Min => ConjScheme::Min,
        };
        let disj = match disj {
            LtlqmDisj::Mean => DisjScheme::Mean,
            LtlqmDisj::Max => DisjScheme::Max,
        };
        p.0 = p.0.clone().with_schemes(conj, disj);
        Ok(())
    })
}

/// Sets the leaf weight of proposition `name`; `weight` is a positive
/// decimal or `a/b` string.
///
/// # Safety
/// `p` must be a live params handle; strings must be nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_params_set_priority(
    p: *mut LtlqmParams,
    name: *const c_char,
    weight: *const c_char,
) -> LtlqmStatus {
    guard(|| {
        let p = p.as_mut().ok_or_else(|| Fail::arg("params is null"))?;
        let name = text(name, "name")?;
        if !Prop::is_valid_name(name) {
            return Err(Fail::arg(format!("invalid proposition name {name:?}")));
        }
        let w = parse_rational(text(weight, "weight")?).map_err(Fail::arg)?;
        p.0 = p.0.clone().with_priority(Prop::new(name), w).map_err(|e| Fail::arg(e.to_string()))?;
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a params handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_params_free(p: *mut LtlqmParams) {
    free(p)
}

fn word(s: &Sample, negative: bool, index: usize) -> Result<&ltlqm::Word, Fail> {
    let words = if negative { s.negatives() } else { s.positives() };
    words.get(index).ok_or_else(|| Fail::arg(format!("trace index {index} out of range ({} traces)", words.len())))
}

/// Summed value of an NNF `G`/`F` formula over the positive traces.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_value(
    f: *const LtlqmFormula,
    s: *const LtlqmSample,
    p: *const LtlqmParams,
    out: *mut f64,
) -> LtlqmStatus {
    guard(|| {
        let v = value_sample(&get(f, "formula")?.0, &get(s, "sample")?.0, &get(p, "params")?.0)
            .map_err(|e| Fail::arg(e.to_string()))?;
        put(out, v, "out")
    })
}

/// Value of `f` on one trace at position 1. `negative` selects the
/// negative traces; `index` is 0-based.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_value_trace(
    f: *const LtlqmFormula,
    s: *const LtlqmSample,
    negative: bool,
    index: usize,
    p: *const LtlqmParams,
    out: *mut f64,
) -> LtlqmStatus {
    guard(|| {
        let w = word(&get(s, "sample")?.0, negative, index)?;
        let v = value(&get(f, "formula")?.0, w, &get(p, "params")?.0).map_err(|e| Fail::arg(e.to_string()))?;
        put(out, v, "out")
    })
}

/// Boolean satisfaction at 1-based position `t` of one trace.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_holds(
    f: *const LtlqmFormula,
    s: *const LtlqmSample,
    negative: bool,
    index: usize,
    t: usize,
    out: *mut bool,
) -> LtlqmStatus {
    guard(|| {
        let w = word(&get(s, "sample")?.0, negative, index)?;
        let h = holds(&get(f, "formula")?.0, w, t).map_err(|e| Fail::arg(e.to_string()))?;
        put(out, h, "out")
    })
}

/// True iff `f` holds on every positive and no negative trace.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_consistent(f: *const LtlqmFormula, s: *const LtlqmSample, out: *mut bool) -> LtlqmStatus {
    guard(|| put(out, consistent(&get(f, "formula")?.0, &get(s, "sample")?.0), "out"))
}

/// Enumerative mining up to `depth` rounds.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_mine(
    s: *const LtlqmSample,
    p: *const LtlqmParams,
    depth: usize,
    out: *mut *mut LtlqmRanking,
) -> LtlqmStatus {
    guard(|| {
        let r = comp_rank(&get(s, "sample")?.0, &get(p, "params")?.0, &CompRankConfig::new(depth))?;
        put(out, boxed(LtlqmRanking(r.results)), "out")
    })
}

/// Number of ranked formulas; 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live ranking handle.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_ranking_len(r: *const LtlqmRanking) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

/// Copies out entry `i` (best first). The formula is a new handle.
///
/// # Safety
/// `r` must be a live ranking handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_ranking_get(
    r: *const LtlqmRanking,
    i: usize,
    formula: *mut *mut LtlqmFormula,
    score: *mut f64,
) -> LtlqmStatus {
    guard(|| {
        let r = &get(r, "ranking")?.0;
        let x = r.get(i).ok_or_else(|| Fail::arg(format!("index {i} out of range ({} results)", r.len())))?;
        put(score, x.score, "score")?;
        put(formula, boxed(LtlqmFormula(x.formula.clone())), "formula")
    })
}

/// # Safety
/// `r` must be null or a ranking handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_ranking_free(r: *mut LtlqmRanking) {
    free(r)
}

unsafe fn solve(
    solver: *const c_char,
    timeout_ms: u64,
    formula: *mut *mut LtlqmFormula,
    min_score: *mut f64,
    run: impl FnOnce(&ltlqm::smt::SynthConfig) -> Result<SynthOutcome, Fail>,
) -> Result<(), Fail> {
    if formula.is_null() {
        return Err(Fail::arg("formula is null"));
    }
    let path = opt_text(solver, "solver")?.map(Path::new);
    let cfg = synth_config(path, Duration::from_millis(timeout_ms))?;
    match run(&cfg)? {
        SynthOutcome::Optimal(r) => {
            if !min_score.is_null() {
                min_score.write(r.min_score);
            }
            formula.write(boxed(LtlqmFormula(r.formula)));
            Ok(())
        }
        SynthOutcome::Unsat => Err(Fail(LtlqmStatus::Unsat, "no formula satisfies the constraints".into())),
        SynthOutcome::Timeout => Err(Fail(LtlqmStatus::Timeout, format!("solver timed out after {timeout_ms} ms"))),
    }
}

/// SMT synthesis of the best formula of skeleton depth `depth`. `solver`
/// may be null to use the default lookup; `min_score` may be null.
///
/// # Safety
/// Handles must be live; `formula` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_synth(
    s: *const LtlqmSample,
    p: *const LtlqmParams,
    depth: usize,
    solver: *const c_char,
    timeout_ms: u64,
    formula: *mut *mut LtlqmFormula,
    min_score: *mut f64,
) -> LtlqmStatus {
    guard(|| {
        let (s, p) = (&get(s, "sample")?.0, &get(p, "params")?.0);
        solve(solver, timeout_ms, formula, min_score, |cfg| Ok(constraint_opt(s, depth, p, cfg)?))
    })
}

/// Best instance of `pattern` (holes `?x`, templates `phi(n)`).
///
/// # Safety
/// Handles must be live; strings nul-terminated; `formula` writable.
#[no_mangle]
pub unsafe extern "C" fn ltlqm_match(
    s: *const LtlqmSample,
    p: *const LtlqmParams,
    pattern: *const c_char,
    solver: *const c_char,
    timeout_ms: u64,
    formula: *mut *mut LtlqmFormula,
    min_score: *mut f64,
) -> LtlqmStatus {
    guard(|| {
        let (s, p) = (&get(s, "sample")?.0, &get(p, "params")?.0);
        let pat = parse_pattern(text(pattern, "pattern")?).map_err(|e| Fail(LtlqmStatus::Parse, e.to_string()))?;
        solve(solver, timeout_ms, formula, min_score, |cfg| Ok(pattern_synth(s, &pat, p, cfg)?))
    })
}
