mod common;

use std::time::Duration;

use ltlqm::formula::{consistent, parse_formula, parse_pattern};
use ltlqm::harness::sample_from_text;
use ltlqm::smt::sexpr::validate_script;
use ltlqm::smt::{
    build_skeleton, constraint_opt, emit_script, pattern_synth, skeleton_for_pattern, EncodeOptions, Strategy,
    SynthConfig, SynthOutcome, Synthesized,
};
use ltlqm::tracegen::{generate_sample, preset, GenConfig};
use ltlqm::{Sample, ValuationParams};

use common::{min_value, solver};

fn config(secs: u64) -> Option<SynthConfig> {
    match solver() {
        Some(s) => Some(SynthConfig::new(s, Duration::from_secs(secs))),
        None => {
            eprintln!("skipped: no SMT solver found");
            None
        }
    }
}

fn optimal(out: SynthOutcome) -> Synthesized {
    match out {
        SynthOutcome::Optimal(r) => r,
        other => panic!("expected an optimum, got {other:?}"),
    }
}

fn sample(pos: &str, neg: Option<&str>) -> Sample {
    sample_from_text(pos, neg).unwrap()
}

#[test]
fn scripts_are_deterministic_and_well_formed() {
    let s = generate_sample(&GenConfig::new(preset("response1").unwrap(), 8, 2).with_counts(3, 1)).unwrap();
    let ab = ltlqm::sample::alphabet(&s);
    let params = ValuationParams::default();
    for sk in [
        build_skeleton(2, &ab).unwrap(),
        skeleton_for_pattern(&parse_pattern("G(?x -> F ?y)").unwrap(), &ab, 6).unwrap(),
        skeleton_for_pattern(&parse_pattern("G(?x <-> phi(1))").unwrap(), &ab, 6).unwrap(),
    ] {
        let a = emit_script(&sk, &s, &params, EncodeOptions::default()).unwrap();
        let b = emit_script(&sk, &s, &params, EncodeOptions::default()).unwrap();
        assert_eq!(a, b);
        validate_script(&a.text).unwrap();
    }
}

#[test]
fn finds_eventually() {
    let Some(cfg) = config(60) else { return };
    let s = generate_sample(&GenConfig::new(preset("existence1").unwrap(), 10, 4).with_counts(5, 1)).unwrap();
    let params = ValuationParams::default();
    let r = optimal(constraint_opt(&s, 1, &params, &cfg).unwrap());
    assert_eq!(r.formula, parse_formula("F p").unwrap());
    assert!((r.min_score - min_value(&r.formula, s.positives(), &params)).abs() < 1e-9);
}

#[test]
fn negatives_exclude_candidates() {
    let Some(cfg) = config(60) else { return };
    let s = sample("p\np\n--\np\np\np\n", Some("p\nq\n"));
    let r = optimal(constraint_opt(&s, 1, &ValuationParams::default(), &cfg).unwrap());
    assert!(consistent(&r.formula, &s));
    assert_eq!(r.formula, parse_formula("G p").unwrap());
}

#[test]
fn strategies_agree() {
    let Some(mut cfg) = config(60) else { return };
    let s = sample("a\na,b\nb\n--\na\nb\n", Some("b\nb\n"));
    let params = ValuationParams::default();
    let a = optimal(constraint_opt(&s, 1, &params, &cfg).unwrap());
    cfg.strategy = Strategy::Maximize;
    let b = optimal(constraint_opt(&s, 1, &params, &cfg).unwrap());
    assert!((a.min_score - b.min_score).abs() < 1e-9, "{} vs {}", a.formula, b.formula);
}

#[test]
fn impossible_pattern_is_unsat() {
    let Some(cfg) = config(60) else { return };
    let s = sample("p\np\n", None);
    let out = pattern_synth(&s, &parse_pattern("G !?x").unwrap(), &ValuationParams::default(), &cfg).unwrap();
    assert_eq!(out, SynthOutcome::Unsat);
    let s = sample("nil\nnil\n", None);
    let out = pattern_synth(&s, &parse_pattern("F ?x").unwrap(), &ValuationParams::default(), &cfg).unwrap();
    assert_eq!(out, SynthOutcome::Unsat);
}

#[test]
fn sugar_is_restored() {
    let Some(cfg) = config(60) else { return };
    let s = generate_sample(&GenConfig::new(preset("response1").unwrap(), 12, 3).with_counts(6, 1)).unwrap();
    let r = optimal(pattern_synth(&s, &parse_pattern("G(?x -> F ?y)").unwrap(), &ValuationParams::default(), &cfg).unwrap());
    assert_eq!(r.sugared, "G (p -> F s)");
    assert_eq!(r.formula, parse_formula("G(!p | F s)").unwrap());
    assert_eq!(r.mapping.len(), 2);
}

#[test]
fn timeout_is_reported() {
    let Some(cfg) = config(1) else { return };
    let s = generate_sample(
        &GenConfig::new(preset("response2").unwrap(), 120, 1).with_noise(3, 0.5).with_counts(20, 1),
    )
    .unwrap();
    let out = constraint_opt(&s, 3, &ValuationParams::default(), &cfg).unwrap();
    assert_eq!(out, SynthOutcome::Timeout);
}
