use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ltlqm_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ltlqm_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn sample(pos: &str, neg: Option<&str>) -> *mut LtlqmSample {
    let (pos, neg) = (c(pos), neg.map(c));
    let mut out = ptr::null_mut();
    let st = unsafe { ltlqm_sample_from_text(pos.as_ptr(), neg.as_ref().map_or(ptr::null(), |n| n.as_ptr()), &mut out) };
    assert_eq!(st, LtlqmStatus::Ok);
    out
}

fn formula(src: &str) -> *mut LtlqmFormula {
    let src = c(src);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ltlqm_formula_parse(src.as_ptr(), &mut out) }, LtlqmStatus::Ok);
    out
}

fn text(f: *const LtlqmFormula) -> String {
    unsafe {
        let p = ltlqm_formula_to_string(f);
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        ltlqm_string_free(p);
        s
    }
}

fn solver() -> Option<PathBuf> {
    let z3 = ltlqm::smt::SolverConfig::resolve(None).ok()?;
    z3.path.is_file().then_some(z3.path)
}

#[test]
fn formulas_round_trip() {
    let f = formula("G(p -> F q)");
    assert_eq!(text(f), "G (!p | F q)");
    let mut n = ptr::null_mut();
    let mut d = 0;
    unsafe {
        assert_eq!(ltlqm_formula_nnf(f, &mut n), LtlqmStatus::Ok);
        assert_eq!(text(n), "G (!p | F q)");
        assert_eq!(ltlqm_formula_depth(n, &mut d), LtlqmStatus::Ok);
        ltlqm_formula_free(n);
        ltlqm_formula_free(f);
    }
    assert_eq!(d, 3);
}

#[test]
fn values_match_closed_form() {
    let s = sample("p\np\np\n--\np\nq\n", Some("q\n"));
    let f = formula("G p");
    let p = ltlqm_params_default();
    let (r, d) = (0.367879, 0.8);
    let (mut v, mut v0, mut v1) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(ltlqm_value_trace(f, s, false, 0, p, &mut v0), LtlqmStatus::Ok);
        assert_eq!(ltlqm_value_trace(f, s, false, 1, p, &mut v1), LtlqmStatus::Ok);
        assert_eq!(ltlqm_value(f, s, p, &mut v), LtlqmStatus::Ok);
    }
    assert!((v0 - d * (1.0 + r + r * r)).abs() < 1e-12);
    assert_eq!(v1, 0.0);
    assert_eq!(v, v0);

    // fifty-fold weight on p scales the leaf
    let (w, name) = (c("50"), c("p"));
    let mut weighted = 0.0;
    unsafe {
        assert_eq!(ltlqm_params_set_priority(p, name.as_ptr(), w.as_ptr()), LtlqmStatus::Ok);
        assert_eq!(ltlqm_value_trace(f, s, false, 0, p, &mut weighted), LtlqmStatus::Ok);
    }
    assert!((weighted - 50.0 * v0).abs() < 1e-9);

    let (mut h, mut ok) = (true, true);
    let (mut np, mut nn) = (0, 0);
    unsafe {
        assert_eq!(ltlqm_sample_counts(s, &mut np, &mut nn), LtlqmStatus::Ok);
        assert_eq!(ltlqm_holds(f, s, false, 1, 2, &mut h), LtlqmStatus::Ok);
        assert_eq!(ltlqm_consistent(f, s, &mut ok), LtlqmStatus::Ok);
        assert_eq!(ltlqm_holds(f, s, true, 3, 1, &mut h), LtlqmStatus::InvalidArgument);
        ltlqm_formula_free(f);
        ltlqm_params_free(p);
        ltlqm_sample_free(s);
    }
    assert_eq!((np, nn), (2, 1));
    assert!(!h);
    assert!(!ok);
}

#[test]
fn params_are_validated() {
    let (half, one, bad) = (c("1/2"), c("1"), c("x"));
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(ltlqm_params_new(half.as_ptr(), one.as_ptr(), &mut p), LtlqmStatus::InvalidArgument);
        assert!(p.is_null());
        assert_eq!(ltlqm_params_new(bad.as_ptr(), half.as_ptr(), &mut p), LtlqmStatus::InvalidArgument);
        assert_eq!(ltlqm_params_new(half.as_ptr(), half.as_ptr(), &mut p), LtlqmStatus::Ok);
        assert_eq!(ltlqm_params_set_schemes(p, LtlqmConj::Min, LtlqmDisj::Max), LtlqmStatus::Ok);
        let neg = c("-2");
        assert_eq!(ltlqm_params_set_priority(p, one.as_ptr(), neg.as_ptr()), LtlqmStatus::InvalidArgument);
        ltlqm_params_free(p);
    }
}

#[test]
fn mining_returns_ranked_handles() {
    let s = sample("p\np,q\np\n--\np\np\n", Some("p\nq\n"));
    let p = ltlqm_params_default();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(ltlqm_mine(s, p, 2, &mut r), LtlqmStatus::Ok);
        let n = ltlqm_ranking_len(r);
        assert!(n > 0);
        let mut prev = f64::INFINITY;
        for i in 0..n {
            let (mut f, mut score) = (ptr::null_mut(), 0.0);
            assert_eq!(ltlqm_ranking_get(r, i, &mut f, &mut score), LtlqmStatus::Ok);
            let mut ok = false;
            ltlqm_consistent(f, s, &mut ok);
            assert!(ok);
            assert!(score <= prev);
            prev = score;
            if i == 0 {
                assert_eq!(text(f), "G p");
            }
            ltlqm_formula_free(f);
        }
        let mut f = ptr::null_mut();
        let mut score = 0.0;
        assert_eq!(ltlqm_ranking_get(r, n, &mut f, &mut score), LtlqmStatus::InvalidArgument);
        ltlqm_ranking_free(r);

        assert_eq!(ltlqm_mine(s, p, 6, &mut r), LtlqmStatus::Limit);
        ltlqm_params_free(p);
        ltlqm_sample_free(s);
    }
}

#[test]
fn errors_set_the_message() {
    let mut f = ptr::null_mut();
    let mut s = ptr::null_mut();
    let src = c("G (p");
    let empty = c("p\n\np\n");
    unsafe {
        assert_eq!(ltlqm_formula_parse(src.as_ptr(), &mut f), LtlqmStatus::Parse);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(ltlqm_sample_from_text(empty.as_ptr(), ptr::null(), &mut s), LtlqmStatus::Parse);
        assert!(last_error().contains("line 2"), "{}", last_error());
        assert_eq!(ltlqm_formula_parse(ptr::null(), &mut f), LtlqmStatus::InvalidArgument);
        assert!(last_error().contains("null"));

        // success clears it
        let ok = c("F p");
        assert_eq!(ltlqm_formula_parse(ok.as_ptr(), &mut f), LtlqmStatus::Ok);
        assert!(ltlqm_last_error().is_null());
        ltlqm_formula_free(f);

        let mut d = 0;
        assert_eq!(ltlqm_formula_depth(ptr::null(), &mut d), LtlqmStatus::InvalidArgument);
        assert!(ltlqm_formula_to_string(ptr::null()).is_null());
        assert_eq!(ltlqm_ranking_len(ptr::null()), 0);
        // freeing null is a no-op
        ltlqm_formula_free(ptr::null_mut());
        ltlqm_sample_free(ptr::null_mut());
        ltlqm_string_free(ptr::null_mut::<c_char>());
    }
}

#[test]
fn synthesis_through_the_solver() {
    let Some(z3) = solver() else {
        eprintln!("skipped: no SMT solver found");
        return;
    };
    let z3 = c(z3.to_str().unwrap());
    let s = sample("p\np\n--\np\np\np\n", Some("p\nq\n"));
    let p = ltlqm_params_default();
    let (mut f, mut min) = (ptr::null_mut(), 0.0);
    unsafe {
        assert_eq!(ltlqm_synth(s, p, 1, z3.as_ptr(), 60_000, &mut f, &mut min), LtlqmStatus::Ok);
        assert_eq!(text(f), "G p");
        let mut v = 0.0;
        ltlqm_value_trace(f, s, false, 0, p, &mut v);
        assert!((min - v).abs() < 1e-9, "shortest positive attains the minimum");
        ltlqm_formula_free(f);

        let pat = c("G ?x");
        assert_eq!(ltlqm_match(s, p, pat.as_ptr(), ptr::null(), 60_000, &mut f, ptr::null_mut()), LtlqmStatus::Ok);
        assert_eq!(text(f), "G p");
        ltlqm_formula_free(f);

        let both = sample("p,q\np,q\n", None);
        let pat = c("G !?x");
        assert_eq!(ltlqm_match(both, p, pat.as_ptr(), z3.as_ptr(), 60_000, &mut f, ptr::null_mut()), LtlqmStatus::Unsat);
        let pat = c("G X ?x");
        assert_eq!(ltlqm_match(s, p, pat.as_ptr(), z3.as_ptr(), 60_000, &mut f, ptr::null_mut()), LtlqmStatus::Parse);
        let missing = c("/nonexistent/z3");
        assert_eq!(ltlqm_synth(s, p, 1, missing.as_ptr(), 1000, &mut f, ptr::null_mut()), LtlqmStatus::Solver);
        ltlqm_params_free(p);
        ltlqm_sample_free(s);
        ltlqm_sample_free(both);
    }
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/ltlqm.h")).unwrap();
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

/// Builds the C smoke program against the header and the shared library.
#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipped: no C compiler");
        return;
    }
    // test binaries link the rlib; the cdylib needs its own build
    let st = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "--profile", "test", "-p", "ltlqm-ffi", "--lib"])
        .status()
        .unwrap();
    assert!(st.success());
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("smoke");
    let st = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(crate_dir().join("include"))
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-o")
        .arg(&out)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lltlqm_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .status()
        .unwrap();
    assert!(st.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("G p "));
}
