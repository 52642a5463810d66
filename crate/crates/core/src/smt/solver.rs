//! External solver subprocess.
//!
//! The executable is taken from, in order: an explicit path, the
//! `LTLQM_SOLVER` environment variable, the `solver.path` key of
//! `./ltlqm.toml`, and finally `z3` on `PATH`. Arguments default to
//! `-smt2 -in` and can be replaced through `LTLQM_SOLVER_ARGS`.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use wait_timeout::ChildExt;

use super::sexpr::{parse_model, Model};

pub const ENV_SOLVER: &str = "LTLQM_SOLVER";
pub const ENV_SOLVER_ARGS: &str = "LTLQM_SOLVER_ARGS";
pub const CONFIG_FILE: &str = "ltlqm.toml";

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("no solver found (set {ENV_SOLVER}, solver.path in {CONFIG_FILE}, or install z3)")]
    NotFound,
    #[error("cannot run solver {path}: {source}")]
    Spawn { path: PathBuf, source: std::io::Error },
    #[error("solver exited with status {code:?}: {stderr}")]
    NonZeroExit { code: Option<i32>, stderr: String },
    #[error("unparseable solver output: {0}")]
    Unparseable(String),
    #[error("bad configuration in {CONFIG_FILE}: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub path: PathBuf,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverStatus {
    /// `sat` with the model that follows it.
    Optimal(Model),
    Unsat,
    /// Wall-clock limit reached or the solver answered `unknown`.
    Timeout,
}

fn on_path(name: &str) -> Option<PathBuf> {
    let path = std::env::var_os("PATH")?;
    std::env::split_paths(&path).map(|d| d.join(name)).find(|p| p.is_file())
}

fn from_config_file(dir: &Path) -> Result<Option<PathBuf>, SolverError> {
    let file = dir.join(CONFIG_FILE);
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let doc: toml::Table = text.parse().map_err(|e: toml::de::Error| SolverError::Config(e.to_string()))?;
    Ok(doc
        .get("solver")
        .and_then(|s| s.get("path"))
        .and_then(|p| p.as_str())
        .map(PathBuf::from))
}

impl SolverConfig {
    /// Resolves the solver location; see the module docs for the order.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, SolverError> {
        let args = match std::env::var(ENV_SOLVER_ARGS) {
            Ok(a) => a.split_whitespace().map(String::from).collect(),
            Err(_) => vec!["-smt2".into(), "-in".into()],
        };
        let path = if let Some(p) = explicit {
            p.to_path_buf()
        } else if let Some(p) = std::env::var_os(ENV_SOLVER).filter(|p| !p.is_empty()) {
            PathBuf::from(p)
        } else if let Some(p) = from_config_file(Path::new("."))? {
            p
        } else {
            on_path("z3").ok_or(SolverError::NotFound)?
        };
        if path.components().count() > 1 && !path.exists() {
            return Err(SolverError::NotFound);
        }
        Ok(SolverConfig { path, args })
    }
}

/// Interprets solver stdout.
pub fn interpret(stdout: &str) -> Result<SolverStatus, SolverError> {
    let trimmed = stdout.trim_start();
    let (first, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
    match first {
        "sat" => {
            let model = parse_model(rest).map_err(SolverError::Unparseable)?;
            Ok(SolverStatus::Optimal(model))
        }
        "unsat" => Ok(SolverStatus::Unsat),
        "unknown" | "timeout" => Ok(SolverStatus::Timeout),
        _ => Err(SolverError::Unparseable(trimmed.lines().next().unwrap_or("").to_string())),
    }
}

/// Runs the solver on `script` with a wall-clock limit.
pub fn run_solver(script: &str, cfg: &SolverConfig, timeout: Duration) -> Result<SolverStatus, SolverError> {
    let mut child = Command::new(&cfg.path)
        .args(&cfg.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| SolverError::Spawn { path: cfg.path.clone(), source })?;

    let mut stdin = child.stdin.take().expect("piped stdin");
    let input = script.to_owned();
    let writer = std::thread::spawn(move || {
        // a solver that exits early closes the pipe; that is not our error
        let _ = stdin.write_all(input.as_bytes());
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let mut stderr = child.stderr.take().expect("piped stderr");
    let err_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let status = match child.wait_timeout(timeout).map_err(|source| SolverError::Spawn { path: cfg.path.clone(), source })? {
        Some(s) => s,
        None => {
            let _ = child.kill();
            let _ = child.wait();
            let _ = writer.join();
            let _ = reader.join();
            let _ = err_reader.join();
            return Ok(SolverStatus::Timeout);
        }
    };
    let _ = writer.join();
    let out = reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    match interpret(&out) {
        // z3 exits non-zero after `unsat` because `(get-model)` then fails
        Ok(s @ SolverStatus::Unsat) => Ok(s),
        Ok(s) if status.success() => Ok(s),
        Ok(_) | Err(_) if !status.success() => Err(SolverError::NonZeroExit {
            code: status.code(),
            stderr: if err.trim().is_empty() { out.trim().to_string() } else { err.trim().to_string() },
        }),
        other => other,
    }
}
