use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use ltlqm::comprank::{CompRankConfig, DEFAULT_LEVEL_CAP};
use ltlqm::harness::{self, EvalConfig, EvalMode, HarnessError, RunReport};
use ltlqm::smt::{self, Strategy};
use ltlqm::tracegen::{GenConfig, PRESETS};
use ltlqm::valuation::{parse_rational, ConjScheme, DisjScheme, ValuationParams};

/// Mine GF-fragment LTL specifications from finite traces.
#[derive(Parser)]
#[command(name = "ltlqm", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank formulas by compositional enumeration.
    Mine {
        #[command(flatten)]
        sample: SampleArgs,
        /// Ranking iterations; formulas reach nesting depth depth-1.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Most candidates one level may hold before the search gives up.
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        level_cap: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Synthesize the optimal formula up to a depth with an SMT solver.
    Synth {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Instantiate a pattern optimally, e.g. "G(?x -> F ?y)" or "G(?x <-> phi(1))".
    Match {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generate a sample from a preset or a formula.
    Gen {
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        preset: Option<String>,
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        length: usize,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_pos: PathBuf,
        #[arg(long)]
        out_neg: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Benchmark table over presets, lengths, modes and seeds.
    Eval {
        /// Comma-separated preset names; all when omitted.
        #[arg(long, value_delimiter = ',')]
        presets: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "mine")]
        mode: Vec<EvalMode>,
        /// Fixed depth for every cell; otherwise chosen per generator.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        level_cap: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    pos: PathBuf,
    #[arg(long)]
    neg: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    /// Discount rate, decimal or a/b.
    #[arg(long, default_value = "0.367879")]
    r: String,
    /// Operator penalty, decimal or a/b.
    #[arg(long, default_value = "0.8")]
    delta: String,
    #[arg(long, default_value_t = ConjScheme::Product)]
    conj: ConjScheme,
    #[arg(long, default_value_t = DisjScheme::Mean)]
    disj: DisjScheme,
    /// File of `name weight` lines.
    #[arg(long)]
    priority: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 1000)]
    timeout: u64,
    #[arg(long)]
    solver: Option<PathBuf>,
    /// Ask the solver to maximize directly instead of strengthening a bound.
    #[arg(long)]
    native_optimize: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 20)]
    positives: usize,
    #[arg(long, default_value_t = 1)]
    negatives: usize,
    #[arg(long, default_value_t = 0)]
    noise_vars: usize,
    #[arg(long, default_value_t = 0.0)]
    p_noise: f64,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    json: bool,
    /// Include wall-clock times (reports are then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

impl ParamArgs {
    fn build(&self) -> Result<ValuationParams, HarnessError> {
        let r = parse_rational(&self.r).map_err(|e| HarnessError::Usage(format!("--r: {e}")))?;
        let delta = parse_rational(&self.delta).map_err(|e| HarnessError::Usage(format!("--delta: {e}")))?;
        let p = ValuationParams::new(r, delta)
            .map_err(|e| HarnessError::Usage(e.to_string()))?
            .with_schemes(self.conj, self.disj);
        match &self.priority {
            Some(path) => harness::load_priority(path, p),
            None => Ok(p),
        }
    }
}

impl SolverArgs {
    fn build(&self) -> Result<smt::SynthConfig, HarnessError> {
        let mut cfg = harness::synth_config(self.solver.as_deref(), Duration::from_secs(self.timeout))?;
        if self.native_optimize {
            cfg.strategy = Strategy::Maximize;
        }
        Ok(cfg)
    }
}

fn run(cmd: Cmd) -> Result<(RunReport, bool), HarnessError> {
    Ok(match cmd {
        Cmd::Mine { sample, depth, top, level_cap, params, out } => {
            let p = params.build()?;
            let rc = CompRankConfig { depth, level_cap };
            (harness::cmd_mine(&sample.pos, sample.neg.as_deref(), &rc, &p, top, out.timing)?, out.json)
        }
        Cmd::Synth { sample, depth, params, solver, out } => {
            let p = params.build()?;
            let cfg = solver.build()?;
            (harness::cmd_synth(&sample.pos, sample.neg.as_deref(), depth, &p, &cfg, out.timing)?, out.json)
        }
        Cmd::Match { sample, pattern, params, solver, out } => {
            let p = params.build()?;
            let cfg = solver.build()?;
            (harness::cmd_match(&sample.pos, sample.neg.as_deref(), &pattern, &p, &cfg, out.timing)?, out.json)
        }
        Cmd::Gen { preset, formula, length, gen, seed, out_pos, out_neg, out } => {
            let spec = preset.or(formula).expect("clap enforces one of them");
            let g = harness::generator(&spec)?;
            let cfg = GenConfig::new(g, length, seed)
                .with_counts(gen.positives, gen.negatives)
                .with_noise(gen.noise_vars, gen.p_noise);
            (harness::cmd_gen(&cfg, &out_pos, out_neg.as_deref())?, out.json)
        }
        Cmd::Eval { presets, lengths, mode, depth, level_cap, seeds, workers, gen, params, solver, out } => {
            let presets =
                if presets.is_empty() { PRESETS.iter().map(|(n, _)| n.to_string()).collect() } else { presets };
            let mut cfg = EvalConfig::new(presets, lengths);
            cfg.modes = mode;
            cfg.depth = depth;
            cfg.level_cap = level_cap;
            cfg.seeds = seeds;
            cfg.workers = workers;
            cfg.num_positive = gen.positives;
            cfg.num_negative = gen.negatives;
            cfg.noise_vars = gen.noise_vars;
            cfg.p_noise = gen.p_noise;
            cfg.params = params.build()?;
            cfg.timing = out.timing;
            if cfg.modes.contains(&EvalMode::Synth) {
                cfg.synth = Some(solver.build()?);
            }
            (harness::cmd_eval(&cfg)?, out.json)
        }
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok((rep, json)) => {
            if json {
                println!("{}", rep.to_json());
            } else {
                print!("{}", rep.to_text());
            }
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
