//! Command-line front end. Parsing lives here so commands can be driven from
//! tests; the binary only writes the rendered output and maps errors to exit codes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::classical::{
    concatenated_classical_search, evaluate_strategy, exhaustive_search, optimal_distribution, pruned_search,
    ClassicalStrategy, EncodingFilter, MarginalConstraint, SearchReport, SharedDistribution,
};
use crate::error::{RacError, Result};
use crate::evaluation::EvaluationResult;
use crate::optimize::{
    best_bell_diagonal, crossover_analysis, crossover_to_csv, discord_does_not_order_efficiency,
    discord_efficiency_table, rows_to_csv, OptimizerSettings, StateFamilyConstraint,
};
use crate::qstate::{werner, BellDiagonalSpec, StateDocument, TwoQubitState};
use crate::quantum_rac::{
    canonical_protocol, concatenated_pmin_formula, concatenated_pmin_recursive, evaluate, prepare_and_measure,
    prepare_and_measure_pmin, QuantumRacProtocol,
};
use crate::reproduce::{q_grid, reproduce_paper, ReproduceSettings};

/// Off-diagonal correlations above this trigger a warning for canonical codes.
pub const OFF_DIAGONAL_WARN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "rac-lab", version, about = "Random access codes with finite shared randomness")]
pub struct Cli {
    /// JSON file with run settings; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, env = "RAC_LAB_THREADS")]
    pub workers: Option<usize>,
    /// Slack for bound checks reported by the searches.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal classical n→1 code: exhaustive (n=2), pruned (n=3) or sampled concatenation (n=4).
    ClassicalSearch {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=4))]
        n: u8,
        #[arg(long, default_value = "none")]
        constraint: MarginalConstraint,
        /// Spot checks (n=3) or sampled codes (n=4).
        #[arg(long)]
        samples: Option<u64>,
        /// Restrict n=2 to encodings that reuse a function.
        #[arg(long)]
        duplicate_only: bool,
    },
    /// Evaluates one classical strategy (defaults to the optimal 2→1 code).
    ClassicalEval {
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Shared distribution as p00,p01,p10,p11; omitted means LP-optimal.
        #[arg(long)]
        distribution: Option<String>,
        #[arg(long, default_value = "none")]
        constraint: MarginalConstraint,
    },
    /// Exact success table of a quantum code on a shared two-qubit state.
    QuantumEval {
        #[command(flatten)]
        state: StateSource,
        #[command(flatten)]
        protocol: ProtocolSource,
    },
    /// Best Bell-diagonal state for the canonical n→1 code.
    OptimizeSeparable {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        grid_step: Option<f64>,
        #[arg(long)]
        refine_tol: Option<f64>,
        /// Optimize over all valid Bell-diagonal states.
        #[arg(long)]
        ignore_separability: bool,
    },
    /// Werner-assisted 2→1 code against the separable optimum.
    Crossover {
        #[arg(long, default_value_t = 0.01)]
        q_step: f64,
    },
    /// Discord against efficiency for Werner states and the separable optimum.
    DiscordTable {
        #[arg(long, default_value_t = 9)]
        samples: usize,
    },
    /// Efficiency of m-fold concatenated 2→1 codes.
    Concatenate {
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 10)]
        m_max: u32,
    },
    /// Prepare-and-measure 2→1 code with noisy qubits.
    PrepareMeasure {
        /// Single noise value; omitted sweeps q over [0, 1].
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        q_step: f64,
    },
    /// Recomputes every headline number and reports pass/fail per claim.
    ReproducePaper {
        /// Samples for the concatenated classical search.
        #[arg(long)]
        samples: Option<u64>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// JSON state file: full Bloch form, {"werner": q} or {"bell_diagonal": [e1, e2, e3]}.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub werner: Option<f64>,
    /// e1,e2,e3
    #[arg(long, allow_hyphen_values = true)]
    pub bell_diagonal: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ProtocolSource {
    #[arg(long)]
    pub protocol: Option<PathBuf>,
    /// Canonical code for n = 2 or 3 built from the state's diagonal correlations.
    #[arg(long)]
    pub canonical: Option<usize>,
}

/// Run settings, loadable from a JSON file. Every field is optional there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub workers: usize,
    pub tolerance: f64,
    pub grid_step: f64,
    pub refine_tol: f64,
    /// Sampled concatenated codes.
    pub samples: u64,
    /// LP spot checks for n = 3.
    pub spot_checks: u64,
    pub property_cases: u64,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let r = ReproduceSettings::default();
        let o = OptimizerSettings::default();
        Self {
            seed: r.seed,
            workers: 0,
            tolerance: 1e-9,
            grid_step: o.grid_step,
            refine_tol: o.refine_tol,
            samples: r.concatenated_samples,
            spot_checks: r.spot_checks,
            property_cases: r.property_cases,
            format: None,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tolerance", self.tolerance), ("grid_step", self.grid_step), ("refine_tol", self.refine_tol)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(RacError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.grid_step > 1.0 {
            return Err(RacError::Config(format!("grid_step must be at most 1, got {}", self.grid_step)));
        }
        if self.samples == 0 || self.property_cases == 0 {
            return Err(RacError::Config("sample counts must be positive".into()));
        }
        Ok(())
    }

    fn optimizer(&self) -> OptimizerSettings {
        OptimizerSettings { grid_step: self.grid_step, refine_tol: self.refine_tol, workers: self.workers }
    }
}

impl Cli {
    /// Config file values overridden by explicit flags.
    pub fn resolve_config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        if self.output.is_some() {
            cfg.output.clone_from(&self.output);
        }
        if let Command::OptimizeSeparable { grid_step, refine_tol, .. } = &self.command {
            if let Some(g) = grid_step {
                cfg.grid_step = *g;
            }
            if let Some(r) = refine_tol {
                cfg.refine_tol = *r;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Exit code when `reproduce-paper` completes but a claim fails.
pub const CLAIM_FAILED_EXIT: i32 = 4;

/// Rendered command output plus any warnings for stderr.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub warnings: Vec<String>,
    /// Set when a reproduction claim failed.
    pub failed: bool,
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| RacError::Config(format!("{what}: {e}")))?;
    parts.try_into().map_err(|v: Vec<f64>| {
        RacError::Config(format!("{what}: expected {N} comma-separated numbers, got {}", v.len()))
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serialization of plain data is infallible")
}

fn render_evaluation(r: &EvaluationResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv | OutputFormat::Table => r.to_csv(),
    }
}

fn render_search(
    r: &SearchReport,
    format: OutputFormat,
    tolerance: f64,
    bound: Option<f64>,
    out: &mut Outcome,
) -> String {
    if let Some(b) = bound {
        if r.best_p_min > b + tolerance {
            out.warnings.push(format!("best p_min {} exceeds the bound {b} by more than {tolerance:e}", r.best_p_min));
        }
    }
    match format {
        OutputFormat::Json => r.to_json(),
        OutputFormat::Table => r.to_table(),
        OutputFormat::Csv => format!(
            "n,constraint,strategies_examined,strategies_pruned,best_p_min\n{},{},{},{},{:.17}\n",
            r.n, r.constraint, r.strategies_examined, r.strategies_pruned, r.best_p_min
        ),
    }
}

fn load_state(src: &StateSource) -> Result<TwoQubitState> {
    if let Some(path) = &src.state {
        StateDocument::from_json(&std::fs::read_to_string(path)?)?.to_state()
    } else if let Some(q) = src.werner {
        Ok(werner(q)?.to_state())
    } else if let Some(text) = &src.bell_diagonal {
        let spec = BellDiagonalSpec::from_array(parse_floats::<3>(text, "--bell-diagonal")?);
        spec.check_valid()?;
        Ok(spec.to_state())
    } else {
        Err(RacError::Config("a state source is required".into()))
    }
}

/// Executes the parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.resolve_config()?;
    let mut out = Outcome::default();
    let fmt = |default| cfg.format.unwrap_or(default);

    out.text = match &cli.command {
        Command::ClassicalSearch { n, constraint, samples, duplicate_only } => {
            let (report, bound) = match n {
                2 => {
                    let filter = if *duplicate_only { EncodingFilter::DuplicateOnly } else { EncodingFilter::All };
                    let bound = (*duplicate_only || *constraint == MarginalConstraint::BobMixed).then_some(0.5);
                    (exhaustive_search(2, *constraint, filter, cfg.workers)?, bound)
                }
                3 => (pruned_search(3, samples.unwrap_or(cfg.spot_checks), cfg.seed, cfg.workers)?, Some(0.5)),
                _ => (concatenated_classical_search(samples.unwrap_or(cfg.samples), cfg.seed, cfg.workers)?, Some(0.5)),
            };
            if *n != 2 && *constraint != MarginalConstraint::None {
                out.warnings.push(format!("--constraint is ignored for n = {n}"));
            }
            render_search(&report, fmt(OutputFormat::Table), cfg.tolerance, bound, &mut out)
        }
        Command::ClassicalEval { strategy, distribution, constraint } => {
            let strategy = match strategy {
                Some(p) => ClassicalStrategy::from_json(&std::fs::read_to_string(p)?)?,
                None => ClassicalStrategy::table1(),
            };
            let dist = match distribution {
                Some(text) => SharedDistribution::new(parse_floats::<4>(text, "--distribution")?)?,
                None => optimal_distribution(&strategy, *constraint).distribution,
            };
            let result = evaluate_strategy(&strategy, &dist);
            match fmt(OutputFormat::Csv) {
                OutputFormat::Json => to_json(&serde_json::json!({
                    "strategy": strategy,
                    "distribution": dist,
                    "evaluation": result,
                })),
                f => render_evaluation(&result, f),
            }
        }
        Command::QuantumEval { state, protocol } => {
            let st = load_state(state)?;
            let proto = if let Some(path) = &protocol.protocol {
                QuantumRacProtocol::from_json(&std::fs::read_to_string(path)?)?
            } else {
                let n = protocol.canonical.expect("clap enforces one protocol source");
                let off = st.off_diagonal_max();
                if off > OFF_DIAGONAL_WARN {
                    out.warnings.push(format!(
                        "correlation matrix has off-diagonal entries up to {off:e}; the canonical code uses only its diagonal"
                    ));
                }
                canonical_protocol(n, st.diagonal())?
            };
            render_evaluation(&evaluate(&proto, &st)?, fmt(OutputFormat::Csv))
        }
        Command::OptimizeSeparable { n, ignore_separability, .. } => {
            let region =
                if *ignore_separability { StateFamilyConstraint::VALID } else { StateFamilyConstraint::SEPARABLE };
            let r = best_bell_diagonal(*n, region, &cfg.optimizer())?;
            match fmt(OutputFormat::Json) {
                OutputFormat::Json => to_json(&r),
                _ => {
                    let [e1, e2, e3] = r.spec.to_array();
                    format!(
                        "n,e1,e2,e3,p_min,discord,separable\n{},{e1:.12},{e2:.12},{e3:.12},{:.17},{:.17},{}\n",
                        r.n, r.p_min, r.discord, r.separable
                    )
                }
            }
        }
        Command::Crossover { q_step } => {
            if !(*q_step > 0.0 && *q_step <= 1.0) {
                return Err(RacError::Config(format!("--q-step must lie in (0, 1], got {q_step}")));
            }
            let points = crossover_analysis(&q_grid(*q_step))?;
            match fmt(OutputFormat::Csv) {
                OutputFormat::Json => to_json(&points),
                _ => crossover_to_csv(&points),
            }
        }
        Command::DiscordTable { samples } => {
            let rows = discord_efficiency_table(*samples)?;
            if !discord_does_not_order_efficiency(&rows) {
                out.warnings.push("discord ordering matches efficiency ordering for these rows".into());
            }
            match fmt(OutputFormat::Csv) {
                OutputFormat::Json => to_json(&rows),
                _ => rows_to_csv(&rows),
            }
        }
        Command::Concatenate { d, m_max } => {
            let base = concatenated_pmin_formula(*d, 1)?;
            let mut rows = Vec::new();
            for m in 1..=*m_max {
                rows.push((m, concatenated_pmin_formula(*d, m)?, concatenated_pmin_recursive(base, m)?));
            }
            match fmt(OutputFormat::Csv) {
                OutputFormat::Json => to_json(
                    &rows
                        .iter()
                        .map(|(m, f, r)| serde_json::json!({"m": m, "formula": f, "recursive": r}))
                        .collect::<Vec<_>>(),
                ),
                _ => {
                    let mut s = String::from("m,formula,recursive\n");
                    for (m, f, r) in rows {
                        let _ = writeln!(s, "{m},{f:.17},{r:.17}");
                    }
                    s
                }
            }
        }
        Command::PrepareMeasure { q, q_step } => match q {
            Some(q) => render_evaluation(&prepare_and_measure(*q)?, fmt(OutputFormat::Csv)),
            None => {
                if !(*q_step > 0.0 && *q_step <= 1.0) {
                    return Err(RacError::Config(format!("--q-step must lie in (0, 1], got {q_step}")));
                }
                let rows = q_grid(*q_step)
                    .into_iter()
                    .map(|q| Ok((q, prepare_and_measure_pmin(q)?)))
                    .collect::<Result<Vec<_>>>()?;
                match fmt(OutputFormat::Csv) {
                    OutputFormat::Json => {
                        to_json(&rows.iter().map(|(q, p)| serde_json::json!({"q": q, "p_min": p})).collect::<Vec<_>>())
                    }
                    _ => {
                        let mut s = String::from("q,p_min\n");
                        for (q, p) in rows {
                            let _ = writeln!(s, "{q},{p:.17}");
                        }
                        s
                    }
                }
            }
        },
        Command::ReproducePaper { samples } => {
            let settings = ReproduceSettings {
                seed: cfg.seed,
                workers: cfg.workers,
                concatenated_samples: samples.unwrap_or(cfg.samples),
                spot_checks: cfg.spot_checks,
                property_cases: cfg.property_cases,
            };
            let report = reproduce_paper(&settings)?;
            if !report.pass {
                out.warnings.push("one or more claims failed".into());
                out.failed = true;
            }
            match fmt(OutputFormat::Table) {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Table => report.to_table(),
            }
        }
    };
    Ok(out)
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&cli).and_then(|outcome| {
        for w in &outcome.warnings {
            eprintln!("warning: {w}");
        }
        let target = cli.resolve_config()?.output;
        match target {
            Some(path) => std::fs::write(path, &outcome.text)?,
            None => print!("{}", outcome.text),
        }
        Ok(outcome.failed)
    });
    match result {
        Ok(false) => 0,
        Ok(true) => CLAIM_FAILED_EXIT,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("rac-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn config_rejects_unknown_fields_and_bad_tolerances() {
        assert!(matches!(ExperimentConfig::from_json(r#"{"seed": 1, "bogus": 2}"#), Err(RacError::Json(_))));
        assert!(matches!(ExperimentConfig::from_json(r#"{"tolerance": 0}"#), Err(RacError::Config(_))));
        assert_eq!(ExperimentConfig::from_json(r#"{"seed": 7}"#).unwrap().seed, 7);
    }

    #[test]
    fn flags_override_defaults() {
        let cli = parse(&["--seed", "9", "optimize-separable", "--grid-step", "0.05"]);
        let cfg = cli.resolve_config().unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.grid_step, 0.05);
    }

    #[test]
    fn quantum_eval_on_werner() {
        let out = run(&parse(&["quantum-eval", "--werner", "1", "--canonical", "2"])).unwrap();
        let last = out.text.lines().last().unwrap();
        let p: f64 = last.strip_prefix("p_min,").unwrap().parse().unwrap();
        assert!((p - 0.5 * (1.0 + 1.0 / 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn negative_bell_diagonal_values_parse() {
        let out = run(&parse(&["quantum-eval", "--bell-diagonal", "-0.5,0.5,0.5", "--canonical", "3"])).unwrap();
        assert!(out.text.starts_with("x,i,probability"));
    }

    #[test]
    fn degenerate_canonical_code_is_a_domain_error() {
        let err = run(&parse(&["quantum-eval", "--bell-diagonal", "0,0.5,0", "--canonical", "3"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn concatenate_table() {
        let out = run(&parse(&["concatenate", "--d", "1", "--m-max", "3"])).unwrap();
        assert_eq!(out.text.lines().count(), 4);
    }

    #[test]
    fn float_lists() {
        assert_eq!(parse_floats::<3>("1, -2,3", "x").unwrap(), [1.0, -2.0, 3.0]);
        assert!(parse_floats::<3>("1,2", "x").is_err());
        assert!(parse_floats::<3>("1,a,2", "x").is_err());
    }
}
