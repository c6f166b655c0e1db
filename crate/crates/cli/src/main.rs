use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tpwave_core::config::RunConfig;
use tpwave_core::halfspace::solve_linear;
use tpwave_core::io::{write_atomic, write_field};
use tpwave_core::kuznetsov::{solve_kuznetsov, IterationStatus};
use tpwave_core::norms::lp_norm;
use tpwave_core::ops::apply_wave_operator;
use tpwave_core::sweep::{run_sweep, sweep_csv};
use tpwave_core::symbols::{marcinkiewicz_check, CutoffSpec, SymbolParams};
use tpwave_core::verify::{run_suite, Suite};
use tpwave_core::{mode_damping_report, Error};

/// Relative residual above which a linear solve counts as an invariant violation.
const RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "tpwave", version, about = "Time-periodic damped wave and Kuznetsov solvers")]
struct Cli {
    /// Worker threads for transforms and sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Linear,
    Kuznetsov,
    Halfspace,
    Multiplier,
    Norms,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the linear damped wave problem.
    SolveLinear(Common),
    /// Solve the Kuznetsov equation by Picard iteration.
    SolveKuznetsov(Common),
    /// Check the Marcinkiewicz products of the smoothed multiplier.
    CheckMultiplier(Common),
    /// Run manufactured-solution suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-frequency damping of the linear solution.
    DampingReport(Common),
    /// Sweep over lambda, period and amplitude.
    Sweep(Common),
}

enum Failure {
    Core(Error),
    NotConverged(IterationStatus),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Io(_)) => 1,
            Failure::Core(Error::GridTooCoarse { .. }) => 4,
            Failure::Core(_) => 2,
            Failure::NotConverged(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => format!("error: {e}"),
            Failure::NotConverged(s) => format!("iteration did not converge: {}", s.as_str()),
            Failure::Invariant(m) => format!("invariant violated: {m}"),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Run {
    cfg: RunConfig,
    base: PathBuf,
    out: PathBuf,
}

impl Run {
    fn load(c: &Common) -> Result<Self, Failure> {
        let cfg = RunConfig::from_path(&c.config).map_err(|e| match e {
            Error::Io(m) => Error::Config(format!("{}: {m}", c.config.display())),
            e => e,
        })?;
        let base = c.config.parent().map(Path::to_path_buf).unwrap_or_default();
        let out = c.out.clone().or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from("tpwave-out"));
        Ok(Self { cfg, base, out })
    }

    fn write_text(&self, name: &str, text: &str) -> Outcome {
        write_atomic(&self.out.join(name), text.as_bytes())?;
        Ok(())
    }

    fn write_summary<T: Serialize>(&self, summary: &T) -> Outcome {
        let text = toml::to_string(summary).map_err(|e| Error::Format(e.to_string()))?;
        print!("{text}");
        self.write_text("summary.toml", &text)
    }
}

#[derive(Serialize)]
struct LinearSummary {
    residual_norm: f64,
    relative_residual: f64,
    trace_error: f64,
    steady_zero_mode_dropped: f64,
}

fn solve_linear_cmd(c: &Common) -> Outcome {
    let run = Run::load(c)?;
    let spec = run.cfg.build_problem(&run.base)?;
    let res = solve_linear(&spec, &run.cfg.linear_options())?;
    let lifted = spec.boundary_ext.as_ref().map_or(0.0, |g| lp_norm(&apply_wave_operator(g, &spec.params), 2.0));
    let scale = (lp_norm(&spec.forcing, 2.0) + lifted).max(f64::MIN_POSITIVE);
    let summary = LinearSummary {
        residual_norm: res.residual_norm,
        relative_residual: res.residual_norm / scale,
        trace_error: res.trace_error,
        steady_zero_mode_dropped: res.steady_zero_mode_dropped,
    };
    if run.cfg.output.dump_fields {
        let d = &res.decomposition;
        write_field(&run.out.join("u_steady.tpwf"), &d.steady)?;
        write_field(&run.out.join("u_periodic.tpwf"), &d.periodic)?;
        write_field(&run.out.join("u.tpwf"), &d.total())?;
    }
    run.write_summary(&summary)?;
    if !(summary.relative_residual <= RESIDUAL_LIMIT) {
        return Err(Failure::Invariant(format!("relative residual {:e}", summary.relative_residual)));
    }
    Ok(())
}

#[derive(Serialize)]
struct KuznetsovSummary {
    status: &'static str,
    iterations: usize,
    final_residual: f64,
    max_contraction: Option<f64>,
    data_scale: f64,
}

fn solve_kuznetsov_cmd(c: &Common) -> Outcome {
    let run = Run::load(c)?;
    let spec = run.cfg.build_problem(&run.base)?;
    let (u, trace) = solve_kuznetsov(&spec, &run.cfg.solver)?;
    run.write_text("trace.csv", &trace.to_csv())?;
    if run.cfg.output.dump_fields {
        write_field(&run.out.join("u_steady.tpwf"), &u.steady)?;
        write_field(&run.out.join("u_periodic.tpwf"), &u.periodic)?;
    }
    run.write_summary(&KuznetsovSummary {
        status: trace.status.as_str(),
        iterations: trace.iterations(),
        final_residual: trace.final_residual(),
        max_contraction: trace.max_ratio(),
        data_scale: trace.data_scale,
    })?;
    match trace.status {
        IterationStatus::Converged => Ok(()),
        s => Err(Failure::NotConverged(s)),
    }
}

fn check_multiplier_cmd(c: &Common) -> Outcome {
    let run = Run::load(c)?;
    let params = SymbolParams::new(run.cfg.model.lambda, run.cfg.grid.period)?;
    let sample = run.cfg.multiplier.unwrap_or_default();
    let report = marcinkiewicz_check(&params, &CutoffSpec::for_period(params.period), &sample)?;
    let csv = report.to_csv();
    print!("{csv}");
    run.write_text("marcinkiewicz.csv", &csv)?;
    let bad: Vec<String> = report.closed_form_violations().iter().map(|p| p.pattern.label()).collect();
    if !bad.is_empty() {
        return Err(Failure::Invariant(format!("closed-form bounds exceeded for {}", bad.join(", "))));
    }
    Ok(())
}

fn verify_cmd(suite: SuiteArg, seed: u64, out: Option<&Path>) -> Outcome {
    let suite = match suite {
        SuiteArg::Linear => Suite::Linear,
        SuiteArg::Kuznetsov => Suite::Kuznetsov,
        SuiteArg::Halfspace => Suite::Halfspace,
        SuiteArg::Multiplier => Suite::Multiplier,
        SuiteArg::Norms => Suite::Norms,
        SuiteArg::All => Suite::All,
    };
    let report = run_suite(suite, seed)?;
    for case in &report.cases {
        println!(
            "{} {}/{}: error {:e} (tolerance {:e})",
            if case.passed { "PASS" } else { "FAIL" },
            case.suite,
            case.name,
            case.error,
            case.tolerance
        );
    }
    if let Some(dir) = out {
        write_atomic(&dir.join("verify.csv"), report.to_csv().as_bytes())?;
    }
    if !report.all_passed() {
        let n = report.cases.iter().filter(|c| !c.passed).count();
        return Err(Failure::Invariant(format!("{n} verification case(s) failed")));
    }
    Ok(())
}

fn damping_cmd(c: &Common) -> Outcome {
    let run = Run::load(c)?;
    let spec = run.cfg.build_problem(&run.base)?;
    let res = solve_linear(&spec, &run.cfg.linear_options())?;
    let table = mode_damping_report(&spec.forcing, &res.decomposition.total(), spec.params.lambda)?;
    let csv = table.to_csv();
    print!("{csv}");
    run.write_text("damping.csv", &csv)?;
    if let Some(r) = table.rows.iter().find(|r| r.ratio > r.envelope * (1.0 + 1e-9)) {
        return Err(Failure::Invariant(format!("|k| index {} exceeds its damping envelope", r.k_index)));
    }
    Ok(())
}

fn sweep_cmd(c: &Common) -> Outcome {
    let run = Run::load(c)?;
    let rows = run_sweep(&run.cfg, &run.base)?;
    let csv = sweep_csv(&rows);
    print!("{csv}");
    run.write_text("sweep.csv", &csv)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match &cli.command {
        Command::SolveLinear(c) => solve_linear_cmd(c),
        Command::SolveKuznetsov(c) => solve_kuznetsov_cmd(c),
        Command::CheckMultiplier(c) => check_multiplier_cmd(c),
        Command::Verify { suite, seed, out } => verify_cmd(*suite, *seed, out.as_deref()),
        Command::DampingReport(c) => damping_cmd(c),
        Command::Sweep(c) => sweep_cmd(c),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
