// SPDX-License-Identifier: Apache-2.0

//! `circsq`: squeeze scans, identity checks, classical limits, inequality
//! sweeps and figure data for states on the circle.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circsq_core::experiments::{
    emit_figure_data, scan_squeeze, sweep_inequalities, verify_classical_limits, verify_identities,
    Outcome, RunConfig,
};
use circsq_core::format::fmt_f64;
use circsq_core::state::{
    circular_squeezed_state, coherent_state, momentum_eigenstate, squeezed_state, CircleState,
    PhasePoint, Truncation,
};
use circsq_core::uncertainty::full_report;
use circsq_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "circsq",
    version,
    about = "Coherent and squeezed states on the circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan the uncertainty sum of |l, phi>_s over s and locate its minimum.
    Scan,
    /// Check the exact moment identities on the (l, phi, s) grid.
    Identities,
    /// Compare <J> with l and <U> with e^{i phi} for coherent states.
    Classical,
    /// Seeded sweep of the uncertainty inequalities over random states.
    Sweep,
    /// Write the scan curves and the table of minima into a directory.
    Figures,
    /// Construct one state and dump its coefficients.
    State {
        #[arg(long, value_enum, default_value_t = Kind::Squeezed)]
        kind: Kind,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Coherent,
    Squeezed,
    /// Von Mises packet centered at --phi; --l must be an integer.
    Circular,
    /// Eigenstate of J with eigenvalue --l (an integer).
    Momentum,
}

#[derive(Debug, Args)]
struct Opts {
    #[arg(
        long,
        global = true,
        default_value_t = 1.0,
        allow_negative_numbers = true
    )]
    l: f64,
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    phi: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    s: f64,
    /// Reference squeezing of the momentum measure.
    #[arg(long, global = true, default_value_t = 1.0)]
    s0: f64,
    #[arg(long, global = true, default_value_t = 0.1)]
    s_min: f64,
    #[arg(long, global = true, default_value_t = 4.0)]
    s_max: f64,
    #[arg(long, global = true, default_value_t = 400)]
    steps: usize,
    /// Half-width N of the basis window (automatic if omitted).
    #[arg(long, global = true)]
    n_trunc: Option<usize>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    trials: usize,
    /// Output file, or directory for `figures` (default depends on the command).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Opts {
    fn config(&self) -> RunConfig {
        RunConfig {
            l: self.l,
            phi: self.phi,
            s: self.s,
            s0: self.s0,
            s_min: self.s_min,
            s_max: self.s_max,
            steps: self.steps,
            n_trunc: self.n_trunc,
            tol: self.tol,
            seed: self.seed,
            trials: self.trials,
        }
    }
}

fn default_out(command: &Command) -> &'static str {
    match command {
        Command::Scan => "scan.csv",
        Command::Identities => "identities.csv",
        Command::Classical => "classical.csv",
        Command::Sweep => "sweep.csv",
        Command::Figures => ".",
        Command::State { .. } => "state.csv",
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn finish(mut out: BufWriter<File>) -> Result<(), Error> {
    out.flush()?;
    Ok(())
}

fn status(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Pass => "PASS",
        Outcome::ToleranceFailure => "FAIL (tolerance)",
        Outcome::Counterexample => "FAIL (counterexample)",
        Outcome::UsageError => "usage error",
    }
}

fn build_state(kind: Kind, cfg: &RunConfig) -> Result<CircleState, Error> {
    let truncation = cfg.n_trunc.map_or(Truncation::Auto, Truncation::Fixed);
    match kind {
        Kind::Coherent => coherent_state(PhasePoint::new(cfg.l, cfg.phi)?, truncation),
        Kind::Squeezed => squeezed_state(PhasePoint::new(cfg.l, cfg.phi)?, cfg.s, truncation),
        Kind::Circular => circular_squeezed_state(cfg.phi, cfg.l, cfg.s, truncation),
        Kind::Momentum => {
            if cfg.l.fract() != 0.0 {
                return Err(Error::Domain(format!(
                    "--l must be an integer, got {}",
                    cfg.l
                )));
            }
            let j0 = cfg.l as i64;
            momentum_eigenstate(j0, cfg.n_trunc.unwrap_or(j0.unsigned_abs() as usize + 4))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = cli.opts.config();
    cfg.validate()?;
    let out = cli
        .opts
        .out
        .clone()
        .unwrap_or_else(|| default_out(&cli.command).into());
    let stdout = io::stdout();
    let mut say = stdout.lock();
    let outcome = match &cli.command {
        Command::Scan => {
            let scan = scan_squeeze(&cfg)?;
            let mut file = create(&out)?;
            scan.write_csv(&mut file, &cfg)?;
            finish(file)?;
            writeln!(
                say,
                "scan over s in [{}, {}], {} points, l = {}, s0 = {}",
                cfg.s_min, cfg.s_max, cfg.steps, cfg.l, cfg.s0
            )?;
            writeln!(
                say,
                "minimum: s_min = {}  f_min = {}",
                fmt_f64(scan.minimum.s_min),
                fmt_f64(scan.minimum.f_min)
            )?;
            Outcome::Pass
        }
        Command::Identities => {
            let table = verify_identities(&cfg)?;
            let mut file = create(&out)?;
            table.write_csv(&mut file, &cfg)?;
            finish(file)?;
            writeln!(say, "{} grid points, tolerance {:e}", table.points, cfg.tol)?;
            for row in &table.rows {
                let mark = if row.passed() { "ok  " } else { "FAIL" };
                writeln!(say, "  {mark} {:<26} {}", row.name, fmt_f64(row.worst))?;
            }
            table.outcome()
        }
        Command::Classical => {
            let report = verify_classical_limits(&cfg)?;
            let mut file = create(&out)?;
            report.write_csv(&mut file, &cfg)?;
            finish(file)?;
            writeln!(
                say,
                "max |<J> - l|            = {}",
                fmt_f64(report.max_j_error)
            )?;
            writeln!(
                say,
                "max ||<U>/<U>_1| - 1|    = {}",
                fmt_f64(report.max_u_error)
            )?;
            writeln!(
                say,
                "max phase error          = {}",
                fmt_f64(report.max_phase_error)
            )?;
            writeln!(
                say,
                "|<J> - l| at l in Z/2    = {}",
                fmt_f64(report.exact_j_error)
            )?;
            report.outcome()
        }
        Command::Sweep => {
            let summary = sweep_inequalities(&cfg)?;
            let mut file = create(&out)?;
            summary.write_csv(&mut file, &cfg)?;
            finish(file)?;
            writeln!(
                say,
                "{} random states (seed {}), {} skipped",
                summary.trials, summary.seed, summary.skipped
            )?;
            for row in &summary.rows {
                let mark = if row.violations == 0 { "ok  " } else { "FAIL" };
                writeln!(
                    say,
                    "  {mark} {:<24} min slack {}  violations {}",
                    row.name,
                    fmt_f64(row.min_slack),
                    row.violations
                )?;
            }
            if !summary.counterexamples.is_empty() {
                let dir = out
                    .parent()
                    .filter(|d| !d.as_os_str().is_empty())
                    .unwrap_or(Path::new("."));
                for path in summary.write_counterexamples(dir)? {
                    writeln!(say, "counterexample written to {}", path.display())?;
                }
            }
            summary.outcome()
        }
        Command::Figures => {
            fs::create_dir_all(&out)?;
            let files = emit_figure_data(&cfg, &out)?;
            for path in files.curves.iter().chain([&files.minima]) {
                writeln!(say, "wrote {}", path.display())?;
            }
            let worst = files
                .minimum_rows
                .iter()
                .map(|r| (r.minimum.s_min - r.s0).abs())
                .fold(0.0, f64::max);
            writeln!(
                say,
                "max |s_min - s0| over {} values of s0 = {}",
                files.minimum_rows.len(),
                fmt_f64(worst)
            )?;
            Outcome::Pass
        }
        Command::State { kind } => {
            let state = build_state(*kind, &cfg)?;
            let mut file = create(&out)?;
            state.write_csv(&mut file)?;
            finish(file)?;
            let r = full_report(&state, cfg.s0)?;
            writeln!(
                say,
                "{kind:?} state, N = {}, norm^2 = {}",
                state.n_trunc(),
                fmt_f64(state.norm2())
            )?;
            writeln!(
                say,
                "d2J = {}  d2phi = {}  sum(s0 = {}) = {}",
                fmt_f64(r.d2j),
                fmt_f64(r.d2phi),
                cfg.s0,
                fmt_f64(r.sum)
            )?;
            writeln!(say, "dJ * dphi_legacy = {}", fmt_f64(r.legacy_product()))?;
            Outcome::Pass
        }
    };
    writeln!(say, "{}", status(outcome))?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(Outcome::UsageError.exit_code());
        }
    };
    match run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e @ Error::Domain(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(Outcome::UsageError.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Outcome::ToleranceFailure.exit_code())
        }
    }
}
