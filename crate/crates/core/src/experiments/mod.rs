// SPDX-License-Identifier: Apache-2.0

//! Parameter scans and verification tables behind the `circsq` CLI.
//!
//! Each experiment takes a [`RunConfig`], returns a plain result value, and
//! can write itself as CSV. Grid points and random trials are evaluated in
//! parallel but always merged in input order, so a fixed configuration and
//! seed give byte-identical output.

use std::io::Write;

use crate::error::{Error, Result};
use crate::format::fmt_f64;

pub mod classical;
pub mod figures;
pub mod identities;
pub mod scan;
pub mod sweep;

pub use classical::{verify_classical_limits, ClassicalReport, ClassicalRow};
pub use figures::{emit_figure_data, FigureFiles};
pub use identities::{verify_identities, IdentityTable};
pub use scan::{scan_squeeze, ScanMinimum, ScanResult, ScanRow};
pub use sweep::{sweep_inequalities, Counterexample, InequalityRow, SweepSummary};

/// Process exit status of an experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    ToleranceFailure,
    Counterexample,
    UsageError,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::ToleranceFailure => 1,
            Outcome::Counterexample => 2,
            Outcome::UsageError => 64,
        }
    }
}

/// Flags shared by all experiment commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub l: f64,
    pub phi: f64,
    pub s: f64,
    pub s0: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// Number of grid points in `[s_min, s_max]`.
    pub steps: usize,
    pub n_trunc: Option<usize>,
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            l: 1.0,
            phi: 0.0,
            s: 1.0,
            s0: 1.0,
            s_min: 0.1,
            s_max: 4.0,
            steps: 400,
            n_trunc: None,
            tol: 1e-9,
            seed: 0,
            trials: 10_000,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.l, self.phi, self.s, self.s0, self.s_min, self.s_max, self.tol,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("configuration values must be finite".into()));
        }
        if self.s <= 0.0 || self.s0 <= 0.0 {
            return Err(Error::Domain("--s and --s0 must be positive".into()));
        }
        if self.s_min <= 0.0 || self.s_max <= self.s_min {
            return Err(Error::Domain(format!(
                "need 0 < s_min < s_max, got [{}, {}]",
                self.s_min, self.s_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::Domain(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.tol <= 0.0 {
            return Err(Error::Domain(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.n_trunc == Some(0) {
            return Err(Error::Domain("n_trunc must be at least 1".into()));
        }
        Ok(())
    }

    /// Uniform grid of `steps` points from `s_min` to `s_max` inclusive.
    pub fn s_grid(&self) -> Vec<f64> {
        let h = (self.s_max - self.s_min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.s_min + h * i as f64).collect()
    }

    /// One-line `key=value` echo for CSV comment headers.
    pub fn echo(&self) -> String {
        format!(
            "l={} phi={} s={} s0={} s_min={} s_max={} steps={} n_trunc={} tol={:e} seed={} trials={}",
            self.l,
            self.phi,
            self.s,
            self.s0,
            self.s_min,
            self.s_max,
            self.steps,
            self.n_trunc.map_or_else(|| "auto".to_owned(), |n| n.to_string()),
            self.tol,
            self.seed,
            self.trials,
        )
    }
}

/// Writes `# comment` lines, a header, and rows.
pub(crate) fn write_table<W: Write>(
    mut out: W,
    comments: &[String],
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Name, worst residual, and threshold of one numerical check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.worst <= self.tol
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.name.to_owned(),
            fmt_f64(self.worst),
            fmt_f64(self.tol),
            if self.passed() { "pass" } else { "FAIL" }.to_owned(),
        ]
    }
}

const CHECK_HEADER: [&str; 4] = ["check", "worst_residual", "tolerance", "status"];
