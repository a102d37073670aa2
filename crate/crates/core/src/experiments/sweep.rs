// SPDX-License-Identifier: Apache-2.0

//! Seeded property sweep over random envelope states and coherent states.
//!
//! Every check is phrased as a slack that must stay at or above a threshold.
//! Raw slacks are used, without the clamping applied by the public
//! uncertainty measures, so small violations stay visible.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{write_table, Outcome, RunConfig};
use crate::error::Result;
use crate::expect::{expect_u_power, log_expect_exp_j};
use crate::format::fmt_f64;
use crate::state::{coherent_state, CircleState, PhasePoint, Truncation};
use crate::uncertainty::{e2_products, legacy_product, schwarz_terms, EnvelopeSampler};

/// Tolerated shortfall of `Δ²(Ĵ) + Δ²(φ̂)` below 1.
pub const SUM_TOL: f64 = 1e-9;
/// Tolerated shortfall for the exact Schwarz-derived bounds.
pub const MOMENT_TOL: f64 = 1e-12;
/// Tolerated shortfall for the e(2) products.
pub const E2_TOL: f64 = 1e-10;
/// `λ` values for `⟨e^{-2λĴ}⟩⟨e^{2λĴ}⟩ ≥ 1`.
pub const PRODUCT_LAMBDAS: [f64; 2] = [0.3, 1.0];
/// Coherent-state grid over `l ∈ [0, 2]`.
pub const COHERENT_POINTS: usize = 201;

/// Checks on random states, in column order.
const RANDOM_CHECKS: [(&str, f64); 8] = [
    ("sum_relation", -SUM_TOL),
    ("exp_product_0.3", -MOMENT_TOL),
    ("exp_product_1", -MOMENT_TOL),
    ("unitary_bound", -MOMENT_TOL),
    ("e2_J_cos", -E2_TOL),
    ("e2_J_sin", -E2_TOL),
    ("e2_sin_cos", -E2_TOL),
    ("schwarz", -E2_TOL),
];

/// Minimum slack of one inequality over the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityRow {
    pub name: &'static str,
    pub min_slack: f64,
    pub threshold: f64,
    /// A slack equal to the threshold also counts as a violation.
    pub strict: bool,
    /// Number of states below the threshold.
    pub violations: usize,
    /// Trial index (or grid index for coherent checks) of the worst state.
    pub worst_index: usize,
}

impl InequalityRow {
    fn violated(&self, slack: f64) -> bool {
        slack.is_nan() || slack < self.threshold || (self.strict && slack <= self.threshold)
    }

    fn new(name: &'static str, threshold: f64, strict: bool) -> Self {
        Self {
            name,
            min_slack: f64::INFINITY,
            threshold,
            strict,
            violations: 0,
            worst_index: 0,
        }
    }

    fn observe(&mut self, index: usize, slack: f64) {
        if self.violated(slack) {
            self.violations += 1;
        }
        if slack < self.min_slack || slack.is_nan() && !self.min_slack.is_nan() {
            self.min_slack = slack;
            self.worst_index = index;
        }
    }
}

/// A random state that violated at least one inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: u64,
    pub checks: Vec<&'static str>,
    pub state: CircleState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub seed: u64,
    pub trials: usize,
    /// Random states whose sum is infinite (trivially satisfied).
    pub skipped: usize,
    pub rows: Vec<InequalityRow>,
    pub counterexamples: Vec<Counterexample>,
}

impl SweepSummary {
    pub fn outcome(&self) -> Outcome {
        if self.rows.iter().any(|r| r.violations > 0) {
            Outcome::Counterexample
        } else {
            Outcome::Pass
        }
    }

    pub fn row(&self, name: &str) -> Option<&InequalityRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub const HEADER: [&'static str; 6] = [
        "inequality",
        "min_slack",
        "threshold",
        "violations",
        "worst_index",
        "status",
    ];

    pub fn write_csv<W: Write>(&self, out: W, cfg: &RunConfig) -> Result<()> {
        let comments = [
            format!("inequality sweep: {}", cfg.echo()),
            format!(
                "random trials={} skipped={} coherent grid points={COHERENT_POINTS}",
                self.trials, self.skipped
            ),
        ];
        let rows = self.rows.iter().map(|r| {
            vec![
                r.name.to_owned(),
                fmt_f64(r.min_slack),
                fmt_f64(r.threshold),
                r.violations.to_string(),
                r.worst_index.to_string(),
                if r.violations == 0 {
                    "pass"
                } else {
                    "VIOLATED"
                }
                .to_owned(),
            ]
        });
        write_table(out, &comments, &Self::HEADER, rows)
    }

    /// Writes each counterexample as `counterexample_trial=<k>.csv` in `dir`.
    pub fn write_counterexamples(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut paths = Vec::with_capacity(self.counterexamples.len());
        for c in &self.counterexamples {
            let path = dir.join(format!("counterexample_trial={}.csv", c.trial));
            let mut out = BufWriter::new(File::create(&path)?);
            writeln!(
                out,
                "# seed={} trial={} violated={}",
                self.seed,
                c.trial,
                c.checks.join(" ")
            )?;
            c.state.write_csv(&mut out)?;
            out.flush()?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Raw slacks of [`RANDOM_CHECKS`] for one state; `None` for the sum
/// relation when `⟨U²⟩ = 0`.
pub fn random_state_slacks(state: &CircleState) -> Result<[Option<f64>; 8]> {
    let log_plus = log_expect_exp_j(state, -1.0)?;
    let log_minus = log_expect_exp_j(state, 1.0)?;
    let u1 = expect_u_power(state, 1).norm();
    let u2 = expect_u_power(state, 2).norm();
    let sum = if u2 == 0.0 {
        None
    } else {
        Some(0.25 * (log_plus + log_minus) - 0.5 * u2.ln() - 1.0)
    };
    let mut products = [0.0; 2];
    for (p, lambda) in products.iter_mut().zip(PRODUCT_LAMBDAS) {
        *p = log_expect_exp_j(state, lambda)? + log_expect_exp_j(state, -lambda)?;
    }
    let e2 = e2_products(state);
    Ok([
        sum,
        Some(products[0]),
        Some(products[1]),
        Some(1.0 - u1.max(u2).powi(2)),
        Some(e2[0].slack()),
        Some(e2[1].slack()),
        Some(e2[2].slack()),
        Some(schwarz_terms(state).slack()),
    ])
}

pub fn sweep_inequalities(cfg: &RunConfig) -> Result<SweepSummary> {
    cfg.validate()?;
    let sampler = EnvelopeSampler::new(cfg.seed);
    let slacks = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|k| random_state_slacks(&sampler.sample(k)))
        .collect::<Result<Vec<_>>>()?;

    let mut rows: Vec<InequalityRow> = RANDOM_CHECKS
        .iter()
        .map(|&(name, threshold)| InequalityRow::new(name, threshold, false))
        .collect();
    let mut skipped = 0;
    let mut counterexamples = Vec::new();
    for (k, trial) in slacks.iter().enumerate() {
        let mut failed = Vec::new();
        for (row, slack) in rows.iter_mut().zip(trial) {
            match *slack {
                Some(x) => {
                    if row.violated(x) {
                        failed.push(row.name);
                    }
                    row.observe(k, x);
                }
                None => skipped += 1,
            }
        }
        if !failed.is_empty() {
            counterexamples.push(Counterexample {
                trial: k as u64,
                checks: failed,
                state: sampler.sample(k as u64),
            });
        }
    }

    let truncation = cfg.n_trunc.map_or(Truncation::Auto, Truncation::Fixed);
    let h = 2.0 / (COHERENT_POINTS - 1) as f64;
    let coherent = (0..COHERENT_POINTS)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let state = coherent_state(PhasePoint::new(h * i as f64, cfg.phi)?, truncation)?;
            let p = legacy_product(&state);
            let window = (p - 0.5).min(1.0 - p);
            let sum = random_state_slacks(&state)?[0].unwrap_or(f64::INFINITY);
            Ok((window, sum))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut window = InequalityRow::new("coherent_legacy_window", 0.0, true);
    let mut sum = InequalityRow::new("coherent_sum", -SUM_TOL, false);
    for (i, &(w, s)) in coherent.iter().enumerate() {
        window.observe(i, w);
        sum.observe(i, s);
    }
    rows.push(window);
    rows.push(sum);

    Ok(SweepSummary {
        seed: cfg.seed,
        trials: cfg.trials,
        skipped,
        rows,
        counterexamples,
    })
}
