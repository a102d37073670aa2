// SPDX-License-Identifier: Apache-2.0

//! Exact identities of the squeezed family checked on a grid of phase-space
//! points and squeezings. Multiplicative identities are compared in log form.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{write_table, CheckRow, Outcome, RunConfig, CHECK_HEADER};
use crate::error::Result;
use crate::expect::{
    expect_u_power, log_expect_exp_j, log_expect_exp_j_closed, log_expect_exp_j_closed_lattice,
    log_norm2_closed, overlap_closed,
};
use crate::state::{moment_truncation, squeezed_state, PhasePoint, Truncation};
use crate::uncertainty::{delta2_j, delta2_j_generalized, delta2_phi};

pub const DEFAULT_L: [f64; 5] = [-1.0, 0.0, 0.37, 1.0, 2.0];
pub const DEFAULT_PHI: [f64; 3] = [0.0, 1.1, std::f64::consts::PI];
pub const DEFAULT_S: [f64; 4] = [0.5, 1.0, 1.5, 2.5];

const CHECK_NAMES: [&str; 9] = [
    "exp_moment_minus",
    "exp_moment_plus",
    "u_squared",
    "moment_product",
    "equal_uncertainties",
    "coherent_half",
    "moment_closed_vs_direct",
    "norm_closed_vs_direct",
    "overlap_closed_vs_direct",
];
const LATTICE_CHECK: &str = "moment_lattice_vs_modular";

/// Worst residual per identity over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityTable {
    pub rows: Vec<CheckRow>,
    pub points: usize,
}

impl IdentityTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn outcome(&self) -> Outcome {
        if self.passed() {
            Outcome::Pass
        } else {
            Outcome::ToleranceFailure
        }
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn write_csv<W: Write>(&self, out: W, cfg: &RunConfig) -> Result<()> {
        let comments = [
            format!("identity checks: {}", cfg.echo()),
            format!("grid points: {}", self.points),
        ];
        write_table(
            out,
            &comments,
            &CHECK_HEADER,
            self.rows.iter().map(CheckRow::record),
        )
    }
}

/// Residuals of every check at one `(l, φ, s)` point, in `CHECK_NAMES` order.
fn residuals_at(l: f64, phi: f64, s: f64, n_trunc: Option<usize>) -> Result<[f64; 9]> {
    let p = PhasePoint::new(l, phi)?;
    let probes = [s, -s, 0.5, -1.0];
    let n = n_trunc.unwrap_or_else(|| moment_truncation(l, s, s.max(1.0)));
    let state = squeezed_state(p, s, Truncation::Fixed(n))?;

    let minus = log_expect_exp_j(&state, s)?;
    let plus = log_expect_exp_j(&state, -s)?;
    let u2 = expect_u_power(&state, 2);
    let u2_exact = Complex64::from_polar((-s).exp(), 2.0 * phi);

    let d2j_gen = delta2_j_generalized(&state, s)?;
    let d2phi = delta2_phi(&state)?;
    let equal = (d2j_gen - 0.5 * s).abs().max((d2phi - 0.5 * s).abs());

    let coherent = squeezed_state(p, 1.0, Truncation::Fixed(moment_truncation(l, 1.0, 1.0)))?;
    let half = (delta2_j(&coherent)? - 0.5)
        .abs()
        .max((delta2_phi(&coherent)? - 0.5).abs());

    let mut moment = 0.0f64;
    for lambda in probes {
        let direct = log_expect_exp_j(&state, lambda)?;
        moment = moment.max((direct - log_expect_exp_j_closed(l, s, lambda)?).abs());
    }

    let norm = (state.norm2().ln() - log_norm2_closed(p, s)?).abs();

    // pair with a partner rotated and shifted in l
    let q = PhasePoint::new(0.5 * l - 0.3, phi + 0.7)?;
    let partner = squeezed_state(q, s, Truncation::Auto)?;
    let closed = overlap_closed(p, q, s)?;
    let overlap = (state.inner_product(&partner) - closed).norm() / closed.norm();

    Ok([
        (minus - (s - 2.0 * l)).abs(),
        (plus - (s + 2.0 * l)).abs(),
        (u2 - u2_exact).norm(),
        (minus + plus + 2.0 * u2.norm().ln()).abs(),
        equal,
        half,
        moment,
        norm,
        overlap,
    ])
}

fn lattice_residual(l: f64, s: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for lambda in [s, -s, 0.5, -1.0] {
        let modular = log_expect_exp_j_closed(l, s, lambda)?;
        let lattice = log_expect_exp_j_closed_lattice(l, s, lambda)?;
        worst = worst.max((modular - lattice).abs());
    }
    Ok(worst)
}

/// Runs every identity over `ls × phis × ss` and keeps the worst residual.
pub fn verify_identities_on(
    cfg: &RunConfig,
    ls: &[f64],
    phis: &[f64],
    ss: &[f64],
) -> Result<IdentityTable> {
    cfg.validate()?;
    let grid: Vec<(f64, f64, f64)> = ls
        .iter()
        .flat_map(|&l| {
            phis.iter()
                .flat_map(move |&phi| ss.iter().map(move |&s| (l, phi, s)))
        })
        .collect();
    let per_point = grid
        .par_iter()
        .map(|&(l, phi, s)| residuals_at(l, phi, s, cfg.n_trunc))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = [0.0f64; 9];
    for r in &per_point {
        for (w, x) in worst.iter_mut().zip(r) {
            // NaN must surface as a failure
            *w = if x.is_nan() { f64::NAN } else { w.max(*x) };
        }
    }
    let mut lattice = 0.0f64;
    for &l in ls {
        for &s in ss {
            lattice = lattice.max(lattice_residual(l, s)?);
        }
    }
    let mut rows: Vec<CheckRow> = CHECK_NAMES
        .iter()
        .zip(worst)
        .map(|(&name, worst)| CheckRow {
            name,
            worst,
            tol: cfg.tol,
        })
        .collect();
    rows.push(CheckRow {
        name: LATTICE_CHECK,
        worst: lattice,
        tol: cfg.tol,
    });
    Ok(IdentityTable {
        rows,
        points: grid.len(),
    })
}

/// [`verify_identities_on`] over the default grid.
pub fn verify_identities(cfg: &RunConfig) -> Result<IdentityTable> {
    verify_identities_on(cfg, &DEFAULT_L, &DEFAULT_PHI, &DEFAULT_S)
}
