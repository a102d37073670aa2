// SPDX-License-Identifier: Apache-2.0

//! Sum of uncertainties along the squeezed family `|l, φ⟩_s` as a function
//! of `s`, measured with a fixed reference squeezing `s0`.

use std::io::Write;

use rayon::prelude::*;

use super::{write_table, RunConfig};
use crate::error::Result;
use crate::expect::log_expect_exp_j_closed;
use crate::format::fmt_f64;
use crate::optimize::golden_section;
use crate::state::{moment_truncation, squeezed_state, PhasePoint, Truncation};
use crate::uncertainty::{delta2_j_generalized, delta2_phi};

/// Width of the final golden-section bracket around the minimum.
pub const REFINE_XTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub s: f64,
    pub d2j_gen: f64,
    pub d2phi: f64,
    pub sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMinimum {
    pub s_min: f64,
    pub f_min: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub l: f64,
    pub s0: f64,
    /// Ascending in `s`.
    pub rows: Vec<ScanRow>,
    /// Continuous minimum refined from the best grid point.
    pub minimum: ScanMinimum,
}

/// `Δ̃²_{s0}(Ĵ) + Δ²(φ̂)` on `|l, φ⟩_s` from the theta closed forms; the
/// angle term is exactly `s/2`.
pub fn ordinate_closed(l: f64, s: f64, s0: f64) -> Result<f64> {
    let d2j = 0.25 * (log_expect_exp_j_closed(l, s, s0)? + log_expect_exp_j_closed(l, s, -s0)?);
    Ok(d2j + 0.5 * s)
}

/// The same ordinate from a constructed state and direct basis sums.
pub fn scan_row(l: f64, phi: f64, s: f64, s0: f64, n_trunc: Option<usize>) -> Result<ScanRow> {
    let n = n_trunc.unwrap_or_else(|| moment_truncation(l, s, s0));
    let state = squeezed_state(PhasePoint::new(l, phi)?, s, Truncation::Fixed(n))?;
    let d2j_gen = delta2_j_generalized(&state, s0)?;
    let d2phi = delta2_phi(&state)?;
    Ok(ScanRow {
        s,
        d2j_gen,
        d2phi,
        sum: d2j_gen + d2phi,
    })
}

pub fn scan_squeeze(cfg: &RunConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let rows = cfg
        .s_grid()
        .into_par_iter()
        .map(|s| scan_row(cfg.l, cfg.phi, s, cfg.s0, cfg.n_trunc))
        .collect::<Result<Vec<_>>>()?;
    let best = rows
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.sum.total_cmp(&b.1.sum))
        .map(|(i, _)| i)
        .expect("grid has at least two points");
    let lo = if best == 0 {
        cfg.s_min
    } else {
        rows[best - 1].s
    };
    let hi = if best + 1 == rows.len() {
        cfg.s_max
    } else {
        rows[best + 1].s
    };
    let m = golden_section(|s| ordinate_closed(cfg.l, s, cfg.s0), lo, hi, REFINE_XTOL)?;
    Ok(ScanResult {
        l: cfg.l,
        s0: cfg.s0,
        rows,
        minimum: ScanMinimum {
            s_min: m.x,
            f_min: m.fx,
        },
    })
}

impl ScanResult {
    pub const HEADER: [&'static str; 4] = ["s", "d2J_gen", "d2phi", "sum"];

    pub fn write_csv<W: Write>(&self, out: W, cfg: &RunConfig) -> Result<()> {
        let comments = [
            format!("squeeze scan: {}", cfg.echo()),
            format!(
                "minimum: s_min={} f_min={}",
                fmt_f64(self.minimum.s_min),
                fmt_f64(self.minimum.f_min)
            ),
        ];
        let rows = self.rows.iter().map(|r| {
            vec![
                fmt_f64(r.s),
                fmt_f64(r.d2j_gen),
                fmt_f64(r.d2phi),
                fmt_f64(r.sum),
            ]
        });
        write_table(out, &comments, &Self::HEADER, rows)
    }
}
