// SPDX-License-Identifier: Apache-2.0

//! Plot-ready CSV for the squeeze-scan curves and the location of their
//! minima as a function of the reference squeezing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::scan::{scan_squeeze, ScanMinimum};
use super::{write_table, RunConfig};
use crate::error::Result;
use crate::format::fmt_f64;

/// Reference squeezings with a full curve.
pub const CURVE_S0: [f64; 3] = [0.5, 1.0, 1.5];

/// `s0 = 0.20, 0.25, …, 2.00`.
pub fn minimum_s0_grid() -> Vec<f64> {
    (0..=36).map(|k| f64::from(20 + 5 * k) / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimumRow {
    pub s0: f64,
    pub minimum: ScanMinimum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureFiles {
    pub curves: Vec<PathBuf>,
    pub minima: PathBuf,
    pub minimum_rows: Vec<MinimumRow>,
}

pub fn curve_file_name(s0: f64) -> String {
    format!("fig1_s0={s0}.csv")
}

pub const MINIMA_FILE: &str = "fig2.csv";

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Minimum of the scan for every `s0` in `s0s`, other settings from `cfg`.
pub fn minima(cfg: &RunConfig, s0s: &[f64]) -> Result<Vec<MinimumRow>> {
    s0s.par_iter()
        .map(|&s0| {
            let run = RunConfig { s0, ..cfg.clone() };
            Ok(MinimumRow {
                s0,
                minimum: scan_squeeze(&run)?.minimum,
            })
        })
        .collect()
}

pub fn write_minima<W: Write>(out: W, cfg: &RunConfig, rows: &[MinimumRow]) -> Result<()> {
    let comments = [format!("squeeze-scan minima vs s0: {}", cfg.echo())];
    let records = rows.iter().map(|r| {
        vec![
            fmt_f64(r.s0),
            fmt_f64(r.minimum.s_min),
            fmt_f64(r.minimum.f_min),
        ]
    });
    write_table(out, &comments, &["s0", "s_min", "f_min"], records)
}

/// Writes the three curve files and `fig2.csv` into `dir`. The `s0` of
/// `cfg` is ignored.
pub fn emit_figure_data(cfg: &RunConfig, dir: &Path) -> Result<FigureFiles> {
    cfg.validate()?;
    let mut curves = Vec::with_capacity(CURVE_S0.len());
    for s0 in CURVE_S0 {
        let run = RunConfig { s0, ..cfg.clone() };
        let scan = scan_squeeze(&run)?;
        let path = dir.join(curve_file_name(s0));
        let mut out = create(&path)?;
        scan.write_csv(&mut out, &run)?;
        out.flush()?;
        curves.push(path);
    }
    let minimum_rows = minima(cfg, &minimum_s0_grid())?;
    let minima_path = dir.join(MINIMA_FILE);
    let mut out = create(&minima_path)?;
    write_minima(&mut out, cfg, &minimum_rows)?;
    out.flush()?;
    Ok(FigureFiles {
        curves,
        minima: minima_path,
        minimum_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s0_grid() {
        let g = minimum_s0_grid();
        assert_eq!(g.len(), 37);
        assert_eq!(g[0], 0.2);
        assert_eq!(g[16], 1.0);
        assert_eq!(g[36], 2.0);
    }

    #[test]
    fn file_names() {
        assert_eq!(curve_file_name(0.5), "fig1_s0=0.5.csv");
        assert_eq!(curve_file_name(1.0), "fig1_s0=1.csv");
    }

    #[test]
    fn minima_track_s0() {
        let rows = minima(&RunConfig::default(), &[0.2, 1.0, 2.0]).unwrap();
        for r in rows {
            assert!((r.minimum.s_min - r.s0).abs() < 1e-4, "{r:?}");
            assert!((r.minimum.f_min - r.s0).abs() < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            steps: 40,
            ..Default::default()
        };
        let files = emit_figure_data(&cfg, dir.path()).unwrap();
        assert_eq!(files.curves.len(), 3);
        let fig2 = std::fs::read_to_string(&files.minima).unwrap();
        assert!(fig2.starts_with("# "));
        assert!(fig2.contains("\ns0,s_min,f_min\n"));
        assert_eq!(fig2.lines().filter(|l| !l.starts_with('#')).count(), 38);
        let curve = std::fs::read_to_string(&files.curves[1]).unwrap();
        assert!(curve.contains("s,d2J_gen,d2phi,sum"));
    }
}
