// SPDX-License-Identifier: Apache-2.0

//! Jacobi theta-3 and modified Bessel functions of the first kind.
//!
//! The theta function follows the convention
//!
//! ```text
//! θ₃(v | τ) = Σ_{n=-∞}^{∞} q^{n²} e^{2πi v n},   q = e^{iπτ}
//! ```
//!
//! restricted to the imaginary axis `τ = i t / π`, so that the nome is the
//! real number `q = e^{-t}` in `(0, 1)`. Every routine here is parameterized
//! by `t` rather than by `τ`.
//!
//! For `t ≥ 1` the defining series is summed directly around its dominant
//! term. For `t < 1` the Jacobi imaginary transformation
//!
//! ```text
//! θ₃(v | τ) = (-iτ)^{-1/2} e^{-iπv²/τ} θ₃(v/τ | -1/τ)
//! ```
//!
//! maps the sum onto nome `e^{-π²/t}`, which keeps the number of retained
//! terms small across the whole range.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on the Bessel power series length. Arguments used in this
/// crate stay well below the point where this matters (x ≲ 50).
const BESSEL_MAX_TERMS: usize = 500;

/// Validated arguments of θ₃ on the imaginary τ-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgs {
    v: Complex64,
    t: f64,
}

impl ThetaArgs {
    pub fn new(v: Complex64, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Domain(format!("theta3 requires t > 0, got {t}")));
        }
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Domain(format!("theta3 argument is not finite: {v}")));
        }
        Ok(Self { v, t })
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The nome `q = e^{-t}`.
    pub fn nome(&self) -> f64 {
        (-self.t).exp()
    }

    pub fn eval(&self, tol: f64) -> Result<Complex64> {
        check_tol(tol)?;
        let value = if self.t >= 1.0 {
            direct_sum(self.v, self.t, tol)
        } else {
            modular_sum(self.v, self.t, tol)
        };
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::Range(format!(
                "theta3 overflow at v = {}, t = {}",
                self.v, self.t
            )))
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if tol < f64::EPSILON {
        return Err(Error::Precision { tol });
    }
    Ok(())
}

/// Half-width `M` of the summation window for nome `e^{-t}`: terms with
/// `|n - n*| > M` around the dominant index `n*` are below `tol` relative to
/// the dominant term.
pub fn truncation_index(t: f64, tol: f64) -> usize {
    ((1.0 / tol).ln() / t).sqrt().ceil() as usize + 2
}

/// `Σ_n e^{-t n²} e^{2πi v n}` summed around its largest term.
fn direct_sum(v: Complex64, t: f64, tol: f64) -> Complex64 {
    let m = truncation_index(t, tol) as i64;
    // periodicity in Re v
    let x = v.re - v.re.round();
    let y = v.im;
    if y == 0.0 {
        let mut acc = 0.0;
        // smallest terms first
        for n in (1..=m).rev() {
            let nf = n as f64;
            acc += 2.0 * (-t * nf * nf).exp() * (2.0 * PI * x * nf).cos();
        }
        return Complex64::new(1.0 + acc, 0.0);
    }
    let center = (-PI * y / t).round() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in (center - m)..=(center + m) {
        let nf = n as f64;
        let re = -t * nf * nf - 2.0 * PI * y * nf;
        let im = 2.0 * PI * x * nf;
        acc += Complex64::from_polar(re.exp(), im);
    }
    acc
}

/// Same sum after the imaginary transformation:
/// `sqrt(π/t) Σ_m exp(-(π²/t)(m - v)²)`.
fn modular_sum(v: Complex64, t: f64, tol: f64) -> Complex64 {
    let dual = PI * PI / t;
    let m = truncation_index(dual, tol) as i64;
    let x = v.re - v.re.round();
    let y = v.im;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -m..=m {
        let d = k as f64 - x;
        let re = -dual * (d * d - y * y);
        let im = 2.0 * dual * y * d;
        acc += Complex64::from_polar(re.exp(), im);
    }
    acc * (PI / t).sqrt()
}

/// θ₃(v | i t/π) to absolute tolerance `tol` (relative to the dominant term
/// when `v` has an imaginary part).
pub fn theta3(v: Complex64, t: f64, tol: f64) -> Result<Complex64> {
    ThetaArgs::new(v, t)?.eval(tol)
}

/// `ln θ₃(v | i t/π)` for real `v`, where θ₃ is real and strictly positive.
pub fn log_theta3(v: f64, t: f64, tol: f64) -> Result<f64> {
    let value = theta3(Complex64::new(v, 0.0), t, tol)?;
    if value.re <= 0.0 {
        return Err(Error::Consistency(format!(
            "theta3({v}, {t}) = {} is not positive",
            value.re
        )));
    }
    Ok(value.re.ln())
}

/// `ln Σ_n e^{-t n² + 2 y n}`, i.e. `ln θ₃(i y/π | i t/π)`.
///
/// The Gaussian factor `e^{y²/t}` is pulled out analytically, so the result
/// stays finite for shifts whose individual terms would overflow.
pub fn log_theta3_imag(y: f64, t: f64, tol: f64) -> Result<f64> {
    ThetaArgs::new(Complex64::new(0.0, y), t)?;
    check_tol(tol)?;
    let center = y / t;
    let lattice = if t >= 1.0 {
        let m = truncation_index(t, tol) as i64;
        let offset = center.round() - center;
        (-m..=m)
            .map(|k| {
                let d = k as f64 + offset;
                (-t * d * d).exp()
            })
            .sum::<f64>()
    } else {
        // Σ_n e^{-t(n-c)²} = sqrt(π/t) θ₃(c | iπ/t)
        (PI / t).sqrt() * theta3(Complex64::new(center, 0.0), PI * PI / t, tol)?.re
    };
    Ok(y * y / t + lattice.ln())
}

/// Modified Bessel function `I_n(x)` from its ascending power series.
///
/// Valid for moderate arguments (the series needs roughly `x` terms); no
/// asymptotic branch is provided.
pub fn bessel_i(n: u32, x: f64, tol: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!("bessel_i requires x >= 0, got {x}")));
    }
    check_tol(tol)?;
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let quarter_sq = half * half;
    let mut sum = term;
    for k in 1..BESSEL_MAX_TERMS {
        let kf = k as f64;
        let ratio = quarter_sq / (kf * (kf + f64::from(n)));
        term *= ratio;
        sum += term;
        // once the ratio drops below 1/2 the tail is bounded by the last term
        if ratio < 0.5 && term < tol && term <= f64::EPSILON * sum {
            return Ok(sum);
        }
    }
    Err(Error::Range(format!(
        "bessel_i({n}, {x}) did not converge in {BESSEL_MAX_TERMS} terms"
    )))
}
