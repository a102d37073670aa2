// SPDX-License-Identifier: Apache-2.0

//! Expectation values in the angular-momentum basis.
//!
//! Every function divides by the squared norm of the state it is given, so
//! unnormalized states can be passed directly. Exponential moments of `Ĵ`
//! are accumulated in log space because the tilted weights `e^{-2λj}|c_j|²`
//! span many orders of magnitude for strongly squeezed states.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{log_theta3, log_theta3_imag, theta3};
use crate::state::{CircleState, PhasePoint};

/// Tolerance handed to the theta routines by the closed forms.
pub const THETA_TOL: f64 = 1e-15;

/// Highest order accepted by [`moments_j`].
pub const MAX_MOMENT_ORDER: usize = 8;

/// Highest order accepted by [`cumulants_j`].
pub const MAX_CUMULANT_ORDER: usize = 8;

/// Exponent scale, power of `U`, and moment order for a batch of
/// expectation queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRequest {
    pub lambda: f64,
    pub power: i64,
    pub order: usize,
}

impl MomentRequest {
    pub fn new(lambda: f64, power: i64, order: usize) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda = {lambda} is not finite")));
        }
        check_order(order, MAX_MOMENT_ORDER)?;
        Ok(Self {
            lambda,
            power,
            order,
        })
    }
}

fn check_order(order: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&order) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "order must lie in 1..={max}, got {order}"
        )))
    }
}

/// `ln Σ_j e^{w_j}` over the finite entries of `w`.
fn log_sum_exp(w: impl Iterator<Item = f64> + Clone) -> f64 {
    let top = w.clone().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + w.map(|x| (x - top).exp()).sum::<f64>().ln()
}

/// `ln ⟨e^{-2λĴ}⟩` by direct summation over the basis.
pub fn log_expect_exp_j(state: &CircleState, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda = {lambda} is not finite")));
    }
    let log_w: Vec<(f64, f64)> = state
        .iter()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(j, c)| (c.norm_sqr().ln(), j as f64))
        .collect();
    let tilted = log_sum_exp(log_w.iter().map(|&(lw, j)| lw - 2.0 * lambda * j));
    let norm = log_sum_exp(log_w.iter().map(|&(lw, _)| lw));
    Ok(tilted - norm)
}

/// `⟨e^{-2λĴ}⟩ = Σ e^{-2λj}|c_j|² / Σ |c_j|²`.
pub fn expect_exp_j(state: &CircleState, lambda: f64) -> Result<f64> {
    let log = log_expect_exp_j(state, lambda)?;
    let value = log.exp();
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Range(format!(
            "⟨exp(-2λJ)⟩ out of range at λ = {lambda} (log = {log})"
        )))
    }
}

fn check_closed_args(l: f64, s: f64, lambda: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain(format!(
            "squeezing must be positive, got {s}"
        )));
    }
    if !(l.is_finite() && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "non-finite l = {l} or lambda = {lambda}"
        )));
    }
    Ok(())
}

/// Closed form of `ln ⟨e^{-2λĴ}⟩` in the squeezed state `|l, φ⟩_s`:
///
/// ```text
/// (λ² - 2lλ)/s + ln θ₃((l-λ)/s | iπ/s) - ln θ₃(l/s | iπ/s)
/// ```
pub fn log_expect_exp_j_closed(l: f64, s: f64, lambda: f64) -> Result<f64> {
    check_closed_args(l, s, lambda)?;
    let dual = PI * PI / s;
    let gauss = (lambda * lambda - 2.0 * l * lambda) / s;
    Ok(
        gauss + log_theta3((l - lambda) / s, dual, THETA_TOL)?
            - log_theta3(l / s, dual, THETA_TOL)?,
    )
}

/// The same moment from the nome `e^{-s}` side: ratio of the lattice sums
/// `Σ e^{2(l-λ)j - sj²}` and `Σ e^{2lj - sj²}`.
pub fn log_expect_exp_j_closed_lattice(l: f64, s: f64, lambda: f64) -> Result<f64> {
    check_closed_args(l, s, lambda)?;
    Ok(log_theta3_imag(l - lambda, s, THETA_TOL)? - log_theta3_imag(l, s, THETA_TOL)?)
}

pub fn expect_exp_j_closed(l: f64, s: f64, lambda: f64) -> Result<f64> {
    let log = log_expect_exp_j_closed(l, s, lambda)?;
    let value = log.exp();
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Range(format!(
            "closed-form moment out of range (log = {log})"
        )))
    }
}

/// `ln ⟨l,φ|l,φ⟩_s = ln θ₃(il/π | is/π)`.
pub fn log_norm2_closed(p: PhasePoint, s: f64) -> Result<f64> {
    log_theta3_imag(p.l(), s, THETA_TOL)
}

/// `_s⟨a|b⟩_s = θ₃((φ_a - φ_b)/2π - i(l_a + l_b)/2π | is/π)`.
pub fn overlap_closed(a: PhasePoint, b: PhasePoint, s: f64) -> Result<Complex64> {
    let v = Complex64::new(
        (a.phi() - b.phi()) / (2.0 * PI),
        -(a.l() + b.l()) / (2.0 * PI),
    );
    theta3(v, s, THETA_TOL)
}

/// `⟨Uⁿ⟩ = Σ_j conj(c_{j+n}) c_j / Σ |c_j|²`.
pub fn expect_u_power(state: &CircleState, n: i64) -> Complex64 {
    let scale = state.max_abs().recip();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (j, c) in state.iter() {
        let c = c * scale;
        num += (state.coeff(j + n) * scale).conj() * c;
        den += c.norm_sqr();
    }
    num / den
}

/// First and second moments of `cos φ̂ = (U + U†)/2`, `sin φ̂ = (U - U†)/2i`
/// and the standard deviation of `Ĵ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigStats {
    pub cos_mean: f64,
    pub sin_mean: f64,
    pub cos_var: f64,
    pub sin_var: f64,
    pub j_std: f64,
}

/// Trigonometric statistics from `⟨U⟩`, `⟨U²⟩` and the variance of `Ĵ`.
///
/// Uses `UU† = U†U = 1`, which holds up to the (negligible) edge weight of a
/// properly truncated state.
pub fn expect_trig(state: &CircleState) -> TrigStats {
    let u1 = expect_u_power(state, 1);
    let u2 = expect_u_power(state, 2);
    // ⟨cos²⟩ = (2 + ⟨U²⟩ + ⟨U†²⟩)/4, ⟨sin²⟩ = (2 - ⟨U²⟩ - ⟨U†²⟩)/4
    let cos_sq = 0.5 * (1.0 + u2.re);
    let sin_sq = 0.5 * (1.0 - u2.re);
    let j_var = variance_j(state);
    TrigStats {
        cos_mean: u1.re,
        sin_mean: u1.im,
        cos_var: (cos_sq - u1.re * u1.re).max(0.0),
        sin_var: (sin_sq - u1.im * u1.im).max(0.0),
        j_std: j_var.sqrt(),
    }
}

/// Probability weights `|c_j|² / Σ|c|²` paired with `j`.
fn distribution(state: &CircleState) -> Vec<(f64, f64)> {
    let scale = state.max_abs().recip();
    let weights: Vec<(f64, f64)> = state
        .iter()
        .map(|(j, c)| (j as f64, (c * scale).norm_sqr()))
        .collect();
    let total: f64 = weights.iter().map(|&(_, w)| w).sum();
    weights.into_iter().map(|(j, w)| (j, w / total)).collect()
}

pub fn mean_j(state: &CircleState) -> f64 {
    distribution(state).iter().map(|&(j, p)| j * p).sum()
}

pub fn variance_j(state: &CircleState) -> f64 {
    let dist = distribution(state);
    let mean: f64 = dist.iter().map(|&(j, p)| j * p).sum();
    dist.iter().map(|&(j, p)| p * (j - mean).powi(2)).sum()
}

/// Raw moments `⟨Ĵᵏ⟩` for `k = 1 ..= order`; entry `k - 1` holds order `k`.
pub fn moments_j(state: &CircleState, order: usize) -> Result<Vec<f64>> {
    check_order(order, MAX_MOMENT_ORDER)?;
    let dist = distribution(state);
    Ok((1..=order as i32)
        .map(|k| dist.iter().map(|&(j, p)| p * j.powi(k)).sum())
        .collect())
}

/// Cumulants `⟨⟨Ĵᵏ⟩⟩` for `k = 1 ..= order`; entry `k - 1` holds order `k`.
///
/// Built from central moments with the recursion
/// `κ_n = μ_n - Σ_{k=1}^{n-1} C(n-1, k-1) κ_k μ_{n-k}` (with `μ_1 = 0`) and
/// `κ_1 = ⟨Ĵ⟩`, which avoids the cancellation of the raw-moment form when
/// the mean is large.
pub fn cumulants_j(state: &CircleState, order: usize) -> Result<Vec<f64>> {
    check_order(order, MAX_CUMULANT_ORDER)?;
    let dist = distribution(state);
    let mean: f64 = dist.iter().map(|&(j, p)| j * p).sum();
    let central: Vec<f64> = (0..=order as i32)
        .map(|k| dist.iter().map(|&(j, p)| p * (j - mean).powi(k)).sum())
        .collect();
    Ok(cumulants_from_moments(&central, mean))
}

/// Moment-to-cumulant recursion. `moments[k]` is the `k`-th moment of a
/// centered distribution (`moments[0] = 1`, `moments[1] = 0`).
fn cumulants_from_moments(moments: &[f64], mean: f64) -> Vec<f64> {
    let order = moments.len() - 1;
    let mut kappa = vec![0.0; order + 1];
    for n in 1..=order {
        let mut acc = moments[n];
        for k in 1..n {
            acc -= binomial(n - 1, k - 1) * kappa[k] * moments[n - k];
        }
        kappa[n] = acc;
    }
    kappa[1] = mean;
    kappa.remove(0);
    kappa
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficient of `κ_n` in `¼ ln(⟨e^{-2Ĵ}⟩⟨e^{2Ĵ}⟩) = Σ_{n even} 2^{n-1}/n! κ_n`:
/// 1, 1/3, 2/45, 1/315 for `n` = 2, 4, 6, 8. Zero for odd `n`.
pub fn cumulant_series_coefficient(n: usize) -> f64 {
    if n == 0 || n % 2 == 1 {
        return 0.0;
    }
    (1..=n).fold(0.5, |acc, k| acc * 2.0 / k as f64)
}

/// Partial sums of the cumulant series for `Δ²(Ĵ)`: `terms = 1` is the
/// variance, `2` adds `κ₄/3`, `3` adds `2κ₆/45`.
pub fn cumulant_uncertainty_approx(state: &CircleState, terms: usize) -> Result<f64> {
    if !(1..=3).contains(&terms) {
        return Err(Error::Domain(format!(
            "terms must lie in 1..=3, got {terms}"
        )));
    }
    let kappa = cumulants_j(state, 2 * terms)?;
    Ok((1..=terms)
        .map(|i| cumulant_series_coefficient(2 * i) * kappa[2 * i - 1])
        .sum())
}
