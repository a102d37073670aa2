// SPDX-License-Identifier: Apache-2.0

//! Uncertainty measures for states on the circle.
//!
//! The momentum measure is built from exponential moments,
//!
//! ```text
//! Δ²(Ĵ)       = ¼ ln(⟨e^{-2Ĵ}⟩⟨e^{2Ĵ}⟩)
//! Δ̃²_{s0}(Ĵ)  = ¼ ln(⟨e^{-2s0 Ĵ}⟩⟨e^{2s0 Ĵ}⟩)
//! ```
//!
//! and the angle measure from the second power of `U = e^{iφ̂}`,
//! `Δ²(φ̂) = -½ ln|⟨U²⟩|`. The angle measure does not depend on `s0`.
//! Both are nonnegative for every state and both equal `s/2` on the squeezed
//! state `|ξ⟩_s` (measured at `s0 = s`).
//!
//! The older dispersion `Δ(φ̂) = sqrt((1 - |⟨U⟩|²)/|⟨U⟩|²)` and the e(2)
//! products `ΔĴ·Δcos φ̂`, `ΔĴ·Δsin φ̂`, `Δsin φ̂·Δcos φ̂` are reported
//! alongside for comparison.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::expect::{expect_trig, expect_u_power, log_expect_exp_j, mean_j, variance_j};
use crate::format::fmt_f64;
use crate::state::CircleState;

/// Negative values down to this magnitude are floating-point noise and are
/// reported as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!(
            "{what} = {value:e} is negative"
        )))
    }
}

/// `Δ²(Ĵ) = ¼ ln(⟨e^{-2Ĵ}⟩⟨e^{2Ĵ}⟩)`.
pub fn delta2_j(state: &CircleState) -> Result<f64> {
    delta2_j_generalized(state, 1.0)
}

/// `Δ̃²_{s0}(Ĵ) = ¼ ln(⟨e^{-2s0Ĵ}⟩⟨e^{2s0Ĵ}⟩)`.
pub fn delta2_j_generalized(state: &CircleState, s0: f64) -> Result<f64> {
    if !(s0.is_finite() && s0 > 0.0) {
        return Err(Error::Domain(format!(
            "reference squeezing must be positive, got {s0}"
        )));
    }
    let value = 0.25 * (log_expect_exp_j(state, s0)? + log_expect_exp_j(state, -s0)?);
    if !value.is_finite() {
        return Err(Error::Range(format!(
            "exponential moments overflow at s0 = {s0}"
        )));
    }
    clamp_nonnegative(value, "momentum uncertainty")
}

/// `Δ²(φ̂) = ¼ ln(1/|⟨U²⟩|²)`; `+∞` when `⟨U²⟩` vanishes.
pub fn delta2_phi(state: &CircleState) -> Result<f64> {
    let modulus = expect_u_power(state, 2).norm();
    if modulus == 0.0 {
        return Ok(f64::INFINITY);
    }
    clamp_nonnegative(-0.5 * modulus.ln(), "angle uncertainty")
}

/// `Δ(φ̂) = sqrt((1 - |⟨U⟩|²)/|⟨U⟩|²)`; `+∞` when `⟨U⟩` vanishes.
pub fn delta_phi_legacy(state: &CircleState) -> f64 {
    let u2 = expect_u_power(state, 1).norm_sqr();
    if u2 == 0.0 {
        f64::INFINITY
    } else {
        ((1.0 - u2) / u2).max(0.0).sqrt()
    }
}

/// Left and right side of one e(2) uncertainty product inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E2Pair {
    pub left: f64,
    pub right: f64,
}

impl E2Pair {
    pub fn slack(&self) -> f64 {
        self.left - self.right
    }
}

/// `(ΔĴ Δcos, ½|⟨sin⟩|)`, `(ΔĴ Δsin, ½|⟨cos⟩|)`, `(Δsin Δcos, 0)` with ħ = 1.
pub fn e2_products(state: &CircleState) -> [E2Pair; 3] {
    let t = expect_trig(state);
    let (dcos, dsin) = (t.cos_var.sqrt(), t.sin_var.sqrt());
    [
        E2Pair {
            left: t.j_std * dcos,
            right: 0.5 * t.sin_mean.abs(),
        },
        E2Pair {
            left: t.j_std * dsin,
            right: 0.5 * t.cos_mean.abs(),
        },
        E2Pair {
            left: dsin * dcos,
            right: 0.0,
        },
    ]
}

/// Both sides of `⟨A†A + AA†⟩⟨B†B + BB†⟩ ≥ |⟨A†B - BA†⟩|²` for
/// `A = Ĵ - ⟨Ĵ⟩`, `B = U - ⟨U⟩`, evaluated by applying the operators to the
/// state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzTerms {
    pub lhs: f64,
    pub rhs: f64,
}

impl SchwarzTerms {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn schwarz_terms(state: &CircleState) -> SchwarzTerms {
    let psi = state
        .normalize()
        .expect("constructed states have positive norm");
    let mean_j = mean_j(&psi);
    let mean_u = expect_u_power(&psi, 1);
    let u = psi.apply_u().state;
    let ud = psi.apply_u_dagger().state;
    let n = psi.n_trunc() as i64;
    let idx = -n..=n;
    // A ψ, B ψ, B† ψ
    let a: Vec<Complex64> = idx
        .clone()
        .map(|j| psi.coeff(j) * (j as f64 - mean_j))
        .collect();
    let b: Vec<Complex64> = idx
        .clone()
        .map(|j| u.coeff(j) - mean_u * psi.coeff(j))
        .collect();
    let bd: Vec<Complex64> = idx
        .map(|j| ud.coeff(j) - mean_u.conj() * psi.coeff(j))
        .collect();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
    };
    let norm = |x: &[Complex64]| -> f64 { x.iter().map(|c| c.norm_sqr()).sum() };
    // ⟨A†A + AA†⟩ = 2‖Aψ‖² for Hermitian A
    let aa = 2.0 * norm(&a);
    let bb = norm(&b) + norm(&bd);
    // ⟨ψ|A B|ψ⟩ - ⟨ψ|B A|ψ⟩ = ⟨Aψ|Bψ⟩ - ⟨B†ψ|Aψ⟩
    let comm = dot(&a, &b) - dot(&bd, &a);
    SchwarzTerms {
        lhs: aa * bb,
        rhs: comm.norm_sqr(),
    }
}

/// All measures evaluated on one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub s0: f64,
    pub d2j: f64,
    pub d2phi: f64,
    pub d2j_gen: f64,
    pub d_phi_legacy: f64,
    /// Standard deviation of `Ĵ`.
    pub dj: f64,
    /// `d2j_gen + d2phi`.
    pub sum: f64,
    pub e2: [E2Pair; 3],
}

impl UncertaintyReport {
    pub const CSV_HEADER: [&'static str; 11] = [
        "d2J",
        "d2phi",
        "d2J_gen",
        "d_phi_legacy",
        "sum",
        "dJ_dcos",
        "half_abs_sin",
        "dJ_dsin",
        "half_abs_cos",
        "dsin_dcos",
        "zero",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        let mut row = vec![
            fmt_f64(self.d2j),
            fmt_f64(self.d2phi),
            fmt_f64(self.d2j_gen),
            fmt_f64(self.d_phi_legacy),
            fmt_f64(self.sum),
        ];
        for pair in &self.e2 {
            row.push(fmt_f64(pair.left));
            row.push(fmt_f64(pair.right));
        }
        row
    }

    /// `ΔĴ · Δ(φ̂)` with the older angle dispersion.
    pub fn legacy_product(&self) -> f64 {
        self.dj * self.d_phi_legacy
    }
}

pub fn full_report(state: &CircleState, s0: f64) -> Result<UncertaintyReport> {
    let d2j = delta2_j(state)?;
    let d2j_gen = delta2_j_generalized(state, s0)?;
    let d2phi = delta2_phi(state)?;
    Ok(UncertaintyReport {
        s0,
        d2j,
        d2phi,
        d2j_gen,
        d_phi_legacy: delta_phi_legacy(state),
        dj: variance_j(state).sqrt(),
        sum: d2j_gen + d2phi,
        e2: e2_products(state),
    })
}

/// `ΔĴ · Δ(φ̂)` for the older angle dispersion.
pub fn legacy_product(state: &CircleState) -> f64 {
    variance_j(state).sqrt() * delta_phi_legacy(state)
}

/// Seeded generator of random states with a Gaussian envelope,
/// `c_j = g_j e^{-j²/(2σ²)}`, `g_j` standard complex normal and
/// `σ ~ U[0.5, 3]`. The envelope keeps `⟨e^{±2Ĵ}⟩` finite and insensitive to
/// the truncation.
///
/// Trial `k` always draws from stream `k` of the seed, so parallel and serial
/// sweeps see the same states.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeSampler {
    seed: u64,
}

impl EnvelopeSampler {
    pub const SIGMA_MIN: f64 = 0.5;
    pub const SIGMA_MAX: f64 = 3.0;

    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn sample(&self, trial: u64) -> CircleState {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        let sigma = rng.random_range(Self::SIGMA_MIN..=Self::SIGMA_MAX);
        // envelope down to 1e-16 at the edge
        let n_trunc = (sigma * (2.0 * 16.0 * std::f64::consts::LN_10).sqrt()).ceil() as usize + 4;
        let n = n_trunc as i64;
        let coeffs = (-n..=n)
            .map(|j| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let env = (-((j * j) as f64) / (2.0 * sigma * sigma)).exp();
                Complex64::new(re, im) * (FRAC_1_SQRT_2 * env)
            })
            .collect();
        CircleState::from_coeffs(n_trunc, coeffs).expect("gaussian draws are finite and nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expect::log_expect_exp_j_closed;
    use crate::state::{
        circular_squeezed_state, coherent_state, moment_truncation, momentum_eigenstate,
        squeezed_state, PhasePoint, Truncation,
    };
    use proptest::prelude::*;

    fn squeezed(l: f64, phi: f64, s: f64, s0: f64) -> CircleState {
        let n = moment_truncation(l, s, s0.max(1.0));
        squeezed_state(PhasePoint::new(l, phi).unwrap(), s, Truncation::Fixed(n)).unwrap()
    }

    fn real_state(n_trunc: usize, values: &[f64]) -> CircleState {
        CircleState::from_coeffs(
            n_trunc,
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn coherent_measures_are_one_half() {
        for &l in &[-1.0, 0.0, 0.37, 2.0] {
            for &phi in &[0.0, 1.1, 4.0] {
                let st = squeezed(l, phi, 1.0, 1.0);
                assert!((delta2_j(&st).unwrap() - 0.5).abs() < 1e-12);
                assert!((delta2_phi(&st).unwrap() - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenstate_measures() {
        let st = momentum_eigenstate(2, 6).unwrap();
        assert_eq!(delta2_j(&st).unwrap(), 0.0);
        assert_eq!(delta2_phi(&st).unwrap(), f64::INFINITY);
        assert_eq!(delta_phi_legacy(&st), f64::INFINITY);
        let report = full_report(&st, 1.0).unwrap();
        assert_eq!(report.sum, f64::INFINITY);
        assert_eq!(report.csv_record()[1], "inf");
    }

    #[test]
    fn two_level_superposition() {
        let st = real_state(1, &[0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        let e = std::f64::consts::E;
        let want = 0.25 * (((1.0 + e * e) / 2.0) * ((1.0 + 1.0 / (e * e)) / 2.0)).ln();
        assert!((want - 0.216_89).abs() < 1e-5);
        assert!((delta2_j(&st).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn squeezed_angle_measure() {
        for &s in &[0.3, 0.5, 1.7, 3.0] {
            let st = squeezed(0.4, 2.0, s, 1.0);
            assert!((delta2_phi(&st).unwrap() - s / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generalized_measure() {
        for &s in &[0.5, 1.0, 1.5, 2.5] {
            let st = squeezed(0.37, 0.2, s, s);
            assert!((delta2_j_generalized(&st, s).unwrap() - s / 2.0).abs() < 1e-10);
        }
        let st = squeezed(0.8, 0.0, 1.3, 1.0);
        assert_eq!(
            delta2_j_generalized(&st, 1.0).unwrap(),
            delta2_j(&st).unwrap()
        );
        assert!(delta2_j_generalized(&st, 0.0).is_err());

        // s0²/(2s) plus the theta-ratio correction
        let (l, s, s0) = (1.0, 2.4, 1.2);
        let st = squeezed(l, 0.0, s, s0);
        let closed = 0.25
            * (log_expect_exp_j_closed(l, s, s0).unwrap()
                + log_expect_exp_j_closed(l, s, -s0).unwrap());
        let direct = delta2_j_generalized(&st, s0).unwrap();
        assert!((direct - closed).abs() < 1e-10);
        // the correction is set by the dual nome e^{-π²/s} ≈ 1.6e-2
        assert!((closed - s0 * s0 / (2.0 * s)).abs() < 0.05);
    }

    #[test]
    fn legacy_dispersion() {
        let st = real_state(1, &[1.0, std::f64::consts::SQRT_2, 1.0]);
        assert!((expect_u_power(&st, 1).norm_sqr() - 0.5).abs() < 1e-15);
        assert!((delta_phi_legacy(&st) - 1.0).abs() < 1e-15);

        let cs = coherent_state(PhasePoint::new(0.0, 0.0).unwrap(), Truncation::Auto).unwrap();
        let product = legacy_product(&cs);
        assert!(product > 0.5 && product < 1.0, "{product}");
        assert_eq!(full_report(&cs, 1.0).unwrap().legacy_product(), product);
    }

    #[test]
    fn circular_squeezed_saturates_second_e2_product() {
        for &l in &[0.0, 1.0, 3.0] {
            for &s in &[0.5, 1.0, 2.0] {
                let st = circular_squeezed_state(0.0, l, s, Truncation::Auto).unwrap();
                let [a, b, _] = e2_products(&st);
                assert!(b.slack().abs() < 1e-8, "l={l} s={s} {b:?}");
                assert!(a.slack() > 1e-3, "l={l} s={s} {a:?}");
            }
        }
    }

    #[test]
    fn reports_sum_relations() {
        let cs = squeezed(0.37, 1.0, 1.0, 1.0);
        assert!((full_report(&cs, 1.0).unwrap().sum - 1.0).abs() < 1e-12);
        for &s0 in &[0.5, 1.5, 2.5] {
            let st = squeezed(-1.0, 2.0, s0, s0);
            assert!((full_report(&st, s0).unwrap().sum - s0).abs() < 1e-10);
        }
    }

    #[test]
    fn report_csv_layout() {
        let cs = squeezed(0.0, 0.0, 1.0, 1.0);
        let report = full_report(&cs, 1.0).unwrap();
        let row = report.csv_record();
        assert_eq!(row.len(), UncertaintyReport::CSV_HEADER.len());
        assert_eq!(row[0].parse::<f64>().unwrap(), report.d2j);
        assert_eq!(row[4].parse::<f64>().unwrap(), report.sum);
        assert_eq!(row[10], "0.0000000000000000e0");
    }

    #[test]
    fn negative_values_are_clamped_or_rejected() {
        assert_eq!(clamp_nonnegative(-5e-13, "x").unwrap(), 0.0);
        assert_eq!(clamp_nonnegative(0.25, "x").unwrap(), 0.25);
        assert!(matches!(
            clamp_nonnegative(-1e-9, "x"),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn sampler_is_deterministic() {
        let a = EnvelopeSampler::new(7);
        assert_eq!(a.sample(3), EnvelopeSampler::new(7).sample(3));
        assert_ne!(a.sample(3), a.sample(4));
        assert_ne!(a.sample(3), EnvelopeSampler::new(8).sample(3));
        for k in 0..50 {
            assert!(a.sample(k).boundary_ratio() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn measures_are_phase_and_rotation_invariant(
            seed in 0u64..500, theta in 0.0f64..6.3, delta in 0.0f64..6.3,
        ) {
            let st = EnvelopeSampler::new(seed).sample(0);
            let base = full_report(&st, 1.3).unwrap();
            for other in [st.with_global_phase(theta), st.rotated(delta)] {
                let r = full_report(&other, 1.3).unwrap();
                for (x, y) in [
                    (base.d2j, r.d2j), (base.d2phi, r.d2phi), (base.d2j_gen, r.d2j_gen),
                    (base.d_phi_legacy, r.d_phi_legacy), (base.sum, r.sum),
                ] {
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
                }
            }
            // rotation moves the phase of ⟨Uⁿ⟩ by e^{inδ}
            let u2 = expect_u_power(&st, 2);
            let rotated = expect_u_power(&st.rotated(delta), 2);
            prop_assert!((rotated - u2 * Complex64::from_polar(1.0, 2.0 * delta)).norm() < 1e-12);
        }

        #[test]
        fn random_states_respect_inequalities(seed in 0u64..2000) {
            let st = EnvelopeSampler::new(seed).sample(1);
            let report = full_report(&st, 1.0).unwrap();
            prop_assert!(report.d2j >= 0.0 && report.d2phi >= 0.0);
            prop_assert!(report.d2j + report.d2phi >= 1.0 - 1e-9);
            for pair in report.e2 {
                prop_assert!(pair.slack() >= -1e-10);
            }
            prop_assert!(schwarz_terms(&st).slack() >= -1e-10);
        }
    }
}
