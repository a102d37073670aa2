// SPDX-License-Identifier: Apache-2.0

//! States of a particle on a circle in the angular-momentum basis.
//!
//! A [`CircleState`] holds the coefficients `c_j = ⟨j|ψ⟩` for integer
//! `j ∈ [-N, N]` (ħ = 1). States are kept unnormalized; every expectation in
//! [`crate::expect`] divides by the squared norm explicitly.
//!
//! The ladder operator `U = e^{iφ̂}` acts as `U|j⟩ = |j+1⟩`. On the finite
//! window a shift pushes one coefficient over the edge; that mass is dropped
//! (never wrapped around) and reported as a truncation loss.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::special::bessel_i;

/// Edge coefficients of constructed states must satisfy
/// `|c_{±N}| / max_j |c_j| ≤ BOUNDARY_DECAY`.
pub const BOUNDARY_DECAY: f64 = 1e-12;

/// Relative truncation loss above which a shift is flagged.
pub const SHIFT_LOSS_LIMIT: f64 = 1e-10;

/// Envelope cutoff used by the automatic window sizing.
const ENVELOPE_EPS: f64 = 1e-16;

const CSV_FORMAT_VERSION: u32 = 1;

/// Spectrum sector of `Ĵ`. Only the integer sector is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[non_exhaustive]
pub enum Basis {
    #[default]
    Integer,
}

/// Point `(l, φ)` of the cylinder phase space, `ξ = e^{-l + iφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    l: f64,
    phi: f64,
}

impl PhasePoint {
    pub fn new(l: f64, phi: f64) -> Result<Self> {
        if !(l.is_finite() && phi.is_finite()) {
            return Err(Error::Domain(format!(
                "phase point ({l}, {phi}) is not finite"
            )));
        }
        let mut phi = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { l, phi })
    }

    pub fn from_xi(xi: Complex64) -> Result<Self> {
        if xi == Complex64::new(0.0, 0.0) || !xi.is_finite() {
            return Err(Error::Domain(format!(
                "ξ = {xi} does not label a phase point"
            )));
        }
        Self::new(-xi.norm().ln(), xi.arg())
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// Angle reduced to `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::from_polar((-self.l).exp(), self.phi)
    }
}

/// State squeezing `s` and the reference squeezing `s0` used by the
/// generalized momentum uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    s: f64,
    s0: f64,
}

impl SqueezeParams {
    pub fn new(s: f64, s0: f64) -> Result<Self> {
        check_squeezing(s)?;
        check_squeezing(s0)?;
        Ok(Self { s, s0 })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }
}

fn check_squeezing(s: f64) -> Result<()> {
    if s.is_finite() && s > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "squeezing must be positive, got {s}"
        )))
    }
}

/// How a constructor chooses the half-width `N` of the j-window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    #[default]
    Auto,
    Fixed(usize),
}

/// Window half-width covering the Gaussian envelope `e^{-s(j - l/s)²/2}` of a
/// squeezed state down to 1e-16.
pub fn auto_truncation(l: f64, s: f64) -> usize {
    let width = l.abs() / s + (2.0 * (1.0 / ENVELOPE_EPS).ln() / s).sqrt();
    width.ceil() as usize + 4
}

/// Window half-width that also covers the tilted weights `e^{-2λj}|c_j|²`
/// needed for exponential moments with `|λ| ≤ lambda`.
pub fn moment_truncation(l: f64, s: f64, lambda: f64) -> usize {
    auto_truncation(l.abs() + lambda.abs(), s)
}

/// Coefficient vector over `j = -N ..= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleState {
    basis: Basis,
    n_trunc: usize,
    coeffs: Vec<Complex64>,
}

/// Result of a ladder shift together with the fraction of squared norm that
/// fell off the edge of the window.
#[derive(Debug, Clone, PartialEq)]
pub struct Shifted {
    pub state: CircleState,
    pub truncation_loss: f64,
}

impl Shifted {
    /// Rejects the shift if it lost more than [`SHIFT_LOSS_LIMIT`] of the norm.
    pub fn checked(self) -> Result<CircleState> {
        if self.truncation_loss > SHIFT_LOSS_LIMIT {
            Err(Error::Truncation(format!(
                "shift dropped {:e} of the squared norm at the window edge",
                self.truncation_loss
            )))
        } else {
            Ok(self.state)
        }
    }
}

impl CircleState {
    /// Wraps a coefficient vector of length `2N + 1`. The vector must be
    /// finite and not identically zero.
    pub fn from_coeffs(n_trunc: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if n_trunc == 0 {
            return Err(Error::Domain("truncation N must be at least 1".into()));
        }
        if coeffs.len() != 2 * n_trunc + 1 {
            return Err(Error::Domain(format!(
                "expected {} coefficients for N = {n_trunc}, got {}",
                2 * n_trunc + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Range("state coefficient is not finite".into()));
        }
        if coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(Error::Domain("state vector is identically zero".into()));
        }
        Ok(Self::from_raw(n_trunc, coeffs))
    }

    /// Operator outputs are plain vectors and may vanish (e.g. `Ĵ|0⟩`).
    fn from_raw(n_trunc: usize, coeffs: Vec<Complex64>) -> Self {
        Self {
            basis: Basis::Integer,
            n_trunc,
            coeffs,
        }
    }

    fn from_fn(n_trunc: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let n = n_trunc as i64;
        Self::from_raw(n_trunc, (-n..=n).map(f).collect())
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `⟨j|ψ⟩`, zero outside the window.
    pub fn coeff(&self, j: i64) -> Complex64 {
        let n = self.n_trunc as i64;
        if j.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(j + n) as usize]
        }
    }

    /// `(j, c_j)` pairs in ascending `j`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.n_trunc as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - n, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm2 = self.norm2();
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::Range(format!("cannot normalize, norm² = {norm2}")));
        }
        let inv = norm2.sqrt().recip();
        Ok(self.map(|_, c| c * inv))
    }

    /// Largest edge coefficient relative to the largest coefficient.
    pub fn boundary_ratio(&self) -> f64 {
        let edge = self.coeffs[0]
            .norm()
            .max(self.coeffs[self.coeffs.len() - 1].norm());
        edge / self.max_abs()
    }

    pub fn check_boundary_decay(&self) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio <= BOUNDARY_DECAY {
            Ok(())
        } else {
            Err(Error::Truncation(format!(
                "edge coefficients at N = {} are {ratio:e} of the peak",
                self.n_trunc
            )))
        }
    }

    fn map(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self::from_raw(self.n_trunc, self.iter().map(|(j, c)| f(j, c)).collect())
    }

    /// `Σ_j conj(a_j) b_j`; windows of different width are zero-padded.
    pub fn inner_product(&self, other: &CircleState) -> Complex64 {
        let n = self.n_trunc.min(other.n_trunc) as i64;
        (-n..=n)
            .map(|j| self.coeff(j).conj() * other.coeff(j))
            .sum()
    }

    /// Copy of the state on a window of half-width `n_trunc`, zero-padding or
    /// cutting as needed.
    pub fn resized(&self, n_trunc: usize) -> Self {
        Self::from_fn(n_trunc, |j| self.coeff(j))
    }

    /// `U|ψ⟩`: new `c_j` = old `c_{j-1}`.
    pub fn apply_u(&self) -> Shifted {
        self.shift(1)
    }

    /// `U†|ψ⟩`: new `c_j` = old `c_{j+1}`.
    pub fn apply_u_dagger(&self) -> Shifted {
        self.shift(-1)
    }

    fn shift(&self, by: i64) -> Shifted {
        let norm2 = self.norm2();
        let n = self.n_trunc as i64;
        let lost: f64 = self
            .iter()
            .filter(|(j, _)| (j + by).abs() > n)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        Shifted {
            state: Self::from_fn(self.n_trunc, |j| self.coeff(j - by)),
            truncation_loss: if norm2 > 0.0 { lost / norm2 } else { 0.0 },
        }
    }

    /// `Ĵ|ψ⟩`.
    pub fn apply_j(&self) -> Self {
        self.map(|j, c| c * j as f64)
    }

    /// `Z(s)|ψ⟩ = e^{-s(Ĵ - 1/2)} U|ψ⟩`.
    pub fn apply_z(&self, s: f64) -> Shifted {
        let shifted = self.apply_u();
        Shifted {
            state: shifted.state.map(|j, c| c * (-s * (j as f64 - 0.5)).exp()),
            truncation_loss: shifted.truncation_loss,
        }
    }

    /// `e^{-ds Ĵ²/2}|ψ⟩`. Negative `ds` widens the state and must leave the
    /// edges negligible.
    pub fn resqueeze(&self, ds: f64) -> Result<Self> {
        if !ds.is_finite() {
            return Err(Error::Domain(format!("resqueeze step {ds} is not finite")));
        }
        let out = self.map(|j, c| {
            let jf = j as f64;
            c * (-0.5 * ds * jf * jf).exp()
        });
        if out.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Range(format!("resqueeze by {ds} overflowed")));
        }
        if ds < 0.0 {
            out.check_boundary_decay()?;
        }
        Ok(out)
    }

    /// `e^{iθ} |ψ⟩`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        self.map(|_, c| c * phase)
    }

    /// `e^{-iδĴ} |ψ⟩`, rotating the packet by `δ` around the circle.
    pub fn rotated(&self, delta: f64) -> Self {
        self.map(|j, c| c * Complex64::from_polar(1.0, -delta * j as f64))
    }

    /// Writes a comment line with the window size and format version, a
    /// `j,re,im` header, and one row per coefficient.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# circle-state format={CSV_FORMAT_VERSION} n_trunc={} basis=integer",
            self.n_trunc
        )?;
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["j", "re", "im"])?;
        for (j, c) in self.iter() {
            writer.write_record([j.to_string(), fmt_f64(c.re), fmt_f64(c.im)])?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(mut input: R) -> Result<Self> {
        let mut first = String::new();
        input.read_line(&mut first)?;
        let n_trunc = parse_state_header(&first)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n_trunc + 1];
        let mut seen = vec![false; coeffs.len()];
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        for record in reader.records() {
            let record = record?;
            if record.len() != 3 {
                return Err(Error::Parse(format!(
                    "expected 3 fields, got {}",
                    record.len()
                )));
            }
            let j: i64 = parse_field(&record[0])?;
            if j.unsigned_abs() as usize > n_trunc {
                return Err(Error::Parse(format!(
                    "row j = {j} outside window N = {n_trunc}"
                )));
            }
            let idx = (j + n_trunc as i64) as usize;
            if seen[idx] {
                return Err(Error::Parse(format!("duplicate row j = {j}")));
            }
            seen[idx] = true;
            coeffs[idx] = Complex64::new(parse_field(&record[1])?, parse_field(&record[2])?);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Parse(format!(
                "missing row j = {}",
                missing as i64 - n_trunc as i64
            )));
        }
        Self::from_coeffs(n_trunc, coeffs)
    }
}

fn parse_field<T: std::str::FromStr>(field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse field {field:?}")))
}

fn parse_state_header(line: &str) -> Result<usize> {
    let rest = line
        .trim()
        .strip_prefix("# circle-state")
        .ok_or_else(|| Error::Parse(format!("not a circle-state header: {line:?}")))?;
    let mut version = None;
    let mut n_trunc = None;
    for item in rest.split_whitespace() {
        match item.split_once('=') {
            Some(("format", v)) => version = Some(parse_field::<u32>(v)?),
            Some(("n_trunc", v)) => n_trunc = Some(parse_field::<usize>(v)?),
            Some(("basis", "integer")) => {}
            _ => return Err(Error::Parse(format!("unknown header item {item:?}"))),
        }
    }
    match (version, n_trunc) {
        (Some(CSV_FORMAT_VERSION), Some(n)) => Ok(n),
        (Some(v), _) if v != CSV_FORMAT_VERSION => Err(Error::Parse(format!(
            "unsupported state format version {v}"
        ))),
        _ => Err(Error::Parse("state header lacks format or n_trunc".into())),
    }
}

fn resolve(truncation: Truncation, auto: impl FnOnce() -> usize) -> Result<usize> {
    let n = match truncation {
        Truncation::Auto => auto(),
        Truncation::Fixed(n) => n,
    };
    if n == 0 {
        return Err(Error::Domain("truncation N must be at least 1".into()));
    }
    Ok(n)
}

/// Coherent state `|l, φ⟩` with `c_j = e^{lj - ijφ} e^{-j²/2}` (unnormalized).
pub fn coherent_state(p: PhasePoint, truncation: Truncation) -> Result<CircleState> {
    squeezed_state(p, 1.0, truncation)
}

/// Squeezed state `|l, φ⟩_s` with `c_j = e^{lj - ijφ} e^{-s j²/2}`.
pub fn squeezed_state(p: PhasePoint, s: f64, truncation: Truncation) -> Result<CircleState> {
    check_squeezing(s)?;
    let n_trunc = resolve(truncation, || auto_truncation(p.l, s))?;
    let state = CircleState::from_fn(n_trunc, |j| {
        let jf = j as f64;
        Complex64::from_polar((p.l * jf - 0.5 * s * jf * jf).exp(), -jf * p.phi)
    });
    if state.coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Range(format!(
            "coefficients overflow for l = {}, s = {s}, N = {n_trunc}",
            p.l
        )));
    }
    if state.is_zero() {
        return Err(Error::Range(format!(
            "coefficients underflow for l = {}, s = {s}",
            p.l
        )));
    }
    state.check_boundary_decay()?;
    Ok(state)
}

/// Normalized Fourier modes of the packet `e^{s cos(φ-α) + il(φ-α)}`:
/// `c_j ∝ e^{-i(j-l)α} I_{j-l}(s)`. `l` must be an integer.
pub fn circular_squeezed_state(
    alpha: f64,
    l: f64,
    s: f64,
    truncation: Truncation,
) -> Result<CircleState> {
    check_squeezing(s)?;
    if !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "packet center {alpha} is not finite"
        )));
    }
    if !l.is_finite() || l.fract() != 0.0 {
        return Err(Error::Domain(format!(
            "circular squeezed states need integer angular momentum, got {l}"
        )));
    }
    let tol = 1e-15;
    let peak = bessel_i(0, s, tol)?;
    let n_trunc = resolve(truncation, || {
        let mut k = 1u32;
        while bessel_i(k, s, tol).is_ok_and(|v| v > 0.1 * BOUNDARY_DECAY * peak) {
            k += 1;
        }
        l.abs() as usize + k as usize + 1
    })?;
    let l_int = l as i64;
    let n = n_trunc as i64;
    let mut coeffs = Vec::with_capacity(2 * n_trunc + 1);
    for j in -n..=n {
        let k = j - l_int;
        let mag = bessel_i(k.unsigned_abs() as u32, s, tol)?;
        coeffs.push(Complex64::from_polar(mag, -(k as f64) * alpha));
    }
    let state = CircleState::from_coeffs(n_trunc, coeffs)?;
    state.check_boundary_decay()?;
    state.normalize()
}

/// Angular-momentum eigenstate `|j0⟩`.
pub fn momentum_eigenstate(j0: i64, n_trunc: usize) -> Result<CircleState> {
    if n_trunc == 0 || j0.unsigned_abs() as usize > n_trunc {
        return Err(Error::Domain(format!(
            "|j0| = {} exceeds N = {n_trunc}",
            j0.abs()
        )));
    }
    Ok(CircleState::from_fn(n_trunc, |j| {
        Complex64::new(if j == j0 { 1.0 } else { 0.0 }, 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::theta3;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn pp(l: f64, phi: f64) -> PhasePoint {
        PhasePoint::new(l, phi).unwrap()
    }

    fn assert_close_states(a: &CircleState, b: &CircleState, tol: f64) {
        assert_eq!(a.n_trunc(), b.n_trunc());
        let scale = a.max_abs().max(b.max_abs());
        for ((j, x), (_, y)) in a.iter().zip(b.iter()) {
            assert!((x - y).norm() <= tol * scale, "j = {j}: {x} vs {y}");
        }
    }

    #[test]
    fn phase_point_reduces_angle() {
        let p = pp(0.4, -0.5);
        assert!((p.phi() - (TAU - 0.5)).abs() < 1e-15);
        let back = PhasePoint::from_xi(p.xi()).unwrap();
        assert!((back.l() - 0.4).abs() < 1e-15);
        assert!((back.phi() - p.phi()).abs() < 1e-14);
        assert!(PhasePoint::from_xi(Complex64::new(0.0, 0.0)).is_err());
        assert!(SqueezeParams::new(0.0, 1.0).is_err());
        assert!(SqueezeParams::new(1.0, -1.0).is_err());
    }

    #[test]
    fn coherent_state_at_origin() {
        let st = coherent_state(pp(0.0, 0.0), Truncation::Fixed(8)).unwrap();
        assert_eq!(st.coeff(0), Complex64::new(1.0, 0.0));
        assert!((st.coeff(1).re - (-0.5f64).exp()).abs() < 1e-16);
        assert!((st.coeff(1).re - 0.606_53).abs() < 1e-5);
        for j in 1..=8 {
            assert_eq!(st.coeff(j), st.coeff(-j));
            assert_eq!(st.coeff(j).im, 0.0);
        }
    }

    #[test]
    fn coherent_norm_matches_direct_sum() {
        let oracle: f64 = (-10i64..=10)
            .map(|j| (2.0 * j as f64 - (j * j) as f64).exp())
            .sum();
        assert!((oracle - 4.818_527_502_330_723).abs() < 1e-12);
        let st = coherent_state(pp(1.0, 2.3), Truncation::Fixed(10)).unwrap();
        assert!((st.norm2() - oracle).abs() < 1e-12);
        let origin = coherent_state(pp(0.0, 0.0), Truncation::Fixed(10)).unwrap();
        assert!((origin.norm2() - 1.772_637_204_826_652).abs() < 1e-12);
    }

    #[test]
    fn squeezed_state_examples() {
        let st = squeezed_state(pp(0.0, 0.0), 2.0, Truncation::Auto).unwrap();
        for (j, c) in st.iter() {
            assert!((c.re - (-(j * j) as f64).exp()).abs() < 1e-16);
        }
        let p = pp(0.7, 1.9);
        let a = squeezed_state(p, 1.0, Truncation::Fixed(12)).unwrap();
        let b = coherent_state(p, Truncation::Fixed(12)).unwrap();
        assert_eq!(a, b);

        let oracle: f64 = (-30i64..=30)
            .map(|j| (2.0 * j as f64 - 2.0 * (j * j) as f64).exp())
            .sum();
        let st = squeezed_state(pp(1.0, 0.0), 2.0, Truncation::Auto).unwrap();
        assert!((st.norm2() - oracle).abs() < 1e-13 * oracle);
        let closed = theta3(Complex64::new(0.0, 1.0 / PI), 2.0, 1e-15)
            .unwrap()
            .re;
        assert!((closed - oracle).abs() < 1e-13 * oracle);
        assert!(matches!(
            squeezed_state(p, 0.0, Truncation::Auto),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn too_small_window_is_rejected() {
        let err = coherent_state(pp(3.0, 0.0), Truncation::Fixed(4)).unwrap_err();
        assert!(matches!(err, Error::Truncation(_)));
        let err = squeezed_state(pp(900.0, 0.0), 0.5, Truncation::Auto).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn auto_window_satisfies_boundary_decay() {
        for &l in &[-2.0, 0.0, 0.37, 2.0] {
            for &s in &[0.1, 0.5, 1.0, 4.0] {
                let st = squeezed_state(pp(l, 0.2), s, Truncation::Auto).unwrap();
                assert!(st.boundary_ratio() <= BOUNDARY_DECAY);
            }
        }
    }

    #[test]
    fn circular_squeezed_limits() {
        let st = circular_squeezed_state(0.0, 2.0, 1e-8, Truncation::Auto).unwrap();
        assert!((st.coeff(2).re - 1.0).abs() < 1e-15);
        assert!(st.coeff(3).norm() < 1e-8);

        let st = circular_squeezed_state(0.0, 0.0, 1.0, Truncation::Auto).unwrap();
        // Σ_j I_j(1)² = I_0(2)
        let i02 = bessel_i(0, 2.0, 1e-15).unwrap();
        let raw: f64 = (-20i64..=20)
            .map(|j| {
                bessel_i(j.unsigned_abs() as u32, 1.0, 1e-15)
                    .unwrap()
                    .powi(2)
            })
            .sum();
        assert!((raw - i02).abs() < 1e-14);
        let scale = bessel_i(0, 1.0, 1e-15).unwrap() / st.coeff(0).re;
        for j in 0..=st.n_trunc() as i64 {
            assert_eq!(st.coeff(j).im, 0.0);
            assert!((st.coeff(j) - st.coeff(-j)).norm() < 1e-16);
            let want = bessel_i(j as u32, 1.0, 1e-15).unwrap();
            assert!((st.coeff(j).re * scale - want).abs() < 1e-15);
        }

        let st = circular_squeezed_state(0.7, 2.0, 1.5, Truncation::Fixed(20)).unwrap();
        assert!((st.norm2() - 1.0).abs() < 1e-14);
        assert!(matches!(
            circular_squeezed_state(0.0, 0.5, 1.0, Truncation::Auto),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn circular_squeezed_is_eigenstate_of_j_minus_i_s_sin() {
        for &l in &[-1.0, 0.0, 1.0, 3.0] {
            for &s in &[0.5, 1.0, 2.0] {
                let st = circular_squeezed_state(0.0, l, s, Truncation::Auto).unwrap();
                let u = st.apply_u().state;
                let ud = st.apply_u_dagger().state;
                let j = st.apply_j();
                // (Ĵ - i s sin φ̂)ψ with sin φ̂ = (U - U†)/2i
                for k in -(st.n_trunc() as i64 - 1)..st.n_trunc() as i64 {
                    let lhs = j.coeff(k) - 0.5 * s * (u.coeff(k) - ud.coeff(k));
                    assert!((lhs - l * st.coeff(k)).norm() < 1e-9, "l={l} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn momentum_eigenstate_and_ladder() {
        let st = momentum_eigenstate(0, 5).unwrap();
        assert_eq!(st.coeff(0), Complex64::new(1.0, 0.0));
        assert!(st
            .iter()
            .filter(|&(j, _)| j != 0)
            .all(|(_, c)| c.norm() == 0.0));
        assert!(momentum_eigenstate(6, 5).is_err());

        let two = momentum_eigenstate(2, 6).unwrap();
        let up = two.apply_u().checked().unwrap();
        assert_eq!(up, momentum_eigenstate(3, 6).unwrap());
        let j = two.apply_j();
        assert_eq!(j.coeff(2), Complex64::new(2.0, 0.0));

        assert_eq!(
            two.inner_product(&momentum_eigenstate(3, 6).unwrap()),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn ladder_acts_on_every_bulk_basis_vector() {
        let n = 7;
        for j0 in -(n as i64 - 1)..=(n as i64 - 1) {
            let st = momentum_eigenstate(j0, n).unwrap();
            assert_eq!(
                st.apply_u().checked().unwrap(),
                momentum_eigenstate(j0 + 1, n).unwrap()
            );
            assert_eq!(
                st.apply_u_dagger().checked().unwrap(),
                momentum_eigenstate(j0 - 1, n).unwrap()
            );
        }
    }

    #[test]
    fn edge_shift_reports_loss() {
        let edge = momentum_eigenstate(4, 4).unwrap();
        let shifted = edge.apply_u();
        assert_eq!(shifted.truncation_loss, 1.0);
        assert!(shifted.state.is_zero());
        assert!(matches!(
            edge.apply_u().checked(),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn u_dagger_undoes_u() {
        let st = squeezed_state(pp(0.3, 1.2), 0.8, Truncation::Auto).unwrap();
        let back = st
            .apply_u()
            .checked()
            .unwrap()
            .apply_u_dagger()
            .checked()
            .unwrap();
        assert_close_states(&back, &st, 1e-15);
    }

    #[test]
    fn j_expectation_vanishes_at_origin() {
        let st = coherent_state(pp(0.0, 0.0), Truncation::Auto).unwrap();
        assert!(st.inner_product(&st.apply_j()).norm() < 1e-15);
    }

    #[test]
    fn squeezed_state_is_eigenvector_of_z() {
        for &(l, phi, s) in &[(0.0, 0.0, 1.0), (0.6, 2.0, 0.7), (-1.2, 5.0, 2.5)] {
            let p = pp(l, phi);
            let st = squeezed_state(p, s, Truncation::Auto).unwrap();
            let z = st.apply_z(s).checked().unwrap();
            let xi = p.xi();
            let scale = st.max_abs();
            for (j, c) in z.iter().skip(1) {
                assert!((c - xi * st.coeff(j)).norm() < 1e-10 * scale, "j={j}");
            }
        }
    }

    #[test]
    fn resqueeze_maps_between_squeezings() {
        let p = pp(0.37, 1.1);
        for &(s0, s) in &[(1.0f64, 2.0f64), (2.0, 0.7), (0.5, 1.5)] {
            let n = auto_truncation(p.l(), s.min(s0));
            let from = squeezed_state(p, s0, Truncation::Fixed(n)).unwrap();
            let want = squeezed_state(p, s, Truncation::Fixed(n)).unwrap();
            assert_close_states(&from.resqueeze(s - s0).unwrap(), &want, 1e-12);
        }
        let narrow = squeezed_state(p, 2.0, Truncation::Auto).unwrap();
        assert!(matches!(narrow.resqueeze(-1.9), Err(Error::Truncation(_))));
    }

    #[test]
    fn csv_roundtrip_and_header() {
        let st = squeezed_state(pp(0.4, 0.9), 1.3, Truncation::Auto).unwrap();
        let mut buf = Vec::new();
        st.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&format!("# circle-state format=1 n_trunc={}", st.n_trunc())));
        assert_eq!(text.lines().nth(1), Some("j,re,im"));
        let back = CircleState::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, st);

        let bad = "# circle-state format=2 n_trunc=1\nj,re,im\n";
        assert!(matches!(
            CircleState::read_csv(bad.as_bytes()),
            Err(Error::Parse(_))
        ));
        let missing = "# circle-state format=1 n_trunc=1\nj,re,im\n0,1,0\n";
        assert!(matches!(
            CircleState::read_csv(missing.as_bytes()),
            Err(Error::Parse(_))
        ));
    }

    proptest! {
        #[test]
        fn squeezed_overlap_matches_theta(
            l in -2.0f64..2.0, h in -2.0f64..2.0,
            phi in 0.0f64..TAU, psi in 0.0f64..TAU,
            s in 0.7f64..3.0,
        ) {
            let n = auto_truncation(l.abs().max(h.abs()), s);
            let a = squeezed_state(pp(l, phi), s, Truncation::Fixed(n)).unwrap();
            let b = squeezed_state(pp(h, psi), s, Truncation::Fixed(n)).unwrap();
            let direct = a.inner_product(&b);
            let v = Complex64::new((phi - psi) / TAU, -(l + h) / TAU);
            let closed = theta3(v, s, 1e-15).unwrap();
            prop_assert!((direct - closed).norm() <= 1e-10 * closed.norm().max(1.0));
        }
    }
}
