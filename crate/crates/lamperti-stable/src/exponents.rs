//! Characteristic and Laplace exponents.
//!
//! The closed forms are gamma-ratio (α ≠ 1) or digamma (α = 1) expressions
//! around the effective linear term θ̃; every one of them is checked against
//! direct quadrature of the jump-measure integral, which this module exposes
//! as [`char_exponent_oracle`]. Conventions, fixed once for the whole crate:
//!
//! - characteristic: E[e^{iλX_t}] = e^{-tΨ(λ)};
//! - subordinator: E[e^{-λX_t}] = e^{-tΦ(λ)}, so Φ is nonnegative concave;
//! - no positive jumps: E[e^{λX_t}] = e^{tΦ(λ)}, so Φ is convex.

use crate::measure::{
    radial_kernel, structural_constants, LampertiCharacteristics,
};
use crate::quad::{
    integrate, integrate_exp_tail, one_minus_cos, x_minus_sin, QuadratureSpec,
};
use crate::specfun::{digamma, gamma, pochhammer, pochhammer_c};
use crate::{DomainError, Error};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// One exponent evaluation, optionally with its quadrature cross-check.
#[derive(Debug, Clone, Copy)]
pub struct ExponentEvaluation {
    pub lambda: f64,
    pub closed_form: Complex64,
    pub oracle: Option<Complex64>,
    pub abs_error: Option<f64>,
}

/// The closed-form characteristic exponent Ψ(λ).
///
/// For α ≠ 1 each direction contributes a difference of rising factorials
/// scaled by Γ(-α); at α = 1 the gamma ratio degenerates and the direction
/// terms become digamma expressions instead. The linear term iλθ̃ uses the
/// effective constant from [`structural_constants`].
pub fn char_exponent(
    chars: &LampertiCharacteristics,
    lambda: f64,
) -> Result<Complex64, Error> {
    if lambda == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let alpha = chars.alpha();
    let theta_tilde = structural_constants(chars)?.theta_tilde;
    let mut psi = Complex64::new(0.0, lambda * theta_tilde);
    if alpha == 1.0 {
        for d in chars.directions() {
            let z = Complex64::new(1.0 - d.f, -lambda * d.xi);
            let term = z * digamma(z + 1.0)
                - (1.0 - d.f) * digamma(Complex64::new(2.0 - d.f, 0.0));
            psi -= d.sigma * term;
        }
    } else {
        let gm = gamma(-alpha);
        for d in chars.directions() {
            let z = Complex64::new(1.0 - d.f, -lambda * d.xi);
            let term = pochhammer_c(z, alpha) - pochhammer(1.0 - d.f, alpha);
            psi -= d.sigma * gm * term;
        }
    }
    Ok(psi)
}

/// Ground-truth quadrature of the jump-measure integral defining Ψ(λ).
///
/// Uses the small-jump indicator compensator for α ≥ 1 and the uncompensated
/// form plus the drift coefficient for α < 1.
pub fn char_exponent_oracle(
    chars: &LampertiCharacteristics,
    lambda: f64,
) -> Result<Complex64, Error> {
    char_exponent_oracle_with(chars, lambda, &QuadratureSpec::default())
}

/// [`char_exponent_oracle`] with explicit quadrature controls.
pub fn char_exponent_oracle_with(
    chars: &LampertiCharacteristics,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, Error> {
    if lambda == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let alpha = chars.alpha();
    let compensated = alpha >= 1.0;
    let mut jump_part = Complex64::new(0.0, 0.0);
    for d in chars.directions() {
        let s = lambda * d.xi;
        let rate = alpha + 1.0 - d.f;
        let kern = |r: f64| radial_kernel(alpha, d.f, r);
        let re = integrate(|r| one_minus_cos(s * r) * kern(r), 0.0, 1.0, spec)?
            + integrate_exp_tail(|r| one_minus_cos(s * r) * kern(r), 1.0, rate, spec)?;
        let im_head = if compensated {
            integrate(|r| x_minus_sin(s * r) * kern(r), 0.0, 1.0, spec)?
        } else {
            integrate(|r| -(s * r).sin() * kern(r), 0.0, 1.0, spec)?
        };
        let im_tail =
            integrate_exp_tail(|r| -(s * r).sin() * kern(r), 1.0, rate, spec)?;
        jump_part += d.sigma * Complex64::new(re, im_head + im_tail);
    }
    let linear = if compensated {
        Complex64::new(0.0, lambda * chars.theta())
    } else {
        let drift = chars
            .drift()?
            .expect("finite-variation drift exists for α < 1");
        Complex64::new(0.0, -lambda * drift)
    };
    Ok(linear + jump_part)
}

/// Evaluates the closed form at λ, optionally alongside the oracle.
pub fn evaluate(
    chars: &LampertiCharacteristics,
    lambda: f64,
    with_oracle: bool,
) -> Result<ExponentEvaluation, Error> {
    let closed_form = char_exponent(chars, lambda)?;
    let oracle = if with_oracle {
        Some(char_exponent_oracle(chars, lambda)?)
    } else {
        None
    };
    Ok(ExponentEvaluation {
        lambda,
        closed_form,
        oracle,
        abs_error: oracle.map(|o| (closed_form - o).norm()),
    })
}

/// Laplace exponent of an increasing process: E[e^{-λX_t}] = e^{-tΦ(λ)}.
///
/// Requires α < 1, no negative jumps, and nonnegative drift.
pub fn laplace_subordinator(
    chars: &LampertiCharacteristics,
    lambda: f64,
) -> Result<f64, Error> {
    let alpha = chars.alpha();
    if alpha >= 1.0 {
        return Err(DomainError::Invalid(format!(
            "an increasing process needs α in (0, 1), got {alpha}"
        ))
        .into());
    }
    if chars.c_minus() > 0.0 {
        return Err(DomainError::Invalid(
            "an increasing process cannot charge the -1 direction".into(),
        )
        .into());
    }
    let drift = chars.drift()?.expect("α < 1 checked above");
    if drift < 0.0 {
        return Err(DomainError::Invalid(format!(
            "an increasing process needs nonnegative drift, got {drift}"
        ))
        .into());
    }
    if !(lambda >= 0.0) {
        return Err(DomainError::Invalid(format!(
            "Laplace argument must be nonnegative, got {lambda}"
        ))
        .into());
    }
    let beta = chars.beta().expect("positive direction checked above");
    let diff = pochhammer(lambda + 1.0 - beta, alpha) - pochhammer(1.0 - beta, alpha);
    Ok(drift * lambda - chars.c_plus() * gamma(-alpha) * diff)
}

pub(crate) fn require_spectrally_negative(
    chars: &LampertiCharacteristics,
) -> Result<(f64, f64), Error> {
    let alpha = chars.alpha();
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(DomainError::Invalid(format!(
            "the one-sided Laplace exponent needs α in (1, 2), got {alpha}"
        ))
        .into());
    }
    if chars.c_plus() > 0.0 {
        return Err(DomainError::Invalid(
            "the process must have no positive jumps".into(),
        )
        .into());
    }
    let rho = chars.rho().ok_or_else(|| {
        DomainError::Invalid("the -1 direction must be charged".into())
    })?;
    Ok((rho, chars.c_minus()))
}

/// Laplace exponent when there are no positive jumps:
/// E[e^{λX_t}] = e^{tΦ(λ)} for λ ≥ 0.
pub fn laplace_spectrally_negative(
    chars: &LampertiCharacteristics,
    lambda: f64,
) -> Result<f64, Error> {
    let (rho, c_minus) = require_spectrally_negative(chars)?;
    if !(lambda >= 0.0) {
        return Err(DomainError::Invalid(format!(
            "Laplace argument must be nonnegative, got {lambda}"
        ))
        .into());
    }
    let alpha = chars.alpha();
    let theta_tilde = structural_constants(chars)?.theta_tilde;
    let diff = pochhammer(lambda + 1.0 - rho, alpha) - pochhammer(1.0 - rho, alpha);
    Ok(-theta_tilde * lambda + c_minus * gamma(-alpha) * diff)
}

/// Right derivative Φ'(0⁺) of the one-sided Laplace exponent, which is the
/// mean of the unit-time marginal and so decides transience direction.
///
/// The gamma-ratio derivative is (1-ρ)_α (ψ(1+α-ρ) - ψ(1-ρ)); when 1-ρ is
/// a nonpositive integer -n both factors degenerate and the product has the
/// finite limit (-1)^n n! Γ(α-n).
pub fn laplace_derivative_at_zero(
    chars: &LampertiCharacteristics,
) -> Result<f64, Error> {
    let (rho, c_minus) = require_spectrally_negative(chars)?;
    let alpha = chars.alpha();
    let theta_tilde = structural_constants(chars)?.theta_tilde;
    let base = 1.0 - rho;
    let slope = if base <= 0.0 && base == base.round() {
        let n = -base as i32;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut fact = 1.0;
        for k in 2..=n {
            fact *= k as f64;
        }
        sign * fact * gamma(alpha - n as f64)
    } else {
        pochhammer(base, alpha)
            * (digamma(Complex64::new(base + alpha, 0.0)).re
                - digamma(Complex64::new(base, 0.0)).re)
    };
    Ok(-theta_tilde + c_minus * gamma(-alpha) * slope)
}

/// A tabulated marginal density from Fourier inversion.
#[derive(Debug, Clone)]
pub struct DensityTable {
    /// Evaluation points, uniformly spaced and centered at zero.
    pub points: Vec<(f64, f64)>,
    /// Set when the frequency cutoff truncates a characteristic function
    /// that has not yet decayed below 1e-8.
    pub warning: Option<String>,
}

impl DensityTable {
    /// Trapezoid mass of the table.
    pub fn total_mass(&self) -> f64 {
        let dx = self.points[1].0 - self.points[0].0;
        let inner: f64 = self.points[1..self.points.len() - 1]
            .iter()
            .map(|&(_, p)| p)
            .sum();
        dx * (inner + 0.5 * (self.points[0].1 + self.points[self.points.len() - 1].1))
    }
}

/// Marginal density of X_t on a centered grid by FFT inversion of
/// e^{-tΨ(λ)} over the symmetric frequency window [-cutoff, cutoff].
///
/// The frequency grid is midpoint-shifted by half a sample, which makes the
/// discretization a midpoint rule and keeps the output grid centered.
pub fn density_via_fft(
    chars: &LampertiCharacteristics,
    t: f64,
    grid_size: usize,
    cutoff: f64,
) -> Result<DensityTable, Error> {
    if !(t > 0.0) {
        return Err(DomainError::Invalid(format!("time must be positive, got {t}")).into());
    }
    if !grid_size.is_power_of_two() || grid_size < 64 {
        return Err(DomainError::Invalid(format!(
            "grid size must be a power of two at least 64, got {grid_size}"
        ))
        .into());
    }
    if !(cutoff > 0.0) {
        return Err(
            DomainError::Invalid(format!("cutoff must be positive, got {cutoff}")).into(),
        );
    }
    let n = grid_size;
    let d_lam = 2.0 * cutoff / n as f64;
    let dx = std::f64::consts::PI / cutoff;
    let mut buf: Vec<Complex64> = Vec::with_capacity(n);
    for j in 0..n {
        let lam = -cutoff + (j as f64 + 0.5) * d_lam;
        let phi = (-t * char_exponent(chars, lam)?).exp();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        buf.push(phi * sign);
    }
    let edge = (-t * char_exponent(chars, cutoff)?).exp().norm();
    let warning = (edge > 1e-8).then(|| {
        format!(
            "characteristic function magnitude {edge:.3e} at the cutoff {cutoff}; \
             increase the cutoff for full resolution"
        )
    });
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = d_lam / (2.0 * std::f64::consts::PI);
    let points = (0..n)
        .map(|m| {
            let x = (m as f64 - n as f64 / 2.0) * dx;
            let phase = Complex64::new(0.0, (cutoff - 0.5 * d_lam) * x).exp();
            (x, scale * (phase * buf[m]).re)
        })
        .collect();
    Ok(DensityTable { points, warning })
}

/// Convenience: oracle comparison across a λ grid, returning the worst
/// absolute disagreement.
pub fn worst_oracle_error(
    chars: &LampertiCharacteristics,
    lambdas: &[f64],
) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for &lam in lambdas {
        let ev = evaluate(chars, lam, true)?;
        worst = worst.max(ev.abs_error.unwrap_or(f64::INFINITY));
    }
    Ok(worst)
}
