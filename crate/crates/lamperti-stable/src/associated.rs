//! Processes built from one parameter set: the Lévy density of the
//! Ornstein-Uhlenbeck driver whose stationary law has those characteristics,
//! the spectrally negative parent whose descending ladder height is the
//! increasing process, the binomial expansion of the jump tail, and scale
//! functions of the parent in the three tractable regimes.
//!
//! The tail expansion comes from (1-e^{-r})^{-(α+1)} = Σ_j (α+1)_j/j! e^{-jr},
//! integrated term by term: with q_j = α+1-β+j,
//!
//!   ∫_x^∞ e^{βr}(e^r-1)^{-(α+1)} dr = Σ_j (α+1)_j/j! · e^{-q_j x}/q_j.
//!
//! Integrating once more gives the killed-ladder scale function as
//! W(x) = k·x + c₊(S(0) - S(x)) with S(x) = Σ_j (α+1)_j/j! · e^{-q_j x}/q_j²
//! and k the killing rate. S(0) converges too slowly to sum directly (the
//! terms decay like j^{α-2}), but it equals the mean of the unit-time ladder
//! height, S(0) = (k/c₊)(ψ₀(1-β+α) - ψ₀(1-β)), so only the geometrically
//! convergent S(x) is ever summed.

use crate::measure::{self, LampertiCharacteristics};
use crate::quad::{self, QuadratureSpec};
use crate::specfun::{digamma_re, gamma, pochhammer};
use crate::{exponents, DomainError, Error, NumericalError};

/// Hard cap on summed series terms before reporting non-convergence.
const MAX_SERIES_TERMS: usize = 100_000;
/// Absolute remainder target for the killed scale-function series.
const KILLED_SERIES_TOL: f64 = 1e-15;
/// Largest admissible |drift| for a process treated as pure-jump increasing.
const DRIFT_TOL: f64 = 1e-9;

/// Lévy density at x ≠ 0 of the background driving process whose stationary
/// Ornstein-Uhlenbeck law, at reversion rate `c`, has the given
/// characteristics.
///
/// If g is the jump density of the stationary law, the driver's density on
/// each side is c·(-(r·g(r))'), which expands to
/// c·σ·e^{rf}(e^r-1)^{-(α+2)}·(rf + 1 - e^r + r e^r(α+1-f)).
///
/// Requires sup f ≤ α + 1/2 so the stationary law is self-decomposable and
/// the driver density stays nonnegative. A side that carries no jump mass
/// reports density zero.
pub fn ou_driver_density(
    chars: &LampertiCharacteristics,
    c: f64,
    x: f64,
) -> Result<f64, DomainError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(DomainError::Invalid(format!(
            "reversion rate must be positive and finite, got {c}"
        )));
    }
    if !(x != 0.0 && x.is_finite()) {
        return Err(DomainError::Invalid(format!(
            "density argument must be nonzero and finite, got {x}"
        )));
    }
    let alpha = chars.alpha();
    let tilt = chars.max_tilt();
    if tilt > alpha + 0.5 {
        return Err(DomainError::Invalid(format!(
            "the stationary law must be self-decomposable: \
             need sup f ≤ α + 1/2, got sup f = {tilt} with α = {alpha}"
        )));
    }
    let sign = x.signum();
    let Some(d) = chars.directions().iter().find(|d| d.xi == sign) else {
        return Ok(0.0);
    };
    let r = x.abs();
    let spare = alpha + 1.0 - d.f;
    let ln_bracket = if r < 40.0 {
        let bracket = r * d.f - r.exp_m1() + r * r.exp() * spare;
        bracket.ln()
    } else {
        // bracket = r e^r spare · (1 + (rf+1)e^{-r}/(r spare) - 1/(r spare))
        let correction = (r * d.f + 1.0) * (-r).exp() / (r * spare) - 1.0 / (r * spare);
        r + (r * spare).ln() + correction.ln_1p()
    };
    let ln_density = r * d.f - (alpha + 2.0) * measure::ln_exp_m1(r) + ln_bracket;
    Ok(c * d.sigma * ln_density.exp())
}

/// Laplace exponent λ·Φ(λ) of the spectrally negative parent process whose
/// descending ladder height is the given increasing process.
///
/// Requires an increasing pure-jump parameter set: α in (0, 1), no negative
/// jumps, and zero drift. Convex with value 0 at λ = 0.
pub fn parent_laplace(
    chars: &LampertiCharacteristics,
    lambda: f64,
) -> Result<f64, Error> {
    if chars.alpha() < 1.0 {
        let drift = chars.drift()?.expect("drift is defined for α < 1");
        if drift.abs() > DRIFT_TOL * (1.0 + chars.theta().abs()) {
            return Err(DomainError::Invalid(format!(
                "the parent construction needs a pure-jump ladder height; \
                 drift is {drift}"
            ))
            .into());
        }
    }
    Ok(lambda * exponents::laplace_subordinator(chars, lambda)?)
}

/// Lévy density of the parent process at x < 0, in terms of the ladder
/// height's positive-direction tilt β = f(+1) and weight c₊.
///
/// The density splits into two jump densities of the same family with index
/// α+1 and tilts β+1 and β, weighted c₊(α+1-β) and c₊β:
///
///   Π(x) = c₊ e^{βr}(e^r-1)^{-(α+2)} ((α+1-β)e^r + β),  r = -x.
pub fn parent_levy_density(
    chars: &LampertiCharacteristics,
    x: f64,
) -> Result<f64, DomainError> {
    let beta = chars.beta().ok_or_else(|| {
        DomainError::Invalid("the +1 direction must be charged".into())
    })?;
    if beta < 0.0 {
        return Err(DomainError::Invalid(format!(
            "the parent density needs β ≥ 0, got {beta}"
        )));
    }
    if !(x < 0.0) {
        return Err(DomainError::Invalid(format!(
            "the parent jumps are negative; got x = {x}"
        )));
    }
    let alpha = chars.alpha();
    let r = -x;
    let ln_base = -(alpha + 2.0) * measure::ln_exp_m1(r);
    let heavy = (alpha + 1.0 - beta) * ((beta + 1.0) * r + ln_base).exp();
    let light = if beta > 0.0 {
        beta * (beta * r + ln_base).exp()
    } else {
        0.0
    };
    Ok(chars.c_plus() * (heavy + light))
}

/// Jump-tail mass of one direction beyond radius x, evaluated by the
/// binomial series rather than quadrature, with remainder below `tol`.
///
/// Matches [`measure::tail`] for the same direction. The series converges
/// geometrically with ratio e^{-x}, so very small x exhausts the term budget
/// and reports a convergence error.
pub fn tail_series(
    chars: &LampertiCharacteristics,
    direction_index: usize,
    x: f64,
    tol: f64,
) -> Result<f64, Error> {
    let d = chars
        .directions()
        .get(direction_index)
        .copied()
        .ok_or_else(|| DomainError::Invalid(format!("no direction {direction_index}")))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(
            DomainError::Invalid(format!("tail cutoff must be positive, got {x}")).into(),
        );
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(
            DomainError::Invalid(format!("tolerance must be positive, got {tol}")).into(),
        );
    }
    let unit = unit_tail_series(chars.alpha(), d.f, x, tol / d.sigma)?;
    Ok(d.sigma * unit)
}

/// Σ_j (α+1)_j/j! · e^{-q_j x}/q_j with q_j = α+1-f+j, remainder ≤ tol.
///
/// The term ratio is bounded by (α+1+j)/(j+1) · e^{-x}, which decreases in j,
/// so once it drops below one the remainder has a geometric bound.
fn unit_tail_series(alpha: f64, f: f64, x: f64, tol: f64) -> Result<f64, NumericalError> {
    let q0 = alpha + 1.0 - f;
    let ratio = (-x).exp();
    let mut coef = 1.0;
    let mut acc = 0.0;
    for j in 0..MAX_SERIES_TERMS {
        let q = q0 + j as f64;
        let term = coef * (-q * x).exp() / q;
        acc += term;
        let growth = (alpha + 1.0 + j as f64) / (j as f64 + 1.0);
        let s = growth * ratio;
        if s < 1.0 && term * s / (1.0 - s) <= tol {
            return Ok(acc);
        }
        coef *= growth;
    }
    Err(NumericalError::SeriesNoConvergence(format!(
        "the binomial tail series needs more than {MAX_SERIES_TERMS} terms \
         at x = {x} for tolerance {tol}"
    )))
}

/// Which of the three tractable scale-function forms a table was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleVariant {
    /// β = 1: integral of the explicit ladder-tail (1-e^{-y})^{α-1} form.
    Beta1Integral,
    /// β < 1, killed ladder: exponential series plus a linear term.
    KilledSeries,
    /// β < 1, conjugate parent: integral of e^{-(α-β)y}(e^y-1)^{α-1}.
    WstarIntegral,
}

/// Scale function of the parent process tabulated on a grid.
#[derive(Debug, Clone)]
pub struct ScaleFunctionTable {
    /// Strictly increasing nonnegative evaluation points.
    pub x_grid: Vec<f64>,
    /// W at each grid point; W(0) = 0, nondecreasing for the integral forms.
    pub w_values: Vec<f64>,
    /// Formula the values were computed from.
    pub method: ScaleVariant,
}

/// Tabulates the scale function of the parent process on `x_grid`.
///
/// All variants need α in (0, 1) and a charged +1 direction. The
/// [`ScaleVariant::Beta1Integral`] form needs β = 1; the other two need
/// β < 1. Integrands with an algebraic y^{α-1} singularity at zero are
/// integrated in the substituted variable v = (1-e^{-y})^α respectively
/// v = (e^y-1)^α, which removes the singularity exactly.
pub fn scale_function(
    chars: &LampertiCharacteristics,
    variant: ScaleVariant,
    x_grid: &[f64],
) -> Result<ScaleFunctionTable, Error> {
    let alpha = chars.alpha();
    if !(alpha < 1.0) {
        return Err(DomainError::Invalid(format!(
            "scale functions need α in (0, 1), got {alpha}"
        ))
        .into());
    }
    let beta = chars.beta().ok_or_else(|| {
        DomainError::Invalid("the +1 direction must be charged".into())
    })?;
    match variant {
        ScaleVariant::Beta1Integral => {
            if (beta - 1.0).abs() > 1e-12 {
                return Err(DomainError::Invalid(format!(
                    "the explicit integral form needs β = 1, got {beta}"
                ))
                .into());
            }
        }
        ScaleVariant::KilledSeries | ScaleVariant::WstarIntegral => {
            if !(beta < 1.0) {
                return Err(DomainError::Invalid(format!(
                    "the killed and conjugate forms need β < 1, got {beta}"
                ))
                .into());
            }
        }
    }
    if x_grid.is_empty() {
        return Err(DomainError::Invalid("the grid must be nonempty".into()).into());
    }
    if !x_grid.iter().all(|x| x.is_finite() && *x >= 0.0) {
        return Err(
            DomainError::Invalid("grid points must be finite and nonnegative".into()).into(),
        );
    }
    if !x_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(
            DomainError::Invalid("grid points must be strictly increasing".into()).into(),
        );
    }
    let cp = chars.c_plus();
    let spec = QuadratureSpec::default();
    let mut w_values = Vec::with_capacity(x_grid.len());
    match variant {
        ScaleVariant::Beta1Integral => {
            let scale = alpha / (gamma(alpha) * gamma(1.0 - alpha));
            let mut acc = 0.0;
            let mut prev = 0.0;
            for &x in x_grid {
                acc += scale * beta1_segment(alpha, prev, x, &spec)?;
                prev = x;
                w_values.push(acc);
            }
        }
        ScaleVariant::WstarIntegral => {
            let scale = 1.0 / (cp * gamma(1.0 - alpha).powi(2));
            let mut acc = 0.0;
            let mut prev = 0.0;
            for &x in x_grid {
                acc += scale * wstar_segment(alpha, beta, prev, x, &spec)?;
                prev = x;
                w_values.push(acc);
            }
        }
        ScaleVariant::KilledSeries => {
            let unit_rate = -gamma(-alpha) * pochhammer(1.0 - beta, alpha);
            let s0 = unit_rate * (digamma_re(1.0 - beta + alpha) - digamma_re(1.0 - beta));
            for &x in x_grid {
                let w = if x == 0.0 {
                    0.0
                } else {
                    cp * (unit_rate * x + s0 - killed_series_sum(alpha, beta, x)?)
                };
                w_values.push(w);
            }
        }
    }
    Ok(ScaleFunctionTable {
        x_grid: x_grid.to_vec(),
        w_values,
        method: variant,
    })
}

/// ∫_a^b (1-e^{-y})^{α-1} dy for 0 ≤ a < b.
///
/// Below y = 1 the integral runs in v = (1-e^{-y})^α, where
/// dy (1-e^{-y})^{α-1} = dv/(α(1-v^{1/α})) and the integrand is bounded by e;
/// above y = 1 the y-space integrand is smooth and of order one.
fn beta1_segment(
    alpha: f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, NumericalError> {
    let mut total = 0.0;
    if a < 1.0 {
        let hi = b.min(1.0);
        let va = (-(-a).exp_m1()).powf(alpha);
        let vb = (-(-hi).exp_m1()).powf(alpha);
        total += quad::integrate(
            |v| 1.0 / (1.0 - v.powf(1.0 / alpha)),
            va,
            vb,
            spec,
        )? / alpha;
    }
    if b > 1.0 {
        let lo = a.max(1.0);
        total += quad::integrate(
            |y| ((alpha - 1.0) * (-(-y).exp()).ln_1p()).exp(),
            lo,
            b,
            spec,
        )?;
    }
    Ok(total)
}

/// ∫_a^b e^{-(α-β)y}(e^y-1)^{α-1} dy for 0 ≤ a < b.
///
/// Below y = 1 the integral runs in v = (e^y-1)^α, where the integrand
/// becomes (1+v^{1/α})^{-(α-β+1)}/α, bounded by 1/α; above y = 1 the
/// y-space integrand e^{(β-1)y}(1-e^{-y})^{α-1} decays exponentially.
fn wstar_segment(
    alpha: f64,
    beta: f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, NumericalError> {
    let mut total = 0.0;
    if a < 1.0 {
        let hi = b.min(1.0);
        let va = a.exp_m1().powf(alpha);
        let vb = hi.exp_m1().powf(alpha);
        total += quad::integrate(
            |v| (1.0 + v.powf(1.0 / alpha)).powf(-(alpha - beta + 1.0)),
            va,
            vb,
            spec,
        )? / alpha;
    }
    if b > 1.0 {
        let lo = a.max(1.0);
        total += quad::integrate(
            |y| ((beta - 1.0) * y + (alpha - 1.0) * (-(-y).exp()).ln_1p()).exp(),
            lo,
            b,
            spec,
        )?;
    }
    Ok(total)
}

/// S(x) = Σ_j (α+1)_j/j! · e^{-q_j x}/q_j², q_j = α+1-β+j, for x > 0.
fn killed_series_sum(alpha: f64, beta: f64, x: f64) -> Result<f64, NumericalError> {
    let q0 = alpha + 1.0 - beta;
    let ratio = (-x).exp();
    let mut coef = 1.0;
    let mut acc = 0.0;
    for j in 0..MAX_SERIES_TERMS {
        let q = q0 + j as f64;
        let term = coef * (-q * x).exp() / (q * q);
        acc += term;
        let growth = (alpha + 1.0 + j as f64) / (j as f64 + 1.0);
        let s = growth * ratio;
        if s < 1.0 && term * s / (1.0 - s) <= KILLED_SERIES_TOL {
            return Ok(acc);
        }
        coef *= growth;
    }
    Err(NumericalError::SeriesNoConvergence(format!(
        "the killed scale-function series needs more than {MAX_SERIES_TERMS} \
         terms at x = {x}"
    )))
}

/// Laplace exponents tied to the killed descending ladder height: the
/// killing rate, the parent's exponent, and the conjugate parent's exponent.
///
/// The killed ladder Laplace exponent is φ(λ) = -c₊Γ(-α)(λ+1-β)_α, positive
/// and increasing, with φ(0) the killing rate. The parent and conjugate
/// exponents multiply to -c₊Γ(-α)λ³.
#[derive(Debug, Clone, Copy)]
pub struct KilledExponents {
    /// φ(0) = -c₊Γ(-α)(1-β)_α > 0.
    pub killing_rate: f64,
    alpha: f64,
    beta: f64,
    c_plus: f64,
}

/// Builds the killed-ladder exponent family. Needs α in (0, 1), a charged
/// +1 direction, and β < 1.
pub fn killed_exponents(
    chars: &LampertiCharacteristics,
) -> Result<KilledExponents, DomainError> {
    let alpha = chars.alpha();
    if !(alpha < 1.0) {
        return Err(DomainError::Invalid(format!(
            "the killed ladder needs α in (0, 1), got {alpha}"
        )));
    }
    let beta = chars.beta().ok_or_else(|| {
        DomainError::Invalid("the +1 direction must be charged".into())
    })?;
    if !(beta < 1.0) {
        return Err(DomainError::Invalid(format!(
            "the killed ladder needs β < 1, got {beta}"
        )));
    }
    let c_plus = chars.c_plus();
    Ok(KilledExponents {
        killing_rate: -c_plus * gamma(-alpha) * pochhammer(1.0 - beta, alpha),
        alpha,
        beta,
        c_plus,
    })
}

impl KilledExponents {
    /// Laplace exponent of the killed ladder subordinator,
    /// φ(λ) = -c₊Γ(-α)(λ+1-β)_α.
    pub fn ladder_laplace(&self, lambda: f64) -> Result<f64, DomainError> {
        require_nonnegative(lambda)?;
        Ok(-self.c_plus
            * gamma(-self.alpha)
            * pochhammer(lambda + 1.0 - self.beta, self.alpha))
    }

    /// Laplace exponent λ²Γ(1-β+λ)/Γ(1-β+λ+α) of the parent process, in the
    /// normalization whose scale function is the killed series form.
    pub fn psi_parent(&self, lambda: f64) -> Result<f64, DomainError> {
        require_nonnegative(lambda)?;
        Ok(lambda * lambda / pochhammer(1.0 - self.beta + lambda, self.alpha))
    }

    /// Laplace exponent λ·φ(λ) of the conjugate parent process.
    pub fn psi_conjugate(&self, lambda: f64) -> Result<f64, DomainError> {
        Ok(lambda * self.ladder_laplace(lambda)?)
    }
}

fn require_nonnegative(lambda: f64) -> Result<(), DomainError> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(DomainError::Invalid(format!(
            "Laplace argument must be nonnegative, got {lambda}"
        )))
    }
}
