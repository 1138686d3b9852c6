//! The jump measure and the constants derived from it.
//!
//! A process in this family is specified by a stability index α ∈ (0, 2), a
//! finite set of directions ξ = ±1 carrying weights σ and tilts f(ξ), and a
//! linear term θ. The jump measure has radial density
//! σ(ξ) e^{r f(ξ)} (e^r - 1)^{-(α+1)} in each charged direction, so it is
//! α-stable-like near the origin with exponentially light tails of rate
//! α + 1 - f(ξ).

use crate::quad::{integrate, integrate_exp_tail, QuadratureSpec};
use crate::{DomainError, Error, NumericalError};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// One charged direction of the spherical measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    /// Unit direction, +1 or -1.
    pub xi: f64,
    /// Weight σ({ξ}) > 0.
    pub sigma: f64,
    /// Tilt f(ξ) < α + 1.
    pub f: f64,
}

/// Validated parameter set (α, σ, f, θ) of one process.
///
/// By convention f(+1) is called β, f(-1) is called ρ, and the weights are
/// c₊ = σ({+1}) and c₋ = σ({-1}).
#[derive(Debug, Clone, PartialEq)]
pub struct LampertiCharacteristics {
    alpha: f64,
    directions: Vec<Direction>,
    theta: f64,
}

impl LampertiCharacteristics {
    /// Builds and validates a parameter set with the linear term given.
    pub fn new(
        alpha: f64,
        directions: Vec<Direction>,
        theta: f64,
    ) -> Result<Self, DomainError> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(DomainError::AlphaOutOfRange(alpha));
        }
        if directions.is_empty() {
            return Err(DomainError::EmptyMeasure);
        }
        let mut seen_plus = false;
        let mut seen_minus = false;
        for d in &directions {
            if d.xi == 1.0 {
                if seen_plus {
                    return Err(DomainError::Invalid(
                        "direction +1 listed more than once".into(),
                    ));
                }
                seen_plus = true;
            } else if d.xi == -1.0 {
                if seen_minus {
                    return Err(DomainError::Invalid(
                        "direction -1 listed more than once".into(),
                    ));
                }
                seen_minus = true;
            } else {
                return Err(DomainError::Invalid(format!(
                    "direction must be +1 or -1, got {}",
                    d.xi
                )));
            }
            if !(d.sigma > 0.0 && d.sigma.is_finite()) {
                return Err(DomainError::BadWeight(d.sigma));
            }
            if !(d.f < alpha + 1.0) {
                return Err(DomainError::TiltTooLarge { f: d.f, alpha });
            }
        }
        if !theta.is_finite() {
            return Err(DomainError::Invalid(format!(
                "linear term must be finite, got {theta}"
            )));
        }
        Ok(LampertiCharacteristics { alpha, directions, theta })
    }

    /// Builds a parameter set from the drift coefficient instead of θ.
    ///
    /// Only finite-variation processes (α < 1) have a drift coefficient;
    /// it determines θ through 𝐝 = -θ - ∫_{|x|≤1} x ν(dx).
    pub fn with_drift(
        alpha: f64,
        directions: Vec<Direction>,
        drift: f64,
    ) -> Result<Self, DomainError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(DomainError::Invalid(format!(
                "the drift parameterization needs α in (0, 1), got {alpha}"
            )));
        }
        if !drift.is_finite() {
            return Err(DomainError::Invalid(format!(
                "drift must be finite, got {drift}"
            )));
        }
        let mut chars = Self::new(alpha, directions, 0.0)?;
        let inner = inner_linear_moment(&chars).map_err(|e| {
            DomainError::Invalid(format!("small-jump moment failed: {e}"))
        })?;
        chars.theta = -drift - inner;
        Ok(chars)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn direction_with_sign(&self, xi: f64) -> Option<&Direction> {
        self.directions.iter().find(|d| d.xi == xi)
    }

    /// Tilt of the +1 direction (β), if charged.
    pub fn beta(&self) -> Option<f64> {
        self.direction_with_sign(1.0).map(|d| d.f)
    }

    /// Tilt of the -1 direction (ρ), if charged.
    pub fn rho(&self) -> Option<f64> {
        self.direction_with_sign(-1.0).map(|d| d.f)
    }

    /// Weight of the +1 direction (c₊), zero if uncharged.
    pub fn c_plus(&self) -> f64 {
        self.direction_with_sign(1.0).map_or(0.0, |d| d.sigma)
    }

    /// Weight of the -1 direction (c₋), zero if uncharged.
    pub fn c_minus(&self) -> f64 {
        self.direction_with_sign(-1.0).map_or(0.0, |d| d.sigma)
    }

    /// Total mass m = σ(S⁰) of the spherical measure.
    pub fn total_mass(&self) -> f64 {
        self.directions.iter().map(|d| d.sigma).sum()
    }

    /// Largest tilt γ = max f(ξ); all tail decay rates are at least α+1-γ.
    pub fn max_tilt(&self) -> f64 {
        self.directions.iter().map(|d| d.f).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Drift coefficient 𝐝 = -θ - ∫_{|x|≤1} x ν(dx); only defined for α < 1.
    pub fn drift(&self) -> Result<Option<f64>, NumericalError> {
        if self.alpha >= 1.0 {
            return Ok(None);
        }
        Ok(Some(-self.theta - inner_linear_moment(self)?))
    }

    /// Mean of the unit-time marginal, -θ + ∫_{|x|≥1} x ν(dx).
    pub fn mean(&self) -> Result<f64, NumericalError> {
        let spec = QuadratureSpec::default();
        let mut m = -self.theta;
        for d in &self.directions {
            m += d.xi
                * d.sigma
                * radial_integral(self.alpha, d.f, |r| r, 1.0, &spec)?;
        }
        Ok(m)
    }
}

/// ln(e^r - 1) without overflow or cancellation.
pub(crate) fn ln_exp_m1(r: f64) -> f64 {
    if r > 30.0 {
        r + (-(-r).exp()).ln_1p()
    } else {
        r.exp_m1().ln()
    }
}

/// The bare radial kernel e^{rf}(e^r - 1)^{-(α+1)}, without the weight σ.
pub(crate) fn radial_kernel(alpha: f64, f: f64, r: f64) -> f64 {
    (f * r - (alpha + 1.0) * ln_exp_m1(r)).exp()
}

/// ln((e^r - 1)/r), the smooth part of the kernel logarithm, for r ≤ 700.
pub(crate) fn ln_exp_m1_ratio(r: f64) -> f64 {
    (r.exp_m1() / r).ln()
}

/// 1 - x - e^{-x} without cancellation near zero (≈ -x²/2 there).
pub(crate) fn one_minus_x_minus_exp_neg(x: f64) -> f64 {
    if x.abs() < 0.01 {
        -x * x / 2.0
            * (1.0 - x / 3.0 * (1.0 - x / 4.0 * (1.0 - x / 5.0 * (1.0 - x / 6.0))))
    } else {
        1.0 - x - (-x).exp()
    }
}

/// e^x - 1 - x without cancellation near zero (≈ x²/2 there).
pub(crate) fn exp_m1_minus_x(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        x * x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0)))
    } else {
        x.exp_m1() - x
    }
}

/// r/2 - ln((e^r - 1)/r) without cancellation near zero (≈ -r²/24 there).
pub(crate) fn half_r_minus_ln_ratio(r: f64) -> f64 {
    if r.abs() < 0.01 {
        let r2 = r * r;
        -r2 / 24.0 * (1.0 - r2 / 120.0)
    } else {
        r / 2.0 - ln_exp_m1_ratio(r)
    }
}

/// ∫_0^1 r^{-α} (e^{h(r)} - 1) dr with h(r) = f r - (α+1) ln((e^r - 1)/r).
///
/// The integrand behaves like (f - (α+1)/2) r^{1-α} at zero, which is an
/// unbounded endpoint for α > 1; that leading power is integrated in closed
/// form and quadrature only sees the O(r^{2-α}) remainder.
pub(crate) fn compensated_small_jump_integral(
    alpha: f64,
    f: f64,
    spec: &QuadratureSpec,
) -> Result<f64, NumericalError> {
    let a1 = f - (alpha + 1.0) / 2.0;
    let remainder = integrate(
        |r| {
            let gap = (alpha + 1.0) * half_r_minus_ln_ratio(r);
            let h = a1 * r + gap;
            r.powf(-alpha) * (exp_m1_minus_x(h) + gap)
        },
        0.0,
        1.0,
        spec,
    )?;
    Ok(a1 / (2.0 - alpha) + remainder)
}

/// ∫_lo^∞ w(r) e^{rf} (e^r - 1)^{-(α+1)} dr for a polynomially bounded
/// weight w, splitting at the singular window edge and switching to the
/// analytic exponential-tail rule at the far end.
fn radial_integral<W: Fn(f64) -> f64>(
    alpha: f64,
    f: f64,
    weight: W,
    lo: f64,
    spec: &QuadratureSpec,
) -> Result<f64, NumericalError> {
    let rate = alpha + 1.0 - f;
    let g = |r: f64| weight(r) * radial_kernel(alpha, f, r);
    if lo < spec.split_point {
        let head = integrate(g, lo, spec.split_point, spec)?;
        let tail = integrate_exp_tail(g, spec.split_point, rate, spec)?;
        Ok(head + tail)
    } else {
        integrate_exp_tail(g, lo, rate, spec)
    }
}

/// Jump density in direction k at radius r, including the weight σ_k.
pub fn density(
    chars: &LampertiCharacteristics,
    direction_index: usize,
    r: f64,
) -> Result<f64, DomainError> {
    let d = chars
        .directions
        .get(direction_index)
        .ok_or_else(|| DomainError::Invalid(format!("no direction {direction_index}")))?;
    if !(r > 0.0) {
        return Err(DomainError::Invalid(format!(
            "radius must be positive, got {r}"
        )));
    }
    Ok(d.sigma * radial_kernel(chars.alpha, d.f, r))
}

/// Mass of direction k beyond radius x, ∫_x^∞ density dr.
pub fn tail(
    chars: &LampertiCharacteristics,
    direction_index: usize,
    x: f64,
) -> Result<f64, Error> {
    tail_with(chars, direction_index, x, &QuadratureSpec::default())
}

/// [`tail`] with explicit quadrature controls.
pub fn tail_with(
    chars: &LampertiCharacteristics,
    direction_index: usize,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let d = chars
        .directions
        .get(direction_index)
        .ok_or_else(|| DomainError::Invalid(format!("no direction {direction_index}")))?;
    if !(x > 0.0) {
        return Err(
            DomainError::Invalid(format!("tail cutoff must be positive, got {x}")).into(),
        );
    }
    Ok(d.sigma * radial_integral(chars.alpha, d.f, |_| 1.0, x, spec)?)
}

/// Which side of the unit radius a truncated moment integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentRegion {
    /// Jumps of magnitude at most one.
    Inner,
    /// Jumps of magnitude above one.
    Outer,
}

/// A truncated absolute moment, which may fail to converge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncatedMoment {
    Finite(f64),
    /// The small-jump integral diverges (p ≤ α).
    Divergent,
}

impl TruncatedMoment {
    pub fn value(self) -> Option<f64> {
        match self {
            TruncatedMoment::Finite(v) => Some(v),
            TruncatedMoment::Divergent => None,
        }
    }
}

/// ∫ |x|^p ν(dx) over the inner or outer region.
///
/// The inner moment is finite exactly when p > α; divergence is reported as
/// a value, not an error, because classification logic branches on it.
pub fn truncated_moment(
    chars: &LampertiCharacteristics,
    p: f64,
    region: MomentRegion,
) -> Result<TruncatedMoment, Error> {
    truncated_moment_with(chars, p, region, &QuadratureSpec::default())
}

/// [`truncated_moment`] with explicit quadrature controls.
pub fn truncated_moment_with(
    chars: &LampertiCharacteristics,
    p: f64,
    region: MomentRegion,
    spec: &QuadratureSpec,
) -> Result<TruncatedMoment, Error> {
    if !(p > 0.0) {
        return Err(
            DomainError::Invalid(format!("moment order must be positive, got {p}")).into(),
        );
    }
    if region == MomentRegion::Inner && p <= chars.alpha {
        return Ok(TruncatedMoment::Divergent);
    }
    let mut total = 0.0;
    for d in &chars.directions {
        total += d.sigma
            * match region {
                MomentRegion::Inner => integrate(
                    |r| r.powf(p) * radial_kernel(chars.alpha, d.f, r),
                    0.0,
                    1.0,
                    spec,
                )?,
                MomentRegion::Outer => {
                    radial_integral(chars.alpha, d.f, |r| r.powf(p), 1.0, spec)?
                }
            };
    }
    Ok(TruncatedMoment::Finite(total))
}

/// Largest exponential-moment order: E[e^{ζ|X_t|}] is finite iff ζ is below
/// α + 1 - max f.
pub fn exp_moment_threshold(chars: &LampertiCharacteristics) -> f64 {
    chars.alpha + 1.0 - chars.max_tilt()
}

/// ∫_{|x|≤1} x ν(dx), the signed small-jump first moment.
///
/// The integrand r^{-α} h(r) has h analytic with h(0) = 1, so the singular
/// power is integrated in closed form and quadrature only sees the smooth
/// remainder; this keeps the value accurate arbitrarily close to α = 1.
pub fn inner_linear_moment(
    chars: &LampertiCharacteristics,
) -> Result<f64, NumericalError> {
    let alpha = chars.alpha;
    if alpha >= 1.0 {
        return Err(NumericalError::QuadratureNoConvergence(format!(
            "the small-jump first moment diverges for α = {alpha} ≥ 1"
        )));
    }
    let spec = QuadratureSpec::default();
    let mut total = 0.0;
    for d in &chars.directions {
        let reg = compensated_small_jump_integral(alpha, d.f, &spec)?;
        total += d.xi * d.sigma * (reg + 1.0 / (1.0 - alpha));
    }
    Ok(total)
}

/// Which scaling limit a centering vector feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitRegime {
    ShortTime,
    LongTime,
}

/// Centering constant η of the two scaling limits.
///
/// Short-time: zero at α = 1, the signed small-jump first moment for
/// α < 1, and the signed large-jump first moment for α > 1. Long-time:
/// minus the signed large-jump first moment.
pub fn eta_centering(
    chars: &LampertiCharacteristics,
    regime: LimitRegime,
) -> Result<f64, NumericalError> {
    let spec = QuadratureSpec::default();
    let signed_outer = |chars: &LampertiCharacteristics| -> Result<f64, NumericalError> {
        let mut total = 0.0;
        for d in &chars.directions {
            total += d.xi
                * d.sigma
                * radial_integral(chars.alpha, d.f, |r| r, 1.0, &spec)?;
        }
        Ok(total)
    };
    match regime {
        LimitRegime::ShortTime => {
            if chars.alpha == 1.0 {
                Ok(0.0)
            } else if chars.alpha < 1.0 {
                inner_linear_moment(chars)
            } else {
                signed_outer(chars)
            }
        }
        LimitRegime::LongTime => Ok(-signed_outer(chars)?),
    }
}

/// The centering integral ã_f: three pieces, the first two over (0, 1] and
/// the third, which does not depend on f, in closed form.
pub fn atil(alpha: f64, f: f64) -> Result<f64, NumericalError> {
    let spec = QuadratureSpec::default();
    let c = alpha - f;
    let pow = |x: f64| (-(alpha + 1.0) * (-(-x).exp_m1()).ln()).exp();
    let i1 = integrate(
        |x| x * (-x).exp() * (-(-c * x).exp_m1()) * pow(x),
        0.0,
        1.0,
        &spec,
    )?;
    let i2 = integrate(
        |x| (-x).exp() * one_minus_x_minus_exp_neg(x) * pow(x),
        0.0,
        1.0,
        &spec,
    )?;
    let l = (-(-1.0f64).exp()).ln_1p();
    let i3 = if alpha == 1.0 {
        -l
    } else {
        -((1.0 - alpha) * l).exp_m1() / (1.0 - alpha)
    };
    Ok(i1 + i2 + i3)
}

/// The centering constants of the closed-form exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralConstants {
    /// ã_β for the +1 direction, when charged.
    pub a_tilde_plus: Option<f64>,
    /// ã_ρ for the -1 direction, when charged.
    pub b_tilde_minus: Option<f64>,
    /// Effective linear term of the closed-form exponent.
    pub theta_tilde: f64,
}

/// Evaluates ã on each charged direction and assembles the effective linear
/// term θ̃ of the closed-form exponent, branching on the index regime.
pub fn structural_constants(
    chars: &LampertiCharacteristics,
) -> Result<StructuralConstants, NumericalError> {
    let alpha = chars.alpha;
    let a_tilde_plus = match chars.beta() {
        Some(beta) => Some(atil(alpha, beta)?),
        None => None,
    };
    let b_tilde_minus = match chars.rho() {
        Some(rho) => Some(atil(alpha, rho)?),
        None => None,
    };
    let theta_tilde = if alpha < 1.0 {
        // equals -𝐝
        chars.theta + inner_linear_moment(chars)?
    } else {
        let shift = if alpha == 1.0 {
            1.0 - EULER_GAMMA
        } else {
            1.0 / (alpha - 1.0)
        };
        let mut correction = 0.0;
        for d in &chars.directions {
            correction += d.xi * d.sigma * (atil(alpha, d.f)? + shift);
        }
        chars.theta - correction
    };
    Ok(StructuralConstants { a_tilde_plus, b_tilde_minus, theta_tilde })
}

/// Second moment of the jump measure, Σ σ_k ∫ r² e^{rf}(e^r-1)^{-(α+1)} dr.
///
/// In one dimension the covariance matrix of the long-time Gaussian limit
/// is this scalar.
pub fn covariance(chars: &LampertiCharacteristics) -> Result<f64, NumericalError> {
    let spec = QuadratureSpec::default();
    let mut total = 0.0;
    for d in &chars.directions {
        total += d.sigma
            * radial_integral(chars.alpha, d.f, |r| r * r, 0.0, &spec)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chars_1d(
        alpha: f64,
        beta: Option<(f64, f64)>,
        rho: Option<(f64, f64)>,
        theta: f64,
    ) -> LampertiCharacteristics {
        let mut dirs = Vec::new();
        if let Some((f, sigma)) = beta {
            dirs.push(Direction { xi: 1.0, sigma, f });
        }
        if let Some((f, sigma)) = rho {
            dirs.push(Direction { xi: -1.0, sigma, f });
        }
        LampertiCharacteristics::new(alpha, dirs, theta).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let d = |xi: f64, sigma: f64, f: f64| Direction { xi, sigma, f };
        assert!(LampertiCharacteristics::new(0.0, vec![d(1.0, 1.0, 0.0)], 0.0).is_err());
        assert!(LampertiCharacteristics::new(2.0, vec![d(1.0, 1.0, 0.0)], 0.0).is_err());
        assert!(LampertiCharacteristics::new(f64::NAN, vec![d(1.0, 1.0, 0.0)], 0.0).is_err());
        assert!(LampertiCharacteristics::new(0.5, vec![], 0.0).is_err());
        assert!(LampertiCharacteristics::new(0.5, vec![d(0.5, 1.0, 0.0)], 0.0).is_err());
        assert!(LampertiCharacteristics::new(0.5, vec![d(1.0, -1.0, 0.0)], 0.0).is_err());
        assert!(LampertiCharacteristics::new(0.5, vec![d(1.0, 1.0, 1.5)], 0.0).is_err());
        assert!(LampertiCharacteristics::new(
            0.5,
            vec![d(1.0, 1.0, 0.0), d(1.0, 1.0, 0.1)],
            0.0
        )
        .is_err());
        assert!(LampertiCharacteristics::new(0.5, vec![d(1.0, 1.0, 1.49)], 0.0).is_ok());
    }

    #[test]
    fn density_at_log_two_is_two() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let v = density(&chars, 0, 2.0f64.ln()).unwrap();
        assert!((v - 2.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn density_matches_stable_small_radius_limit() {
        let chars = chars_1d(0.7, Some((1.0, 1.3)), None, 0.0);
        let r = 1e-9;
        let v = density(&chars, 0, r).unwrap() * r.powf(1.7);
        assert!((v - 1.3).abs() < 1e-7, "{v}");
    }

    #[test]
    fn density_matches_direct_evaluation() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let direct = 5.0f64.exp() / (5.0f64.exp() - 1.0).powf(1.5);
        let v = density(&chars, 0, 5.0).unwrap();
        assert!((v - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn density_rejects_nonpositive_radius() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        assert!(density(&chars, 0, 0.0).is_err());
        assert!(density(&chars, 0, -1.0).is_err());
        assert!(density(&chars, 1, 1.0).is_err());
    }

    #[test]
    fn tail_has_stable_power_near_zero() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let x = 1e-4f64;
        let v = x.powf(0.5) * tail(&chars, 0, x).unwrap();
        assert!((v - 2.0).abs() < 0.02, "{v}");
    }

    #[test]
    fn tail_ratio_shows_exponential_class_rate() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let ratio = tail(&chars, 0, 29.0).unwrap() / tail(&chars, 0, 30.0).unwrap();
        let want = 0.5f64.exp();
        assert!((ratio - want).abs() < 1e-3 * want, "{ratio} vs {want}");
    }

    #[test]
    fn tail_derivative_is_minus_density() {
        let chars = chars_1d(1.2, Some((0.4, 1.0)), Some((-0.5, 0.6)), 0.0);
        for x in [0.1, 1.0, 5.0] {
            let h = 1e-5 * x;
            let fd = (tail(&chars, 0, x - h).unwrap() - tail(&chars, 0, x + h).unwrap())
                / (2.0 * h);
            let g = density(&chars, 0, x).unwrap();
            assert!((fd - g).abs() < 1e-6 * g, "x={x}: {fd} vs {g}");
        }
    }

    #[test]
    fn truncated_moments_flag_divergence_at_alpha() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        assert_eq!(
            truncated_moment(&chars, 0.4, MomentRegion::Inner).unwrap(),
            TruncatedMoment::Divergent
        );
        assert_eq!(
            truncated_moment(&chars, 0.5, MomentRegion::Inner).unwrap(),
            TruncatedMoment::Divergent
        );
        assert!(matches!(
            truncated_moment(&chars, 0.6, MomentRegion::Inner).unwrap(),
            TruncatedMoment::Finite(v) if v > 0.0
        ));
        for alpha in [0.3, 1.0, 1.7] {
            let chars = chars_1d(alpha, Some((0.5, 1.0)), None, 0.0);
            assert!(matches!(
                truncated_moment(&chars, 2.0, MomentRegion::Inner).unwrap(),
                TruncatedMoment::Finite(v) if v.is_finite() && v > 0.0
            ));
        }
    }

    #[test]
    fn outer_moment_is_stable_under_refinement() {
        let chars = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let coarse = truncated_moment(&chars, 1.0, MomentRegion::Outer)
            .unwrap()
            .value()
            .unwrap();
        let fine_spec = QuadratureSpec {
            rel_tol: 5e-12,
            abs_tol: 5e-14,
            ..QuadratureSpec::default()
        };
        let fine = truncated_moment_with(&chars, 1.0, MomentRegion::Outer, &fine_spec)
            .unwrap()
            .value()
            .unwrap();
        assert!((coarse - fine).abs() < 1e-8 * fine.abs(), "{coarse} vs {fine}");
    }

    #[test]
    fn exp_moment_threshold_takes_the_worst_direction() {
        assert!(
            (exp_moment_threshold(&chars_1d(0.5, Some((1.0, 1.0)), Some((1.0, 2.0)), 0.0))
                - 0.5)
                .abs()
                < 1e-15
        );
        assert!(
            (exp_moment_threshold(&chars_1d(1.5, Some((0.0, 1.0)), Some((0.0, 1.0)), 0.0))
                - 2.5)
                .abs()
                < 1e-15
        );
        assert!(
            (exp_moment_threshold(&chars_1d(0.9, Some((1.8, 1.0)), Some((0.0, 1.0)), 0.0))
                - 0.1)
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn centering_is_zero_at_alpha_one_short_time() {
        let chars = chars_1d(1.0, Some((0.9, 2.0)), Some((0.3, 0.5)), 0.4);
        assert_eq!(eta_centering(&chars, LimitRegime::ShortTime).unwrap(), 0.0);
    }

    #[test]
    fn centering_vanishes_for_symmetric_measures_long_time() {
        let chars = chars_1d(1.3, Some((0.7, 1.4)), Some((0.7, 1.4)), 0.0);
        let eta = eta_centering(&chars, LimitRegime::LongTime).unwrap();
        assert!(eta.abs() < 1e-12, "{eta}");
    }

    #[test]
    fn centering_matches_reference_values() {
        let below = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let v = eta_centering(&below, LimitRegime::ShortTime).unwrap();
        assert!((v - 2.150_678_672_440_573_3).abs() < 1e-9, "{v}");
        let long = eta_centering(&below, LimitRegime::LongTime).unwrap();
        assert!((long + 4.132_506_634_739_013_2).abs() < 1e-9, "{long}");
        let above = chars_1d(1.5, Some((0.5, 1.0)), None, 0.0);
        let v = eta_centering(&above, LimitRegime::ShortTime).unwrap();
        assert!((v - 0.199_704_082_160_914_67).abs() < 1e-9, "{v}");
    }

    /// Frozen high-precision evaluations of the three-part centering
    /// integral, recomputed independently at 25-digit working precision.
    #[test]
    fn atil_matches_reference_values() {
        let table = [
            (1.5, 0.5, 1.381_429_896_987_435_5),
            (1.5, -0.3, 2.521_619_289_916_982_7),
            (1.5, 1.0, 0.538_624_104_671_481_14),
            (1.2, -1.0, 1.807_580_748_233_772_7),
            (1.2, 2.0, -1.311_383_526_391_477_3),
            (1.0, 0.5, 0.473_226_968_029_357_89),
            (1.0, -0.2, 0.937_072_137_925_036_33),
            (1.0, 1.0, 0.040_651_852_256_408_315),
            (1.7, 2.6, -4.767_231_163_767_194_5),
            (1.7, 1.4, -0.080_829_693_512_472_57),
        ];
        for (alpha, f, want) in table {
            let got = atil(alpha, f).unwrap();
            assert!(
                (got - want).abs() < 1e-9 * (1.0 + want.abs()),
                "ã({alpha}, {f}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn atil_first_piece_vanishes_when_tilt_equals_alpha() {
        // with f = α the first integrand is identically zero, so ã reduces
        // to the remaining two pieces; recompute them here directly
        let alpha = 1.5f64;
        let spec = QuadratureSpec::default();
        let pow =
            |x: f64| (-(alpha + 1.0) * (-(-x).exp_m1()).ln()).exp();
        let i2 = integrate(
            |x| (-x).exp() * one_minus_x_minus_exp_neg(x) * pow(x),
            0.0,
            1.0,
            &spec,
        )
        .unwrap();
        let l = (-(-1.0f64).exp()).ln_1p();
        let i3 = -((1.0 - alpha) * l).exp_m1() / (1.0 - alpha);
        let got = atil(alpha, alpha).unwrap();
        assert!((got - (i2 + i3)).abs() < 1e-12, "{got} vs {}", i2 + i3);
    }

    /// Frozen θ̃ values covering all three index regimes.
    #[test]
    fn theta_tilde_matches_reference_values() {
        let cases = [
            (1.5, Some((0.5, 1.0)), Some((-0.3, 0.7)), 0.2, -0.016_296_394_045_547_808),
            (1.2, Some((-1.0, 0.8)), Some((2.0, 1.1)), 0.0, -1.388_586_477_617_642_9),
            (1.0, Some((0.5, 1.0)), Some((-0.2, 1.0)), 0.3, 0.763_845_169_895_678_44),
            (1.0, Some((0.9, 2.0)), Some((0.9, 0.5)), 0.0, -0.837_588_213_093_892_16),
            (1.7, Some((2.6, 0.6)), Some((1.4, 1.2)), -0.4, 3.220_485_923_290_706_9),
            (0.5, Some((0.9, 1.3)), Some((0.4, 0.6)), -0.1, 1.538_580_041_860_251_1),
        ];
        for (alpha, beta, rho, theta, want) in cases {
            let chars = chars_1d(alpha, beta, rho, theta);
            let got = structural_constants(&chars).unwrap().theta_tilde;
            assert!(
                (got - want).abs() < 5e-9,
                "θ̃(α={alpha}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn theta_tilde_below_one_is_minus_drift() {
        let dirs = vec![
            Direction { xi: 1.0, sigma: 1.0, f: 0.8 },
            Direction { xi: -1.0, sigma: 0.4, f: -0.2 },
        ];
        let chars = LampertiCharacteristics::with_drift(0.6, dirs, 0.7).unwrap();
        assert!((chars.drift().unwrap().unwrap() - 0.7).abs() < 1e-10);
        let sc = structural_constants(&chars).unwrap();
        assert!((sc.theta_tilde + 0.7).abs() < 1e-10, "{}", sc.theta_tilde);
    }

    #[test]
    fn covariance_matches_reference_and_symmetry() {
        let sym = chars_1d(0.5, Some((1.0, 1.0)), Some((1.0, 1.0)), 0.0);
        let v = covariance(&sym).unwrap();
        assert!((v - 34.841_377_444_857_634).abs() < 1e-8 * v, "{v}");
        let single = chars_1d(0.5, Some((1.0, 1.0)), None, 0.0);
        let half = covariance(&single).unwrap();
        assert!((half - 17.420_688_722_428_817).abs() < 1e-8 * half, "{half}");
        assert!((v - 2.0 * half).abs() < 1e-10 * v);
    }

    #[test]
    fn mean_matches_reference_value() {
        let chars = chars_1d(1.5, Some((0.5, 1.0)), Some((-0.3, 0.7)), 0.2);
        let m = chars.mean().unwrap();
        assert!((m + 0.045_094_186_014_5).abs() < 1e-9, "{m}");
    }

    fn arb_chars() -> impl Strategy<Value = LampertiCharacteristics> {
        (
            0.1f64..1.9,
            -2.0f64..0.9,
            -2.0f64..0.9,
            0.2f64..2.0,
            0.2f64..2.0,
            -1.0f64..1.0,
        )
            .prop_map(|(alpha, fp_off, fm_off, sp, sm, theta)| {
                let dirs = vec![
                    Direction { xi: 1.0, sigma: sp, f: alpha + fp_off },
                    Direction { xi: -1.0, sigma: sm, f: alpha + fm_off },
                ];
                LampertiCharacteristics::new(alpha, dirs, theta).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn tail_is_strictly_decreasing(chars in arb_chars(), x in 0.05f64..3.0) {
            let t1 = tail(&chars, 0, x).unwrap();
            let t2 = tail(&chars, 0, x * 1.5).unwrap();
            prop_assert!(t1 > t2);
            prop_assert!(t2 > 0.0);
        }

        #[test]
        fn square_moment_and_unit_tail_are_finite(chars in arb_chars()) {
            let inner = truncated_moment(&chars, 2.0, MomentRegion::Inner).unwrap();
            prop_assert!(matches!(inner, TruncatedMoment::Finite(v) if v.is_finite()));
            let t = tail(&chars, 0, 1.0).unwrap() + tail(&chars, 1, 1.0).unwrap();
            prop_assert!(t.is_finite() && t > 0.0);
        }

        #[test]
        fn tail_is_stable_under_tolerance_halving(chars in arb_chars()) {
            let spec = QuadratureSpec::default();
            let halved = QuadratureSpec {
                rel_tol: spec.rel_tol / 2.0,
                abs_tol: spec.abs_tol / 2.0,
                ..spec
            };
            let a = tail_with(&chars, 0, 0.7, &spec).unwrap();
            let b = tail_with(&chars, 0, 0.7, &halved).unwrap();
            prop_assert!((a - b).abs() <= 10.0 * spec.rel_tol * a.abs().max(1.0));
        }

        #[test]
        fn covariance_is_positive(chars in arb_chars()) {
            prop_assert!(covariance(&chars).unwrap() > 0.0);
        }
    }
}
