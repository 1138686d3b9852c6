//! Classification of path and distributional behaviour: variation,
//! creeping, regularity of the origin, selfdecomposability, and the
//! long-run drift trichotomy of processes with no positive jumps.

use crate::exponents::{
    laplace_spectrally_negative, require_spectrally_negative,
};
use crate::measure::{structural_constants, LampertiCharacteristics};
use crate::specfun::{digamma_re, gamma, pochhammer};
use crate::{DomainError, Error, NumericalError};

/// Total variation of the paths on compact time intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variation {
    Finite,
    Infinite,
}

/// Answer to a path question that the available criteria may leave open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Undetermined,
}

/// Long-run direction of the paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftDirection {
    ToPlusInfinity,
    Oscillates,
    ToMinusInfinity,
}

/// Summary of the path and distributional properties of one process.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    /// Finite exactly when α < 1.
    pub variation: Variation,
    /// Paths have finite p-variation exactly for p above this value (= α).
    pub p_variation_threshold: f64,
    /// Whether the process crosses levels upward continuously.
    pub creeps_up: Answer,
    /// Whether 0 is regular for (0, ∞).
    pub zero_regular_upward: Answer,
    /// Whether the unit-time marginal is selfdecomposable, which holds
    /// exactly when every tilt satisfies f ≤ α + 1/2.
    pub selfdecomposable: bool,
    /// Whether the unit-time marginal belongs to the Jurek class of
    /// s-selfdecomposable laws; true for every valid parameter set.
    pub jurek: bool,
    /// Exponential decay rate α + 1 - β of the upper distribution tail;
    /// infinite when the process has no positive jumps.
    pub tail_class_delta: f64,
    /// Long-run direction, available when the process has no positive
    /// jumps and a vanishing structural linear term.
    pub drift: Option<DriftDirection>,
    /// Root ρ₀ of the drift indicator in (1, 2), in the same case.
    pub rho_zero: Option<f64>,
    /// Positive zero of the one-sided Laplace exponent, available when
    /// the process drifts to -∞.
    pub cramer_root: Option<f64>,
    /// Whether the paths have points of increase; covered only for
    /// processes with no positive jumps.
    pub has_increase_times: Option<bool>,
}

/// Classifies the path and distributional properties of one process.
///
/// Fields that only make sense for processes with no positive jumps and a
/// vanishing structural linear term are left empty when those conditions
/// fail; everything else is total on valid parameter sets.
pub fn classify(chars: &LampertiCharacteristics) -> ClassificationReport {
    let alpha = chars.alpha();
    let variation = if alpha < 1.0 {
        Variation::Finite
    } else {
        Variation::Infinite
    };
    let drift_coeff = chars.drift().ok().flatten();
    let creeps_up = if alpha > 1.0 {
        Answer::No
    } else {
        match drift_coeff {
            Some(d) if d > 0.0 => Answer::Yes,
            Some(d) if d < 0.0 => Answer::No,
            _ => Answer::Undetermined,
        }
    };
    let zero_regular_upward = if alpha >= 1.0 {
        Answer::Yes
    } else {
        match drift_coeff {
            Some(d) if d >= 0.0 => Answer::Yes,
            Some(_) => Answer::No,
            None => Answer::Undetermined,
        }
    };
    let tail_class_delta = match chars.beta() {
        Some(beta) => alpha + 1.0 - beta,
        None => f64::INFINITY,
    };
    let (drift, rho_zero_value) = match drift_classification(chars) {
        Ok((direction, root)) => (Some(direction), Some(root)),
        Err(_) => (None, None),
    };
    let cramer = if drift == Some(DriftDirection::ToMinusInfinity) {
        cramer_root(chars).ok()
    } else {
        None
    };
    let has_increase = has_increase_times(chars).ok();
    ClassificationReport {
        variation,
        p_variation_threshold: alpha,
        creeps_up,
        zero_regular_upward,
        selfdecomposable: chars.max_tilt() <= alpha + 0.5,
        jurek: true,
        tail_class_delta,
        drift,
        rho_zero: rho_zero_value,
        cramer_root: cramer,
        has_increase_times: has_increase,
    }
}

/// Digamma-based indicator whose sign separates the long-run drift regimes
/// of a process with no positive jumps and tilt ρ on the -1 direction:
/// negative means drift to +∞, positive means drift to -∞, and its unique
/// root ρ₀ in (1, 2) marks the oscillating boundary.
///
/// The indicator has poles at every ρ with 1 - ρ a nonpositive integer,
/// diverging to -∞ as ρ ↓ 1 and to +∞ as ρ ↑ 2.
pub fn drift_root_indicator(
    alpha: f64,
    c_minus: f64,
    rho: f64,
) -> Result<f64, DomainError> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(DomainError::Invalid(format!(
            "the drift indicator needs α in (1, 2), got {alpha}"
        )));
    }
    if !(c_minus > 0.0 && c_minus.is_finite()) {
        return Err(DomainError::BadWeight(c_minus));
    }
    if !(rho < alpha + 1.0) {
        return Err(DomainError::TiltTooLarge { f: rho, alpha });
    }
    let base = 1.0 - rho;
    if base <= 0.0 && base == base.round() {
        return Err(DomainError::Invalid(format!(
            "the drift indicator has a pole at ρ = {rho}"
        )));
    }
    let bracket = digamma_re(base + alpha) - digamma_re(base);
    Ok(c_minus * gamma(-alpha) * pochhammer(1.0 + alpha - rho, alpha) * bracket)
}

/// Root ρ₀ of the drift indicator in (1, 2), found by bisection on the
/// bracket [1 + 1e-9, 2 - 1e-9] until |indicator| < 1e-12.
///
/// The root does not depend on the weight c₋, which only scales the
/// indicator.
pub fn rho_zero(alpha: f64, c_minus: f64) -> Result<f64, Error> {
    let mut lo = 1.0 + 1e-9;
    let mut hi = 2.0 - 1e-9;
    let g_lo = drift_root_indicator(alpha, c_minus, lo)?;
    let g_hi = drift_root_indicator(alpha, c_minus, hi)?;
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(NumericalError::RootNoConvergence(format!(
            "drift indicator does not change sign on (1, 2) at α = {alpha}"
        ))
        .into());
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = drift_root_indicator(alpha, c_minus, mid)?;
        if g_mid.abs() < 1e-12 {
            return Ok(mid);
        }
        if g_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(NumericalError::RootNoConvergence(
        "drift indicator stayed above 1e-12 on the final bracket".into(),
    )
    .into())
}

/// Long-run direction of a process with no positive jumps, together with
/// the boundary tilt ρ₀ separating the regimes.
///
/// Requires the structural linear term to vanish; a nonzero one adds a
/// deterministic drift that this trichotomy does not account for.
pub fn drift_classification(
    chars: &LampertiCharacteristics,
) -> Result<(DriftDirection, f64), Error> {
    let (rho, c_minus) = require_spectrally_negative(chars)?;
    let theta_tilde = structural_constants(chars)?.theta_tilde;
    if theta_tilde.abs() > 1e-8 * (1.0 + chars.theta().abs()) {
        return Err(DomainError::Invalid(format!(
            "the drift trichotomy needs a vanishing structural linear term, \
             got {theta_tilde}"
        ))
        .into());
    }
    let root = rho_zero(chars.alpha(), c_minus)?;
    let direction = if (rho - root).abs() <= 1e-9 {
        DriftDirection::Oscillates
    } else if rho < root {
        DriftDirection::ToPlusInfinity
    } else {
        DriftDirection::ToMinusInfinity
    };
    Ok((direction, root))
}

/// Unique positive zero of the one-sided Laplace exponent, which exists
/// when the process drifts to -∞ and gives the exponential decay rate of
/// the all-time supremum.
pub fn cramer_root(chars: &LampertiCharacteristics) -> Result<f64, Error> {
    let (direction, _) = drift_classification(chars)?;
    if direction != DriftDirection::ToMinusInfinity {
        return Err(DomainError::Invalid(
            "a positive zero of the Laplace exponent needs drift to -∞"
                .into(),
        )
        .into());
    }
    let mut lo = 1e-2;
    let mut tries = 0;
    while laplace_spectrally_negative(chars, lo)? >= 0.0 {
        lo /= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(NumericalError::RootNoConvergence(
                "no strictly negative value of the exponent found".into(),
            )
            .into());
        }
    }
    let mut hi = 1.0f64.max(4.0 * lo);
    tries = 0;
    while laplace_spectrally_negative(chars, hi)? <= 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(NumericalError::RootNoConvergence(
                "no positive value of the exponent found".into(),
            )
            .into());
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let value = laplace_spectrally_negative(chars, mid)?;
        if value == 0.0 {
            return Ok(mid);
        }
        if value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Whether the paths of a process with no positive jumps have points of
/// increase.
///
/// The integral test ∫ λ⁻³ Φ(λ) dλ converges at the λ^α growth rate of
/// the Laplace exponent exactly when α - 3 < -1, so the answer is yes
/// throughout α in (1, 2).
pub fn has_increase_times(
    chars: &LampertiCharacteristics,
) -> Result<bool, Error> {
    require_spectrally_negative(chars)?;
    Ok(chars.alpha() - 3.0 < -1.0)
}
