//! Monte Carlo verification of the two scaling limits and the long-run
//! positivity fraction, via empirical characteristic functions.
//!
//! Short-time: h^{-1/α}(X_h - h·d) for α < 1 (d the finite-variation drift),
//! h^{-1}X_h for α = 1, and h^{-1/α}(X_h - h·E[X₁]) for α > 1, compared
//! against the strictly stable law with the same spherical weights. The
//! stable reference exponent is integrated numerically from its jump measure
//! with the matching compensation convention per regime, never taken from a
//! parametric formula, so both routes stay independent.
//!
//! Long-time: h^{-1/2}(X_h - h·E[X₁]) against a centered Gaussian whose
//! variance is the second moment of the jump measure. X_h is assembled from
//! h independent unit-horizon increments so the series truncation cost does
//! not grow with h.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::measure::{self, LampertiCharacteristics};
use crate::quad::{self, QuadratureSpec};
use crate::rng::{DrawKind, Stream};
use crate::simulate::{self, SeriesConfig};
use crate::{exponents, DomainError, Error};

/// Series terms per path for the short-time comparisons.
const SHORT_TIME_TERMS: u64 = 2000;
/// Series terms per unit-horizon block of the long-time comparisons.
const LONG_TIME_BLOCK_TERMS: u64 = 400;
/// Series terms per path for the positivity-fraction estimate.
const SPITZER_TERMS: u64 = 10_000;

/// Empirical vs reference characteristic function on one λ grid.
#[derive(Debug, Clone)]
pub struct ECFReport {
    /// Evaluation points.
    pub lambda_grid: Vec<f64>,
    /// (1/n) Σ e^{iλ x_j} per grid point.
    pub empirical: Vec<Complex64>,
    /// Limiting characteristic function per grid point.
    pub reference: Vec<Complex64>,
    /// max |empirical - reference| over the grid.
    pub sup_distance: f64,
    /// Number of samples behind the empirical curve.
    pub n_samples: u64,
}

/// Empirical characteristic function of `samples` on `lambda_grid`.
pub fn ecf(samples: &[f64], lambda_grid: &[f64]) -> Result<Vec<Complex64>, Error> {
    if samples.is_empty() {
        return Err(DomainError::Invalid("ecf needs at least one sample".into()).into());
    }
    Ok(ecf_unchecked(samples, lambda_grid))
}

fn ecf_unchecked(samples: &[f64], lambda_grid: &[f64]) -> Vec<Complex64> {
    lambda_grid
        .par_iter()
        .map(|&lambda| {
            let mut sum = Complex64::new(0.0, 0.0);
            for &x in samples {
                let (s, c) = (lambda * x).sin_cos();
                sum += Complex64::new(c, s);
            }
            sum / samples.len() as f64
        })
        .collect()
}

fn build_report(
    samples: &[f64],
    lambda_grid: Vec<f64>,
    reference: Vec<Complex64>,
) -> ECFReport {
    let empirical = ecf_unchecked(samples, &lambda_grid);
    let sup_distance = empirical
        .iter()
        .zip(&reference)
        .map(|(e, r)| (e - r).norm())
        .fold(0.0, f64::max);
    ECFReport {
        lambda_grid,
        empirical,
        reference,
        sup_distance,
        n_samples: samples.len() as u64,
    }
}

/// Deterministic per-block seed for independent unit-horizon increments.
fn derived_seed(seed: u64, tag: u64) -> u64 {
    Stream::new(seed, u64::MAX, tag, DrawKind::Exponential).bits(0)
}

fn check_paths(n_paths: u64) -> Result<(), DomainError> {
    if n_paths == 0 {
        return Err(DomainError::Invalid("n_paths must be at least 1".into()));
    }
    Ok(())
}

/// Compares the rescaled small-horizon law against the strictly stable
/// limit, one report per h. All h values share one seed, so the distances
/// are coupled by common random numbers.
pub fn short_time_test(
    chars: &LampertiCharacteristics,
    h_list: &[f64],
    n_paths: u64,
    seed: u64,
) -> Result<Vec<ECFReport>, Error> {
    check_paths(n_paths)?;
    for &h in h_list {
        if !(h > 0.0) || !h.is_finite() {
            return Err(DomainError::Invalid(format!(
                "short-time horizons must be positive and finite, got {h}"
            ))
            .into());
        }
    }
    let alpha = chars.alpha();
    let center_rate = if alpha < 1.0 {
        chars.drift()?.unwrap_or(0.0)
    } else if alpha == 1.0 {
        0.0
    } else {
        chars.mean()?
    };
    let weights: Vec<(f64, f64)> =
        chars.directions().iter().map(|d| (d.xi, d.sigma)).collect();
    let spec = QuadratureSpec::default();
    let lambda_grid: Vec<f64> = (-10..=10).map(|j| 0.5 * j as f64).collect();
    let reference: Vec<Complex64> = lambda_grid
        .iter()
        .map(|&l| (-quad::stable_exponent(alpha, &weights, l, &spec)).exp())
        .collect();
    let mut reports = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let config = SeriesConfig {
            horizon: h,
            n_terms: SHORT_TIME_TERMS,
            seed,
            n_paths,
            time_grid: vec![h],
        };
        let scale = h.powf(-1.0 / alpha);
        let samples: Vec<f64> = simulate::sample_path(chars, &config)?
            .iter()
            .map(|p| (p.values[0] - h * center_rate) * scale)
            .collect();
        reports.push(build_report(&samples, lambda_grid.clone(), reference.clone()));
    }
    Ok(reports)
}

/// Compares the rescaled large-horizon law against the centered Gaussian
/// with variance ∫ x² ν(dx), one report per integer h. Each X_h is the sum
/// of h independent unit-horizon increments.
pub fn long_time_test(
    chars: &LampertiCharacteristics,
    h_list: &[f64],
    n_paths: u64,
    seed: u64,
) -> Result<Vec<ECFReport>, Error> {
    check_paths(n_paths)?;
    for &h in h_list {
        if !h.is_finite() || h < 1.0 || (h - h.round()).abs() > 1e-9 {
            return Err(DomainError::Invalid(format!(
                "long-time horizons must be integers at least 1, got {h}"
            ))
            .into());
        }
    }
    let variance = measure::covariance(chars)?;
    let mean = chars.mean()?;
    let l_max = 3.0 / variance.sqrt();
    let lambda_grid: Vec<f64> = (-10..=10).map(|j| l_max * j as f64 / 10.0).collect();
    let reference: Vec<Complex64> = lambda_grid
        .iter()
        .map(|&l| Complex64::new((-l * l * variance / 2.0).exp(), 0.0))
        .collect();
    let mut reports = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let blocks = h.round() as u64;
        let mut totals = vec![0.0f64; n_paths as usize];
        for b in 0..blocks {
            let config = SeriesConfig {
                horizon: 1.0,
                n_terms: LONG_TIME_BLOCK_TERMS,
                seed: derived_seed(seed, b),
                n_paths,
                time_grid: vec![1.0],
            };
            for (total, path) in totals.iter_mut().zip(simulate::sample_path(chars, &config)?)
            {
                *total += path.values[0];
            }
        }
        let scale = 1.0 / h.sqrt();
        let samples: Vec<f64> =
            totals.iter().map(|&x| (x - h * mean) * scale).collect();
        reports.push(build_report(&samples, lambda_grid.clone(), reference.clone()));
    }
    Ok(reports)
}

/// Per-path time fraction spent at or above zero, by trapezoid over the
/// grid (zero is prepended when absent, where every path starts at 0).
fn occupation_fractions(
    chars: &LampertiCharacteristics,
    t_grid: &[f64],
    n_paths: u64,
    seed: u64,
) -> Result<Vec<f64>, Error> {
    exponents::require_spectrally_negative(chars)?;
    check_paths(n_paths)?;
    if t_grid.is_empty() {
        return Err(DomainError::Invalid("t_grid must be nonempty".into()).into());
    }
    let mut prev = 0.0;
    for &t in t_grid {
        if !t.is_finite() || t < prev {
            return Err(DomainError::Invalid(format!(
                "t_grid must be sorted and nonnegative, offending entry {t}"
            ))
            .into());
        }
        prev = t;
    }
    let mut grid = t_grid.to_vec();
    if grid[0] > 0.0 {
        grid.insert(0, 0.0);
    }
    let horizon = *grid.last().unwrap();
    if !(horizon > 0.0) {
        return Err(DomainError::Invalid("t_grid must reach past zero".into()).into());
    }
    let config = SeriesConfig {
        horizon,
        n_terms: SPITZER_TERMS,
        seed,
        n_paths,
        time_grid: grid.clone(),
    };
    let paths = simulate::sample_path(chars, &config)?;
    Ok(paths
        .iter()
        .map(|p| {
            let mut integral = 0.0;
            for j in 0..grid.len() - 1 {
                let left = if p.values[j] >= 0.0 { 1.0 } else { 0.0 };
                let right = if p.values[j + 1] >= 0.0 { 1.0 } else { 0.0 };
                integral += (grid[j + 1] - grid[j]) * 0.5 * (left + right);
            }
            integral / horizon
        })
        .collect())
}

/// Monte Carlo estimate of (1/t)∫₀ᵗ P(X_s ≥ 0) ds at the grid's endpoint,
/// for spectrally negative characteristics.
pub fn spitzer_estimate(
    chars: &LampertiCharacteristics,
    t_grid: &[f64],
    n_paths: u64,
    seed: u64,
) -> Result<f64, Error> {
    let fractions = occupation_fractions(chars, t_grid, n_paths, seed)?;
    Ok(fractions.iter().sum::<f64>() / fractions.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Direction;

    fn dir(xi: f64, sigma: f64, f: f64) -> Direction {
        Direction { xi, sigma, f }
    }

    fn chars(alpha: f64, dirs: Vec<Direction>, theta: f64) -> LampertiCharacteristics {
        LampertiCharacteristics::new(alpha, dirs, theta).unwrap()
    }

    #[test]
    fn ecf_is_exact_on_degenerate_samples() {
        let grid = [-2.0, 0.0, 1.0, 3.5];
        let values = ecf(&[0.7; 50], &grid).unwrap();
        for (&lambda, v) in grid.iter().zip(&values) {
            let want = Complex64::new(0.0, lambda * 0.7).exp();
            assert!((v - want).norm() < 1e-14);
        }
        assert_eq!(values[1], Complex64::new(1.0, 0.0));
        assert!(ecf(&[], &grid).is_err());
    }

    #[test]
    fn ecf_modulus_never_exceeds_one() {
        let stream = Stream::new(99, 0, 0, DrawKind::Exponential);
        let samples: Vec<f64> = (0..500).map(|i| stream.exponential(i) - 1.0).collect();
        for v in ecf(&samples, &[-7.0, -1.0, 0.3, 2.0, 11.0]).unwrap() {
            assert!(v.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn ecf_matches_gaussian_on_normal_samples() {
        let u1 = Stream::new(123, 0, 0, DrawKind::Exponential);
        let u2 = Stream::new(123, 0, 0, DrawKind::JumpTime);
        let n = 100_000;
        let samples: Vec<f64> = (0..n)
            .map(|i| {
                let r = (-2.0 * u1.unit_pos(i).ln()).sqrt();
                r * (2.0 * std::f64::consts::PI * u2.unit(i)).cos()
            })
            .collect();
        let v = ecf(&samples, &[1.0]).unwrap()[0];
        let want = (-0.5f64).exp();
        assert!(
            (v - Complex64::new(want, 0.0)).norm() < 3.0 / (n as f64).sqrt(),
            "ecf {v} vs {want}"
        );
    }

    /// Samples the limiting stable law directly through the inverse tail of
    /// its own jump measure; the harness must see a small distance.
    #[test]
    fn stable_reference_calibrates_the_harness() {
        let alpha = 0.5f64;
        let weights = [(1.0, 1.0), (-1.0, 1.0)];
        let mass: f64 = 2.0;
        let n = 2000;
        let n_terms = 2000;
        let samples: Vec<f64> = (0..n)
            .map(|p| {
                let exp = Stream::new(31, p, 0, DrawKind::Exponential);
                let pick = Stream::new(31, p, 0, DrawKind::Direction);
                let mut gamma = 0.0;
                let mut x = 0.0;
                for i in 0..n_terms {
                    gamma += exp.exponential(i);
                    let xi = if pick.unit(i) < 0.5 { 1.0 } else { -1.0 };
                    x += xi * (alpha * gamma / mass).powf(-1.0 / alpha);
                }
                x
            })
            .collect();
        let spec = QuadratureSpec::default();
        let grid: Vec<f64> = (-10..=10).map(|j| 0.5 * j as f64).collect();
        let reference: Vec<Complex64> = grid
            .iter()
            .map(|&l| (-quad::stable_exponent(alpha, &weights, l, &spec)).exp())
            .collect();
        let report = build_report(&samples, grid, reference);
        assert!(
            report.sup_distance < 3.0 / (n as f64).sqrt(),
            "calibration distance {}",
            report.sup_distance
        );
    }

    #[test]
    fn short_time_distance_shrinks_with_the_horizon() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.3);
        let n = 1500;
        let reports = short_time_test(&c, &[1.0, 0.1, 0.01], n, 4).unwrap();
        let noise = 2.0 / (n as f64).sqrt();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert_eq!(r.n_samples, n);
            for e in &r.empirical {
                assert!(e.norm() <= 1.0 + 1e-12);
            }
        }
        assert!(
            reports[1].sup_distance <= reports[0].sup_distance + noise,
            "h=0.1 distance {} vs h=1 {}",
            reports[1].sup_distance,
            reports[0].sup_distance
        );
        assert!(
            reports[2].sup_distance <= reports[1].sup_distance + noise,
            "h=0.01 distance {} vs h=0.1 {}",
            reports[2].sup_distance,
            reports[1].sup_distance
        );
        assert!(reports[2].sup_distance < 0.1);
    }

    #[test]
    fn short_time_unit_index_is_symmetric_with_zero_centering() {
        let c = chars(1.0, vec![dir(1.0, 1.0, 0.5), dir(-1.0, 1.0, 0.5)], 0.0);
        let n = 1500;
        let report = &short_time_test(&c, &[0.01], n, 8).unwrap()[0];
        let noise = 3.0 / (n as f64).sqrt();
        for e in &report.empirical {
            assert!(e.im.abs() < noise, "asymmetry {}", e.im);
        }
        assert!(report.sup_distance < 0.1, "distance {}", report.sup_distance);
    }

    #[test]
    fn short_time_rejects_bad_inputs() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0)], 0.0);
        assert!(short_time_test(&c, &[0.0], 10, 1).is_err());
        assert!(short_time_test(&c, &[-1.0], 10, 1).is_err());
        assert!(short_time_test(&c, &[1.0], 0, 1).is_err());
    }

    #[test]
    fn long_time_law_approaches_the_gaussian() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.0);
        let n = 1500;
        let report = &long_time_test(&c, &[25.0], n, 6).unwrap()[0];
        let variance = measure::covariance(&c).unwrap();
        let mid = report.lambda_grid.len() / 2;
        assert_eq!(report.reference[mid], Complex64::new(1.0, 0.0));
        let l_last = *report.lambda_grid.last().unwrap();
        assert!((l_last - 3.0 / variance.sqrt()).abs() < 1e-12);
        let want = (-l_last * l_last * variance / 2.0).exp();
        assert!((report.reference.last().unwrap().re - want).abs() < 1e-15);
        assert!(
            report.sup_distance < 4.0 / (n as f64).sqrt() + 0.02,
            "distance {}",
            report.sup_distance
        );
    }

    #[test]
    fn long_time_rejects_fractional_or_small_horizons() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0)], 0.0);
        assert!(long_time_test(&c, &[2.5], 10, 1).is_err());
        assert!(long_time_test(&c, &[0.5], 10, 1).is_err());
        assert!(long_time_test(&c, &[1.0], 10, 1).is_ok());
    }

    #[test]
    fn spitzer_estimate_stays_in_range_and_repeats() {
        let c = chars(1.5, vec![dir(-1.0, 1.0, 0.5)], 0.0);
        let grid: Vec<f64> = (0..=5).map(|j| j as f64).collect();
        let a = spitzer_estimate(&c, &grid, 200, 12).unwrap();
        let b = spitzer_estimate(&c, &grid, 200, 12).unwrap();
        assert!((0.0..=1.0).contains(&a));
        assert_eq!(a.to_bits(), b.to_bits());
        let two_sided = chars(1.5, vec![dir(1.0, 1.0, 0.5), dir(-1.0, 1.0, 0.5)], 0.0);
        assert!(spitzer_estimate(&two_sided, &grid, 10, 1).is_err());
        assert!(spitzer_estimate(&c, &[], 10, 1).is_err());
        assert!(spitzer_estimate(&c, &[0.0], 10, 1).is_err());
    }

    /// Quadrupling the paths should halve the standard error; the two
    /// estimates must agree within their combined 3σ.
    #[test]
    fn spitzer_confidence_interval_tightens_with_paths() {
        let c = chars(1.5, vec![dir(-1.0, 1.0, 0.5)], 0.0);
        let grid: Vec<f64> = (0..=10).map(|j| j as f64).collect();
        let spread = |fractions: &[f64]| {
            let n = fractions.len() as f64;
            let mean = fractions.iter().sum::<f64>() / n;
            let var = fractions.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>()
                / (n - 1.0);
            (mean, (var / n).sqrt())
        };
        let small = occupation_fractions(&c, &grid, 200, 21).unwrap();
        let large = occupation_fractions(&c, &grid, 800, 22).unwrap();
        let (mean_small, se_small) = spread(&small);
        let (mean_large, se_large) = spread(&large);
        assert!(se_large < se_small, "se {se_large} vs {se_small}");
        let gap = (mean_small - mean_large).abs();
        let budget = 3.0 * (se_small * se_small + se_large * se_large).sqrt();
        assert!(gap < budget, "gap {gap} vs budget {budget}");
    }
}
