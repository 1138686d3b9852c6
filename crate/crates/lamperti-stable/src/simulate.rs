//! Truncated shot-noise series sampling of paths, and the change-of-measure
//! density process evaluated along a sampled path.
//!
//! A path on [0, T] is built from `n_terms` terms: arrival levels Γ_i
//! (cumulative unit exponentials), jump times U_i uniform on [0, T),
//! directions V_i drawn with probabilities σ_k/σ(S⁰), and radii given by the
//! per-direction inverse tail evaluated at Γ_i/(T·σ(S⁰)). Jumps of radius at
//! most one are compensated by the centering constants c_i, applied as a
//! linear drift, and the linear term θ of the characteristics enters as -θ·t
//! on top of the centered series.
//!
//! All draws come from counter-based streams keyed by (seed, path_index,
//! draw kind, i), so path generation is embarrassingly parallel and
//! bit-identical run to run.

use rayon::prelude::*;

use crate::measure::{
    self, ln_exp_m1, ln_exp_m1_ratio, radial_kernel, LampertiCharacteristics,
};
use crate::quad::{self, QuadratureSpec};
use crate::rng::{DrawKind, Stream};
use crate::{DomainError, Error, NumericalError};

/// Controls for truncated-series path generation.
#[derive(Debug, Clone)]
pub struct SeriesConfig {
    /// Time horizon T > 0.
    pub horizon: f64,
    /// Number of series terms N kept per path.
    pub n_terms: u64,
    /// Master seed of the counter-based generator.
    pub seed: u64,
    /// Number of independent paths.
    pub n_paths: u64,
    /// Sorted sample times within [0, T].
    pub time_grid: Vec<f64>,
}

impl SeriesConfig {
    fn validate(&self) -> Result<(), DomainError> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(DomainError::Invalid(format!(
                "horizon must be positive and finite, got {}",
                self.horizon
            )));
        }
        if self.n_terms == 0 {
            return Err(DomainError::Invalid("n_terms must be at least 1".into()));
        }
        if self.n_paths == 0 {
            return Err(DomainError::Invalid("n_paths must be at least 1".into()));
        }
        let mut prev = 0.0;
        for &t in &self.time_grid {
            if !t.is_finite() || t < prev || t > self.horizon {
                return Err(DomainError::Invalid(format!(
                    "time_grid must be sorted within [0, {}], offending entry {t}",
                    self.horizon
                )));
            }
            prev = t;
        }
        Ok(())
    }
}

/// One simulated path, carrying enough provenance to regenerate its jumps.
#[derive(Debug, Clone)]
pub struct SamplePath {
    /// Grid times the path was evaluated at.
    pub times: Vec<f64>,
    /// Path values at those times.
    pub values: Vec<f64>,
    /// Seed the draws were keyed by.
    pub seed_used: u64,
    /// Index of this path within its batch.
    pub path_index: u64,
    /// Horizon T the jump times were scaled to.
    pub horizon: f64,
    /// Number of series terms kept.
    pub n_terms_used: u64,
    /// Radius of the last (smallest-level) series term of this path.
    pub truncation_bound: f64,
}

/// The log density process U along one path, with jumps below ε discarded.
#[derive(Debug, Clone)]
pub struct DensityProcessSample {
    /// Grid times, copied from the underlying path.
    pub times: Vec<f64>,
    /// U evaluated at those times.
    pub log_density_values: Vec<f64>,
    /// Jump-size cutoff the jump sum was truncated at.
    pub epsilon: f64,
}

const TABLE_LO: f64 = 1e-10;
const TABLE_HI: f64 = 60.0;
const TABLE_LEN: usize = 4096;

/// Per-direction radius generator: exact inverse for the unit tilt, log-log
/// interpolation of the tabulated tail otherwise, with power-law and
/// exponential fallbacks beyond the table.
enum RadiusSampler {
    Closed { alpha: f64 },
    Table { alpha: f64, decay: f64, ln_x: Vec<f64>, ln_tail: Vec<f64> },
}

impl RadiusSampler {
    fn new(alpha: f64, f: f64, spec: &QuadratureSpec) -> Result<Self, NumericalError> {
        if f == 1.0 {
            return Ok(RadiusSampler::Closed { alpha });
        }
        let decay = alpha + 1.0 - f;
        let step = (TABLE_HI / TABLE_LO).ln() / (TABLE_LEN - 1) as f64;
        let ln_x: Vec<f64> =
            (0..TABLE_LEN).map(|j| TABLE_LO.ln() + step * j as f64).collect();
        let x: Vec<f64> = ln_x.iter().map(|&l| l.exp()).collect();
        let mut kernel = |r: f64| radial_kernel(alpha, f, r);
        let mut tail = vec![0.0; TABLE_LEN];
        tail[TABLE_LEN - 1] = quad::integrate_exp_tail(&mut kernel, TABLE_HI, decay, spec)?;
        for j in (0..TABLE_LEN - 1).rev() {
            let (panel, _) = quad::gk15(&mut kernel, x[j], x[j + 1]);
            tail[j] = tail[j + 1] + panel;
        }
        let ln_tail: Vec<f64> = tail.iter().map(|&t| t.ln()).collect();
        Ok(RadiusSampler::Table { alpha, decay, ln_x, ln_tail })
    }

    /// Radius r with per-unit tail τ(r) = u.
    fn radius(&self, u: f64) -> f64 {
        match self {
            RadiusSampler::Closed { alpha } => {
                (alpha * u).powf(-1.0 / alpha).ln_1p()
            }
            RadiusSampler::Table { alpha, decay, ln_x, ln_tail } => {
                let lu = u.ln();
                if lu >= ln_tail[0] {
                    return (alpha * u).powf(-1.0 / alpha);
                }
                if lu <= ln_tail[TABLE_LEN - 1] {
                    return -(decay * u).ln() / decay;
                }
                let hi = ln_tail.partition_point(|&lt| lt >= lu);
                let lo = hi - 1;
                let w = (lu - ln_tail[lo]) / (ln_tail[hi] - ln_tail[lo]);
                (ln_x[lo] + w * (ln_x[hi] - ln_x[lo])).exp()
            }
        }
    }
}

/// Everything a path needs besides its own draws.
struct SeriesPlan {
    theta: f64,
    horizon: f64,
    mass: f64,
    n_terms: u64,
    xi: Vec<f64>,
    cum_prob: Vec<f64>,
    samplers: Vec<RadiusSampler>,
    /// Sum of the centering constants c_1..c_N, applied as -(t/T)·Σc_i.
    centering_total: f64,
}

/// Per-direction per-unit tail at radius one, the indicator crossing level.
fn unit_tail(
    chars: &LampertiCharacteristics,
    index: usize,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let d = chars.directions()[index];
    if d.f == 1.0 {
        Ok((std::f64::consts::E - 1.0).powf(-chars.alpha()) / chars.alpha())
    } else {
        Ok(measure::tail_with(chars, index, 1.0, spec)? / d.sigma)
    }
}

/// ∫_a^b f over a positive range, pre-split into geometric panels so that no
/// single adaptive call spans many decades.
fn integrate_geometric<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64, NumericalError> {
    debug_assert!(a > 0.0 && b > a);
    let panels = ((b / a).ln() / 4f64.ln()).ceil().max(1.0) as usize;
    let ratio = (b / a).powf(1.0 / panels as f64);
    let mut total = 0.0;
    let mut lo = a;
    for j in 0..panels {
        let hi = if j + 1 == panels { b } else { lo * ratio };
        total += quad::integrate(&mut f, lo, hi, spec)?;
        lo = hi;
    }
    Ok(total)
}

impl SeriesPlan {
    fn new(
        chars: &LampertiCharacteristics,
        horizon: f64,
        n_terms: u64,
        with_centering: bool,
        spec: &QuadratureSpec,
    ) -> Result<Self, Error> {
        let alpha = chars.alpha();
        let mass = chars.total_mass();
        let mut xi = Vec::new();
        let mut cum_prob = Vec::new();
        let mut samplers = Vec::new();
        let mut acc = 0.0;
        for d in chars.directions() {
            acc += d.sigma / mass;
            xi.push(d.xi);
            cum_prob.push(acc);
            samplers.push(RadiusSampler::new(alpha, d.f, spec)?);
        }
        let mut centering_total = 0.0;
        if with_centering {
            let u_max = n_terms as f64 / (horizon * mass);
            for (k, d) in chars.directions().iter().enumerate() {
                let u_star = unit_tail(chars, k, spec)?;
                if u_max > u_star {
                    let integral = integrate_geometric(
                        |u| samplers[k].radius(u),
                        u_star,
                        u_max,
                        spec,
                    )?;
                    centering_total +=
                        (d.sigma / mass) * d.xi * horizon * mass * integral;
                }
            }
        }
        Ok(SeriesPlan {
            theta: chars.theta(),
            horizon,
            mass,
            n_terms,
            xi,
            cum_prob,
            samplers,
            centering_total,
        })
    }

    fn draws(&self, seed: u64, path: u64) -> JumpDraws<'_> {
        JumpDraws {
            plan: self,
            exp: Stream::new(seed, path, 0, DrawKind::Exponential),
            time: Stream::new(seed, path, 0, DrawKind::JumpTime),
            dir: Stream::new(seed, path, 0, DrawKind::Direction),
            gamma: 0.0,
            i: 0,
        }
    }
}

struct Jump {
    time: f64,
    direction: usize,
    radius: f64,
}

/// Lazy sequence of the `n_terms` jumps of one path, in arrival-level order.
struct JumpDraws<'a> {
    plan: &'a SeriesPlan,
    exp: Stream,
    time: Stream,
    dir: Stream,
    gamma: f64,
    i: u64,
}

impl Iterator for JumpDraws<'_> {
    type Item = Jump;

    fn next(&mut self) -> Option<Jump> {
        if self.i >= self.plan.n_terms {
            return None;
        }
        let i = self.i;
        self.i += 1;
        self.gamma += self.exp.exponential(i);
        let time = self.plan.horizon * self.time.unit(i);
        let pick = self.dir.unit(i);
        let direction = self
            .plan
            .cum_prob
            .iter()
            .position(|&c| pick < c)
            .unwrap_or(self.plan.cum_prob.len() - 1);
        let radius = self.plan.samplers[direction]
            .radius(self.gamma / (self.plan.horizon * self.plan.mass));
        Some(Jump { time, direction, radius })
    }
}

fn one_path(plan: &SeriesPlan, config: &SeriesConfig, path: u64) -> SamplePath {
    let mut jumps: Vec<(f64, f64)> = Vec::with_capacity(plan.n_terms as usize);
    let mut last_radius = 0.0;
    for j in plan.draws(config.seed, path) {
        last_radius = j.radius;
        jumps.push((j.time, plan.xi[j.direction] * j.radius));
    }
    jumps.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut values = Vec::with_capacity(config.time_grid.len());
    let mut acc = 0.0;
    let mut next = 0;
    for &t in &config.time_grid {
        while next < jumps.len() && jumps[next].0 <= t {
            acc += jumps[next].1;
            next += 1;
        }
        let drift = (t / plan.horizon) * plan.centering_total + plan.theta * t;
        values.push(acc - drift);
    }
    SamplePath {
        times: config.time_grid.clone(),
        values,
        seed_used: config.seed,
        path_index: path,
        horizon: config.horizon,
        n_terms_used: config.n_terms,
        truncation_bound: last_radius,
    }
}

/// Generalized inverse of [`measure::tail`] in its radius argument: the
/// radius r with tail(r) = u, exact for unit tilt and found by safeguarded
/// Newton iteration to 1e-12 relative residual otherwise.
pub fn inverse_tail(
    chars: &LampertiCharacteristics,
    direction_index: usize,
    u: f64,
) -> Result<f64, Error> {
    inverse_tail_with(chars, direction_index, u, &QuadratureSpec::default())
}

/// [`inverse_tail`] with explicit quadrature controls.
pub fn inverse_tail_with(
    chars: &LampertiCharacteristics,
    direction_index: usize,
    u: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let d = *chars
        .directions()
        .get(direction_index)
        .ok_or_else(|| DomainError::Invalid(format!("no direction {direction_index}")))?;
    if !(u > 0.0) || !u.is_finite() {
        return Err(DomainError::Invalid(format!(
            "tail level must be positive and finite, got {u}"
        ))
        .into());
    }
    let alpha = chars.alpha();
    if d.f == 1.0 {
        return Ok((alpha * u / d.sigma).powf(-1.0 / alpha).ln_1p());
    }
    let tail = |x: f64| measure::tail_with(chars, direction_index, x, spec);
    let mut lo = 1.0;
    let mut hi = 1.0;
    let at_one = tail(1.0)?;
    if at_one > u {
        while tail(hi)? > u {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(NumericalError::RootNoConvergence(format!(
                    "no radius below 1e6 reaches tail level {u}"
                ))
                .into());
            }
        }
    } else {
        while tail(lo)? < u {
            lo /= 2.0;
            if lo < 1e-280 {
                return Err(NumericalError::RootNoConvergence(format!(
                    "no radius above 1e-280 reaches tail level {u}"
                ))
                .into());
            }
        }
    }
    let mut x = (lo * hi).sqrt();
    for _ in 0..200 {
        let t = tail(x)?;
        if (t - u).abs() <= 1e-12 * u {
            return Ok(x);
        }
        if t > u {
            lo = x;
        } else {
            hi = x;
        }
        let slope = -d.sigma * radial_kernel(alpha, d.f, x);
        let step = (u - t) / slope;
        let candidate = x + step;
        x = if candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-15 * x {
            return Ok(x);
        }
    }
    Err(NumericalError::RootNoConvergence(format!(
        "tail inversion stalled at level {u} in direction {direction_index}"
    ))
    .into())
}

/// The centering constants c_1..c_N: per-index compensation of jumps of
/// radius at most one, averaged over the direction draw.
pub fn centering_constants(
    chars: &LampertiCharacteristics,
    config: &SeriesConfig,
) -> Result<Vec<f64>, Error> {
    config.validate()?;
    let spec = QuadratureSpec::default();
    let plan = SeriesPlan::new(chars, config.horizon, config.n_terms, false, &spec)?;
    let scale = config.horizon * plan.mass;
    let mut crossing = Vec::new();
    for k in 0..chars.directions().len() {
        crossing.push(scale * unit_tail(chars, k, &spec)?);
    }
    let mut constants = Vec::with_capacity(config.n_terms as usize);
    for i in 1..=config.n_terms {
        let mut c_i = 0.0;
        for (k, d) in chars.directions().iter().enumerate() {
            let lo = (i as f64 - 1.0).max(crossing[k]);
            let hi = i as f64;
            if lo < hi {
                let integral =
                    quad::integrate(|s| plan.samplers[k].radius(s / scale), lo, hi, &spec)?;
                c_i += (d.sigma / plan.mass) * d.xi * integral;
            }
        }
        constants.push(c_i);
    }
    Ok(constants)
}

/// Generates `config.n_paths` truncated-series paths, in parallel across
/// paths, bit-identically for identical inputs.
pub fn sample_path(
    chars: &LampertiCharacteristics,
    config: &SeriesConfig,
) -> Result<Vec<SamplePath>, Error> {
    config.validate()?;
    let spec = QuadratureSpec::default();
    let plan = SeriesPlan::new(chars, config.horizon, config.n_terms, true, &spec)?;
    Ok((0..config.n_paths)
        .into_par_iter()
        .map(|p| one_path(&plan, config, p))
        .collect())
}

/// Size of the N-th jump at its mean arrival level: the per-direction tail
/// inverse at level N/T, maximized over directions. Values above 1e-4
/// indicate a truncation coarse enough to distort short-time behavior.
pub fn truncation_error(
    chars: &LampertiCharacteristics,
    config: &SeriesConfig,
) -> Result<f64, Error> {
    config.validate()?;
    let level = config.n_terms as f64 / config.horizon;
    let mut worst: f64 = 0.0;
    for (k, d) in chars.directions().iter().enumerate() {
        worst = worst.max(inverse_tail(chars, k, d.sigma * level)?);
    }
    Ok(worst)
}

/// Per-jump increment of the log density: -r f + (α+1) ln((e^r - 1)/r).
fn log_density_jump(alpha: f64, f: f64, r: f64) -> f64 {
    let ratio = if r > 30.0 { ln_exp_m1(r) - r.ln() } else { ln_exp_m1_ratio(r) };
    -r * f + (alpha + 1.0) * ratio
}

/// Rate of the compensator of the ε-truncated jump sum: the mass the
/// short-time stable measure puts beyond ε in excess of the jump measure.
fn stable_compensator(
    chars: &LampertiCharacteristics,
    epsilon: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let alpha = chars.alpha();
    let mut rate = 0.0;
    for (k, d) in chars.directions().iter().enumerate() {
        rate += d.sigma * epsilon.powf(-alpha) / alpha
            - measure::tail_with(chars, k, epsilon, spec)?;
    }
    Ok(rate)
}

/// Evaluates the log density process U along `path`: the sum of per-jump
/// increments over regenerated jumps of radius above ε, minus t times the
/// compensator rate. The mean of e^{U_t} over paths is one.
pub fn density_process(
    chars: &LampertiCharacteristics,
    path: &SamplePath,
    epsilon: f64,
) -> Result<DensityProcessSample, Error> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(DomainError::Invalid(format!(
            "jump cutoff must be positive and finite, got {epsilon}"
        ))
        .into());
    }
    let spec = QuadratureSpec::default();
    let plan = SeriesPlan::new(chars, path.horizon, path.n_terms_used, false, &spec)?;
    let rate = stable_compensator(chars, epsilon, &spec)?;
    let alpha = chars.alpha();
    let mut jumps: Vec<(f64, f64)> = plan
        .draws(path.seed_used, path.path_index)
        .filter(|j| j.radius > epsilon)
        .map(|j| {
            let f = chars.directions()[j.direction].f;
            (j.time, log_density_jump(alpha, f, j.radius))
        })
        .collect();
    jumps.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut values = Vec::with_capacity(path.times.len());
    let mut acc = 0.0;
    let mut next = 0;
    for &t in &path.times {
        while next < jumps.len() && jumps[next].0 <= t {
            acc += jumps[next].1;
            next += 1;
        }
        values.push(acc - t * rate);
    }
    Ok(DensityProcessSample {
        times: path.times.clone(),
        log_density_values: values,
        epsilon,
    })
}

/// The drift gap a - b between two parameter sets sharing α and σ that makes
/// their laws mutually absolutely continuous: the compensated small-jump
/// first moment, with the pure power part handled in closed form.
pub fn mutual_ac_shift(chars: &LampertiCharacteristics) -> Result<f64, Error> {
    let alpha = chars.alpha();
    let power_part = if alpha == 1.0 { 0.0 } else { 1.0 / (1.0 - alpha) };
    let spec = QuadratureSpec::default();
    let mut total = 0.0;
    for d in chars.directions() {
        let integral = measure::compensated_small_jump_integral(alpha, d.f, &spec)?;
        total += d.xi * d.sigma * (integral + power_part);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Direction;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn dir(xi: f64, sigma: f64, f: f64) -> Direction {
        Direction { xi, sigma, f }
    }

    fn chars(alpha: f64, dirs: Vec<Direction>, theta: f64) -> LampertiCharacteristics {
        LampertiCharacteristics::new(alpha, dirs, theta).unwrap()
    }

    fn grid(horizon: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|j| horizon * j as f64 / steps as f64).collect()
    }

    fn ecf(samples: &[f64], lambda: f64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for &x in samples {
            sum += Complex64::new(0.0, lambda * x).exp();
        }
        sum / samples.len() as f64
    }

    fn terminal_samples(
        chars: &LampertiCharacteristics,
        n_paths: u64,
        n_terms: u64,
        seed: u64,
    ) -> Vec<f64> {
        let config = SeriesConfig {
            horizon: 1.0,
            n_terms,
            seed,
            n_paths,
            time_grid: vec![1.0],
        };
        sample_path(chars, &config)
            .unwrap()
            .into_iter()
            .map(|p| p.values[0])
            .collect()
    }

    fn sup_ecf_distance(chars: &LampertiCharacteristics, samples: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for j in -10..=10 {
            let lambda = 0.5 * j as f64;
            let reference = (-crate::exponents::char_exponent(chars, lambda).unwrap()).exp();
            worst = worst.max((ecf(samples, lambda) - reference).norm());
        }
        worst
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let base = SeriesConfig {
            horizon: 1.0,
            n_terms: 10,
            seed: 1,
            n_paths: 1,
            time_grid: vec![0.0, 1.0],
        };
        let cases = [
            SeriesConfig { horizon: 0.0, ..base.clone() },
            SeriesConfig { horizon: f64::INFINITY, ..base.clone() },
            SeriesConfig { n_terms: 0, ..base.clone() },
            SeriesConfig { n_paths: 0, ..base.clone() },
            SeriesConfig { time_grid: vec![0.5, 0.2], ..base.clone() },
            SeriesConfig { time_grid: vec![0.5, 1.2], ..base.clone() },
            SeriesConfig { time_grid: vec![f64::NAN], ..base.clone() },
        ];
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0)], 0.0);
        for bad in cases {
            assert!(sample_path(&c, &bad).is_err());
        }
        assert!(sample_path(&c, &base).is_ok());
    }

    #[test]
    fn inverse_tail_closed_form_and_limits() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.0);
        let r = inverse_tail(&c, 0, 2.0).unwrap();
        assert!((r - 2f64.ln()).abs() < 1e-15);
        assert!(inverse_tail(&c, 0, 1e12).unwrap() < 1e-7);
        let mut prev = f64::INFINITY;
        for u in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let x = inverse_tail(&c, 1, u).unwrap();
            assert!(x < prev);
            prev = x;
        }
        assert!(inverse_tail(&c, 0, 0.0).is_err());
        assert!(inverse_tail(&c, 0, -1.0).is_err());
        assert!(inverse_tail(&c, 2, 1.0).is_err());
    }

    #[test]
    fn inverse_tail_round_trips_through_tail() {
        let sets = [
            chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.0),
            chars(0.5, vec![dir(1.0, 1.3, 0.5)], 0.0),
            chars(1.5, vec![dir(1.0, 0.7, 0.5), dir(-1.0, 1.2, -0.3)], 0.0),
            chars(1.0, vec![dir(1.0, 1.0, 0.3), dir(-1.0, 1.0, -0.2)], 0.0),
        ];
        for c in &sets {
            for k in 0..c.directions().len() {
                for u in [1e-3, 1.0, 10.0, 1e3] {
                    let x = inverse_tail(c, k, u).unwrap();
                    let back = measure::tail(c, k, x).unwrap();
                    assert!(
                        ((back - u) / u).abs() < 1e-10,
                        "round trip failed: u={u}, back={back}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn closed_form_inverse_matches_quadrature_tail(
            alpha in 0.1..1.9f64,
            sigma in 0.2..2.0f64,
            lu in -3.0..3.0f64,
        ) {
            let c = chars(alpha, vec![dir(1.0, sigma, 1.0)], 0.0);
            let u = 10f64.powf(lu);
            let x = inverse_tail(&c, 0, u).unwrap();
            let back = measure::tail(&c, 0, x).unwrap();
            prop_assert!(((back - u) / u).abs() < 1e-8);
        }
    }

    #[test]
    fn centering_constants_vanish_for_symmetric_measures() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.0);
        let config = SeriesConfig {
            horizon: 1.0,
            n_terms: 5,
            seed: 0,
            n_paths: 1,
            time_grid: vec![1.0],
        };
        for c_i in centering_constants(&c, &config).unwrap() {
            assert_eq!(c_i, 0.0);
        }
    }

    #[test]
    fn centering_constants_match_subordinator_quadrature() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0)], 0.0);
        let config = SeriesConfig {
            horizon: 1.0,
            n_terms: 3,
            seed: 0,
            n_paths: 1,
            time_grid: vec![1.0],
        };
        let cs = centering_constants(&c, &config).unwrap();
        // crossing level T·m·τ(1) = (e-1)^{-1/2}/0.5 ≈ 1.5257 sits inside [1, 2]
        assert_eq!(cs[0], 0.0);
        assert!(((cs[1] - 0.395380379970670711) / cs[1]).abs() < 1e-9);
        assert!(((cs[2] - 0.506462218655584474) / cs[2]).abs() < 1e-9);
    }

    #[test]
    fn paths_are_deterministic_and_start_at_zero() {
        let c = chars(1.5, vec![dir(1.0, 1.0, 0.5), dir(-1.0, 0.7, -0.3)], 0.2);
        let config = SeriesConfig {
            horizon: 1.0,
            n_terms: 200,
            seed: 42,
            n_paths: 3,
            time_grid: vec![0.0, 0.4, 1.0],
        };
        let a = sample_path(&c, &config).unwrap();
        let b = sample_path(&c, &config).unwrap();
        assert_eq!(a.len(), 3);
        for (pa, pb) in a.iter().zip(&b) {
            assert_eq!(pa.values.len(), pa.times.len());
            assert_eq!(pa.values[0], 0.0);
            assert!(pa.truncation_bound >= 0.0);
            assert_eq!(pa.n_terms_used, 200);
            for (va, vb) in pa.values.iter().zip(&pb.values) {
                assert_eq!(va.to_bits(), vb.to_bits());
            }
        }
        let other_seed = SeriesConfig { seed: 43, ..config.clone() };
        let d = sample_path(&c, &other_seed).unwrap();
        assert_ne!(a[0].values[2].to_bits(), d[0].values[2].to_bits());
    }

    #[test]
    fn path_decomposes_into_jumps_centering_and_linear_term() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.2);
        let horizon = 1.5;
        let n_terms = 60;
        let config = SeriesConfig {
            horizon,
            n_terms,
            seed: 9,
            n_paths: 2,
            time_grid: vec![0.0, 0.5, 1.0, 1.5],
        };
        let centering: f64 = centering_constants(&c, &config).unwrap().iter().sum();
        assert_eq!(centering, 0.0);
        let paths = sample_path(&c, &config).unwrap();
        for (p, path) in paths.iter().enumerate() {
            let exp = Stream::new(9, p as u64, 0, DrawKind::Exponential);
            let time = Stream::new(9, p as u64, 0, DrawKind::JumpTime);
            let pick = Stream::new(9, p as u64, 0, DrawKind::Direction);
            let mut jumps = Vec::new();
            let mut gamma = 0.0;
            for i in 0..n_terms {
                gamma += exp.exponential(i);
                let t = horizon * time.unit(i);
                let xi = if pick.unit(i) < 0.5 { 1.0 } else { -1.0 };
                let u = gamma / (horizon * 2.0);
                jumps.push((t, xi * (0.5 * u).powf(-2.0).ln_1p()));
            }
            for (j, &t) in path.times.iter().enumerate() {
                let jump_sum: f64 =
                    jumps.iter().filter(|&&(s, _)| s <= t).map(|&(_, v)| v).sum();
                let expected = jump_sum - 0.2 * t;
                assert!(
                    (path.values[j] - expected).abs() <= 1e-12 * (1.0 + expected.abs()),
                    "path {p} time {t}: got {}, expected {expected}",
                    path.values[j]
                );
            }
        }
    }

    #[test]
    fn subordinator_path_decomposition_includes_centering() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0)], -0.3);
        let horizon = 2.0;
        let n_terms = 50;
        let config = SeriesConfig {
            horizon,
            n_terms,
            seed: 3,
            n_paths: 1,
            time_grid: vec![0.0, 0.5, 1.3, 2.0],
        };
        let centering: f64 = centering_constants(&c, &config).unwrap().iter().sum();
        let path = &sample_path(&c, &config).unwrap()[0];
        let exp = Stream::new(3, 0, 0, DrawKind::Exponential);
        let time = Stream::new(3, 0, 0, DrawKind::JumpTime);
        let mut jumps = Vec::new();
        let mut gamma = 0.0;
        for i in 0..n_terms {
            gamma += exp.exponential(i);
            let t = horizon * time.unit(i);
            let u = gamma / horizon;
            jumps.push((t, (0.5 * u).powf(-2.0).ln_1p()));
        }
        for (j, &t) in path.times.iter().enumerate() {
            let jump_sum: f64 =
                jumps.iter().filter(|&&(s, _)| s <= t).map(|&(_, v)| v).sum();
            let expected = jump_sum - (t / horizon) * centering + 0.3 * t;
            assert!(
                (path.values[j] - expected).abs() <= 1e-7 * (1.0 + expected.abs()),
                "time {t}: got {}, expected {expected}",
                path.values[j]
            );
        }
    }

    #[test]
    fn centered_subordinator_series_is_nondecreasing() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0)], -0.3);
        let config = SeriesConfig {
            horizon: 1.0,
            n_terms: 500,
            seed: 17,
            n_paths: 2,
            time_grid: grid(1.0, 10),
        };
        let centering: f64 = centering_constants(&c, &config).unwrap().iter().sum();
        for path in sample_path(&c, &config).unwrap() {
            let mut prev = f64::NEG_INFINITY;
            for (j, &t) in path.times.iter().enumerate() {
                let uncentered = path.values[j] + t * centering + c.theta() * t;
                assert!(uncentered >= prev - 1e-12);
                prev = uncentered;
            }
        }
    }

    #[test]
    fn terminal_law_matches_closed_form_exponent() {
        let c = chars(1.5, vec![dir(1.0, 1.0, 0.5), dir(-1.0, 0.7, -0.3)], 0.2);
        let n: u64 = 2000;
        let samples = terminal_samples(&c, n, 2000, 7);
        let allowance = 4.0 / (n as f64).sqrt() + 0.01;
        let worst = sup_ecf_distance(&c, &samples);
        assert!(worst < allowance, "sup ECF distance {worst} vs allowance {allowance}");
    }

    #[test]
    fn refining_the_truncation_does_not_worsen_the_law() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.0);
        let n: u64 = 1500;
        let noise = 2.0 / (n as f64).sqrt();
        let d100 = sup_ecf_distance(&c, &terminal_samples(&c, n, 100, 11));
        let d1k = sup_ecf_distance(&c, &terminal_samples(&c, n, 1000, 11));
        let d10k = sup_ecf_distance(&c, &terminal_samples(&c, n, 10000, 11));
        assert!(d1k <= d100 + noise, "N=10³ distance {d1k} vs N=10² {d100}");
        assert!(d10k <= d1k + noise, "N=10⁴ distance {d10k} vs N=10³ {d1k}");
    }

    #[test]
    fn truncation_proxy_matches_closed_form_and_shrinks() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 1.0)], 0.0);
        let config = |n_terms| SeriesConfig {
            horizon: 1.0,
            n_terms,
            seed: 0,
            n_paths: 1,
            time_grid: vec![1.0],
        };
        let proxy = truncation_error(&c, &config(10_000)).unwrap();
        let expected = (0.5 * 1e4f64).powf(-2.0).ln_1p();
        assert!(((proxy - expected) / expected).abs() < 1e-12);
        assert!(proxy < 1e-4);
        let coarse = truncation_error(&c, &config(100)).unwrap();
        let mid = truncation_error(&c, &config(1000)).unwrap();
        assert!(coarse > mid && mid > proxy);
    }

    #[test]
    fn small_jumps_contribute_vanishing_log_density() {
        let v = log_density_jump(0.5, 1.2, 1e-8);
        assert!(v.abs() < 1e-7);
        assert!(log_density_jump(0.5, 1.2, 1e-300).is_finite());
        assert!(log_density_jump(0.5, 1.2, 800.0).is_finite());
        // slope at zero is -f + (α+1)/2
        let slope = log_density_jump(1.5, 0.3, 1e-9) / 1e-9;
        assert!((slope - (-0.3 + 1.25)).abs() < 1e-6);
    }

    #[test]
    fn compensator_rate_matches_quadrature_fixture() {
        let c = chars(0.5, vec![dir(1.0, 0.1, 0.0), dir(-1.0, 0.1, 0.0)], 0.0);
        let rate = stable_compensator(&c, 0.05, &QuadratureSpec::default()).unwrap();
        assert!(((rate - 0.561561533450268176) / rate).abs() < 1e-9);
    }

    #[test]
    fn density_process_averages_to_a_martingale() {
        let c = chars(0.5, vec![dir(1.0, 0.05, 1.2), dir(-1.0, 0.05, 1.2)], 0.0);
        let config = SeriesConfig {
            horizon: 1.0,
            n_terms: 400,
            seed: 5,
            n_paths: 400,
            time_grid: vec![0.0, 1.0],
        };
        let paths = sample_path(&c, &config).unwrap();
        let mut mean = 0.0;
        for path in &paths {
            let u = density_process(&c, path, 0.05).unwrap();
            assert_eq!(u.log_density_values[0], 0.0);
            assert_eq!(u.epsilon, 0.05);
            mean += u.log_density_values[1].exp();
        }
        mean /= paths.len() as f64;
        assert!((mean - 1.0).abs() < 0.2, "mean of e^U = {mean}");
        assert!(density_process(&c, &paths[0], 0.0).is_err());
        assert!(density_process(&c, &paths[0], -1.0).is_err());
    }

    #[test]
    fn shift_constant_matches_frozen_values() {
        let a = mutual_ac_shift(&chars(
            0.5,
            vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 0.5)],
            0.0,
        ))
        .unwrap();
        assert!(((a - 0.326057774641264742) / a).abs() < 1e-9);
        let b = mutual_ac_shift(&chars(
            1.0,
            vec![dir(1.0, 1.0, 0.5), dir(-1.0, 1.0, 0.5)],
            0.0,
        ))
        .unwrap();
        assert_eq!(b, 0.0);
        let c = mutual_ac_shift(&chars(
            1.5,
            vec![dir(1.0, 0.7, 0.5), dir(-1.0, 1.2, -0.3)],
            0.0,
        ))
        .unwrap();
        assert!(((c - 3.05894222000917437) / c).abs() < 1e-9);
    }

    #[test]
    fn shift_constant_reduces_to_small_jump_moment_below_one() {
        let c = chars(0.5, vec![dir(1.0, 1.0, 1.0), dir(-1.0, 1.0, 0.5)], 0.0);
        let shift = mutual_ac_shift(&c).unwrap();
        let moment = measure::inner_linear_moment(&c).unwrap();
        assert!((shift - moment).abs() < 1e-10);
    }
}
