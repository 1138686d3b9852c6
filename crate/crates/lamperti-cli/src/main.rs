//! Command-line front end for the Lamperti stable toolkit.
//!
//! Process parameters come from a JSON file (`--config`, see `config`);
//! results are CSV tables or JSON reports written to `--out` or stdout.
//! Exit codes: 0 success, 1 verification failure, 2 invalid configuration
//! or usage, 3 numerical non-convergence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lamperti_cli::config::{self, CliError};
use lamperti_cli::output::{self, NumericTable};
use lamperti_stable::associated::{self, ScaleVariant};
use lamperti_stable::checks::{self, CheckOutcome};
use lamperti_stable::exponents;
use lamperti_stable::limits::{self, ECFReport};
use lamperti_stable::measure::{self, Direction, LampertiCharacteristics};
use lamperti_stable::properties::{self, Answer, DriftDirection, Variation};
use lamperti_stable::quad::{self, QuadratureSpec};
use lamperti_stable::simulate::{self, SeriesConfig};

#[derive(Parser)]
#[command(
    name = "lamperti",
    version,
    about = "Lamperti stable processes: exponents, simulation, classification, fluctuation theory"
)]
struct Cli {
    /// JSON parameter file (defaults to the symmetric α = 1/2, f ≡ 1 example)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed shared by all pseudo-random streams
    #[arg(long, global = true, value_name = "N", default_value_t = 42)]
    seed: u64,
    /// Output file (directory for `figures`); stdout when omitted
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Relative tolerance of the quadrature oracle columns
    #[arg(long, global = true, value_name = "X", default_value_t = 1e-10)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the characteristic exponent Ψ (default) or, for subordinator
    /// parameters, the Laplace exponent Φ on a λ grid
    Exponent {
        /// Tabulate the Laplace exponent Φ instead of Ψ
        #[arg(long)]
        laplace: bool,
        /// Add an independent quadrature column and its absolute error
        #[arg(long)]
        oracle: bool,
        /// Left end of the λ grid (default −5, or 0 with --laplace)
        #[arg(long, value_name = "X", allow_negative_numbers = true)]
        min: Option<f64>,
        /// Right end of the λ grid
        #[arg(long, value_name = "X", allow_negative_numbers = true, default_value_t = 5.0)]
        max: f64,
        /// Number of grid points
        #[arg(long, value_name = "N", default_value_t = 41)]
        points: usize,
    },
    /// Report path and distributional properties as JSON
    Classify,
    /// Sample paths by truncated series and emit them as CSV
    Simulate {
        /// Time horizon
        #[arg(long, value_name = "T", default_value_t = 1.0)]
        horizon: f64,
        /// Number of uniform grid steps on [0, horizon]
        #[arg(long, value_name = "K", default_value_t = 1000)]
        steps: usize,
        /// Number of independent paths
        #[arg(long, value_name = "M", default_value_t = 1)]
        paths: u64,
        /// Series truncation level
        #[arg(long, value_name = "N", default_value_t = 10_000)]
        terms: u64,
        /// Wide layout `t,x1[,x2…]` instead of the long `path_id,t,x`
        #[arg(long)]
        wide: bool,
    },
    /// Tabulate the marginal density of X_t by Fourier inversion
    Density {
        /// Marginal time
        #[arg(long, value_name = "T", default_value_t = 1.0)]
        time: f64,
        /// Transform size (a power of two)
        #[arg(long, value_name = "N", default_value_t = 4096)]
        grid_size: usize,
        /// Frequency cutoff
        #[arg(long, value_name = "L", default_value_t = 40.0)]
        cutoff: f64,
    },
    /// Tabulate a scale function W on a uniform grid
    ScaleFunction {
        /// Which construction to use
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Right end of the x grid
        #[arg(long, value_name = "X", default_value_t = 10.0)]
        max: f64,
        /// Number of grid points, including x = 0
        #[arg(long, value_name = "N", default_value_t = 201)]
        points: usize,
    },
    /// Small-time, large-time, and occupation-fraction limit reports as JSON
    Limits {
        /// Which limit theorem to probe
        #[arg(value_enum)]
        kind: LimitKind,
        /// Comma-separated horizons for the short and long kinds
        #[arg(long, value_name = "LIST")]
        horizons: Option<String>,
        /// Number of Monte Carlo paths
        #[arg(long, value_name = "M", default_value_t = 10_000)]
        paths: u64,
        /// Largest time of the occupation-fraction grid
        #[arg(long, value_name = "T", default_value_t = 50.0)]
        t_max: f64,
    },
    /// Run the full verification suite; exit 1 if any criterion fails
    Verify,
    /// Emit the six showcase path datasets as CSV files
    Figures {
        /// Time horizon
        #[arg(long, value_name = "T", default_value_t = 1.0)]
        horizon: f64,
        /// Number of uniform grid steps on [0, horizon]
        #[arg(long, value_name = "K", default_value_t = 1000)]
        steps: usize,
        /// Number of independent paths per dataset
        #[arg(long, value_name = "M", default_value_t = 1)]
        paths: u64,
        /// Series truncation level
        #[arg(long, value_name = "N", default_value_t = 10_000)]
        terms: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Integral construction for β = 1
    Beta1,
    /// Series construction through the killed ladder process, β < 1
    Killed,
    /// Integral construction for the conjugate process, β < 1
    Wstar,
}

impl From<VariantArg> for ScaleVariant {
    fn from(arg: VariantArg) -> Self {
        match arg {
            VariantArg::Beta1 => ScaleVariant::Beta1Integral,
            VariantArg::Killed => ScaleVariant::KilledSeries,
            VariantArg::Wstar => ScaleVariant::WstarIntegral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LimitKind {
    /// Rescaled small-time marginals against the stable reference
    Short,
    /// Large-time marginals against the Gaussian reference
    Long,
    /// Long-run occupation fraction of the positive half line
    Spitzer,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let config = cli.config.as_deref();
    let out = cli.out.as_deref();
    match cli.command {
        Command::Exponent { laplace, oracle, min, max, points } => {
            let chars = config::load_or_default(config)?;
            let spec = QuadratureSpec { rel_tol: cli.tol, ..QuadratureSpec::default() };
            let table = exponent_table(&chars, laplace, oracle, min, max, points, &spec)?;
            write_out(out, &table.to_csv())
        }
        Command::Classify => {
            let chars = config::load_or_default(config)?;
            write_out(out, &classify_json(&chars))
        }
        Command::Simulate { horizon, steps, paths, terms, wide } => {
            let chars = config::load_or_default(config)?;
            let csv = simulate_csv(&chars, horizon, steps, paths, terms, wide, cli.seed)?;
            write_out(out, &csv)
        }
        Command::Density { time, grid_size, cutoff } => {
            let chars = config::load_or_default(config)?;
            let table = exponents::density_via_fft(&chars, time, grid_size, cutoff)?;
            if let Some(warning) = &table.warning {
                eprintln!("warning: {warning}");
            }
            let rows = table.points.iter().map(|&(x, p)| vec![x, p]).collect();
            write_out(out, &NumericTable { header: "x,density".into(), rows }.to_csv())
        }
        Command::ScaleFunction { variant, max, points } => {
            let chars = config::load_or_default(config)?;
            if points < 2 {
                return Err(CliError::Config("points must be at least 2".into()));
            }
            if !(max > 0.0) {
                return Err(CliError::Config(format!("max must be positive, got {max}")));
            }
            let grid = linspace(0.0, max, points);
            let table = associated::scale_function(&chars, variant.into(), &grid)?;
            let rows = table
                .x_grid
                .iter()
                .zip(&table.w_values)
                .map(|(&x, &w)| vec![x, w])
                .collect();
            write_out(out, &NumericTable { header: "x,w".into(), rows }.to_csv())
        }
        Command::Limits { kind, horizons, paths, t_max } => {
            let chars = config::load_or_default(config)?;
            let json = limits_json(&chars, kind, horizons.as_deref(), paths, t_max, cli.seed)?;
            write_out(out, &json)
        }
        Command::Verify => Ok(cmd_verify(cli.seed)),
        Command::Figures { horizon, steps, paths, terms } => {
            let dir = out.unwrap_or(Path::new("figures"));
            let listing = cmd_figures(dir, horizon, steps, paths, terms, cli.seed)?;
            print!("{listing}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_out(target: Option<&Path>, text: &str) -> Result<ExitCode, CliError> {
    match target {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let span = hi - lo;
    (0..points)
        .map(|k| lo + span * k as f64 / (points - 1) as f64)
        .collect()
}

fn exponent_table(
    chars: &LampertiCharacteristics,
    laplace: bool,
    oracle: bool,
    min: Option<f64>,
    max: f64,
    points: usize,
    spec: &QuadratureSpec,
) -> Result<NumericTable, CliError> {
    if points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    let lo = min.unwrap_or(if laplace { 0.0 } else { -5.0 });
    if !(max > lo) {
        return Err(CliError::Config(format!("empty λ grid: [{lo}, {max}]")));
    }
    let mut rows = Vec::with_capacity(points);
    let header = match (laplace, oracle) {
        (true, false) => "lambda,phi",
        (true, true) => "lambda,phi,oracle,abs_error",
        (false, false) => "lambda,psi_re,psi_im",
        (false, true) => "lambda,psi_re,psi_im,oracle_re,oracle_im,abs_error",
    };
    for lam in linspace(lo, max, points) {
        if laplace {
            let phi = exponents::laplace_subordinator(chars, lam)?;
            if oracle {
                let reference = laplace_oracle(chars, lam, spec)?;
                rows.push(vec![lam, phi, reference, (phi - reference).abs()]);
            } else {
                rows.push(vec![lam, phi]);
            }
        } else {
            let psi = exponents::char_exponent(chars, lam)?;
            if oracle {
                let reference = exponents::char_exponent_oracle_with(chars, lam, spec)?;
                rows.push(vec![
                    lam,
                    psi.re,
                    psi.im,
                    reference.re,
                    reference.im,
                    (psi - reference).norm(),
                ]);
            } else {
                rows.push(vec![lam, psi.re, psi.im]);
            }
        }
    }
    Ok(NumericTable { header: header.into(), rows })
}

/// Quadrature route for the Laplace exponent: 𝐝λ + ∫ (1 − e^{−λr}) ν(dr)
/// over the positive radial density, small-jump window and exponential tail
/// handled separately.
fn laplace_oracle(
    chars: &LampertiCharacteristics,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<f64, CliError> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let plus = chars
        .directions()
        .iter()
        .position(|d| d.xi == 1.0)
        .ok_or_else(|| {
            CliError::Config("the Laplace exponent needs the +1 direction charged".into())
        })?;
    let rate = chars.alpha() + 1.0 - chars.directions()[plus].f;
    let integrand = |r: f64| {
        let g = measure::density(chars, plus, r)
            .expect("positive radii are inside the density domain");
        -(-lambda * r).exp_m1() * g
    };
    let jump = quad::integrate(integrand, 0.0, 1.0, spec)?
        + quad::integrate_exp_tail(integrand, 1.0, rate, spec)?;
    let drift = chars.drift()?.unwrap_or(0.0);
    Ok(drift * lambda + jump)
}

fn classify_json(chars: &LampertiCharacteristics) -> String {
    let report = properties::classify(chars);
    let variation = match report.variation {
        Variation::Finite => "finite",
        Variation::Infinite => "infinite",
    };
    let value = serde_json::json!({
        "variation": variation,
        "p_variation_threshold": report.p_variation_threshold,
        "creeps_up": answer_text(report.creeps_up),
        "zero_regular_upward": answer_text(report.zero_regular_upward),
        "selfdecomposable": report.selfdecomposable,
        "jurek": report.jurek,
        "tail_class_delta": report.tail_class_delta,
        "drift": report.drift.map(drift_text),
        "rho_zero": report.rho_zero,
        "cramer_root": report.cramer_root,
        "has_increase_times": report.has_increase_times,
    });
    pretty(&value)
}

fn answer_text(answer: Answer) -> &'static str {
    match answer {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Undetermined => "undetermined",
    }
}

fn drift_text(direction: DriftDirection) -> &'static str {
    match direction {
        DriftDirection::ToPlusInfinity => "to_plus_infinity",
        DriftDirection::Oscillates => "oscillates",
        DriftDirection::ToMinusInfinity => "to_minus_infinity",
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value)
        .expect("serialization of plain values cannot fail");
    text.push('\n');
    text
}

fn simulate_csv(
    chars: &LampertiCharacteristics,
    horizon: f64,
    steps: usize,
    paths: u64,
    terms: u64,
    wide: bool,
    seed: u64,
) -> Result<String, CliError> {
    if steps == 0 {
        return Err(CliError::Config("steps must be at least 1".into()));
    }
    let time_grid = (0..=steps)
        .map(|k| horizon * k as f64 / steps as f64)
        .collect();
    let cfg = SeriesConfig {
        horizon,
        n_terms: terms,
        seed,
        n_paths: paths,
        time_grid,
    };
    let sampled = simulate::sample_path(chars, &cfg)?;
    if wide {
        output::paths_to_wide_csv(&sampled)
    } else {
        Ok(output::paths_to_long_csv(&sampled))
    }
}

fn parse_horizons(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|cell| {
            cell.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("horizons: not a number: {cell:?}")))
        })
        .collect()
}

fn limits_json(
    chars: &LampertiCharacteristics,
    kind: LimitKind,
    horizons: Option<&str>,
    paths: u64,
    t_max: f64,
    seed: u64,
) -> Result<String, CliError> {
    match kind {
        LimitKind::Short => {
            let h_list = match horizons {
                Some(text) => parse_horizons(text)?,
                None => vec![1.0, 0.1, 0.01],
            };
            let reports = limits::short_time_test(chars, &h_list, paths, seed)?;
            Ok(ecf_reports_json("short", &h_list, &reports))
        }
        LimitKind::Long => {
            let h_list = match horizons {
                Some(text) => parse_horizons(text)?,
                None => vec![100.0],
            };
            let reports = limits::long_time_test(chars, &h_list, paths, seed)?;
            Ok(ecf_reports_json("long", &h_list, &reports))
        }
        LimitKind::Spitzer => {
            if !(t_max >= 1.0) || !t_max.is_finite() {
                return Err(CliError::Config(format!(
                    "t_max must be at least 1, got {t_max}"
                )));
            }
            let t_grid: Vec<f64> = (1..=t_max.floor() as u64).map(|k| k as f64).collect();
            let estimate = limits::spitzer_estimate(chars, &t_grid, paths, seed)?;
            Ok(pretty(&serde_json::json!({
                "kind": "spitzer",
                "t_max": t_grid.last(),
                "n_paths": paths,
                "estimate": estimate,
            })))
        }
    }
}

fn ecf_reports_json(kind: &str, h_list: &[f64], reports: &[ECFReport]) -> String {
    let entries: Vec<serde_json::Value> = h_list
        .iter()
        .zip(reports)
        .map(|(h, report)| {
            let rows: Vec<serde_json::Value> = report
                .lambda_grid
                .iter()
                .enumerate()
                .map(|(i, lambda)| {
                    serde_json::json!({
                        "lambda": lambda,
                        "empirical": [report.empirical[i].re, report.empirical[i].im],
                        "reference": [report.reference[i].re, report.reference[i].im],
                    })
                })
                .collect();
            serde_json::json!({
                "h": h,
                "n_samples": report.n_samples,
                "sup_distance": report.sup_distance,
                "ecf": rows,
            })
        })
        .collect();
    pretty(&serde_json::json!({ "kind": kind, "reports": entries }))
}

fn cmd_verify(seed: u64) -> ExitCode {
    let mut outcomes = checks::run_all(seed);
    outcomes.push(csv_determinism_outcome(seed));
    let mut failures = 0;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        if !outcome.passed {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("all {} criteria passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        println!("{failures} of {} criteria failed", outcomes.len());
        ExitCode::from(1)
    }
}

/// The published determinism guarantee: two `simulate` runs with one seed
/// produce byte-identical CSV. Checked on the same code path the subcommand
/// prints, at its default parameters.
fn csv_determinism_outcome(seed: u64) -> CheckOutcome {
    const NAME: &str = "simulate csv byte determinism";
    let run = || {
        let chars = config::default_characteristics();
        simulate_csv(&chars, 1.0, 1000, 1, 10_000, false, seed)
    };
    match (run(), run()) {
        (Ok(a), Ok(b)) => {
            let passed = a == b;
            CheckOutcome {
                index: 13,
                name: NAME,
                passed,
                detail: if passed {
                    format!("two runs, {} identical bytes", a.len())
                } else {
                    "outputs differ".into()
                },
            }
        }
        (Err(e), _) | (_, Err(e)) => CheckOutcome {
            index: 13,
            name: NAME,
            passed: false,
            detail: format!("errored: {e}"),
        },
    }
}

const FIGURE_SETS: [(f64, f64, f64); 6] = [
    (0.5, 1.0, 1.0),
    (1.5, 1.0, 1.0),
    (1.0, 1.0, 1.0),
    (0.5, 1.0, 0.0),
    (1.5, 0.0, 1.0),
    (1.9, 1.0, 1.0),
];

/// Writes the six showcase datasets (α, σ(+1), σ(−1)) with f ≡ 1 and θ = 0,
/// one long-format CSV per dataset, and returns the list of files written.
fn cmd_figures(
    dir: &Path,
    horizon: f64,
    steps: usize,
    paths: u64,
    terms: u64,
    seed: u64,
) -> Result<String, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    let mut listing = String::new();
    for (k, &(alpha, sigma_plus, sigma_minus)) in FIGURE_SETS.iter().enumerate() {
        let mut directions = Vec::new();
        if sigma_plus > 0.0 {
            directions.push(Direction { xi: 1.0, sigma: sigma_plus, f: 1.0 });
        }
        if sigma_minus > 0.0 {
            directions.push(Direction { xi: -1.0, sigma: sigma_minus, f: 1.0 });
        }
        let chars = LampertiCharacteristics::new(alpha, directions, 0.0)?;
        let csv = simulate_csv(
            &chars,
            horizon,
            steps,
            paths,
            terms,
            false,
            seed.wrapping_add(k as u64),
        )?;
        let file = dir.join(format!("figure_{}.csv", k + 1));
        std::fs::write(&file, csv)
            .map_err(|e| CliError::Config(format!("{}: {e}", file.display())))?;
        listing.push_str(&format!("{}\n", file.display()));
    }
    Ok(listing)
}
