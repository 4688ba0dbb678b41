//! The `cohlab` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
//! failure, 4 vacuous guarantee (no coherent subspace at the requested scale).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytics::{self, BoundValue, LevyParams};
use crate::experiments::{
    self, ConcentrationReport, ExperimentConfig, MeasureKind, SubspaceFloorReport, TwirlInput,
};
use crate::report::{self, ReportEnvelope};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VACUOUS: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cohlab", version, about = "Coherence typicality of Haar-random pure states")]
pub struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, env = "COHLAB_THREADS")]
    pub threads: Option<usize>,

    /// Display entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "1")]
    RelativeEntropy,
    #[value(name = "3")]
    Purity,
    #[value(name = "4")]
    TraceDistance,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Integral,
    Matrix,
    Inequalities,
    Moments,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form expectations for dimension d.
    Expect {
        #[arg(long)]
        dim: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Monte Carlo concentration report for one measure.
    Concentrate {
        #[arg(long, value_enum)]
        measure: MeasureKind,
        #[arg(long)]
        dim: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated deviations, ascending.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sampled check of the coherent-subspace floor at ε = f·ln d.
    Subspace {
        #[arg(long)]
        dim: u64,
        #[arg(long = "eps-frac")]
        eps_frac: f64,
        #[arg(long, default_value_t = 2000)]
        states: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Lévy concentration bounds.
    Bounds {
        #[arg(long)]
        dim: u64,
        #[arg(long)]
        eps: f64,
        /// Lipschitz constant for the generic bound.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, value_enum)]
        theorem: Option<Theorem>,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo sample count for the matrix and moments suites.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VacuousGuarantee { .. } => EXIT_VACUOUS,
            Error::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_NUMERIC,
            message: format!("i/o error: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` and runs the command, writing to `out`/`err`. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let threads = cli.threads;
    let mut out_buf = Vec::new();
    let mut err_buf = Vec::new();
    let result = experiments::with_threads(threads, || execute(&cli, &mut out_buf, &mut err_buf))
        .map_err(CliError::from)
        .and_then(|r| r);
    let _ = out.write_all(&out_buf);
    let _ = err.write_all(&err_buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn units(bits: bool) -> &'static str {
    if bits {
        "bits"
    } else {
        "nats"
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, env: &ReportEnvelope<T>) -> Result<(), CliError> {
    let json = report::to_json(env).map_err(|e| CliError {
        code: EXIT_NUMERIC,
        message: format!("serialization failed: {e}"),
    })?;
    writeln!(out, "{json}")?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let bits = cli.bits;
    match &cli.command {
        Command::Expect { dim, format } => cmd_expect(*dim, *format, bits, out),
        Command::Concentrate {
            measure,
            dim,
            trials,
            seed,
            eps,
            bins,
            format,
            output,
        } => {
            let config = ExperimentConfig {
                dim: *dim,
                trials: *trials,
                master_seed: *seed,
                epsilons: eps.clone(),
                histogram_bins: *bins,
                measure_kind: *measure,
            };
            cmd_concentrate(&config, *format, output.as_deref(), bits, out, err)
        }
        Command::Subspace {
            dim,
            eps_frac,
            states,
            seed,
            format,
        } => cmd_subspace(*dim, *eps_frac, *states, *seed, *format, bits, out),
        Command::Bounds {
            dim,
            eps,
            eta,
            theorem,
            format,
        } => cmd_bounds(*dim, *eps, *eta, *theorem, *format, out),
        Command::Verify {
            suite,
            seed,
            samples,
        } => cmd_verify(*suite, *seed, *samples, out),
    }
}

/// Closed forms for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectTable {
    pub dim: u64,
    pub expected_cr: f64,
    pub expected_cr_scaled: f64,
    pub expected_cr_via_beta: f64,
    pub ln_d: f64,
    pub expected_classical_purity: f64,
    pub expected_trace_distance: f64,
    pub typical_half_trace_distance: f64,
    pub typical_l1_upper: f64,
    pub trivial_l1_upper: f64,
    pub typical_fannes_floor: f64,
    pub fannes_asymptote: f64,
    pub trace_distance_limit: f64,
    pub lipschitz_cr: Option<f64>,
}

impl ExpectTable {
    pub fn new(d: u64) -> crate::Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("expect needs d >= 2, got {d}")));
        }
        let ln_d = (d as f64).ln();
        let ecr = analytics::expected_cr(d)?;
        Ok(Self {
            dim: d,
            expected_cr: ecr,
            expected_cr_scaled: ecr / ln_d,
            expected_cr_via_beta: analytics::expected_cr_via_beta(d)?,
            ln_d,
            expected_classical_purity: analytics::expected_classical_purity(d)?,
            expected_trace_distance: analytics::expected_trace_distance(d)?,
            typical_half_trace_distance: analytics::typical_half_trace_distance(d)?,
            typical_l1_upper: analytics::typical_l1_upper(d)?,
            trivial_l1_upper: (d - 1) as f64,
            typical_fannes_floor: analytics::typical_fannes_floor(d)?,
            fannes_asymptote: analytics::fannes_asymptote(),
            trace_distance_limit: 2.0 / std::f64::consts::E,
            lipschitz_cr: analytics::lipschitz_cr(d).ok(),
        })
    }

    fn in_bits(mut self) -> Self {
        let k = std::f64::consts::LN_2;
        self.expected_cr /= k;
        self.expected_cr_via_beta /= k;
        self.ln_d /= k;
        self.typical_fannes_floor /= k;
        self.lipschitz_cr = self.lipschitz_cr.map(|l| l / k);
        self
    }

    fn rows(&self) -> Vec<(&'static str, f64)> {
        let mut rows = vec![
            ("dim", self.dim as f64),
            ("expected_cr", self.expected_cr),
            ("expected_cr_scaled", self.expected_cr_scaled),
            ("expected_cr_via_beta", self.expected_cr_via_beta),
            ("ln_d", self.ln_d),
            ("expected_classical_purity", self.expected_classical_purity),
            ("expected_trace_distance", self.expected_trace_distance),
            ("typical_half_trace_distance", self.typical_half_trace_distance),
            ("typical_l1_upper", self.typical_l1_upper),
            ("trivial_l1_upper", self.trivial_l1_upper),
            ("typical_fannes_floor", self.typical_fannes_floor),
            ("fannes_asymptote", self.fannes_asymptote),
            ("trace_distance_limit", self.trace_distance_limit),
        ];
        if let Some(l) = self.lipschitz_cr {
            rows.push(("lipschitz_cr", l));
        }
        rows
    }
}

fn write_text_rows(out: &mut dyn Write, rows: &[(&str, String)]) -> Result<(), CliError> {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

fn cmd_expect(d: u64, format: TableFormat, bits: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut table = ExpectTable::new(d)?;
    if bits {
        table = table.in_bits();
    }
    match format {
        TableFormat::Json => emit_json(out, &ReportEnvelope::new("expect", units(bits), table))?,
        TableFormat::Text => {
            let rows: Vec<(&str, String)> = table
                .rows()
                .into_iter()
                .map(|(k, v)| (k, if k == "dim" { format!("{}", v as u64) } else { format!("{v:.6}") }))
                .collect();
            write_text_rows(out, &rows)?;
        }
    }
    Ok(EXIT_OK)
}

fn concentration_in_bits(mut r: ConcentrationReport) -> ConcentrationReport {
    if !r.config.measure_kind.is_entropy() {
        return r;
    }
    let k = std::f64::consts::LN_2;
    r.empirical_mean /= k;
    r.empirical_stderr /= k;
    r.empirical_variance /= k * k;
    r.analytic_mean = r.analytic_mean.map(|m| m / k);
    r.observed_min /= k;
    r.observed_max /= k;
    for b in &mut r.histogram {
        b.bin_low /= k;
        b.bin_high /= k;
    }
    for t in &mut r.tails {
        t.epsilon /= k;
    }
    r
}

fn cmd_concentrate(
    config: &ExperimentConfig,
    format: ReportFormat,
    output: Option<&std::path::Path>,
    bits: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut report = experiments::run_concentration(config)?;
    for flag in &report.flags {
        writeln!(err, "warning: {flag}")?;
    }
    if bits {
        report = concentration_in_bits(report);
    }
    let mut file;
    let sink: &mut dyn Write = match output {
        Some(path) => {
            file = std::fs::File::create(path)?;
            &mut file
        }
        None => out,
    };
    match format {
        ReportFormat::Json => emit_json(sink, &ReportEnvelope::new("concentrate", units(bits), report))?,
        ReportFormat::Csv => report::write_histogram_csv(sink, &report.histogram).map_err(|e| CliError {
            code: EXIT_NUMERIC,
            message: format!("csv output failed: {e}"),
        })?,
    }
    Ok(EXIT_OK)
}

fn subspace_in_bits(mut r: SubspaceFloorReport) -> SubspaceFloorReport {
    let k = std::f64::consts::LN_2;
    r.eps /= k;
    r.threshold /= k;
    r.min_observed_cr /= k;
    r.mean_observed_cr /= k;
    r
}

fn cmd_subspace(
    d: u64,
    eps_frac: f64,
    states: u64,
    seed: u64,
    format: TableFormat,
    bits: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if !(eps_frac > 0.0 && eps_frac < 1.0) {
        return Err(usage(format!("--eps-frac must lie in (0, 1), got {eps_frac}")));
    }
    if d < 3 {
        return Err(usage(format!("--dim must be >= 3, got {d}")));
    }
    let eps = eps_frac * (d as f64).ln();
    let mut report = experiments::run_subspace_floor(d, eps, states, seed)?;
    if bits {
        report = subspace_in_bits(report);
    }
    match format {
        TableFormat::Json => emit_json(out, &ReportEnvelope::new("subspace", units(bits), report))?,
        TableFormat::Text => {
            let rows = vec![
                ("d", report.d.to_string()),
                ("eps", format!("{:.6}", report.eps)),
                ("s", report.s.to_string()),
                ("threshold", format!("{:.6}", report.threshold)),
                ("n_states", report.n_states.to_string()),
                ("min_observed_cr", format!("{:.6}", report.min_observed_cr)),
                ("violations", report.violations.to_string()),
                ("net_log_size", format!("{:.6e}", report.net_log_size)),
            ];
            write_text_rows(out, &rows)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub theorem: String,
    pub dim: u64,
    pub epsilon: f64,
    pub lipschitz_eta: f64,
    pub bound: BoundValue,
}

fn cmd_bounds(
    d: u64,
    eps: f64,
    eta: Option<f64>,
    theorem: Option<Theorem>,
    format: TableFormat,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if d == 0 {
        return Err(usage("--dim must be >= 1"));
    }
    let wanted: Vec<Theorem> = match theorem {
        Some(t) => vec![t],
        None => {
            let mut all = Vec::new();
            if d >= 3 {
                all.push(Theorem::RelativeEntropy);
            }
            all.extend([Theorem::Purity, Theorem::TraceDistance]);
            if eta.is_some() {
                all.push(Theorem::Generic);
            }
            all
        }
    };
    let mut rows = Vec::new();
    for t in wanted {
        let row = match t {
            Theorem::RelativeEntropy => BoundRow {
                theorem: "1".into(),
                dim: d,
                epsilon: eps,
                lipschitz_eta: analytics::lipschitz_cr(d).map_err(|e| usage(e.to_string()))?,
                bound: analytics::levy_bound_cr(d, eps)?,
            },
            Theorem::Purity => BoundRow {
                theorem: "3".into(),
                dim: d,
                epsilon: eps,
                lipschitz_eta: 2.0,
                bound: analytics::levy_bound_purity(d, eps)?,
            },
            Theorem::TraceDistance => BoundRow {
                theorem: "4".into(),
                dim: d,
                epsilon: eps,
                lipschitz_eta: 2.0,
                bound: analytics::levy_bound_trdist(d, eps)?,
            },
            Theorem::Generic => {
                let eta = eta.ok_or_else(|| usage("--theorem generic needs --eta"))?;
                let params = LevyParams::for_pure_states(d, eps, eta)?;
                BoundRow {
                    theorem: "generic".into(),
                    dim: d,
                    epsilon: eps,
                    lipschitz_eta: eta,
                    bound: analytics::levy_generic(&params),
                }
            }
        };
        rows.push(row);
    }
    match format {
        TableFormat::Json => emit_json(out, &ReportEnvelope::new("bounds", "nats", rows))?,
        TableFormat::Text => {
            writeln!(out, "{:<8} {:>14} {:>10} {:>14}", "theorem", "raw", "effective", "log_raw")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:<8} {:>14.6e} {:>10.6} {:>14.6}",
                    r.theorem, r.bound.raw, r.bound.effective, r.bound.log_raw
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

/// Runs one verification suite.
pub fn verify_suite(suite: Suite, seed: u64, samples: u64) -> crate::Result<VerifyReport> {
    let mut checks = Vec::new();
    let name = match suite {
        Suite::Integral => {
            let mut worst = (0.0f64, 0u64);
            for d in 2..=10_000u64 {
                let dev = (analytics::expected_cr_via_beta(d)? - analytics::expected_cr(d)?).abs();
                if dev > worst.0 {
                    worst = (dev, d);
                }
            }
            checks.push(check(
                "beta_route_d2_to_1e4",
                worst.0 <= 1e-10,
                format!("max |via_beta - H_d + 1| = {:e} at d = {}", worst.0, worst.1),
            ));
            let mut worst = (0.0f64, 0u64);
            for d in 2..=50u64 {
                let dev = (analytics::expected_cr_via_quadrature(d)? - analytics::expected_cr(d)?).abs();
                if dev > worst.0 {
                    worst = (dev, d);
                }
            }
            checks.push(check(
                "quadrature_route_d2_to_50",
                worst.0 <= 1e-6,
                format!("max |quadrature - H_d + 1| = {:e} at d = {}", worst.0, worst.1),
            ));
            "integral"
        }
        Suite::Matrix => {
            for d in 2..=8u64 {
                for input in [TwirlInput::BasisState(0), TwirlInput::MaximallyMixed] {
                    let r = experiments::run_matrix_integral_check(d, samples, seed, input)?;
                    checks.push(check(
                        format!("twirl_d{d}_{input:?}"),
                        r.passed,
                        format!("max deviation {:e} vs tolerance {:e}", r.max_abs_deviation, r.tolerance),
                    ));
                }
            }
            "matrix"
        }
        Suite::Inequalities => {
            for d in [2u64, 3, 10, 100] {
                let r = experiments::run_inequality_sweep(d, 10_000, seed)?;
                checks.push(check(
                    format!("inequalities_d{d}"),
                    r.total_violations() == 0,
                    format!(
                        "l1/purity {}, fannes {}, range {} violations over {} states",
                        r.l1_purity_violations, r.fannes_violations, r.range_violations, r.trials
                    ),
                ));
            }
            "inequalities"
        }
        Suite::Moments => {
            for d in [2u64, 10, 100] {
                let r = experiments::run_moment_check(d, samples, seed)?;
                checks.push(check(
                    format!("p1_moments_d{d}"),
                    r.within(4.0),
                    format!(
                        "E[p1] = {:.6e} (expected {:.6e}, se {:.1e}); E[p1^2] = {:.6e} (expected {:.6e}, se {:.1e})",
                        r.mean_p1, r.expected_p1, r.stderr_p1, r.mean_p1_sq, r.expected_p1_sq, r.stderr_p1_sq
                    ),
                ));
            }
            let ks = experiments::run_unitary_ks_check(2, samples, seed)?;
            checks.push(check(
                "u11_ks_d2",
                ks.ks_distance < 0.01,
                format!("KS distance {:.5} over {} unitaries", ks.ks_distance, ks.n),
            ));
            "moments"
        }
    };
    Ok(VerifyReport {
        suite: name.into(),
        seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn cmd_verify(suite: Suite, seed: u64, samples: u64, out: &mut dyn Write) -> Result<i32, CliError> {
    if samples == 0 {
        return Err(usage("--samples must be >= 1"));
    }
    let report = verify_suite(suite, seed, samples)?;
    let passed = report.passed;
    emit_json(out, &ReportEnvelope::new("verify", "nats", report))?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
