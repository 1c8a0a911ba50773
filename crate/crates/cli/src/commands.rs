//! Argument definitions and subcommand execution.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use telegraph::analytic::{
    approx_cos_expectation, char_fn_general, conditional_char_fn_symmetric, conditional_moment,
    cos_expectation_symmetric, density_eval, gaussian_cos_expectation, multi_source_char_fn, variance_one_over_f,
    variance_symmetric, ApproxRegime, OneOverFEnsemble, VarianceMode,
};
use telegraph::monte_carlo::{
    estimate_char_fn, estimate_conditional, estimate_schedule, estimate_variance, sample_path, sample_path_from,
    EstimatorResult, McConfig, DEFAULT_WORKERS,
};
use telegraph::pulse::{
    suppression_leading_order, suppression_method_expectation, waiting_method_expectation, PulseSchedule,
    SuppressionMode, WaitingMode,
};
use telegraph::qubit::{
    probs_controlled, probs_from_fourier, probs_gaussian, probs_gaussian_quartic, probs_rtn, ControlMethod,
    PauliZErrorProbs,
};
use telegraph::{ComplexValue, EvaluationPoint, Start, State, TelegraphSource};

use crate::error::CliError;
use crate::grids::{self, GridName, Z_THRESHOLD};
use crate::sweep::{Overrides, SweepSpec};
use crate::table::{Cell, Format, Table};

/// Default path count for `verify`.
pub const VERIFY_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "telegraph", version, about = "Expectations of integrated random telegraph noise")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Output table format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo path count; enables Monte Carlo columns where optional.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

impl GlobalArgs {
    fn mc(&self, default_samples: Option<u64>) -> Option<McConfig> {
        let n = self.samples.or(default_samples)?;
        Some(McConfig {
            n_samples: n,
            seed: self.seed.unwrap_or(0),
            workers: self.workers.unwrap_or(DEFAULT_WORKERS),
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one expectation.
    #[command(subcommand)]
    Expect(ExpectKind),
    /// Compare closed forms against Monte Carlo over fixed grids.
    Verify(VerifyArgs),
    /// Evaluate a JSON sweep specification.
    Sweep(SweepArgs),
    /// Sample one path and emit its flip events.
    Trace(TraceArgs),
    /// Two-qubit Pauli-Z error probabilities.
    #[command(subcommand)]
    Qubit(QubitKind),
    /// Waiting or sign-flip suppression over a list of segment counts.
    Control(ControlArgs),
}

/// Telegraph source parameters. `--tau` sets both dwell times.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SourceArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau_plus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau_minus: Option<f64>,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub p_plus: f64,
}

impl SourceArgs {
    pub fn build(&self) -> Result<TelegraphSource, CliError> {
        let tp = self.tau_plus.or(self.tau);
        let tm = self.tau_minus.or(self.tau);
        match (tp, tm) {
            (Some(tp), Some(tm)) => Ok(TelegraphSource::new(self.delta, tp, tm, self.p_plus)?),
            _ => Err(CliError::Usage("give --tau or both --tau-plus and --tau-minus".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StartArg {
    Positive,
    Negative,
    Mixed,
}

impl From<StartArg> for Start {
    fn from(s: StartArg) -> Start {
        match s {
            StartArg::Positive => Start::Positive,
            StartArg::Negative => Start::Negative,
            StartArg::Mixed => Start::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeArg {
    GaussianLimit,
    FirstOrderLambda,
    NoFlip,
}

impl From<RegimeArg> for ApproxRegime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::GaussianLimit => ApproxRegime::GaussianLimit,
            RegimeArg::FirstOrderLambda => ApproxRegime::FirstOrderLambda,
            RegimeArg::NoFlip => ApproxRegime::NoFlip,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceModeArg {
    Approx,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WaitingModeArg {
    Exact,
    LeadingOrder,
}

impl From<WaitingModeArg> for WaitingMode {
    fn from(m: WaitingModeArg) -> Self {
        match m {
            WaitingModeArg::Exact => WaitingMode::Exact,
            WaitingModeArg::LeadingOrder => WaitingMode::LeadingOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuppressionModeArg {
    IndependentSegments,
    ExactTransfer,
}

impl From<SuppressionModeArg> for SuppressionMode {
    fn from(m: SuppressionModeArg) -> Self {
        match m {
            SuppressionModeArg::IndependentSegments => SuppressionMode::IndependentSegments,
            SuppressionModeArg::ExactTransfer => SuppressionMode::ExactTransfer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Waiting,
    Suppression,
}

#[derive(Debug, Subcommand)]
pub enum ExpectKind {
    /// E[cos mθ] for a symmetric source.
    Symmetric {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// E[exp(imθ)] for a general source.
    General {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = StartArg::Mixed)]
        start: StartArg,
    },
    /// E[cos mθ] for θ ~ N(0, σ²).
    Gaussian {
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
    },
    /// Product over independent sources, each given as
    /// `delta,tau_plus,tau_minus[,p_plus]`.
    Multi {
        #[arg(long = "source", required = true)]
        sources: Vec<String>,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = StartArg::Mixed)]
        start: StartArg,
    },
    /// Asymptotic approximations next to the exact symmetric value.
    Approx {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
    },
    /// Var θ for a symmetric source.
    Variance {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Var θ for a band of log-uniform sources.
    OneOverF {
        #[arg(long, allow_negative_numbers = true)]
        r: u32,
        #[arg(long, allow_negative_numbers = true)]
        tau_a: f64,
        #[arg(long, allow_negative_numbers = true)]
        tau_b: f64,
        #[arg(long, allow_negative_numbers = true)]
        delta_mean: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta_sd: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = VarianceModeArg::Quadrature)]
        mode: VarianceModeArg,
    },
    /// E[cos mθ] and E[θ²] given exactly `flips` flips (symmetric source).
    Conditional {
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        flips: u32,
    },
    /// Density of θ on an even grid over (-θ_c, θ_c).
    Density {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, default_value_t = 101, allow_negative_numbers = true)]
        points: usize,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Grids to run; defaults to symmetric and asymmetric.
    #[arg(long = "grid", value_enum)]
    pub grids: Vec<GridName>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub spec: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct TraceArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = StartArg::Mixed)]
    pub start: StartArg,
}

#[derive(Debug, Subcommand)]
pub enum QubitKind {
    /// Probabilities under one telegraph source.
    Rtn {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Probabilities for θ ~ N(0, σ²).
    Gaussian {
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
        /// Add the quartic expansion columns.
        #[arg(long)]
        quartic: bool,
    },
    /// Probabilities from E[cos 2θ] and E[cos 4θ].
    Fourier {
        #[arg(long, allow_negative_numbers = true)]
        e2: f64,
        #[arg(long, allow_negative_numbers = true)]
        e4: f64,
    },
    /// Probabilities with the gate split into `n` controlled segments.
    Controlled {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        n: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = WaitingModeArg::Exact)]
        waiting_mode: WaitingModeArg,
        #[arg(long, value_enum, default_value_t = SuppressionModeArg::ExactTransfer)]
        suppression_mode: SuppressionModeArg,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ControlArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    /// Total drive time.
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Segment counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Wait between drives for sampled waiting schedules; defaults to 50
    /// times the longer dwell time.
    #[arg(long, allow_negative_numbers = true)]
    pub wait: Option<f64>,
    #[arg(long, value_enum, default_value_t = StartArg::Mixed)]
    pub start: StartArg,
}

/// A finished command: the table to emit, an optional stderr summary and
/// an optional failure that sets the exit code after output is written.
pub struct Outcome {
    pub table: Table,
    pub summary: Option<String>,
    pub failure: Option<CliError>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome {
            table,
            summary: None,
            failure: None,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Expect(kind) => expect(kind, g).map(Outcome::from),
        Command::Verify(args) => verify(args, g),
        Command::Sweep(args) => sweep(args, g).map(Outcome::from),
        Command::Trace(args) => trace(args, g).map(Outcome::from),
        Command::Qubit(kind) => qubit(kind).map(Outcome::from),
        Command::Control(args) => control(args, g).map(Outcome::from),
    }
}

const MC_COLUMNS: [&str; 5] = ["mc_re", "mc_im", "mc_se_re", "mc_se_im", "z"];

fn mc_cells(r: &EstimatorResult, analytic: ComplexValue) -> [Cell; 5] {
    [
        r.mean.re.into(),
        r.mean.im.into(),
        r.std_error_re.into(),
        r.std_error_im.into(),
        r.z_score(analytic).into(),
    ]
}

fn with_mc<'a>(cols: &[&'a str], mc: bool) -> Vec<&'a str> {
    let mut v = cols.to_vec();
    if mc {
        v.extend(MC_COLUMNS);
    }
    v
}

#[derive(Serialize)]
struct Hashed<'a, T: Serialize> {
    command: &'a str,
    args: &'a T,
    mc: Option<McConfig>,
}

fn table_for<T: Serialize>(formula: &str, args: &T, mc: Option<McConfig>, columns: &[&str]) -> Table {
    Table::new(
        formula,
        &Hashed {
            command: formula,
            args,
            mc,
        },
        columns,
    )
}

fn parse_source(text: &str) -> Result<TelegraphSource, CliError> {
    let fields: Vec<f64> = text
        .split(',')
        .map(|f| f.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--source `{text}`: {e}")))?;
    match fields[..] {
        [d, tp, tm] => Ok(TelegraphSource::new(d, tp, tm, 0.5)?),
        [d, tp, tm, p] => Ok(TelegraphSource::new(d, tp, tm, p)?),
        _ => Err(CliError::Usage(format!(
            "--source `{text}` needs delta,tau_plus,tau_minus[,p_plus]"
        ))),
    }
}

fn expect(kind: &ExpectKind, g: &GlobalArgs) -> Result<Table, CliError> {
    let mc = g.mc(None);
    match kind {
        ExpectKind::Symmetric { source, m, t } => {
            let s = source.build()?;
            let point = EvaluationPoint::new(*m, *t)?;
            let value = cos_expectation_symmetric(&s, &point)?;
            let mut table = table_for("symmetric", &(source, m, t), mc, &with_mc(&["m", "t", "value"], mc.is_some()));
            let mut row: Vec<Cell> = vec![(*m).into(), (*t).into(), value.into()];
            if let Some(c) = mc {
                let r = estimate_char_fn(&s, &point, Start::Mixed, &c)?;
                row.extend(mc_cells(&r, ComplexValue::new(value, 0.0)));
            }
            table.push(row);
            Ok(table)
        }
        ExpectKind::General { source, m, t, start } => {
            let s = source.build()?;
            let point = EvaluationPoint::new(*m, *t)?;
            let v = char_fn_general(&s, &point, (*start).into());
            let mut table = table_for(
                "general",
                &(source, m, t, start),
                mc,
                &with_mc(&["m", "t", "re", "im"], mc.is_some()),
            );
            let mut row: Vec<Cell> = vec![(*m).into(), (*t).into(), v.re.into(), v.im.into()];
            if let Some(c) = mc {
                row.extend(mc_cells(&estimate_char_fn(&s, &point, (*start).into(), &c)?, v));
            }
            table.push(row);
            Ok(table)
        }
        ExpectKind::Gaussian { m, sigma } => {
            if !(sigma.is_finite() && *sigma >= 0.0) {
                return Err(CliError::Usage(format!("--sigma must be finite and >= 0, got {sigma}")));
            }
            let mut table = table_for("gaussian", &(m, sigma), None, &["m", "sigma", "value"]);
            table.push(vec![(*m).into(), (*sigma).into(), gaussian_cos_expectation(*m, *sigma).into()]);
            Ok(table)
        }
        ExpectKind::Multi { sources, m, t, start } => {
            let start: Start = (*start).into();
            let list: Vec<(TelegraphSource, Start)> = sources
                .iter()
                .map(|s| parse_source(s).map(|s| (s, start)))
                .collect::<Result<_, _>>()?;
            let point = EvaluationPoint::new(*m, *t)?;
            let v = multi_source_char_fn(&list, &point);
            let mut table = table_for(
                "multi",
                &(sources, m, t),
                mc,
                &with_mc(&["m", "t", "sources", "re", "im"], mc.is_some()),
            );
            let mut row: Vec<Cell> = vec![(*m).into(), (*t).into(), list.len().into(), v.re.into(), v.im.into()];
            if let Some(c) = mc {
                let r = telegraph::monte_carlo::estimate_multi_source(&list, &point, &c)?;
                row.extend(mc_cells(&r, v));
            }
            table.push(row);
            Ok(table)
        }
        ExpectKind::Approx { source, m, t, regime } => {
            let s = source.build()?;
            let point = EvaluationPoint::new(*m, *t)?;
            let exact = cos_expectation_symmetric(&s, &point)?;
            let regimes: Vec<RegimeArg> = match regime {
                Some(r) => vec![*r],
                None => vec![RegimeArg::GaussianLimit, RegimeArg::FirstOrderLambda, RegimeArg::NoFlip],
            };
            let mut table = table_for(
                "approx",
                &(source, m, t, regime),
                None,
                &["m", "t", "regime", "approx", "exact", "abs_error"],
            );
            for r in regimes {
                let a = approx_cos_expectation(&s, &point, r.into())?;
                let name = r.to_possible_value().expect("named").get_name().to_owned();
                table.push(vec![
                    (*m).into(),
                    (*t).into(),
                    name.into(),
                    a.into(),
                    exact.into(),
                    (a - exact).abs().into(),
                ]);
            }
            Ok(table)
        }
        ExpectKind::Variance { source, t } => {
            let s = source.build()?;
            let v = variance_symmetric(&s, *t)?;
            let mut cols = vec!["t", "variance"];
            if mc.is_some() {
                cols.extend(["mc_variance", "mc_se", "z"]);
            }
            let mut table = table_for("variance", &(source, t), mc, &cols);
            let mut row: Vec<Cell> = vec![(*t).into(), v.into()];
            if let Some(c) = mc {
                let e = estimate_variance(&s, *t, Start::Mixed, &c)?;
                row.extend([e.variance.into(), e.std_error.into(), ((e.variance - v).abs() / e.std_error).into()]);
            }
            table.push(row);
            Ok(table)
        }
        ExpectKind::OneOverF {
            r,
            tau_a,
            tau_b,
            delta_mean,
            delta_sd,
            t,
            mode,
        } => {
            let e = OneOverFEnsemble::new(*r, *tau_a, *tau_b, *delta_mean, *delta_sd, None)?;
            let vm = match mode {
                VarianceModeArg::Approx => VarianceMode::Approx,
                VarianceModeArg::Quadrature => VarianceMode::Quadrature,
            };
            let v = variance_one_over_f(&e, *t, vm)?;
            let mut cols = vec!["t", "lambda_a", "variance"];
            if mc.is_some() {
                cols.extend(["mc_variance", "mc_se", "z"]);
            }
            let mut table = table_for("one_over_f", &(e, t, mode), mc, &cols);
            let mut row: Vec<Cell> = vec![(*t).into(), e.lambda_band(*t).0.into(), v.into()];
            if let Some(c) = mc {
                let est = telegraph::monte_carlo::estimate_ensemble_variance(&e, *t, &c)?;
                row.extend([
                    est.variance.into(),
                    est.std_error.into(),
                    ((est.variance - v).abs() / est.std_error).into(),
                ]);
            }
            table.push(row);
            Ok(table)
        }
        ExpectKind::Conditional { delta, tau, m, t, flips } => {
            let theta_c = delta * t;
            if !(theta_c.is_finite() && theta_c >= 0.0) {
                return Err(CliError::Usage(format!("Δt must be finite and >= 0, got {theta_c}")));
            }
            let value = conditional_char_fn_symmetric(theta_c, *m, *flips);
            let second = conditional_moment(theta_c, 2, *flips);
            let mut table = table_for(
                "conditional",
                &(delta, tau, m, t, flips),
                mc,
                &with_mc(&["flips", "m", "theta_c", "value", "second_moment"], mc.is_some()),
            );
            let mut row: Vec<Cell> =
                vec![(*flips).into_cell(), (*m).into(), theta_c.into(), value.into(), second.into()];
            if let Some(c) = mc {
                let tau = tau.ok_or_else(|| CliError::Usage("Monte Carlo conditioning needs --tau".into()))?;
                let s = TelegraphSource::symmetric(*delta, tau)?;
                let r = estimate_conditional(&s, &EvaluationPoint::new(*m, *t)?, *flips, &c)?;
                row.extend(mc_cells(&r, ComplexValue::new(value, 0.0)));
            }
            table.push(row);
            Ok(table)
        }
        ExpectKind::Density { source, t, points } => {
            let s = source.build()?;
            let tc = s.theta_c(*t);
            if *points < 1 {
                return Err(CliError::Usage("--points must be >= 1".into()));
            }
            let mut table = table_for(
                "density",
                &(source, t, points),
                None,
                &["theta", "continuous", "atom_plus", "atom_minus"],
            );
            // open grid so the endpoints, where the atoms sit, are excluded
            for i in 0..*points {
                let theta = -tc + 2.0 * tc * (i as f64 + 0.5) / *points as f64;
                let d = density_eval(&s, *t, theta, None)?;
                table.push(vec![theta.into(), d.continuous.into(), d.atom_plus.into(), d.atom_minus.into()]);
            }
            Ok(table)
        }
    }
}

trait IntoCell {
    fn into_cell(self) -> Cell;
}

impl IntoCell for u32 {
    fn into_cell(self) -> Cell {
        Cell::Num(f64::from(self))
    }
}

/// Table columns for `verify`.
pub const VERIFY_COLUMNS: [&str; 13] = [
    "grid", "label", "m", "t", "analytic_re", "analytic_im", "mc_re", "mc_im", "mc_se_re", "mc_se_im", "z",
    "n_samples", "status",
];

fn verify(args: &VerifyArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let grid_names = if args.grids.is_empty() {
        vec![GridName::Symmetric, GridName::Asymmetric]
    } else {
        args.grids.clone()
    };
    let config = g.mc(Some(VERIFY_SAMPLES)).expect("default samples");
    let mut table = table_for("verify", &grid_names, Some(config), &VERIFY_COLUMNS);
    let mut total = 0;
    let mut failed = 0;
    let mut worst: (f64, String) = (0.0, String::new());
    for name in grid_names {
        let cases = grids::grid(name);
        let outcomes = grids::run_grid(&cases, &config)?;
        let grid_label = name.to_possible_value().expect("named").get_name().to_owned();
        for o in outcomes {
            total += 1;
            let pass = o.passed();
            if !pass {
                failed += 1;
            }
            if o.z > worst.0 || worst.1.is_empty() {
                worst = (o.z, o.case.label.clone());
            }
            table.push(vec![
                grid_label.clone().into(),
                o.case.label.clone().into(),
                o.case.point.m.into(),
                o.case.point.t.into(),
                o.analytic.re.into(),
                o.analytic.im.into(),
                o.estimate.mean.re.into(),
                o.estimate.mean.im.into(),
                o.estimate.std_error_re.into(),
                o.estimate.std_error_im.into(),
                o.z.into(),
                o.estimate.n_samples.into(),
                if pass { "pass" } else { "fail" }.into(),
            ]);
        }
    }
    let summary = format!(
        "verify: {} of {total} rows within {Z_THRESHOLD}·SE; worst |Δ|/SE = {:.3} ({})",
        total - failed,
        worst.0,
        worst.1
    );
    let failure = (failed > 0).then_some(CliError::VerificationFailed {
        failed,
        total,
        threshold: Z_THRESHOLD,
    });
    Ok(Outcome {
        table,
        summary: Some(summary),
        failure,
    })
}

fn sweep(args: &SweepArgs, g: &GlobalArgs) -> Result<Table, CliError> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.spec.display())))?;
    let mut spec = SweepSpec::parse(&text, &args.spec.display().to_string())?;
    spec.apply(&Overrides {
        seed: g.seed,
        samples: g.samples,
        workers: g.workers,
    });
    spec.run()
}

fn trace(args: &TraceArgs, g: &GlobalArgs) -> Result<Table, CliError> {
    let s = args.source.build()?;
    if !(args.t.is_finite() && args.t >= 0.0) {
        return Err(CliError::Usage(format!("--t must be finite and >= 0, got {}", args.t)));
    }
    let seed = g.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let path = match args.start {
        StartArg::Mixed => sample_path(&s, args.t, &mut rng),
        StartArg::Positive => sample_path_from(&s, args.t, State::Positive, &mut rng),
        StartArg::Negative => sample_path_from(&s, args.t, State::Negative, &mut rng),
    };
    let mut table = table_for("trace", &(args, seed), None, &["time", "y", "theta"]);
    for (time, y, theta) in path.events(s.delta()) {
        table.push(vec![time.into(), y.into(), theta.into()]);
    }
    Ok(table)
}

fn probs_row(p: &PauliZErrorProbs) -> [Cell; 4] {
    [p.n0.into(), p.n1.into(), p.n2.into(), p.completeness().into()]
}

fn qubit(kind: &QubitKind) -> Result<Table, CliError> {
    const COLS: [&str; 4] = ["n0", "n1", "n2", "completeness"];
    match kind {
        QubitKind::Rtn { source, t } => {
            let p = probs_rtn(&source.build()?, *t)?;
            let mut table = table_for("qubit_rtn", &(source, t), None, &[&["t"][..], &COLS].concat());
            let mut row = vec![(*t).into()];
            row.extend(probs_row(&p));
            table.push(row);
            Ok(table)
        }
        QubitKind::Gaussian { sigma, quartic } => {
            let mut cols = [&["sigma"][..], &COLS].concat();
            if *quartic {
                cols.extend(["n0_quartic", "n1_quartic", "n2_quartic"]);
            }
            let mut table = table_for("qubit_gaussian", &(sigma, quartic), None, &cols);
            let mut row = vec![(*sigma).into()];
            row.extend(probs_row(&probs_gaussian(*sigma)?));
            if *quartic {
                let q = probs_gaussian_quartic(*sigma)?;
                row.extend([q.n0.into(), q.n1.into(), q.n2.into()]);
            }
            table.push(row);
            Ok(table)
        }
        QubitKind::Fourier { e2, e4 } => {
            let mut table = table_for("qubit_fourier", &(e2, e4), None, &[&["e2", "e4"][..], &COLS].concat());
            let mut row = vec![(*e2).into(), (*e4).into()];
            row.extend(probs_row(&probs_from_fourier(1.0, *e2, *e4)?));
            table.push(row);
            Ok(table)
        }
        QubitKind::Controlled {
            source,
            t,
            n,
            method,
            waiting_mode,
            suppression_mode,
        } => {
            let m = match method {
                MethodArg::Waiting => ControlMethod::Waiting {
                    mode: (*waiting_mode).into(),
                },
                MethodArg::Suppression => ControlMethod::Suppression {
                    mode: (*suppression_mode).into(),
                },
            };
            let p = probs_controlled(&source.build()?, *t, *n, m)?;
            let mut table = table_for("qubit_controlled", &(source, t, n, m), None, &[&["t", "n"][..], &COLS].concat());
            let mut row = vec![(*t).into(), (*n).into()];
            row.extend(probs_row(&p));
            table.push(row);
            Ok(table)
        }
    }
}

fn control(args: &ControlArgs, g: &GlobalArgs) -> Result<Table, CliError> {
    let s = args.source.build()?;
    let mc = g.mc(None);
    let cols: Vec<&str> = match args.method {
        MethodArg::Waiting => vec!["n", "exact", "leading_order", "error"],
        MethodArg::Suppression => vec!["n", "exact_re", "exact_im", "independent_segments", "leading_order", "error"],
    };
    let formula = match args.method {
        MethodArg::Waiting => "control_waiting",
        MethodArg::Suppression => "control_suppression",
    };
    let mut table = table_for(formula, args, mc, &with_mc(&cols, mc.is_some()));
    for (i, &n) in args.n.iter().enumerate() {
        let mut row: Vec<Cell> = vec![n.into()];
        let (analytic, schedule) = match args.method {
            MethodArg::Waiting => {
                let exact = waiting_method_expectation(&s, args.m, args.t, n, WaitingMode::Exact)?;
                let lead = waiting_method_expectation(&s, args.m, args.t, n, WaitingMode::LeadingOrder)?;
                row.extend([exact.into(), lead.into(), (1.0 - exact).into()]);
                let wait = args.wait.unwrap_or(50.0 * s.tau_plus().max(s.tau_minus()));
                (ComplexValue::new(exact, 0.0), PulseSchedule::waiting(args.t, n, wait)?)
            }
            MethodArg::Suppression => {
                let exact = suppression_method_expectation(&s, args.m, args.t, n, SuppressionMode::ExactTransfer)?;
                let independent = suppression_method_expectation(&s, args.m, args.t, n, SuppressionMode::IndependentSegments)?;
                let lead = suppression_leading_order(&s, args.m, args.t, n)?;
                row.extend([
                    exact.re.into(),
                    exact.im.into(),
                    independent.re.into(),
                    lead.into(),
                    (1.0 - exact.re).into(),
                ]);
                (exact, PulseSchedule::suppression(args.t, n)?)
            }
        };
        if let Some(c) = mc {
            let c = McConfig {
                seed: c.seed.wrapping_add(i as u64),
                ..c
            };
            let r = estimate_schedule(&schedule, &s, args.m, args.start.into(), &c)?;
            row.extend(mc_cells(&r, analytic));
        }
        table.push(row);
    }
    Ok(table)
}
