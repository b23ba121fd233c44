//! Command-line front end.
//!
//! Exit status is 0 on success, 1 for usage, domain and validation errors and
//! 2 when a numerical solver fails.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::bayes::{log_bf_ncchisq, ChiSqTestSpec, ExpFamilyKind, ExpFamilyModel, Side};
use crate::contingency::{independence_bf, parse_table};
use crate::error::{Error, Result};
use crate::optimize::{lin_space, log_space};
use crate::output::{Envelope, Format, Record, Value};
use crate::power::{default_theta_grid, default_theta_t_grid, dominance_check};
use crate::solver::{
    gamma_vs_df_curve, solve_chisq, solve_umpbt_expfam, UmpbtSolution, DEFAULT_CURVE_ALPHAS,
};
use crate::ttest::{nonexistence_demo, TTestSetting};

#[derive(Debug, Parser)]
#[command(
    name = "umpbt",
    version,
    about = "Uniformly most powerful Bayesian tests",
    allow_negative_numbers = true
)]
struct Cli {
    /// Emit a single JSON document.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV with a header row.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// UMPBT alternative and boundary for a noncentral chi-squared test.
    #[command(allow_negative_numbers = true)]
    Chisq(ChisqArgs),
    /// Bayes factor of an observed statistic against the UMPBT alternative.
    #[command(allow_negative_numbers = true)]
    Bf(BfArgs),
    /// Independence test for a CSV contingency table.
    #[command(allow_negative_numbers = true)]
    Contingency(ContingencyArgs),
    /// UMPBT for a one-sided exponential-family test.
    #[command(allow_negative_numbers = true)]
    Expfam(ExpfamArgs),
    /// Rejection probabilities on a grid and a dominance verdict.
    #[command(allow_negative_numbers = true)]
    Power(PowerArgs),
    /// Matched evidence thresholds against degrees of freedom, written as CSV.
    #[command(allow_negative_numbers = true)]
    Curve(CurveArgs),
    /// Simulation showing that the t-test has no UMPBT.
    #[command(allow_negative_numbers = true)]
    TtestDemo(TtestArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("threshold").required(true).args(["gamma", "alpha"])))]
struct Threshold {
    /// Evidence threshold (> 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Significance level of the matched classical test.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Debug, Args)]
struct ChisqArgs {
    /// Degrees of freedom.
    #[arg(long)]
    df: f64,
    #[command(flatten)]
    threshold: Threshold,
}

#[derive(Debug, Args)]
struct BfArgs {
    #[arg(long)]
    df: f64,
    /// Observed chi-squared statistic.
    #[arg(long)]
    stat: f64,
    #[command(flatten)]
    threshold: Threshold,
}

#[derive(Debug, Args)]
struct ContingencyArgs {
    /// CSV file of counts.
    path: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// First line holds column labels.
    #[arg(long)]
    header: bool,
    /// First field of each line is a row label.
    #[arg(long)]
    row_labels: bool,
}

#[derive(Debug, Args)]
struct ExpfamArgs {
    /// binomial, normal-mean or normal-variance.
    #[arg(long)]
    model: String,
    #[arg(long)]
    theta0: f64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    gamma: f64,
    /// greater or less.
    #[arg(long)]
    side: String,
    /// Trials per observation, known variance or known mean.
    #[arg(long)]
    nuisance: Option<f64>,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[arg(long)]
    df: f64,
    #[arg(long)]
    gamma: f64,
    /// Alternatives as start:stop:count[:log].
    #[arg(long)]
    theta_grid: Option<GridSpec>,
    /// Data-generating noncentralities as start:stop:count[:log].
    #[arg(long)]
    theta_t_grid: Option<GridSpec>,
    /// Monte Carlo draws per grid cell.
    #[arg(long)]
    mc: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Comma-separated significance levels.
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    #[arg(long)]
    df_max: u32,
    /// Output CSV path.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct TtestArgs {
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long)]
    gamma: f64,
    /// Comma-separated data-generating means.
    #[arg(long, value_delimiter = ',', required = true)]
    theta_t: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of simulated datasets.
    #[arg(long, default_value_t = 100_000)]
    draws: usize,
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// True standard deviation of the simulated data.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Inverse-gamma prior shape.
    #[arg(long, default_value_t = 0.0)]
    prior_shape: f64,
    /// Inverse-gamma prior scale.
    #[arg(long, default_value_t = 0.0)]
    prior_scale: f64,
}

/// `start:stop:count[:log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::validation(format!(
                "grid spec must be start:stop:count[:log], got '{s}'"
            ))
        };
        let parts: Vec<&str> = s.split(':').collect();
        if !(parts.len() == 3 || parts.len() == 4 && parts[3] == "log") {
            return Err(bad());
        }
        let start: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        let log = parts.len() == 4;
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(Error::validation("log grids need positive endpoints"));
        }
        Ok(GridSpec {
            start,
            stop,
            count,
            log,
        })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.log {
            log_space(self.start, self.stop, self.count)
        } else {
            lin_space(self.start, self.stop, self.count)
        }
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Returns the process exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Plain
    };
    match execute(cli.command).and_then(|env| env.render(format)) {
        Ok(text) => match stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
        {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: io: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.category());
            if e.is_solver_failure() {
                2
            } else {
                1
            }
        }
    }
}

fn spec_from(df: f64, t: &Threshold) -> Result<ChiSqTestSpec> {
    match (t.gamma, t.alpha) {
        (Some(g), None) => ChiSqTestSpec::with_gamma(df, g),
        (None, Some(a)) => ChiSqTestSpec::with_alpha(df, a),
        _ => Err(Error::validation(
            "exactly one of --gamma and --alpha is required",
        )),
    }
}

fn solution_fields(env: &mut Envelope, sol: &UmpbtSolution) {
    if let Some(df) = sol.df {
        env.push_field("df", df);
    }
    env.push_field("gamma", sol.gamma);
    env.push_field("theta_star", sol.theta_star);
    env.push_field("boundary", sol.boundary);
    env.push_field("direction", sol.direction.to_string());
}

fn execute(command: Command) -> Result<Envelope> {
    match command {
        Command::Chisq(a) => {
            let spec = spec_from(a.df, &a.threshold)?;
            let sol = solve_chisq(&spec)?;
            let mut env = Envelope::new();
            solution_fields(&mut env, &sol);
            if let Some(alpha) = spec.alpha {
                env.push_field("alpha", alpha);
            }
            Ok(env)
        }
        Command::Bf(a) => {
            let spec = spec_from(a.df, &a.threshold)?;
            let sol = solve_chisq(&spec)?;
            let log_bf = log_bf_ncchisq(a.stat, sol.theta_star, a.df)?;
            let mut env = Envelope::new();
            solution_fields(&mut env, &sol);
            if let Some(alpha) = spec.alpha {
                env.push_field("alpha", alpha);
            }
            env.push_field("stat", a.stat);
            env.push_field("log_bf", log_bf);
            env.push_field("bf", log_bf.exp());
            env.push_field("reject", log_bf > sol.gamma.ln());
            Ok(env)
        }
        Command::Contingency(a) => {
            let file =
                File::open(&a.path).map_err(|e| Error::Io(format!("{}: {e}", a.path.display())))?;
            let table = parse_table(BufReader::new(file), a.header, a.row_labels)?;
            let r = independence_bf(&table, a.alpha)?;
            Ok(Envelope::new()
                .field("n_rows", table.rows())
                .field("n_cols", table.cols())
                .field("total", table.total())
                .field("statistic", r.statistic)
                .field("df", r.df)
                .field("alpha", r.alpha)
                .field("gamma", r.gamma)
                .field("theta_star", r.theta_star)
                .field("critical_value", r.critical_value)
                .field("log_bf", r.log_bf)
                .field("bf", r.bf)
                .field("reject", r.rejects())
                .field("min_expected", r.min_expected))
        }
        Command::Expfam(a) => {
            let kind: ExpFamilyKind = a.model.parse()?;
            let side: Side = a.side.parse()?;
            let model = ExpFamilyModel::new(kind, a.theta0, a.n, side, a.nuisance)?;
            let sol = solve_umpbt_expfam(&model, a.gamma)?;
            let mut env = Envelope::new()
                .field("model", kind.name())
                .field("theta0", model.theta0)
                .field("n", model.n)
                .field("side", side.to_string())
                .field("nuisance", model.nuisance);
            solution_fields(&mut env, &sol);
            Ok(env)
        }
        Command::Power(a) => {
            let spec = ChiSqTestSpec::with_gamma(a.df, a.gamma)?;
            let theta_star = solve_chisq(&spec)?.theta_star;
            let theta_grid = a
                .theta_grid
                .map_or_else(|| default_theta_grid(theta_star), |g| g.points());
            let theta_t_grid = a
                .theta_t_grid
                .map_or_else(|| default_theta_t_grid(theta_star), |g| g.points());
            let mut report = dominance_check(a.gamma, a.df, &theta_grid, &theta_t_grid)?;
            if let Some(draws) = a.mc {
                report.curve.attach_monte_carlo(draws, a.seed)?;
            }
            let mut env = Envelope::new();
            solution_fields(&mut env, &report.solution);
            env.push_field("max_margin", report.max_margin);
            env.push_field("worst_theta", report.worst.0);
            env.push_field("worst_theta_t", report.worst.1);
            env.push_field("dominance", report.passed);
            if let Some(draws) = a.mc {
                env.push_field("mc_draws", draws);
                env.push_field("seed", a.seed);
            }
            for e in &report.curve.entries {
                let mut row: Record = vec![
                    ("theta_t".into(), e.theta_t.into()),
                    ("theta".into(), e.theta.into()),
                    ("h".into(), e.h.into()),
                ];
                if let Some(mc) = e.h_mc {
                    row.push(("h_mc".into(), mc.into()));
                }
                env.push_row(row);
            }
            Ok(env)
        }
        Command::Curve(a) => {
            let alphas = if a.alphas.is_empty() {
                DEFAULT_CURVE_ALPHAS.to_vec()
            } else {
                a.alphas
            };
            let points = gamma_vs_df_curve(&alphas, a.df_max)?;
            let mut w = csv::Writer::from_path(&a.output)
                .map_err(|e| Error::Io(format!("{}: {e}", a.output.display())))?;
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["df", "alpha", "gamma", "theta_star"])
                .map_err(io)?;
            for p in &points {
                w.write_record([
                    p.df.to_string(),
                    Value::Num(p.alpha).to_string(),
                    Value::Num(p.gamma).to_string(),
                    Value::Num(p.theta_star).to_string(),
                ])
                .map_err(io)?;
            }
            w.flush()?;
            let max_gamma = points
                .iter()
                .map(|p| p.gamma)
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(Envelope::new()
                .field("output", a.output.display().to_string())
                .field("points", points.len())
                .field("df_max", a.df_max)
                .field("max_gamma", max_gamma))
        }
        Command::TtestDemo(a) => {
            let setting = TTestSetting {
                n: a.n,
                theta0: a.theta0,
                alpha_prior: a.prior_shape,
                beta_prior: a.prior_scale,
                gamma: a.gamma,
                sigma_true: a.sigma,
            };
            let report = nonexistence_demo(&setting, &a.theta_t, a.draws, a.seed)?;
            let mut env = Envelope::new()
                .field("n", a.n)
                .field("gamma", a.gamma)
                .field("gamma_n", setting.gamma_n())
                .field("theta0", a.theta0)
                .field("draws", a.draws)
                .field("seed", a.seed)
                .field("argmax_spread", report.argmax_spread)
                .field("tolerance", report.tolerance)
                .field("nonexistent", report.nonexistent);
            for r in &report.rows {
                env.push_row(vec![
                    ("theta_t".into(), r.theta_t.into()),
                    ("argmax_theta".into(), r.argmax_theta.into()),
                    ("max_prob".into(), r.max_prob.into()),
                    ("log_miss".into(), r.log_miss.into()),
                ]);
            }
            Ok(env)
        }
    }
}
