//! Argument parsing and dispatch for the `ude` binary.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use ude_core::asymptotics::{self, EntropyScaling, GrowthRate, RatePoint};
use ude_core::ensemble::{self, BernoulliEnsemble};
use ude_core::exact;
use ude_core::montecarlo::SimConfig;
use ude_core::optimize::OptimizerConfig;
use ude_core::oracle::{self, VerificationReport};
use ude_core::{gf2, Bsc};

use crate::error::{Error, Result};
use crate::figures;
use crate::matrix_io;
use crate::parallel;
use crate::table::{linear_cell, Cell, Table};

#[derive(Debug, Parser)]
#[command(name = "ude", version, about = "Undetected error statistics of parity-check matrix ensembles")]
pub struct Cli {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Upper bound on threads; for `sim` also the number of random streams.
    #[arg(long, global = true, env = "UDE_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// A row-weight parameter given as `a/b`, an integer or a decimal.
#[derive(Debug, Clone, PartialEq)]
pub struct KArg {
    pub exact: BigRational,
    pub value: f64,
}

fn parse_k(s: &str) -> std::result::Result<KArg, String> {
    let exact = exact::parse_rational(s).map_err(|e| e.to_string())?;
    let value = exact::to_f64(&exact);
    Ok(KArg { exact, value })
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    /// Number of rows.
    #[arg(long)]
    pub m: u32,
    /// Code length.
    #[arg(long)]
    pub n: u32,
    /// Expected ones per row, `0 < k <= n/2`; omitted means `n/2`.
    #[arg(long, value_parser = parse_k)]
    pub k: Option<KArg>,
}

impl EnsembleArgs {
    fn ensemble(&self) -> Result<BernoulliEnsemble> {
        Ok(match &self.k {
            Some(k) => BernoulliEnsemble::new(self.m, self.n, k.value)?,
            None => BernoulliEnsemble::random(self.m, self.n)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Random,
    Bernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    Scaled,
    Unscaled,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Design rate `1 - m/n`.
    #[arg(long)]
    pub rate: f64,
    /// Bernoulli parameter; required for the Bernoulli family.
    #[arg(long)]
    pub k: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OptArgs {
    /// Grid points of the global search before refinement.
    #[arg(long, default_value_t = 16384)]
    pub grid_points: usize,
    /// Golden-section stopping width.
    #[arg(long, default_value_t = 1e-10)]
    pub refine_tol: f64,
}

impl OptArgs {
    fn config(&self) -> Result<OptimizerConfig> {
        Ok(OptimizerConfig::new(self.grid_points, self.refine_tol, 200)?)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Average weight distribution E[A_w] for w = 0..n.
    Awd(EnsembleArgs),
    /// Average undetected error probability.
    AvgPu {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated crossover probabilities in [0, 1/2].
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Covariance of the weight distribution, for one pair or all pairs.
    Cov {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// First weight; with `--w2` selects a single pair.
        #[arg(long, requires = "w2")]
        w1: Option<u32>,
        /// Second weight.
        #[arg(long, requires = "w1")]
        w2: Option<u32>,
    },
    /// Variance of the undetected error probability.
    VarPu {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated crossover probabilities in [0, 1/2].
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Error exponent: supremum of the exponent objective and its location.
    Exponent {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated crossover probabilities in [0, 1/2].
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Asymptotic growth rate of the average weight distribution.
    Growth {
        #[command(flatten)]
        family: FamilyArgs,
        /// Number of equally spaced points in (0, 1].
        #[arg(long, default_value_t = 1000)]
        points: u32,
    },
    /// Growth rate of the covariance of the weight distribution.
    CovExponent {
        /// Design rate `1 - m/n`.
        #[arg(long)]
        rate: f64,
        /// Bernoulli parameter; omitted means the uniform ensemble.
        #[arg(long)]
        k: Option<f64>,
        /// First normalized weight, in (0, 1].
        #[arg(long)]
        l1: f64,
        /// Second normalized weight, in (0, 1].
        #[arg(long)]
        l2: f64,
        /// Entropy terms with or without the `1 - R` scaling.
        #[arg(long, value_enum, default_value = "scaled")]
        scaling: Scaling,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Growth rate of the variance of the undetected error probability.
    VarExponent {
        /// Design rate `1 - m/n`.
        #[arg(long)]
        rate: f64,
        /// Bernoulli parameter; omitted means the uniform ensemble.
        #[arg(long)]
        k: Option<f64>,
        /// Comma-separated crossover probabilities in [0, 1/2].
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        opt: OptArgs,
    },
    /// Undetected error probability of the matrix in a file.
    ExactPu {
        /// Header line `m n`, then `m` rows of `n` characters `0`/`1`.
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated crossover probabilities in [0, 1/2].
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Exhaustive verification of the closed forms on a tiny ensemble.
    Oracle {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Exact row-weight parameter, e.g. `1/2` or `0.25`.
        #[arg(long, value_parser = parse_k)]
        k: KArg,
        /// Largest `m * n` to enumerate.
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_ENTRIES)]
        max_entries: u32,
    },
    /// Monte Carlo estimates of the mean and variance of P_U.
    Sim {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated crossover probabilities in [0, 1/2].
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// Number of sampled matrices.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Channel trials per matrix; 0 evaluates P_U exactly.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        /// Master seed; each worker draws from its own substream.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Data of one of the six standard plots.
    Fig {
        /// Plot number, 1 to 6.
        #[arg(value_parser = clap::value_parser!(u32).range(1..=6))]
        number: u32,
        #[command(flatten)]
        opt: OptArgs,
    },
}

/// Command output before rendering.
pub enum Output {
    Table(Table),
    Report(Box<VerificationReport>),
}

impl Output {
    pub fn render(&self, json: bool) -> Result<String> {
        match (self, json) {
            (Output::Table(t), false) => Ok(t.to_csv()),
            (Output::Table(t), true) => Ok(t.to_json()),
            (Output::Report(r), false) => Ok(report_table(r)?.to_csv()),
            (Output::Report(r), true) => {
                let mut s = serde_json::to_string_pretty(r)?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    pub fn table(&self) -> Result<Table> {
        match self {
            Output::Table(t) => Ok(t.clone()),
            Output::Report(r) => report_table(r),
        }
    }
}

fn report_table(r: &VerificationReport) -> Result<Table> {
    let mut t = Table::new(["name", "paper_value", "oracle_value", "analytic_value", "relative_deviation", "status"]);
    let status = |s: oracle::Status| serde_json::to_value(s).map(|v| v.as_str().unwrap_or_default().to_string());
    for e in &r.entries {
        t.push(vec![
            e.name.clone().into(),
            e.published.clone().map_or(Cell::Empty, Cell::Text),
            e.oracle_value.clone().into(),
            e.analytic_value.clone().into(),
            e.relative_deviation.map_or(Cell::Empty, Cell::Float),
            status(e.status)?.into(),
        ])?;
    }
    t.push(vec![
        "overall".into(),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Float(r.max_relative_deviation),
        status(r.status)?.into(),
    ])?;
    Ok(t)
}

fn channels(eps: &[f64]) -> Result<Vec<Bsc>> {
    Ok(eps.iter().map(|&e| Bsc::new(e)).collect::<ude_core::Result<_>>()?)
}

fn log_cells(log2: f64) -> [Cell; 2] {
    [Cell::Float(log2), linear_cell(log2)]
}

fn family_growth(f: &FamilyArgs) -> Result<Box<dyn GrowthRate>> {
    match (f.family, f.k) {
        (Family::Random, None) => Ok(Box::new(asymptotics::growth_rate_random(f.rate)?)),
        (Family::Random, Some(_)) => Err(Error::Usage("--k applies only to --family bernoulli".into())),
        (Family::Bernoulli, Some(k)) => Ok(Box::new(asymptotics::growth_rate_bernoulli(f.rate, k)?)),
        (Family::Bernoulli, None) => Err(Error::Usage("--family bernoulli requires --k".into())),
    }
}

fn family_cell(f: &FamilyArgs) -> Cell {
    match f.family {
        Family::Random => "random".into(),
        Family::Bernoulli => "bernoulli".into(),
    }
}

fn rate_point(rate: f64, k: Option<f64>) -> Result<RatePoint> {
    Ok(match k {
        Some(k) => RatePoint::bernoulli(rate, k)?,
        None => RatePoint::random(rate)?,
    })
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Output> {
    let workers = cli.workers.unwrap_or_else(parallel::default_workers).max(1);
    let table = match &cli.command {
        Command::Awd(args) => {
            let ens = args.ensemble()?;
            let mut t = Table::new(["w", "log2_avg_weight", "avg_weight"]);
            for w in 0..=ens.n() {
                let v = ens.avg_weight(w)?.log2();
                let [a, b] = log_cells(v);
                t.push(vec![w.into(), a, b])?;
            }
            t
        }
        Command::AvgPu { ensemble: args, eps } => {
            let ens = args.ensemble()?;
            let chs = channels(eps)?;
            let mut cols = vec!["eps", "log2_avg_pu", "avg_pu"];
            if ens.is_random() {
                cols.extend(["log2_closed_form", "closed_form"]);
            }
            let mut t = Table::new(cols);
            for ch in &chs {
                let mut row = vec![Cell::Float(ch.eps())];
                row.extend(log_cells(ens.avg_pu(ch).log2()));
                if ens.is_random() {
                    row.extend(log_cells(ensemble::avg_pu_random_closed_form(ens.m(), ens.n(), ch).log2()));
                }
                t.push(row)?;
            }
            t
        }
        Command::Cov { ensemble: args, w1, w2 } => {
            let ens = args.ensemble()?;
            let pairs: Vec<(u32, u32)> = match (w1, w2) {
                (Some(a), Some(b)) => vec![(*a, *b)],
                _ => (0..=ens.n()).flat_map(|a| (0..=ens.n()).map(move |b| (a, b))).collect(),
            };
            let mut t = Table::new(["w1", "w2", "log2_cov", "cov"]);
            for (a, b) in pairs {
                let [x, y] = log_cells(ens.cov_weight(a, b)?.log2());
                t.push(vec![a.into(), b.into(), x, y])?;
            }
            t
        }
        Command::VarPu { ensemble: args, eps } => {
            let ens = args.ensemble()?;
            let chs = channels(eps)?;
            let vars = parallel::var_pu_sweep(&ens, &chs, workers)?;
            let mut cols = vec!["eps", "log2_var_pu", "var_pu"];
            if ens.is_random() {
                cols.extend(["log2_closed_form", "closed_form"]);
            }
            let mut t = Table::new(cols);
            for (ch, v) in chs.iter().zip(vars) {
                let mut row = vec![Cell::Float(ch.eps())];
                row.extend(log_cells(v.log2()));
                if ens.is_random() {
                    row.extend(log_cells(ensemble::var_pu_random_closed_form(ens.m(), ens.n(), ch).log2()));
                }
                t.push(row)?;
            }
            t
        }
        Command::Exponent { family, eps, opt } => {
            let growth = family_growth(family)?;
            let cfg = opt.config()?;
            channels(eps)?;
            let mut t = Table::new(["family", "rate", "k", "eps", "value", "argmax"]);
            for &e in eps {
                let ex = asymptotics::error_exponent(&*growth, e, &cfg)?;
                t.push(vec![
                    family_cell(family),
                    Cell::Float(family.rate),
                    family.k.map_or(Cell::Empty, Cell::Float),
                    Cell::Float(e),
                    Cell::Float(ex.value),
                    Cell::Float(ex.argmax),
                ])?;
            }
            t
        }
        Command::Growth { family, points } => {
            let growth = family_growth(family)?;
            if *points == 0 {
                return Err(Error::Usage("--points must be positive".into()));
            }
            let mut t = Table::new(["l", "growth_rate"]);
            for i in 1..=*points {
                let l = f64::from(i) / f64::from(*points);
                t.push(vec![Cell::Float(l), Cell::Float(growth.eval(l))])?;
            }
            t
        }
        Command::CovExponent { rate, k, l1, l2, scaling, opt } => {
            let rp = rate_point(*rate, *k)?;
            let cfg = opt.config()?;
            let scaling = match scaling {
                Scaling::Scaled => EntropyScaling::Scaled,
                Scaling::Unscaled => EntropyScaling::Unscaled,
            };
            let v = asymptotics::cov_growth_rate_with(&rp, *l1, *l2, &cfg, scaling)?;
            let mut t = Table::new(["rate", "k", "l1", "l2", "value"]);
            t.push(vec![
                Cell::Float(*rate),
                k.map_or(Cell::Empty, Cell::Float),
                Cell::Float(*l1),
                Cell::Float(*l2),
                Cell::Float(v),
            ])?;
            t
        }
        Command::VarExponent { rate, k, eps, opt } => {
            let rp = rate_point(*rate, *k)?;
            let cfg = opt.config()?;
            channels(eps)?;
            let mut t = Table::new(["rate", "k", "eps", "value", "l1", "l2"]);
            for &e in eps {
                let v = asymptotics::var_pu_growth_rate(&rp, e, &cfg)?;
                t.push(vec![
                    Cell::Float(*rate),
                    k.map_or(Cell::Empty, Cell::Float),
                    Cell::Float(e),
                    Cell::Float(v.value),
                    Cell::Float(v.l1),
                    Cell::Float(v.l2),
                ])?;
            }
            t
        }
        Command::ExactPu { matrix, eps } => {
            let h = matrix_io::read_matrix_file(matrix)?;
            let chs = channels(eps)?;
            let dist = gf2::weight_distribution(&h)?;
            let mut t = Table::new(["eps", "pu"]);
            for ch in &chs {
                t.push(vec![Cell::Float(ch.eps()), Cell::Float(dist.undetected_error_prob(ch))])?;
            }
            t
        }
        Command::Oracle { m, n, k, max_entries } => {
            let sums = parallel::class_sums(*m, *n, *max_entries, workers)?;
            let report = oracle::verify_with_sums(&sums, &k.exact)?;
            return Ok(Output::Report(Box::new(report)));
        }
        Command::Sim { ensemble: args, eps, samples, trials, seed } => {
            let ens = args.ensemble()?;
            channels(eps)?;
            let cfg = SimConfig {
                channel_trials: *trials,
                workers: u32::try_from(workers).unwrap_or(u32::MAX),
                ..SimConfig::new(ens, eps[0], *samples, *seed)?
            };
            let reports = parallel::simulate(&cfg, eps)?;
            let mut t = Table::new([
                "eps",
                "mean",
                "mean_se",
                "var",
                "var_se",
                "samples",
                "mode",
                "seed",
                "workers",
                "ci_level",
                "mean_ci_low",
                "mean_ci_high",
                "within_var",
            ]);
            for r in reports {
                let mode = serde_json::to_value(r.mode)?.as_str().unwrap_or_default().to_string();
                t.push(vec![
                    Cell::Float(r.eps),
                    Cell::Float(r.mean),
                    Cell::Float(r.mean_se),
                    Cell::Float(r.var),
                    Cell::Float(r.var_se),
                    r.samples.into(),
                    mode.into(),
                    Cell::Text(r.seed.to_string()),
                    r.workers.into(),
                    Cell::Float(r.ci_level),
                    Cell::Float(r.mean_ci_low),
                    Cell::Float(r.mean_ci_high),
                    r.within_var.map_or(Cell::Empty, Cell::Float),
                ])?;
            }
            t
        }
        Command::Fig { number, opt } => figures::figure(*number, &opt.config()?, workers)?,
    };
    Ok(Output::Table(table))
}

/// Parses `args`, runs the command, writes the result and returns the
/// process exit code. Diagnostics go to stderr as a single line.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli).and_then(|out| out.render(cli.json)).and_then(|text| match &cli.output {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io { path: path.clone(), source }),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes()).map_err(Error::Output)
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
