// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end. Results go to stdout as CSV, JSON or edge lists;
//! domain errors go to stderr as a JSON object `{"error", "message"}`.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::experiments::{self, BisectConfig, SweepConfig, Target};
use crate::factor::{self, CriticalMode};
use crate::graph::{self, MultiGraph};
use crate::thresholds;
use crate::verify;

/// Environment variable overriding `--parallelism`.
pub const THREADS_ENV: &str = "COREFACTOR_THREADS";

#[derive(Debug, Parser)]
#[command(name = "corefactor", version, about = "k-cores and k-factors of sparse random graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample G(n, c/n) and print it as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Peel the k-core of an edge-list graph.
    Core {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Also write the core (relabelled 0..size) as an edge list.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a k-factor, or test k-factor-criticality when k|V| is odd.
    Factor {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// `exact` or `sampled:R` with R deleted vertices.
        #[arg(long, default_value = "exact")]
        critical: CriticalArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Threshold constants as CSV.
    Thresholds {
        /// A single k or an inclusive range such as `3..6`.
        #[arg(long)]
        k: KRange,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Predicted core size and degree distribution as JSON.
    Predict {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: f64,
    },
    /// Monte Carlo sweep over a grid of mean degrees.
    Sweep(SweepArgs),
    /// Locate the 1/2-crossing of a target event by bisection on c.
    Bisect(BisectArgs),
    /// Cross-check the fast algorithms against exhaustive oracles.
    Verify {
        #[arg(long, default_value = "small-oracles")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    factor_k: Option<usize>,
    /// `lo:hi:step`.
    #[arg(long)]
    grid: Grid,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long, default_value_t = experiments::DEFAULT_CRITICAL_SAMPLES)]
    critical_samples: usize,
    /// Directory receiving config.json, trials.jsonl, summary.csv and
    /// timings.jsonl.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BisectArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    c_lo: f64,
    #[arg(long)]
    c_hi: f64,
    /// `core` or `factor:K`.
    #[arg(long, default_value = "core")]
    target: TargetArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    parallelism: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    resolution: f64,
}

#[derive(Clone, Debug)]
struct CriticalArg(Option<usize>);

impl FromStr for CriticalArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exact" {
            return Ok(CriticalArg(None));
        }
        s.strip_prefix("sampled:")
            .and_then(|r| r.parse().ok())
            .map(|r| CriticalArg(Some(r)))
            .ok_or_else(|| format!("expected exact or sampled:R, got {s:?}"))
    }
}

#[derive(Clone, Debug)]
struct KRange(Vec<usize>);

impl FromStr for KRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected K or LO..HI, got {s:?}");
        match s.split_once("..") {
            None => Ok(KRange(vec![s.parse().map_err(|_| bad())?])),
            Some((lo, hi)) => {
                let lo: usize = lo.parse().map_err(|_| bad())?;
                let hi: usize = hi.trim_start_matches('=').parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                Ok(KRange((lo..=hi).collect()))
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected lo:hi:step with step > 0 and lo <= hi, got {s:?}");
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let [lo, hi, step] = parts[..] else {
            return Err(bad());
        };
        if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        // Round away the drift of lo + i * step so grids print cleanly.
        let clean = |x: f64| (x * 1e9).round() / 1e9;
        Ok(Grid((0..count).map(|i| clean(lo + i as f64 * step)).collect()))
    }
}

#[derive(Clone, Debug)]
struct TargetArg(Target);

impl FromStr for TargetArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "core" {
            return Ok(TargetArg(Target::Core));
        }
        s.strip_prefix("factor:")
            .and_then(|k| k.parse().ok())
            .map(|k| TargetArg(Target::Factor(k)))
            .ok_or_else(|| format!("expected core or factor:K, got {s:?}"))
    }
}

/// Failure of a subcommand, reported on stderr.
#[derive(Debug, Serialize)]
struct DomainError {
    error: &'static str,
    message: String,
}

impl DomainError {
    fn new(error: &'static str, e: impl std::fmt::Display) -> Self {
        DomainError {
            error,
            message: e.to_string(),
        }
    }
}

macro_rules! domain_from {
    ($($ty:ty => $name:literal),* $(,)?) => {
        $(impl From<$ty> for DomainError {
            fn from(e: $ty) -> Self {
                DomainError::new($name, e)
            }
        })*
    };
}

domain_from! {
    graph::GraphError => "graph",
    factor::FactorError => "factor",
    thresholds::ThresholdError => "thresholds",
    experiments::ExperimentError => "experiments",
    verify::VerifyError => "verify",
    std::io::Error => "io",
    serde_json::Error => "json",
}

enum Failure {
    Usage(String),
    Domain(DomainError),
}

impl<E: Into<DomainError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

fn parallelism(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(raw) = std::env::var_os(THREADS_ENV) {
        let raw = raw.to_string_lossy();
        return match raw.parse::<usize>() {
            Ok(p) if p > 0 => Ok(p),
            _ => Err(Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))),
        };
    }
    Ok(flag.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    }))
}

fn read_graph(path: &PathBuf) -> Result<MultiGraph, Failure> {
    Ok(MultiGraph::read_edge_list(BufReader::new(File::open(path)?))?)
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct CoreSummary<'a> {
    k: usize,
    core_size: usize,
    core_edges: usize,
    /// Original ids of the core vertices, ascending.
    vertices: &'a [usize],
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { n, c, seed, out: path } => {
            let g = graph::gnp_random(n, c, seed)?;
            match path {
                Some(p) => {
                    let mut w = BufWriter::new(File::create(p)?);
                    g.write_edge_list(&mut w)?;
                    w.flush()?;
                }
                None => g.write_edge_list(&mut *out)?,
            }
        }
        Command::Core { input, k, out: path } => {
            let g = read_graph(&input)?;
            let core = graph::k_core(&g, k);
            if let Some(p) = path {
                let mut w = BufWriter::new(File::create(p)?);
                core.core.write_edge_list(&mut w)?;
                w.flush()?;
            }
            write_json(
                out,
                &CoreSummary {
                    k,
                    core_size: core.size(),
                    core_edges: core.core.edge_count(),
                    vertices: &core.original,
                },
            )?;
        }
        Command::Factor { input, k, critical, seed } => {
            let g = read_graph(&input)?;
            let mode = match critical.0 {
                None => CriticalMode::Exact,
                Some(samples) => CriticalMode::Sampled { samples, seed },
            };
            let report = factor::solve_k_factor(&g, k, mode)?;
            write_json(out, &report.outcome)?;
        }
        Command::Thresholds { k, tolerance } => {
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            let rows = k
                .0
                .into_iter()
                .map(|k| thresholds::threshold_row(k, tolerance))
                .collect::<Result<Vec<_>, _>>()?;
            writeln!(out, "k,lambda_k,c_k,ck_asymptotic,residual")?;
            for row in rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.k,
                    row.lambda_k,
                    row.c_k,
                    opt(row.ck_asymptotic),
                    opt(row.residual)
                )?;
            }
        }
        Command::Predict { k, c } => {
            write_json(out, &thresholds::mu_kc(k, c)?)?;
        }
        Command::Sweep(a) => {
            let config = SweepConfig {
                n: a.n,
                k: a.k,
                factor_k: a.factor_k,
                c_grid: a.grid.0,
                trials: a.trials,
                base_seed: a.seed,
                parallelism: parallelism(a.parallelism)?,
                critical_samples: a.critical_samples,
            };
            let output = experiments::sweep(&config)?;
            if let Some(dir) = a.out {
                experiments::write_sweep_dir(&dir, &config, &output)?;
            }
            experiments::write_summary_csv(&output.summary, &mut *out)?;
        }
        Command::Bisect(a) => {
            let config = BisectConfig {
                n: a.n,
                k: a.k,
                trials: a.trials,
                c_lo: a.c_lo,
                c_hi: a.c_hi,
                target: a.target.0,
                base_seed: a.seed,
                parallelism: parallelism(a.parallelism)?,
                resolution: a.resolution,
            };
            write_json(out, &experiments::threshold_bisect(&config)?)?;
        }
        Command::Verify { suite, seed } => {
            let reports = verify::run_suite(&suite, seed)?;
            for r in &reports {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.as_str()).collect();
            if !failed.is_empty() {
                return Err(Failure::Domain(DomainError::new(
                    "verify",
                    format!("disagreements in suites {failed:?}"),
                )));
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let result = run(cli, out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = serde_json::to_writer(&mut *err, &e);
            let _ = writeln!(err);
            1
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = std::io::stderr();
    dispatch(std::env::args_os(), &mut out, &mut err)
}
