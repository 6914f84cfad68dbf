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

//! Seeded Monte Carlo trials on `G(n, c/n)`.
//!
//! A trial samples a graph, peels its k-core and, if asked, looks for a
//! `factor_k`-factor of the core (criticality is tested on a vertex sample
//! when `factor_k |core|` is odd). Every trial is a pure function of its
//! seed, and sweeps derive trial seeds from `(base_seed, grid index, trial
//! index)`, so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::{self, CriticalMode, FactorError, OutcomeKind};
use crate::graph::{self, GraphError};
use crate::rng;
use crate::thresholds::{self, CorePrediction, ThresholdError};

/// Default number of deleted vertices tried by sampled criticality tests.
pub const DEFAULT_CRITICAL_SAMPLES: usize = 30;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "bisection bracket not valid: frequency {freq_lo} at c = {c_lo} must be below 1/2 and {freq_hi} at c = {c_hi} at least 1/2"
    )]
    Bracket {
        c_lo: f64,
        c_hi: f64,
        freq_lo: f64,
        freq_hi: f64,
    },
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub n: usize,
    pub c: f64,
    /// Core order to peel.
    pub k: usize,
    /// Degree of the factor sought inside the core; `None` skips the search.
    pub factor_k: Option<usize>,
    pub critical_samples: usize,
}

impl TrialSpec {
    pub fn new(n: usize, c: f64, k: usize, factor_k: Option<usize>) -> Self {
        TrialSpec {
            n,
            c,
            k,
            factor_k,
            critical_samples: DEFAULT_CRITICAL_SAMPLES,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if let Some(fk) = self.factor_k {
            if fk == 0 || fk > self.k {
                return Err(ExperimentError::InvalidConfig(format!(
                    "factor_k = {fk} must lie in 1..={}",
                    self.k
                )));
            }
        }
        Ok(())
    }
}

/// Milliseconds spent per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub generate_ms: f64,
    pub peel_ms: f64,
    pub gadget_ms: f64,
    pub match_ms: f64,
}

/// Result of one trial. Timings are kept out of the serialized record so
/// that records are reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub n: usize,
    pub c: f64,
    #[serde(rename = "k_core_param")]
    pub k: usize,
    pub core_size: usize,
    pub core_edges: usize,
    /// Core degree to number of core vertices with that degree.
    pub degree_hist: BTreeMap<usize, u64>,
    pub factor_k: Option<usize>,
    /// Absent when the core is empty or no factor was sought.
    pub outcome: Option<OutcomeKind>,
    /// Whether `outcome` rests on a sampled criticality test.
    pub sampled: bool,
    #[serde(skip)]
    pub timings: Timings,
}

impl TrialRecord {
    pub fn core_fraction(&self) -> f64 {
        self.core_size as f64 / self.n as f64
    }

    /// Degree histogram as fractions of all `n` vertices.
    pub fn degree_fractions(&self) -> BTreeMap<usize, f64> {
        self.degree_hist
            .iter()
            .map(|(&j, &count)| (j, count as f64 / self.n as f64))
            .collect()
    }

    pub fn factor_success(&self) -> bool {
        matches!(
            self.outcome,
            Some(OutcomeKind::Factor | OutcomeKind::FactorCritical)
        )
    }
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn run_trial(spec: &TrialSpec, seed: u64) -> Result<TrialRecord, ExperimentError> {
    spec.validate()?;
    let mut timings = Timings::default();

    let started = Instant::now();
    let g = graph::gnp_random(spec.n, spec.c, seed)?;
    timings.generate_ms = ms(started.elapsed());

    let started = Instant::now();
    let core = graph::k_core(&g, spec.k);
    timings.peel_ms = ms(started.elapsed());
    drop(g);

    let mut degree_hist = BTreeMap::new();
    for v in 0..core.core.vertex_count() {
        *degree_hist.entry(core.core.degree(v)).or_insert(0u64) += 1;
    }

    let mut outcome = None;
    let mut sampled = false;
    if let (Some(fk), false) = (spec.factor_k, core.is_empty()) {
        let mode = CriticalMode::Sampled {
            samples: spec.critical_samples.min(core.size()),
            seed: rng::derive(seed, &[1]),
        };
        let report = factor::solve_k_factor(&core.core, fk, mode)?;
        timings.gadget_ms = ms(report.timings.gadget);
        timings.match_ms = ms(report.timings.matching);
        sampled = matches!(
            report.outcome,
            factor::FactorOutcome::FactorCritical { sampled: true, .. }
        );
        outcome = Some(report.outcome.kind());
    }

    Ok(TrialRecord {
        seed,
        n: spec.n,
        c: spec.c,
        k: spec.k,
        core_size: core.size(),
        core_edges: core.core.edge_count(),
        degree_hist,
        factor_k: spec.factor_k,
        outcome,
        sampled,
        timings,
    })
}

fn with_pool<T: Send>(
    parallelism: usize,
    job: impl FnOnce() -> T + Send,
) -> Result<T, ExperimentError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    Ok(pool.install(job))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub k: usize,
    pub factor_k: Option<usize>,
    pub c_grid: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub parallelism: usize,
    pub critical_samples: usize,
}

/// Frequency with its 95% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Frequency {
    pub fn wilson(successes: usize, trials: usize) -> Option<Self> {
        if trials == 0 {
            return None;
        }
        const Z: f64 = 1.959_963_984_540_054;
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = Z * Z;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Some(Frequency {
            value: p,
            lo: (centre - half).clamp(0.0, p),
            hi: (centre + half).clamp(p, 1.0),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub c: f64,
    pub trials: usize,
    pub core_nonempty: Option<Frequency>,
    pub factor_success: Option<Frequency>,
    pub mean_core_fraction: Option<f64>,
    /// From the core prediction when `c` is above the threshold.
    pub predicted_core_fraction: Option<f64>,
    /// Mean total-variation distance between observed and predicted degree
    /// fractions.
    pub mean_tv_distance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub n: usize,
    pub k: usize,
    pub factor_k: Option<usize>,
    pub points: Vec<SweepPoint>,
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub summary: SweepSummary,
}

fn prediction(k: usize, c: f64) -> Option<CorePrediction> {
    if k < 3 {
        return None;
    }
    thresholds::mu_kc(k, c).ok()
}

pub fn sweep(config: &SweepConfig) -> Result<SweepOutput, ExperimentError> {
    if config.c_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(ExperimentError::InvalidConfig(
            "c grid must be sorted ascending".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = (0..config.c_grid.len())
        .flat_map(|ci| (0..config.trials).map(move |t| (ci, t)))
        .collect();
    let records: Vec<TrialRecord> = with_pool(config.parallelism, || {
        jobs.par_iter()
            .map(|&(ci, t)| {
                let mut spec = TrialSpec::new(config.n, config.c_grid[ci], config.k, config.factor_k);
                spec.critical_samples = config.critical_samples;
                run_trial(&spec, rng::derive(config.base_seed, &[ci as u64, t as u64]))
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let points = config
        .c_grid
        .iter()
        .enumerate()
        .map(|(ci, &c)| {
            let rows = &records[ci * config.trials..(ci + 1) * config.trials];
            summarize_point(c, config.k, config.factor_k.is_some(), rows)
        })
        .collect();
    Ok(SweepOutput {
        records,
        summary: SweepSummary {
            n: config.n,
            k: config.k,
            factor_k: config.factor_k,
            points,
        },
    })
}

fn summarize_point(c: f64, k: usize, with_factor: bool, rows: &[TrialRecord]) -> SweepPoint {
    let trials = rows.len();
    let pred = prediction(k, c);
    let mean = |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
    SweepPoint {
        c,
        trials,
        core_nonempty: Frequency::wilson(rows.iter().filter(|r| r.core_size > 0).count(), trials),
        factor_success: if with_factor {
            Frequency::wilson(rows.iter().filter(|r| r.factor_success()).count(), trials)
        } else {
            None
        },
        mean_core_fraction: mean(rows.iter().map(|r| r.core_fraction()).collect()),
        predicted_core_fraction: pred.as_ref().map(|p| p.core_fraction),
        mean_tv_distance: pred.as_ref().and_then(|p| {
            mean(
                rows.iter()
                    .map(|r| thresholds::degree_pmf_distance(p, &r.degree_fractions()))
                    .collect(),
            )
        }),
    }
}

/// Event whose appearance threshold is located.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Nonempty k-core.
    Core,
    /// Nonempty k-core holding a factor of the given degree (or critical).
    Factor(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectConfig {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub c_lo: f64,
    pub c_hi: f64,
    pub target: Target,
    pub base_seed: u64,
    pub parallelism: usize,
    pub resolution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisectResult {
    /// Midpoint of the final bracket.
    pub estimate: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub freq_lo: f64,
    pub freq_hi: f64,
    /// Every `(c, frequency)` evaluated, in order.
    pub evaluations: Vec<(f64, f64)>,
}

/// Locates the 1/2-crossing of the target frequency by bisection on `c`.
///
/// Trial `t` uses the seed `derive(base_seed, [t])` at every `c`, so
/// frequencies at different points share their random streams.
pub fn threshold_bisect(config: &BisectConfig) -> Result<BisectResult, ExperimentError> {
    if !(config.c_lo < config.c_hi) {
        return Err(ExperimentError::InvalidConfig(format!(
            "c_lo = {} must be below c_hi = {}",
            config.c_lo, config.c_hi
        )));
    }
    if config.trials == 0 || !(config.resolution > 0.0) {
        return Err(ExperimentError::InvalidConfig(
            "bisection needs trials > 0 and a positive resolution".into(),
        ));
    }
    let factor_k = match config.target {
        Target::Core => None,
        Target::Factor(fk) => Some(fk),
    };
    let frequency = |c: f64| -> Result<f64, ExperimentError> {
        let spec = TrialSpec::new(config.n, c, config.k, factor_k);
        let hits = with_pool(config.parallelism, || {
            (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let r = run_trial(&spec, rng::derive(config.base_seed, &[t as u64]))?;
                    Ok(match config.target {
                        Target::Core => r.core_size > 0,
                        Target::Factor(_) => r.factor_success(),
                    })
                })
                .collect::<Result<Vec<bool>, ExperimentError>>()
        })??;
        Ok(hits.iter().filter(|&&h| h).count() as f64 / config.trials as f64)
    };

    let (mut lo, mut hi) = (config.c_lo, config.c_hi);
    let mut freq_lo = frequency(lo)?;
    let mut freq_hi = frequency(hi)?;
    let mut evaluations = vec![(lo, freq_lo), (hi, freq_hi)];
    if !(freq_lo < 0.5 && freq_hi >= 0.5) {
        return Err(ExperimentError::Bracket {
            c_lo: lo,
            c_hi: hi,
            freq_lo,
            freq_hi,
        });
    }
    while hi - lo > config.resolution {
        let mid = 0.5 * (lo + hi);
        let f = frequency(mid)?;
        evaluations.push((mid, f));
        if f >= 0.5 {
            hi = mid;
            freq_hi = f;
        } else {
            lo = mid;
            freq_lo = f;
        }
    }
    Ok(BisectResult {
        estimate: 0.5 * (lo + hi),
        c_lo: lo,
        c_hi: hi,
        freq_lo,
        freq_hi,
        evaluations,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub const SUMMARY_HEADER: &str = "c,trials,core_nonempty_freq,core_nonempty_lo,core_nonempty_hi,factor_success_freq,factor_success_lo,factor_success_hi,mean_core_fraction,predicted_core_fraction,mean_tv_distance";

pub fn write_summary_csv<W: Write>(summary: &SweepSummary, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for p in &summary.points {
        let f = |x: Option<Frequency>| {
            [
                opt(x.map(|f| f.value)),
                opt(x.map(|f| f.lo)),
                opt(x.map(|f| f.hi)),
            ]
            .join(",")
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.c,
            p.trials,
            f(p.core_nonempty),
            f(p.factor_success),
            opt(p.mean_core_fraction),
            opt(p.predicted_core_fraction),
            opt(p.mean_tv_distance),
        )?;
    }
    Ok(())
}

/// One JSON object per line.
pub fn write_trials_jsonl<W: Write>(records: &[TrialRecord], mut out: W) -> Result<(), ExperimentError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes `config.json`, `trials.jsonl`, `summary.csv` and
/// `timings.jsonl` (per-trial phase timings, same order as the trials).
pub fn write_sweep_dir(
    dir: &Path,
    config: &SweepConfig,
    output: &SweepOutput,
) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir)?;
    let mut cfg = BufWriter::new(File::create(dir.join("config.json"))?);
    serde_json::to_writer_pretty(&mut cfg, config)?;
    cfg.write_all(b"\n")?;
    cfg.flush()?;

    let mut trials = BufWriter::new(File::create(dir.join("trials.jsonl"))?);
    write_trials_jsonl(&output.records, &mut trials)?;
    trials.flush()?;

    let mut summary = BufWriter::new(File::create(dir.join("summary.csv"))?);
    write_summary_csv(&output.summary, &mut summary)?;
    summary.flush()?;

    let mut timings = BufWriter::new(File::create(dir.join("timings.jsonl"))?);
    for r in &output.records {
        serde_json::to_writer(&mut timings, &serde_json::json!({ "seed": r.seed, "timings": r.timings }))?;
        timings.write_all(b"\n")?;
    }
    timings.flush()?;
    Ok(())
}
