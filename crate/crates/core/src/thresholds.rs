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

//! Threshold constants for k-cores of `G(n, c/n)`.
//!
//! The k-core appears at mean degree `c_k = min_λ λ / π_k(λ)`, where
//! `π_k(λ) = P[Poisson(λ) >= k - 1]`. Above that point the core's degrees
//! follow a Poisson law with parameter `μ`, the larger root of
//! `μ / c = π_k(μ)`, truncated below `k`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poisson;

#[derive(Debug, Error, PartialEq)]
pub enum ThresholdError {
    #[error("k = {k} is below the supported minimum {min}")]
    InvalidK { k: usize, min: usize },
    #[error("Poisson mean must be a nonnegative number, got {0}")]
    InvalidLambda(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("no interior minimum of λ/π_k(λ) found for k = {0}")]
    NoInteriorMinimum(usize),
    #[error("asymptotic expansion needs log k > log 2π, got k = {0}")]
    AsymptoticUndefined(usize),
    #[error("c = {c} is not above the k-core threshold c_{k} = {c_k}")]
    BelowThreshold { k: usize, c: f64, c_k: f64 },
    #[error("no sign change of μ/c - π_k(μ) on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
}

/// `P[Poisson(lambda) >= k - 1]`.
pub fn pi_k(k: usize, lambda: f64) -> Result<f64, ThresholdError> {
    if k < 1 {
        return Err(ThresholdError::InvalidK { k, min: 1 });
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(ThresholdError::InvalidLambda(lambda));
    }
    Ok(poisson::tail_at_least((k - 1) as u64, lambda))
}

fn pi_unchecked(k: usize, lambda: f64) -> f64 {
    poisson::tail_at_least((k - 1) as u64, lambda)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub k: usize,
    pub lambda_k: f64,
    pub c_k: f64,
    /// Width of the final golden-section bracket around `lambda_k`.
    pub tolerance: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimises `λ / π_k(λ)` by golden-section search.
///
/// The bracket comes from a doubling/halving scan around `λ = k`; the search
/// stops once the bracket is narrower than `tol` or than a few ulps of `λ`.
pub fn compute_ck(k: usize, tol: f64) -> Result<ThresholdResult, ThresholdError> {
    if k < 3 {
        return Err(ThresholdError::InvalidK { k, min: 3 });
    }
    if !(tol > 0.0) {
        return Err(ThresholdError::InvalidTolerance(tol));
    }
    let f = |l: f64| l / pi_unchecked(k, l);

    let kf = k as f64;
    let (mut a, mut b, mut c) = (kf / 2.0, kf, 2.0 * kf);
    let (mut fa, mut fb, mut fc) = (f(a), f(b), f(c));
    let mut found = false;
    for _ in 0..200 {
        if fb <= fa && fb <= fc {
            found = true;
            break;
        }
        if fa < fb {
            (c, fc) = (b, fb);
            (b, fb) = (a, fa);
            a /= 2.0;
            fa = f(a);
        } else {
            (a, fa) = (b, fb);
            (b, fb) = (c, fc);
            c *= 2.0;
            fc = f(c);
        }
    }
    if !found || !fb.is_finite() {
        return Err(ThresholdError::NoInteriorMinimum(k));
    }

    let mut iterations = 0;
    let mut x1 = c - INV_PHI * (c - a);
    let mut x2 = a + INV_PHI * (c - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while c - a > tol && c - a > 8.0 * f64::EPSILON * b.abs() && iterations < 1000 {
        iterations += 1;
        if f1 <= f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - INV_PHI * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (c - a);
            f2 = f(x2);
        }
        b = 0.5 * (a + c);
    }
    let lambda_k = 0.5 * (a + c);
    Ok(ThresholdResult {
        k,
        lambda_k,
        c_k: f(lambda_k),
        tolerance: c - a,
        iterations,
    })
}

/// Four-term large-k expansion
/// `k + √(k q) + √(k / q) + (q - 1) / 3` with `q = ln k - ln 2π`.
pub fn ck_asymptotic(k: usize) -> Result<f64, ThresholdError> {
    let kf = k as f64;
    let q = kf.ln() - (2.0 * std::f64::consts::PI).ln();
    if k == 0 || !(q > 0.0) {
        return Err(ThresholdError::AsymptoticUndefined(k));
    }
    Ok(kf + (kf * q).sqrt() + (kf / q).sqrt() + (q - 1.0) / 3.0)
}

/// Predicted k-core of `G(n, c/n)` for `c > c_k`.
///
/// `degree_pmf[j]` is the expected fraction of all `n` vertices that lie in
/// the core with core-degree `j`, i.e. `e^-μ μ^j / j!` for `k <= j <= j_max`.
/// The prediction covers every `j >= k`, including `k` and `k + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorePrediction {
    pub k: usize,
    pub c: f64,
    pub mu: f64,
    pub core_fraction: f64,
    pub degree_pmf: BTreeMap<usize, f64>,
    /// Largest degree kept; the mass above it is below 1e-12.
    pub j_max: usize,
}

const PMF_TAIL_CUTOFF: f64 = 1e-12;

fn mu_residual(k: usize, c: f64, mu: f64) -> f64 {
    mu / c - pi_unchecked(k, mu)
}

/// Larger root of `μ / c = π_k(μ)` and the core it predicts.
///
/// Bisects on `(c - 2, c)`. When `c` sits close enough to `c_k` that the
/// residual at `c - 2` is not yet negative, the lower end moves to `λ_k`,
/// where the residual is negative for every `c > c_k`.
pub fn mu_kc(k: usize, c: f64) -> Result<CorePrediction, ThresholdError> {
    let threshold = compute_ck(k, 1e-10)?;
    if !(c > threshold.c_k) {
        return Err(ThresholdError::BelowThreshold {
            k,
            c,
            c_k: threshold.c_k,
        });
    }
    let mut lo = (c - 2.0).max(0.0);
    if !(mu_residual(k, c, lo) < 0.0) {
        lo = threshold.lambda_k;
    }
    let mut hi = c;
    if !(mu_residual(k, c, lo) < 0.0 && mu_residual(k, c, hi) > 0.0) {
        return Err(ThresholdError::NoSignChange { lo, hi });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mu_residual(k, c, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    Ok(predict_from_mu(k, c, mu))
}

fn predict_from_mu(k: usize, c: f64, mu: f64) -> CorePrediction {
    let core_fraction = poisson::tail_at_least(k as u64, mu);
    let mut degree_pmf = BTreeMap::new();
    let mut j = k;
    loop {
        degree_pmf.insert(j, poisson::pmf(j as u64, mu));
        if poisson::tail_at_least(j as u64 + 1, mu) < PMF_TAIL_CUTOFF {
            break;
        }
        j += 1;
    }
    CorePrediction {
        k,
        c,
        mu,
        core_fraction,
        degree_pmf,
        j_max: j,
    }
}

/// Total-variation distance between predicted and observed per-vertex
/// degree fractions: `½ Σ_j |pred_j - observed_j|` over every degree
/// present in either map.
pub fn degree_pmf_distance(pred: &CorePrediction, observed: &BTreeMap<usize, f64>) -> f64 {
    let mut keys: Vec<usize> = pred.degree_pmf.keys().chain(observed.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    0.5 * keys
        .into_iter()
        .map(|j| {
            let p = pred.degree_pmf.get(&j).copied().unwrap_or(0.0);
            let q = observed.get(&j).copied().unwrap_or(0.0);
            (p - q).abs()
        })
        .sum::<f64>()
}

/// One row of the threshold table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub k: usize,
    pub lambda_k: f64,
    pub c_k: f64,
    pub ck_asymptotic: Option<f64>,
    pub residual: Option<f64>,
}

pub fn threshold_row(k: usize, tol: f64) -> Result<ThresholdRow, ThresholdError> {
    let r = compute_ck(k, tol)?;
    let asym = ck_asymptotic(k).ok();
    Ok(ThresholdRow {
        k,
        lambda_k: r.lambda_k,
        c_k: r.c_k,
        ck_asymptotic: asym,
        residual: asym.map(|a| r.c_k - a),
    })
}
