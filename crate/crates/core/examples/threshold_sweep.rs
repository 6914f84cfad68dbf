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

// Core-appearance frequencies on a grid of mean degrees around c_3, with
// results written to a run directory.

use corefactor::experiments::{self, SweepConfig};
use corefactor::thresholds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c3 = thresholds::compute_ck(3, 1e-10)?.c_k;
    let c_grid: Vec<f64> = (-3..=3).map(|i| ((c3 + 0.1 * i as f64) * 100.0).round() / 100.0).collect();
    let config = SweepConfig {
        n: 20_000,
        k: 3,
        factor_k: Some(2),
        c_grid,
        trials: 8,
        base_seed: 2024,
        parallelism: 4,
        critical_samples: experiments::DEFAULT_CRITICAL_SAMPLES,
    };
    let output = experiments::sweep(&config)?;
    println!("c_3 = {c3:.4}");
    experiments::write_summary_csv(&output.summary, std::io::stdout().lock())?;

    let dir = std::env::temp_dir().join("corefactor-threshold-sweep");
    experiments::write_sweep_dir(&dir, &config, &output)?;
    println!("run written to {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
