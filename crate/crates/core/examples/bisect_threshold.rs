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

// Empirical location of the 3-core threshold by bisection on c.

use corefactor::experiments::{self, BisectConfig, Target};
use corefactor::thresholds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = BisectConfig {
        n: 20_000,
        k: 3,
        trials: 10,
        c_lo: 3.0,
        c_hi: 3.8,
        target: Target::Core,
        base_seed: 7,
        parallelism: 4,
        resolution: 0.01,
    };
    let result = experiments::threshold_bisect(&config)?;
    for (c, f) in &result.evaluations {
        println!("c = {c:.4}: core frequency {f:.2}");
    }
    let c3 = thresholds::compute_ck(3, 1e-10)?.c_k;
    println!("estimate {:.4}, c_3 = {c3:.4}", result.estimate);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
