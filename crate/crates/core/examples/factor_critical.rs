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

// Criticality when `k |V|` is odd: exact on K5, sampled on a random core.

use corefactor::factor::{self, CriticalMode, FactorOutcome};
use corefactor::graph::{self, MultiGraph};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k5 = MultiGraph::complete(5);
    println!("delta_1(K5) = {}", factor::delta_k(&k5, 1));
    if let FactorOutcome::FactorCritical { per_deleted_vertex, .. } =
        factor::is_k_factor_critical(&k5, 1, CriticalMode::Exact)?
    {
        for (v, edges) in &per_deleted_vertex {
            println!("K5 - {v}: perfect matching {edges:?}");
        }
    }

    // Find an odd-order 5-core and test sampled 3-factor-criticality.
    for seed in 0.. {
        let g = graph::gnp_random(5_000, 10.5, seed)?;
        let core = graph::k_core(&g, 5);
        if core.size().is_multiple_of(2) {
            continue;
        }
        let mode = CriticalMode::Sampled { samples: 10, seed };
        let report = factor::solve_k_factor(&core.core, 3, mode)?;
        println!(
            "seed {seed}: 5-core of order {}, outcome {:?} ({:?} matching)",
            core.size(),
            report.outcome.kind(),
            report.timings.matching
        );
        break;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
