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

// Predicted k-core size and degree distribution against one sample.

use corefactor::experiments::{run_trial, TrialSpec};
use corefactor::thresholds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, k, c) = (50_000, 5, 9.0);
    let pred = thresholds::mu_kc(k, c)?;
    let trial = run_trial(&TrialSpec::new(n, c, k, None), 3)?;
    println!("k = {k}, c = {c}: mu = {:.6}", pred.mu);
    println!("core fraction: predicted {:.4}, observed {:.4}", pred.core_fraction, trial.core_fraction());

    let observed = trial.degree_fractions();
    println!("{:>4} {:>10} {:>10}", "j", "predicted", "observed");
    for j in k..k + 8 {
        let p = pred.degree_pmf.get(&j).copied().unwrap_or(0.0);
        let q = observed.get(&j).copied().unwrap_or(0.0);
        println!("{j:>4} {p:>10.5} {q:>10.5}");
    }
    let tv = thresholds::degree_pmf_distance(&pred, &observed);
    println!("total variation distance: {tv:.4}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
