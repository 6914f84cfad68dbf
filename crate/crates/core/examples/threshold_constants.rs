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

// Core thresholds c_k, their minimisers and the large-k expansion.

use corefactor::thresholds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "k", "lambda_k", "c_k", "expansion", "residual");
    for k in [3, 4, 5, 6, 7, 10, 100, 1000] {
        let row = thresholds::threshold_row(k, 1e-10)?;
        let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.6}"));
        println!(
            "{k:>6} {:>12.6} {:>12.6} {:>12} {:>10}",
            row.lambda_k,
            row.c_k,
            show(row.ck_asymptotic),
            show(row.residual)
        );
    }

    // At the minimiser, c_k pi_k(lambda_k) = lambda_k.
    let r = thresholds::compute_ck(3, 1e-10)?;
    let pi = thresholds::pi_k(3, r.lambda_k)?;
    println!("k = 3: c_k * pi_k(lambda_k) - lambda_k = {:.2e}", r.c_k * pi - r.lambda_k);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
