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

// Samples a sparse random graph and peels its cores of increasing order.

use corefactor::graph::{self, MultiGraph};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (n, c, seed) = (20_000, 5.0, 1);
    let g = graph::gnp_random(n, c, seed)?;
    println!("G({n}, {c}/n), seed {seed}: {} edges, mean degree {:.3}", g.edge_count(), 2.0 * g.edge_count() as f64 / n as f64);

    for k in 1..=5 {
        let core = graph::k_core(&g, k);
        let min_degree = core.core.degrees().into_iter().min().unwrap_or(0);
        println!(
            "{k}-core: {:>6} vertices, {:>6} edges, min degree {min_degree}",
            core.size(),
            core.core.edge_count()
        );
    }

    // The edge-list format round-trips exactly.
    let text = g.to_edge_list_string();
    let back = MultiGraph::read_edge_list(text.as_bytes())?;
    assert_eq!(back, g);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
