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

// The gadget reduction on small graphs: a 2-factor of the 4-cycle, a
// 2-factor of K5, and the certificate returned when none exists.

use corefactor::factor::{self, FactorOutcome};
use corefactor::graph::MultiGraph;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c4 = MultiGraph::cycle(4);
    let phi = factor::build_phi(&c4, 2)?;
    println!(
        "gadget of C4 for k = 2: {} vertices, {} edges",
        phi.host.vertex_count(),
        phi.host.edge_count()
    );
    if let FactorOutcome::Factor { edges } = factor::find_k_factor(&c4, 2)? {
        println!("2-factor of C4: edges {edges:?}");
    }

    let k5 = MultiGraph::complete(5);
    if let FactorOutcome::Factor { edges } = factor::find_k_factor(&k5, 2)? {
        let pairs: Vec<_> = edges.iter().map(|&e| k5.edge(e)).collect();
        println!("2-factor of K5: {pairs:?}");
        assert!(factor::is_k_factor(&k5, 2, &edges));
    }

    // A path on four vertices has no 2-factor; the certificate is a set of
    // gadget vertices whose removal leaves too many odd components.
    let p4 = MultiGraph::path(4);
    let outcome = factor::find_k_factor(&p4, 2)?;
    println!("P4, k = 2: {}", serde_json::to_string(&outcome)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
