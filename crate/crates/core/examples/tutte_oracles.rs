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

// Exhaustive oracles next to the fast algorithms they check.

use corefactor::factor;
use corefactor::graph::MultiGraph;
use corefactor::verify;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.extend([(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
    }
    let petersen = MultiGraph::from_edges(10, edges)?;
    let matching = factor::perfect_matching(&petersen).expect("Petersen has a perfect matching");
    println!("Petersen: perfect matching {matching:?}, Tutte violator {:?}", factor::tutte_check(&petersen)?);

    let star = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)])?;
    let x = factor::tutte_check(&star)?.expect("a star has no perfect matching");
    println!("K_1,3: Tutte violator {:?}", x.iter().collect::<Vec<_>>());
    if let Some((s, t)) = factor::lemma2_check(&star, 1)? {
        println!(
            "K_1,3, k = 1: sufficient condition fails at S = {:?}, T = {:?}",
            s.iter().collect::<Vec<_>>(),
            t.iter().collect::<Vec<_>>()
        );
    }
    let k5 = MultiGraph::complete(5);
    println!("K5, k = 2: condition violated by {:?}", factor::lemma2_check(&k5, 2)?);

    for report in verify::run_suite("small-oracles", 0)? {
        println!(
            "{:<10} {:>4} cases, {} disagreements",
            report.suite,
            report.cases,
            report.failures.len()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
