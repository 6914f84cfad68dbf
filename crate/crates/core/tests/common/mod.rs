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

//! Independent reference implementations shared by the integration tests.

#![allow(dead_code)]

use corefactor::factor;
use corefactor::graph::{self, MultiGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, parallel: bool) -> MultiGraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for _ in 0..m {
        if n < 2 {
            break;
        }
        let u = rng.random_range(0..n);
        let v = (u + rng.random_range(1..n)) % n;
        let e = (u.min(v), u.max(v));
        if parallel || !edges.contains(&e) {
            edges.push(e);
        }
    }
    MultiGraph::from_edges(n, edges).unwrap()
}

/// Edge subsets giving every vertex outside `skip` degree exactly `k`
/// and vertices in `skip` degree zero.
pub fn subset_factor_exists(g: &MultiGraph, k: usize, skip: Option<usize>) -> bool {
    let edges = g.edges();
    assert!(edges.len() <= 20);
    (0u32..1 << edges.len()).any(|mask| {
        let mut degree = vec![0usize; g.vertex_count()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        degree
            .iter()
            .enumerate()
            .all(|(v, &d)| d == if Some(v) == skip { 0 } else { k })
    })
}

pub fn odd_components(g: &MultiGraph, removed: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(u, v) in g.edges() {
            if removed[u] || removed[v] {
                continue;
            }
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut size = vec![0usize; n];
    for v in (0..n).filter(|&v| !removed[v]) {
        size[label[v]] += 1;
    }
    size.iter().filter(|&&s| s % 2 == 1).count()
}

pub fn tutte_holds(g: &MultiGraph) -> bool {
    let n = g.vertex_count();
    (0u32..1 << n).all(|mask| {
        let removed: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        odd_components(g, &removed) <= mask.count_ones() as usize
    })
}

pub fn is_factor(g: &MultiGraph, k: usize, skip: Option<usize>, edges: &[usize]) -> bool {
    let mut degree = vec![0usize; g.vertex_count()];
    let mut seen = std::collections::BTreeSet::new();
    for &e in edges {
        if !seen.insert(e) || e >= g.edge_count() {
            return false;
        }
        let (u, v) = g.edge(e);
        degree[u] += 1;
        degree[v] += 1;
    }
    degree
        .iter()
        .enumerate()
        .all(|(v, &d)| d == if Some(v) == skip { 0 } else { k })
}

pub fn assert_certificate(g: &MultiGraph, k: usize, cert: &factor::Certificate) {
    let host_input = match cert.deleted_vertex {
        Some(v) => graph::attach_apex(g, v, k).unwrap(),
        None => g.clone(),
    };
    let Ok(phi) = factor::build_phi(&host_input, k) else {
        assert!(cert.violator.is_empty());
        return;
    };
    assert_eq!(phi.host.vertex_count(), cert.host_vertices);
    let mut removed = vec![false; phi.host.vertex_count()];
    for &x in &cert.violator {
        removed[x] = true;
    }
    assert!(
        odd_components(&phi.host, &removed) > cert.violator.len(),
        "certificate {cert:?} is not a Tutte violator"
    );
}

/// `P[Poisson(λ) >= k - 1]` by the finite complement, fine for small k.
pub fn pi_closed_form(k: usize, lambda: f64) -> f64 {
    let mut term = 1.0;
    let mut head = 0.0;
    for i in 0..k - 1 {
        if i > 0 {
            term *= lambda / i as f64;
        }
        head += term;
    }
    1.0 - (-lambda).exp() * head
}

/// Minimum of `λ / π_k(λ)` over the grid `λ = i · step` in (0, 20].
pub fn grid_minimum(k: usize, step: f64) -> (f64, f64) {
    let steps = (20.0 / step).round() as usize;
    (1..=steps)
        .map(|i| {
            let lambda = i as f64 * step;
            (lambda, lambda / pi_closed_form(k, lambda))
        })
        .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}
