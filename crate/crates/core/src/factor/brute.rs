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

//! Exhaustive checks for small graphs. None of these touch the gadget or the
//! blossom engine, so they serve as independent references for both.

use crate::graph::{EdgeId, MultiGraph, VertexSet};

use super::{delta_k, FactorError};

pub const TUTTE_MAX_VERTICES: usize = 22;
pub const LEMMA2_MAX_VERTICES: usize = 14;
pub const BRUTE_MAX_EDGES: usize = 48;

fn masks(g: &MultiGraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.vertex_count()];
    for &(u, v) in g.edges() {
        if u != v {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
    }
    adj
}

/// `(components, odd components)` of the subgraph induced by `alive`.
fn count_components(adj: &[u32], alive: u32) -> (usize, usize) {
    let mut rest = alive;
    let (mut total, mut odd) = (0, 0);
    while rest != 0 {
        let seed = rest & rest.wrapping_neg();
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let b = f.trailing_zeros() as usize;
                next |= adj[b];
                f &= f - 1;
            }
            next &= alive & !comp;
            comp |= next;
            frontier = next;
        }
        rest &= !comp;
        total += 1;
        odd += (comp.count_ones() % 2) as usize;
    }
    (total, odd)
}

fn to_set(n: usize, mask: u32) -> VertexSet {
    VertexSet::from_ids(n, (0..n).filter(|&v| mask >> v & 1 == 1)).expect("mask within n")
}

/// First `X` (in increasing bitmask order) with more odd components in
/// `g - X` than `|X|`, or `None` when `g` satisfies Tutte's condition.
pub fn tutte_check(g: &MultiGraph) -> Result<Option<VertexSet>, FactorError> {
    let n = g.vertex_count();
    if n > TUTTE_MAX_VERTICES {
        return Err(FactorError::TooLarge {
            check: "tutte_check",
            unit: "vertices",
            limit: TUTTE_MAX_VERTICES,
            got: n,
        });
    }
    let adj = masks(g);
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    for x in 0..=full {
        let size = x.count_ones() as usize;
        // o(G - X) <= n - |X|, so only |X| < n / 2 can violate.
        if 2 * size >= n {
            continue;
        }
        let (_, odd) = count_components(&adj, full & !x);
        if odd > size {
            return Ok(Some(to_set(n, x)));
        }
    }
    Ok(None)
}

/// `Σ_{v∈T} d(v) + k|S| - (ω(G - (S∪T)) + k|T| + λ(S,T) + δ_k(G))`.
/// Negative means the pair violates the sufficient condition.
pub fn lemma2_margin(g: &MultiGraph, k: usize, s: &VertexSet, t: &VertexSet) -> i64 {
    let n = g.vertex_count();
    assert!(n <= 32, "bitmask evaluation needs n <= 32");
    let adj = masks(g);
    let s_mask = (0..n).filter(|&v| s.contains(v)).fold(0u32, |m, v| m | 1 << v);
    let t_mask = (0..n).filter(|&v| t.contains(v)).fold(0u32, |m, v| m | 1 << v);
    margin(g, &adj, k, s_mask, t_mask)
}

fn margin(g: &MultiGraph, adj: &[u32], k: usize, s: u32, t: u32) -> i64 {
    let n = g.vertex_count();
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let in_s = |v: usize| s >> v & 1 == 1;
    let in_t = |v: usize| t >> v & 1 == 1;
    let degree_t: usize = (0..n).filter(|&v| in_t(v)).map(|v| g.degree(v)).sum();
    let lhs = degree_t + k * s.count_ones() as usize;
    let (omega, _) = count_components(adj, full & !(s | t));
    let cross = g
        .edges()
        .iter()
        .filter(|&&(u, v)| (in_s(u) && in_t(v)) || (in_s(v) && in_t(u)))
        .count();
    let rhs = omega + k * t.count_ones() as usize + cross + delta_k(g, k) as usize;
    lhs as i64 - rhs as i64
}

/// First disjoint pair `(S, T)`, `S ∪ T ≠ ∅`, violating the sufficient
/// k-factor condition, or `None` if it holds everywhere.
///
/// Pairs are enumerated as base-3 numbers with vertex 0 as the lowest digit
/// (digit 1: in S, digit 2: in T).
pub fn lemma2_check(
    g: &MultiGraph,
    k: usize,
) -> Result<Option<(VertexSet, VertexSet)>, FactorError> {
    let n = g.vertex_count();
    if n > LEMMA2_MAX_VERTICES {
        return Err(FactorError::TooLarge {
            check: "lemma2_check",
            unit: "vertices",
            limit: LEMMA2_MAX_VERTICES,
            got: n,
        });
    }
    let adj = masks(g);
    let full: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    if n == 0 || count_components(&adj, full).0 != 1 {
        return Err(FactorError::Disconnected);
    }
    let mut digits = vec![0u8; n];
    loop {
        // Increment the base-3 counter; stop after wrapping around.
        let mut i = 0;
        while i < n && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == n {
            return Ok(None);
        }
        digits[i] += 1;
        let (mut s, mut t) = (0u32, 0u32);
        for (v, &d) in digits.iter().enumerate() {
            match d {
                1 => s |= 1 << v,
                2 => t |= 1 << v,
                _ => {}
            }
        }
        if margin(g, &adj, k, s, t) < 0 {
            return Ok(Some((to_set(n, s), to_set(n, t))));
        }
    }
}

struct FactorSearch<'a> {
    edges: &'a [(usize, usize)],
    need: Vec<usize>,
    unseen: Vec<usize>,
    chosen: Vec<EdgeId>,
    found: Vec<Vec<EdgeId>>,
    first_only: bool,
}

impl FactorSearch<'_> {
    fn go(&mut self, idx: usize) {
        if self.first_only && !self.found.is_empty() {
            return;
        }
        if idx == self.edges.len() {
            if self.need.iter().all(|&x| x == 0) {
                self.found.push(self.chosen.clone());
            }
            return;
        }
        let (u, v) = self.edges[idx];
        self.unseen[u] -= 1;
        self.unseen[v] -= 1;
        let take = if u == v { 2 } else { 1 };
        if self.need[u] >= take && self.need[v] >= take {
            self.need[u] -= 1;
            self.need[v] -= 1;
            if self.need[u] <= self.unseen[u] && self.need[v] <= self.unseen[v] {
                self.chosen.push(idx);
                self.go(idx + 1);
                self.chosen.pop();
            }
            self.need[u] += 1;
            self.need[v] += 1;
        }
        if self.need[u] <= self.unseen[u] && self.need[v] <= self.unseen[v] {
            self.go(idx + 1);
        }
        self.unseen[u] += 1;
        self.unseen[v] += 1;
    }
}

fn enumerate_factors(
    g: &MultiGraph,
    k: usize,
    first_only: bool,
) -> Result<Vec<Vec<EdgeId>>, FactorError> {
    let m = g.edge_count();
    if m > BRUTE_MAX_EDGES {
        return Err(FactorError::TooLarge {
            check: "brute-force factor search",
            unit: "edges",
            limit: BRUTE_MAX_EDGES,
            got: m,
        });
    }
    let degrees = g.degrees();
    if degrees.iter().any(|&d| d < k) {
        return Ok(Vec::new());
    }
    let mut search = FactorSearch {
        edges: g.edges(),
        need: vec![k; g.vertex_count()],
        unseen: degrees,
        chosen: Vec::new(),
        found: Vec::new(),
        first_only,
    };
    search.go(0);
    Ok(search.found)
}

/// Every k-factor of `g` as ascending edge-id lists, in lexicographic order.
pub fn all_k_factors(g: &MultiGraph, k: usize) -> Result<Vec<Vec<EdgeId>>, FactorError> {
    let mut all = enumerate_factors(g, k, false)?;
    all.sort();
    Ok(all)
}

/// Some k-factor of `g` found by exhaustive search.
pub fn brute_force_k_factor(g: &MultiGraph, k: usize) -> Result<Option<Vec<EdgeId>>, FactorError> {
    Ok(enumerate_factors(g, k, true)?.into_iter().next())
}

/// Whether `g - v` has a k-factor for every vertex `v`, by exhaustive
/// search on each vertex-deleted subgraph.
pub fn brute_force_critical(g: &MultiGraph, k: usize) -> Result<bool, FactorError> {
    let n = g.vertex_count();
    for v in 0..n {
        let keep: Vec<bool> = (0..n).map(|u| u != v).collect();
        let (rest, _) = g.induced(&keep);
        if brute_force_k_factor(&rest, k)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
