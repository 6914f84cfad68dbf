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

//! k-factors through perfect matchings of the gadget graph.
//!
//! [`find_k_factor`] decides between two targets by the parity of `k |V|`:
//! when it is even the graph itself should have a k-factor; when it is odd
//! no k-factor can exist and the question becomes k-factor-criticality,
//! i.e. whether every `G - v` has one. `G - v` is tested by joining `v` to a
//! new vertex `v'` with `k` parallel edges and asking for a k-factor of that
//! graph, which must use all `k` new edges.

mod brute;
mod gadget;
mod matching;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::index;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{attach_apex, EdgeId, GraphError, MultiGraph, VertexId};
use crate::rng;

pub use brute::{
    all_k_factors, brute_force_critical, brute_force_k_factor, lemma2_check, lemma2_margin, tutte_check,
    BRUTE_MAX_EDGES, LEMMA2_MAX_VERTICES, TUTTE_MAX_VERTICES,
};
pub use gadget::{build_phi, GadgetGraph, GadgetNode};
pub use matching::{is_valid_matching, maximum_matching, perfect_matching, perfect_matching_or_violator};

use matching::Blossom;

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("k must be at least 1")]
    ZeroK,
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: EdgeId },
    #[error("vertex {vertex} is isolated")]
    IsolatedVertex { vertex: VertexId },
    #[error("sample of {samples} vertices requested from a graph on {n}")]
    SampleTooLarge { samples: usize, n: usize },
    #[error("{check} supports at most {limit} {unit}, got {got}")]
    TooLarge {
        check: &'static str,
        unit: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("graph is not connected")]
    Disconnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parity of `k |V(g)|`.
pub fn delta_k(g: &MultiGraph, k: usize) -> u8 {
    ((k * g.vertex_count()) % 2) as u8
}

/// How many vertex deletions a criticality test tries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum CriticalMode {
    Exact,
    /// `samples` distinct vertices drawn with a stream seeded by `seed`.
    Sampled { samples: usize, seed: u64 },
}

/// Evidence that no factor exists: a set `violator` of gadget vertices
/// whose removal leaves more odd components than `|violator|`.
///
/// For a criticality test the gadget is that of `G + v'` built for
/// `deleted_vertex = v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub deleted_vertex: Option<VertexId>,
    pub host_vertices: usize,
    pub violator: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomeKind {
    Factor,
    FactorCritical,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FactorOutcome {
    /// Edge ids (ascending) of a spanning k-regular subgraph.
    Factor { edges: Vec<EdgeId> },
    /// A k-factor of `G - v` for every tested `v`. `sampled` marks that only
    /// a random subset of vertices was tested.
    FactorCritical {
        per_deleted_vertex: BTreeMap<VertexId, Vec<EdgeId>>,
        sampled: bool,
    },
    #[serde(rename = "None")]
    NoFactor { certificate: Certificate },
}

impl FactorOutcome {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            FactorOutcome::Factor { .. } => OutcomeKind::Factor,
            FactorOutcome::FactorCritical { .. } => OutcomeKind::FactorCritical,
            FactorOutcome::NoFactor { .. } => OutcomeKind::None,
        }
    }

    pub fn is_success(&self) -> bool {
        !matches!(self, FactorOutcome::NoFactor { .. })
    }
}

/// Wall-clock split between gadget construction and matching.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FactorTimings {
    pub gadget: Duration,
    pub matching: Duration,
}

#[derive(Clone, Debug)]
pub struct FactorReport {
    pub outcome: FactorOutcome,
    pub timings: FactorTimings,
}

/// k-factor, or k-factor-criticality when `k |V|` is odd (tested exactly).
pub fn find_k_factor(g: &MultiGraph, k: usize) -> Result<FactorOutcome, FactorError> {
    solve_k_factor(g, k, CriticalMode::Exact).map(|r| r.outcome)
}

/// [`find_k_factor`] with a chosen criticality mode and timings.
pub fn solve_k_factor(
    g: &MultiGraph,
    k: usize,
    mode: CriticalMode,
) -> Result<FactorReport, FactorError> {
    if k == 0 {
        return Err(FactorError::ZeroK);
    }
    if delta_k(g, k) == 1 {
        return critical_report(g, k, mode);
    }
    let mut timings = FactorTimings::default();
    let started = Instant::now();
    let phi = build_phi(g, k)?;
    timings.gadget = started.elapsed();
    let started = Instant::now();
    let result = match_gadget(&phi, None, [].into_iter());
    timings.matching = started.elapsed();
    let outcome = match result {
        Ok(edges) => FactorOutcome::Factor { edges },
        Err(violator) => FactorOutcome::NoFactor {
            certificate: Certificate {
                deleted_vertex: None,
                host_vertices: phi.host.vertex_count(),
                violator,
            },
        },
    };
    Ok(FactorReport { outcome, timings })
}

/// Tests whether `G - v` has a k-factor for every `v` (or for a sample).
///
/// Meant for graphs with `k |V|` odd, but any input is accepted. Stops at
/// the first vertex whose deletion leaves no k-factor.
pub fn is_k_factor_critical(
    g: &MultiGraph,
    k: usize,
    mode: CriticalMode,
) -> Result<FactorOutcome, FactorError> {
    critical_report(g, k, mode).map(|r| r.outcome)
}

fn critical_report(
    g: &MultiGraph,
    k: usize,
    mode: CriticalMode,
) -> Result<FactorReport, FactorError> {
    if k == 0 {
        return Err(FactorError::ZeroK);
    }
    if let Some(e) = g.edges().iter().position(|&(u, v)| u == v) {
        return Err(FactorError::SelfLoop { edge: e });
    }
    let n = g.vertex_count();
    let (vertices, sampled): (Vec<VertexId>, bool) = match mode {
        CriticalMode::Exact => ((0..n).collect(), false),
        CriticalMode::Sampled { samples, seed } => {
            if samples > n {
                return Err(FactorError::SampleTooLarge { samples, n });
            }
            let mut stream = rng::stream(seed);
            let mut picked = index::sample(&mut stream, n, samples).into_vec();
            picked.sort_unstable();
            (picked, true)
        }
    };

    let mut timings = FactorTimings::default();
    // A maximum matching of the gadget of G is a near-perfect start for every
    // G + v'. Skipped when G itself has no gadget (isolated vertices).
    let started = Instant::now();
    let base = build_phi(g, k).ok();
    timings.gadget += started.elapsed();
    let started = Instant::now();
    let base_pairs: Vec<(usize, usize)> = match &base {
        Some(phi) if vertices.len() > 1 => {
            let mut engine = Blossom::new(&phi.host);
            engine.greedy();
            engine.run(false);
            engine.matched_pairs().collect()
        }
        _ => Vec::new(),
    };
    timings.matching += started.elapsed();

    let m = g.edge_count();
    let mut per_deleted_vertex = BTreeMap::new();
    for &v in &vertices {
        let started = Instant::now();
        let extended = attach_apex(g, v, k)?;
        let phi = match build_phi(&extended, k) {
            // Its U block is left isolated, so the empty set is a violator.
            Err(FactorError::IsolatedVertex { .. }) => {
                let outcome = FactorOutcome::NoFactor {
                    certificate: Certificate {
                        deleted_vertex: Some(v),
                        host_vertices: k * extended.vertex_count() + 2 * extended.edge_count(),
                        violator: Vec::new(),
                    },
                };
                timings.gadget += started.elapsed();
                return Ok(FactorReport { outcome, timings });
            }
            other => other?,
        };
        timings.gadget += started.elapsed();

        let started = Instant::now();
        let warm = base.as_ref().map(|b| (b, base_pairs.as_slice()));
        let apex = n;
        let apex_pairs = (0..k).map(|j| {
            let u = phi.host_id(GadgetNode::U { vertex: apex, index: j }).unwrap();
            let s = phi.host_id(GadgetNode::V { vertex: apex, slot: j }).unwrap();
            (u, s)
        });
        let result = match_gadget(&phi, warm, apex_pairs);
        timings.matching += started.elapsed();
        match result {
            Ok(edges) => {
                let kept: Vec<EdgeId> = edges.into_iter().filter(|&e| e < m).collect();
                debug_assert!(kept.iter().all(|&e| {
                    let (a, b) = g.edge(e);
                    a != v && b != v
                }));
                per_deleted_vertex.insert(v, kept);
            }
            Err(violator) => {
                let outcome = FactorOutcome::NoFactor {
                    certificate: Certificate {
                        deleted_vertex: Some(v),
                        host_vertices: phi.host.vertex_count(),
                        violator,
                    },
                };
                return Ok(FactorReport { outcome, timings });
            }
        }
    }
    Ok(FactorReport {
        outcome: FactorOutcome::FactorCritical {
            per_deleted_vertex,
            sampled,
        },
        timings,
    })
}

/// Perfect matching of the gadget translated into a k-factor of its input.
///
/// `warm` carries matched pairs of another gadget whose input shares vertex
/// ids and edge slots with this one; pairs are carried over by block
/// coordinates. `extra` pairs are seeded as well.
fn match_gadget(
    phi: &GadgetGraph,
    warm: Option<(&GadgetGraph, &[(usize, usize)])>,
    extra: impl Iterator<Item = (usize, usize)>,
) -> Result<Vec<EdgeId>, Vec<usize>> {
    let k = phi.k();
    // A vertex of degree below k leaves part of its U block isolated.
    if let Some(i) = (0..phi.original_vertex_count()).find(|&i| phi.v_block(i).len() < k) {
        return Err(phi.v_block(i).collect());
    }
    let mut engine = Blossom::new(&phi.host);
    let mut pairs: Vec<(usize, usize)> = extra.collect();
    if let Some((other, other_pairs)) = warm {
        pairs.extend(other_pairs.iter().filter_map(|&(a, b)| {
            let a = phi.host_id(other.node(a))?;
            let b = phi.host_id(other.node(b))?;
            Some((a, b))
        }));
    }
    engine.seed(pairs);
    engine.greedy();
    if let Some(violator) = engine.run(true) {
        return Err(violator);
    }
    let matched = engine.edge_ids(&phi.host);
    debug_assert!(is_valid_matching(&phi.host, &matched, true));
    let factor = phi.factor_from_matching(&matched);
    Ok(factor)
}

/// Checks that `edges` forms a k-factor of `g`: distinct ids with every
/// vertex at degree exactly `k`.
pub fn is_k_factor(g: &MultiGraph, k: usize, edges: &[EdgeId]) -> bool {
    let mut degree = vec![0usize; g.vertex_count()];
    let mut used = vec![false; g.edge_count()];
    for &e in edges {
        if e >= g.edge_count() || used[e] {
            return false;
        }
        used[e] = true;
        let (u, v) = g.edge(e);
        degree[u] += 1;
        degree[v] += 1;
    }
    degree.iter().all(|&d| d == k)
}
