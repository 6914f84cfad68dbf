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

//! k-core thresholds of sparse random graphs and k-regular spanning
//! subgraphs found through perfect matchings.
//!
//! * [`graph`]: multigraphs, `G(n, p)` sampling, k-core peeling.
//! * [`thresholds`]: the k-core threshold `c_k`, its large-k expansion and
//!   the predicted size and degree law of the core.
//! * [`factor`]: the k-factor gadget, a blossom matching engine,
//!   criticality tests and exhaustive reference checks.
//! * [`experiments`]: seeded Monte Carlo trials, sweeps over the mean
//!   degree and threshold bisection.
//! * [`verify`]: randomized cross-checks against brute-force references.
//! * [`cli`]: the `corefactor` command line.

// Negated float comparisons throughout reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod experiments;
pub mod factor;
pub mod graph;
pub mod poisson;
pub mod rng;
pub mod thresholds;
pub mod verify;

pub use factor::{find_k_factor, CriticalMode, FactorOutcome, OutcomeKind};
pub use graph::{gnp_random, k_core, MultiGraph, VertexSet};
pub use thresholds::{ck_asymptotic, compute_ck, mu_kc, pi_k};
