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

//! The k-factor gadget: a simple graph whose perfect matchings correspond
//! to k-factors of a multigraph.
//!
//! Every vertex `i` of the input gets a block `U_i` of `k` vertices and a
//! block `V_i` with one slot per incident edge; `U_i x V_i` is complete
//! bipartite. Each input edge `e = {a, b}` becomes a layer edge joining its
//! slot in `V_a` to its slot in `V_b`. In a perfect matching exactly `k`
//! slots of every `V_i` are matched into `U_i`, and the input edges whose
//! layer edge is left unmatched form a k-factor.
//!
//! Host layout: all `U` blocks first, then all `V` blocks, both in vertex
//! order. Slots inside `V_i` follow the incident edge ids of `i`. Host edges
//! are the block edges (vertex by vertex) followed by the layer edges in
//! input edge order.

use std::ops::Range;

use crate::graph::{EdgeId, MultiGraph, VertexId};

use super::FactorError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetNode {
    /// `index`-th vertex of `U_vertex`.
    U { vertex: VertexId, index: usize },
    /// Slot `slot` of `V_vertex`, i.e. its `slot`-th incident edge.
    V { vertex: VertexId, slot: usize },
}

#[derive(Clone, Debug)]
pub struct GadgetGraph {
    k: usize,
    n: usize,
    pub host: MultiGraph,
    /// Start of `V_i` in host ids, plus one trailing sentinel.
    v_offsets: Vec<usize>,
    /// Input edge behind each slot, indexed by `host id - k n`.
    slot_edge: Vec<EdgeId>,
    block_edge_count: usize,
}

/// Builds the gadget. Rejects self-loops and isolated vertices.
pub fn build_phi(g: &MultiGraph, k: usize) -> Result<GadgetGraph, FactorError> {
    if k == 0 {
        return Err(FactorError::ZeroK);
    }
    if let Some(e) = g.edges().iter().position(|&(u, v)| u == v) {
        return Err(FactorError::SelfLoop { edge: e });
    }
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(FactorError::IsolatedVertex { vertex: v });
    }
    let m = g.edge_count();
    let u_total = k * n;
    let mut v_offsets = Vec::with_capacity(n + 1);
    let mut slot_edge = Vec::with_capacity(2 * m);
    // Host slot of each input edge at its first and second endpoint.
    let mut ends = vec![[usize::MAX; 2]; m];
    for i in 0..n {
        v_offsets.push(u_total + slot_edge.len());
        for &(_, e) in g.incident(i) {
            let host = u_total + slot_edge.len();
            let side = if g.edge(e).0 == i { 0 } else { 1 };
            ends[e][side] = host;
            slot_edge.push(e);
        }
    }
    v_offsets.push(u_total + slot_edge.len());

    let block_edge_count = k * 2 * m;
    let mut host_edges = Vec::with_capacity(block_edge_count + m);
    for i in 0..n {
        for u in k * i..k * (i + 1) {
            for s in v_offsets[i]..v_offsets[i + 1] {
                host_edges.push((u, s));
            }
        }
    }
    host_edges.extend(ends.iter().map(|&[a, b]| (a, b)));
    let host = MultiGraph::from_edges(u_total + 2 * m, host_edges)
        .expect("gadget ids are in range by construction");
    Ok(GadgetGraph {
        k,
        n,
        host,
        v_offsets,
        slot_edge,
        block_edge_count,
    })
}

impl GadgetGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Vertex count of the input graph.
    pub fn original_vertex_count(&self) -> usize {
        self.n
    }

    pub fn u_block(&self, i: VertexId) -> Range<usize> {
        self.k * i..self.k * (i + 1)
    }

    pub fn v_block(&self, i: VertexId) -> Range<usize> {
        self.v_offsets[i]..self.v_offsets[i + 1]
    }

    /// Host edge ids of all `U_i x V_i` edges.
    pub fn block_edges(&self) -> Range<EdgeId> {
        0..self.block_edge_count
    }

    /// Host edge id of the layer edge standing for input edge `e`.
    pub fn layer_edge(&self, e: EdgeId) -> EdgeId {
        self.block_edge_count + e
    }

    /// Input edge behind a host edge, if it belongs to the matching layer.
    pub fn original_edge(&self, host_edge: EdgeId) -> Option<EdgeId> {
        host_edge.checked_sub(self.block_edge_count)
    }

    /// Input edge owning a `V` slot.
    pub fn slot_edge(&self, host_vertex: usize) -> Option<EdgeId> {
        host_vertex
            .checked_sub(self.k * self.n)
            .and_then(|i| self.slot_edge.get(i).copied())
    }

    pub fn node(&self, host_vertex: usize) -> GadgetNode {
        let u_total = self.k * self.n;
        if host_vertex < u_total {
            GadgetNode::U {
                vertex: host_vertex / self.k,
                index: host_vertex % self.k,
            }
        } else {
            let vertex = self.v_offsets.partition_point(|&o| o <= host_vertex) - 1;
            GadgetNode::V {
                vertex,
                slot: host_vertex - self.v_offsets[vertex],
            }
        }
    }

    /// Host id of a node, or `None` if this gadget has no such node.
    pub fn host_id(&self, node: GadgetNode) -> Option<usize> {
        match node {
            GadgetNode::U { vertex, index } => {
                (vertex < self.n && index < self.k).then(|| self.k * vertex + index)
            }
            GadgetNode::V { vertex, slot } => {
                if vertex >= self.n {
                    return None;
                }
                let block = self.v_block(vertex);
                (slot < block.len()).then(|| block.start + slot)
            }
        }
    }

    /// Contracts every `V_i` of `host - U` to a single vertex. The result has
    /// the input's edges in input order.
    pub fn contract_layer(&self) -> MultiGraph {
        let owner = |s: usize| match self.node(s) {
            GadgetNode::V { vertex, .. } => vertex,
            GadgetNode::U { .. } => unreachable!("layer edges join V slots"),
        };
        let edges = self.host.edges()[self.block_edge_count..]
            .iter()
            .map(|&(a, b)| (owner(a), owner(b)));
        MultiGraph::from_edges(self.n, edges).expect("owners are input vertices")
    }

    /// Input edges whose layer edge is absent from `matched` (host edge ids
    /// of a perfect matching), ascending.
    pub fn factor_from_matching(&self, matched: &[EdgeId]) -> Vec<EdgeId> {
        let m = self.host.edge_count() - self.block_edge_count;
        let mut in_matching = vec![false; m];
        for &he in matched {
            if let Some(e) = self.original_edge(he) {
                in_matching[e] = true;
            }
        }
        (0..m).filter(|&e| !in_matching[e]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrilateral_k2_sizes() {
        let g = build_phi(&MultiGraph::cycle(4), 2).unwrap();
        assert_eq!(g.host.vertex_count(), 16);
        assert_eq!(g.host.edge_count(), 20);
        assert_eq!(g.block_edges().len(), 16);
        for i in 0..4 {
            assert_eq!(g.u_block(i).len(), 2);
            assert_eq!(g.v_block(i).len(), 2);
        }
    }

    #[test]
    fn k2_k1_smallest() {
        let g = build_phi(&MultiGraph::complete(2), 1).unwrap();
        assert_eq!(g.host.vertex_count(), 4);
        assert_eq!(g.host.edge_count(), 3);
        assert_eq!(g.host.edges(), &[(0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn contraction_recovers_input() {
        let g = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 0), (0, 1)]).unwrap();
        for k in 1..=3 {
            let phi = build_phi(&g, k).unwrap();
            assert_eq!(phi.contract_layer(), g);
            assert!(!phi.host.has_self_loop());
            // Each slot lies on exactly one layer edge.
            let mut layer_degree = vec![0; phi.host.vertex_count()];
            for e in 0..g.edge_count() {
                let (a, b) = phi.host.edge(phi.layer_edge(e));
                layer_degree[a] += 1;
                layer_degree[b] += 1;
                assert_eq!(phi.slot_edge(a), Some(e));
                assert_eq!(phi.slot_edge(b), Some(e));
            }
            for i in 0..4 {
                assert!(phi.v_block(i).all(|s| layer_degree[s] == 1));
                assert!(phi.u_block(i).all(|u| layer_degree[u] == 0));
            }
        }
    }

    #[test]
    fn node_round_trip() {
        let phi = build_phi(&MultiGraph::complete(4), 2).unwrap();
        for h in 0..phi.host.vertex_count() {
            assert_eq!(phi.host_id(phi.node(h)), Some(h));
        }
        assert_eq!(phi.host_id(GadgetNode::U { vertex: 4, index: 0 }), None);
        assert_eq!(phi.host_id(GadgetNode::V { vertex: 0, slot: 3 }), None);
    }

    #[test]
    fn rejects_loops_and_isolated() {
        let looped = MultiGraph::from_edges(2, [(0, 1), (1, 1)]).unwrap();
        assert!(matches!(build_phi(&looped, 1), Err(FactorError::SelfLoop { edge: 1 })));
        let isolated = MultiGraph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            build_phi(&isolated, 1),
            Err(FactorError::IsolatedVertex { vertex: 2 })
        ));
        assert!(matches!(build_phi(&MultiGraph::cycle(3), 0), Err(FactorError::ZeroK)));
    }
}
