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

//! Undirected multigraphs, sparse `G(n, p)` generation and k-core peeling.
//!
//! A [`MultiGraph`] is immutable once built. Edges carry stable ids in
//! insertion order and every vertex keeps its incidences sorted by edge id,
//! which the factor gadget relies on for its slot layout.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rand::Rng;
use thiserror::Error;

use crate::rng;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("mean degree {c} outside [0, {max}] for n = {n}")]
    InvalidMeanDegree { c: f64, n: usize, max: f64 },
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("apex multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected multigraph stored as an edge list plus CSR incidence lists.
///
/// A self-loop appears twice in its vertex's incidence list, so it counts
/// twice towards the degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    offsets: Vec<usize>,
    incidence: Vec<(VertexId, EdgeId)>,
}

impl MultiGraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        MultiGraph {
            n,
            edges: Vec::new(),
            offsets: vec![0; n + 1],
            incidence: Vec::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
        }
        Ok(Self::from_checked_edges(n, edges))
    }

    fn from_checked_edges(n: usize, edges: Vec<(VertexId, VertexId)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![(0, 0); offsets[n]];
        for (id, &(u, v)) in edges.iter().enumerate() {
            incidence[fill[u]] = (v, id);
            fill[u] += 1;
            incidence[fill[v]] = (u, id);
            fill[v] += 1;
        }
        MultiGraph {
            n,
            edges,
            offsets,
            incidence,
        }
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_checked_edges(n, edges)
    }

    /// Cycle `C_n` with edges `(i, i + 1 mod n)`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_checked_edges(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        Self::from_checked_edges(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (VertexId, VertexId) {
        self.edges[id]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `(neighbor, edge id)` pairs incident to `v`, ascending by edge id.
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v < self.n
    }

    /// Subgraph induced by the vertices with `keep[v] == true`, relabelled to
    /// `0..|kept|` in ascending original order. Returns the graph and the
    /// original id of every new vertex.
    pub fn induced(&self, keep: &[bool]) -> (MultiGraph, Vec<VertexId>) {
        debug_assert_eq!(keep.len(), self.n);
        let mut new_id = vec![usize::MAX; self.n];
        let mut originals = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_id[v] = originals.len();
                originals.push(v);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        (
            Self::from_checked_edges(originals.len(), edges),
            originals,
        )
    }

    /// Reads the `n m` header followed by `m` lines of `u v`.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self, GraphError> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let parse_err = |line, msg: &str| GraphError::Parse {
            line,
            msg: msg.to_string(),
        };
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let header = header?;
        let (n, m) = parse_pair(&header).ok_or_else(|| parse_err(hline, "expected `n m`"))?;
        let mut edges = Vec::with_capacity(m);
        for (lineno, line) in lines {
            let line = line?;
            let (u, v) = parse_pair(&line).ok_or_else(|| parse_err(lineno, "expected `u v`"))?;
            if u >= n || v >= n {
                return Err(parse_err(lineno, "endpoint out of range"));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Ok(Self::from_checked_edges(n, edges))
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Membership bitmap over vertex ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn from_ids<I: IntoIterator<Item = VertexId>>(n: usize, ids: I) -> Result<Self, GraphError> {
        let mut set = Self::new(n);
        for v in ids {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    /// Panics if `v` is out of range.
    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.mask[v];
        if fresh {
            self.mask[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }
}

/// Sparse Erdős–Rényi graph with mean degree `c`: every unordered pair is an
/// edge independently with probability `c / (n - 1)`.
///
/// Pairs are visited in the order `(w, v)`, `w < v`, sorted by `v` then `w`,
/// and geometric skips jump directly between successes, so the cost is
/// `O(n + m)`. The generator is a ChaCha8 stream seeded from `seed`.
pub fn gnp_random(n: usize, c: f64, seed: u64) -> Result<MultiGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let max = (n - 1) as f64;
    if !(0.0..=max).contains(&c) || c.is_nan() {
        return Err(GraphError::InvalidMeanDegree { c, n, max });
    }
    if c == 0.0 {
        return Ok(MultiGraph::empty(n));
    }
    if c == max {
        return Ok(MultiGraph::complete(n));
    }
    let p = c / max;
    let log_q = (-p).ln_1p();
    let total_pairs = (n as f64) * max / 2.0;
    let mut rng = rng::stream(seed);
    let expected = (p * (n as f64) * (max / 2.0)) as usize;
    let mut edges = Vec::with_capacity(expected + expected / 8 + 16);
    // Current pair is (w, v) with w < v.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.random();
        let skip = ((1.0 - r).ln() / log_q).floor();
        if skip >= total_pairs {
            break;
        }
        w += 1 + skip as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Ok(MultiGraph::from_checked_edges(n, edges))
}

/// Maximal induced subgraph of minimum degree at least `k`.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub k: usize,
    /// The core with vertices compacted to `0..|core|`.
    pub core: MultiGraph,
    /// Original vertex id to core id, `None` for peeled vertices.
    pub kept: Vec<Option<VertexId>>,
    /// Core id to original vertex id.
    pub original: Vec<VertexId>,
}

impl CoreResult {
    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn size(&self) -> usize {
        self.original.len()
    }
}

/// Peels vertices of degree below `k` with a FIFO queue seeded in ascending
/// id order. Linear in `n + m`.
pub fn k_core(g: &MultiGraph, k: usize) -> CoreResult {
    let n = g.vertex_count();
    let mut degree = g.degrees();
    let mut removed = vec![false; n];
    let mut queued = vec![false; n];
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for v in 0..n {
        if degree[v] < k {
            queued[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        removed[v] = true;
        for &(u, _) in g.incident(v) {
            if removed[u] || u == v {
                continue;
            }
            degree[u] -= 1;
            if degree[u] < k && !queued[u] {
                queued[u] = true;
                queue.push_back(u);
            }
        }
    }
    let keep: Vec<bool> = removed.iter().map(|&r| !r).collect();
    let (core, original) = g.induced(&keep);
    let mut kept = vec![None; n];
    for (new, &old) in original.iter().enumerate() {
        kept[old] = Some(new);
    }
    CoreResult {
        k,
        core,
        kept,
        original,
    }
}

/// Number of edges with one endpoint in `s` and the other in `t`, each edge
/// counted once. With `s == t` this is the number of edges inside `s`.
pub fn lambda_st(g: &MultiGraph, s: &VertexSet, t: &VertexSet) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| (s.contains(u) && t.contains(v)) || (s.contains(v) && t.contains(u)))
        .count()
}

/// Connected components of `g - removed`, each sorted ascending, listed in
/// order of their smallest vertex.
pub fn components(g: &MultiGraph, removed: &VertexSet) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] || removed.contains(start) {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &(u, _) in g.incident(v) {
                if !seen[u] && !removed.contains(u) {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Number of components of `g - removed` with an odd number of vertices.
pub fn odd_components(g: &MultiGraph, removed: &VertexSet) -> usize {
    components(g, removed)
        .iter()
        .filter(|c| c.len() % 2 == 1)
        .count()
}

/// Adds vertex `n` joined to `v` by `k` parallel edges. New edge ids follow
/// the existing ones.
pub fn attach_apex(g: &MultiGraph, v: VertexId, k: usize) -> Result<MultiGraph, GraphError> {
    let n = g.vertex_count();
    if v >= n {
        return Err(GraphError::VertexOutOfRange { vertex: v, n });
    }
    if k == 0 {
        return Err(GraphError::ZeroMultiplicity);
    }
    let mut edges = g.edges().to_vec();
    edges.extend(std::iter::repeat_n((v, n), k));
    Ok(MultiGraph::from_checked_edges(n + 1, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_pendant() -> MultiGraph {
        MultiGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap()
    }

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn gnp_extremes() {
        let g = gnp_random(5, 0.0, 11).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 0);
        let k5 = gnp_random(5, 4.0, 11).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(k5.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn gnp_rejects_bad_mean_degree() {
        assert!(matches!(
            gnp_random(5, -0.1, 1),
            Err(GraphError::InvalidMeanDegree { .. })
        ));
        assert!(matches!(
            gnp_random(5, 4.5, 1),
            Err(GraphError::InvalidMeanDegree { .. })
        ));
        assert!(gnp_random(1, 0.0, 1).is_ok());
    }

    #[test]
    fn gnp_simple_and_deterministic() {
        let a = gnp_random(2000, 7.5, 99).unwrap();
        let b = gnp_random(2000, 7.5, 99).unwrap();
        assert_eq!(a.edges(), b.edges());
        let mut pairs: Vec<_> = a.edges().to_vec();
        assert!(pairs.iter().all(|&(u, v)| u < v));
        pairs.sort_unstable();
        pairs.dedup();
        assert_eq!(pairs.len(), a.edge_count());
        assert_ne!(a.edges(), gnp_random(2000, 7.5, 100).unwrap().edges());
    }

    #[test]
    fn core_examples() {
        let k5 = MultiGraph::complete(5);
        let r = k_core(&k5, 4);
        assert_eq!(r.core, k5);

        let r = k_core(&MultiGraph::path(10), 2);
        assert!(r.is_empty());
        assert_eq!(r.core.vertex_count(), 0);

        let r = k_core(&c4_pendant(), 2);
        assert_eq!(r.original, vec![0, 1, 2, 3]);
        assert_eq!(r.core.edge_count(), 4);
        assert_eq!(r.kept[4], None);
        assert_eq!(r.kept[2], Some(2));
    }

    #[test]
    fn core_of_parallel_edges() {
        // Two vertices joined by three parallel edges form a 3-core.
        let g = MultiGraph::from_edges(3, [(0, 1), (0, 1), (0, 1), (1, 2)]).unwrap();
        let r = k_core(&g, 3);
        assert_eq!(r.original, vec![0, 1]);
        assert_eq!(r.core.edge_count(), 3);
    }

    #[test]
    fn lambda_examples() {
        let c4 = MultiGraph::cycle(4);
        assert_eq!(lambda_st(&c4, &set(4, &[0]), &set(4, &[2])), 0);
        assert_eq!(lambda_st(&c4, &set(4, &[0, 2]), &set(4, &[1, 3])), 4);
        let k5 = MultiGraph::complete(5);
        let s = set(5, &[1, 2, 3]);
        assert_eq!(lambda_st(&k5, &s, &s), 3);
    }

    #[test]
    fn component_examples() {
        let c4 = MultiGraph::cycle(4);
        assert_eq!(components(&c4, &VertexSet::new(4)).len(), 1);
        let split = components(&c4, &set(4, &[0, 2]));
        assert_eq!(split, vec![vec![1], vec![3]]);
        assert_eq!(components(&MultiGraph::empty(5), &VertexSet::new(5)).len(), 5);
    }

    #[test]
    fn odd_component_examples() {
        assert_eq!(odd_components(&MultiGraph::complete(4), &set(4, &[0])), 1);
        let star = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(odd_components(&star, &set(4, &[0])), 3);
        assert_eq!(odd_components(&MultiGraph::cycle(6), &VertexSet::new(6)), 0);
    }

    #[test]
    fn apex_examples() {
        let c4 = MultiGraph::cycle(4);
        let g = attach_apex(&c4, 0, 3).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.degree(0), 5);
        assert_eq!(g.degree(4), 3);

        let k2 = attach_apex(&MultiGraph::empty(1), 0, 1).unwrap();
        assert_eq!(k2, MultiGraph::complete(2));

        let g = attach_apex(&c4, 0, 2).unwrap();
        let r = k_core(&g, 2);
        assert_eq!(r.core, g);

        assert!(matches!(
            attach_apex(&c4, 4, 1),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn self_loop_counts_twice() {
        let g = MultiGraph::from_edges(2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 3);
        assert!(g.has_self_loop());
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = MultiGraph::from_edges(4, [(0, 1), (0, 1), (2, 3), (3, 1)]).unwrap();
        let text = g.to_edge_list_string();
        assert_eq!(text, "4 4\n0 1\n0 1\n2 3\n3 1\n");
        let back = MultiGraph::read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_rejects_malformed() {
        assert!(MultiGraph::read_edge_list("3 1\n0 5\n".as_bytes()).is_err());
        assert!(MultiGraph::read_edge_list("3 2\n0 1\n".as_bytes()).is_err());
        assert!(MultiGraph::read_edge_list("3\n".as_bytes()).is_err());
        assert!(MultiGraph::read_edge_list("".as_bytes()).is_err());
    }
}
