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

//! Maximum-cardinality matching in general graphs (Edmonds' blossom method).
//!
//! Augmenting paths are grown one free root at a time by breadth-first
//! search. Blossoms are contracted implicitly: a union-find keeps the base of
//! every vertex's outermost blossom, and `parent` pointers are rewritten
//! along both sides of a blossom so that an augmenting path can later be
//! unwound through it. Per-search state is reset only for the vertices the
//! search touched, so a search costs time proportional to the part of the
//! graph it explores.
//!
//! A search that fails leaves a Hungarian tree behind. Its odd (inner)
//! vertices `X` form a Tutte violator: every outer blossom becomes an odd
//! component of `G - X` and there is one more of them than `|X|`.

use std::collections::VecDeque;

use crate::graph::{EdgeId, MultiGraph, VertexId};

const NONE: usize = usize::MAX;

const UNLABELED: u8 = 0;
const EVEN: u8 = 1;
const ODD: u8 = 2;

/// Simple adjacency (parallel edges and loops dropped).
struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    fn new(g: &MultiGraph) -> Self {
        let n = g.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * g.edge_count());
        let mut last_seen = vec![NONE; n];
        offsets.push(0);
        for v in 0..n {
            for &(u, _) in g.incident(v) {
                if u != v && last_seen[u] != v {
                    last_seen[u] = v;
                    targets.push(u);
                }
            }
            offsets.push(targets.len());
        }
        Adjacency { offsets, targets }
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

pub(crate) struct Blossom {
    adj: Adjacency,
    mate: Vec<usize>,
    label: Vec<u8>,
    parent: Vec<usize>,
    uf: Vec<usize>,
    stamp: Vec<u32>,
    clock: u32,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
    merged: Vec<usize>,
}

impl Blossom {
    pub(crate) fn new(g: &MultiGraph) -> Self {
        let n = g.vertex_count();
        Blossom {
            adj: Adjacency::new(g),
            mate: vec![NONE; n],
            label: vec![UNLABELED; n],
            parent: vec![NONE; n],
            uf: (0..n).collect(),
            stamp: vec![0; n],
            clock: 0,
            touched: Vec::new(),
            queue: VecDeque::new(),
            merged: Vec::new(),
        }
    }

    /// Seeds the matching with `pairs`. Each pair must be an edge and no
    /// vertex may appear twice.
    pub(crate) fn seed(&mut self, pairs: impl IntoIterator<Item = (usize, usize)>) {
        for (a, b) in pairs {
            debug_assert!(self.mate[a] == NONE && self.mate[b] == NONE);
            debug_assert!(self.adj.neighbors(a).contains(&b));
            self.mate[a] = b;
            self.mate[b] = a;
        }
    }

    /// Greedily matches free vertices, lowest degree first, each to its free
    /// neighbour of lowest degree.
    pub(crate) fn greedy(&mut self) {
        let n = self.mate.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (self.adj.degree(v), v));
        for &v in &order {
            if self.mate[v] != NONE {
                continue;
            }
            let best = self
                .adj
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| self.mate[u] == NONE)
                .min_by_key(|&u| (self.adj.degree(u), u));
            if let Some(u) = best {
                self.mate[v] = u;
                self.mate[u] = v;
            }
        }
    }

    fn touch(&mut self, v: usize) {
        if self.label[v] == UNLABELED && self.parent[v] == NONE && self.uf[v] == v {
            self.touched.push(v);
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.label[v] = UNLABELED;
            self.parent[v] = NONE;
            self.uf[v] = v;
        }
        self.touched.clear();
        self.queue.clear();
    }

    /// Base of the outermost blossom containing `v`. Roots of the
    /// union-find are always blossom bases.
    fn base(&mut self, mut v: usize) -> usize {
        while self.uf[v] != v {
            let up = self.uf[self.uf[v]];
            self.uf[v] = up;
            v = up;
        }
        v
    }

    fn lca(&mut self, a: usize, b: usize) -> usize {
        self.clock = self.clock.wrapping_add(1);
        if self.clock == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.clock = 1;
        }
        let mut a = a;
        loop {
            a = self.base(a);
            self.stamp[a] = self.clock;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        let mut b = b;
        loop {
            b = self.base(b);
            if self.stamp[b] == self.clock {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    /// Walks from `v` up to blossom base `lca`, pointing each outer vertex
    /// across the blossom and recording the bases passed. The merge itself
    /// waits for [`Self::contract`]: folding a base early would end a later
    /// walk at that base before it reaches the base's odd mate.
    fn mark_path(&mut self, mut v: usize, lca: usize, mut child: usize) {
        while self.base(v) != lca {
            self.parent[v] = child;
            let m = self.mate[v];
            if self.label[m] == ODD {
                self.label[m] = EVEN;
                self.queue.push_back(m);
            }
            let (rv, rm) = (self.base(v), self.base(m));
            self.merged.push(rv);
            self.merged.push(rm);
            child = m;
            v = self.parent[m];
        }
    }

    /// Contracts the blossom closed by the even-even edge `v`-`to`.
    fn contract(&mut self, v: usize, to: usize) {
        let lca = self.lca(v, to);
        self.mark_path(v, lca, to);
        self.mark_path(to, lca, v);
        while let Some(b) = self.merged.pop() {
            let r = self.base(b);
            if r != lca {
                self.uf[r] = lca;
            }
        }
    }

    /// Alternating BFS from free vertex `root`. Returns the free vertex at
    /// the far end of an augmenting path, if any.
    fn search(&mut self, root: usize) -> Option<usize> {
        self.reset();
        self.touched.push(root);
        self.label[root] = EVEN;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for i in self.adj.offsets[v]..self.adj.offsets[v + 1] {
                let to = self.adj.targets[i];
                if self.mate[v] == to {
                    continue;
                }
                match self.label[to] {
                    EVEN => {
                        let bv = self.base(v);
                        let bt = self.base(to);
                        if bv == bt {
                            continue;
                        }
                        self.contract(v, to);
                    }
                    UNLABELED => {
                        self.touch(to);
                        self.parent[to] = v;
                        let m = self.mate[to];
                        if m == NONE {
                            return Some(to);
                        }
                        self.label[to] = ODD;
                        self.touch(m);
                        self.label[m] = EVEN;
                        self.queue.push_back(m);
                    }
                    _ => {}
                }
            }
        }
        None
    }

    fn augment(&mut self, end: usize) {
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }

    fn odd_vertices(&self) -> Vec<usize> {
        let mut odd: Vec<usize> = self
            .touched
            .iter()
            .copied()
            .filter(|&v| self.label[v] == ODD)
            .collect();
        odd.sort_unstable();
        odd
    }

    /// Augments from every free vertex. With `stop_on_failure`, returns the
    /// Tutte violator of the first root that cannot be matched.
    pub(crate) fn run(&mut self, stop_on_failure: bool) -> Option<Vec<usize>> {
        let n = self.mate.len();
        if stop_on_failure && n % 2 == 1 {
            return Some(Vec::new());
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            match self.search(root) {
                Some(end) => self.augment(end),
                None if stop_on_failure => return Some(self.odd_vertices()),
                None => {}
            }
        }
        self.reset();
        None
    }

    pub(crate) fn matched_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(v, &u)| u != NONE && v < u)
            .map(|(v, &u)| (v, u))
    }

    /// Matched pairs as edge ids of `g` (lowest id of a parallel bundle).
    pub(crate) fn edge_ids(&self, g: &MultiGraph) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self
            .matched_pairs()
            .map(|(v, u)| {
                g.incident(v)
                    .iter()
                    .find(|&&(w, _)| w == u)
                    .map(|&(_, e)| e)
                    .expect("matched pair is an edge")
            })
            .collect();
        ids.sort_unstable();
        ids
    }
}

/// Checks that `edges` is a matching of `g`; with `perfect`, that it also
/// covers every vertex.
pub fn is_valid_matching(g: &MultiGraph, edges: &[EdgeId], perfect: bool) -> bool {
    let mut covered = vec![false; g.vertex_count()];
    for &e in edges {
        if e >= g.edge_count() {
            return false;
        }
        let (u, v) = g.edge(e);
        if u == v || covered[u] || covered[v] {
            return false;
        }
        covered[u] = true;
        covered[v] = true;
    }
    !perfect || covered.iter().all(|&c| c)
}

/// A perfect matching of `g` as edge ids, or a set `X` with more odd
/// components in `g - X` than `|X|`.
pub fn perfect_matching_or_violator(g: &MultiGraph) -> Result<Vec<EdgeId>, Vec<VertexId>> {
    let mut engine = Blossom::new(g);
    engine.greedy();
    match engine.run(true) {
        Some(violator) => Err(violator),
        None => {
            let edges = engine.edge_ids(g);
            debug_assert!(is_valid_matching(g, &edges, true));
            Ok(edges)
        }
    }
}

/// A perfect matching of `g`, if one exists.
pub fn perfect_matching(g: &MultiGraph) -> Option<Vec<EdgeId>> {
    perfect_matching_or_violator(g).ok()
}

/// A maximum-cardinality matching of `g`.
pub fn maximum_matching(g: &MultiGraph) -> Vec<EdgeId> {
    let mut engine = Blossom::new(g);
    engine.greedy();
    engine.run(false);
    let edges = engine.edge_ids(g);
    debug_assert!(is_valid_matching(g, &edges, false));
    edges
}
