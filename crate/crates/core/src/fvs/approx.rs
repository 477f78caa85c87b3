//! Local-ratio feedback vertex set approximation.
//!
//! Unit weights are lowered at rate `deg` on the graph pruned of degree
//! <= 1 vertices; a vertex whose weight reaches zero enters the solution. A
//! reverse-delete pass then drops every solution vertex that closes no cycle.
//! The result is within factor 2 of optimum.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackVertexSet {
    pub vertices: Vec<Vertex>,
    pub k: usize,
}

impl FeedbackVertexSet {
    pub fn new(mut vertices: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        FeedbackVertexSet {
            k: vertices.len(),
            vertices,
        }
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut mask = vec![false; g.capacity()];
        for &v in &self.vertices {
            if v < mask.len() {
                mask[v] = true;
            }
        }
        g.induced(|v| !mask[v]).is_forest()
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    at: f64,
    v: Vertex,
    stamp: u32,
}

impl PartialEq for Entry {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    // Min-heap on (zero-crossing time, id).
    fn cmp(&self, o: &Self) -> Ordering {
        o.at.total_cmp(&self.at).then(o.v.cmp(&self.v))
    }
}

/// Weights decrease linearly between degree changes, so each vertex carries
/// its weight as of `since` and is keyed in the heap by the time it would
/// reach zero at the current rate.
struct LocalRatio<'g> {
    g: &'g Graph,
    deg: Vec<usize>,
    gone: Vec<bool>,
    weight: Vec<f64>,
    since: Vec<f64>,
    stamp: Vec<u32>,
    heap: BinaryHeap<Entry>,
    prune: Vec<Vertex>,
    now: f64,
}

impl<'g> LocalRatio<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.capacity();
        let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let mut heap = BinaryHeap::new();
        for v in g.vertices() {
            if deg[v] >= 2 {
                heap.push(Entry {
                    at: 1.0 / deg[v] as f64,
                    v,
                    stamp: 0,
                });
            }
        }
        LocalRatio {
            g,
            prune: g.vertices().filter(|&v| deg[v] <= 1).collect(),
            deg,
            gone: (0..n).map(|v| !g.is_live(v)).collect(),
            weight: vec![1.0; n],
            since: vec![0.0; n],
            stamp: vec![0; n],
            heap,
            now: 0.0,
        }
    }

    fn remove(&mut self, v: Vertex) {
        self.gone[v] = true;
        for &u in self.g.neighbors(v) {
            if self.gone[u] {
                continue;
            }
            if self.deg[u] >= 2 {
                let spent = (self.now - self.since[u]) * self.deg[u] as f64;
                self.weight[u] = (self.weight[u] - spent).max(0.0);
            }
            self.since[u] = self.now;
            self.deg[u] -= 1;
            self.stamp[u] += 1;
            if self.deg[u] <= 1 {
                self.prune.push(u);
            } else {
                let at = self.now + self.weight[u] / self.deg[u] as f64;
                self.heap.push(Entry {
                    at,
                    v: u,
                    stamp: self.stamp[u],
                });
            }
        }
    }

    /// Solution vertices in the order they reached weight zero.
    fn run(mut self) -> Vec<Vertex> {
        let mut order = Vec::new();
        loop {
            while let Some(v) = self.prune.pop() {
                if !self.gone[v] && self.deg[v] <= 1 {
                    self.remove(v);
                }
            }
            let Some(e) = self.heap.pop() else { break };
            if self.gone[e.v] || e.stamp != self.stamp[e.v] || self.deg[e.v] <= 1 {
                continue;
            }
            self.now = self.now.max(e.at);
            order.push(e.v);
            self.remove(e.v);
        }
        order
    }
}

pub fn approx_fvs(g: &Graph) -> FeedbackVertexSet {
    let n = g.capacity();
    let order = LocalRatio::new(g).run();

    // Reverse delete: with F the current solution, v may leave F when its
    // neighbors outside F lie in pairwise distinct trees of G - F.
    let mut in_f = vec![false; n];
    for &v in &order {
        in_f[v] = true;
    }
    let mut dsu = Dsu::new(n);
    for (u, v) in g.edges() {
        if !in_f[u] && !in_f[v] {
            dsu.union(u, v);
        }
    }
    let mut roots = Vec::new();
    for &v in order.iter().rev() {
        roots.clear();
        let mut redundant = true;
        for &u in g.neighbors(v) {
            if in_f[u] {
                continue;
            }
            let r = dsu.find(u);
            if roots.contains(&r) {
                redundant = false;
                break;
            }
            roots.push(r);
        }
        if redundant {
            in_f[v] = false;
            for &u in g.neighbors(v) {
                if !in_f[u] {
                    dsu.union(v, u);
                }
            }
        }
    }
    FeedbackVertexSet::new((0..n).filter(|&v| in_f[v]).collect())
}

struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            Ordering::Less => self.parent[a] = b,
            Ordering::Greater => self.parent[b] = a,
            Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}
