//! Exact maximum matching.
//!
//! General graphs use Edmonds' blossom search with a greedy start; forests
//! use leaf peeling. The search always starts from the lowest-id free root and
//! scans neighbors in increasing id order.

use std::collections::VecDeque;

use crate::graph::{Graph, GraphError, Vertex};
use crate::matching::Matching;

const NONE: usize = usize::MAX;

/// Default refusal threshold of [`brute_force_optimum`].
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 128;

/// Blossom search state. Scratch arrays are reset only at touched entries, so
/// a failed search costs time proportional to the explored region.
struct Blossom<'g> {
    g: &'g Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    lca_mark: Vec<u32>,
    lca_stamp: u32,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g Graph, m: &Matching) -> Self {
        let n = g.capacity();
        let mut mate = vec![NONE; n];
        for (u, v) in m.pairs() {
            mate[u] = v;
            mate[v] = u;
        }
        Blossom {
            g,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            lca_mark: vec![0; n],
            lca_stamp: 0,
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn greedy(&mut self) {
        for v in self.g.vertices() {
            if self.mate[v] != NONE {
                continue;
            }
            if let Some(&u) = self.g.neighbors(v).iter().find(|&&u| self.mate[u] == NONE) {
                self.mate[v] = u;
                self.mate[u] = v;
            }
        }
    }

    fn touch(&mut self, v: usize) {
        self.touched.push(v);
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = NONE;
            self.base[v] = v;
            self.used[v] = false;
            self.in_blossom[v] = false;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.lca_stamp = self.lca_stamp.wrapping_add(1);
        if self.lca_stamp == 0 {
            self.lca_mark.iter_mut().for_each(|x| *x = 0);
            self.lca_stamp = 1;
        }
        loop {
            a = self.base[a];
            self.lca_mark[a] = self.lca_stamp;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.lca_mark[b] == self.lca_stamp {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let mv = self.mate[v];
            let (bv, bm) = (self.base[v], self.base[mv]);
            self.in_blossom[bv] = true;
            self.in_blossom[bm] = true;
            self.touch(bv);
            self.touch(bm);
            self.parent[v] = child;
            self.touch(v);
            child = mv;
            v = self.parent[mv];
        }
    }

    /// Endpoint of an augmenting path from `root`, with `parent` links set.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        self.used[root] = true;
        self.touch(root);
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    let members: Vec<usize> = self.touched.clone();
                    for i in members {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                    for i in self.touched.clone() {
                        self.in_blossom[i] = false;
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    self.touch(to);
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.touch(next);
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn flip(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    fn try_root(&mut self, root: usize) -> bool {
        let end = self.find_path(root);
        if let Some(end) = end {
            self.flip(end);
        }
        self.reset();
        end.is_some()
    }

    fn into_matching(self) -> Matching {
        let mut m = Matching::new(self.mate.len());
        for (u, &v) in self.mate.iter().enumerate() {
            if v != NONE && u < v {
                m.add(u, v).expect("consistent mates");
            }
        }
        m
    }
}

/// Maximum matching of an arbitrary graph.
pub fn max_matching_general(g: &Graph) -> Matching {
    let mut b = Blossom::new(g, &Matching::new(g.capacity()));
    b.greedy();
    // A vertex that roots no augmenting path never will after later
    // augmentations, so one pass over the roots suffices.
    for v in g.vertices() {
        if b.mate[v] == NONE && g.degree(v) > 0 {
            b.try_root(v);
        }
    }
    b.into_matching()
}

/// Flips one augmenting path if any exists. Returns whether it did.
pub fn augment_once(g: &Graph, m: &mut Matching) -> Result<bool, GraphError> {
    m.validate(g)?;
    let mut b = Blossom::new(g, m);
    for v in g.vertices() {
        if b.mate[v] == NONE && g.degree(v) > 0 && b.try_root(v) {
            let cap = m.capacity();
            *m = b.into_matching();
            m.grow(cap);
            return Ok(true);
        }
    }
    Ok(false)
}

/// Augments `m0` at most `budget + 1` times, stopping at the first failure.
pub fn solve_with_warmstart(
    g: &Graph,
    m0: &Matching,
    budget: usize,
) -> Result<Matching, GraphError> {
    let mut m = m0.clone();
    m.grow(g.capacity());
    for _ in 0..=budget {
        if !augment_once(g, &mut m)? {
            break;
        }
    }
    Ok(m)
}

/// Maximum matching of a forest by repeatedly matching a leaf to its
/// neighbor.
pub fn max_matching_forest(g: &Graph) -> Result<Matching, GraphError> {
    max_matching_forest_excluding(g, |_| false)
}

/// Maximum matching of `G - S` where `excluded(v)` marks the members of `S`.
/// `G - S` must be acyclic.
pub fn max_matching_forest_excluding<F: Fn(Vertex) -> bool>(
    g: &Graph,
    excluded: F,
) -> Result<Matching, GraphError> {
    let n = g.capacity();
    let mut m = Matching::new(n);
    let mut removed = vec![true; n];
    let mut deg = vec![0usize; n];
    for v in g.vertices() {
        if !excluded(v) {
            removed[v] = false;
        }
    }
    let mut stack = Vec::new();
    let mut remaining = 0;
    for v in g.vertices() {
        if removed[v] {
            continue;
        }
        remaining += 1;
        deg[v] = g.neighbors(v).iter().filter(|&&u| !removed[u]).count();
        if deg[v] <= 1 {
            stack.push(v);
        }
    }
    stack.reverse();
    while let Some(v) = stack.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        remaining -= 1;
        if deg[v] == 0 {
            continue;
        }
        let u = *g
            .neighbors(v)
            .iter()
            .find(|&&u| !removed[u])
            .expect("degree-1 vertex has a live neighbor");
        m.add(v, u).expect("both free");
        removed[u] = true;
        remaining -= 1;
        for &y in g.neighbors(u) {
            if !removed[y] {
                deg[y] -= 1;
                if deg[y] <= 1 {
                    stack.push(y);
                }
            }
        }
    }
    if remaining > 0 {
        return Err(GraphError::NotAForest);
    }
    Ok(m)
}

/// Maximum matching of a bipartite graph by repeated BFS for augmenting
/// paths from free `A`-side vertices (`side[v] == false`).
pub fn max_matching_bipartite(g: &Graph, side: &[bool]) -> Result<Matching, GraphError> {
    for (u, v) in g.edges() {
        if side[u] == side[v] {
            return Err(GraphError::InvalidMatching(format!(
                "edge {{{u}, {v}}} inside one side"
            )));
        }
    }
    let n = g.capacity();
    let mut mate = vec![NONE; n];
    let a_side: Vec<Vertex> = g.vertices().filter(|&v| !side[v]).collect();
    let mut prev = vec![NONE; n];
    let mut seen = vec![false; n];
    loop {
        let mut touched = Vec::new();
        let mut q = VecDeque::new();
        for &a in &a_side {
            if mate[a] == NONE {
                seen[a] = true;
                touched.push(a);
                q.push_back(a);
            }
        }
        let mut end = NONE;
        'bfs: while let Some(a) = q.pop_front() {
            for &b in g.neighbors(a) {
                if seen[b] {
                    continue;
                }
                seen[b] = true;
                prev[b] = a;
                touched.push(b);
                if mate[b] == NONE {
                    end = b;
                    break 'bfs;
                }
                let a2 = mate[b];
                if !seen[a2] {
                    seen[a2] = true;
                    touched.push(a2);
                    q.push_back(a2);
                }
            }
        }
        if end == NONE {
            break;
        }
        let mut b = end;
        while b != NONE {
            let a = prev[b];
            let next = mate[a];
            mate[a] = b;
            mate[b] = a;
            b = next;
        }
        for v in touched {
            seen[v] = false;
            prev[v] = NONE;
        }
    }
    let mut m = Matching::new(n);
    for (u, &v) in mate.iter().enumerate() {
        if v != NONE && u < v {
            m.add(u, v).expect("consistent mates");
        }
    }
    Ok(m)
}

/// Exact optimum by branching on an edge between two high-degree vertices:
/// either the edge is matched (both endpoints go) or it is discarded.
/// Refuses graphs with more than [`BRUTE_FORCE_EDGE_LIMIT`] edges or more
/// than 64 live vertices.
pub fn brute_force_optimum(g: &Graph) -> Result<usize, GraphError> {
    brute_force_optimum_limited(g, BRUTE_FORCE_EDGE_LIMIT)
}

pub fn brute_force_optimum_limited(g: &Graph, max_edges: usize) -> Result<usize, GraphError> {
    if g.m_live() > max_edges || g.n_live() > 64 {
        return Err(GraphError::TooLarge {
            edges: g.m_live(),
            limit: max_edges,
        });
    }
    let (c, _) = g.compact();
    let n = c.n_live();
    let mut adj = vec![0u64; n];
    for (u, v) in c.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    // Seed the incumbent with a greedy matching to prune early.
    let mut best = 0;
    let mut used = 0u64;
    for (u, v) in c.edges() {
        if used & (1 << u) == 0 && used & (1 << v) == 0 {
            used |= (1 << u) | (1 << v);
            best += 1;
        }
    }
    branch(&mut adj, 0, &mut best);
    Ok(best)
}

fn branch(adj: &mut [u64], size: usize, best: &mut usize) {
    let mut active = 0u32;
    let mut u = NONE;
    let mut du = 0;
    for (v, &row) in adj.iter().enumerate() {
        let d = row.count_ones();
        if d > 0 {
            active += 1;
            if d > du {
                du = d;
                u = v;
            }
        }
    }
    if size + active as usize / 2 <= *best {
        return;
    }
    if u == NONE {
        *best = size;
        return;
    }
    let mut w = NONE;
    let mut dw = 0;
    let mut row = adj[u];
    while row != 0 {
        let v = row.trailing_zeros() as usize;
        row &= row - 1;
        let d = adj[v].count_ones();
        if d > dw {
            dw = d;
            w = v;
        }
    }
    // Match {u, w}.
    let saved_u = adj[u];
    let saved_w = adj[w];
    let mut touched = saved_u | saved_w;
    let mut rows = Vec::with_capacity(touched.count_ones() as usize);
    while touched != 0 {
        let v = touched.trailing_zeros() as usize;
        touched &= touched - 1;
        rows.push((v, adj[v]));
        adj[v] &= !((1 << u) | (1 << w));
    }
    adj[u] = 0;
    adj[w] = 0;
    branch(adj, size + 1, best);
    for (v, r) in rows {
        adj[v] = r;
    }
    adj[u] = saved_u;
    adj[w] = saved_w;
    // Discard {u, w}.
    adj[u] &= !(1 << w);
    adj[w] &= !(1 << u);
    branch(adj, size, best);
    adj[u] |= 1 << w;
    adj[w] |= 1 << u;
}
