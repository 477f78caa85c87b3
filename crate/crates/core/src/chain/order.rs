//! Bipartitions, chain orderings, the greedy 2K2 deletion set and the
//! parallel maximum matching of a chain graph.

use std::collections::VecDeque;

use crate::graph::{Graph, GraphError, Vertex};
use crate::matching::Matching;

const NONE: usize = usize::MAX;

/// Side labels; `true` marks the B side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<bool>,
}

impl Bipartition {
    pub fn new(side: Vec<bool>) -> Self {
        Bipartition { side }
    }

    /// 2-colors `g` by BFS, lowest id of each component on side A.
    pub fn from_graph(g: &Graph) -> Result<Self, GraphError> {
        let mut color: Vec<Option<bool>> = vec![None; g.capacity()];
        let mut queue = VecDeque::new();
        for s in g.vertices() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap();
                for &u in g.neighbors(v) {
                    match color[u] {
                        None => {
                            color[u] = Some(!c);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == c => return Err(GraphError::NotBipartite(v, u)),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(Bipartition {
            side: color.into_iter().map(|c| c.unwrap_or(false)).collect(),
        })
    }

    pub fn is_b(&self, v: Vertex) -> bool {
        self.side.get(v).copied().unwrap_or(false)
    }

    pub fn sides(&self) -> &[bool] {
        &self.side
    }

    /// Errors on the first live edge inside one side.
    pub fn check(&self, g: &Graph) -> Result<(), GraphError> {
        if self.side.len() < g.capacity() {
            return Err(GraphError::InvalidMatching(format!(
                "bipartition covers {} of {} vertices",
                self.side.len(),
                g.capacity()
            )));
        }
        match g.edges().find(|&(u, v)| self.side[u] == self.side[v]) {
            Some((u, v)) => Err(GraphError::NotBipartite(u, v)),
            None => Ok(()),
        }
    }
}

/// Neighborhood-inclusion orders of both sides of a chain graph, smallest
/// neighborhood first. Ties are broken by degree, then id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainOrdering {
    pub order_a: Vec<Vertex>,
    pub order_b: Vec<Vertex>,
    rank: Vec<usize>,
}

impl ChainOrdering {
    /// Position of `v` within its side, if `v` was ordered.
    pub fn rank(&self, v: Vertex) -> Option<usize> {
        match self.rank.get(v) {
            Some(&r) if r != NONE => Some(r),
            _ => None,
        }
    }

    /// Checks `N(u) ⊆ N(w)` for every consecutive pair on both sides.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let nested = |order: &[Vertex]| {
            order
                .windows(2)
                .all(|w| g.neighbors(w[0]).iter().all(|&y| g.has_edge(w[1], y)))
        };
        nested(&self.order_a) && nested(&self.order_b)
    }
}

/// Orders both sides of `g` by inclusion, or `None` if `g` is not a chain
/// graph.
pub fn chain_order(g: &Graph, parts: &Bipartition) -> Result<Option<ChainOrdering>, GraphError> {
    parts.check(g)?;
    let by_degree = |b: bool| {
        let mut side: Vec<Vertex> = g.vertices().filter(|&v| parts.is_b(v) == b).collect();
        side.sort_by_key(|&v| (g.degree(v), v));
        side
    };
    let order_a = by_degree(false);
    let order_b = by_degree(true);
    let mut rank = vec![NONE; g.capacity()];
    for order in [&order_a, &order_b] {
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
    }
    let co = ChainOrdering {
        order_a,
        order_b,
        rank,
    };
    Ok(co.is_valid_for(g).then_some(co))
}

/// Greedy 2K2 packing: strips isolated and full vertices, then deletes the
/// four vertices of an induced 2K2 built around a minimum-degree A-vertex,
/// until nothing is left. `G - X` is a chain graph and `|X|` is at most four
/// times the minimum.
pub fn approx_chain_deletion(g: &Graph, parts: &Bipartition) -> Result<Vec<Vertex>, GraphError> {
    parts.check(g)?;
    let n = g.capacity();
    let side = |v: Vertex| parts.is_b(v) as usize;
    let mut live = vec![false; n];
    let mut deg = vec![0usize; n];
    let mut count = [0usize; 2];
    let mut buckets: [Vec<Vec<Vertex>>; 2] = [vec![Vec::new(); n + 1], vec![Vec::new(); n + 1]];
    for v in g.vertices() {
        live[v] = true;
        deg[v] = g.degree(v);
        count[side(v)] += 1;
        buckets[side(v)][deg[v]].push(v);
    }

    let mut x = Vec::new();
    let remove = |v: Vertex,
                  live: &mut Vec<bool>,
                  deg: &mut Vec<usize>,
                  count: &mut [usize; 2],
                  buckets: &mut [Vec<Vec<Vertex>>; 2]| {
        live[v] = false;
        count[side(v)] -= 1;
        for &u in g.neighbors(v) {
            if live[u] {
                deg[u] -= 1;
                buckets[side(u)][deg[u]].push(u);
            }
        }
    };

    loop {
        // Isolated and full vertices lie in no induced 2K2 of what is left.
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..2 {
                for d in [0, count[1 - s]] {
                    while let Some(v) = buckets[s][d].pop() {
                        if live[v] && deg[v] == d {
                            remove(v, &mut live, &mut deg, &mut count, &mut buckets);
                            changed = true;
                        }
                    }
                }
            }
        }
        if count[0] == 0 || count[1] == 0 {
            break;
        }
        let a = (1..=n)
            .find_map(|d| {
                let b = &mut buckets[0][d];
                while let Some(&v) = b.last() {
                    if live[v] && deg[v] == d {
                        return Some(v);
                    }
                    b.pop();
                }
                None
            })
            .expect("a live A-vertex with positive degree");
        let b = *g
            .neighbors(a)
            .iter()
            .find(|&&u| live[u])
            .expect("positive degree");
        // b is not full, so some live a2 misses it; a2 has degree at least
        // deg(a), hence a neighbor b2 outside N(a).
        let a2 = g
            .vertices()
            .find(|&v| live[v] && side(v) == 0 && !g.has_edge(v, b))
            .expect("b is not full");
        let b2 = *g
            .neighbors(a2)
            .iter()
            .find(|&&u| live[u] && !g.has_edge(a, u))
            .expect("a has minimum degree");
        for v in [a, b, a2, b2] {
            remove(v, &mut live, &mut deg, &mut count, &mut buckets);
            x.push(v);
        }
    }
    x.sort_unstable();
    Ok(x)
}

/// Maximum matching of a chain graph whose edges are pairwise parallel: the
/// `s` rightmost A-vertices are matched, in increasing order, to the `s`
/// highest B-vertices in decreasing order.
///
/// `s` is the largest value for which every postulated pair is an edge.
/// Feasibility is monotone in `s` on chain graphs, so a binary search finds
/// it.
pub fn chain_matching_parallel(g: &Graph, co: &ChainOrdering) -> Result<Matching, GraphError> {
    let pairs = parallel_pairs(g, co);
    let m = Matching::from_pairs(g.capacity(), &pairs)?;
    for &(a, b) in &pairs {
        if !g.has_edge(a, b) {
            return Err(GraphError::InvalidMatching(format!(
                "ordering invalid: parallel pair {{{a}, {b}}} is not an edge"
            )));
        }
    }
    Ok(m)
}

/// Pairs of the parallel matching, leftmost first.
pub fn parallel_pairs(g: &Graph, co: &ChainOrdering) -> Vec<(Vertex, Vertex)> {
    let (alpha, beta) = (co.order_a.len(), co.order_b.len());
    let pair = |s: usize, i: usize| (co.order_a[alpha - s + i], co.order_b[beta - 1 - i]);
    let feasible = |s: usize| {
        (0..s).all(|i| {
            let (a, b) = pair(s, i);
            g.has_edge(a, b)
        })
    };
    let (mut lo, mut hi) = (0, alpha.min(beta));
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    (0..lo).map(|i| pair(lo, i)).collect()
}
