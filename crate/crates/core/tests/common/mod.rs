//! Exhaustive oracles shared by the integration tests. Everything here is
//! exponential and meant for graphs with at most a dozen or so vertices.
#![allow(dead_code)]

use matchkern::chain::Bipartition;
use matchkern::{gen, Graph, Matching, Vertex};

/// All subsets of `items` of size `size`, in lexicographic order.
pub fn subsets(items: &[Vertex], size: usize) -> Vec<Vec<Vertex>> {
    fn rec(
        items: &[Vertex],
        size: usize,
        start: usize,
        cur: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}

fn without(g: &Graph, x: &[Vertex]) -> Graph {
    g.induced(|v| !x.contains(&v))
}

/// Smallest number of vertices whose removal leaves a forest.
pub fn min_fvs(g: &Graph) -> usize {
    let vs: Vec<Vertex> = g.vertices().collect();
    (0..=vs.len())
        .find(|&k| subsets(&vs, k).iter().any(|x| without(g, x).is_forest()))
        .unwrap()
}

/// Whether some two edges `{a1, b1}`, `{a2, b2}` on four distinct vertices
/// induce exactly those two edges.
pub fn has_induced_2k2(g: &Graph) -> bool {
    let edges: Vec<_> = g.edges().collect();
    for (i, &(a1, b1)) in edges.iter().enumerate() {
        for &(a2, b2) in &edges[i + 1..] {
            let four = [a1, b1, a2, b2];
            let distinct = (0..4).all(|p| (p + 1..4).all(|q| four[p] != four[q]));
            if distinct
                && !g.has_edge(a1, a2)
                && !g.has_edge(a1, b2)
                && !g.has_edge(b1, a2)
                && !g.has_edge(b1, b2)
            {
                return true;
            }
        }
    }
    false
}

/// Smallest number of vertices whose removal leaves a 2K2-free graph.
pub fn min_chain_deletion(g: &Graph) -> usize {
    let vs: Vec<Vertex> = g.vertices().collect();
    (0..=vs.len())
        .find(|&k| {
            subsets(&vs, k)
                .iter()
                .any(|x| !has_induced_2k2(&without(g, x)))
        })
        .unwrap()
}

/// Every simple `m`-alternating path that starts at a vertex with `start`,
/// ends at a different vertex with `end`, and whose first and last edges are
/// not in `m`.
pub fn alternating_paths(
    g: &Graph,
    m: &Matching,
    start: impl Fn(Vertex) -> bool,
    end: impl Fn(Vertex) -> bool,
) -> Vec<Vec<Vertex>> {
    fn rec(
        g: &Graph,
        m: &Matching,
        end: &dyn Fn(Vertex) -> bool,
        path: &mut Vec<Vertex>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let v = *path.last().unwrap();
        // Edges at odd positions (1st, 3rd, ...) are non-matching.
        let want_matched = path.len().is_multiple_of(2);
        for &u in g.neighbors(v) {
            if on_path[u] || (m.partner(v) == Some(u)) != want_matched {
                continue;
            }
            path.push(u);
            on_path[u] = true;
            if !want_matched && end(u) {
                out.push(path.clone());
            }
            rec(g, m, end, path, on_path, out);
            on_path[u] = false;
            path.pop();
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.capacity()];
    for s in g.vertices().filter(|&s| start(s)) {
        on_path[s] = true;
        rec(g, m, &end, &mut vec![s], &mut on_path, &mut out);
        on_path[s] = false;
    }
    out
}

/// Augmenting paths: alternating paths between two free vertices.
pub fn augmenting_paths(g: &Graph, m: &Matching) -> Vec<Vec<Vertex>> {
    alternating_paths(g, m, |v| m.is_free(v), |v| m.is_free(v))
}

/// Largest number of pairwise vertex-disjoint paths among `paths`.
pub fn max_disjoint(paths: &[Vec<Vertex>], n: usize) -> usize {
    fn rec(paths: &[Vec<Vertex>], i: usize, used: &mut Vec<bool>, cur: usize, best: &mut usize) {
        if cur + (paths.len() - i) <= *best {
            return;
        }
        if i == paths.len() {
            *best = cur;
            return;
        }
        if paths[i].iter().all(|&v| !used[v]) {
            for &v in &paths[i] {
                used[v] = true;
            }
            rec(paths, i + 1, used, cur + 1, best);
            for &v in &paths[i] {
                used[v] = false;
            }
        }
        rec(paths, i + 1, used, cur, best);
    }
    // Shorter paths first finds good packings early.
    let mut sorted = paths.to_vec();
    sorted.sort_by_key(|p| p.len());
    let mut best = 0;
    rec(&sorted, 0, &mut vec![false; n], 0, &mut best);
    best
}

/// The exchange situation for augmenting paths through a forest: a path
/// `u .. v` crossing two paths `w .. x` and `w .. y`.
///
/// Ids: u=0, the path 1..=8 with matched edges {1,2},{3,4},{5,6},{7,8},
/// v=9, w=10, x=11, y=12.
pub struct Exchange {
    pub graph: Graph,
    pub matching: Matching,
    pub x_set: Vec<Vertex>,
}

pub fn exchange_construction() -> Exchange {
    let edges = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (10, 1),
        (10, 5),
        (11, 4),
        (12, 8),
    ];
    let graph = Graph::from_edges(13, &edges).unwrap();
    let matching = Matching::from_pairs(13, &[(1, 2), (3, 4), (5, 6), (7, 8)]).unwrap();
    Exchange {
        graph,
        matching,
        x_set: vec![0, 9, 10, 11, 12],
    }
}

/// A seeded small instance from one of the general families.
pub fn mixed_general(seed: u64, max_n: usize) -> Graph {
    let n = 3 + (seed as usize % (max_n - 2));
    let k = 1 + (seed as usize / 7) % 3;
    match seed % 4 {
        0 => gen::forest_plus_edges(n, k, seed).graph,
        1 => gen::forest_plus_vertices(n.saturating_sub(k).max(1), k, seed).graph,
        2 => gen::gnm(n, n + k, seed).graph,
        _ => gen::chain_plus_vertices(n.saturating_sub(k).max(2), k, seed).graph,
    }
}

/// A seeded small bipartite instance with its sides and, when planted, a
/// chain deletion set.
pub fn mixed_bipartite(seed: u64, max_n: usize) -> (Graph, Bipartition, Option<Vec<Vertex>>) {
    let n = 4 + (seed as usize % (max_n - 3));
    if seed % 3 == 2 {
        let a = n / 2;
        let g = gen::bipartite(a, n - a, 0.3 + 0.1 * (seed % 5) as f64, seed);
        return (g.graph, Bipartition::new(g.sides.unwrap()), None);
    }
    let k = 1 + (seed as usize / 3) % 3;
    let g = gen::chain_plus_vertices(n.saturating_sub(k).max(2), k, seed);
    (g.graph, Bipartition::new(g.sides.unwrap()), Some(g.planted))
}

/// A seeded random chain graph on `n` vertices.
pub fn random_chain(n: usize, seed: u64) -> (Graph, Bipartition) {
    let g = gen::chain_plus_vertices(n, 0, seed);
    (g.graph, Bipartition::new(g.sides.unwrap()))
}
