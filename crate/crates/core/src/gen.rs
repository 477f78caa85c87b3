//! Seeded instance families. The same parameters and seed always give the
//! same graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    /// Bipartition (`true` = B side) for bipartite families.
    pub sides: Option<Vec<bool>>,
    /// Vertices planted on top of the base structure.
    pub planted: Vec<Vertex>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random forest: vertex `i > 0` hangs below a uniform earlier vertex with
/// probability 0.9.
fn random_forest(n: usize, r: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for i in 1..n {
        if r.gen_bool(0.9) {
            let j = r.gen_range(0..i);
            g.add_edge(i, j).expect("fresh edge");
        }
    }
    g
}

/// A random forest on `n` vertices plus `k` extra edges, so the feedback
/// edge number is at most `k`.
pub fn forest_plus_edges(n: usize, k: usize, seed: u64) -> Generated {
    let mut r = rng(seed);
    let mut g = random_forest(n, &mut r);
    let mut added = 0;
    let mut attempts = 0;
    while added < k && n >= 2 && attempts < 100 * (k + 1) {
        attempts += 1;
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v).expect("fresh edge");
            added += 1;
        }
    }
    Generated {
        graph: g,
        sides: None,
        planted: Vec::new(),
    }
}

/// A random forest on `n` vertices plus `k` planted vertices, each joined to
/// a random subset of the others. The planted vertices form a feedback
/// vertex set.
pub fn forest_plus_vertices(n: usize, k: usize, seed: u64) -> Generated {
    let mut r = rng(seed);
    let mut g = random_forest(n, &mut r);
    let mut planted = Vec::with_capacity(k);
    for _ in 0..k {
        let x = g.add_vertex();
        let p = r.gen_range(0.05..0.5);
        for v in 0..x {
            if r.gen_bool(p) {
                g.add_edge(x, v).expect("fresh edge");
            }
        }
        planted.push(x);
    }
    Generated {
        graph: g,
        sides: None,
        planted,
    }
}

/// A random chain graph on `n` vertices plus `k` planted vertices with
/// random edges to the opposite side.
pub fn chain_plus_vertices(n: usize, k: usize, seed: u64) -> Generated {
    let mut r = rng(seed);
    let a = n / 2;
    let b = n - a;
    let mut g = Graph::new(n);
    let mut sides = vec![false; n];
    for s in sides.iter_mut().skip(a) {
        *s = true;
    }
    // A-vertex i sees the first t_i B-vertices; B is shuffled so ids carry no
    // order.
    let mut b_ids: Vec<Vertex> = (a..n).collect();
    b_ids.shuffle(&mut r);
    for i in 0..a {
        let t = r.gen_range(0..=b);
        for &bv in &b_ids[..t] {
            g.add_edge(i, bv).expect("fresh edge");
        }
    }
    let mut planted = Vec::with_capacity(k);
    for _ in 0..k {
        let x = g.add_vertex();
        let side_b = r.gen_bool(0.5);
        sides.push(side_b);
        let p = r.gen_range(0.1..0.6);
        for (v, &s) in sides[..x].iter().enumerate() {
            if s != side_b && r.gen_bool(p) {
                g.add_edge(x, v).expect("fresh edge");
            }
        }
        planted.push(x);
    }
    Generated {
        graph: g,
        sides: Some(sides),
        planted,
    }
}

/// Uniform graph with `n` vertices and `min(m, n(n-1)/2)` edges.
pub fn gnm(n: usize, m: usize, seed: u64) -> Generated {
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    let target = m.min(n * n.saturating_sub(1) / 2);
    while g.m_live() < target {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v).expect("fresh edge");
        }
    }
    Generated {
        graph: g,
        sides: None,
        planted: Vec::new(),
    }
}

/// Random bipartite graph with parts of sizes `a` and `b` and edge
/// probability `p`.
pub fn bipartite(a: usize, b: usize, p: f64, seed: u64) -> Generated {
    let mut r = rng(seed);
    let mut g = Graph::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            if r.gen_bool(p) {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
    }
    Generated {
        graph: g,
        sides: Some((0..a + b).map(|v| v >= a).collect()),
        planted: Vec::new(),
    }
}
