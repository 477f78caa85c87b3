//! Rooted view of `G - X` that survives vertex deletions and leaf merges.
//!
//! Parent pointers are fixed once by BFS from the lowest-id vertex of each
//! component. Children are read off the current graph: every neighbor outside
//! `X` except the parent. A vertex whose parent was deleted becomes a root.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};
use crate::matching::Matching;
use crate::solver::max_matching_forest_excluding;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct RootedForest {
    parent: Vec<Vertex>,
    in_x: Vec<bool>,
}

impl RootedForest {
    /// Roots every tree of `G - X` at its lowest-id vertex.
    pub fn build(g: &Graph, in_x: &[bool]) -> Self {
        let n = g.capacity();
        let mut parent = vec![NONE; n];
        let mut seen = vec![false; n];
        let mut q = VecDeque::new();
        for r in g.vertices() {
            if in_x[r] || seen[r] {
                continue;
            }
            seen[r] = true;
            q.push_back(r);
            while let Some(v) = q.pop_front() {
                for &u in g.neighbors(v) {
                    if !in_x[u] && !seen[u] {
                        seen[u] = true;
                        parent[u] = v;
                        q.push_back(u);
                    }
                }
            }
        }
        RootedForest {
            parent,
            in_x: in_x.to_vec(),
        }
    }

    pub fn in_x(&self, v: Vertex) -> bool {
        self.in_x.get(v).copied().unwrap_or(false)
    }

    pub fn in_forest(&self, g: &Graph, v: Vertex) -> bool {
        g.is_live(v) && !self.in_x(v)
    }

    pub fn vertices<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = Vertex> + 'a {
        g.vertices().filter(move |&v| !self.in_x(v))
    }

    pub fn parent(&self, g: &Graph, v: Vertex) -> Option<Vertex> {
        let p = *self.parent.get(v)?;
        (p != NONE && g.has_edge(v, p)).then_some(p)
    }

    pub fn children<'a>(&'a self, g: &'a Graph, v: Vertex) -> impl Iterator<Item = Vertex> + 'a {
        let p = self.parent.get(v).copied().unwrap_or(NONE);
        g.neighbors(v)
            .iter()
            .copied()
            .filter(move |&u| u != p && !self.in_x(u))
    }

    pub fn first_child(&self, g: &Graph, v: Vertex) -> Option<Vertex> {
        self.children(g, v).next()
    }

    /// Childless forest vertex.
    pub fn is_leaf(&self, g: &Graph, v: Vertex) -> bool {
        self.in_forest(g, v) && self.first_child(g, v).is_none()
    }

    /// A leaf without siblings or whose siblings are all leaves.
    pub fn is_bottommost(&self, g: &Graph, v: Vertex) -> bool {
        if !self.is_leaf(g, v) {
            return false;
        }
        match self.parent(g, v) {
            None => true,
            Some(p) => self.children(g, p).all(|c| self.is_leaf(g, c)),
        }
    }

    /// Bottommost leaf matched to its parent and without siblings.
    pub fn is_interesting(&self, g: &Graph, m: &Matching, v: Vertex) -> bool {
        if !self.is_leaf(g, v) {
            return false;
        }
        match self.parent(g, v) {
            Some(p) => m.partner(v) == Some(p) && self.children(g, p).count() == 1,
            None => false,
        }
    }

    pub fn forest_degree(&self, g: &Graph, v: Vertex) -> usize {
        g.neighbors(v).iter().filter(|&&u| !self.in_x(u)).count()
    }

    /// Forest vertices in BFS order from the current roots.
    pub fn bfs_order(&self, g: &Graph) -> Vec<Vertex> {
        let mut order = Vec::new();
        for r in self.vertices(g) {
            if self.parent(g, r).is_some() {
                continue;
            }
            let start = order.len();
            order.push(r);
            let mut i = start;
            while i < order.len() {
                let v = order[i];
                order.extend(self.children(g, v));
                i += 1;
            }
        }
        order
    }
}

/// Maximum matching of `G - X` in which every free vertex is a leaf.
pub fn matching_leaves_only(g: &Graph, forest: &RootedForest) -> Matching {
    let mut m = max_matching_forest_excluding(g, |v| forest.in_x(v)).expect("G - X is a forest");
    repair_leaves_only(g, forest, &mut m);
    m
}

/// Walks the forest top-down and matches every free inner vertex with its
/// lowest-id child; the child's old partner, one level further down, is
/// handled when the walk reaches it.
pub fn repair_leaves_only(g: &Graph, forest: &RootedForest, m: &mut Matching) {
    for v in forest.bfs_order(g) {
        if m.is_matched(v) {
            continue;
        }
        let Some(c) = forest.first_child(g, v) else {
            continue;
        };
        m.unmatch(c);
        m.add(v, c).expect("both free");
    }
}

/// Counts on `G - X` and its pendant-free forest `T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ForestCensus {
    pub forest_vertices: usize,
    pub free: usize,
    pub free_non_leaves: usize,
    pub leaves: usize,
    pub bottommost: usize,
    pub interesting: usize,
    pub pendants: usize,
    pub t_vertices: usize,
    pub t_leaves: usize,
    pub t_deg3_plus: usize,
    /// Leaves of `T` coincide with the bottommost leaves of `G - X`.
    pub t_leaves_are_bottommost: bool,
}

/// Membership in the pendant-free forest and degrees inside it.
pub fn pendant_free(g: &Graph, forest: &RootedForest) -> (Vec<bool>, Vec<usize>) {
    let n = g.capacity();
    let mut in_t = vec![false; n];
    for v in forest.vertices(g) {
        in_t[v] = !forest.is_leaf(g, v) || forest.is_bottommost(g, v);
    }
    let mut deg = vec![0; n];
    for v in forest.vertices(g) {
        if in_t[v] {
            deg[v] = g.neighbors(v).iter().filter(|&&u| in_t[u]).count();
        }
    }
    (in_t, deg)
}

pub fn census(g: &Graph, forest: &RootedForest, m: &Matching) -> ForestCensus {
    let (in_t, t_deg) = pendant_free(g, forest);
    let mut c = ForestCensus {
        t_leaves_are_bottommost: true,
        ..Default::default()
    };
    for v in forest.vertices(g) {
        c.forest_vertices += 1;
        let leaf = forest.is_leaf(g, v);
        let bottom = forest.is_bottommost(g, v);
        if m.is_free(v) {
            c.free += 1;
            if !leaf {
                c.free_non_leaves += 1;
            }
        }
        if leaf {
            c.leaves += 1;
            if bottom {
                c.bottommost += 1;
            } else {
                c.pendants += 1;
            }
        }
        if forest.is_interesting(g, m, v) {
            c.interesting += 1;
        }
        if in_t[v] {
            c.t_vertices += 1;
            let t_children = forest.children(g, v).filter(|&u| in_t[u]).count();
            let t_leaf = t_children == 0;
            if t_leaf {
                c.t_leaves += 1;
            }
            if t_deg[v] >= 3 {
                c.t_deg3_plus += 1;
            }
            if t_leaf != bottom {
                c.t_leaves_are_bottommost = false;
            }
        } else if bottom {
            c.t_leaves_are_bottommost = false;
        }
    }
    c
}
