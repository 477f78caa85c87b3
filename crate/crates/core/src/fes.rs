//! Kernel for the feedback edge number: Rules 1 and 3 alone leave fewer than
//! `12k` vertices and `13k` edges.

use serde::Serialize;

use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, ReductionTrace};
use crate::rules;
use crate::Kernel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackEdgeSet {
    pub edges: Vec<(Vertex, Vertex)>,
    pub k: usize,
}

/// Complement of a DFS spanning forest. Minimum, with `k = m - n + c`.
pub fn feedback_edge_set(g: &Graph) -> FeedbackEdgeSet {
    let n = g.capacity();
    let mut seen = vec![false; n];
    let mut tree_parent = vec![usize::MAX; n];
    let mut stack: Vec<(Vertex, usize)> = Vec::new();
    for s in g.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push((s, 0));
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let nbrs = g.neighbors(v);
            if *i == nbrs.len() {
                stack.pop();
                continue;
            }
            let u = nbrs[*i];
            *i += 1;
            if !seen[u] {
                seen[u] = true;
                tree_parent[u] = v;
                stack.push((u, 0));
            }
        }
    }
    let edges: Vec<_> = g
        .edges()
        .filter(|&(u, v)| tree_parent[u] != v && tree_parent[v] != u)
        .collect();
    FeedbackEdgeSet {
        k: edges.len(),
        edges,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeClasses {
    pub deg1: usize,
    pub deg2: usize,
    pub deg3_plus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FesReport {
    pub param: &'static str,
    pub k: usize,
    pub n_in: usize,
    pub m_in: usize,
    pub n_out: usize,
    pub m_out: usize,
    pub offset: usize,
    pub target_out: Option<i64>,
    pub bound_vertices: usize,
    pub bound_edges: usize,
    pub within_bound: bool,
    /// Reductions already met the target; the kernel is the trivial yes-instance.
    pub decided_yes: bool,
    /// Degree classes of the kernel minus one of its feedback edge sets.
    pub forest_degrees: DegreeClasses,
    pub rule_applications: usize,
    pub work: u64,
}

pub fn kernelize_fes(input: &Instance) -> Kernel<FesReport> {
    let k = feedback_edge_set(&input.graph).k;
    let mut inst = input.clone();
    let mut trace = ReductionTrace::new();
    let stats = rules::exhaust(&mut inst, &mut trace, true);
    let decided = inst.is_trivial_yes();
    if decided {
        inst.canonical_yes();
    }
    let g = &inst.graph;
    let forest_degrees = degree_classes_minus(g, &feedback_edge_set(g).edges);
    let (n_out, m_out) = (g.n_live(), g.m_live());
    let report = FesReport {
        param: "fes",
        k,
        n_in: input.graph.n_live(),
        m_in: input.graph.m_live(),
        n_out,
        m_out,
        offset: inst.offset,
        target_out: inst.target,
        bound_vertices: 12 * k,
        bound_edges: 13 * k,
        within_bound: decided || (n_out <= 12 * k && m_out <= 13 * k),
        decided_yes: decided,
        forest_degrees,
        rule_applications: stats.applications(),
        work: stats.pops + stats.touches,
    };
    Kernel {
        instance: inst,
        trace,
        report,
    }
}

fn degree_classes_minus(g: &Graph, removed: &[(Vertex, Vertex)]) -> DegreeClasses {
    let mut deg: Vec<usize> = (0..g.capacity()).map(|v| g.degree(v)).collect();
    for &(u, v) in removed {
        deg[u] -= 1;
        deg[v] -= 1;
    }
    let mut c = DegreeClasses::default();
    for v in g.vertices() {
        match deg[v] {
            0 => {}
            1 => c.deg1 += 1,
            2 => c.deg2 += 1,
            _ => c.deg3_plus += 1,
        }
    }
    c
}
