//! Degree-based reductions shared by all kernelizers.
//!
//! - Rule 1: delete an isolated vertex; delete a degree-1 vertex together with
//!   its neighbor and bank that edge.
//! - Rule 2: for a degree-2 vertex `v` with neighbors `u`, `w`, delete `v`,
//!   merge `u` and `w`, and bank one edge.
//! - Rule 3: Rule 2 restricted to `deg(u), deg(w) <= 2`, which together with
//!   Rule 1 can be applied exhaustively in linear time.

use crate::graph::{DegreeBuckets, Graph, GraphError, Vertex};
use crate::instance::{Instance, ReductionTrace, TraceEvent};

/// Work counters for one exhaustive run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleStats {
    pub isolated: usize,
    pub pendant_pairs: usize,
    pub merges: usize,
    pub pops: u64,
    pub touches: u64,
}

impl RuleStats {
    pub fn applications(&self) -> usize {
        self.isolated + self.pendant_pairs + self.merges
    }
}

/// Constant-time adjacency rows for a small vertex set `X`, kept in sync with
/// merges. Lets callers test `{x, y} ∈ E` for `x ∈ X` without touching
/// adjacency lists.
#[derive(Clone, Debug)]
pub struct PartialAdjacency {
    row_of: Vec<Option<usize>>,
    members: Vec<Vertex>,
    rows: Vec<Vec<u64>>,
}

impl PartialAdjacency {
    pub fn new(g: &Graph, members: &[Vertex]) -> Self {
        let words = g.capacity().div_ceil(64).max(1);
        let mut row_of = vec![None; g.capacity()];
        let mut rows = Vec::with_capacity(members.len());
        for (i, &x) in members.iter().enumerate() {
            row_of[x] = Some(i);
            let mut row = vec![0u64; words];
            for &y in g.neighbors(x) {
                row[y / 64] |= 1 << (y % 64);
            }
            rows.push(row);
        }
        PartialAdjacency {
            row_of,
            members: members.to_vec(),
            rows,
        }
    }

    pub fn row(&self, x: Vertex) -> Option<usize> {
        self.row_of.get(x).copied().flatten()
    }

    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn adjacent(&self, x: Vertex, y: Vertex) -> bool {
        match self.row(x) {
            Some(r) => y / 64 < self.rows[r].len() && self.rows[r][y / 64] & (1 << (y % 64)) != 0,
            None => false,
        }
    }

    fn set(&mut self, r: usize, y: Vertex, on: bool) {
        let word = &mut self.rows[r][y / 64];
        if on {
            *word |= 1 << (y % 64);
        } else {
            *word &= !(1 << (y % 64));
        }
    }

    pub fn on_delete_edge(&mut self, a: Vertex, b: Vertex) {
        if let Some(r) = self.row(a) {
            self.set(r, b, false);
        }
        if let Some(r) = self.row(b) {
            self.set(r, a, false);
        }
    }

    /// Updates rows after `deleted` lost all edges; `nbrs` are its former
    /// neighbors.
    pub fn on_delete_vertex(&mut self, deleted: Vertex, nbrs: &[Vertex]) {
        for &y in nbrs {
            if let Some(r) = self.row(y) {
                self.set(r, deleted, false);
            }
        }
    }

    /// Updates rows after `u` was merged into `w`; `from_u` is `N(u)` minus
    /// the merge partners.
    fn on_merge(&mut self, u: Vertex, w: Vertex, from_u: &[Vertex]) {
        for &y in from_u {
            if let Some(r) = self.row(y) {
                self.set(r, u, false);
                self.set(r, w, true);
            }
        }
        if let Some(r) = self.row(w) {
            for &y in from_u {
                self.set(r, y, true);
            }
        }
    }
}

/// Rule 1 until no vertex of degree 0 or 1 remains. Returns the number of
/// applications.
pub fn apply_rule1(inst: &mut Instance, trace: &mut ReductionTrace) -> usize {
    exhaust(inst, trace, false).applications()
}

/// Rules 1 and 3 until neither applies, Rule 1 first. Returns the number of
/// applications.
pub fn apply_rule3_exhaustive(inst: &mut Instance, trace: &mut ReductionTrace) -> usize {
    exhaust(inst, trace, true).applications()
}

/// Same as [`apply_rule3_exhaustive`] but returns the work counters.
pub fn exhaust(inst: &mut Instance, trace: &mut ReductionTrace, rule3: bool) -> RuleStats {
    let mut buckets = DegreeBuckets::new(&inst.graph);
    let mut stats = RuleStats::default();
    while !inst.is_trivial_yes() {
        let Some((v, d)) = buckets.pop_low_degree(&inst.graph) else {
            break;
        };
        match d {
            0 => {
                inst.graph.delete_vertex(v).expect("live");
                trace.push(TraceEvent::DeleteIsolated(v));
                stats.isolated += 1;
            }
            1 => {
                let u = inst.graph.neighbors(v)[0];
                inst.graph.delete_vertex(v).expect("live");
                let nbrs = inst.graph.delete_vertex(u).expect("live");
                stats.touches += 1 + nbrs.len() as u64;
                trace.push(TraceEvent::DeletePendantPair(v, u));
                inst.commit(1);
                stats.pendant_pairs += 1;
                for y in nbrs {
                    requeue(&inst.graph, &mut buckets, y, &mut stats);
                }
            }
            _ => {
                if !rule3 {
                    continue;
                }
                let (a, b) = (inst.graph.neighbors(v)[0], inst.graph.neighbors(v)[1]);
                stats.touches += 2;
                if inst.graph.degree(a) > 2 || inst.graph.degree(b) > 2 {
                    // Re-pushed once a neighbor drops to degree 2.
                    continue;
                }
                let w = merge_at(inst, v, None, trace, None).expect("degree 2");
                stats.merges += 1;
                stats.touches += 4;
                requeue(&inst.graph, &mut buckets, w, &mut stats);
                for i in 0..inst.graph.degree(w) {
                    let y = inst.graph.neighbors(w)[i];
                    requeue(&inst.graph, &mut buckets, y, &mut stats);
                }
            }
        }
    }
    stats.pops = buckets.pops();
    stats
}

/// Pushes `y` and, if `y` has degree at most 2, its degree-2 neighbors whose
/// Rule 3 condition may now hold.
fn requeue(g: &Graph, buckets: &mut DegreeBuckets, y: Vertex, stats: &mut RuleStats) {
    let d = g.degree(y);
    if d > 2 {
        return;
    }
    buckets.push(g, y);
    for &z in g.neighbors(y) {
        stats.touches += 1;
        if g.degree(z) == 2 {
            buckets.push(g, z);
        }
    }
}

/// Rule 2 at `v`: deletes `v`, merges its two neighbors and banks one edge.
/// The neighbor of larger degree (then larger id) keeps its id. Returns the
/// merged vertex.
pub fn apply_rule2_at(
    inst: &mut Instance,
    v: Vertex,
    trace: &mut ReductionTrace,
    oracle: Option<&mut PartialAdjacency>,
) -> Result<Vertex, GraphError> {
    merge_at(inst, v, None, trace, oracle)
}

/// Rule 2 at `v` with the surviving id chosen by the caller.
pub fn apply_rule2_keeping(
    inst: &mut Instance,
    v: Vertex,
    keep: Vertex,
    trace: &mut ReductionTrace,
    oracle: Option<&mut PartialAdjacency>,
) -> Result<Vertex, GraphError> {
    merge_at(inst, v, Some(keep), trace, oracle)
}

fn merge_at(
    inst: &mut Instance,
    v: Vertex,
    keep: Option<Vertex>,
    trace: &mut ReductionTrace,
    oracle: Option<&mut PartialAdjacency>,
) -> Result<Vertex, GraphError> {
    let g = &mut inst.graph;
    if !g.is_live(v) {
        return Err(GraphError::DeadVertex(v));
    }
    if g.degree(v) != 2 {
        return Err(GraphError::WrongDegree {
            v,
            found: g.degree(v),
            expected: 2,
        });
    }
    let (a, b) = (g.neighbors(v)[0], g.neighbors(v)[1]);
    let (u, w) = match keep {
        Some(k) if k == a => (b, a),
        Some(k) if k == b => (a, b),
        Some(k) => return Err(GraphError::MissingEdge(v, k)),
        None => {
            if (g.degree(a), a) > (g.degree(b), b) {
                (b, a)
            } else {
                (a, b)
            }
        }
    };
    g.delete_vertex(v)?;
    let from_u: Vec<Vertex> = g.neighbors(u).iter().copied().filter(|&y| y != w).collect();
    g.merge_vertices(u, w)?;
    if let Some(o) = oracle {
        o.on_delete_vertex(v, &[u, w]);
        o.on_delete_edge(u, w);
        o.on_merge(u, w, &from_u);
    }
    trace.push(TraceEvent::MergeDegreeTwo { v, u, w, from_u });
    inst.commit(1);
    Ok(w)
}

/// True iff no vertex has degree at most 1 and every degree-2 vertex has a
/// neighbor of degree at least 3.
pub fn is_reduced(g: &Graph) -> bool {
    g.vertices().all(|v| match g.degree(v) {
        0 | 1 => false,
        2 => g.neighbors(v).iter().any(|&u| g.degree(u) >= 3),
        _ => true,
    })
}
