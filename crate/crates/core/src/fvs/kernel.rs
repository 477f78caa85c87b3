//! Exponential kernel for the feedback vertex number.
//!
//! After Rules 1 and 3, a maximum matching of the forest `G - X` is made to
//! leave only leaves free. Three passes then cut edges at `X`:
//!
//! 1. free-leaf reduction: an `x` with `k` free neighbors keeps only those,
//!    cascading Rule 1 through the forest while repairing the matching;
//! 2. bottommost-leaf bounding: parents of leaves matched to them keep at
//!    most `k` edges per `(x, N(leaf) ∩ X)` cell, and parents left with
//!    degree two are contracted;
//! 3. degree bounding: an edge `{x, v}` survives only if an alternating walk
//!    from `v` reaches a free vertex, a branching vertex of the pendant-free
//!    forest, or a `(x, N(w) ∩ X)` cell below `6k^2`.
//!
//! A final round of Rules 1 and 3 produces the kernel.

use std::collections::HashMap;

use serde::Serialize;

use super::approx::{approx_fvs, FeedbackVertexSet};
use super::forest::{census, matching_leaves_only, pendant_free, RootedForest};
use crate::graph::{Graph, GraphError, Vertex};
use crate::instance::{Instance, ReductionTrace, TraceEvent};
use crate::matching::Matching;
use crate::rules::{self, PartialAdjacency};
use crate::Kernel;

/// Largest `|X|` for which the subset table is used.
pub const MAX_TABLE_K: usize = 24;

/// Constant in the reported size bound `C * |X|^3 * 2^|X|` on vertices plus
/// edges of the kernel.
pub const SIZE_CONSTANT: u64 = 410;

#[derive(Clone, Debug, Default)]
pub struct FvsOptions {
    /// Feedback vertex set of the input; approximated when absent.
    pub x: Option<Vec<Vertex>>,
    /// Run all passes even when `|X| >= log2 n`.
    pub force: bool,
}

/// Why the passes after Rules 1 and 3 were skipped, if they were.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    None,
    /// `X` is empty, so Rules 1 and 3 already emptied the graph.
    EmptyX,
    /// `|X| >= log2 n`: the reduced input is already small in `2^|X|`.
    LogN,
    /// `|X|` exceeds [`MAX_TABLE_K`].
    TableCap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Milestones {
    pub free_after_reduce: usize,
    pub non_leaf_free_after_reduce: usize,
    pub free_bound: usize,
    pub bottommost_after_bound: usize,
    pub bottommost_bound: usize,
    pub free_after_bound: usize,
    pub pendants: usize,
    pub t_vertices: usize,
    pub forest_vertices: usize,
    /// `|V \ X| <= 2 |V_T| + k^2`.
    pub pendant_count_ok: bool,
    pub t_leaves_are_bottommost: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FvsReport {
    pub param: &'static str,
    pub k: usize,
    pub approximated: bool,
    pub guard: Guard,
    pub n_in: usize,
    pub m_in: usize,
    pub n_step1: usize,
    pub m_step1: usize,
    pub milestones: Option<Milestones>,
    /// Edge touches of the free-leaf pass and the edge count it started with.
    pub reduce_touches: u64,
    pub reduce_edges: usize,
    pub bound_deleted_edges: usize,
    pub bound_merges: usize,
    pub bound_table_cells: usize,
    pub keep_deleted_edges: usize,
    pub keep_table_cells: usize,
    pub keep_saturated_cells: usize,
    pub keep_max_visits: usize,
    /// Live vertices when the degree-bounding pass started.
    pub keep_vertices: usize,
    pub n_out: usize,
    pub m_out: usize,
    pub offset: usize,
    pub target_out: Option<i64>,
    pub size_bound: u64,
    pub within_bound: bool,
    pub decided_yes: bool,
}

pub fn size_bound(k: usize) -> u64 {
    let k = k as u64;
    SIZE_CONSTANT
        .saturating_mul(k.pow(3))
        .saturating_mul(1u64.checked_shl(k as u32).unwrap_or(u64::MAX))
}

pub fn kernelize_fvs(input: &Instance, opts: &FvsOptions) -> Result<Kernel<FvsReport>, GraphError> {
    let g0 = &input.graph;
    let given = match &opts.x {
        Some(x) => {
            let set = FeedbackVertexSet::new(x.clone());
            if set.vertices.iter().any(|&v| !g0.is_live(v)) || !set.is_valid_for(g0) {
                return Err(GraphError::NotAForest);
            }
            Some(set)
        }
        None => None,
    };

    let mut inst = input.clone();
    let mut trace = ReductionTrace::new();
    rules::exhaust(&mut inst, &mut trace, true);
    let (n_step1, m_step1) = (inst.graph.n_live(), inst.graph.m_live());

    let approximated = given.is_none();
    let xs = match given {
        Some(set) => map_through(&set.vertices, g0.capacity(), &trace, &inst.graph),
        None => approx_fvs(&inst.graph).vertices,
    };
    let k = xs.len();

    let mut report = FvsReport {
        param: "fvs",
        k,
        approximated,
        guard: Guard::None,
        n_in: g0.n_live(),
        m_in: g0.m_live(),
        n_step1,
        m_step1,
        milestones: None,
        reduce_touches: 0,
        reduce_edges: 0,
        bound_deleted_edges: 0,
        bound_merges: 0,
        bound_table_cells: 0,
        keep_deleted_edges: 0,
        keep_table_cells: 0,
        keep_saturated_cells: 0,
        keep_max_visits: 0,
        keep_vertices: 0,
        n_out: 0,
        m_out: 0,
        offset: 0,
        target_out: None,
        size_bound: size_bound(k),
        within_bound: false,
        decided_yes: false,
    };

    report.guard = if inst.is_trivial_yes() || k == 0 {
        Guard::EmptyX
    } else if k > MAX_TABLE_K {
        Guard::TableCap
    } else if !opts.force && (k as f64) >= (n_step1.max(1) as f64).log2() {
        Guard::LogN
    } else {
        Guard::None
    };

    if report.guard == Guard::None {
        let mut run = Passes::new(&mut inst, &mut trace, &xs);
        run.run(&mut report);
        rules::exhaust(&mut inst, &mut trace, true);
    }

    let decided = inst.is_trivial_yes();
    if decided {
        inst.canonical_yes();
    }
    let g = &inst.graph;
    report.n_out = g.n_live();
    report.m_out = g.m_live();
    report.offset = inst.offset;
    report.target_out = inst.target;
    report.decided_yes = decided;
    report.within_bound = decided || (report.n_out + report.m_out) as u64 <= report.size_bound;
    Ok(Kernel {
        instance: inst,
        trace,
        report,
    })
}

/// Follows `x` through the reductions in `trace`: a merged vertex belongs to
/// the set if any of the three vertices involved did. Deleted vertices drop
/// out.
fn map_through(x: &[Vertex], capacity: usize, trace: &ReductionTrace, g: &Graph) -> Vec<Vertex> {
    let mut in_x = vec![false; capacity];
    for &v in x {
        in_x[v] = true;
    }
    for e in &trace.events {
        if let TraceEvent::MergeDegreeTwo { v, u, w, .. } = e {
            in_x[*w] |= in_x[*u] || in_x[*v];
        }
    }
    g.vertices().filter(|&v| in_x[v]).collect()
}

/// Working state shared by the three passes.
struct Passes<'a> {
    inst: &'a mut Instance,
    trace: &'a mut ReductionTrace,
    xs: Vec<Vertex>,
    x_index: Vec<Option<usize>>,
    forest: RootedForest,
    m: Matching,
}

impl<'a> Passes<'a> {
    fn new(inst: &'a mut Instance, trace: &'a mut ReductionTrace, xs: &[Vertex]) -> Self {
        let g = &inst.graph;
        let mut in_x = vec![false; g.capacity()];
        let mut x_index = vec![None; g.capacity()];
        for (i, &x) in xs.iter().enumerate() {
            in_x[x] = true;
            x_index[x] = Some(i);
        }
        let forest = RootedForest::build(g, &in_x);
        let m = matching_leaves_only(g, &forest);
        Passes {
            inst,
            trace,
            xs: xs.to_vec(),
            x_index,
            forest,
            m,
        }
    }

    fn k(&self) -> usize {
        self.xs.len()
    }

    fn g(&self) -> &Graph {
        &self.inst.graph
    }

    fn in_x(&self, v: Vertex) -> bool {
        self.forest.in_x(v)
    }

    /// Bit code of `N(v) ∩ X`, read from the current adjacency.
    fn code(&self, v: Vertex) -> u32 {
        let mut c = 0u32;
        for &y in self.g().neighbors(v) {
            if let Some(i) = self.x_index[y] {
                c |= 1 << i;
            }
        }
        c
    }

    fn run(&mut self, report: &mut FvsReport) {
        let k = self.k();
        report.reduce_edges = self.g().m_live();
        report.reduce_touches = self.reduce_free_leaves();
        let after_reduce = census(self.g(), &self.forest, &self.m);

        let (deleted, merges, cells) = self.bound_bottommost();
        report.bound_deleted_edges = deleted;
        report.bound_merges = merges;
        report.bound_table_cells = cells;
        let after_bound = census(self.g(), &self.forest, &self.m);

        let free_bound = k * k;
        let bottommost_bound = k * k * ((1usize << k) + 1);
        let pendant_count_ok =
            after_bound.forest_vertices <= 2 * after_bound.t_vertices + free_bound;
        let holds = after_reduce.free <= free_bound
            && after_reduce.free_non_leaves == 0
            && after_bound.bottommost <= bottommost_bound
            && after_bound.free <= free_bound
            && after_bound.free_non_leaves == 0
            && pendant_count_ok
            && after_bound.t_leaves_are_bottommost;
        report.milestones = Some(Milestones {
            free_after_reduce: after_reduce.free,
            non_leaf_free_after_reduce: after_reduce.free_non_leaves,
            free_bound,
            bottommost_after_bound: after_bound.bottommost,
            bottommost_bound,
            free_after_bound: after_bound.free,
            pendants: after_bound.pendants,
            t_vertices: after_bound.t_vertices,
            forest_vertices: after_bound.forest_vertices,
            pendant_count_ok,
            t_leaves_are_bottommost: after_bound.t_leaves_are_bottommost,
            holds,
        });

        report.keep_vertices = self.g().n_live();
        let keep = self.bound_degrees();
        report.keep_deleted_edges = keep.deleted;
        report.keep_table_cells = keep.cells;
        report.keep_saturated_cells = keep.saturated;
        report.keep_max_visits = keep.max_visits;
    }

    fn delete_edge(&mut self, a: Vertex, b: Vertex) {
        self.inst.graph.delete_edge(a, b).expect("live edge");
        self.trace.push(TraceEvent::DeleteEdge(a, b));
    }

    /// Deletes the degree-1 vertex `a` and its matched neighbor `b`, banking
    /// `{a, b}`. Former neighbors of `b` are returned.
    fn delete_matched_pendant(&mut self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        self.m.remove(a, b).expect("matched pair");
        self.inst.graph.delete_vertex(a).expect("live");
        let nbrs = self.inst.graph.delete_vertex(b).expect("live");
        self.trace.push(TraceEvent::DeletePendantPair(a, b));
        self.inst.commit(1);
        nbrs
    }

    /// Free-leaf pass. Returns the number of edge touches.
    fn reduce_free_leaves(&mut self) -> u64 {
        let k = self.k();
        let mut count = vec![0usize; k];
        let mut marked: std::collections::HashSet<(Vertex, Vertex)> = Default::default();
        let mut touches = 0u64;
        let mut stack: Vec<Vertex> = {
            let g = self.g();
            let mut l: Vec<Vertex> = self
                .forest
                .vertices(g)
                .filter(|&v| self.m.is_free(v) && self.forest.is_leaf(g, v))
                .collect();
            l.reverse();
            l
        };

        while let Some(u) = stack.pop() {
            if !self.g().is_live(u)
                || self.in_x(u)
                || self.m.is_matched(u)
                || self.forest.first_child(self.g(), u).is_some()
            {
                continue;
            }
            let xn: Vec<Vertex> = self
                .g()
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&y| self.in_x(y))
                .collect();
            for x in xn {
                let xi = self.x_index[x].expect("member of X");
                if !self.g().has_edge(u, x) || marked.contains(&(x, u)) || count[xi] >= k {
                    continue;
                }
                count[xi] += 1;
                marked.insert((x, u));
                touches += 1;
                if count[xi] < k {
                    continue;
                }
                // `x` has its k free neighbors; every other edge at `x` goes.
                let nbrs = self.g().neighbors(x).to_vec();
                for y in nbrs {
                    if !self.g().has_edge(x, y) || (!self.in_x(y) && marked.contains(&(x, y))) {
                        continue;
                    }
                    self.delete_edge(x, y);
                    touches += 1;
                    if self.in_x(y) {
                        continue;
                    }
                    match self.g().degree(y) {
                        0 => stack.push(y),
                        1 if self.m.is_free(y) => stack.push(y),
                        1 => {
                            let p = self.m.partner(y).expect("matched");
                            let freed = self.delete_matched_pendant(y, p);
                            touches += freed.len() as u64;
                            self.push_free(&mut stack, &freed);
                        }
                        _ => {}
                    }
                }
            }

            match self.g().degree(u) {
                0 => {
                    self.inst.graph.delete_vertex(u).expect("live");
                    self.trace.push(TraceEvent::DeleteIsolated(u));
                }
                1 => {
                    let v = self.g().neighbors(u)[0];
                    if self.in_x(v) {
                        continue;
                    }
                    let w = self.m.partner(v).expect("maximum matching covers v");
                    self.m.remove(v, w).expect("matched");
                    self.inst.graph.delete_vertex(u).expect("live");
                    let freed = self.inst.graph.delete_vertex(v).expect("live");
                    self.trace.push(TraceEvent::DeletePendantPair(u, v));
                    self.inst.commit(1);
                    touches += 1 + freed.len() as u64;
                    self.push_free(&mut stack, &freed);
                    touches += self.repair_from(w, &mut stack);
                }
                _ => {}
            }
        }
        touches
    }

    fn push_free(&self, stack: &mut Vec<Vertex>, candidates: &[Vertex]) {
        for &z in candidates {
            if !self.in_x(z) && self.m.is_free(z) && self.g().is_live(z) {
                stack.push(z);
            }
        }
    }

    /// `w` just became free. Shifts the free vertex down an alternating path
    /// to a leaf, always through the lowest-id child, and pushes that leaf.
    /// Returns the number of matching flips.
    fn repair_from(&mut self, w: Vertex, stack: &mut Vec<Vertex>) -> u64 {
        let mut cur = w;
        let mut flips = 0;
        loop {
            let Some(c1) = self.forest.first_child(self.g(), cur) else {
                stack.push(cur);
                return flips;
            };
            flips += 1;
            match self.m.unmatch(c1) {
                None => {
                    self.m.add(cur, c1).expect("both free");
                    return flips;
                }
                Some(c2) => {
                    self.m.add(cur, c1).expect("both free");
                    cur = c2;
                }
            }
        }
    }

    /// Bottommost-leaf pass. Returns deleted edges, merges and occupied
    /// table cells.
    fn bound_bottommost(&mut self) -> (usize, usize, usize) {
        let k = self.k();
        let mut oracle = PartialAdjacency::new(self.g(), &self.xs);
        let mut tab: HashMap<(usize, u32), usize> = HashMap::new();
        let mut processed = vec![false; self.g().capacity()];
        let (mut deleted, mut merges) = (0, 0);

        let mut stack: Vec<Vertex> = {
            let g = self.g();
            let mut p: Vec<Vertex> = self
                .forest
                .vertices(g)
                .filter(|&v| self.forest.is_interesting(g, &self.m, v))
                .filter_map(|v| self.forest.parent(g, v))
                .collect();
            p.sort_unstable();
            p.dedup();
            p.reverse();
            p
        };

        while let Some(u) = stack.pop() {
            if processed[u] || !self.g().is_live(u) {
                continue;
            }
            let Some(v) = self.only_child(u) else {
                continue;
            };
            if !self.forest.is_leaf(self.g(), v) || self.m.partner(v) != Some(u) {
                continue;
            }
            processed[u] = true;
            let code = self.code(v);
            let xn: Vec<Vertex> = self
                .g()
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&y| self.in_x(y))
                .collect();
            for x in xn {
                let cell = tab
                    .entry((self.x_index[x].expect("member"), code))
                    .or_insert(0);
                if *cell < k {
                    *cell += 1;
                } else {
                    self.delete_edge(x, u);
                    oracle.on_delete_edge(x, u);
                    deleted += 1;
                }
            }

            let parent = self.forest.parent(self.g(), u);
            match (self.g().degree(u), parent) {
                (2, Some(w)) => {
                    self.m.remove(u, v).expect("matched");
                    rules::apply_rule2_keeping(self.inst, u, w, self.trace, Some(&mut oracle))
                        .expect("degree 2");
                    merges += 1;
                    if self.forest.is_interesting(self.g(), &self.m, w) {
                        if let Some(q) = self.forest.parent(self.g(), w) {
                            stack.push(q);
                        }
                    }
                }
                (1, None) => {
                    let nbrs = self.g().neighbors(v).to_vec();
                    self.delete_matched_pendant(u, v);
                    oracle.on_delete_vertex(v, &nbrs);
                }
                // A root whose other neighbor lies in X is left alone, so X
                // never absorbs forest vertices.
                _ => {}
            }
        }
        (deleted, merges, tab.len())
    }

    fn only_child(&self, u: Vertex) -> Option<Vertex> {
        let mut it = self.forest.children(self.g(), u);
        let c = it.next()?;
        it.next().is_none().then_some(c)
    }

    fn bound_degrees(&mut self) -> KeepStats {
        let k = self.k();
        let cap = 6 * k * k;
        let n = self.g().capacity();
        let (in_t, t_deg) = pendant_free(self.g(), &self.forest);
        let branching: Vec<bool> = (0..n).map(|v| in_t[v] && t_deg[v] >= 3).collect();
        let mut tab: HashMap<(usize, u32), usize> = HashMap::new();
        let mut failed = vec![0u32; n];
        let mut stats = KeepStats::default();

        for xi in 0..k {
            let x = self.xs[xi];
            let epoch = xi as u32 + 1;
            let mut visits = 0;
            let nbrs: Vec<Vertex> = self
                .g()
                .neighbors(x)
                .iter()
                .copied()
                .filter(|&v| !self.in_x(v))
                .collect();
            for v in nbrs {
                let keep = self.keep_edge(
                    x,
                    xi,
                    v,
                    &KeepContext {
                        branching: &branching,
                        cap,
                        epoch,
                    },
                    &mut tab,
                    &mut failed,
                    &mut visits,
                );
                if !keep {
                    self.delete_edge(x, v);
                    stats.deleted += 1;
                }
            }
            stats.max_visits = stats.max_visits.max(visits);
        }
        stats.cells = tab.len();
        stats.saturated = tab.values().filter(|&&c| c >= cap).count();
        stats
    }

    /// Decides whether `{x, v}` may start an augmenting path worth keeping.
    /// Explores alternating walks `v, w = M(v), u, M(u), ...` through the
    /// forest, lowest id first. Walks that failed earlier for the same `x`
    /// are not explored again.
    #[allow(clippy::too_many_arguments)]
    fn keep_edge(
        &self,
        x: Vertex,
        xi: usize,
        v: Vertex,
        ctx: &KeepContext,
        tab: &mut HashMap<(usize, u32), usize>,
        failed: &mut [u32],
        visits: &mut usize,
    ) -> bool {
        let g = self.g();
        let mut stack = vec![v];
        let mut explored = Vec::new();
        while let Some(c) = stack.pop() {
            *visits += 1;
            if failed[c] == ctx.epoch {
                continue;
            }
            explored.push(c);
            let Some(w) = self.m.partner(c) else {
                return true;
            };
            if ctx.branching[c] || ctx.branching[w] {
                return true;
            }
            let near_free = g
                .neighbors(w)
                .iter()
                .any(|&z| !self.in_x(z) && self.m.is_free(z));
            if near_free {
                return true;
            }
            let code = self.code(w);
            if code != 0 {
                let cell = tab.entry((xi, code)).or_insert(0);
                if *cell < ctx.cap {
                    *cell += 1;
                    return true;
                }
            }
            let start = stack.len();
            for &u in g.neighbors(w) {
                if u != c && !self.in_x(u) && self.m.is_matched(u) && !g.has_edge(u, x) {
                    stack.push(u);
                }
            }
            stack[start..].reverse();
        }
        for c in explored {
            failed[c] = ctx.epoch;
        }
        false
    }
}

struct KeepContext<'b> {
    branching: &'b [bool],
    cap: usize,
    epoch: u32,
}

#[derive(Default)]
struct KeepStats {
    deleted: usize,
    cells: usize,
    saturated: usize,
    max_visits: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{brute_force_optimum, max_matching_general};

    fn forced(x: Vec<Vertex>) -> FvsOptions {
        FvsOptions {
            x: Some(x),
            force: true,
        }
    }

    fn check(g: &Graph, opts: &FvsOptions) -> Kernel<FvsReport> {
        let kern = kernelize_fvs(&Instance::optimization(g.clone()), opts).unwrap();
        let before = brute_force_optimum(g).unwrap();
        let after = brute_force_optimum(&kern.instance.graph).unwrap();
        assert_eq!(before, after + kern.instance.offset);
        let lifted = kern
            .trace
            .lift(&max_matching_general(&kern.instance.graph), g)
            .unwrap();
        assert_eq!(lifted.size(), before);
        if let Some(ms) = &kern.report.milestones {
            assert!(ms.holds, "{ms:?}");
        }
        kern
    }

    #[test]
    fn forest_collapses() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)]).unwrap();
        let kern = check(&g, &FvsOptions::default());
        assert_eq!(kern.instance.graph.n_live(), 0);
        assert_eq!(kern.report.guard, Guard::EmptyX);
    }

    #[test]
    fn c5_with_target() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let kern = kernelize_fvs(&Instance::new(g, Some(2)), &FvsOptions::default()).unwrap();
        assert!(kern.report.decided_yes);
        assert_eq!(kern.instance.offset, 2);
    }

    #[test]
    fn rejects_non_feedback_set() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = kernelize_fvs(&Instance::optimization(g), &forced(vec![]));
        assert!(matches!(r, Err(GraphError::NotAForest)));
    }

    #[test]
    fn free_leaf_star_keeps_k_edges() {
        // A star centered at x = 0: Rule 1 takes one leaf with the center.
        let mut g = Graph::new(1);
        for _ in 0..5 {
            let leaf = g.add_vertex();
            g.add_edge(0, leaf).unwrap();
        }
        let kern = check(&g, &forced(vec![0]));
        assert!(kern.instance.graph.n_live() <= 1);
    }

    #[test]
    fn guard_skips_passes() {
        // K4 needs |X| = 2 = log2 4.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let kern =
            kernelize_fvs(&Instance::optimization(g.clone()), &FvsOptions::default()).unwrap();
        assert_eq!(kern.report.guard, Guard::LogN);
        assert!(kern.report.milestones.is_none());
        check(&g, &forced(vec![0, 1]));
    }

    #[test]
    fn diamond_runs_all_passes() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let kern = check(&g, &forced(vec![0]));
        assert_eq!(kern.report.guard, Guard::None);
    }

    #[test]
    fn size_bound_values() {
        assert_eq!(size_bound(0), 0);
        assert_eq!(size_bound(1), 820);
        assert_eq!(size_bound(2), 410 * 8 * 4);
    }
}
