//! Reduction rules for bipartite graphs with a chain deletion set `X`.
//!
//! Everything is computed once from the chain graph `G - X`, its ordering and
//! its parallel matching `M`. Matched pairs are indexed left to right, so pair
//! `i` holds the `(α - s + i)`-th A-vertex and the `(β - 1 - i)`-th B-vertex.
//! Rules 7 and 8 and the boundary step only delete vertices and add edges
//! between vertices they keep, so their decisions do not depend on the order
//! in which they are carried out.

use serde::Serialize;

use super::order::ChainOrdering;
use crate::graph::{Graph, Vertex};
use crate::instance::{Instance, ReductionTrace, TraceEvent};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
}

/// Decision shortcut: `|M_{G-X}| >= s` means yes; `s > |M_{G-X}| + k` means
/// no, since deleting `k` vertices costs at most `k` matching edges.
pub fn rule5_size_bounds(target: Option<i64>, m_gx: usize, k: usize) -> Option<Verdict> {
    let t = target?;
    if m_gx as i64 >= t {
        Some(Verdict::Yes)
    } else if t > (m_gx + k) as i64 {
        Some(Verdict::No)
    } else {
        None
    }
}

/// Sparse table for range minima.
#[derive(Clone, Debug)]
struct RangeMin {
    levels: Vec<Vec<usize>>,
}

impl RangeMin {
    fn new(values: &[usize]) -> Self {
        let mut levels = vec![values.to_vec()];
        let mut w = 1;
        while 2 * w <= values.len() {
            let prev = levels.last().unwrap();
            let next = (0..=values.len() - 2 * w)
                .map(|i| prev[i].min(prev[i + w]))
                .collect();
            levels.push(next);
            w *= 2;
        }
        RangeMin { levels }
    }

    /// Minimum over `lo..=hi`.
    fn min(&self, lo: usize, hi: usize) -> usize {
        let len = hi - lo + 1;
        let j = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        self.levels[j][lo].min(self.levels[j][hi + 1 - (1 << j)])
    }
}

/// Per-pair lmv/rmv values of the parallel matching, kept-set flags and the
/// small neighborhoods of `X`.
#[derive(Clone, Debug)]
pub struct BufferContext {
    /// Matched pairs `(a, b)` of `M`, leftmost first.
    pub pairs: Vec<(Vertex, Vertex)>,
    /// `lmv[i]`: neighbors of `b_i` in `G - X` strictly left of `a_i`.
    pub lmv: Vec<usize>,
    /// `rmv[i]`: neighbors of `a_i` in `G - X` ranked below `b_i`.
    pub rmv: Vec<usize>,
    lmv_min: RangeMin,
    rmv_min: RangeMin,
    pair_of: Vec<usize>,
    /// Free A-vertices of `G - X`, leftmost first.
    pub free_a: Vec<Vertex>,
    /// Free B-vertices of `G - X`, by increasing rank.
    pub free_b: Vec<Vertex>,
    pub kept: Vec<bool>,
    /// `(x, N_small(x))` for every `x` in `X`.
    pub n_small: Vec<(Vertex, Vec<Vertex>)>,
    /// Cap on buffer sizes, the size of `X`.
    pub k: usize,
}

impl BufferContext {
    /// `h` is `G - X`, `pairs` its parallel matching and `g` the full graph.
    pub fn new(
        g: &Graph,
        h: &Graph,
        co: &ChainOrdering,
        pairs: Vec<(Vertex, Vertex)>,
        x: &[Vertex],
    ) -> Self {
        let n = g.capacity();
        let k = x.len();
        let rank = |v: Vertex| co.rank(v).expect("ordered vertex");
        let mut pair_of = vec![NONE; n];
        let mut lmv = Vec::with_capacity(pairs.len());
        let mut rmv = Vec::with_capacity(pairs.len());
        for (i, &(a, b)) in pairs.iter().enumerate() {
            pair_of[a] = i;
            pair_of[b] = i;
            let (ra, rb) = (rank(a), rank(b));
            lmv.push(h.neighbors(b).iter().filter(|&&y| rank(y) < ra).count());
            rmv.push(h.neighbors(a).iter().filter(|&&y| rank(y) < rb).count());
        }
        let s = pairs.len();
        let free_a = co.order_a[..co.order_a.len() - s].to_vec();
        let free_b = co.order_b[..co.order_b.len() - s].to_vec();

        let mut in_x = vec![false; n];
        for &v in x {
            in_x[v] = true;
        }
        let mut kept = vec![false; n];
        let mut n_small = Vec::with_capacity(k);
        for &xv in x {
            let mut outside: Vec<Vertex> = g
                .neighbors(xv)
                .iter()
                .copied()
                .filter(|&y| !in_x[y])
                .collect();
            outside.sort_by_key(|&y| (rank(y), y));
            outside.truncate(k);
            for &y in &outside {
                kept[y] = true;
                if pair_of[y] != NONE {
                    let (a, b) = pairs[pair_of[y]];
                    kept[a] = true;
                    kept[b] = true;
                }
            }
            n_small.push((xv, outside));
        }
        BufferContext {
            lmv_min: RangeMin::new(&lmv),
            rmv_min: RangeMin::new(&rmv),
            pairs,
            lmv,
            rmv,
            pair_of,
            free_a,
            free_b,
            kept,
            n_small,
            k,
        }
    }

    /// Pair index of a matched vertex.
    pub fn pair_of(&self, v: Vertex) -> Option<usize> {
        match self.pair_of.get(v) {
            Some(&i) if i != NONE => Some(i),
            _ => None,
        }
    }

    /// Minimum lmv over pairs `lo..=hi`.
    pub fn lmv_range(&self, lo: usize, hi: usize) -> usize {
        self.lmv_min.min(lo, hi)
    }

    /// Minimum rmv over pairs `lo..=hi`.
    pub fn rmv_range(&self, lo: usize, hi: usize) -> usize {
        self.rmv_min.min(lo, hi)
    }

    /// Indices of pairs in `K`, increasing.
    pub fn kept_pairs(&self) -> Vec<usize> {
        (0..self.pairs.len())
            .filter(|&i| self.kept[self.pairs[i].0])
            .collect()
    }

    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }
}

/// Rule 6: each `x` keeps its edges to `X` and to `N_small(x)`, the `k`
/// lowest-ranked neighbors outside `X`. Returns the number of deleted edges.
pub fn rule6_reduce_x_neighborhoods(
    inst: &mut Instance,
    ctx: &BufferContext,
    in_x: &[bool],
    trace: &mut ReductionTrace,
) -> usize {
    let mut deleted = 0;
    for (x, small) in &ctx.n_small {
        let removed = inst
            .graph
            .retain_neighbors(*x, |y| in_x[y] || small.contains(&y))
            .expect("X is live");
        for y in removed {
            trace.push(TraceEvent::DeleteEdge(*x, y));
            deleted += 1;
        }
    }
    deleted
}

/// Outcome of one buffer-limit application.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GapCut {
    /// Pair range `lo..=hi` strictly between the two kept pairs.
    pub lo: usize,
    pub hi: usize,
    /// Buffer size `min(lmv, k)`.
    pub buffer: usize,
    pub deleted_pairs: usize,
    /// Bypass edges, A-vertex first.
    pub bypass: Vec<(Vertex, Vertex)>,
}

/// Keeps `buffer` pairs at each end of `lo..=hi`, deletes the pairs between
/// them with their edges committed, and joins every A-vertex of the left
/// buffer to every B-vertex of the right buffer.
fn cut_gap(
    inst: &mut Instance,
    ctx: &BufferContext,
    lo: usize,
    hi: usize,
    buffer: usize,
    trace: &mut ReductionTrace,
) -> Option<GapCut> {
    let len = hi + 1 - lo;
    if len < 2 * buffer + 1 {
        return None;
    }
    let mut cut = GapCut {
        lo,
        hi,
        buffer,
        ..GapCut::default()
    };
    for &(a, b) in &ctx.pairs[lo + buffer..=hi - buffer] {
        inst.graph.delete_vertex(a).expect("live pair");
        inst.graph.delete_vertex(b).expect("live pair");
        inst.commit(1);
        trace.push(TraceEvent::DeleteMatchedPair(a, b));
        cut.deleted_pairs += 1;
    }
    for &(a, _) in &ctx.pairs[lo..lo + buffer] {
        for &(_, b) in &ctx.pairs[hi + 1 - buffer..=hi] {
            if !inst.graph.has_edge(a, b) {
                inst.graph.add_edge(a, b).expect("fresh edge");
                trace.push(TraceEvent::AddEdge(a, b));
                cut.bypass.push((a, b));
            }
        }
    }
    Some(cut)
}

/// Rule 7: between consecutive kept pairs, at most `min(lmv, k)` alternating
/// paths can cross, so only that many pairs are needed on either side; the
/// rest are deleted and the two buffers joined by bypass edges.
pub fn rule7_buffer_limit(
    inst: &mut Instance,
    ctx: &BufferContext,
    trace: &mut ReductionTrace,
) -> Vec<GapCut> {
    let kept = ctx.kept_pairs();
    let mut cuts = Vec::new();
    for w in kept.windows(2) {
        let (lo, hi) = (w[0] + 1, w[1]);
        if lo == hi {
            continue;
        }
        let hi = hi - 1;
        let buffer = ctx.lmv_range(lo, hi).min(ctx.k);
        cuts.extend(cut_gap(inst, ctx, lo, hi, buffer, trace));
    }
    cuts
}

/// Rule 8: free vertices outside `K` are deleted, except the `k` rightmost
/// free A-vertices and the `k` highest-ranked free B-vertices. Returns the
/// number of deleted vertices.
pub fn rule8_bound_free(
    inst: &mut Instance,
    ctx: &BufferContext,
    trace: &mut ReductionTrace,
) -> usize {
    let mut deleted = 0;
    for free in [&ctx.free_a, &ctx.free_b] {
        let spare = free.len().saturating_sub(ctx.k);
        for &v in &free[..spare] {
            if !ctx.kept[v] {
                inst.graph.delete_vertex(v).expect("live free vertex");
                trace.push(TraceEvent::DeleteVertex(v));
                deleted += 1;
            }
        }
    }
    deleted
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryOutcome {
    pub left: Option<GapCut>,
    pub right: Option<GapCut>,
    /// No pair is kept, so no alternating path can use a matched pair and
    /// all of them were banked.
    pub banked_all: usize,
}

/// Buffer limit for the pairs before the first and after the last kept pair.
///
/// This simulates a matched pair `(a_l, b_l)` in `K` placed left of every
/// matched pair: `b_l` sees all of `A \ X`, and `a_l` sits between the free and
/// the matched A-vertices with the neighborhood of the rightmost free
/// A-vertex. Such a pair adds one to lmv of every `b` adjacent to that
/// vertex. The right end is mirrored with a pair that adds nothing to lmv.
/// The simulated vertices never enter the graph.
pub fn boundary_limit(
    inst: &mut Instance,
    ctx: &BufferContext,
    h: &Graph,
    trace: &mut ReductionTrace,
) -> BoundaryOutcome {
    let kept = ctx.kept_pairs();
    let s = ctx.pairs.len();
    let mut out = BoundaryOutcome::default();
    let (Some(&first), Some(&last)) = (kept.first(), kept.last()) else {
        for &(a, b) in &ctx.pairs {
            inst.graph.delete_vertex(a).expect("live pair");
            inst.graph.delete_vertex(b).expect("live pair");
            inst.commit(1);
            trace.push(TraceEvent::DeleteMatchedPair(a, b));
        }
        out.banked_all = s;
        return out;
    };
    if first > 0 {
        let a_free = ctx.free_a.last().copied();
        let lmv = (0..first)
            .map(|i| {
                let b = ctx.pairs[i].1;
                ctx.lmv[i] + a_free.is_some_and(|a| h.has_edge(a, b)) as usize
            })
            .min()
            .unwrap();
        trace.push(TraceEvent::GadgetNote(format!(
            "left boundary pair before pairs 0..{first}"
        )));
        out.left = cut_gap(inst, ctx, 0, first - 1, lmv.min(ctx.k), trace);
    }
    if last + 1 < s {
        let lo = last + 1;
        trace.push(TraceEvent::GadgetNote(format!(
            "right boundary pair after pairs {lo}..{s}"
        )));
        let buffer = ctx.lmv_range(lo, s - 1).min(ctx.k);
        out.right = cut_gap(inst, ctx, lo, s - 1, buffer, trace);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule5_bounds() {
        assert_eq!(rule5_size_bounds(Some(4), 4, 2), Some(Verdict::Yes));
        assert_eq!(rule5_size_bounds(Some(7), 4, 2), Some(Verdict::No));
        assert_eq!(rule5_size_bounds(Some(5), 4, 2), None);
        assert_eq!(rule5_size_bounds(None, 4, 2), None);
    }

    #[test]
    fn range_min_matches_scan() {
        let values = [5, 3, 8, 1, 9, 2, 7, 7, 0, 4, 6];
        let rm = RangeMin::new(&values);
        for lo in 0..values.len() {
            for hi in lo..values.len() {
                assert_eq!(rm.min(lo, hi), *values[lo..=hi].iter().min().unwrap());
            }
        }
    }
}
