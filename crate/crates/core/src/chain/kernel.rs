//! Cubic-vertex kernel for bipartite graphs close to a chain graph.

use serde::Serialize;

use super::order::{approx_chain_deletion, chain_order, parallel_pairs, Bipartition};
use super::rules::{
    boundary_limit, rule5_size_bounds, rule6_reduce_x_neighborhoods, rule7_buffer_limit,
    rule8_bound_free, BufferContext, GapCut, Verdict,
};
use crate::graph::{Graph, GraphError, Vertex};
use crate::instance::{Instance, ReductionTrace};
use crate::matching::Matching;
use crate::rules;
use crate::solver::solve_with_warmstart;
use crate::Kernel;

/// Extra vertices allowed on top of `|X| + 2k + 4k^3` for the two boundary
/// regions.
pub const BOUNDARY_SLACK: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub param: &'static str,
    pub k: usize,
    pub approximated: bool,
    pub n_in: usize,
    pub m_in: usize,
    /// Size of the parallel maximum matching of `G - X`.
    pub matching_gx: usize,
    pub verdict: Option<Verdict>,
    pub kept: usize,
    pub rule6_deleted_edges: usize,
    pub rule7_applications: usize,
    pub rule7_deleted_pairs: usize,
    pub bypass_edges: usize,
    pub rule8_deleted_vertices: usize,
    pub boundary_deleted_pairs: usize,
    pub final_rule_applications: usize,
    pub n_out: usize,
    pub m_out: usize,
    pub offset: usize,
    pub target_out: Option<i64>,
    /// `|X| + 2k + 4k^3`.
    pub size_bound: usize,
    pub boundary_slack: usize,
    pub within_bound: bool,
}

/// `|X| + 2k + 4k^3` with `k = |X|`.
pub fn size_bound(k: usize) -> usize {
    k + 2 * k + 4 * k.pow(3)
}

/// Deletion set, validated or approximated.
fn deletion_set(
    g: &Graph,
    parts: &Bipartition,
    x: Option<&[Vertex]>,
) -> Result<(Vec<Vertex>, bool), GraphError> {
    match x {
        Some(x) => {
            let mut x = x.to_vec();
            x.sort_unstable();
            x.dedup();
            for &v in &x {
                if !g.is_live(v) {
                    return Err(GraphError::DeadVertex(v));
                }
            }
            Ok((x, false))
        }
        None => Ok((approx_chain_deletion(g, parts)?, true)),
    }
}

/// Runs the chain pipeline. With `x` absent a deletion set is approximated.
///
/// In decision mode Rule 5 may decide the instance outright; the kernel is
/// then the canonical yes- or no-instance.
pub fn kernelize_chain(
    input: &Instance,
    parts: &Bipartition,
    x: Option<&[Vertex]>,
) -> Result<Kernel<ChainReport>, GraphError> {
    let g = &input.graph;
    parts.check(g)?;
    let (x, approximated) = deletion_set(g, parts, x)?;
    let mut in_x = vec![false; g.capacity()];
    for &v in &x {
        in_x[v] = true;
    }
    let h = g.induced(|v| !in_x[v]);
    let co = chain_order(&h, parts)?.ok_or(GraphError::NotAChainGraph)?;
    let pairs = parallel_pairs(&h, &co);
    let k = x.len();

    let mut inst = input.clone();
    let mut trace = ReductionTrace::new();
    let mut report = ChainReport {
        param: "chain",
        k,
        approximated,
        n_in: g.n_live(),
        m_in: g.m_live(),
        matching_gx: pairs.len(),
        verdict: None,
        kept: 0,
        rule6_deleted_edges: 0,
        rule7_applications: 0,
        rule7_deleted_pairs: 0,
        bypass_edges: 0,
        rule8_deleted_vertices: 0,
        boundary_deleted_pairs: 0,
        final_rule_applications: 0,
        n_out: 0,
        m_out: 0,
        offset: 0,
        target_out: None,
        size_bound: size_bound(k),
        boundary_slack: BOUNDARY_SLACK,
        within_bound: true,
    };

    report.verdict = rule5_size_bounds(inst.target, pairs.len(), k);
    match report.verdict {
        Some(Verdict::Yes) => inst.canonical_yes(),
        Some(Verdict::No) => inst.canonical_no(),
        None => {
            let ctx = BufferContext::new(g, &h, &co, pairs, &x);
            report.kept = ctx.kept_count();
            report.rule6_deleted_edges =
                rule6_reduce_x_neighborhoods(&mut inst, &ctx, &in_x, &mut trace);
            let cuts = rule7_buffer_limit(&mut inst, &ctx, &mut trace);
            report.rule7_applications = cuts.len();
            report.rule7_deleted_pairs = cuts.iter().map(|c| c.deleted_pairs).sum();
            report.bypass_edges = cuts.iter().map(|c| c.bypass.len()).sum();
            report.rule8_deleted_vertices = rule8_bound_free(&mut inst, &ctx, &mut trace);
            let boundary = boundary_limit(&mut inst, &ctx, &h, &mut trace);
            let ends: Vec<&GapCut> = boundary.left.iter().chain(&boundary.right).collect();
            report.boundary_deleted_pairs =
                boundary.banked_all + ends.iter().map(|c| c.deleted_pairs).sum::<usize>();
            report.bypass_edges += ends.iter().map(|c| c.bypass.len()).sum::<usize>();
            let stats = rules::exhaust(&mut inst, &mut trace, true);
            report.final_rule_applications = stats.applications();
            if inst.is_trivial_yes() {
                inst.canonical_yes();
                report.verdict = Some(Verdict::Yes);
            }
        }
    }
    report.n_out = inst.graph.n_live();
    report.m_out = inst.graph.m_live();
    report.offset = inst.offset;
    report.target_out = inst.target;
    report.within_bound = report.n_out <= report.size_bound + BOUNDARY_SLACK;
    Ok(Kernel {
        instance: inst,
        trace,
        report,
    })
}

/// Maximum matching of `g`: the parallel matching of `G - X` augmented at
/// most `|X|` times.
pub fn chain_certificate(
    g: &Graph,
    parts: &Bipartition,
    x: &[Vertex],
) -> Result<Matching, GraphError> {
    let mut in_x = vec![false; g.capacity()];
    for &v in x {
        in_x[v] = true;
    }
    let h = g.induced(|v| !in_x[v]);
    let co = chain_order(&h, parts)?.ok_or(GraphError::NotAChainGraph)?;
    let m0 = Matching::from_pairs(g.capacity(), &parallel_pairs(&h, &co))?;
    solve_with_warmstart(g, &m0, x.len())
}
