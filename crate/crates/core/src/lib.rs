//! Linear-time data reduction for maximum-cardinality matching.
//!
//! Three kernelizers shrink an instance while tracking how many matching
//! edges were committed along the way:
//!
//! - [`fes::kernelize_fes`] for graphs close to a forest by edge deletions,
//! - [`fvs::kernelize_fvs`] for graphs close to a forest by vertex deletions,
//! - [`chain::kernelize_chain`] for bipartite graphs close to a chain graph.
//!
//! Every reduction is logged in a [`ReductionTrace`] so that a matching of the
//! kernel can be turned back into one of the input.

pub mod chain;
pub mod fes;
pub mod fvs;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod matching;
pub mod rules;
pub mod solver;

pub use graph::{DegreeBuckets, Graph, GraphError, Vertex};
pub use instance::{Instance, ReductionTrace, TraceError, TraceEvent};
pub use matching::{verify_matching, Matching};

/// Output of a kernelizer.
#[derive(Clone, Debug)]
pub struct Kernel<R> {
    pub instance: Instance,
    pub trace: ReductionTrace,
    pub report: R,
}

impl<R> Kernel<R> {
    /// Renumbers the kernel graph densely and logs the renumbering, so that
    /// [`ReductionTrace::lift`] accepts matchings of the compact graph.
    /// Returns `old` with compact vertex `i` being working vertex `old[i]`.
    pub fn compact(&mut self) -> Vec<Vertex> {
        let (g, map) = self.instance.graph.compact();
        let mut old = vec![0; g.capacity()];
        for (v, new) in map.iter().enumerate() {
            if let Some(i) = new {
                old[*i] = v;
            }
        }
        self.instance.graph = g;
        self.trace.push(TraceEvent::Relabel(old.clone()));
        old
    }
}

/// Turns a matching of a kernel into one of `original`: replays `trace`,
/// dropping matched edges that a reduction added, then augments once per
/// dropped edge. A maximum kernel matching yields a maximum matching.
pub fn lift_certificate(
    trace: &ReductionTrace,
    reduced: &Matching,
    original: &Graph,
) -> Result<Matching, TraceError> {
    let (m, dropped) = trace.lift_dropping_added(reduced, original)?;
    if dropped == 0 {
        return Ok(m);
    }
    solver::solve_with_warmstart(original, &m, dropped - 1)
        .map_err(|e| TraceError::Integrity(e.to_string()))
}
