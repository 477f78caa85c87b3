//! Decision/optimization instances and the replayable reduction log.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::matching::Matching;

/// A graph plus an optional decision target.
///
/// `offset` counts matching edges already committed by reductions, so the
/// optimum of the original graph equals the optimum of `graph` plus `offset`.
/// With `target = None` the instance is in optimization mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub target: Option<i64>,
    pub offset: usize,
}

impl Instance {
    pub fn new(graph: Graph, target: Option<usize>) -> Self {
        Instance {
            graph,
            target: target.map(|s| s as i64),
            offset: 0,
        }
    }

    pub fn optimization(graph: Graph) -> Self {
        Instance::new(graph, None)
    }

    /// Banks `edges` matching edges.
    pub fn commit(&mut self, edges: usize) {
        self.offset += edges;
        if let Some(t) = self.target.as_mut() {
            *t -= edges as i64;
        }
    }

    pub fn is_trivial_yes(&self) -> bool {
        matches!(self.target, Some(t) if t <= 0)
    }

    /// Replaces a decided-yes instance by a single vertex with target 0.
    pub fn canonical_yes(&mut self) {
        self.graph = Graph::new(1);
        self.target = Some(0);
    }

    /// Replaces the instance by a single vertex with target 1.
    pub fn canonical_no(&mut self) {
        self.graph = Graph::new(1);
        self.target = Some(1);
    }
}

/// One reduction step. Vertex ids refer to the working graph at the time the
/// event was recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    DeleteIsolated(Vertex),
    /// `v` had degree 1 with neighbor `u`; both deleted, `{v, u}` committed.
    DeletePendantPair(Vertex, Vertex),
    /// `v` had degree 2 with neighbors `u` and `w`; `v` deleted, `u` merged
    /// into `w`. `from_u` is `N(u) \ {v, w}` just before the merge.
    MergeDegreeTwo {
        v: Vertex,
        u: Vertex,
        w: Vertex,
        from_u: Vec<Vertex>,
    },
    DeleteEdge(Vertex, Vertex),
    /// Matched pair deleted with its edge committed.
    DeleteMatchedPair(Vertex, Vertex),
    /// Vertex deleted without committing anything.
    DeleteVertex(Vertex),
    AddEdge(Vertex, Vertex),
    AddVertex(Vertex),
    GadgetNote(String),
    /// The graph was renumbered densely; new vertex `i` is old vertex
    /// `old[i]`.
    Relabel(Vec<Vertex>),
}

impl TraceEvent {
    /// Matching edges this event commits.
    pub fn committed(&self) -> usize {
        match self {
            TraceEvent::DeletePendantPair(..)
            | TraceEvent::MergeDegreeTwo { .. }
            | TraceEvent::DeleteMatchedPair(..) => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub events: Vec<TraceEvent>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace does not fit the graph: {0}")]
    Integrity(String),
    #[error("malformed trace file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

const MAGIC: &[u8; 4] = b"MKTR";
const VERSION: u32 = 1;

impl ReductionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: TraceEvent) {
        self.events.push(e);
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn committed(&self) -> usize {
        self.events.iter().map(TraceEvent::committed).sum()
    }

    pub fn count(&self, pred: impl Fn(&TraceEvent) -> bool) -> usize {
        self.events.iter().filter(|e| pred(e)).count()
    }

    /// Replays the log backwards, turning a matching of the reduced graph into
    /// a matching of `original` with `committed()` more edges.
    pub fn lift(&self, reduced: &Matching, original: &Graph) -> Result<Matching, TraceError> {
        self.replay(reduced, original, false).map(|(m, _)| m)
    }

    /// Like [`lift`](Self::lift), but a matched edge that a reduction added
    /// is dropped instead of rejected. Returns the matching and the number of
    /// dropped edges; the matching is that many edges short of
    /// `reduced.size() + committed()`.
    pub fn lift_dropping_added(
        &self,
        reduced: &Matching,
        original: &Graph,
    ) -> Result<(Matching, usize), TraceError> {
        self.replay(reduced, original, true)
    }

    fn replay(
        &self,
        reduced: &Matching,
        original: &Graph,
        drop_added: bool,
    ) -> Result<(Matching, usize), TraceError> {
        let integrity = |s: String| TraceError::Integrity(s);
        let mut dropped = 0;
        let mut m = reduced.clone();
        m.grow(original.capacity());
        for e in self.events.iter().rev() {
            match e {
                TraceEvent::DeleteIsolated(v) | TraceEvent::DeleteVertex(v) => {
                    if m.is_matched(*v) {
                        return Err(integrity(format!("deleted vertex {v} is matched")));
                    }
                }
                TraceEvent::DeletePendantPair(a, b) | TraceEvent::DeleteMatchedPair(a, b) => {
                    m.add(*a, *b).map_err(|e| integrity(e.to_string()))?;
                }
                TraceEvent::MergeDegreeTwo { v, u, w, from_u } => {
                    if m.is_matched(*v) || m.is_matched(*u) {
                        return Err(integrity(format!("merged-away vertex of {v} is matched")));
                    }
                    match m.partner(*w) {
                        Some(y) if from_u.contains(&y) => {
                            m.remove(*w, y).expect("matched");
                            m.add(*u, y).expect("free");
                            m.add(*v, *w).expect("free");
                        }
                        _ => m.add(*v, *u).expect("free"),
                    }
                }
                TraceEvent::DeleteEdge(..) | TraceEvent::GadgetNote(_) => {}
                TraceEvent::AddEdge(a, b) => {
                    if m.partner(*a) == Some(*b) && drop_added {
                        m.remove(*a, *b).expect("matched");
                        dropped += 1;
                    } else if m.partner(*a) == Some(*b) {
                        return Err(integrity(format!("added edge {{{a}, {b}}} is matched")));
                    }
                }
                TraceEvent::AddVertex(v) => {
                    if m.is_matched(*v) {
                        return Err(integrity(format!("added vertex {v} is matched")));
                    }
                }
                TraceEvent::Relabel(old) => {
                    let mut back = Matching::new(original.capacity());
                    for (a, b) in m.pairs() {
                        let (Some(&oa), Some(&ob)) = (old.get(a), old.get(b)) else {
                            return Err(integrity(format!("relabel misses {a} or {b}")));
                        };
                        back.add(oa, ob).map_err(|e| integrity(e.to_string()))?;
                    }
                    back.grow(m.capacity());
                    m = back;
                }
            }
        }
        if m.capacity() > original.capacity() {
            let extra = (original.capacity()..m.capacity()).any(|v| m.is_matched(v));
            if extra {
                return Err(integrity(
                    "matching uses vertices outside the original".into(),
                ));
            }
        }
        let mut out = Matching::new(original.capacity());
        for (a, b) in m.pairs() {
            out.add(a, b).expect("disjoint");
        }
        out.validate(original)
            .map_err(|e| integrity(e.to_string()))?;
        if out.size() + dropped != reduced.size() + self.committed() {
            return Err(integrity(format!(
                "lifted size {} != {} + {} - {dropped}",
                out.size(),
                reduced.size(),
                self.committed()
            )));
        }
        Ok((out, dropped))
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        put(w, self.events.len() as u64)?;
        for e in &self.events {
            match e {
                TraceEvent::DeleteIsolated(v) => tagged(w, 0, &[*v])?,
                TraceEvent::DeletePendantPair(a, b) => tagged(w, 1, &[*a, *b])?,
                TraceEvent::MergeDegreeTwo { v, u, w: x, from_u } => {
                    tagged(w, 2, &[*v, *u, *x, from_u.len()])?;
                    for &y in from_u {
                        put(w, y as u64)?;
                    }
                }
                TraceEvent::DeleteEdge(a, b) => tagged(w, 3, &[*a, *b])?,
                TraceEvent::DeleteMatchedPair(a, b) => tagged(w, 4, &[*a, *b])?,
                TraceEvent::GadgetNote(s) => {
                    tagged(w, 5, &[s.len()])?;
                    w.write_all(s.as_bytes())?;
                }
                TraceEvent::DeleteVertex(v) => tagged(w, 6, &[*v])?,
                TraceEvent::AddEdge(a, b) => tagged(w, 7, &[*a, *b])?,
                TraceEvent::AddVertex(v) => tagged(w, 8, &[*v])?,
                TraceEvent::Relabel(old) => {
                    tagged(w, 9, &[old.len()])?;
                    for &v in old {
                        put(w, v as u64)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("in-memory write");
        buf
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self, TraceError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(TraceError::Format("bad magic".into()));
        }
        let mut ver = [0u8; 4];
        r.read_exact(&mut ver)?;
        let ver = u32::from_le_bytes(ver);
        if ver != VERSION {
            return Err(TraceError::Format(format!("unsupported version {ver}")));
        }
        let n = get(r)?;
        let mut events = Vec::new();
        for _ in 0..n {
            let mut tag = [0u8; 1];
            r.read_exact(&mut tag)?;
            let e = match tag[0] {
                0 => TraceEvent::DeleteIsolated(get(r)?),
                1 => TraceEvent::DeletePendantPair(get(r)?, get(r)?),
                2 => {
                    let (v, u, w, len) = (get(r)?, get(r)?, get(r)?, get(r)?);
                    let from_u = (0..len).map(|_| get(r)).collect::<Result<_, _>>()?;
                    TraceEvent::MergeDegreeTwo { v, u, w, from_u }
                }
                3 => TraceEvent::DeleteEdge(get(r)?, get(r)?),
                4 => TraceEvent::DeleteMatchedPair(get(r)?, get(r)?),
                5 => {
                    let len: usize = get(r)?;
                    let mut bytes = vec![0u8; len];
                    r.read_exact(&mut bytes)?;
                    let s = String::from_utf8(bytes)
                        .map_err(|_| TraceError::Format("note is not UTF-8".into()))?;
                    TraceEvent::GadgetNote(s)
                }
                6 => TraceEvent::DeleteVertex(get(r)?),
                7 => TraceEvent::AddEdge(get(r)?, get(r)?),
                8 => TraceEvent::AddVertex(get(r)?),
                9 => {
                    let len: usize = get(r)?;
                    TraceEvent::Relabel((0..len).map(|_| get(r)).collect::<Result<_, _>>()?)
                }
                t => return Err(TraceError::Format(format!("unknown event tag {t}"))),
            };
            events.push(e);
        }
        Ok(ReductionTrace { events })
    }
}

fn put<W: Write>(w: &mut W, x: u64) -> io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

fn tagged<W: Write>(w: &mut W, tag: u8, fields: &[usize]) -> io::Result<()> {
    w.write_all(&[tag])?;
    for &f in fields {
        put(w, f as u64)?;
    }
    Ok(())
}

fn get<R: Read>(r: &mut R) -> Result<usize, TraceError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    usize::try_from(u64::from_le_bytes(b)).map_err(|_| TraceError::Format("field overflow".into()))
}
