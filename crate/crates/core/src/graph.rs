//! Mutable simple graph with stable vertex ids.
//!
//! Vertices are dense ids `0..capacity`. Deleting a vertex marks it dead and
//! never renumbers the rest; [`Graph::compact`] produces a renumbered copy.
//! Adjacency lists are kept sorted so that "lowest id first" tie-breaking
//! falls out of plain iteration.

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not live")]
    DeadVertex(Vertex),
    #[error("edge {{{0}, {1}}} does not exist")]
    MissingEdge(Vertex, Vertex),
    #[error("edge {{{0}, {1}}} already exists")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("cannot merge vertex {0} with itself")]
    SelfMerge(Vertex),
    #[error("vertex {v} has degree {found}, expected {expected}")]
    WrongDegree {
        v: Vertex,
        found: usize,
        expected: usize,
    },
    #[error("graph contains a cycle")]
    NotAForest,
    #[error("instance too large for exhaustive search ({edges} edges, limit {limit})")]
    TooLarge { edges: usize, limit: usize },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("edge {{{0}, {1}}} joins two vertices on the same side")]
    NotBipartite(Vertex, Vertex),
    #[error("graph minus the deletion set is not a chain graph")]
    NotAChainGraph,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    alive: Vec<bool>,
    n_live: usize,
    m_live: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            n_live: n,
            m_live: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Number of ids ever handed out, live or dead.
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    pub fn n_live(&self) -> usize {
        self.n_live
    }

    pub fn m_live(&self) -> usize {
        self.m_live
    }

    pub fn is_live(&self, v: Vertex) -> bool {
        v < self.alive.len() && self.alive[v]
    }

    /// Degree of `v`; dead or unknown ids report 0.
    pub fn degree(&self, v: Vertex) -> usize {
        if self.is_live(v) {
            self.adj[v].len()
        } else {
            0
        }
    }

    /// Sorted neighbor list. Empty for dead ids.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        if self.is_live(v) {
            &self.adj[v]
        } else {
            &[]
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.is_live(u) && self.is_live(v) && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.adj.len()).filter(move |&v| self.alive[v])
    }

    /// Live edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u]
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.n_live += 1;
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.require_live(u)?;
        self.require_live(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u, v)),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m_live += 1;
                Ok(())
            }
        }
    }

    /// Removes `v` and its incident edges. Returns the former neighbors.
    pub fn delete_vertex(&mut self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.require_live(v)?;
        let nbrs = std::mem::take(&mut self.adj[v]);
        for &u in &nbrs {
            remove_sorted(&mut self.adj[u], v);
        }
        self.m_live -= nbrs.len();
        self.alive[v] = false;
        self.n_live -= 1;
        Ok(nbrs)
    }

    pub fn delete_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        remove_sorted(&mut self.adj[u], v);
        remove_sorted(&mut self.adj[v], u);
        self.m_live -= 1;
        Ok(())
    }

    /// Deletes every edge `{x, y}` for which `keep(y)` is false. Returns the
    /// removed neighbors in increasing order.
    pub fn retain_neighbors<F>(&mut self, x: Vertex, mut keep: F) -> Result<Vec<Vertex>, GraphError>
    where
        F: FnMut(Vertex) -> bool,
    {
        self.require_live(x)?;
        let mut removed = Vec::new();
        let mut kept = Vec::with_capacity(self.adj[x].len());
        for &y in &self.adj[x] {
            if keep(y) {
                kept.push(y);
            } else {
                removed.push(y);
            }
        }
        for &y in &removed {
            remove_sorted(&mut self.adj[y], x);
        }
        self.m_live -= removed.len();
        self.adj[x] = kept;
        Ok(removed)
    }

    /// Contracts `u` into `w`. The merged vertex keeps the id `w` and gets
    /// neighborhood `(N(u) ∪ N(w)) \ {u, w}`.
    pub fn merge_vertices(&mut self, u: Vertex, w: Vertex) -> Result<Vertex, GraphError> {
        if u == w {
            return Err(GraphError::SelfMerge(u));
        }
        self.require_live(u)?;
        self.require_live(w)?;
        let nu = self.delete_vertex(u)?;
        for y in nu {
            if y != w && !self.has_edge(w, y) {
                self.add_edge(w, y)?;
            }
        }
        Ok(w)
    }

    /// Renumbers live vertices densely. `map[old] = Some(new)` for live ids.
    pub fn compact(&self) -> (Graph, Vec<Option<Vertex>>) {
        let mut map = vec![None; self.capacity()];
        let mut next = 0;
        for v in self.vertices() {
            map[v] = Some(next);
            next += 1;
        }
        let mut g = Graph::new(next);
        for (u, v) in self.edges() {
            let (a, b) = (map[u].unwrap(), map[v].unwrap());
            g.adj[a].push(b);
            g.adj[b].push(a);
            g.m_live += 1;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        (g, map)
    }

    /// Copy containing only live vertices with `keep(v)`; ids are preserved.
    pub fn induced<F: Fn(Vertex) -> bool>(&self, keep: F) -> Graph {
        let mut g = self.clone();
        for v in self.vertices() {
            if !keep(v) {
                g.delete_vertex(v).expect("live");
            }
        }
        g
    }

    /// Number of connected components among live vertices.
    pub fn components(&self) -> usize {
        let mut seen = vec![false; self.capacity()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &u in &self.adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }

    pub fn is_forest(&self) -> bool {
        self.m_live + self.components() == self.n_live
    }

    /// Audits symmetry, simplicity, sortedness and the handshake identity.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut degree_sum = 0;
        let mut live = 0;
        for v in 0..self.capacity() {
            if !self.alive[v] {
                if !self.adj[v].is_empty() {
                    return Err(format!("dead vertex {v} has neighbors"));
                }
                continue;
            }
            live += 1;
            let list = &self.adj[v];
            degree_sum += list.len();
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("adjacency of {v} not strictly sorted"));
                }
            }
            for &u in list {
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.is_live(u) {
                    return Err(format!("{v} adjacent to dead vertex {u}"));
                }
                if self.adj[u].binary_search(&v).is_err() {
                    return Err(format!("edge {{{v}, {u}}} not symmetric"));
                }
            }
        }
        if live != self.n_live {
            return Err(format!("n_live {} but {live} live vertices", self.n_live));
        }
        if degree_sum != 2 * self.m_live {
            return Err(format!("degree sum {degree_sum} != 2 * {}", self.m_live));
        }
        Ok(())
    }

    fn require_live(&self, v: Vertex) -> Result<(), GraphError> {
        if self.is_live(v) {
            Ok(())
        } else {
            Err(GraphError::DeadVertex(v))
        }
    }
}

fn remove_sorted(list: &mut Vec<Vertex>, v: Vertex) {
    if let Ok(pos) = list.binary_search(&v) {
        list.remove(pos);
    }
}

/// Stacks of candidate vertices of degree 0, 1 and 2 with lazy deletion.
///
/// Entries are not removed when a vertex changes degree; `pop_low_degree`
/// discards entries whose vertex is dead or no longer has the bucket's degree.
/// Callers push a vertex again whenever its degree drops to 2 or below.
#[derive(Clone, Debug, Default)]
pub struct DegreeBuckets {
    stacks: [Vec<Vertex>; 3],
    pops: u64,
}

impl DegreeBuckets {
    pub fn new(g: &Graph) -> Self {
        let mut b = DegreeBuckets::default();
        for v in (0..g.capacity()).rev() {
            b.push(g, v);
        }
        b
    }

    /// Records `v` if it is live with degree at most 2.
    pub fn push(&mut self, g: &Graph, v: Vertex) {
        if g.is_live(v) {
            let d = g.degree(v);
            if d <= 2 {
                self.stacks[d].push(v);
            }
        }
    }

    /// A live vertex of degree 0, else 1, else 2.
    pub fn pop_low_degree(&mut self, g: &Graph) -> Option<(Vertex, usize)> {
        for d in 0..3 {
            while let Some(v) = self.stacks[d].pop() {
                self.pops += 1;
                if g.is_live(v) && g.degree(v) == d {
                    return Some((v, d));
                }
            }
        }
        None
    }

    /// Total entries popped so far, stale ones included.
    pub fn pops(&self) -> u64 {
        self.pops
    }
}
