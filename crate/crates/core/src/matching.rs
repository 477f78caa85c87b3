use crate::graph::{Graph, GraphError, Vertex};

/// Set of disjoint edges with partner lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    partner: Vec<Option<Vertex>>,
    size: usize,
}

impl Matching {
    pub fn new(capacity: usize) -> Self {
        Matching {
            partner: vec![None; capacity],
            size: 0,
        }
    }

    pub fn from_pairs(capacity: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut m = Matching::new(capacity);
        for &(u, v) in pairs {
            m.add(u, v)?;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn capacity(&self) -> usize {
        self.partner.len()
    }

    pub fn grow(&mut self, capacity: usize) {
        if capacity > self.partner.len() {
            self.partner.resize(capacity, None);
        }
    }

    pub fn partner(&self, v: Vertex) -> Option<Vertex> {
        self.partner.get(v).copied().flatten()
    }

    pub fn is_matched(&self, v: Vertex) -> bool {
        self.partner(v).is_some()
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        !self.is_matched(v)
    }

    /// Matched pairs `(u, v)` with `u < v`, ordered by `u`.
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(u, p)| match *p {
                Some(v) if u < v => Some((u, v)),
                _ => None,
            })
            .collect()
    }

    /// Adds `{u, v}`; both endpoints must be free.
    pub fn add(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::InvalidMatching(format!("pair {{{u}, {u}}}")));
        }
        self.grow(u.max(v) + 1);
        if self.partner[u].is_some() || self.partner[v].is_some() {
            return Err(GraphError::InvalidMatching(format!(
                "pair {{{u}, {v}}} overlaps an existing pair"
            )));
        }
        self.partner[u] = Some(v);
        self.partner[v] = Some(u);
        self.size += 1;
        Ok(())
    }

    /// Removes `{u, v}`; it must be a matched pair.
    pub fn remove(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if self.partner(u) != Some(v) {
            return Err(GraphError::InvalidMatching(format!(
                "{{{u}, {v}}} is not matched"
            )));
        }
        self.partner[u] = None;
        self.partner[v] = None;
        self.size -= 1;
        Ok(())
    }

    /// Unmatches `v` if matched, returning its former partner.
    pub fn unmatch(&mut self, v: Vertex) -> Option<Vertex> {
        let p = self.partner(v)?;
        self.partner[v] = None;
        self.partner[p] = None;
        self.size -= 1;
        Some(p)
    }

    /// Checks that the partner map is symmetric and every pair is a live edge.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        let mut count = 0;
        for (u, p) in self.partner.iter().enumerate() {
            let Some(v) = *p else { continue };
            if self.partner(v) != Some(u) {
                return Err(GraphError::InvalidMatching(format!(
                    "partner of {u} is {v} but not vice versa"
                )));
            }
            if !g.has_edge(u, v) {
                return Err(GraphError::InvalidMatching(format!(
                    "{{{u}, {v}}} is not a live edge"
                )));
            }
            if u < v {
                count += 1;
            }
        }
        if count != self.size {
            return Err(GraphError::InvalidMatching(format!(
                "size {} but {count} pairs",
                self.size
            )));
        }
        Ok(())
    }
}

/// True iff every pair of `m` is a live edge of `g` and pairs are disjoint.
pub fn verify_matching(g: &Graph, m: &Matching) -> bool {
    m.validate(g).is_ok()
}

/// Checks a list of pairs directly, for certificates read from disk.
pub fn verify_pairs(g: &Graph, pairs: &[(Vertex, Vertex)]) -> bool {
    let mut used = vec![false; g.capacity()];
    for &(u, v) in pairs {
        if !g.has_edge(u, v) || used[u] || used[v] {
            return false;
        }
        used[u] = true;
        used[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_valid() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(verify_matching(&g, &Matching::new(3)));
    }

    #[test]
    fn overlapping_pairs_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!verify_pairs(&g, &[(0, 1), (1, 2)]));
        let mut m = Matching::new(3);
        m.add(0, 1).unwrap();
        assert!(m.add(1, 2).is_err());
    }

    #[test]
    fn deleted_edge_rejected() {
        let mut g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = Matching::from_pairs(2, &[(0, 1)]).unwrap();
        assert!(verify_matching(&g, &m));
        g.delete_edge(0, 1).unwrap();
        assert!(!verify_matching(&g, &m));
    }
}
