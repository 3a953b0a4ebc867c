use crate::error::{Error, Result};
use crate::rational::Rational;

use super::{C0Graph, Edges};

/// A finite graph on `0..vertex_count` stored as adjacency lists.
///
/// The canonical enumeration is the identity; indices past `vertex_count`
/// are isolated vertices.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    description: String,
    successors: Vec<Vec<(usize, Rational)>>,
    predecessors: Vec<Vec<(usize, Rational)>>,
}

impl ExplicitGraph {
    /// Builds consistent oracles from an edge list; parallel edges are merged.
    pub fn from_edges<I>(description: impl Into<String>, vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut successors = vec![Vec::<(usize, Rational)>::new(); vertex_count];
        for (u, v, w) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidVertex(format!("edge {u} -> {v} outside 0..{vertex_count}")));
            }
            if !w.is_positive() {
                return Err(Error::Domain(format!("edge {u} -> {v} has non-positive weight {w}")));
            }
            match successors[u].iter_mut().find(|(t, _)| *t == v) {
                Some((_, acc)) => *acc += &w,
                None => successors[u].push((v, w)),
            }
        }
        let mut predecessors = vec![Vec::new(); vertex_count];
        for (u, list) in successors.iter_mut().enumerate() {
            list.sort_by_key(|(v, _)| *v);
            for (v, w) in list.iter() {
                predecessors[*v].push((u, w.clone()));
            }
        }
        Ok(Self {
            description: description.into(),
            successors,
            predecessors,
        })
    }

    /// Uses the given oracles verbatim, without checking that they agree.
    /// Intended for fault-injection tests of the condition checker.
    pub fn with_oracles(
        description: impl Into<String>,
        mut successors: Vec<Vec<(usize, Rational)>>,
        mut predecessors: Vec<Vec<(usize, Rational)>>,
    ) -> Self {
        let n = successors.len().max(predecessors.len());
        successors.resize(n, Vec::new());
        predecessors.resize(n, Vec::new());
        for list in successors.iter_mut().chain(predecessors.iter_mut()) {
            list.sort_by_key(|(v, _)| *v);
        }
        Self {
            description: description.into(),
            successors,
            predecessors,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.successors.len()
    }
}

impl C0Graph for ExplicitGraph {
    type Vertex = usize;

    fn successors(&self, u: &usize) -> Edges<usize> {
        self.successors
            .get(*u)
            .map(|l| l.iter().cloned().collect())
            .unwrap_or_default()
    }

    fn predecessors(&self, v: &usize) -> Edges<usize> {
        self.predecessors
            .get(*v)
            .map(|l| l.iter().cloned().collect())
            .unwrap_or_default()
    }

    fn vertex(&self, index: u64) -> usize {
        index as usize
    }

    fn description(&self) -> &str {
        &self.description
    }
}
