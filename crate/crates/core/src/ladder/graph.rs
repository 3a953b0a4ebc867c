use std::fmt;

use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::graphop::{C0Graph, Edges};
use crate::rational::Rational;

use super::depth::{bottom_weight, Depth};
use super::vertex::{enumerate_copy_vertex, enumerate_vertex, index_of_copy_vertex, index_of_vertex, LadderVertex};

/// Which member of the ladder family a graph is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LadderKind {
    G0,
    /// The copy lacking `s_1, …, s_k` (`k ≥ 1`), with `o → s_{k+1}`.
    Gk(u32),
    /// Source `s` feeding the entries of all copies `G_0, G_1, …`.
    Combined,
}

impl LadderKind {
    /// The copy index of a standalone graph.
    pub fn copy(&self) -> Option<u32> {
        match *self {
            LadderKind::G0 => Some(0),
            LadderKind::Gk(k) => Some(k),
            LadderKind::Combined => None,
        }
    }
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderKind::G0 => write!(f, "g0"),
            LadderKind::Gk(k) => write!(f, "g{k}"),
            LadderKind::Combined => write!(f, "combined"),
        }
    }
}

/// A ladder-family graph with structurally computed oracles.
#[derive(Clone, Debug)]
pub struct LadderFamilyGraph {
    kind: LadderKind,
    description: String,
}

pub fn make_g0() -> LadderFamilyGraph {
    LadderFamilyGraph {
        kind: LadderKind::G0,
        description: "G0: single ladder".into(),
    }
}

/// Panics if `k = 0`; use [`make_g0`] for the unmodified ladder.
pub fn make_gk(k: u32) -> LadderFamilyGraph {
    assert!(k >= 1, "make_gk needs k >= 1");
    LadderFamilyGraph {
        kind: LadderKind::Gk(k),
        description: format!("G{k}: ladder without s_1..s_{k}"),
    }
}

pub fn make_counterexample() -> LadderFamilyGraph {
    LadderFamilyGraph {
        kind: LadderKind::Combined,
        description: "combined: source feeding every copy G_k".into(),
    }
}

impl LadderFamilyGraph {
    pub fn from_kind(kind: LadderKind) -> LadderFamilyGraph {
        match kind {
            LadderKind::G0 => make_g0(),
            LadderKind::Gk(0) => make_g0(),
            LadderKind::Gk(k) => make_gk(k),
            LadderKind::Combined => make_counterexample(),
        }
    }

    pub fn kind(&self) -> LadderKind {
        self.kind
    }

    /// `s` for the combined graph, `o` of the copy otherwise.
    pub fn entry_vertex(&self) -> LadderVertex {
        match self.kind.copy() {
            Some(k) => LadderVertex::Entry(k),
            None => LadderVertex::Source,
        }
    }

    /// Whether `v` is a vertex of this graph.
    pub fn contains(&self, v: &LadderVertex) -> bool {
        if !v.is_well_formed() {
            return false;
        }
        match self.kind.copy() {
            Some(k) => v.copy() == Some(k),
            None => true,
        }
    }

    pub fn index_of(&self, v: &LadderVertex) -> Result<u64> {
        match self.kind.copy() {
            Some(k) => index_of_copy_vertex(k, v),
            None => index_of_vertex(v),
        }
    }

    fn check(&self, v: &LadderVertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::InvalidVertex(format!("{v} is not a vertex of {}", self.kind)))
        }
    }

    /// [`C0Graph::successors`] with validation.
    pub fn checked_successors(&self, v: &LadderVertex) -> Result<Edges<LadderVertex>> {
        self.check(v)?;
        Ok(self.successors(v))
    }

    /// [`C0Graph::predecessors`] with validation.
    pub fn checked_predecessors(&self, v: &LadderVertex) -> Result<Edges<LadderVertex>> {
        self.check(v)?;
        Ok(self.predecessors(v))
    }

    fn combined(&self) -> bool {
        self.kind == LadderKind::Combined
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

impl C0Graph for LadderFamilyGraph {
    type Vertex = LadderVertex;

    /// Vertices outside the graph are treated as isolated.
    fn successors(&self, u: &LadderVertex) -> Edges<LadderVertex> {
        if !self.contains(u) {
            return Edges::new();
        }
        match *u {
            LadderVertex::Source => smallvec![(LadderVertex::Entry(0), Rational::ONE)],
            LadderVertex::Entry(k) => {
                let first = (LadderVertex::Top { k, n: k + 1 }, Rational::ONE);
                if self.combined() {
                    smallvec![(LadderVertex::Entry(k + 1), Rational::ONE), first]
                } else {
                    smallvec![first]
                }
            }
            LadderVertex::Top { k, n } => smallvec![
                (LadderVertex::Top { k, n: n + 1 }, Rational::ONE),
                (LadderVertex::Bottom { k, j: Depth::landing(n) }, half()),
            ],
            LadderVertex::Bottom { k, j } => {
                let next = match j.toward_sink() {
                    Some(j) => LadderVertex::Bottom { k, j },
                    None => LadderVertex::Sink(k),
                };
                smallvec![(next, bottom_weight(j))]
            }
            LadderVertex::Sink(_) => Edges::new(),
        }
    }

    fn predecessors(&self, v: &LadderVertex) -> Edges<LadderVertex> {
        if !self.contains(v) {
            return Edges::new();
        }
        match *v {
            LadderVertex::Source => Edges::new(),
            LadderVertex::Entry(k) => {
                if !self.combined() {
                    Edges::new()
                } else if k == 0 {
                    smallvec![(LadderVertex::Source, Rational::ONE)]
                } else {
                    smallvec![(LadderVertex::Entry(k - 1), Rational::ONE)]
                }
            }
            LadderVertex::Top { k, n } => {
                if n == k + 1 {
                    smallvec![(LadderVertex::Entry(k), Rational::ONE)]
                } else {
                    smallvec![(LadderVertex::Top { k, n: n - 1 }, Rational::ONE)]
                }
            }
            LadderVertex::Bottom { k, j } => {
                let above = j.toward_source();
                let mut out: Edges<LadderVertex> = Edges::new();
                if j.is_landing() && j.segment() > k {
                    out.push((LadderVertex::Top { k, n: j.segment() }, half()));
                }
                out.push((LadderVertex::Bottom { k, j: above }, bottom_weight(above)));
                out
            }
            LadderVertex::Sink(k) => smallvec![(
                LadderVertex::Bottom { k, j: Depth::FIRST },
                bottom_weight(Depth::FIRST)
            )],
        }
    }

    fn vertex(&self, index: u64) -> LadderVertex {
        match self.kind.copy() {
            Some(k) => enumerate_copy_vertex(k, index),
            None => enumerate_vertex(index),
        }
    }

    fn description(&self) -> &str {
        &self.description
    }
}
