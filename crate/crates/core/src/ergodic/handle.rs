use std::hash::Hash;

use crate::blockdiag::BlockOperator;
use crate::graphop::{apply, apply_adjoint, C0Graph};
use crate::sparse::SparseVector;

type ApplyFn<'a, K> = Box<dyn Fn(&SparseVector<K>) -> SparseVector<K> + Send + Sync + 'a>;

/// An operator given by a pure apply function on finitely supported
/// vectors, optionally with its adjoint.
pub struct OperatorHandle<'a, K: Hash + Eq + Clone = usize> {
    apply: ApplyFn<'a, K>,
    adjoint: Option<ApplyFn<'a, K>>,
    description: String,
    positive: bool,
}

impl<'a, K: Hash + Eq + Clone> OperatorHandle<'a, K> {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(&SparseVector<K>) -> SparseVector<K> + Send + Sync + 'a,
    {
        Self {
            apply: Box::new(f),
            adjoint: None,
            description: description.into(),
            positive: false,
        }
    }

    pub fn with_adjoint<F>(mut self, f: F) -> Self
    where
        F: Fn(&SparseVector<K>) -> SparseVector<K> + Send + Sync + 'a,
    {
        self.adjoint = Some(Box::new(f));
        self
    }

    /// Declares the operator positive, which lets the engine track sup norms
    /// of nonnegative running sums incrementally.
    pub fn positive(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn apply(&self, x: &SparseVector<K>) -> SparseVector<K> {
        (self.apply)(x)
    }

    pub fn adjoint_apply(&self, y: &SparseVector<K>) -> Option<SparseVector<K>> {
        self.adjoint.as_ref().map(|f| f(y))
    }

    pub fn has_adjoint(&self) -> bool {
        self.adjoint.is_some()
    }

    /// `x ↦ T^m x` by `m` applications.
    pub fn power(&'a self, m: u32) -> OperatorHandle<'a, K> {
        let desc = format!("({})^{m}", self.description);
        let mut out = OperatorHandle::new(desc, move |x: &SparseVector<K>| {
            let mut cur = x.clone();
            for _ in 0..m {
                cur = self.apply(&cur);
            }
            cur
        });
        out.positive = self.positive;
        out
    }
}

impl<K: Hash + Eq + Clone> std::fmt::Debug for OperatorHandle<'_, K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OperatorHandle")
            .field("description", &self.description)
            .field("positive", &self.positive)
            .field("adjoint", &self.adjoint.is_some())
            .finish()
    }
}

/// The graph operator and its adjoint. Graph operators are positive.
pub fn graph_handle<G: C0Graph>(g: &G) -> OperatorHandle<'_, G::Vertex> {
    OperatorHandle::new(g.description().to_string(), move |x| apply(g, x))
        .with_adjoint(move |y| apply_adjoint(g, y))
        .positive()
}

/// The block operator `T^p` on its truncation; it is positive, and the
/// transpose of each block is the block itself.
pub fn block_handle(op: BlockOperator) -> OperatorHandle<'static, usize> {
    let desc = op.description();
    let op = std::sync::Arc::new(op);
    let op2 = op.clone();
    OperatorHandle::new(desc, move |x| op.apply(x))
        .with_adjoint(move |y| op2.apply(y))
        .positive()
}
