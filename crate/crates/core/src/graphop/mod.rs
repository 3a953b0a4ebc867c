//! Weighted directed graphs acting as positive operators on `c0`.
//!
//! A graph with weights `w(u, v) ≥ 0` acts by `(Tx)_v = Σ_u x_u w(u, v)`.
//! Every graph here has finite out-degree, so `T` maps finitely supported
//! vectors to finitely supported vectors and all computations are exact.
//! Norms of `T` and its powers are approximated from below on truncations
//! `E_N`, the first `N` vertices of the graph's canonical enumeration.

mod conditions;
mod explicit;
mod paths;

use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::rational::Rational;
use crate::sparse::SparseVector;

pub use conditions::{verify_c0_conditions, C0Report, C0Violation};
pub use explicit::ExplicitGraph;
pub use paths::{count_paths_to, enumerate_paths, path_profile, path_profile_sweep, Path, PathCount};

/// Outgoing or incoming weighted edges of one vertex.
pub type Edges<V> = SmallVec<[(V, Rational); 2]>;

/// A weighted directed graph with finite in- and out-degrees, given by
/// pure successor/predecessor oracles and a canonical enumeration of its
/// (countably infinite or finite) vertex set.
pub trait C0Graph: Sync {
    type Vertex: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync;

    /// Edges `(v, w(u, v))` with `w(u, v) > 0`, sorted by `v`.
    fn successors(&self, u: &Self::Vertex) -> Edges<Self::Vertex>;

    /// Edges `(u, w(u, v))` with `w(u, v) > 0`, sorted by `u`.
    fn predecessors(&self, v: &Self::Vertex) -> Edges<Self::Vertex>;

    /// The `index`-th vertex of the canonical enumeration.
    fn vertex(&self, index: u64) -> Self::Vertex;

    fn description(&self) -> &str;

    /// The truncation `E_N`.
    fn truncation(&self, n: u64) -> Vec<Self::Vertex> {
        (0..n).map(|i| self.vertex(i)).collect()
    }
}

/// `(Tx)_v = Σ_u x_u w(u, v)`.
pub fn apply<G: C0Graph>(g: &G, x: &SparseVector<G::Vertex>) -> SparseVector<G::Vertex> {
    let mut out = SparseVector::with_capacity(x.len() + x.len() / 2);
    for (u, xu) in x.iter() {
        for (v, w) in g.successors(u) {
            if w.is_one() {
                out.add_at(v, xu);
            } else {
                out.add_at(v, &(xu * &w));
            }
        }
    }
    out
}

/// The adjoint on `ℓ¹`: `(T*y)_u = Σ_v y_v w(u, v)`.
pub fn apply_adjoint<G: C0Graph>(g: &G, y: &SparseVector<G::Vertex>) -> SparseVector<G::Vertex> {
    let mut out = SparseVector::with_capacity(y.len() + y.len() / 2);
    for (v, yv) in y.iter() {
        for (u, w) in g.predecessors(v) {
            out.add_at(u, &(yv * &w));
        }
    }
    out
}

/// `Tⁿx` by `n` successive applications.
pub fn power_apply<G: C0Graph>(
    g: &G,
    x: &SparseVector<G::Vertex>,
    n: u64,
) -> SparseVector<G::Vertex> {
    let mut cur = x.clone();
    for _ in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = apply(g, &cur);
    }
    cur
}

/// `‖T 1_{E_N}‖∞`, which increases to `‖T‖` as `N → ∞`.
pub fn operator_norm_truncated<G: C0Graph>(g: &G, n_trunc: u64) -> Rational {
    power_norm_truncated(g, 1, n_trunc)
}

/// `‖Tⁿ 1_{E_N}‖∞ = sup_v Σ_{u ∈ E_N} Σ_{|p_{u,v}| = n} w(p)`, a lower bound
/// for `‖Tⁿ‖` that increases to it as `N → ∞`.
pub fn power_norm_truncated<G: C0Graph>(g: &G, n: u64, n_trunc: u64) -> Rational {
    power_norm_profile(g, n, n_trunc)
        .pop()
        .unwrap_or(Rational::ZERO)
}

/// `[‖T^k 1_{E_N}‖∞ for k = 1..=n_max]` from a single sweep.
///
/// Columns of `E_N` are propagated in parallel chunks and summed; the sum
/// is exact, so the result does not depend on scheduling.
pub fn power_norm_profile<G: C0Graph>(g: &G, n_max: u64, n_trunc: u64) -> Vec<Rational> {
    const CHUNK: usize = 128;
    let starts = g.truncation(n_trunc);
    let per_chunk: Vec<Vec<SparseVector<G::Vertex>>> = starts
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut cur = SparseVector::indicator(chunk.iter().cloned());
            let mut out = Vec::with_capacity(n_max as usize);
            for _ in 0..n_max {
                cur = apply(g, &cur);
                out.push(cur.clone());
            }
            out
        })
        .collect();
    (0..n_max as usize)
        .map(|k| {
            let mut total = SparseVector::new();
            for chunk in &per_chunk {
                total.add_scaled(&Rational::ONE, &chunk[k]);
            }
            total.sup_norm()
        })
        .collect()
}
