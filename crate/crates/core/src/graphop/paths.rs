use num_bigint::BigUint;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::rational::Rational;

use super::C0Graph;

/// A path `(u_0, …, u_n)` together with its weight `Π w(u_{k−1}, u_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path<V> {
    pub vertices: Vec<V>,
    pub weight: Rational,
}

impl<V> Path<V> {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }
}

/// All positive-weight paths of length exactly `n` from `u` to `v`, by
/// depth-first expansion of successor lists. Exponential in `n`; meant as
/// an oracle for the dynamic-programming routes.
pub fn enumerate_paths<G: C0Graph>(g: &G, u: &G::Vertex, v: &G::Vertex, n: usize) -> Vec<Path<G::Vertex>> {
    fn walk<G: C0Graph>(
        g: &G,
        target: &G::Vertex,
        remaining: usize,
        stack: &mut Vec<G::Vertex>,
        weight: &Rational,
        out: &mut Vec<Path<G::Vertex>>,
    ) {
        let here = stack.last().expect("path is never empty");
        if remaining == 0 {
            if here == target {
                out.push(Path {
                    vertices: stack.clone(),
                    weight: weight.clone(),
                });
            }
            return;
        }
        for (next, w) in g.successors(here) {
            stack.push(next);
            walk(g, target, remaining - 1, stack, &(weight * &w), out);
            stack.pop();
        }
    }

    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(n + 1);
    stack.push(u.clone());
    walk(g, v, n, &mut stack, &Rational::ONE, &mut out);
    out
}

/// Number of positive-weight paths with a common endpoint, and the largest
/// single-path weight among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCount {
    pub count: BigUint,
    pub max_weight: Rational,
}

impl PathCount {
    fn empty() -> Self {
        Self {
            count: BigUint::zero(),
            max_weight: Rational::ZERO,
        }
    }
}

fn step_profile<G: C0Graph>(
    g: &G,
    cur: &FxHashMap<G::Vertex, PathCount>,
) -> FxHashMap<G::Vertex, PathCount> {
    let mut next: FxHashMap<G::Vertex, PathCount> = FxHashMap::default();
    for (u, pc) in cur {
        for (v, w) in g.successors(u) {
            let slot = next.entry(v).or_insert_with(PathCount::empty);
            slot.count += &pc.count;
            let cand = &pc.max_weight * &w;
            if cand > slot.max_weight {
                slot.max_weight = cand;
            }
        }
    }
    next
}

/// For every endpoint `v`, the number of length-`n` paths from `E_N` to `v`
/// and their maximal weight, by dynamic programming over path length.
pub fn path_profile<G: C0Graph>(g: &G, n: u64, n_trunc: u64) -> FxHashMap<G::Vertex, PathCount> {
    let mut cur: FxHashMap<G::Vertex, PathCount> = g
        .truncation(n_trunc)
        .into_iter()
        .map(|u| {
            (
                u,
                PathCount {
                    count: BigUint::one(),
                    max_weight: Rational::ONE,
                },
            )
        })
        .collect();
    for _ in 0..n {
        cur = step_profile(g, &cur);
    }
    cur
}

/// Calls `visit(n, profile)` for `n = 1..=n_max` in a single sweep.
pub fn path_profile_sweep<G, F>(g: &G, n_max: u64, n_trunc: u64, mut visit: F)
where
    G: C0Graph,
    F: FnMut(u64, &FxHashMap<G::Vertex, PathCount>),
{
    let mut cur = path_profile(g, 0, n_trunc);
    for n in 1..=n_max {
        cur = step_profile(g, &cur);
        visit(n, &cur);
    }
}

/// Paths of length `n` ending at `v` that start in `E_N`.
pub fn count_paths_to<G: C0Graph>(g: &G, v: &G::Vertex, n: u64, n_trunc: u64) -> PathCount {
    path_profile(g, n, n_trunc)
        .remove(v)
        .unwrap_or_else(PathCount::empty)
}
