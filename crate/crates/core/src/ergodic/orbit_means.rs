//! Weighted orbit means of ladder graphs in closed form.
//!
//! For coefficients `c(t)`, `t < H`, the vector `y = Σ_t c(t) Tᵗ e_entry`
//! has `y_v = Σ c(t) w` over the hits `(t, w)` of `v` listed by
//! [`EntryOrbit::hit_times`]. Its support grows like `H³`, far beyond what
//! can be materialized at `H` in the thousands, but only few coordinates
//! are hit more than once:
//!
//! * the source, entries and top vertices are hit once, with weight `1`,
//!   and some such vertex is hit at every `t`;
//! * a bottom vertex `B(k, j)` hit twice before `H` has `j < H` and
//!   `2^{k+3} < 2H + δ`, and likewise for sinks.
//!
//! So `‖y‖∞` is the larger of `max_t |c(t)|` and the largest explicitly
//! summed candidate coordinate, and the support is the number of nonzero
//! candidates plus a per-time count of the singly-hit vertices.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ladder::{Depth, EntryOrbit, LadderKind, LadderVertex};
use crate::rational::Rational;

/// Scalars in which orbit means are accumulated.
pub trait MeanScalar: Clone + Send + Sync {
    type Norm: PartialOrd + Clone + Send + fmt::Debug;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `self += c · w`.
    fn add_weighted(&mut self, c: &Self, w: &Rational);
    fn norm(&self) -> Self::Norm;
}

impl MeanScalar for Rational {
    type Norm = Rational;

    fn zero() -> Self {
        Rational::ZERO
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_weighted(&mut self, c: &Self, w: &Rational) {
        *self += &(c * w);
    }
    fn norm(&self) -> Rational {
        self.abs()
    }
}

impl MeanScalar for Complex64 {
    type Norm = f64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_weighted(&mut self, c: &Self, w: &Rational) {
        *self += c * w.to_f64();
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
}

/// `‖Σ_{t<H} c(t) Tᵗ e_entry‖∞`, a coordinate attaining it, and the support size.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMeanSummary<N> {
    pub horizon: u64,
    pub sup: N,
    pub argmax: LadderVertex,
    pub support: u128,
}

/// Copies whose bottom or sink coordinates can be hit twice before `H`.
fn candidate_copies(orbit: &EntryOrbit, horizon: u64) -> Vec<u32> {
    let fits = |k: u32| -> bool {
        let lhs = 1u128.checked_shl(k + 3).unwrap_or(u128::MAX);
        lhs < 2 * horizon as u128 + orbit.delta(k) as u128
    };
    match orbit.kind().copy() {
        Some(c) => {
            if fits(c) {
                vec![c]
            } else {
                Vec::new()
            }
        }
        None => (0..).take_while(|&k| fits(k)).collect(),
    }
}

/// Vertices hit at time `t` that are not candidates.
fn singles_at(orbit: &EntryOrbit, t: u64, horizon: u64, candidates: &[u32]) -> u128 {
    let (delta, q_min, mut count) = match orbit.kind().copy() {
        None => (0, 2, t.max(1) as u128),
        Some(c) => (c as u64 + 1, c + 2, 1),
    };
    let tau = t as u128 + delta as u128;
    let mut q = q_min;
    while (q as u128) < tau {
        if q < 127 && (1u128 << q) < tau {
            q += 1;
            continue;
        }
        let small = q < 127 && (1u128 << q) - tau < horizon as u128;
        let wave_copies: u128 = match orbit.kind().copy() {
            None => q as u128 - 1,
            Some(_) => 1,
        };
        let excluded = if small {
            match orbit.kind().copy() {
                None => (candidates.len() as u128).min(q as u128 - 1),
                Some(_) => candidates.len() as u128,
            }
        } else {
            0
        };
        count += wave_copies - excluded;
        q += 1;
    }
    count
}

/// Summary of `Σ_{t<H} c(t) Tᵗ e_entry` for the entry orbit of `kind`.
pub fn orbit_mean_summary<C, F>(kind: LadderKind, horizon: u64, coeff: F) -> Result<OrbitMeanSummary<C::Norm>>
where
    C: MeanScalar,
    F: Fn(u64) -> C + Sync,
{
    if horizon == 0 {
        return Err(Error::Domain("empty horizon".into()));
    }
    let orbit = EntryOrbit::new(kind);
    let coeffs: Vec<C> = (0..horizon).into_par_iter().map(&coeff).collect();

    let (mut best_t, mut best) = (0u64, coeffs[0].norm());
    for (t, c) in coeffs.iter().enumerate() {
        if c.norm() > best {
            best = c.norm();
            best_t = t as u64;
        }
    }
    let mut argmax = match (kind.copy(), best_t) {
        (None, 0) => LadderVertex::Source,
        (None, t) => LadderVertex::Entry((t - 1) as u32),
        (Some(c), 0) => LadderVertex::Entry(c),
        (Some(c), t) => LadderVertex::Top { k: c, n: (t + c as u64) as u32 },
    };

    let candidates = candidate_copies(&orbit, horizon);
    let vertices: Vec<LadderVertex> = candidates
        .iter()
        .flat_map(|&k| {
            std::iter::once(LadderVertex::Sink(k)).chain((1..horizon).map(move |j| LadderVertex::Bottom {
                k,
                j: Depth::new(j).expect("positive"),
            }))
        })
        .collect();
    let evaluated: Vec<(LadderVertex, C)> = vertices
        .into_par_iter()
        .map(|v| {
            let mut y = C::zero();
            for (t, w) in orbit.hit_times(&v, horizon) {
                y.add_weighted(&coeffs[t as usize], &w);
            }
            (v, y)
        })
        .collect();
    let mut support = 0u128;
    for (v, y) in &evaluated {
        if y.is_zero() {
            continue;
        }
        support += 1;
        let n = y.norm();
        if n > best || (n == best && *v < argmax) {
            best = n;
            argmax = *v;
        }
    }
    support += (0..horizon)
        .into_par_iter()
        .filter(|&t| !coeffs[t as usize].is_zero())
        .map(|t| singles_at(&orbit, t, horizon, &candidates))
        .sum::<u128>();
    Ok(OrbitMeanSummary {
        horizon,
        sup: best,
        argmax,
        support,
    })
}

/// `A_n(T^m) e_entry = (1/n) Σ_{k<n} T^{mk} e_entry`.
pub fn ladder_power_mean(kind: LadderKind, m: u64, n: u64) -> Result<OrbitMeanSummary<Rational>> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("m and n must be positive".into()));
    }
    let c = Rational::new(1, n as i64);
    orbit_mean_summary(kind, m * (n - 1) + 1, |t| {
        if t % m == 0 {
            c.clone()
        } else {
            Rational::ZERO
        }
    })
}

/// `A_n e_entry`.
pub fn ladder_cesaro_mean(kind: LadderKind, n: u64) -> Result<OrbitMeanSummary<Rational>> {
    ladder_power_mean(kind, 1, n)
}

/// `A_n(λT) e_entry` for `λ = ±1`.
pub fn ladder_rotation_mean(kind: LadderKind, lambda: &Rational, n: u64) -> Result<OrbitMeanSummary<Rational>> {
    if !lambda.abs().is_one() {
        return Err(Error::Domain(format!("|λ| = |{lambda}| is not 1")));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let c = Rational::new(1, n as i64);
    let negative = lambda.is_negative();
    orbit_mean_summary(kind, n, |t| {
        if negative && t % 2 == 1 {
            -&c
        } else {
            c.clone()
        }
    })
}

/// `A_n(λT) e_entry` for unimodular complex `λ`, in `f64`.
pub fn ladder_rotation_mean_float(kind: LadderKind, lambda: Complex64, n: u64) -> Result<OrbitMeanSummary<f64>> {
    if (lambda.norm() - 1.0).abs() > super::ROTATION_MODULUS_TOLERANCE {
        return Err(Error::Domain(format!("|λ| = {} is not 1", lambda.norm())));
    }
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    orbit_mean_summary(kind, n, |t| lambda.powu(t as u32) / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergodic::{graph_handle, CesaroSweep, OperatorHandle};
    use crate::ergodic::Budget;
    use crate::graphop::C0Graph;
    use crate::ladder::LadderFamilyGraph;
    use crate::sparse::SparseVector;

    fn engine_means(
        op: &OperatorHandle<'_, LadderVertex>,
        x: &SparseVector<LadderVertex>,
        n_max: u64,
    ) -> Vec<(Rational, u128)> {
        let mut sweep = CesaroSweep::new(op, x, Budget::UNLIMITED);
        (1..=n_max)
            .map(|n| {
                sweep.advance_to(n).unwrap();
                let mean = sweep.mean();
                (mean.sup_norm(), mean.len() as u128)
            })
            .collect()
    }

    #[test]
    fn cesaro_closed_form_matches_engine() {
        for kind in [LadderKind::Combined, LadderKind::G0, LadderKind::Gk(1), LadderKind::Gk(3)] {
            let g = LadderFamilyGraph::from_kind(kind);
            let h = graph_handle(&g);
            let x = SparseVector::unit(g.entry_vertex());
            let n_max = if kind == LadderKind::Combined { 72 } else { 140 };
            for (n, (sup, support)) in (1..).zip(engine_means(&h, &x, n_max)) {
                let s = ladder_cesaro_mean(kind, n).unwrap();
                assert_eq!(s.sup, sup, "{kind} n = {n}");
                assert_eq!(s.support, support, "{kind} n = {n}");
            }
        }
    }

    #[test]
    fn argmax_is_a_maximizer() {
        let g = LadderFamilyGraph::from_kind(LadderKind::Combined);
        let h = graph_handle(&g);
        let x = SparseVector::unit(LadderVertex::Source);
        let mut sweep = CesaroSweep::new(&h, &x, Budget::UNLIMITED);
        for n in [5, 17, 40, 64] {
            sweep.advance_to(n).unwrap();
            let s = ladder_cesaro_mean(LadderKind::Combined, n).unwrap();
            assert_eq!(sweep.mean().value(&s.argmax), s.sup);
        }
    }

    #[test]
    fn power_means_match_engine() {
        let g = LadderFamilyGraph::from_kind(LadderKind::Combined);
        let h = graph_handle(&g);
        let x = SparseVector::unit(LadderVertex::Source);
        for m in [2u32, 3] {
            let stepped = h.power(m);
            for (n, (sup, support)) in (1..).zip(engine_means(&stepped, &x, 30)) {
                let s = ladder_power_mean(LadderKind::Combined, m as u64, n).unwrap();
                assert_eq!((s.sup, s.support), (sup, support), "m = {m} n = {n}");
            }
        }
    }

    #[test]
    fn rotations_match_engine() {
        let g = LadderFamilyGraph::from_kind(LadderKind::Combined);
        let minus = OperatorHandle::new("-T", |y: &SparseVector<LadderVertex>| {
            crate::graphop::apply(&g, y).scaled(&-Rational::ONE)
        });
        let x = SparseVector::unit(LadderVertex::Source);
        for (n, (sup, support)) in (1..).zip(engine_means(&minus, &x, 64)) {
            let s = ladder_rotation_mean(LadderKind::Combined, &-Rational::ONE, n).unwrap();
            assert_eq!((s.sup, s.support), (sup, support), "n = {n}");
        }
        let plus = ladder_rotation_mean(LadderKind::Combined, &Rational::ONE, 50).unwrap();
        assert_eq!(plus, ladder_cesaro_mean(LadderKind::Combined, 50).unwrap());
        assert!(ladder_rotation_mean(LadderKind::G0, &Rational::new(1, 2), 3).is_err());
    }

    #[test]
    fn float_rotation_matches_float_engine() {
        let g = LadderFamilyGraph::from_kind(LadderKind::Combined);
        let lambda = Complex64::new(0.6, 0.8);
        let n = 48u64;
        let mut sum: rustc_hash::FxHashMap<LadderVertex, Complex64> = Default::default();
        let mut cur = SparseVector::unit(LadderVertex::Source);
        for t in 0..n {
            for (v, c) in cur.iter() {
                *sum.entry(*v).or_default() += lambda.powu(t as u32) * c.to_f64() / n as f64;
            }
            cur = crate::graphop::apply(&g, &cur);
        }
        let sup = sum.values().map(|c| c.norm()).fold(0.0, f64::max);
        let s = ladder_rotation_mean_float(LadderKind::Combined, lambda, n).unwrap();
        assert!((s.sup - sup).abs() < 1e-12);
        assert!(ladder_rotation_mean_float(LadderKind::G0, Complex64::new(1.0, 1.0), 3).is_err());
        assert!(g.successors(&LadderVertex::Source).len() == 1);
    }
}
