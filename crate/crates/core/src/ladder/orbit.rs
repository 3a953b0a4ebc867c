//! Closed-form orbit of the entry vertex.
//!
//! From the entry vertex every vertex is reached by at most one path of
//! each length, and a bottom vertex `B(k, j)` is reached exactly at the
//! lengths `2^q − j − δ` for `q ≥ max(k + 2, r(j) + 1)`, where `r(j)` is the
//! segment of `j` and `δ = k + 1` for a standalone copy (`0` in the combined
//! graph). Path weights telescope to `1`, or `1/2` when the path ends on a
//! rung landing. This module evaluates `Tᵗ e_entry` coordinatewise from
//! those facts, without simulating.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;
use crate::sparse::SparseVector;

use super::depth::Depth;
use super::graph::LadderKind;
use super::vertex::LadderVertex;

/// `(Tⁿ e_entry)_{Sink(k)}` in closed form: `1` iff `n = 2^{m+2}` (combined)
/// or `n = 2^{m+2} − k − 1` (standalone copy `k`) for some `m ≥ k`.
/// A sink outside the graph has coordinate `0`.
pub fn orbit_predicate(kind: LadderKind, k: u32, n: u64) -> u8 {
    let orbit = EntryOrbit::new(kind);
    if !orbit.has_copy(k) {
        return 0;
    }
    let t = n as u128 + orbit.delta(k) as u128;
    let hit = t.is_power_of_two() && t.trailing_zeros() >= k + 2;
    hit as u8
}

/// The orbit `t ↦ Tᵗ e_entry` of a ladder-family graph.
#[derive(Clone, Copy, Debug)]
pub struct EntryOrbit {
    kind: LadderKind,
}

impl EntryOrbit {
    pub fn new(kind: LadderKind) -> EntryOrbit {
        EntryOrbit {
            kind: match kind {
                LadderKind::Gk(0) => LadderKind::G0,
                other => other,
            },
        }
    }

    pub fn kind(&self) -> LadderKind {
        self.kind
    }

    pub fn entry(&self) -> LadderVertex {
        match self.kind.copy() {
            Some(k) => LadderVertex::Entry(k),
            None => LadderVertex::Source,
        }
    }

    pub fn has_copy(&self, k: u32) -> bool {
        self.kind.copy().is_none_or(|c| c == k)
    }

    /// Offset between combined-graph arrival times and this graph's: a path
    /// of length `ℓ` from `s` in the combined graph has length `ℓ − δ` from
    /// `o` in the standalone copy.
    pub fn delta(&self, k: u32) -> u64 {
        match self.kind {
            LadderKind::Combined => 0,
            _ => k as u64 + 1,
        }
    }

    /// Times `t < horizon` with `(Tᵗ e_entry)_v ≠ 0`, with the coordinate.
    pub fn hit_times(&self, v: &LadderVertex, horizon: u64) -> Vec<(u64, Rational)> {
        let single = |t: Option<u64>| -> Vec<(u64, Rational)> {
            match t {
                Some(t) if t < horizon => vec![(t, Rational::ONE)],
                _ => Vec::new(),
            }
        };
        if !v.is_well_formed() {
            return Vec::new();
        }
        match *v {
            LadderVertex::Source => single((self.kind == LadderKind::Combined).then_some(0)),
            LadderVertex::Entry(k) => {
                if !self.has_copy(k) {
                    return Vec::new();
                }
                let d = self.delta(k);
                single(Some(k as u64 + 1 - d))
            }
            LadderVertex::Top { k, n } => {
                if !self.has_copy(k) {
                    return Vec::new();
                }
                single(Some(n as u64 + 1 - self.delta(k)))
            }
            LadderVertex::Sink(k) => {
                if !self.has_copy(k) {
                    return Vec::new();
                }
                self.wave_times_small(k, 0, k + 2, horizon, Rational::ONE)
            }
            LadderVertex::Bottom { k, j } => {
                if !self.has_copy(k) {
                    return Vec::new();
                }
                let weight = if j.is_landing() {
                    Rational::new(1, 2)
                } else {
                    Rational::ONE
                };
                let q0 = (k + 2).max(j.segment() + 1);
                match j.as_u64() {
                    Some(small) => self.wave_times_small(k, small, q0, horizon, weight),
                    None => self.wave_times(k, &j.value(), q0, horizon, weight),
                }
            }
        }
    }

    fn wave_times_small(&self, k: u32, j: u64, q0: u32, horizon: u64, w: Rational) -> Vec<(u64, Rational)> {
        let shift = j as u128 + self.delta(k) as u128;
        let mut out = Vec::new();
        for q in q0..128 {
            let p = 1u128 << q;
            if p < shift {
                continue;
            }
            let t = p - shift;
            if t >= horizon as u128 {
                break;
            }
            out.push((t as u64, w.clone()));
        }
        out
    }

    /// Times `2^q − j − δ` for `q ≥ q0`, below `horizon`.
    fn wave_times(&self, k: u32, j: &BigUint, q0: u32, horizon: u64, w: Rational) -> Vec<(u64, Rational)> {
        let shift = j + BigUint::from(self.delta(k));
        let horizon = BigUint::from(horizon);
        let mut out = Vec::new();
        let mut p = BigUint::one() << q0 as usize;
        loop {
            if p >= shift {
                let t = &p - &shift;
                if t >= horizon {
                    break;
                }
                out.push((t.to_u64().expect("below a u64 horizon"), w.clone()));
            }
            p <<= 1;
        }
        out
    }

    /// `(Tᵗ e_entry)_v`.
    pub fn coordinate(&self, v: &LadderVertex, t: u64) -> Rational {
        self.hit_times(v, t.saturating_add(1))
            .into_iter()
            .find(|(s, _)| *s == t)
            .map(|(_, w)| w)
            .unwrap_or(Rational::ZERO)
    }

    /// `Tᵗ e_entry` as a sparse vector.
    pub fn support_at(&self, t: u64) -> SparseVector<LadderVertex> {
        let mut out = SparseVector::new();
        match self.kind.copy() {
            None => {
                if t == 0 {
                    out.set(LadderVertex::Source, Rational::ONE);
                    return out;
                }
                out.set(LadderVertex::Entry(small(t - 1)), Rational::ONE);
                for k in 0..t.saturating_sub(1) {
                    out.set(
                        LadderVertex::Top {
                            k: small(k),
                            n: small(t - 1),
                        },
                        Rational::ONE,
                    );
                }
                self.add_waves(&mut out, 0, t);
            }
            Some(k) => {
                if t == 0 {
                    out.set(LadderVertex::Entry(k), Rational::ONE);
                    return out;
                }
                out.set(
                    LadderVertex::Top {
                        k,
                        n: small(t + k as u64),
                    },
                    Rational::ONE,
                );
                self.add_waves(&mut out, k, t);
            }
        }
        out
    }

    /// Bottom and sink coordinates at time `t`: with `τ = t + δ`, wave `q`
    /// sits at `j = 2^q − τ` in every copy `k ≤ q − 2` whose rungs emit it.
    fn add_waves(&self, out: &mut SparseVector<LadderVertex>, k: u32, t: u64) {
        let tau = t as u128 + self.delta(k) as u128;
        let copies = |q: u32| -> Vec<u32> {
            match self.kind.copy() {
                None => (0..=q - 2).collect(),
                Some(c) => (c + 2 <= q).then_some(c).into_iter().collect(),
            }
        };
        let q_min = self.kind.copy().map_or(2, |c| c + 2);
        // The wave of q has left the top chain once τ ≥ q + 1.
        let mut q = q_min;
        while (q as u128) < tau {
            let depth = if q >= 127 || (1u128 << (q - 1)) + q as u128 > tau {
                // 2^q − τ lies in segment q − 1, at offset τ − q − 1 below j(q − 1)
                Some(Depth::from_parts(q - 1, BigUint::from(tau - q as u128 - 1)).expect("offset below 2^63"))
            } else if (1u128 << q) == tau {
                None
            } else if (1u128 << q) < tau {
                q += 1;
                continue;
            } else {
                Some(Depth::from_biguint(&BigUint::from((1u128 << q) - tau)).expect("positive"))
            };
            for c in copies(q) {
                match depth {
                    None => out.set(LadderVertex::Sink(c), Rational::ONE),
                    Some(j) => {
                        let w = if j.is_landing() {
                            Rational::new(1, 2)
                        } else {
                            Rational::ONE
                        };
                        out.set(LadderVertex::Bottom { k: c, j }, w);
                    }
                }
            }
            q += 1;
        }
    }
}

fn small(x: u64) -> u32 {
    u32::try_from(x).expect("time beyond supported range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphop::{apply, C0Graph};
    use crate::ladder::{make_counterexample, make_g0, make_gk, LadderFamilyGraph};

    #[test]
    fn predicate_examples() {
        assert_eq!(orbit_predicate(LadderKind::G0, 0, 3), 1);
        assert_eq!(orbit_predicate(LadderKind::G0, 0, 7), 1);
        assert_eq!(orbit_predicate(LadderKind::G0, 0, 5), 0);
        assert_eq!(orbit_predicate(LadderKind::Combined, 2, 16), 1);
        assert_eq!(orbit_predicate(LadderKind::Combined, 2, 8), 0);
        assert_eq!(orbit_predicate(LadderKind::Combined, 0, 5), 0);
        let ones: Vec<u64> = (0..70).filter(|&n| orbit_predicate(LadderKind::Gk(2), 2, n) == 1).collect();
        assert_eq!(ones, vec![13, 29, 61]);
        assert_eq!(orbit_predicate(LadderKind::Gk(2), 1, 13), 0);
    }

    fn check_against_simulation(g: &LadderFamilyGraph, steps: u64) {
        let orbit = EntryOrbit::new(g.kind());
        let mut cur = SparseVector::unit(g.entry_vertex());
        for t in 0..steps {
            assert_eq!(orbit.support_at(t), cur, "{} at t = {t}", g.kind());
            for (v, x) in cur.iter() {
                assert_eq!(&orbit.coordinate(v, t), x, "{v} at t = {t}");
            }
            cur = apply(g, &cur);
        }
    }

    #[test]
    fn closed_form_matches_simulation() {
        check_against_simulation(&make_counterexample(), 200);
        check_against_simulation(&make_g0(), 300);
        for k in 1..5 {
            check_against_simulation(&make_gk(k), 200);
        }
    }

    #[test]
    fn hit_times_are_complete() {
        // Every nonzero coordinate up to the horizon appears in hit_times
        // and vice versa.
        let g = make_counterexample();
        let orbit = EntryOrbit::new(g.kind());
        let horizon = 130;
        let mut seen: rustc_hash::FxHashMap<LadderVertex, Vec<(u64, Rational)>> = Default::default();
        let mut cur = SparseVector::unit(LadderVertex::Source);
        for t in 0..horizon {
            for (v, x) in cur.iter() {
                seen.entry(*v).or_default().push((t, x.clone()));
            }
            cur = apply(&g, &cur);
        }
        for (v, mut hits) in seen {
            hits.sort_by_key(|h| h.0);
            assert_eq!(orbit.hit_times(&v, horizon), hits, "{v}");
        }
        assert!(orbit.hit_times(&LadderVertex::Sink(9), horizon).is_empty());
        assert_eq!(
            orbit.hit_times(&LadderVertex::Sink(1), 100),
            vec![(8, Rational::ONE), (16, Rational::ONE), (32, Rational::ONE), (64, Rational::ONE)]
        );
    }

    #[test]
    fn far_bottoms_are_reached_once_early() {
        let orbit = EntryOrbit::new(LadderKind::Combined);
        let v = LadderVertex::Bottom {
            k: 0,
            j: Depth::landing(200),
        };
        // s → o_0 → s_1 … s_200 → t_{j(200)}: 202 steps.
        assert_eq!(orbit.hit_times(&v, u64::MAX), vec![(202, Rational::new(1, 2))]);
        assert_eq!(make_counterexample().successors(&v)[0].1, Rational::from_integer(2));
    }
}
