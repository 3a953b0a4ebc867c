use crate::error::{Error, Result};
use crate::graphop::{apply, C0Graph};
use crate::ladder::{orbit_predicate, LadderFamilyGraph, LadderKind, LadderVertex};
use crate::rational::Rational;
use crate::sparse::SparseVector;

use super::engine::Budget;

/// Sink coordinates of `T^{2^{m+2}} e_s` on the window `m ≤ M`, `k ≤ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMatrix {
    pub k_max: u32,
    pub m_max: u32,
    /// `entries[m][k] = (T^{2^{m+2}} e_s)_{V(k)}`.
    pub entries: Vec<Vec<Rational>>,
}

impl WitnessMatrix {
    /// Whether row `m` is one exactly at `k ≤ m` and zero elsewhere.
    pub fn is_lower_triangular_ones(&self) -> bool {
        self.entries.iter().enumerate().all(|(m, row)| {
            row.iter()
                .enumerate()
                .all(|(k, x)| *x == if k <= m { Rational::ONE } else { Rational::ZERO })
        })
    }

    /// Whether every entry equals the closed-form orbit predicate.
    pub fn matches_predicate(&self) -> bool {
        self.entries.iter().enumerate().all(|(m, row)| {
            row.iter().enumerate().all(|(k, x)| {
                *x == Rational::from(orbit_predicate(LadderKind::Combined, k as u32, 1u64 << (m + 2)) as u32)
            })
        })
    }

    /// Every tested sink converges to `1` along `n = 2^{m+2}`: the last row
    /// is all ones, so no subsequence of the orbit tends to a `c0` vector
    /// on the tested window.
    pub fn conclusion(&self) -> String {
        let last_row_ones = self
            .entries
            .last()
            .is_some_and(|row| row.iter().all(|x| x.is_one()));
        if self.is_lower_triangular_ones() && last_row_ones {
            format!(
                "every pointwise cluster point is 1 on sinks V(0..={}), hence outside c0 on the tested window",
                self.k_max
            )
        } else if self.is_lower_triangular_ones() {
            format!(
                "pattern is lower-triangular; sinks V({}..={}) are not yet reached within m <= {}",
                self.m_max + 1,
                self.k_max,
                self.m_max
            )
        } else {
            "pattern deviates from the lower-triangular shape".to_string()
        }
    }
}

/// `(T^{2^{m+2}} e_s)_{V(k)}` for `0 ≤ k ≤ K`, `0 ≤ m ≤ M`, by exact
/// simulation of the combined graph.
pub fn weak_compactness_witness(
    g: &LadderFamilyGraph,
    k_max: u32,
    m_max: u32,
    budget: Budget,
) -> Result<WitnessMatrix> {
    if g.kind() != LadderKind::Combined {
        return Err(Error::Domain("the witness is defined on the combined graph".into()));
    }
    if m_max > 40 {
        return Err(Error::BudgetExceeded(format!("2^{} steps", m_max + 2)));
    }
    let last = 1u64 << (m_max + 2);
    if last > budget.max_steps {
        return Err(Error::BudgetExceeded(format!(
            "{last} steps exceed the cap of {}",
            budget.max_steps
        )));
    }
    let mut entries = Vec::with_capacity(m_max as usize + 1);
    let mut cur = SparseVector::unit(LadderVertex::Source);
    let mut t = 0u64;
    for m in 0..=m_max {
        let target = 1u64 << (m + 2);
        while t < target {
            cur = apply(g, &cur);
            t += 1;
            if cur.len() > budget.max_support {
                return Err(Error::BudgetExceeded(format!("support {} at step {t}", cur.len())));
            }
        }
        entries.push((0..=k_max).map(|k| cur.value(&LadderVertex::Sink(k))).collect());
    }
    Ok(WitnessMatrix { k_max, m_max, entries })
}

/// `max_{0 ≤ n ≤ H} ‖Tⁿ|x|‖∞`, a lower bound for `sup_n ‖Tⁿ|x|‖∞`.
pub fn renorm_estimate<G: C0Graph>(g: &G, x: &SparseVector<G::Vertex>, horizon: u64) -> Rational {
    let mut cur = x.abs();
    let mut best = cur.sup_norm();
    for _ in 0..horizon {
        if cur.is_empty() {
            break;
        }
        cur = apply(g, &cur);
        best = best.max(cur.sup_norm());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphop::enumerate_paths;
    use crate::ladder::{make_counterexample, make_g0};

    #[test]
    fn triangle_on_the_tested_window() {
        let g = make_counterexample();
        let w = weak_compactness_witness(&g, 4, 6, Budget::default()).unwrap();
        assert!(w.is_lower_triangular_ones());
        assert!(w.matches_predicate());
        assert_eq!(w.entries.len(), 7);
        assert!(w.conclusion().starts_with("every pointwise cluster point is 1"));

        let small = weak_compactness_witness(&g, 3, 1, Budget::default()).unwrap();
        let ones: Vec<(usize, usize)> = small
            .entries
            .iter()
            .enumerate()
            .flat_map(|(m, row)| row.iter().enumerate().filter(|(_, x)| x.is_one()).map(move |(k, _)| (m, k)))
            .collect();
        assert_eq!(ones, vec![(0, 0), (1, 0), (1, 1)]);
        assert!(small.conclusion().starts_with("pattern is lower-triangular"));
    }

    #[test]
    fn single_entry_is_one_path_of_length_four() {
        let g = make_counterexample();
        let w = weak_compactness_witness(&g, 0, 0, Budget::default()).unwrap();
        assert_eq!(w.entries, vec![vec![Rational::ONE]]);
        let paths = enumerate_paths(&g, &LadderVertex::Source, &LadderVertex::Sink(0), 4);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].weight, Rational::ONE);
        assert_eq!(
            paths[0].vertices,
            vec![
                LadderVertex::Source,
                LadderVertex::Entry(0),
                LadderVertex::Top { k: 0, n: 1 },
                LadderVertex::bottom(0, 1).unwrap(),
                LadderVertex::Sink(0),
            ]
        );
    }

    #[test]
    fn witness_rejects_other_graphs_and_budgets() {
        assert!(weak_compactness_witness(&make_g0(), 1, 1, Budget::default()).is_err());
        let tight = Budget { max_steps: 100, max_support: usize::MAX };
        assert!(matches!(
            weak_compactness_witness(&make_counterexample(), 2, 5, tight),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn renorm_examples() {
        let g = make_counterexample();
        let e = SparseVector::unit(LadderVertex::Source);
        assert_eq!(renorm_estimate(&g, &e, 0), Rational::ONE);
        let h16 = renorm_estimate(&g, &e, 16);
        assert!(h16 >= Rational::ONE && h16 <= Rational::from(4u32));
        let g0 = make_g0();
        for h in [0, 1, 5, 100] {
            assert_eq!(renorm_estimate(&g0, &SparseVector::unit(LadderVertex::Sink(0)), h), Rational::ONE);
        }
        let signed = SparseVector::from_entries([(LadderVertex::Source, -Rational::ONE)]);
        assert_eq!(renorm_estimate(&g, &signed, 16), h16);
    }
}
