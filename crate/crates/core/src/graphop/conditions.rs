use crate::rational::Rational;

use super::C0Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum C0Violation<V> {
    /// Column sum `Σ_k w(k, v)` above the declared bound.
    ColumnSum { vertex: V, sum: Rational },
    NonPositiveWeight { from: V, to: V, weight: Rational },
    /// `(to, w) ∈ successors(from)` but `(from, w) ∉ predecessors(to)`.
    MissingPredecessor { from: V, to: V, weight: Rational },
    /// `(from, w) ∈ predecessors(to)` but `(to, w) ∉ successors(from)`.
    MissingSuccessor { from: V, to: V, weight: Rational },
}

/// Outcome of checking a truncation `E_N` against the `c0`-graph conditions.
#[derive(Clone, Debug)]
pub struct C0Report<V> {
    pub truncation: u64,
    pub bound: Rational,
    pub max_column_sum: Rational,
    pub max_column_vertex: Option<V>,
    pub max_out_degree: usize,
    pub violations: Vec<C0Violation<V>>,
}

impl<V> C0Report<V> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every vertex in `E_N`: finite positive out-edges (rows are
/// null sequences), column sum `≤ bound`, and agreement of the successor
/// and predecessor oracles in both directions.
pub fn verify_c0_conditions<G: C0Graph>(g: &G, n_trunc: u64, bound: &Rational) -> C0Report<G::Vertex> {
    let mut report = C0Report {
        truncation: n_trunc,
        bound: bound.clone(),
        max_column_sum: Rational::ZERO,
        max_column_vertex: None,
        max_out_degree: 0,
        violations: Vec::new(),
    };
    for u in g.truncation(n_trunc) {
        let succ = g.successors(&u);
        report.max_out_degree = report.max_out_degree.max(succ.len());
        for (v, w) in &succ {
            if !w.is_positive() {
                report.violations.push(C0Violation::NonPositiveWeight {
                    from: u.clone(),
                    to: v.clone(),
                    weight: w.clone(),
                });
            }
            let back = g.predecessors(v);
            if !back.iter().any(|(p, pw)| *p == u && pw == w) {
                report.violations.push(C0Violation::MissingPredecessor {
                    from: u.clone(),
                    to: v.clone(),
                    weight: w.clone(),
                });
            }
        }

        let pred = g.predecessors(&u);
        let mut column = Rational::ZERO;
        for (p, w) in &pred {
            column += w;
            let fwd = g.successors(p);
            if !fwd.iter().any(|(s, sw)| *s == u && sw == w) {
                report.violations.push(C0Violation::MissingSuccessor {
                    from: p.clone(),
                    to: u.clone(),
                    weight: w.clone(),
                });
            }
        }
        if column > report.max_column_sum {
            report.max_column_sum = column.clone();
            report.max_column_vertex = Some(u.clone());
        }
        if column > *bound {
            report.violations.push(C0Violation::ColumnSum { vertex: u, sum: column });
        }
    }
    report
}
