use std::fmt;
use std::hash::Hash;

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sparse::SparseVector;

use super::handle::OperatorHandle;

/// Caps on the work a sweep may do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Applications of the operator.
    pub max_steps: u64,
    /// Support size of the running power or the running sum.
    pub max_support: usize,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_steps: u64::MAX,
        max_support: usize::MAX,
    };
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1 << 20,
            max_support: 1 << 24,
        }
    }
}

/// Running state of `A_n x = (1/n) Σ_{k<n} Tᵏx`: the current power `Tⁿx`
/// and the partial sum `Σ_{k<n} Tᵏx`.
pub struct CesaroSweep<'h, 'a, K: Hash + Eq + Clone> {
    op: &'h OperatorHandle<'a, K>,
    power: SparseVector<K>,
    sum: SparseVector<K>,
    n: u64,
    budget: Budget,
    /// `max_v |sum_v|` while every added term has been nonnegative.
    monotone_sup: Option<Rational>,
}

impl<'h, 'a, K: Hash + Eq + Clone> CesaroSweep<'h, 'a, K> {
    pub fn new(op: &'h OperatorHandle<'a, K>, x: &SparseVector<K>, budget: Budget) -> Self {
        Self {
            op,
            power: x.clone(),
            sum: SparseVector::new(),
            n: 0,
            budget,
            monotone_sup: Some(Rational::ZERO),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `Tⁿx`.
    pub fn power(&self) -> &SparseVector<K> {
        &self.power
    }

    /// `Σ_{k<n} Tᵏx`.
    pub fn sum(&self) -> &SparseVector<K> {
        &self.sum
    }

    /// Adds `Tⁿx` to the sum and advances to `Tⁿ⁺¹x`.
    pub fn step(&mut self) -> Result<()> {
        if self.n >= self.budget.max_steps {
            return Err(Error::BudgetExceeded(format!("more than {} steps", self.budget.max_steps)));
        }
        let tracking = self.monotone_sup.is_some() && self.op.is_positive() && self.power.is_nonnegative();
        if !tracking {
            self.monotone_sup = None;
        }
        for (k, x) in self.power.iter() {
            self.sum.add_at(k.clone(), x);
            if let Some(best) = self.monotone_sup.as_mut() {
                let now = self.sum.get(k).expect("positive entry");
                if now > best {
                    *best = now.clone();
                }
            }
        }
        self.power = self.op.apply(&self.power);
        self.n += 1;
        let support = self.power.len().max(self.sum.len());
        if support > self.budget.max_support {
            return Err(Error::BudgetExceeded(format!(
                "support {support} exceeds {}",
                self.budget.max_support
            )));
        }
        Ok(())
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        while self.n < n {
            self.step()?;
        }
        Ok(())
    }

    /// `A_n x`. Panics before the first step.
    pub fn mean(&self) -> SparseVector<K> {
        assert!(self.n > 0, "A_0 is undefined");
        self.sum.scaled(&Rational::new(1, self.n as i64))
    }

    /// `‖A_n x‖∞`, from the incrementally tracked maximum when the sum has
    /// only grown.
    pub fn mean_sup_norm(&self) -> Rational {
        assert!(self.n > 0, "A_0 is undefined");
        let sup = match &self.monotone_sup {
            Some(s) => s.clone(),
            None => self.sum.sup_norm(),
        };
        sup / Rational::from(self.n)
    }
}

/// `A_n x` by a single running pass.
pub fn cesaro_apply<K: Hash + Eq + Clone>(op: &OperatorHandle<'_, K>, x: &SparseVector<K>, n: u64) -> SparseVector<K> {
    cesaro_apply_budgeted(op, x, n, Budget::UNLIMITED).expect("unlimited budget")
}

pub fn cesaro_apply_budgeted<K: Hash + Eq + Clone>(
    op: &OperatorHandle<'_, K>,
    x: &SparseVector<K>,
    n: u64,
    budget: Budget,
) -> Result<SparseVector<K>> {
    if n == 0 {
        return Err(Error::Domain("Cesàro means start at n = 1".into()));
    }
    let mut sweep = CesaroSweep::new(op, x, budget);
    sweep.advance_to(n)?;
    Ok(sweep.mean())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CesaroRecord {
    pub n: u64,
    pub sup_norm: Rational,
    pub support: usize,
}

/// `‖A_n x‖∞` and `|supp A_n x|` at each scheduled `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CesaroTrace {
    pub records: Vec<CesaroRecord>,
}

impl CesaroTrace {
    pub fn norms(&self) -> Vec<Rational> {
        self.records.iter().map(|r| r.sup_norm.clone()).collect()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.records.windows(2).all(|w| w[1].sup_norm < w[0].sup_norm)
    }
}

fn check_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.first() == Some(&0) {
        return Err(Error::Domain("schedule entries must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("schedule must be strictly increasing".into()));
    }
    Ok(())
}

/// One incremental sweep reporting at every scheduled `n`.
pub fn cesaro_trace<K: Hash + Eq + Clone>(
    op: &OperatorHandle<'_, K>,
    x: &SparseVector<K>,
    schedule: &[u64],
    budget: Budget,
) -> Result<CesaroTrace> {
    check_schedule(schedule)?;
    let mut sweep = CesaroSweep::new(op, x, budget);
    let mut records = Vec::with_capacity(schedule.len());
    for &n in schedule {
        sweep.advance_to(n)?;
        records.push(CesaroRecord {
            n,
            sup_norm: sweep.mean_sup_norm(),
            support: sweep.sum().len(),
        });
    }
    Ok(CesaroTrace { records })
}

/// A diagnostic value: exact, or a float with a stated tolerance.
#[derive(Clone, Debug, PartialEq)]
pub enum CheckValue {
    Exact(Rational),
    Float(f64),
}

impl CheckValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            CheckValue::Exact(r) => r.to_f64(),
            CheckValue::Float(x) => *x,
        }
    }
}

impl fmt::Display for CheckValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckValue::Exact(r) => write!(f, "{r}"),
            CheckValue::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// A value compared against a threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub value: CheckValue,
    pub threshold: Rational,
    pub passed: bool,
}

impl CheckOutcome {
    fn exact(value: Rational, threshold: &Rational) -> Self {
        Self {
            passed: &value <= threshold,
            value: CheckValue::Exact(value),
            threshold: threshold.clone(),
        }
    }
}

/// `‖A_n(T^m) x‖∞ ≤ threshold`, stepping the engine by `T^m`.
pub fn power_mean_ergodic_check<K: Hash + Eq + Clone>(
    op: &OperatorHandle<'_, K>,
    x: &SparseVector<K>,
    m: u32,
    n: u64,
    threshold: &Rational,
    budget: Budget,
) -> Result<CheckOutcome> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("m and n must be positive".into()));
    }
    let stepped = op.power(m);
    let budget = Budget {
        max_steps: budget.max_steps / m as u64,
        ..budget
    };
    let mut sweep = CesaroSweep::new(&stepped, x, budget);
    sweep.advance_to(n)?;
    Ok(CheckOutcome::exact(sweep.mean_sup_norm(), threshold))
}

/// Tolerance on `|λ| = 1` for floating-point rotations.
pub const ROTATION_MODULUS_TOLERANCE: f64 = 1e-12;

/// A unimodular scalar `λ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Rotation {
    /// `±1`, handled exactly.
    Exact(Rational),
    /// Any `|λ| = 1` up to [`ROTATION_MODULUS_TOLERANCE`], handled in `f64`.
    Float(Complex64),
}

impl Rotation {
    pub fn validate(&self) -> Result<()> {
        match self {
            Rotation::Exact(l) => {
                if l.abs().is_one() {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("|λ| = |{l}| is not 1")))
                }
            }
            Rotation::Float(l) => {
                if (l.norm() - 1.0).abs() <= ROTATION_MODULUS_TOLERANCE {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("|λ| = {} is not 1", l.norm())))
                }
            }
        }
    }
}

/// `‖A_n(λT) x‖∞ ≤ threshold`.
///
/// For `λ = ±1` everything is exact. Otherwise `Tᵏx` is still computed
/// exactly and only the scalar weights `λᵏ` and the accumulation are `f64`;
/// the accumulated relative error is below `n · 2⁻⁵²`, far under the
/// `10⁻⁹` slack callers are expected to add to the threshold.
pub fn scalar_rotation_check<K: Hash + Eq + Clone>(
    op: &OperatorHandle<'_, K>,
    x: &SparseVector<K>,
    lambda: &Rotation,
    n: u64,
    threshold: &Rational,
    budget: Budget,
) -> Result<CheckOutcome> {
    lambda.validate()?;
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    match lambda {
        Rotation::Exact(l) if l.is_one() => {
            let mut sweep = CesaroSweep::new(op, x, budget);
            sweep.advance_to(n)?;
            Ok(CheckOutcome::exact(sweep.mean_sup_norm(), threshold))
        }
        Rotation::Exact(l) => {
            let minus = l.clone();
            let rotated = OperatorHandle::new("-T", move |y: &SparseVector<K>| op.apply(y).scaled(&minus));
            let mut sweep = CesaroSweep::new(&rotated, x, budget);
            sweep.advance_to(n)?;
            Ok(CheckOutcome::exact(sweep.mean_sup_norm(), threshold))
        }
        Rotation::Float(l) => {
            let mut sum: FxHashMap<K, Complex64> = FxHashMap::default();
            let mut power = x.clone();
            let mut weight = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k >= budget.max_steps {
                    return Err(Error::BudgetExceeded(format!("more than {} steps", budget.max_steps)));
                }
                for (v, c) in power.iter() {
                    *sum.entry(v.clone()).or_default() += weight * c.to_f64();
                }
                power = op.apply(&power);
                weight *= l;
                if sum.len() > budget.max_support {
                    return Err(Error::BudgetExceeded(format!("support exceeds {}", budget.max_support)));
                }
            }
            let sup = sum.values().map(|c| c.norm()).fold(0.0, f64::max) / n as f64;
            Ok(CheckOutcome {
                passed: sup <= threshold.to_f64(),
                value: CheckValue::Float(sup),
                threshold: threshold.clone(),
            })
        }
    }
}
