//! Finitely supported vectors with exact rational entries.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Sub};

use rustc_hash::FxHashMap;

use crate::rational::Rational;

/// A finitely supported map from vertices to rationals.
///
/// Zero entries are never stored, so two vectors are equal exactly when
/// their reduced maps are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseVector<K: Hash + Eq = usize> {
    entries: FxHashMap<K, Rational>,
}

impl<K: Hash + Eq> Default for SparseVector<K> {
    fn default() -> Self {
        Self {
            entries: FxHashMap::default(),
        }
    }
}

impl<K: Hash + Eq + Clone> SparseVector<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        let mut entries = FxHashMap::default();
        entries.reserve(capacity);
        Self { entries }
    }

    /// The canonical unit vector `e_u`.
    pub fn unit(u: K) -> Self {
        let mut v = Self::new();
        v.entries.insert(u, Rational::ONE);
        v
    }

    /// Indicator of a finite vertex set.
    pub fn indicator<I: IntoIterator<Item = K>>(support: I) -> Self {
        let mut v = Self::new();
        for u in support {
            v.entries.insert(u, Rational::ONE);
        }
        v
    }

    /// Collects `(vertex, value)` pairs, summing duplicates and dropping zeros.
    pub fn from_entries<I: IntoIterator<Item = (K, Rational)>>(entries: I) -> Self {
        let mut v = Self::new();
        for (k, x) in entries {
            v.add_at(k, &x);
        }
        v
    }

    pub fn get(&self, k: &K) -> Option<&Rational> {
        self.entries.get(k)
    }

    /// The coordinate at `k`, exactly zero outside the support.
    pub fn value(&self, k: &K) -> Rational {
        self.entries.get(k).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn set(&mut self, k: K, x: Rational) {
        if x.is_zero() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, x);
        }
    }

    /// Adds `x` to coordinate `k`.
    pub fn add_at(&mut self, k: K, x: &Rational) {
        if x.is_zero() {
            return;
        }
        match self.entries.entry(k) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(x.clone());
            }
        }
    }

    /// `self += c * x`.
    pub fn add_scaled(&mut self, c: &Rational, x: &SparseVector<K>) {
        if c.is_zero() {
            return;
        }
        self.entries.reserve(x.len());
        for (k, v) in x.iter() {
            if c.is_one() {
                self.add_at(k.clone(), v);
            } else {
                self.add_at(k.clone(), &(c * v));
            }
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), c * v)).collect(),
        }
    }

    /// Entrywise absolute value `|x|`.
    pub fn abs(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v.abs())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> + '_ {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> + '_ {
        self.entries.keys()
    }

    pub fn contains(&self, k: &K) -> bool {
        self.entries.contains_key(k)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| v.is_positive())
    }

    /// `max |x_k|`; zero for the empty vector.
    pub fn sup_norm(&self) -> Rational {
        self.entries
            .values()
            .map(Rational::abs)
            .max()
            .unwrap_or(Rational::ZERO)
    }

    /// `Σ |x_k|`.
    pub fn l1_norm(&self) -> Rational {
        self.entries.values().map(Rational::abs).sum()
    }

    /// The exact pairing `Σ x_k y_k`.
    pub fn dot(&self, other: &SparseVector<K>) -> Rational {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .iter()
            .filter_map(|(k, x)| large.get(k).map(|y| x * y))
            .sum()
    }

    pub fn into_entries(self) -> impl Iterator<Item = (K, Rational)> {
        self.entries.into_iter()
    }
}

impl<K: Hash + Eq + Clone + Ord> SparseVector<K> {
    /// Entries in ascending vertex order.
    pub fn sorted_entries(&self) -> Vec<(&K, &Rational)> {
        let mut out: Vec<_> = self.entries.iter().collect();
        out.sort_unstable_by(|a, b| a.0.cmp(b.0));
        out
    }
}

impl<K: Hash + Eq + Clone> FromIterator<(K, Rational)> for SparseVector<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        Self::from_entries(iter)
    }
}

impl<K: Hash + Eq + Clone> Add for &SparseVector<K> {
    type Output = SparseVector<K>;
    fn add(self, rhs: &SparseVector<K>) -> SparseVector<K> {
        let mut out = self.clone();
        out.add_scaled(&Rational::ONE, rhs);
        out
    }
}

impl<K: Hash + Eq + Clone> Sub for &SparseVector<K> {
    type Output = SparseVector<K>;
    fn sub(self, rhs: &SparseVector<K>) -> SparseVector<K> {
        let mut out = self.clone();
        out.add_scaled(&-Rational::ONE, rhs);
        out
    }
}

impl<K: Hash + Eq + Clone + Ord + fmt::Debug> fmt::Debug for SparseVector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.sorted_entries()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(SparseVector::<usize>::new().sup_norm(), Rational::ZERO);
        let x = SparseVector::from_entries([(3usize, r(-2, 3)), (7, r(1, 2))]);
        assert_eq!(x.sup_norm(), r(2, 3));
        assert_eq!(SparseVector::from_entries([(1usize, r(5, 8))]).sup_norm(), r(5, 8));
    }

    #[test]
    fn l1_norm_examples() {
        assert_eq!(SparseVector::<usize>::new().l1_norm(), Rational::ZERO);
        let y = SparseVector::from_entries([(2usize, r(1, 2)), (4, r(-1, 2))]);
        assert_eq!(y.l1_norm(), Rational::ONE);
        assert_eq!(SparseVector::from_entries([(9usize, r(3, 1))]).l1_norm(), r(3, 1));
    }

    #[test]
    fn zeros_are_never_stored() {
        let mut x = SparseVector::from_entries([(1usize, r(1, 2)), (1, r(-1, 2)), (2, Rational::ZERO)]);
        assert!(x.is_empty());
        x.add_at(5, &r(1, 3));
        x.add_at(5, &r(-1, 3));
        assert_eq!(x, SparseVector::new());
        assert_eq!(x.value(&5), Rational::ZERO);
    }

    fn arb_vec() -> impl Strategy<Value = SparseVector<usize>> {
        prop::collection::vec((0usize..40, -20i64..20, 1i64..12), 0..25)
            .prop_map(|v| v.into_iter().map(|(k, n, d)| (k, r(n, d))).collect())
    }

    proptest! {
        #[test]
        fn sup_norm_triangle(x in arb_vec(), y in arb_vec()) {
            prop_assert!((&x + &y).sup_norm() <= &x.sup_norm() + &y.sup_norm());
        }

        #[test]
        fn l1_additive_on_disjoint_support(x in arb_vec(), y in arb_vec()) {
            let y: SparseVector<usize> = y.into_entries().map(|(k, v)| (k + 1000, v)).collect();
            prop_assert_eq!((&x + &y).l1_norm(), &x.l1_norm() + &y.l1_norm());
        }

        #[test]
        fn sub_then_add_is_identity(x in arb_vec(), y in arb_vec()) {
            prop_assert_eq!(&(&x - &y) + &y, x);
        }
    }
}
