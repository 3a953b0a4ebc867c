//! A positive contraction on `ℓ∞` built as a direct sum of 2×2 blocks.
//!
//! Block `m` is `T_m = U − a_m V` with `a_m = 1 − 1/m`, where
//! `U = ½[[1,1],[1,1]]` and `V = ½[[1,−1],[−1,1]]` are complementary
//! projections. Hence `T_m^p = U + (−a_m)^p V`, and the `n`-th Cesàro mean
//! of `T_m^p` is `U + σ V` with `σ = cesaro_geometric(a_m, p, n)`. Working
//! with `U` and `V` keeps everything rational.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometric::cesaro_geometric;
use crate::rational::Rational;
use crate::sparse::SparseVector;

/// A 2×2 rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Block2x2 {
    pub entries: [[Rational; 2]; 2],
}

impl Block2x2 {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Self {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn zero() -> Self {
        Self::new(Rational::ZERO, Rational::ZERO, Rational::ZERO, Rational::ZERO)
    }

    pub fn identity() -> Self {
        Self::new(Rational::ONE, Rational::ZERO, Rational::ZERO, Rational::ONE)
    }

    /// `½[[1,1],[1,1]]`.
    pub fn u() -> Self {
        let h = Rational::new(1, 2);
        Self::new(h.clone(), h.clone(), h.clone(), h)
    }

    /// `½[[1,−1],[−1,1]]`.
    pub fn v() -> Self {
        let h = Rational::new(1, 2);
        Self::new(h.clone(), -&h, -&h, h)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let [[a, b], [x, d]] = &self.entries;
        Self::new(a * c, b * c, x * c, d * c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The operator norm on `(R², ‖·‖∞)`: the largest absolute row sum.
    pub fn norm_inf(&self) -> Rational {
        self.entries
            .iter()
            .map(|row| row[0].abs() + row[1].abs())
            .max()
            .expect("two rows")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|x| !x.is_negative())
    }

    pub fn row_sums(&self) -> [Rational; 2] {
        [
            &self.entries[0][0] + &self.entries[0][1],
            &self.entries[1][0] + &self.entries[1][1],
        ]
    }

    pub fn apply(&self, x: &[Rational; 2]) -> [Rational; 2] {
        let [[a, b], [c, d]] = &self.entries;
        [a * &x[0] + b * &x[1], c * &x[0] + d * &x[1]]
    }
}

impl Add for &Block2x2 {
    type Output = Block2x2;
    fn add(self, o: &Block2x2) -> Block2x2 {
        let e = |i: usize, j: usize| &self.entries[i][j] + &o.entries[i][j];
        Block2x2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Sub for &Block2x2 {
    type Output = Block2x2;
    fn sub(self, o: &Block2x2) -> Block2x2 {
        let e = |i: usize, j: usize| &self.entries[i][j] - &o.entries[i][j];
        Block2x2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl Mul for &Block2x2 {
    type Output = Block2x2;
    fn mul(self, o: &Block2x2) -> Block2x2 {
        let e = |i: usize, j: usize| &self.entries[i][0] * &o.entries[0][j] + &self.entries[i][1] * &o.entries[1][j];
        Block2x2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl fmt::Display for Block2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

fn check_positive(name: &str, x: u32) -> Result<()> {
    if x == 0 {
        Err(Error::Domain(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// `a_m = 1 − 1/m`.
pub fn a_m(m: u32) -> Rational {
    assert!(m >= 1, "blocks are numbered from 1");
    Rational::ONE - Rational::new(1, m as i64)
}

/// `T_m = ½[[1/m, 2 − 1/m], [2 − 1/m, 1/m]]`.
pub fn t_block(m: u32) -> Result<Block2x2> {
    check_positive("m", m)?;
    let inv = Rational::new(1, m as i64);
    let off = Rational::from_integer(2) - &inv;
    let h = Rational::new(1, 2);
    Ok(Block2x2::new(&inv * &h, &off * &h, &off * &h, &inv * &h))
}

/// `(1/n) Σ_{k<n} (T_m^p)^k = U + cesaro_geometric(a_m, p, n)·V`.
pub fn block_cesaro(m: u32, n: u32, p: u32) -> Result<Block2x2> {
    check_positive("m", m)?;
    let sigma = cesaro_geometric(&a_m(m), p, n)?;
    Ok(&Block2x2::u() + &Block2x2::v().scaled(&sigma))
}

/// The same mean by repeated exact multiplication of `T_m^p`.
pub fn block_cesaro_literal(m: u32, n: u32, p: u32) -> Result<Block2x2> {
    check_positive("n", n)?;
    Ok(block_cesaro_literal_sweep(m, n, p)?.pop().expect("n >= 1"))
}

/// `[block_cesaro_literal(m, n, p) for n = 1..=n_max]` from one running sum.
pub fn block_cesaro_literal_sweep(m: u32, n_max: u32, p: u32) -> Result<Vec<Block2x2>> {
    check_positive("p", p)?;
    let step = t_block(m)?.pow(p);
    let mut power = Block2x2::identity();
    let mut total = Block2x2::zero();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        total = &total + &power;
        power = &power * &step;
        out.push(total.scaled(&Rational::new(1, n as i64)));
    }
    Ok(out)
}

/// `b_{m,n} = cesaro_geometric(a_m, 2j, n)`, the coefficient of `V` in the
/// `n`-th mean of `T_m^{2j}`.
pub fn b_coeff(m: u32, n: u32, j: u32) -> Result<Rational> {
    check_positive("m", m)?;
    check_positive("j", j)?;
    cesaro_geometric(&a_m(m), 2 * j, n)
}

/// `max_{m ≤ M} ‖block_cesaro(m, n, p) − U‖∞`, with the maximizing `m`
/// (the smallest one on ties).
pub fn sup_deviation_at(block_count: u32, n: u32, p: u32) -> Result<(Rational, u32)> {
    check_positive("M", block_count)?;
    check_positive("n", n)?;
    check_positive("p", p)?;
    // block_cesaro(m, n, p) − U = σ·V exactly, so the deviation is |σ|·‖V‖∞.
    let v_norm = Block2x2::v().norm_inf();
    let devs: Vec<Result<(Rational, u32)>> = (1..=block_count)
        .into_par_iter()
        .map(|m| Ok((cesaro_geometric(&a_m(m), p, n)?.abs() * &v_norm, m)))
        .collect();
    let mut best = (Rational::ZERO, 1);
    for d in devs {
        let (dev, m) = d?;
        if dev > best.0 {
            best = (dev, m);
        }
    }
    Ok(best)
}

/// `max_{m ≤ M} ‖block_cesaro(m, n, p) − U‖∞`.
pub fn sup_deviation(block_count: u32, n: u32, p: u32) -> Result<Rational> {
    sup_deviation_at(block_count, n, p).map(|(d, _)| d)
}

/// Applies the `n`-th Cesàro mean of `T^{2j}` to the vector whose blocks
/// are all `(1, −1)` and returns, per block, the coefficient `c` with
/// result block `c·(1, −1)`.
pub fn witness_apply(block_count: u32, n: u32, j: u32) -> Result<Vec<Rational>> {
    check_positive("M", block_count)?;
    check_positive("j", j)?;
    let x = [Rational::ONE, -Rational::ONE];
    (1..=block_count)
        .into_par_iter()
        .map(|m| {
            let y = block_cesaro(m, n, 2 * j)?.apply(&x);
            if y[1] != -&y[0] {
                return Err(Error::Domain(format!("block {m} left the (1,-1) direction")));
            }
            Ok(y[0].clone())
        })
        .collect()
}

/// Outcome of checking that the blockwise multiplier `a_m^{2j}` never
/// equals `1` on the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointReport {
    pub block_count: u32,
    pub j: u32,
    /// `max_{m ≤ M} a_m^{2j}` and the block attaining it.
    pub max_multiplier: Rational,
    pub argmax: u32,
    pub passed: bool,
}

/// The diagonal multiplication by `(a_m^{2j})_m` has only the zero fixed
/// point on the first `M` blocks iff no multiplier equals `1`.
pub fn multiplication_fixed_check(block_count: u32, j: u32) -> Result<FixedPointReport> {
    check_positive("M", block_count)?;
    check_positive("j", j)?;
    let powers: Vec<Rational> = (1..=block_count)
        .into_par_iter()
        .map(|m| a_m(m).pow(2 * j))
        .collect();
    let mut argmax = 1;
    for (i, x) in powers.iter().enumerate() {
        if *x > powers[argmax as usize - 1] {
            argmax = i as u32 + 1;
        }
    }
    let max_multiplier = powers[argmax as usize - 1].clone();
    Ok(FixedPointReport {
        block_count,
        j,
        passed: powers.iter().all(|x| !x.is_one()),
        max_multiplier,
        argmax,
    })
}

/// `T^p` on the first `M` blocks of `ℓ∞`, acting on sparse vectors whose
/// coordinates `2(m−1)` and `2(m−1)+1` form block `m`. Coordinates past the
/// truncation are dropped.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    power: u32,
    block_count: u32,
    blocks: Vec<Block2x2>,
}

impl BlockOperator {
    pub fn new(block_count: u32, power: u32) -> Result<Self> {
        check_positive("M", block_count)?;
        check_positive("p", power)?;
        let blocks = (1..=block_count)
            .map(|m| &Block2x2::u() + &Block2x2::v().scaled(&(-a_m(m)).pow(power)))
            .collect();
        Ok(Self {
            power,
            block_count,
            blocks,
        })
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn block_count(&self) -> u32 {
        self.block_count
    }

    /// `T_m^p`.
    pub fn block(&self, m: u32) -> &Block2x2 {
        &self.blocks[m as usize - 1]
    }

    pub fn apply(&self, x: &SparseVector<usize>) -> SparseVector<usize> {
        let mut out = SparseVector::with_capacity(x.len());
        let mut seen: Vec<usize> = x.support().filter(|&&i| i < 2 * self.block_count as usize).map(|i| i / 2).collect();
        seen.sort_unstable();
        seen.dedup();
        for b in seen {
            let pair = [x.value(&(2 * b)), x.value(&(2 * b + 1))];
            let y = self.blocks[b].apply(&pair);
            out.set(2 * b, y[0].clone());
            out.set(2 * b + 1, y[1].clone());
        }
        out
    }

    pub fn description(&self) -> String {
        format!("block-diagonal T^{} on {} blocks", self.power, self.block_count)
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
    fn t_block_examples() {
        assert_eq!(t_block(1).unwrap(), Block2x2::u());
        assert_eq!(t_block(2).unwrap(), Block2x2::new(r(1, 4), r(3, 4), r(3, 4), r(1, 4)));
        assert!(t_block(0).is_err());
    }

    #[test]
    fn projector_algebra() {
        let (u, v) = (Block2x2::u(), Block2x2::v());
        assert_eq!(&u * &u, u);
        assert_eq!(&v * &v, v);
        assert_eq!(&u * &v, Block2x2::zero());
        assert_eq!(&v * &u, Block2x2::zero());
        assert_eq!(&u + &v, Block2x2::identity());
        for m in 1..50 {
            assert_eq!(t_block(m).unwrap(), &u - &v.scaled(&a_m(m)));
        }
    }

    #[test]
    fn blocks_are_positive_contractions() {
        for m in 1..100 {
            let t = t_block(m).unwrap();
            assert_eq!(t.row_sums(), [Rational::ONE, Rational::ONE]);
            assert!(t.is_nonnegative());
            assert_eq!(t.norm_inf(), Rational::ONE);
            for p in 1..5 {
                assert_eq!(t.pow(p), &Block2x2::u() + &Block2x2::v().scaled(&(-a_m(m)).pow(p)));
            }
        }
    }

    #[test]
    fn cesaro_examples() {
        // T_1 = U, but the mean keeps the k = 0 identity term: (I + 6U)/7.
        assert_eq!(block_cesaro(1, 7, 1).unwrap(), &Block2x2::u() + &Block2x2::v().scaled(&r(1, 7)));
        assert_eq!(t_block(1).unwrap().pow(5), Block2x2::u());
        assert_eq!(
            block_cesaro(2, 2, 2).unwrap(),
            &Block2x2::u() + &Block2x2::v().scaled(&r(5, 8))
        );
    }

    #[test]
    fn closed_form_matches_literal_average() {
        for m in 1..=20 {
            for p in 1..=4 {
                let literal = block_cesaro_literal_sweep(m, 64, p).unwrap();
                for (n, lit) in (1..).zip(literal) {
                    let closed = block_cesaro(m, n, p).unwrap();
                    assert_eq!(closed, lit, "m={m} n={n} p={p}");
                    assert!(closed.is_nonnegative());
                }
            }
        }
        assert_eq!(block_cesaro_literal(3, 5, 2).unwrap(), block_cesaro(3, 5, 2).unwrap());
    }

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeff(1, 5, 1).unwrap(), r(1, 5));
        assert_eq!(b_coeff(2, 2, 1).unwrap(), r(5, 8));
        // (1/2)(1 − (1/2)^4)/(1 − (1/2)^2)
        assert_eq!(b_coeff(2, 2, 1).unwrap(), r(1, 2) * r(15, 16) / r(3, 4));
        let b = b_coeff(10, 10, 1).unwrap();
        assert!(b > r(2, 5));
        let float = (1.0 - 0.81f64.powi(10)) / (10.0 * 0.19);
        assert!((b.to_f64() - float).abs() < 1e-12);
        assert!((b.to_f64() - 0.4624).abs() < 1e-4);
    }

    #[test]
    fn b_coeff_matches_quoted_closed_form() {
        for m in 2..30 {
            for n in 1..20 {
                for j in 1..4 {
                    let a2j = a_m(m).pow(2 * j);
                    let quoted = (Rational::ONE - a2j.pow(n)) / (Rational::from(n) * (Rational::ONE - a2j));
                    assert_eq!(b_coeff(m, n, j).unwrap(), quoted);
                }
            }
        }
    }

    #[test]
    fn sup_deviation_examples() {
        assert_eq!(sup_deviation_at(1000, 2, 1).unwrap(), (r(1, 2), 1));
        // A_1 is the identity, so every block deviates by ‖V‖∞ = 1.
        assert_eq!(sup_deviation(1000, 1, 1).unwrap(), Rational::ONE);
        let t_dev = (1..=1000).map(|m| (&t_block(m).unwrap() - &Block2x2::u()).norm_inf()).max();
        assert_eq!(t_dev, Some(r(999, 1000)));
        for n in [10, 100] {
            assert!(sup_deviation(1000, n, 1).unwrap() <= r(2, n as i64));
        }
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_apply(3, 1, 1).unwrap(), vec![Rational::ONE; 3]);
        assert_eq!(witness_apply(2, 2, 1).unwrap(), vec![r(1, 2), r(5, 8)]);
        for n in [10u32, 100] {
            let w = witness_apply(n, n, 1).unwrap();
            for (m, c) in w.iter().enumerate() {
                assert_eq!(*c, b_coeff(m as u32 + 1, n, 1).unwrap());
            }
            assert!(w.iter().max().unwrap() >= &r(2, 5));
            assert!(witness_apply(n, n, 2).unwrap().iter().max().unwrap() >= &r(1, 5));
        }
    }

    #[test]
    fn multiplication_fixed_examples() {
        let rep = multiplication_fixed_check(1000, 1).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.argmax, 1000);
        let rep = multiplication_fixed_check(1, 5).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.max_multiplier, Rational::ZERO);
        let rep = multiplication_fixed_check(1000, 3).unwrap();
        assert_eq!(rep.max_multiplier, r(999, 1000).pow(6));
    }

    #[test]
    fn operator_acts_blockwise() {
        let op = BlockOperator::new(3, 1).unwrap();
        let x = SparseVector::from_entries([(2usize, Rational::ONE), (9, Rational::ONE)]);
        // block 2 gets (1, 0) ↦ first column of T_2; coordinate 9 is outside.
        assert_eq!(op.apply(&x), SparseVector::from_entries([(2, r(1, 4)), (3, r(3, 4))]));
        assert_eq!(op.block(3), &t_block(3).unwrap());
        let sq = BlockOperator::new(3, 2).unwrap();
        assert_eq!(sq.apply(&x), op.apply(&op.apply(&x)));
    }

    proptest! {
        #[test]
        fn deviation_is_uniformly_small_for_p_one(big_m in 1u32..200, n in 1u32..80) {
            prop_assert!(sup_deviation(big_m, n, 1).unwrap() <= Rational::new(2, n as i64));
        }
    }
}
