//! Exact rational numbers.
//!
//! Values that fit in a pair of `i64` are stored inline; everything else
//! falls back to heap-allocated big integers. The representation is
//! canonical (reduced, positive denominator, inline whenever possible), so
//! derived equality and hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    /// `den > 0`, `gcd(|num|, den) == 1`.
    Small(i64, i64),
    /// Same invariants, and at least one component does not fit in `i64`.
    Big(Box<(BigInt, BigInt)>),
}

/// An exact, always-reduced rational number.
#[derive(Clone, PartialEq, Eq)]
pub struct Rational(Repr);

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.0.hash(state);
                b.1.hash(state);
            }
        }
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    a.gcd(&b)
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    /// Builds `num / den`, reducing the fraction.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_integer(n: i64) -> Rational {
        Rational(Repr::Small(n, 1))
    }

    /// Builds `num / den` from big integers, reducing the fraction.
    ///
    /// Panics if `den` is zero.
    pub fn from_bigints(num: BigInt, den: BigInt) -> Rational {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let g = big_gcd(&num, &den);
        if g.is_one() {
            Self::from_reduced_big(num, den)
        } else {
            Self::from_reduced_big(num / &g, den / &g)
        }
    }

    /// The exact value of a finite `f64`, which is always a dyadic rational.
    pub fn from_f64_exact(x: f64) -> Option<Rational> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Rational::ZERO);
        }
        let bits = x.to_bits();
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        let mut num = BigInt::from(mantissa);
        let mut den = BigInt::one();
        if exp >= 0 {
            num <<= exp as usize;
        } else {
            den <<= (-exp) as usize;
        }
        if x < 0.0 {
            num = -num;
        }
        Some(Rational::from_bigints(num, den))
    }

    /// Trusts the caller that `num / den` is in lowest terms with `den > 0`.
    pub(crate) fn from_reduced_bigints(num: BigInt, den: BigInt) -> Rational {
        debug_assert!(den.is_positive() && num.gcd(&den).is_one());
        Self::from_reduced_big(num, den)
    }

    fn from_reduced_big(num: BigInt, den: BigInt) -> Rational {
        match (num.to_i64(), den.to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new((num, den)))),
        }
    }

    /// `num / den` for arbitrary (unreduced, any-sign, nonzero-denominator) `i128`s
    /// whose magnitudes stay below `2^127`.
    fn from_i128(num: i128, den: i128) -> Rational {
        debug_assert!(den != 0);
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        Self::from_reduced_i128(num, den)
    }

    fn from_reduced_i128(num: i128, den: i128) -> Rational {
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Rational(Repr::Small(n, d)),
            _ => Rational(Repr::Big(Box::new((BigInt::from(num), BigInt::from(den))))),
        }
    }

    fn to_bigs(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (b.0.clone(), b.1.clone()),
        }
    }

    pub fn numer(&self) -> BigInt {
        self.to_bigs().0
    }

    pub fn denom(&self) -> BigInt {
        self.to_bigs().1
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.1.is_one(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => match b.0.sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Rational {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "reciprocal of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Repr::Big(b) => Self::from_bigints(b.1.clone(), b.0.clone()),
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        if rhs.is_zero() {
            None
        } else {
            Some(self * &rhs.recip())
        }
    }

    pub fn pow(&self, exp: u32) -> Rational {
        if let Repr::Small(n, d) = self.0 {
            if let (Some(pn), Some(pd)) = (n.checked_pow(exp), d.checked_pow(exp)) {
                return Rational(Repr::Small(pn, pd));
            }
        }
        let (n, d) = self.to_bigs();
        // Powers of coprime integers stay coprime.
        Self::from_reduced_big(num_traits::pow(n, exp as usize), num_traits::pow(d, exp as usize))
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`, correct up to the last couple of bits even when the
    /// numerator and denominator overflow `f64` individually.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => {
                let (n, d) = (&b.0, &b.1);
                if n.is_zero() {
                    return 0.0;
                }
                let shift = 64 - (n.bits() as i64 - d.bits() as i64);
                let mag = n.abs();
                let q = if shift >= 0 {
                    (mag << shift as usize) / d
                } else {
                    mag / (d << (-shift) as usize)
                };
                let mut value = q.to_f64().unwrap_or(f64::INFINITY);
                // Scale back in steps to avoid overflowing the exponent of powi.
                let mut s = shift;
                while s != 0 {
                    let step = s.clamp(-1000, 1000);
                    value *= 2f64.powi(-step as i32);
                    s -= step;
                }
                if n.is_negative() {
                    -value
                } else {
                    value
                }
            }
        }
    }

    /// Always renders `p/q`, including `q == 1`.
    pub fn to_fraction_string(&self) -> String {
        let (n, d) = self.to_bigs();
        format!("{n}/{d}")
    }

    /// Decimal rendering derived from the exact fraction, rounded half away
    /// from zero to at most `places` fractional digits. Trailing zeros are
    /// trimmed, keeping at least one fractional digit.
    pub fn to_decimal_string(&self, places: usize) -> String {
        let (n, d) = self.to_bigs();
        let negative = n.is_negative();
        let scale = num_traits::pow(BigInt::from(10u8), places);
        let scaled = n.abs() * &scale;
        let (mut q, r) = scaled.div_rem(&d);
        if r * 2 >= d {
            q += 1;
        }
        let (int_part, frac_part) = q.div_rem(&scale);
        let mut frac = format!("{:0>width$}", frac_part.to_string(), width = places);
        while frac.len() > 1 && frac.ends_with('0') {
            frac.pop();
        }
        if frac.is_empty() {
            frac.push('0');
        }
        let sign = if negative && !(int_part.is_zero() && frac.chars().all(|c| c == '0')) {
            "-"
        } else {
            ""
        };
        format!("{sign}{int_part}.{frac}")
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<u32> for Rational {
    fn from(n: u32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_reduced_big(BigInt::from(n), BigInt::one())
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational::from(n as u64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_reduced_big(n, BigInt::one())
    }
}

/// `gcd(|a|, |b|)`. Remainder steps first while the operands differ much
/// in size, where the binary algorithm behind `Integer::gcd` is slow.
fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.magnitude().clone(), b.magnitude().clone());
    loop {
        if x < y {
            std::mem::swap(&mut x, &mut y);
        }
        if y.is_zero() {
            return BigInt::from(x);
        }
        if x.bits() > y.bits() + 64 {
            x %= &y;
        } else {
            return BigInt::from(x.gcd(&y));
        }
    }
}

fn add_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            if d1 == d2 {
                return Rational::from_i128(*n1 as i128 + *n2 as i128, *d1 as i128);
            }
            let g = (*d1 as u64).gcd(&(*d2 as u64)) as i128;
            let (d1, d2) = (*d1 as i128, *d2 as i128);
            let num = *n1 as i128 * (d2 / g) + *n2 as i128 * (d1 / g);
            let den = d1 * (d2 / g);
            Rational::from_i128(num, den)
        }
        _ => {
            // Henrici: only gcds against the common part of the denominators.
            let (n1, d1) = a.to_bigs();
            let (n2, d2) = b.to_bigs();
            let g = big_gcd(&d1, &d2);
            if g.is_one() {
                return Rational::from_reduced_big(n1 * &d2 + n2 * &d1, d1 * d2);
            }
            let (d1g, d2g) = (&d1 / &g, &d2 / &g);
            let t = n1 * &d2g + n2 * &d1g;
            if t.is_zero() {
                return Rational::ZERO;
            }
            let g2 = big_gcd(&t, &g);
            Rational::from_reduced_big(t / &g2, d1g * (d2 / g2))
        }
    }
}

fn mul_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
            if *n1 == 0 || *n2 == 0 {
                return Rational::ZERO;
            }
            let g1 = n1.unsigned_abs().gcd(&(*d2 as u64)) as i128;
            let g2 = n2.unsigned_abs().gcd(&(*d1 as u64)) as i128;
            let num = (*n1 as i128 / g1) * (*n2 as i128 / g2);
            let den = (*d1 as i128 / g2) * (*d2 as i128 / g1);
            Rational::from_reduced_i128(num, den)
        }
        _ => {
            if a.is_zero() || b.is_zero() {
                return Rational::ZERO;
            }
            let (n1, d1) = a.to_bigs();
            let (n2, d2) = b.to_bigs();
            let g1 = big_gcd(&n1, &d2);
            let g2 = big_gcd(&n2, &d1);
            Rational::from_reduced_big((n1 / &g1) * (n2 / &g2), (d1 / g2) * (d2 / g1))
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => Rational::from_reduced_i128(-(*n as i128), *d as i128),
            Repr::Big(b) => Rational::from_reduced_big(-b.0.clone(), b.1.clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                let f: fn(&Rational, &Rational) -> Rational = $body;
                f(self, rhs)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, |a, b| add_impl(a, &-b));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a, b| mul_impl(a, &b.recip()));

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_impl(self, rhs);
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_impl(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = add_impl(self, &-rhs);
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = mul_impl(self, rhs);
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ONE, |acc, x| acc * x)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(n1, d1), Repr::Small(n2, d2)) => {
                (*n1 as i128 * *d2 as i128).cmp(&(*n2 as i128 * *d1 as i128))
            }
            _ => {
                let (n1, d1) = self.to_bigs();
                let (n2, d2) = other.to_bigs();
                (n1 * d2).cmp(&(n2 * d1))
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.1.is_one() => write!(f, "{}", b.0),
            Repr::Big(b) => write!(f, "{}/{}", b.0, b.1),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p`, `p/q` and finite decimals such as `-0.125`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Rational::from_bigints(p, q));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_val: BigInt = match int.trim_start_matches(['-', '+']) {
                "" => BigInt::zero(),
                digits => digits.parse().map_err(|_| bad())?,
            };
            let scale = num_traits::pow(BigInt::from(10u8), frac.len());
            let frac_val: BigInt = frac.parse().map_err(|_| bad())?;
            let mag = int_val * &scale + frac_val;
            let num = if negative { -mag } else { mag };
            return Ok(Rational::from_bigints(num, scale));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from(n))
    }
}
