//! The Cesàro average of a geometric sequence, `(1/n) Σ_{k<n} (−a)^{pk}`.
//!
//! This scalar controls the Cesàro means of every 2×2 block in the
//! block-diagonal operator: on the second spectral component, the n-th
//! mean of the p-th power acts as multiplication by it.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rational::Rational;

fn check_domain(a: &Rational, p: u32, n: u32) -> Result<()> {
    if a.is_negative() || *a > Rational::ONE {
        return Err(Error::Domain(format!("a = {a} must lie in [0, 1]")));
    }
    if p == 0 || n == 0 {
        return Err(Error::Domain(format!("p = {p} and n = {n} must be positive")));
    }
    Ok(())
}

/// Closed form: `(1/n)(1 − r^n)/(1 − r)` with `r = (−a)^p`, or `1` when `r = 1`.
///
/// With `a = u/w` in lowest terms, `A = u^p`, `B = w^p` and `s = (−1)^p`,
/// the value is `S / (n·B^{n−1})` where `S = (B^n − (sA)^n)/(B − sA)`.
/// `S ≡ (sA)^{n−1} (mod w)` is coprime to `w`, so only `gcd(S, n)` has to be
/// cancelled; no big gcd is needed.
pub fn cesaro_geometric(a: &Rational, p: u32, n: u32) -> Result<Rational> {
    check_domain(a, p, n)?;
    if (-a).pow(p).is_one() {
        return Ok(Rational::ONE);
    }
    let (u, w) = (a.numer(), a.denom());
    let sa = if p % 2 == 1 { -u.pow(p) } else { u.pow(p) };
    let b = w.pow(p);
    let s_num = b.pow(n) - sa.pow(n);
    let s = s_num / (&b - &sa);
    let n_big = BigInt::from(n);
    let g = (&s % &n_big).gcd(&n_big);
    Ok(Rational::from_reduced_bigints(s / &g, (n_big / &g) * b.pow(n - 1)))
}

/// The literal average `(1/n) Σ_{k=0}^{n−1} (−a)^{pk}`, summed term by term.
pub fn cesaro_geometric_sum(a: &Rational, p: u32, n: u32) -> Result<Rational> {
    check_domain(a, p, n)?;
    let ratio = (-a).pow(p);
    let mut term = Rational::ONE;
    let mut total = Rational::ZERO;
    for _ in 0..n {
        total += &term;
        term *= &ratio;
    }
    Ok(total / Rational::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn examples() {
        assert_eq!(cesaro_geometric(&Rational::ZERO, 2, 5).unwrap(), r(1, 5));
        assert_eq!(cesaro_geometric(&r(1, 2), 2, 2).unwrap(), r(5, 8));
        assert_eq!(cesaro_geometric(&Rational::ONE, 1, 2).unwrap(), Rational::ZERO);
        // r = (−1)^2 = 1: every term is 1.
        assert_eq!(cesaro_geometric(&Rational::ONE, 2, 9).unwrap(), Rational::ONE);
    }

    #[test]
    fn direct_summation_oracle() {
        // (1/2)(1 + 1/4)
        let oracle = (Rational::ONE + r(1, 4)) / r(2, 1);
        assert_eq!(cesaro_geometric_sum(&r(1, 2), 2, 2).unwrap(), oracle);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(cesaro_geometric(&r(3, 2), 1, 1), Err(Error::Domain(_))));
        assert!(matches!(cesaro_geometric(&r(-1, 2), 1, 1), Err(Error::Domain(_))));
        assert!(cesaro_geometric(&r(1, 2), 0, 1).is_err());
        assert!(cesaro_geometric_sum(&r(1, 2), 1, 0).is_err());
    }

    #[test]
    fn even_powers_are_not_uniformly_small() {
        let value = cesaro_geometric(&r(99, 100), 2, 100).unwrap();
        assert!(value > r(2, 100));
    }

    fn arb_a() -> impl Strategy<Value = Rational> {
        (0i64..=64, 1i64..=64).prop_filter_map("a in [0,1]", |(n, d)| {
            (n <= d).then(|| Rational::new(n, d))
        })
    }

    proptest! {
        #[test]
        fn closed_form_matches_sum(a in arb_a(), p in 1u32..6, n in 1u32..40) {
            prop_assert_eq!(
                cesaro_geometric(&a, p, n).unwrap(),
                cesaro_geometric_sum(&a, p, n).unwrap()
            );
        }

        #[test]
        fn odd_powers_bounded_by_two_over_n(a in arb_a(), half in 0u32..3, n in 1u32..40) {
            let value = cesaro_geometric(&a, 2 * half + 1, n).unwrap();
            prop_assert!(value.abs() <= Rational::new(2, n as i64));
        }
    }
}
