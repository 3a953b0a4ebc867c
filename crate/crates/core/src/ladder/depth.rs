//! Positions on a bottom chain.
//!
//! Rungs land at `j(n) = 2^{n+1} − n − 2`, so orbits of a few hundred steps
//! already touch bottom vertices whose index has hundreds of bits. A depth
//! is stored relative to the rung landing at or above it: `j = j(seg) − off`
//! with `j(seg − 1) < j ≤ j(seg)`. Every position an orbit reaches in
//! feasible time has a small `off`, so the encoding stays two machine words.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// The bottom-chain landing index of the rung leaving `s_n`: `2^{n+1} − n − 2`.
pub fn rung_position(n: u32) -> BigUint {
    assert!(n >= 1, "rungs are numbered from 1");
    (BigUint::one() << (n as usize + 1)) - BigUint::from(n) - BigUint::from(2u8)
}

fn rung_position_u128(n: u32) -> Option<u128> {
    if n >= 127 {
        return None;
    }
    Some((1u128 << (n + 1)) - n as u128 - 2)
}

/// Number of positions in segment `seg`, `j(seg) − j(seg − 1) = 2^seg − 1`.
fn segment_len(seg: u32) -> BigUint {
    (BigUint::one() << seg as usize) - BigUint::one()
}

const FAR: u64 = 1 << 63;

/// Where inside its segment a depth sits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Pos {
    /// `j = j(seg) − off`, used whenever `off < 2^63`.
    Below(u64),
    /// `j = j(seg − 1) + up`, used for the remaining positions of segments
    /// longer than `2^63`.
    Above(u64),
}

/// A bottom-chain index `j ≥ 1`.
///
/// Positions farther than `2^63` from the landing that closes their segment
/// are stored relative to the landing that opens it; positions far from both
/// ends of a segment beyond `2^64` are not representable.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Depth {
    seg: u32,
    pos: Pos,
}

impl Depth {
    /// `j = 1`, the vertex right above the sink.
    pub const FIRST: Depth = Depth {
        seg: 1,
        pos: Pos::Below(0),
    };

    pub(crate) fn from_parts(seg: u32, off: BigUint) -> Result<Depth> {
        if let Some(off) = off.to_u64().filter(|&o| o < FAR) {
            return Ok(Depth {
                seg,
                pos: Pos::Below(off),
            });
        }
        let up = segment_len(seg) - off;
        let up = up
            .to_u64()
            .ok_or_else(|| Error::IndexOverflow(format!("bottom position in segment {seg} is not representable")))?;
        Ok(Depth {
            seg,
            pos: Pos::Above(up),
        })
    }

    pub fn new(j: u64) -> Result<Depth> {
        if j == 0 {
            return Err(Error::InvalidVertex("bottom index must be at least 1".into()));
        }
        let mut seg = 1;
        loop {
            let landing = rung_position_u128(seg).expect("u64 indices land below segment 65");
            if landing >= j as u128 {
                return Depth::from_parts(seg, BigUint::from(landing - j as u128));
            }
            seg += 1;
        }
    }

    pub fn from_biguint(j: &BigUint) -> Result<Depth> {
        if let Some(small) = j.to_u64() {
            return Depth::new(small);
        }
        // j ≥ 2^64 lies in segment ≥ 63.
        let mut seg = (j.bits() as u32).saturating_sub(2).max(1);
        loop {
            let landing = rung_position(seg);
            if &landing >= j {
                return Depth::from_parts(seg, landing - j);
            }
            seg += 1;
        }
    }

    /// The rung landing `j(n)`.
    pub fn landing(n: u32) -> Depth {
        assert!(n >= 1, "rungs are numbered from 1");
        Depth {
            seg: n,
            pos: Pos::Below(0),
        }
    }

    /// Smallest `n` with `j(n) ≥ j`.
    pub fn segment(&self) -> u32 {
        self.seg
    }

    pub fn is_landing(&self) -> bool {
        self.pos == Pos::Below(0)
    }

    /// Whether `j − 1` is a rung landing.
    pub fn follows_landing(&self) -> bool {
        match self.pos {
            Pos::Above(up) => up == 1,
            Pos::Below(off) => self.seg >= 2 && self.seg < 64 && off + 2 == 1 << self.seg,
        }
    }

    pub fn value(&self) -> BigUint {
        match self.pos {
            Pos::Below(off) => rung_position(self.seg) - BigUint::from(off),
            Pos::Above(up) => rung_position(self.seg - 1) + BigUint::from(up),
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self.pos {
            Pos::Below(off) => u64::try_from(rung_position_u128(self.seg)? - off as u128).ok(),
            Pos::Above(up) => u64::try_from(rung_position_u128(self.seg - 1)? + up as u128).ok(),
        }
    }

    /// `j − 1`, or `None` when `j = 1` (the next vertex is the sink).
    ///
    /// Panics when the result is not representable.
    pub fn toward_sink(&self) -> Option<Depth> {
        if self.follows_landing() {
            return (self.seg > 1).then(|| Depth::landing(self.seg - 1));
        }
        if self.seg == 1 {
            return None;
        }
        Some(match self.pos {
            Pos::Below(off) => Depth::from_parts(self.seg, BigUint::from(off) + BigUint::one())
                .expect("bottom-chain depth beyond representable range"),
            Pos::Above(up) => Depth {
                seg: self.seg,
                pos: Pos::Above(up - 1),
            },
        })
    }

    /// `j + 1`.
    ///
    /// Panics when the result is not representable.
    pub fn toward_source(&self) -> Depth {
        let next = match self.pos {
            Pos::Below(0) => Depth::from_parts(self.seg + 1, segment_len(self.seg + 1) - BigUint::one()),
            Pos::Below(off) => Ok(Depth {
                seg: self.seg,
                pos: Pos::Below(off - 1),
            }),
            Pos::Above(up) => Depth::from_parts(self.seg, segment_len(self.seg) - BigUint::from(up) - BigUint::one()),
        };
        next.expect("bottom-chain depth beyond representable range")
    }
}

/// Weight of the bottom edge `t_j → t_{j−1}` (with `t_0` the sink): `2` at
/// a rung landing, `1/2` right above one, `1` elsewhere.
pub fn bottom_weight(j: Depth) -> Rational {
    if j.is_landing() {
        Rational::from_integer(2)
    } else if j.follows_landing() {
        Rational::new(1, 2)
    } else {
        Rational::ONE
    }
}

impl Ord for Depth {
    fn cmp(&self, other: &Self) -> Ordering {
        self.seg.cmp(&other.seg).then(match (self.pos, other.pos) {
            (Pos::Below(a), Pos::Below(b)) => b.cmp(&a),
            (Pos::Above(a), Pos::Above(b)) => a.cmp(&b),
            (Pos::Above(_), Pos::Below(_)) => Ordering::Less,
            (Pos::Below(_), Pos::Above(_)) => Ordering::Greater,
        })
    }
}

impl PartialOrd for Depth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_u64() {
            Some(j) => write!(f, "{j}"),
            None => write!(f, "{}", self.value()),
        }
    }
}

impl fmt::Debug for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(j: u64) -> Depth {
        Depth::new(j).unwrap()
    }

    #[test]
    fn small_rung_positions() {
        assert_eq!(rung_position(1), BigUint::from(1u8));
        assert_eq!(rung_position(2), BigUint::from(4u8));
        assert_eq!(rung_position(3), BigUint::from(11u8));
    }

    #[test]
    fn first_bottom_weights() {
        assert_eq!(bottom_weight(d(1)), Rational::from_integer(2));
        assert_eq!(bottom_weight(d(2)), Rational::new(1, 2));
        assert_eq!(bottom_weight(d(3)), Rational::ONE);
        assert_eq!(bottom_weight(d(4)), Rational::from_integer(2));
        assert_eq!(bottom_weight(d(5)), Rational::new(1, 2));
        for j in 6..=10 {
            assert_eq!(bottom_weight(d(j)), Rational::ONE, "j = {j}");
        }
        assert_eq!(bottom_weight(d(11)), Rational::from_integer(2));
        assert_eq!(bottom_weight(d(12)), Rational::new(1, 2));
    }

    #[test]
    fn weights_match_the_rule_on_plain_integers() {
        let landings: Vec<u64> = (1..12).map(|n| (1u64 << (n + 1)) - n - 2).collect();
        for j in 1..3000u64 {
            let expected = if landings.contains(&j) {
                Rational::from_integer(2)
            } else if landings.contains(&(j - 1)) {
                Rational::new(1, 2)
            } else {
                Rational::ONE
            };
            assert_eq!(bottom_weight(d(j)), expected, "j = {j}");
        }
    }

    #[test]
    fn stepping_matches_integer_arithmetic() {
        for j in 1..5000u64 {
            let x = d(j);
            assert_eq!(x.as_u64(), Some(j));
            assert_eq!(x.toward_source(), d(j + 1));
            match x.toward_sink() {
                None => assert_eq!(j, 1),
                Some(y) => assert_eq!(y, d(j - 1)),
            }
            assert!(x < d(j + 1));
        }
    }

    #[test]
    fn huge_landings_are_exact() {
        let x = Depth::landing(300);
        assert_eq!(x.value(), rung_position(300));
        assert_eq!(Depth::from_biguint(&x.value()).unwrap(), x);
        let below = x.toward_sink().unwrap();
        assert_eq!(below.value(), rung_position(300) - BigUint::one());
        assert_eq!(bottom_weight(below), Rational::ONE);
        assert!(x.as_u64().is_none());
        let above = x.toward_source();
        assert_eq!(above.value(), rung_position(300) + BigUint::one());
        assert_eq!(above.segment(), 301);
        assert_eq!(bottom_weight(above), Rational::new(1, 2));
        assert_eq!(above.toward_source().value(), rung_position(300) + BigUint::from(2u8));
        assert_eq!(above.toward_sink(), Some(x));
        assert!(x < above && below < x);
        assert_eq!(Depth::from_biguint(&above.value()).unwrap(), above);
        let middle = (rung_position(300) + rung_position(299)) >> 1;
        assert!(matches!(Depth::from_biguint(&middle), Err(Error::IndexOverflow(_))));
    }

    #[test]
    fn segment_64_straddles_u64() {
        let first = rung_position(63) + BigUint::one();
        let x = Depth::from_biguint(&first).unwrap();
        assert_eq!(x.segment(), 64);
        assert_eq!(x.as_u64(), first.to_u64());
        assert_eq!(bottom_weight(x), Rational::new(1, 2));
        assert_eq!(x.toward_sink(), Some(Depth::landing(63)));
        let mut y = x;
        for i in 1..200u32 {
            y = y.toward_source();
            assert_eq!(y.value(), &first + BigUint::from(i));
            assert_eq!(Depth::from_biguint(&y.value()).unwrap(), y);
        }
    }

    #[test]
    fn zero_is_not_a_depth() {
        assert!(Depth::new(0).is_err());
    }
}
