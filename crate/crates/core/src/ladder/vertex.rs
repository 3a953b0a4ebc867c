use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

use super::depth::Depth;

/// A vertex of a ladder-family graph.
///
/// `Top { k, n }` is `s_n` of copy `k` and exists only for `n ≥ k + 1`;
/// `Bottom { k, j }` is `t_j` of copy `k`; `Sink(k)` is its `v`; `Entry(k)`
/// is its `o`. `Source` exists only in the combined graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LadderVertex {
    Source,
    Entry(u32),
    Sink(u32),
    Top { k: u32, n: u32 },
    Bottom { k: u32, j: Depth },
}

impl LadderVertex {
    pub fn bottom(k: u32, j: u64) -> Result<LadderVertex> {
        Ok(LadderVertex::Bottom { k, j: Depth::new(j)? })
    }

    pub fn top(k: u32, n: u32) -> Result<LadderVertex> {
        if n <= k {
            return Err(Error::InvalidVertex(format!(
                "T({k},{n}) does not exist: copy {k} starts at s_{}",
                k + 1
            )));
        }
        Ok(LadderVertex::Top { k, n })
    }

    /// The copy a vertex belongs to; `None` for the source.
    pub fn copy(&self) -> Option<u32> {
        match *self {
            LadderVertex::Source => None,
            LadderVertex::Entry(k) | LadderVertex::Sink(k) => Some(k),
            LadderVertex::Top { k, .. } | LadderVertex::Bottom { k, .. } => Some(k),
        }
    }

    pub(crate) fn is_well_formed(&self) -> bool {
        !matches!(*self, LadderVertex::Top { k, n } if n <= k)
    }
}

impl fmt::Display for LadderVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderVertex::Source => write!(f, "S"),
            LadderVertex::Entry(k) => write!(f, "E({k})"),
            LadderVertex::Sink(k) => write!(f, "V({k})"),
            LadderVertex::Top { k, n } => write!(f, "T({k},{n})"),
            LadderVertex::Bottom { k, j } => write!(f, "B({k},{j})"),
        }
    }
}

impl FromStr for LadderVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a ladder vertex: {s:?}"));
        let s = s.trim();
        if s == "S" {
            return Ok(LadderVertex::Source);
        }
        let (tag, rest) = s.split_at(s.find('(').ok_or_else(bad)?);
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let args: Vec<&str> = inner.split(',').map(str::trim).collect();
        let small = |a: &str| a.parse::<u32>().map_err(|_| bad());
        match (tag, args.as_slice()) {
            ("E", [k]) => Ok(LadderVertex::Entry(small(k)?)),
            ("V", [k]) => Ok(LadderVertex::Sink(small(k)?)),
            ("T", [k, n]) => LadderVertex::top(small(k)?, small(n)?),
            ("B", [k, j]) => {
                let j: BigUint = j.parse().map_err(|_| bad())?;
                Ok(LadderVertex::Bottom {
                    k: small(k)?,
                    j: Depth::from_biguint(&j)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

fn tier_start(t: u64) -> u128 {
    let t = t as u128;
    1 + t * t + 3 * t
}

fn to_u32(x: u64) -> u32 {
    u32::try_from(x).expect("enumeration index beyond the supported range")
}

/// The tier-diagonal enumeration of the combined graph: index 0 is the
/// source; tier `t` occupies `1 + t² + 3t ..` in block order
/// `[E(t), V(t), T(0,t+1) … T(t,t+1), B(0,t+1) … B(t,1)]`.
pub fn enumerate_vertex(i: u64) -> LadderVertex {
    if i == 0 {
        return LadderVertex::Source;
    }
    let i128 = i as u128;
    let mut t = (i as f64).sqrt() as u64;
    while t > 0 && tier_start(t) > i128 {
        t -= 1;
    }
    while tier_start(t + 1) <= i128 {
        t += 1;
    }
    let off = (i128 - tier_start(t)) as u64;
    match off {
        0 => LadderVertex::Entry(to_u32(t)),
        1 => LadderVertex::Sink(to_u32(t)),
        o if o < t + 3 => LadderVertex::Top {
            k: to_u32(o - 2),
            n: to_u32(t + 1),
        },
        o => {
            let k = o - t - 3;
            LadderVertex::Bottom {
                k: to_u32(k),
                j: Depth::new(t - k + 1).expect("positive by construction"),
            }
        }
    }
}

fn checked_index(x: u128) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::IndexOverflow(format!("vertex index {x} exceeds u64")))
}

fn bottom_u64(k: u32, j: &Depth) -> Result<u64> {
    j.as_u64()
        .ok_or_else(|| Error::IndexOverflow(format!("B({k},{j}) has an index beyond u64")))
}

/// Inverse of [`enumerate_vertex`].
pub fn index_of_vertex(v: &LadderVertex) -> Result<u64> {
    if !v.is_well_formed() {
        return Err(Error::InvalidVertex(format!("{v} does not exist")));
    }
    match *v {
        LadderVertex::Source => Ok(0),
        LadderVertex::Entry(k) => checked_index(tier_start(k as u64)),
        LadderVertex::Sink(k) => checked_index(tier_start(k as u64) + 1),
        LadderVertex::Top { k, n } => {
            let t = n as u64 - 1;
            checked_index(tier_start(t) + 2 + k as u128)
        }
        LadderVertex::Bottom { k, j } => {
            let t = bottom_u64(k, &j)? as u128 + k as u128 - 1;
            let t = u64::try_from(t).map_err(|_| Error::IndexOverflow(format!("{v} is beyond u64")))?;
            checked_index(tier_start(t) + t as u128 + 3 + k as u128)
        }
    }
}

/// Enumeration of a standalone copy `k`: `0 ↦ E(k)`, `1 ↦ V(k)`, then
/// alternating `T(k, k+1+t)` at `2 + 2t` and `B(k, t+1)` at `3 + 2t`.
pub fn enumerate_copy_vertex(k: u32, i: u64) -> LadderVertex {
    match i {
        0 => LadderVertex::Entry(k),
        1 => LadderVertex::Sink(k),
        _ => {
            let t = (i - 2) / 2;
            if i.is_multiple_of(2) {
                LadderVertex::Top {
                    k,
                    n: to_u32(k as u64 + 1 + t),
                }
            } else {
                LadderVertex::Bottom {
                    k,
                    j: Depth::new(t + 1).expect("positive by construction"),
                }
            }
        }
    }
}

/// Inverse of [`enumerate_copy_vertex`].
pub fn index_of_copy_vertex(k: u32, v: &LadderVertex) -> Result<u64> {
    if !v.is_well_formed() || v.copy() != Some(k) {
        return Err(Error::InvalidVertex(format!("{v} is not a vertex of copy {k}")));
    }
    match *v {
        LadderVertex::Entry(_) => Ok(0),
        LadderVertex::Sink(_) => Ok(1),
        LadderVertex::Top { n, .. } => Ok(2 + 2 * (n as u64 - k as u64 - 1)),
        LadderVertex::Bottom { j, .. } => {
            let j = bottom_u64(k, &j)?;
            j.checked_mul(2)
                .and_then(|x| x.checked_add(1))
                .ok_or_else(|| Error::IndexOverflow(format!("{v} is beyond u64")))
        }
        LadderVertex::Source => unreachable!("rejected above"),
    }
}
