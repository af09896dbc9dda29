//! Hirzebruch-Jung continued fractions.
//!
//! `n/a = [b1,...,bk]` means `n/a = b1 - 1/(b2 - 1/(... - 1/bk))` with
//! every entry at least 2. The entries are the negated self-intersections
//! of the resolution chain of the cyclic quotient singularity 1/n(1,a),
//! read left to right; reversing the chain replaces `a` by its inverse
//! mod n.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::gcd;

/// A Hirzebruch-Jung chain `[b1,...,bk]`, every entry >= 2.
///
/// The empty chain stands for the smooth case.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HjChain {
    entries: Vec<u64>,
}

impl HjChain {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&b| b < 2) {
            return Err(Error::ChainEntry(bad));
        }
        Ok(HjChain { entries })
    }

    pub fn smooth() -> Self {
        HjChain { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        HjChain { entries }
    }

    pub fn is_all_twos(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|&b| b == 2)
    }

    /// Self-intersections of the chain curves: `-b1, ..., -bk`.
    pub fn self_intersections(&self) -> Vec<i64> {
        self.entries.iter().map(|&b| -(b as i64)).collect()
    }
}

impl fmt::Display for HjChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// Expands `n/a` into its Hirzebruch-Jung chain.
///
/// Requires `1 <= a < n` and `gcd(a, n) = 1`.
pub fn hj_expand(n: u64, a: u64) -> Result<HjChain> {
    if n == 0 || a == 0 || a >= n {
        return Err(Error::ChainInput {
            n,
            a,
            reason: "requires 1 <= a < n",
        });
    }
    if gcd(a, n) != 1 {
        return Err(Error::ChainInput {
            n,
            a,
            reason: "a and n must be coprime",
        });
    }
    let (mut n, mut a) = (u128::from(n), u128::from(a));
    let mut entries = Vec::new();
    while a > 0 {
        let b = n.div_ceil(a);
        entries.push(u64::try_from(b).expect("entry bounded by n"));
        (n, a) = (a, b * a - n);
    }
    Ok(HjChain { entries })
}

/// Recovers `(n, a)` from a chain; the inverse of [`hj_expand`].
///
/// The smooth (empty) chain recognizes as `(1, 0)`.
pub fn hj_recognize(chain: &HjChain) -> Result<(u64, u64)> {
    let mut n = BigUint::from(1u32);
    let mut a = BigUint::zero();
    for &b in chain.entries.iter().rev() {
        let next = BigUint::from(b) * &n - &a;
        a = std::mem::replace(&mut n, next);
    }
    let n = u64::try_from(&n).map_err(|_| Error::Overflow("recognized order"))?;
    let a = u64::try_from(&a).map_err(|_| Error::Overflow("recognized weight"))?;
    Ok((n, a))
}
