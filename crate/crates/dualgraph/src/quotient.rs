//! Cyclic quotient surface singularities 1/n(1,a) and their recognizers:
//! DuVal A_m detection, decompositions as one-parameter-smoothable
//! quotients 1/(n^2 d)(1, and-1), and the degenerate-cusp normalization
//! families.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::hj::{hj_expand, hj_recognize, HjChain};
use crate::exact::{gcd, mod_inverse};

/// The cyclic quotient singularity 1/n(1,a), stored with `1 <= a < n` and
/// `gcd(a, n) = 1`. The pair `(n, a)` is kept as given; equivalence with
/// `(n, a^-1 mod n)` is a predicate, never applied silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicQuotient {
    n: u64,
    a: u64,
}

impl CyclicQuotient {
    pub fn new(n: u64, a: u64) -> Result<Self> {
        if n < 2 || a == 0 || a >= n {
            return Err(Error::InvalidQuotient {
                n,
                a,
                reason: "requires 1 <= a < n",
            });
        }
        if gcd(a, n) != 1 {
            return Err(Error::InvalidQuotient {
                n,
                a,
                reason: "a and n must be coprime",
            });
        }
        Ok(CyclicQuotient { n, a })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn weight(&self) -> u64 {
        self.a
    }

    /// The mirror reading 1/n(1, a^-1 mod n), i.e. the same point with the
    /// resolution chain walked from the other end.
    pub fn inverse(&self) -> CyclicQuotient {
        let a_inv = mod_inverse(self.a, self.n).expect("coprime by invariant");
        CyclicQuotient { n: self.n, a: a_inv }
    }

    /// True when `other` is this singularity read in either orientation.
    pub fn is_equivalent_to(&self, other: &CyclicQuotient) -> bool {
        self == other || *self == other.inverse()
    }

    /// Resolution chain of the singularity: the expansion of n/a.
    pub fn dual_chain(&self) -> HjChain {
        hj_expand(self.n, self.a).expect("valid by invariant")
    }

    /// Recognizes the chain of a quotient singularity.
    pub fn from_chain(chain: &HjChain) -> Result<Self> {
        let (n, a) = hj_recognize(chain)?;
        CyclicQuotient::new(n, a)
    }

    /// `Some(m)` iff this is the DuVal point A_m = 1/(m+1)(1, m).
    pub fn is_duval(&self) -> Option<u64> {
        (self.a == self.n - 1).then_some(self.a)
    }

    /// All ways to write this point as 1/(n^2 d)(1, and-1), in either
    /// orientation. Empty means the point admits no such smoothable form.
    pub fn t_decompositions(&self) -> Vec<(TDecomposition, Orientation)> {
        let mut out = Vec::new();
        let big_n = self.n;
        let mut root = 1u64;
        while root * root <= big_n {
            if big_n.is_multiple_of(root * root) {
                let d = big_n / (root * root);
                for a in 1..=root {
                    if gcd(a, root) != 1 {
                        continue;
                    }
                    let residue = (a * root * d - 1) % big_n;
                    if residue == self.a {
                        out.push((TDecomposition { n: root, d, a }, Orientation::Direct));
                    } else if residue == self.inverse().a {
                        out.push((TDecomposition { n: root, d, a }, Orientation::Inverse));
                    }
                }
            }
            root += 1;
        }
        out.sort_by_key(|(t, o)| (t.n, t.d, t.a, *o));
        out
    }

    /// Degenerate-cusp families satisfied by this point read as 1/m(1,-b),
    /// i.e. with `b = m - a`. All matching families are reported, with
    /// every witness `s` for the two-parameter family.
    pub fn cusp_classes(&self) -> Vec<CuspClass> {
        cusp_classes_mb(self.n, self.n - self.a)
    }
}

impl fmt::Display for CyclicQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.n, self.a)
    }
}

/// Which chain orientation matched when recognizing a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Direct,
    Inverse,
}

/// The data `(n, d, a)` of a quotient 1/(n^2 d)(1, and-1) with
/// `gcd(a, n) = 1`. These are exactly the cyclic quotients admitting a
/// one-parameter smoothing with the right canonical class behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TDecomposition {
    pub n: u64,
    pub d: u64,
    pub a: u64,
}

impl TDecomposition {
    pub fn new(n: u64, d: u64, a: u64) -> Result<Self> {
        if n == 0 || d == 0 || a == 0 || a > n || gcd(a, n) != 1 {
            return Err(Error::InvalidQuotient {
                n,
                a,
                reason: "decomposition requires 1 <= a <= n coprime to n and d >= 1",
            });
        }
        Ok(TDecomposition { n, d, a })
    }

    /// Order of the represented singularity, `n^2 d`.
    pub fn singularity_order(&self) -> u64 {
        self.n * self.n * self.d
    }

    /// The represented singularity 1/(n^2 d)(1, and-1).
    pub fn singularity(&self) -> Result<CyclicQuotient> {
        let order = self.singularity_order();
        CyclicQuotient::new(order, (self.a * self.n * self.d - 1) % order)
    }
}

impl fmt::Display for TDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, d={}, a={})", self.n, self.d, self.a)
    }
}

/// Degenerate-cusp normalization families for a junction point 1/m(1,-b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum CuspFamily {
    Smooth,
    DuVal,
    /// b | m+1; chain has a single -3 entry.
    BDividesMPlus1,
    /// b | 2m+1; chain has a single -4 entry.
    BDivides2MPlus1,
    /// b | m+s+1 with b >= 2s+1 and s+1 | b-s.
    BDividesMSPlus1 { s: u64 },
}

/// A family membership together with the multiplicity of the non-normal
/// point it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CuspClass {
    pub family: CuspFamily,
    pub multiplicity: u64,
}

/// Families satisfied by the raw pair `(m, b)` of 1/m(1,-b); `(1, 0)`
/// encodes the smooth junction. Same conditions as
/// [`CyclicQuotient::cusp_classes`], usable before a quotient exists.
pub fn cusp_classes_mb(m: u64, b: u64) -> Vec<CuspClass> {
    let mut out = Vec::new();
    if m == 1 {
        out.push(CuspClass {
            family: CuspFamily::Smooth,
            multiplicity: 2,
        });
        return out;
    }
    if b == 1 {
        // 1/m(1,-1) is the A_{m-1} DuVal point
        out.push(CuspClass {
            family: CuspFamily::DuVal,
            multiplicity: 2,
        });
        return out;
    }
    if b == 0 || b >= m || gcd(b, m) != 1 {
        return out;
    }
    // b >= 2 here, so b != 1 mod m holds automatically
    if (m + 1).is_multiple_of(b) {
        out.push(CuspClass {
            family: CuspFamily::BDividesMPlus1,
            multiplicity: 3,
        });
    }
    if (2 * m + 1).is_multiple_of(b) {
        out.push(CuspClass {
            family: CuspFamily::BDivides2MPlus1,
            multiplicity: 4,
        });
    }
    let mut s = 1;
    while 2 * s < b {
        if (m + s + 1).is_multiple_of(b) && (b - s).is_multiple_of(s + 1) {
            out.push(CuspClass {
                family: CuspFamily::BDividesMSPlus1 { s },
                multiplicity: 4,
            });
        }
        s += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, a: u64) -> CyclicQuotient {
        CyclicQuotient::new(n, a).unwrap()
    }

    #[test]
    fn duval_detection() {
        assert_eq!(q(3, 2).is_duval(), Some(2));
        assert_eq!(q(12, 5).is_duval(), None);
        assert_eq!(q(2, 1).is_duval(), Some(1));
    }

    #[test]
    fn equivalence_is_orientation_blind() {
        assert!(q(9, 5).is_equivalent_to(&q(9, 2)));
        assert!(!q(9, 5).is_equivalent_to(&q(9, 4)));
        assert_eq!(q(7, 2).inverse(), q(7, 4));
    }

    #[test]
    fn decompositions_of_worked_examples() {
        let decs = q(12, 5).t_decompositions();
        assert_eq!(
            decs,
            vec![(TDecomposition { n: 2, d: 3, a: 1 }, Orientation::Direct)]
        );

        let decs = q(9, 5).t_decompositions();
        assert!(decs.contains(&(TDecomposition { n: 3, d: 1, a: 2 }, Orientation::Direct)));
        assert!(decs.contains(&(TDecomposition { n: 3, d: 1, a: 1 }, Orientation::Inverse)));

        let decs = q(100, 59).t_decompositions();
        assert!(decs.contains(&(TDecomposition { n: 5, d: 4, a: 3 }, Orientation::Direct)));
        assert!(decs.contains(&(TDecomposition { n: 5, d: 4, a: 2 }, Orientation::Inverse)));

        // 1/36(1,5) decomposes with n = 6 only
        let decs = q(36, 5).t_decompositions();
        assert_eq!(
            decs.iter().map(|(t, _)| *t).collect::<Vec<_>>(),
            vec![
                TDecomposition { n: 6, d: 1, a: 1 },
                TDecomposition { n: 6, d: 1, a: 5 }
            ]
        );

        // A_m points decompose with n = 1
        assert!(q(4, 3)
            .t_decompositions()
            .contains(&(TDecomposition { n: 1, d: 4, a: 1 }, Orientation::Direct)));
    }

    #[test]
    fn construction_round_trip_small() {
        for n in 1..=6u64 {
            for d in 1..=6u64 {
                if n * n * d < 2 {
                    continue;
                }
                for a in 1..=n {
                    if gcd(a, n) != 1 || (n == 1 && d == 1) {
                        continue;
                    }
                    let t = TDecomposition::new(n, d, a).unwrap();
                    let point = t.singularity().unwrap();
                    assert!(
                        point
                            .t_decompositions()
                            .iter()
                            .any(|(dec, _)| *dec == t),
                        "missing {t} for {point}"
                    );
                }
            }
        }
    }

    #[test]
    fn duval_iff_all_twos() {
        for n in 2..=60u64 {
            for a in 1..n {
                if gcd(a, n) != 1 {
                    continue;
                }
                let point = q(n, a);
                assert_eq!(
                    point.is_duval().is_some(),
                    point.dual_chain().is_all_twos()
                );
            }
        }
    }

    #[test]
    fn cusp_families_of_worked_examples() {
        // m = 3, b = 1: the A_2 point
        assert_eq!(
            q(3, 2).cusp_classes(),
            vec![CuspClass {
                family: CuspFamily::DuVal,
                multiplicity: 2
            }]
        );

        // closed-form check at m~ = k = 1: 1/12(1,7), b = 5 divides 2*12+1
        let classes = q(12, 7).cusp_classes();
        assert!(classes.contains(&CuspClass {
            family: CuspFamily::BDivides2MPlus1,
            multiplicity: 4
        }));

        // the single -3 family: 1/3(1,1) has b = 2 | 4
        assert_eq!(
            q(3, 1).cusp_classes(),
            vec![CuspClass {
                family: CuspFamily::BDividesMPlus1,
                multiplicity: 3
            }]
        );

        // junction encoded as (1, 0) is smooth
        assert_eq!(cusp_classes_mb(1, 0)[0].family, CuspFamily::Smooth);
    }
}
