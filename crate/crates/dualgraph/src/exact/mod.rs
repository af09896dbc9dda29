//! Exact arithmetic: arbitrary-precision rationals, Hirzebruch-Jung
//! continued fractions, and bounded generalized Pell solving.
//!
//! Nothing in this crate touches floating point; every intersection
//! number downstream is a [`Rat`].

pub mod hj;
pub mod linalg;
pub mod pell;

use num_bigint::BigInt;

/// Exact rational number, always stored reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// gcd with the convention gcd(0, n) = n.
pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// Inverse of `a` modulo `n`, in `1..n`. None when gcd(a, n) != 1 or n < 2.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    // extended Euclid on (a mod n, n)
    let (mut r0, mut r1) = (i128::from(a % n), i128::from(n));
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    let n = i128::from(n);
    Some(u64::try_from(s0.rem_euclid(n)).expect("residue fits"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_lcm_conventions() {
        assert_eq!(gcd(12, 5), 1);
        assert_eq!(lcm(2, 3), 6);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn mod_inverse_small() {
        assert_eq!(mod_inverse(5, 12), Some(5));
        assert_eq!(mod_inverse(5, 9), Some(2));
        assert_eq!(mod_inverse(4, 12), None);
        assert_eq!(mod_inverse(1, 2), Some(1));
        assert_eq!(mod_inverse(3, 1), None);
    }

    #[test]
    fn rat_is_exact() {
        let x = rat(1, 3) + rat(1, 6);
        assert_eq!(x, rat(1, 2));
        assert_eq!(rat(-4, 8), rat(-1, 2));
    }
}
