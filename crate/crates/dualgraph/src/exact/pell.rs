//! Bounded solving of generalized Pell equations `A x^2 - B y^2 = N`.
//!
//! Solutions are found by exhaustive scan over `0 < |y| <= bound` with an
//! exact perfect-square test, so completeness within the bound is
//! immediate. The instances arising from the classification all have tiny
//! fundamental solutions; the scan bound exists only to make the
//! enumeration explicitly finite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Scan bound used by the command-line front end when none is given.
pub const DEFAULT_BOUND: u64 = 10_000;

/// The equation `A x^2 - B y^2 = N` with `A > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellProblem {
    a: BigInt,
    b: BigInt,
    n: BigInt,
}

impl PellProblem {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, n) = (a.into(), b.into(), n.into());
        if !a.is_positive() {
            return Err(Error::NonPositivePellA);
        }
        Ok(PellProblem { a, b, n })
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.n)
    }
}

/// All integer solutions `(x, y)` with `0 < |y| <= bound`, each verified
/// exactly, ordered by `|y|` then `x` (positive `y` first on ties).
pub fn pell_solve(problem: &PellProblem, bound: u64) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    for y_abs in 1..=bound {
        for y in [BigInt::from(y_abs), -BigInt::from(y_abs)] {
            let rhs = &problem.n + &problem.b * &y * &y;
            if rhs.is_negative() {
                continue;
            }
            let (x_sq, rem) = rhs.div_rem(&problem.a);
            if !rem.is_zero() {
                continue;
            }
            let x = x_sq.sqrt();
            if &x * &x != x_sq {
                continue;
            }
            out.push((x.clone(), y.clone()));
            if !x.is_zero() {
                out.push((-x, y));
            }
        }
    }
    // stable sort keeps the +y scan order on full ties
    out.sort_by(|(x1, y1), (x2, y2)| (y1.abs(), x1).cmp(&(y2.abs(), x2)));
    out
}
