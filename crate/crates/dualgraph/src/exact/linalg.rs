//! Small exact linear algebra over the rationals: just enough to solve
//! the orthogonality systems of a dual graph and to test negative
//! definiteness by pivot signs.

use num_traits::Zero;

use crate::exact::{rat_int, Rat};

/// Solves `m * x = rhs` by Gaussian elimination with exact pivoting.
/// Returns `None` when the matrix is singular.
#[allow(clippy::needless_range_loop)] // two rows of `m` are live at once
pub fn solve(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    debug_assert_eq!(rhs.len(), n);
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    let mut x = vec![rat_int(0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for col in (row + 1)..n {
            acc -= &m[row][col] * &x[col];
        }
        x[row] = acc / &m[row][row];
    }
    Some(x)
}

/// Negative definiteness of a symmetric integer matrix, decided exactly.
///
/// Symmetric elimination without row exchanges: the k-th pivot equals the
/// ratio of consecutive leading principal minors, so the matrix is
/// negative definite iff every pivot is negative. A zero or positive
/// pivot ends the test.
#[allow(clippy::needless_range_loop)] // two rows of `m` are live at once
pub fn is_negative_definite(mat: &[Vec<i64>]) -> bool {
    let n = mat.len();
    let mut m: Vec<Vec<Rat>> = mat
        .iter()
        .map(|row| row.iter().map(|&v| rat_int(v)).collect())
        .collect();
    for k in 0..n {
        if m[k][k] >= rat_int(0) {
            return false;
        }
        let pivot = m[k][k].clone();
        for r in (k + 1)..n {
            if m[r][k].is_zero() {
                continue;
            }
            let factor = &m[r][k] / &pivot;
            for c in k..n {
                let delta = &factor * &m[k][c];
                m[r][c] -= delta;
            }
        }
    }
    true
}
