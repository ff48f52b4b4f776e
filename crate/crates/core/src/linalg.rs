//! Exact integer/rational linear algebra plus a small floating-point
//! determinant for Gram diagnostics.
//!
//! Rank and determinant computations on exponent data must be certain, so
//! everything rational here runs in arbitrary precision; `det_f64` exists
//! only for magnitude reports where exactness is not claimed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rank of an integer matrix via fraction-free (Bareiss) elimination
/// with row and column pivoting.
pub fn rank_exact(rows: &[Vec<BigInt>]) -> usize {
    let n_rows = rows.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(pivot_row) = (rank..n_rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for i in rank + 1..n_rows {
            for j in col + 1..n_cols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                m[i][j] = num / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Convenience wrapper for machine-integer input.
pub fn rank_exact_i64(rows: &[Vec<i64>]) -> usize {
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    rank_exact(&big)
}

/// Exact rank of a rational matrix. Each row is scaled by the LCM of its
/// denominators (rank is invariant under nonzero row scaling) and the
/// integer matrix is handed to [`rank_exact`].
pub fn rank_exact_rational(rows: &[Vec<BigRational>]) -> usize {
    let scaled: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    rank_exact(&scaled)
}

/// Exact determinant of a square integer matrix (Bareiss). The determinant
/// of the empty matrix is 1.
pub fn det_exact(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if sign < 0 {
        -m[n - 1][n - 1].clone()
    } else {
        m[n - 1][n - 1].clone()
    }
}

/// Exact determinant of a square rational matrix, via row scaling and
/// [`det_exact`].
pub fn det_exact_rational(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut scaled: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in rows {
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scaled.push(row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        scale *= lcm;
    }
    BigRational::new(det_exact(&scaled), scale)
}

/// Determinant of a square `f64` matrix by LU with partial pivoting.
/// Returns 0.0 for a numerically singular matrix.
pub fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut det = 1.0f64;
    for k in 0..n {
        let (pivot_row, pivot_abs) = (k..n)
            .map(|i| (i, m[i][k].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_abs == 0.0 {
            return 0.0;
        }
        if pivot_row != k {
            m.swap(k, pivot_row);
            det = -det;
        }
        det *= m[k][k];
        let (pivot_rows, rest) = m.split_at_mut(k + 1);
        let pivot = &pivot_rows[k];
        for row in rest {
            let factor = row[k] / pivot[k];
            for (target, &source) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                *target -= factor * source;
            }
        }
    }
    det
}

/// Gram determinant `det(M * M^T)` of a rectangular `f64` matrix given as
/// rows. Non-negative up to rounding.
pub fn gram_det_f64(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut g = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            g[i][j] = dot;
            g[j][i] = dot;
        }
    }
    det_f64(g)
}

/// Signum of an exact rational determinant, for sign checks on small
/// matrices given as rationals.
pub fn det_sign_rational(rows: &[Vec<BigRational>]) -> i32 {
    let d = det_exact_rational(rows);
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}
