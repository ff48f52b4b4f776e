//! Randomized and exact verification of the closed-form Hessian determinant
//! identity for a single monomial, and of the two-row block structure of the
//! two-variable grid matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::shard_rng;
use crate::shape::ExponentVector;
use crate::structure::{self, dyadic_unit, grid_block_checks, structure_decompose, GridBlockCheck};

/// Lower edge of the default sampling cube; matches the sampling guard used
/// by the structure checks.
pub const DEFAULT_DELTA: f64 = 1.0 / 16.0;

fn validate_exponents(kvec: &ExponentVector) -> Result<()> {
    if kvec.len() < 2 {
        return Err(Error::NeedsTwoVariables);
    }
    if let Some(index) = kvec.exponents().iter().position(|&k| k == 0) {
        return Err(Error::ZeroExponent { index });
    }
    Ok(())
}

fn check_point(point: &[f64], r: usize) -> Result<()> {
    if point.len() != r {
        return Err(Error::BadPoints {
            expected: r,
            found: point.len(),
        });
    }
    if let Some(index) = point.iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroCoordinate { index });
    }
    Ok(())
}

/// The r x r second-derivative matrix of the monomial `x^k` with entry
/// `(i, j) = k_i (k_j - delta_ij) x^k / (x_i x_j)`, as rows.
fn hessian_rows_f64(kvec: &ExponentVector, point: &[f64]) -> Vec<Vec<f64>> {
    let r = kvec.len();
    let xk: f64 = kvec.eval_f64(point);
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let ki = f64::from(kvec.exponents()[i]);
                    let kj = f64::from(kvec.exponents()[j]);
                    let delta = if i == j { 1.0 } else { 0.0 };
                    ki * (kj - delta) * xk / (point[i] * point[j])
                })
                .collect()
        })
        .collect()
}

fn hessian_rows_exact(kvec: &ExponentVector, point: &[BigRational]) -> Vec<Vec<BigRational>> {
    let r = kvec.len();
    let mut xk = BigRational::from(BigInt::from(1));
    for (e, xi) in kvec.exponents().iter().zip(point) {
        for _ in 0..*e {
            xk *= xi;
        }
    }
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let ki = BigInt::from(kvec.exponents()[i]);
                    let kj = BigInt::from(kvec.exponents()[j]);
                    let delta = BigInt::from(u32::from(i == j));
                    let factor = BigRational::from(ki * (kj - delta));
                    factor * &xk / (&point[i] * &point[j])
                })
                .collect()
        })
        .collect()
}

/// Determinant of the monomial's second-derivative matrix at one point.
pub fn monomial_hessian_det(kvec: &ExponentVector, point: &[f64]) -> Result<f64> {
    validate_exponents(kvec)?;
    check_point(point, kvec.len())?;
    Ok(linalg::det_f64(hessian_rows_f64(kvec, point)))
}

/// The closed form the determinant must equal:
/// `(-1)^r (1 - sum k_i) * prod k_i * (x^k)^r / (prod x_i)^2`.
pub fn hessian_closed_form(kvec: &ExponentVector, point: &[f64]) -> f64 {
    let r = kvec.len();
    let factor = closed_form_factor(kvec) as f64;
    let prod_k: f64 = kvec.exponents().iter().map(|&k| f64::from(k)).product();
    let xk = kvec.eval_f64(point);
    let prod_x: f64 = point.iter().product();
    factor * prod_k * xk.powi(r as i32) / (prod_x * prod_x)
}

/// The integer factor `(-1)^r (1 - sum k_i)`; nonzero whenever all
/// exponents are positive and `r >= 2`.
pub fn closed_form_factor(kvec: &ExponentVector) -> i64 {
    let sum = kvec.degree() as i64;
    let sign = if kvec.len().is_multiple_of(2) { 1 } else { -1 };
    sign * (1 - sum)
}

/// Outcome of the randomized identity check for one exponent vector.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Result {
    pub exponents: Vec<u32>,
    pub trials: usize,
    pub max_relative_error: f64,
    /// `(-1)^r (1 - sum k_i)`.
    pub closed_form_factor: i64,
    /// Determinant sign matched the factor's sign at every sampled point.
    pub sign_exact: bool,
    pub pass: bool,
}

/// Error threshold for accepting the identity numerically.
pub const LEMMA2_TOLERANCE: f64 = 1e-9;

/// Compares the determinant against the closed form at `trials` random
/// points in `[delta, 1]^r`, reporting the worst relative error and whether
/// the sign matched everywhere.
pub fn verify_lemma2(
    kvec: &ExponentVector,
    trials: usize,
    seed: u64,
    delta: f64,
) -> Result<Lemma2Result> {
    validate_exponents(kvec)?;
    let r = kvec.len();
    let factor = closed_form_factor(kvec);
    let mut rng = shard_rng(seed, 0);
    let mut max_rel = 0.0f64;
    let mut sign_exact = true;
    for _ in 0..trials {
        let point: Vec<f64> = (0..r).map(|_| rng.gen_range(delta..=1.0)).collect();
        let det = linalg::det_f64(hessian_rows_f64(kvec, &point));
        let expected = hessian_closed_form(kvec, &point);
        let rel = (det - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        max_rel = max_rel.max(rel);
        if (det > 0.0) != (factor > 0) || det == 0.0 {
            sign_exact = false;
        }
    }
    Ok(Lemma2Result {
        exponents: kvec.exponents().to_vec(),
        trials,
        max_relative_error: max_rel,
        closed_form_factor: factor,
        sign_exact,
        pass: max_rel < LEMMA2_TOLERANCE && sign_exact,
    })
}

/// Maximum variable count for the exact verification mode.
pub const EXACT_MODE_MAX_R: usize = 3;

/// Exact-arithmetic form of the identity check: at random dyadic rational
/// points the determinant must equal the closed form exactly. The stronger
/// oracle behind [`verify_lemma2`], limited to small `r`.
pub fn verify_lemma2_exact(kvec: &ExponentVector, trials: usize, seed: u64) -> Result<bool> {
    validate_exponents(kvec)?;
    let r = kvec.len();
    if r > EXACT_MODE_MAX_R {
        return Err(Error::ExactModeTooLarge {
            r,
            max: EXACT_MODE_MAX_R,
        });
    }
    let factor = BigInt::from(closed_form_factor(kvec));
    let prod_k: BigInt = kvec.exponents().iter().map(|&k| BigInt::from(k)).product();
    let mut rng = shard_rng(seed, 1);
    for _ in 0..trials {
        let point: Vec<BigRational> = (0..r).map(|_| dyadic_unit(&mut rng)).collect();
        let det = linalg::det_exact_rational(&hessian_rows_exact(kvec, &point));
        let mut xk = BigRational::from(BigInt::from(1));
        for (e, xi) in kvec.exponents().iter().zip(&point) {
            for _ in 0..*e {
                xk *= xi;
            }
        }
        let mut xk_pow = BigRational::from(BigInt::from(1));
        for _ in 0..r {
            xk_pow *= &xk;
        }
        let prod_x: BigRational = point.iter().product();
        let expected = BigRational::from(&factor * &prod_k) * xk_pow / (&prod_x * &prod_x);
        if det != expected || det.is_zero() {
            return Ok(false);
        }
        if det.is_positive() != factor.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Structure report for the two-variable grid matrix with parameters
/// `(n, m)`: the expected block pattern is all twos, with a trailing one
/// exactly when the row count is odd.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub n: u32,
    pub m: u32,
    pub rows: usize,
    pub structure: Vec<usize>,
    pub blocks: Vec<GridBlockCheck>,
    pub pass: bool,
}

/// Builds the grid matrix, decomposes it, and checks both the block-size
/// pattern and every block determinant's closed form.
pub fn verify_lemma1(n: u32, m: u32) -> Result<Lemma1Report> {
    let matrix = structure::two_var_matrix(n, m)?;
    let decomposition = structure_decompose(&matrix)?;
    let rows = matrix.n_rows();
    let expected: Vec<usize> = if rows % 2 == 0 {
        vec![2; rows / 2]
    } else {
        let mut v = vec![2; rows / 2];
        v.push(1);
        v
    };
    let blocks = grid_block_checks(n, m, &matrix, &decomposition);
    let pass = decomposition.blocks == expected && blocks.iter().all(|b| b.ok);
    Ok(Lemma1Report {
        n,
        m,
        rows,
        structure: decomposition.blocks,
        blocks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kvec(exps: &[u32]) -> ExponentVector {
        ExponentVector::new(exps.to_vec()).unwrap()
    }

    #[test]
    fn hessian_hand_values() {
        // (1,1) at (1,1): [[0,1],[1,0]], det -1.
        let d = monomial_hessian_det(&kvec(&[1, 1]), &[1.0, 1.0]).unwrap();
        assert!((d + 1.0).abs() < 1e-12);

        // (2,1) at (1,1): [[2,2],[2,0]], det -4.
        let d = monomial_hessian_det(&kvec(&[2, 1]), &[1.0, 1.0]).unwrap();
        assert!((d + 4.0).abs() < 1e-12);

        // (1,1,1): closed form is 2xyz, so 2 at the all-ones point.
        let d = monomial_hessian_det(&kvec(&[1, 1, 1]), &[1.0, 1.0, 1.0]).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
        let cf = hessian_closed_form(&kvec(&[1, 1, 1]), &[0.5, 0.5, 0.5]);
        assert!((cf - 2.0 * 0.125).abs() < 1e-12);
    }

    #[test]
    fn hessian_rejects_bad_input() {
        assert_eq!(
            monomial_hessian_det(&kvec(&[2]), &[1.0]).unwrap_err(),
            Error::NeedsTwoVariables
        );
        assert_eq!(
            monomial_hessian_det(&kvec(&[1, 0]), &[1.0, 1.0]).unwrap_err(),
            Error::ZeroExponent { index: 1 }
        );
        assert_eq!(
            monomial_hessian_det(&kvec(&[1, 1]), &[1.0, 0.0]).unwrap_err(),
            Error::ZeroCoordinate { index: 1 }
        );
    }

    #[test]
    fn lemma2_small_vectors() {
        for exps in [vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![3, 2, 1]] {
            let res = verify_lemma2(&kvec(&exps), 200, 7, DEFAULT_DELTA).unwrap();
            assert!(res.pass, "failed for {exps:?}: {res:?}");
            assert_ne!(res.closed_form_factor, 0);
        }
    }

    #[test]
    fn lemma2_exact_mode() {
        for exps in [
            vec![1, 1],
            vec![2, 1],
            vec![2, 2],
            vec![1, 1, 1],
            vec![3, 1, 2],
        ] {
            assert!(verify_lemma2_exact(&kvec(&exps), 25, 11).unwrap());
        }
        assert!(matches!(
            verify_lemma2_exact(&kvec(&[1, 1, 1, 1]), 5, 11).unwrap_err(),
            Error::ExactModeTooLarge { .. }
        ));
    }

    #[test]
    fn lemma1_reports() {
        // (3,3): 15 rows, odd, so a trailing singleton.
        let rep = verify_lemma1(3, 3).unwrap();
        assert_eq!(rep.rows, 15);
        assert_eq!(rep.structure, vec![2, 2, 2, 2, 2, 2, 2, 1]);
        assert!(rep.pass);

        let rep = verify_lemma1(3, 1).unwrap();
        assert_eq!(rep.rows, 7);
        assert_eq!(rep.structure, vec![2, 2, 2, 1]);
        assert!(rep.pass);

        let rep = verify_lemma1(1, 1).unwrap();
        assert_eq!(rep.structure, vec![2, 1]);
        assert!(rep.pass);

        assert!(verify_lemma1(1, 2).is_err());
    }
}
