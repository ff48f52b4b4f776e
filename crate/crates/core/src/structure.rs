//! Block-structure decomposition of the exponent matrix and the evaluated
//! matrix families attached to a polynomial's connected system: the
//! single-point blocks `S` and `K`, the full Jacobian `J0`, and its iterated
//! derivative levels with their Gram determinants.
//!
//! All rank assertions run in exact rational arithmetic; floating point
//! appears only in Gram-determinant magnitude reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::shard_rng;
use crate::shape::{ExponentMatrix, PolynomialShape};

/// Consecutive block decomposition of an exponent matrix: each block is a
/// maximal run of rows that are linearly independent, scanning top-down.
///
/// The first dependent row closes the block and opens the next one, so by
/// construction every block has full row rank and joining the next block's
/// first row never raises it. Block sizes sum to the row count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureDecomposition {
    /// Rank of the whole matrix.
    pub rank: usize,
    /// Block sizes `(rho_1, ..., rho_q)`.
    pub blocks: Vec<usize>,
    /// Number of blocks.
    pub q: usize,
    /// Half-open row ranges, one per block, partitioning `0..n_rows`.
    pub block_row_spans: Vec<(usize, usize)>,
}

impl StructureDecomposition {
    /// True when every block has the same size, equal to the full rank.
    pub fn uniform(&self) -> bool {
        self.blocks.iter().all(|&b| b == self.rank)
    }
}

fn rows_to_bigint(matrix: &ExponentMatrix, span: std::ops::Range<usize>) -> Vec<Vec<BigInt>> {
    span.map(|j| matrix.row(j).iter().map(|&e| BigInt::from(e)).collect())
        .collect()
}

/// Greedy maximal-independent-run decomposition.
///
/// Errors on a zero row; every other input decomposes, and the block sizes
/// always sum to the number of rows.
pub fn structure_decompose(matrix: &ExponentMatrix) -> Result<StructureDecomposition> {
    for (j, row) in matrix.rows().enumerate() {
        if row.iter().all(|&e| e == 0) {
            return Err(Error::ZeroRow { row: j });
        }
    }
    let n = matrix.n_rows();
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut block: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..n {
        let row: Vec<BigInt> = matrix.row(j).iter().map(|&e| BigInt::from(e)).collect();
        if block.is_empty() {
            block.push(row);
            continue;
        }
        let mut candidate = block.clone();
        candidate.push(row.clone());
        if linalg::rank_exact(&candidate) == block.len() + 1 {
            block = candidate;
        } else {
            spans.push((start, j));
            start = j;
            block = vec![row];
        }
    }
    spans.push((start, n));
    let blocks: Vec<usize> = spans.iter().map(|&(a, b)| b - a).collect();
    let full = rows_to_bigint(matrix, 0..n);
    Ok(StructureDecomposition {
        rank: linalg::rank_exact(&full),
        q: blocks.len(),
        blocks,
        block_row_spans: spans,
    })
}

/// Exact check of the two defining block conditions: deleting a block's last
/// row lowers its rank by one (a one-row block drops to rank zero), and
/// joining the next block's first row leaves the rank unchanged.
pub fn satisfies_block_conditions(
    matrix: &ExponentMatrix,
    decomposition: &StructureDecomposition,
) -> bool {
    for (idx, &(a, b)) in decomposition.block_row_spans.iter().enumerate() {
        let block = rows_to_bigint(matrix, a..b);
        let rho = b - a;
        if linalg::rank_exact(&block) != rho {
            return false;
        }
        let trimmed = rows_to_bigint(matrix, a..b - 1);
        if linalg::rank_exact(&trimmed) != rho - 1 {
            return false;
        }
        if idx + 1 < decomposition.q {
            let next_first = decomposition.block_row_spans[idx + 1].0;
            let mut joined = block;
            joined.push(
                matrix
                    .row(next_first)
                    .iter()
                    .map(|&e| BigInt::from(e))
                    .collect(),
            );
            if linalg::rank_exact(&joined) != rho {
                return false;
            }
        }
    }
    decomposition.blocks.iter().sum::<usize>() == matrix.n_rows()
}

/// All exponent pairs `(i, j)` with `0 <= i <= n`, `0 <= j <= m`, `i + j >= 1`,
/// as rows in increasing n.-l. order. Requires `n >= m >= 1`.
pub fn two_var_matrix(n: u32, m: u32) -> Result<ExponentMatrix> {
    if m == 0 || n < m {
        return Err(Error::BadGrid { n, m });
    }
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..=n {
        for j in 0..=m {
            if i + j >= 1 {
                rows.push(vec![i, j]);
            }
        }
    }
    rows.sort_by_key(|p| (p[0] + p[1], p[0], p[1]));
    ExponentMatrix::from_rows(rows)
}

/// Kind of one 2x2 block of the two-variable grid matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridBlockKind {
    /// Both rows have the same total degree; determinant is minus that degree.
    Stage,
    /// Straddles degrees d and d+1 with d + 1 <= m: rows (d,0), (0,d+1).
    MixedLow,
    /// Straddles with m < d + 1 <= n: rows (d,0), (d+1-m,m).
    MixedMiddle,
    /// Straddles with d > n: rows (n,d-n), (d+1-m,m).
    MixedHigh,
}

/// One checked 2x2 block of a two-variable grid decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct GridBlockCheck {
    pub rows: [(u32, u32); 2],
    pub kind: GridBlockKind,
    pub det: i64,
    /// Determinant matched the closed form for the block kind, including the
    /// `det >= n(m-a) > 0` bound for high mixed blocks.
    pub ok: bool,
}

/// Classifies every two-row block of the grid decomposition and checks its
/// determinant against the closed form for its kind.
pub fn grid_block_checks(
    n: u32,
    m: u32,
    matrix: &ExponentMatrix,
    decomposition: &StructureDecomposition,
) -> Vec<GridBlockCheck> {
    let mut out = Vec::new();
    for &(a, b) in &decomposition.block_row_spans {
        if b - a != 2 {
            continue;
        }
        let r1 = matrix.row(a);
        let r2 = matrix.row(a + 1);
        let (i1, j1) = (r1[0], r1[1]);
        let (i2, j2) = (r2[0], r2[1]);
        let det = i64::from(i1) * i64::from(j2) - i64::from(j1) * i64::from(i2);
        let d1 = u64::from(i1 + j1);
        let d2 = u64::from(i2 + j2);
        let (kind, ok) = if d1 == d2 {
            (GridBlockKind::Stage, det == -(d1 as i64))
        } else {
            let d = d1;
            if d < u64::from(m) {
                let expected = (d * (d + 1)) as i64;
                (
                    GridBlockKind::MixedLow,
                    (i1, j1) == (d as u32, 0) && det == expected,
                )
            } else if d <= u64::from(n) {
                let expected = (d * u64::from(m)) as i64;
                (
                    GridBlockKind::MixedMiddle,
                    (i1, j1) == (d as u32, 0) && det == expected,
                )
            } else {
                let a_off = d - u64::from(n);
                let expected = i64::from(n) * i64::from(m)
                    - a_off as i64 * (i64::from(n) + a_off as i64 + 1 - i64::from(m));
                let bound = i64::from(n) * (i64::from(m) - a_off as i64);
                (
                    GridBlockKind::MixedHigh,
                    det == expected && det >= bound && bound > 0,
                )
            }
        };
        out.push(GridBlockCheck {
            rows: [(i1, j1), (i2, j2)],
            kind,
            det,
            ok,
        });
    }
    out
}

/// A signed monomial `coeff * x^e` over a fixed flat variable list; the
/// entry alphabet of every matrix family here, closed under differentiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialTerm {
    pub coeff: i64,
    pub exps: Vec<u32>,
}

impl MonomialTerm {
    fn zero(n_vars: usize) -> Self {
        MonomialTerm {
            coeff: 0,
            exps: vec![0; n_vars],
        }
    }

    pub fn derivative(&self, var: usize) -> MonomialTerm {
        let e = self.exps[var];
        if self.coeff == 0 || e == 0 {
            return MonomialTerm::zero(self.exps.len());
        }
        let mut exps = self.exps.clone();
        exps[var] -= 1;
        MonomialTerm {
            coeff: self.coeff * i64::from(e),
            exps,
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        if self.coeff == 0 {
            return 0.0;
        }
        let mut v = self.coeff as f64;
        for (&e, &xi) in self.exps.iter().zip(x) {
            if e > 0 {
                v *= xi.powi(e as i32);
            }
        }
        v
    }

    pub fn eval_exact(&self, x: &[BigRational]) -> BigRational {
        if self.coeff == 0 {
            return BigRational::zero();
        }
        let mut v = BigRational::from(BigInt::from(self.coeff));
        for (&e, xi) in self.exps.iter().zip(x) {
            for _ in 0..e {
                v *= xi;
            }
        }
        v
    }
}

/// Which matrix family a symbolic or evaluated matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixFamily {
    /// Single-point block with inverse-coordinate factors, N x r.
    ScaledBlock,
    /// Single-point block without inverse factors, N x r.
    WeightedBlock,
    /// Signed Jacobian of the connected system, N x 2kr.
    Jacobian,
    /// Iterated derivative level j >= 1 (level 1 is the Jacobian itself).
    DerivativeLevel(usize),
}

/// A matrix whose entries are signed monomials in `n_vars` variables.
#[derive(Debug, Clone)]
pub struct SymbolicMatrix {
    pub family: MatrixFamily,
    pub n_vars: usize,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<MonomialTerm>,
}

impl SymbolicMatrix {
    pub fn entry(&self, row: usize, col: usize) -> &MonomialTerm {
        &self.entries[row * self.cols + col]
    }

    /// Arranges the entries column by column into one flat system of
    /// monomials and takes the transposed Jacobian of that system: rows are
    /// the variables, columns are the flattened entries.
    pub fn next_level(&self) -> SymbolicMatrix {
        let level = match self.family {
            MatrixFamily::DerivativeLevel(j) => j + 1,
            _ => 2,
        };
        let mut functions = Vec::with_capacity(self.rows * self.cols);
        for col in 0..self.cols {
            for row in 0..self.rows {
                functions.push(self.entry(row, col).clone());
            }
        }
        let rows = self.n_vars;
        let cols = functions.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for var in 0..rows {
            for f in &functions {
                entries.push(f.derivative(var));
            }
        }
        SymbolicMatrix {
            family: MatrixFamily::DerivativeLevel(level),
            n_vars: self.n_vars,
            rows,
            cols,
            entries,
        }
    }

    pub fn eval_f64(&self, point_flat: &[f64]) -> Result<EvaluatedMatrix> {
        if point_flat.len() != self.n_vars {
            return Err(Error::BadPoints {
                expected: self.n_vars,
                found: point_flat.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .map(|t| t.eval_f64(point_flat))
            .collect();
        Ok(EvaluatedMatrix {
            family: self.family,
            rows: self.rows,
            cols: self.cols,
            entries,
            points: point_flat.to_vec(),
        })
    }

    pub fn eval_exact(&self, point_flat: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
        if point_flat.len() != self.n_vars {
            return Err(Error::BadPoints {
                expected: self.n_vars,
                found: point_flat.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.entry(i, j).eval_exact(point_flat))
                    .collect()
            })
            .collect())
    }
}

/// A matrix family evaluated at concrete points.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluatedMatrix {
    pub family: MatrixFamily,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<f64>,
    /// The flattened evaluation point.
    pub points: Vec<f64>,
}

impl EvaluatedMatrix {
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    /// Gram determinant `det(M * M^T)`.
    pub fn gram_det(&self) -> f64 {
        linalg::gram_det_f64(&self.to_rows())
    }
}

/// Entry `(j, i)` of a single-point block: `sign * k_ji * gamma_j`, with the
/// exponent at `i` reduced by one when the family carries the `1/x_i` factor.
fn monomial_block_term(
    p: &PolynomialShape,
    j: usize,
    i: usize,
    n_vars: usize,
    offset: usize,
    reduce: bool,
    sign: i64,
) -> MonomialTerm {
    let kji = p.monomials()[j].exponents()[i];
    if kji == 0 {
        return MonomialTerm::zero(n_vars);
    }
    let mut exps = vec![0u32; n_vars];
    for (ii, &e) in p.monomials()[j].exponents().iter().enumerate() {
        exps[offset + ii] = e;
    }
    if reduce {
        exps[offset + i] -= 1;
    }
    MonomialTerm {
        coeff: sign * i64::from(kji),
        exps,
    }
}

/// Symbolic `K` block: entry `(j, i) = k_ji * gamma_j(x)`, all `r` columns.
pub fn k_matrix_symbolic(p: &PolynomialShape) -> SymbolicMatrix {
    let (n, r) = (p.n(), p.r());
    let mut entries = Vec::with_capacity(n * r);
    for j in 0..n {
        for i in 0..r {
            entries.push(monomial_block_term(p, j, i, r, 0, false, 1));
        }
    }
    SymbolicMatrix {
        family: MatrixFamily::WeightedBlock,
        n_vars: r,
        rows: n,
        cols: r,
        entries,
    }
}

/// Symbolic `S` block: entry `(j, i) = k_ji * gamma_j(x) / x_i`.
pub fn s_matrix_symbolic(p: &PolynomialShape) -> SymbolicMatrix {
    let (n, r) = (p.n(), p.r());
    let mut entries = Vec::with_capacity(n * r);
    for j in 0..n {
        for i in 0..r {
            entries.push(monomial_block_term(p, j, i, r, 0, true, 1));
        }
    }
    SymbolicMatrix {
        family: MatrixFamily::ScaledBlock,
        n_vars: r,
        rows: n,
        cols: r,
        entries,
    }
}

/// Symbolic Jacobian of the connected system for `2k` points: the block row
/// `(S(x_1), ..., S(x_k), -S(x_{k+1}), ..., -S(x_{2k}))`, N x 2kr.
pub fn jacobian_symbolic(p: &PolynomialShape, k: usize) -> SymbolicMatrix {
    let (n, r) = (p.n(), p.r());
    let n_vars = 2 * k * r;
    let mut entries = Vec::with_capacity(n * n_vars);
    for j in 0..n {
        for l in 0..2 * k {
            let sign = if l < k { 1 } else { -1 };
            for i in 0..r {
                entries.push(monomial_block_term(p, j, i, n_vars, l * r, true, sign));
            }
        }
    }
    SymbolicMatrix {
        family: MatrixFamily::Jacobian,
        n_vars,
        rows: n,
        cols: n_vars,
        entries,
    }
}

/// Symbolic derivative level `j >= 1`; level 1 is the Jacobian itself, each
/// further level differentiates the flattened entry system of the previous
/// one. Levels run up to the polynomial degree.
pub fn derivative_level_symbolic(
    p: &PolynomialShape,
    k: usize,
    level: usize,
) -> Result<SymbolicMatrix> {
    let max = p.max_degree() as usize;
    if level < 1 || level > max {
        return Err(Error::LevelOutOfRange { level, max });
    }
    let mut m = jacobian_symbolic(p, k);
    if level == 1 {
        m.family = MatrixFamily::DerivativeLevel(1);
        return Ok(m);
    }
    for _ in 1..level {
        m = m.next_level();
    }
    Ok(m)
}

fn check_nonzero(coords: &[f64]) -> Result<()> {
    match coords.iter().position(|&c| c == 0.0) {
        Some(index) => Err(Error::ZeroCoordinate { index }),
        None => Ok(()),
    }
}

fn flatten_points(p: &PolynomialShape, k: usize, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    if points.len() != 2 * k {
        return Err(Error::BadPoints {
            expected: 2 * k,
            found: points.len(),
        });
    }
    let mut flat = Vec::with_capacity(2 * k * p.r());
    for pt in points {
        if pt.len() != p.r() {
            return Err(Error::BadPoints {
                expected: p.r(),
                found: pt.len(),
            });
        }
        flat.extend_from_slice(pt);
    }
    Ok(flat)
}

/// `K` block evaluated at one point with nonzero coordinates.
pub fn k_matrix_at(p: &PolynomialShape, point: &[f64]) -> Result<EvaluatedMatrix> {
    if point.len() != p.r() {
        return Err(Error::BadPoints {
            expected: p.r(),
            found: point.len(),
        });
    }
    check_nonzero(point)?;
    k_matrix_symbolic(p).eval_f64(point)
}

/// `S` block evaluated at one point with nonzero coordinates.
pub fn s_matrix_at(p: &PolynomialShape, point: &[f64]) -> Result<EvaluatedMatrix> {
    if point.len() != p.r() {
        return Err(Error::BadPoints {
            expected: p.r(),
            found: point.len(),
        });
    }
    check_nonzero(point)?;
    s_matrix_symbolic(p).eval_f64(point)
}

/// Signed Jacobian of the connected system evaluated at `2k` points.
pub fn j0_at(p: &PolynomialShape, k: usize, points: &[Vec<f64>]) -> Result<EvaluatedMatrix> {
    let flat = flatten_points(p, k, points)?;
    check_nonzero(&flat)?;
    jacobian_symbolic(p, k).eval_f64(&flat)
}

/// Gram determinant of the Jacobian, `det(J0 * J0^T)`.
pub fn g0_at(p: &PolynomialShape, k: usize, points: &[Vec<f64>]) -> Result<f64> {
    Ok(j0_at(p, k, points)?.gram_det())
}

/// Derivative level `j` evaluated at `2k` points with nonzero coordinates.
pub fn iterated_jacobi(
    p: &PolynomialShape,
    k: usize,
    level: usize,
    points: &[Vec<f64>],
) -> Result<EvaluatedMatrix> {
    let flat = flatten_points(p, k, points)?;
    check_nonzero(&flat)?;
    derivative_level_symbolic(p, k, level)?.eval_f64(&flat)
}

/// Residuals of the connected system at `2k` points: for each monomial, the
/// first `k` evaluations count positively and the last `k` negatively.
pub fn system_residual(p: &PolynomialShape, k: usize, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    if points.len() != 2 * k {
        return Err(Error::BadPoints {
            expected: 2 * k,
            found: points.len(),
        });
    }
    for pt in points {
        if pt.len() != p.r() {
            return Err(Error::BadPoints {
                expected: p.r(),
                found: pt.len(),
            });
        }
    }
    Ok(p.monomials()
        .iter()
        .map(|mono| {
            let plus: f64 = points[..k].iter().map(|pt| mono.eval_f64(pt)).sum();
            let minus: f64 = points[k..].iter().map(|pt| mono.eval_f64(pt)).sum();
            plus - minus
        })
        .collect())
}

/// Random dyadic rational in `(0, 1]` with a 16-bit numerator, cheap enough
/// for exact rank computations.
pub fn dyadic_unit<R: Rng>(rng: &mut R) -> BigRational {
    let numerator: u32 = rng.gen_range(1..=1 << 16);
    BigRational::new(BigInt::from(numerator), BigInt::from(1u32 << 16))
}

/// Outcome of the randomized full-rank check for the assembled blocks
/// `(K(x_1), ..., K(x_q))`.
#[derive(Debug, Clone, Serialize)]
pub struct Prop3Report {
    pub trials: usize,
    pub passes: usize,
    pub fraction: f64,
    pub n: usize,
    pub q: usize,
}

/// Draws `q` random rational points in `(0,1]^r` per trial, assembles the
/// `K` blocks side by side, and counts how often the exact rank is `N`.
pub fn prop3_rank_check(p: &PolynomialShape, trials: usize, seed: u64) -> Result<Prop3Report> {
    let decomposition = structure_decompose(&p.exponent_matrix())?;
    let q = decomposition.q;
    let sym = k_matrix_symbolic(p);
    let n = p.n();
    let r = p.r();
    let passes = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = shard_rng(seed, trial);
            let mut assembled: Vec<Vec<BigRational>> = vec![Vec::with_capacity(q * r); n];
            for _ in 0..q {
                let point: Vec<BigRational> = (0..r).map(|_| dyadic_unit(&mut rng)).collect();
                let block = sym.eval_exact(&point).expect("point has r coordinates");
                for (row, block_row) in assembled.iter_mut().zip(block) {
                    row.extend(block_row);
                }
            }
            usize::from(linalg::rank_exact_rational(&assembled) == n)
        })
        .sum::<usize>();
    Ok(Prop3Report {
        trials,
        passes,
        fraction: if trials == 0 {
            1.0
        } else {
            passes as f64 / trials as f64
        },
        n,
        q,
    })
}

/// Sampling report for the regular region: the set of point tuples where
/// every derivative-level Gram determinant stays at or above `lambda`.
#[derive(Debug, Clone, Serialize)]
pub struct SingularSampleReport {
    pub lambda: f64,
    pub trials: usize,
    pub in_d_lambda: usize,
    pub fraction: f64,
    /// Derivative levels inspected, `1..=deg-1`.
    pub levels: Vec<usize>,
    /// Lower edge of the sampling cube.
    pub delta: f64,
}

/// Uniformly samples `[delta, 1]^{2kr}` and reports the fraction of samples
/// whose minimal Gram determinant over levels `1..=deg-1` is at least
/// `lambda`. `lambda = 0` counts every sample (Gram determinants are
/// non-negative); an infinite `lambda` is a sentinel that counts none.
pub fn singular_fraction(
    p: &PolynomialShape,
    k: usize,
    lambda: f64,
    trials: usize,
    seed: u64,
    delta: f64,
) -> Result<SingularSampleReport> {
    let m = p.max_degree() as usize;
    let levels: Vec<usize> = (1..m).collect();
    let symbolic: Vec<SymbolicMatrix> = levels
        .iter()
        .map(|&j| derivative_level_symbolic(p, k, j))
        .collect::<Result<_>>()?;
    let dims = 2 * k * p.r();
    let in_d_lambda = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = shard_rng(seed, trial);
            let point: Vec<f64> = (0..dims).map(|_| rng.gen_range(delta..=1.0)).collect();
            if lambda.is_infinite() && lambda > 0.0 {
                return 0usize;
            }
            if lambda == 0.0 {
                return 1usize;
            }
            let phi_min = symbolic
                .iter()
                .map(|s| s.eval_f64(&point).expect("dims match").gram_det())
                .fold(f64::INFINITY, f64::min);
            usize::from(phi_min >= lambda)
        })
        .sum::<usize>();
    Ok(SingularSampleReport {
        lambda,
        trials,
        in_d_lambda,
        fraction: if trials == 0 {
            1.0
        } else {
            in_d_lambda as f64 / trials as f64
        },
        levels,
        delta,
    })
}
