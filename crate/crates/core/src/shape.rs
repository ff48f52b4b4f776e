//! Monomial supports: exponent vectors, polynomial shapes, and the exponent
//! matrix, plus the JSON ingestion point shared by the library and the CLI.
//!
//! A shape stores only which monomials occur, never their coefficients; the
//! coefficients are integration variables of the special integral and live in
//! [`crate::quad`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One monomial's exponent tuple `(k_1, ..., k_r)`.
///
/// Total degree is always at least one: a constant term contributes nothing
/// to the oscillatory integrand and is rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ExponentVector {
    exponents: Vec<u32>,
}

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        let v = ExponentVector { exponents };
        if v.degree() == 0 {
            return Err(Error::ZeroDegreeMonomial { index: 0 });
        }
        Ok(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Total degree `k_1 + ... + k_r`.
    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    /// Variable indices with a nonzero exponent (0-based).
    pub fn support(&self) -> BTreeSet<usize> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Componentwise sum, the exponent vector of a product of monomials.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::CompareLengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let exps = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| a + b)
            .collect();
        ExponentVector::new(exps)
    }

    /// Evaluates the monomial at an `f64` point.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

/// The wire form of a polynomial-spec document:
/// `{"r": <int>, "monomials": [[int, ...], ...]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialDoc {
    r: usize,
    monomials: Vec<Vec<u32>>,
}

/// The full monomial support of a polynomial: `r` variables, `n` distinct
/// monomials, maximum degree `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialShape {
    r: usize,
    monomials: Vec<ExponentVector>,
}

impl PolynomialShape {
    /// Validates and stores a monomial list in its given order.
    ///
    /// Duplicates are a hard error: without coefficients there is nothing to
    /// merge, and a repeated row would silently change every rank statement.
    pub fn new(r: usize, monomials: Vec<Vec<u32>>) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroVariables);
        }
        if monomials.is_empty() {
            return Err(Error::EmptyMonomialList);
        }
        let mut seen = BTreeSet::new();
        let mut rows = Vec::with_capacity(monomials.len());
        for (index, exps) in monomials.into_iter().enumerate() {
            if exps.len() != r {
                return Err(Error::LengthMismatch {
                    index,
                    expected: r,
                    found: exps.len(),
                });
            }
            if exps.iter().all(|&e| e == 0) {
                return Err(Error::ZeroDegreeMonomial { index });
            }
            if !seen.insert(exps.clone()) {
                return Err(Error::DuplicateMonomial { index });
            }
            rows.push(ExponentVector { exponents: exps });
        }
        Ok(PolynomialShape { r, monomials: rows })
    }

    /// Parses the JSON polynomial-spec document, the single ingestion point
    /// for all modules and the CLI.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: PolynomialDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        PolynomialShape::new(doc.r, doc.monomials)
    }

    pub fn from_vectors(r: usize, monomials: Vec<ExponentVector>) -> Result<Self> {
        PolynomialShape::new(r, monomials.into_iter().map(|v| v.exponents).collect())
    }

    /// The support of the product polynomial `F(x_1...x_r) = sum_j a_j (x_1...x_r)^j`,
    /// `j = 1..=m`, the worked family whose convergence threshold is known in
    /// closed form.
    pub fn product_family(r: usize, m: u32) -> Result<Self> {
        let monomials = (1..=m).map(|j| vec![j; r]).collect();
        PolynomialShape::new(r, monomials)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of monomials.
    pub fn n(&self) -> usize {
        self.monomials.len()
    }

    /// Maximum total degree over the support.
    pub fn max_degree(&self) -> u64 {
        self.monomials.iter().map(|v| v.degree()).max().unwrap_or(0)
    }

    /// Sum of all exponents over all monomials.
    pub fn exponent_sum(&self) -> u64 {
        self.monomials.iter().map(|v| v.degree()).sum()
    }

    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monomials
    }

    /// The N x r matrix whose row j is monomial j's exponent vector, in
    /// stored order.
    pub fn exponent_matrix(&self) -> ExponentMatrix {
        ExponentMatrix {
            n_rows: self.n(),
            n_cols: self.r,
            entries: self
                .monomials
                .iter()
                .flat_map(|v| v.exponents.iter().copied())
                .collect(),
        }
    }

    /// Union of the supports of all monomials of top degree (0-based
    /// variable indices).
    pub fn senior_form_support(&self) -> BTreeSet<usize> {
        let m = self.max_degree();
        let mut out = BTreeSet::new();
        for v in &self.monomials {
            if v.degree() == m {
                out.extend(v.support());
            }
        }
        out
    }

    /// True when every variable appears in some top-degree monomial.
    pub fn senior_form_full(&self) -> bool {
        self.senior_form_support().len() == self.r
    }

    /// Connected-component partition of the variables that occur at all,
    /// where two variables are adjacent when they share a monomial. A split
    /// into several components means the polynomial is a sum of polynomials
    /// in disjoint variable sets.
    pub fn decomposability(&self) -> Decomposability {
        let mut parent: Vec<usize> = (0..self.r).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut occurs = vec![false; self.r];
        for v in &self.monomials {
            let support: Vec<usize> = v.support().into_iter().collect();
            for &i in &support {
                occurs[i] = true;
            }
            for w in support.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let mut groups: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        let mut unused = BTreeSet::new();
        for (i, &occ) in occurs.iter().enumerate() {
            if occ {
                let root = find(&mut parent, i);
                groups.entry(root).or_default().insert(i);
            } else {
                unused.insert(i);
            }
        }
        let components: Vec<BTreeSet<usize>> = groups.into_values().collect();
        Decomposability {
            decomposable: components.len() > 1,
            components,
            unused_variables: unused,
        }
    }
}

/// Result of the sum-of-fewer-variable-polynomials test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposability {
    pub decomposable: bool,
    /// Connected components of occurring variables, each sorted, in order of
    /// smallest member.
    pub components: Vec<BTreeSet<usize>>,
    /// Variables that occur in no monomial.
    pub unused_variables: BTreeSet<usize>,
}

/// Dense N x r matrix of non-negative monomial exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<u32>,
}

impl ExponentMatrix {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyMonomialList);
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::ZeroVariables);
        }
        let mut entries = Vec::with_capacity(rows.len() * n_cols);
        for (index, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::LengthMismatch {
                    index,
                    expected: n_cols,
                    found: row.len(),
                });
            }
            if row.iter().all(|&e| e == 0) {
                return Err(Error::ZeroRow { row: index });
            }
            entries.extend_from_slice(row);
        }
        Ok(ExponentMatrix {
            n_rows: rows.len(),
            n_cols,
            entries,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, j: usize) -> &[u32] {
        &self.entries[j * self.n_cols..(j + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.n_rows).map(move |j| self.row(j))
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self
            .rows()
            .map(|r| r.iter().map(|&e| i64::from(e)).collect())
            .collect();
        crate::linalg::rank_exact_i64(&rows)
    }

    /// Reinterprets the rows as a monomial support.
    pub fn to_shape(&self) -> Result<PolynomialShape> {
        PolynomialShape::new(self.n_cols, self.rows().map(|r| r.to_vec()).collect())
    }
}
