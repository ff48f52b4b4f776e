//! The normally-lexicographic (n.-l.) order on exponent vectors: total
//! degree first, ordinary left-to-right lexicographic comparison on ties.
//!
//! The tie-break compares coordinates in stored variable order; the order is
//! therefore sensitive to variable permutations, and callers that permute
//! variables must re-sort.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::shape::{ExponentVector, PolynomialShape};

/// Compares two exponent vectors of equal length in n.-l. order.
pub fn nl_compare(a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::CompareLengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(nl_compare_unchecked(a, b))
}

fn nl_compare_unchecked(a: &ExponentVector, b: &ExponentVector) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.exponents().cmp(b.exponents()))
}

/// Returns the shape with its monomials in increasing n.-l. order.
pub fn nl_sort(p: &PolynomialShape) -> PolynomialShape {
    let mut monomials: Vec<ExponentVector> = p.monomials().to_vec();
    monomials.sort_by(nl_compare_unchecked);
    PolynomialShape::from_vectors(p.r(), monomials)
        .expect("sorting a valid shape preserves validity")
}

/// The n.-l. maximum of the monomial set.
pub fn high_member(p: &PolynomialShape) -> ExponentVector {
    p.monomials()
        .iter()
        .max_by(|a, b| nl_compare_unchecked(a, b))
        .expect("shapes are non-empty")
        .clone()
}

/// Support of the product of two polynomials with positive coefficients:
/// all pairwise exponent sums, deduplicated, in n.-l. order.
pub fn support_product(p: &PolynomialShape, q: &PolynomialShape) -> Result<PolynomialShape> {
    if p.r() != q.r() {
        return Err(Error::VariableCountMismatch {
            left: p.r(),
            right: q.r(),
        });
    }
    let mut sums = BTreeSet::new();
    for a in p.monomials() {
        for b in q.monomials() {
            sums.insert(a.sum(b)?.exponents().to_vec());
        }
    }
    let shape = PolynomialShape::new(p.r(), sums.into_iter().collect())?;
    Ok(nl_sort(&shape))
}
