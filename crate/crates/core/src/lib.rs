//! Analysis toolkit for the special integral of the multidimensional Tarry
//! problem: exact certificates computed from a polynomial's monomial support
//! (exponent-matrix rank and block structure, the degree-then-lexicographic
//! monomial order, completeness levels, convergence/divergence brackets) and
//! desk-scale numerical corroboration via truncated moment estimation and
//! randomized determinant identities.
//!
//! Shapes never carry coefficients: every certificate depends only on which
//! monomials occur. Coefficients enter only as the integration variables of
//! the estimators in [`quad`].

pub mod criteria;
pub mod error;
pub mod lemmas;
pub mod linalg;
pub mod order;
pub mod quad;
pub mod rng;
pub mod shape;
pub mod structure;

pub use error::{Error, Result};
pub use shape::{ExponentMatrix, ExponentVector, PolynomialShape};
