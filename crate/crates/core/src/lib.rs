//! Exact recurrences for products of solutions of constant-coefficient linear
//! recurrences.
//!
//! Given `x(m) = A_1 x(m−1) + … + A_s x(m−s)`, any termwise product of `n`
//! solutions again satisfies a linear recurrence. [`product`] derives one by
//! an exact nullspace computation; [`second_order`] holds the closed forms for
//! `s = 2` (u-binomial coefficients, the product characteristic polynomial and
//! its factorizations); [`appendix`] rebuilds the auxiliary matrices behind
//! the closed forms and checks their determinant identities.
//!
//! All arithmetic is exact over the rationals.

pub mod algebra;
pub mod appendix;
pub mod cli;
pub mod error;
pub mod product;
pub mod relation;
pub mod second_order;
pub mod sequences;

pub use algebra::{DensePolynomial, QuadraticContext, QuadraticRingElement, Rational, RationalMatrix};
pub use error::{Error, Result};
pub use product::{derive_product_recurrence, DerivationReport};
pub use relation::RecurrenceRelation;
pub use sequences::{IndexedValues, RecurrenceSpec, SecondOrderSpec, SequenceInstance};
