//! Exact scalars, matrices, polynomials and the quadratic ring used by every
//! other module.

pub mod matrix;
pub mod poly;
pub mod quadratic;
pub mod rational;

pub use matrix::RationalMatrix;
pub use poly::DensePolynomial;
pub use quadratic::{QuadraticContext, QuadraticRingElement};
pub use rational::{frac, parse_rational, parse_rational_list, rat, Rational};
