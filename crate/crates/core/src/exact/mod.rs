//! Exact scalars, polynomials and small dense matrices over the rationals.
//!
//! Every other module computes with these types. Case selection in the
//! closed-form solvers branches on exact equalities, so nothing here ever
//! rounds.

mod matrix;
mod polynomial;
mod rational;

pub use matrix::Matrix;
pub use polynomial::{poly_arith, poly_eval, PolyOp, PolyOperand, Polynomial};
pub use rational::{q, rat_arith, rat_pow, ArithOp, Rational};
