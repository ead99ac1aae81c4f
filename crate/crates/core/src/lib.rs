//! Exact solving of simultaneous first-order linear recurrences.
//!
//! A system
//!
//! ```text
//! y_i[x] = Σ_j α_ij · y_j[x-1] + α_i        (i = 1..n)
//! ```
//!
//! is handled two ways:
//!
//! * [`decouple`] turns it into one regular recurrence per variable with
//!   shared coefficients, via the characteristic polynomial and the
//!   Hamilton–Cayley theorem.
//! * [`pairsolve`] and [`triplesolve`] give explicit closed forms for
//!   two- and three-variable systems whose coefficient rows have equal
//!   sums, optionally linked by an invariant `b = w1·a + w2·c`.
//!
//! Every result can be checked against [`oracle`], which just iterates the
//! system with exact rationals.
//!
//! ```
//! use simrec::{fixtures, oracle, triplesolve};
//!
//! let system = fixtures::system_32();
//! let weights = triplesolve::detect_weights(&system).unwrap();
//! let form = triplesolve::closed_form_triple(&system, &weights).unwrap();
//! let trajectory = oracle::iterate(&system, 10).unwrap();
//! for x in 0..=10 {
//!     assert_eq!(form.evaluate(x).to_vec(), trajectory.row(x as usize));
//! }
//! ```

pub mod decouple;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod model;
pub mod oracle;
pub mod pairsolve;
pub mod triplesolve;

pub use error::{ExactError, ParseError, SolveError};
pub use exact::{Polynomial, Rational};
pub use model::{parse_system, RecurrenceSystem};
