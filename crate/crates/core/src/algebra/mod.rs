//! Exact scalar arithmetic: rationals, polynomials, rational functions,
//! truncated z-Laurent series and Schur reduction.

pub mod gcd;
pub mod nilpotent;
pub mod paramrat;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod schur;
pub mod var;
pub mod zlaurent;

pub use paramrat::ParamRat;
pub use poly::{Monomial, Poly};
pub use rational::Rational;
pub use var::Var;
pub use zlaurent::{Coeff, ZLaurent};
