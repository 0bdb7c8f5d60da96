//! Exact polynomial and rational-function arithmetic.

pub mod field;
pub mod identity;
mod kernel;
pub mod poly;
pub mod proj;
pub mod ratfunc;
pub mod symbol;

pub use field::{rational, Field, Fp, Rational, MODULUS};
pub use identity::{rf_equal_exact, rf_equal_randomized, RandomizedVerdict};
pub use poly::{Monomial, Polynomial};
pub use proj::ProjPoint;
pub use ratfunc::{CompiledRational, RatFn, RationalFunction};
pub use symbol::Symbol;
