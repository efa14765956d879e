//! Exact matroid toolkit: constructions, basis-generating polynomials and
//! negative-dependence verdicts.

pub mod analysis;
pub mod bitset;
pub mod classifiers;
pub mod constructions;
pub mod determinantal;
pub mod error;
pub mod format;
pub mod iso;
pub mod matching;
pub mod matroid;
pub mod poly;

pub use bitset::ElemSet;
pub use error::{Error, Result};
pub use matroid::Matroid;
pub use poly::BoundedPoly;

pub type Rational = num_rational::BigRational;
