//! Exact arithmetic: truncated multivariate series, Laurent polynomials in an
//! auxiliary variable, and truncated series in inverse variables.

mod bitail;
mod laurent;
mod mseries;
mod serial;
mod tail;
mod varset;

pub use bitail::BiTail;
pub use laurent::LaurentPoly;
pub use mseries::{Exps, MSeries};
pub use serial::{SeriesJson, TermJson};
pub use tail::InvTail;
pub use varset::VarSet;

use num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
