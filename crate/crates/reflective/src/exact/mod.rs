//! Exact scalar arithmetic and truncated Puiseux series.
//!
//! Two scalar layers are used throughout the crate: plain rationals
//! (`num_rational::BigRational`) and [`CycSqrt`], a cyclotomic number times
//! the square root of a positive rational.  Formal expansions live in
//! [`PuiseuxSeries`], a truncated series with rational exponents over either
//! scalar ring.

pub mod cyclotomic;
pub mod series;

pub use cyclotomic::CycSqrt;
pub use series::{Coefficient, PuiseuxSeries};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

/// Exponents of Puiseux series and values of quadratic forms are small
/// rationals; `i64` numerators are ample for everything in scope.
pub type Expo = Ratio<i64>;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an exact integer rational.
pub fn rint(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Reduce a rational to its representative in `[0, 1)`, i.e. the value
/// modulo `1`.  Used for values of quadratic forms in `Q/Z`.
pub fn frac_mod1(x: Expo) -> Expo {
    let f = x.fract();
    if f < Ratio::default() {
        f + Ratio::from_integer(1)
    } else {
        f
    }
}
