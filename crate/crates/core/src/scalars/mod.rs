//! Exact coefficient field.
//!
//! Every coefficient in the engine lives in `K = Frac(C[pi, c_j, <phi>])`
//! where `C` is a cyclotomic field grown lazily as rational phases appear,
//! `c_j` are the declared irrational constants used as real numbers, and
//! `<phi> = exp(2 pi i phi)` are formal phase symbols. All of `pi`, the
//! constants and the irrational phases are treated as independent
//! transcendentals, which makes zero-testing a syntactic check.

use std::fmt;

use num_traits::{One, Signed};
use thiserror::Error;

mod cyclo;
mod exponent;
mod ring;
mod scalar;

pub use cyclo::{cyclotomic_poly, totient, Cyclotomic};
pub use exponent::{ConstantSystem, ScalarExponent};
pub use ring::{Monomial, Poly};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Writes `c1*name1 + c2*name2 - ...` with unit coefficients elided; an
/// empty name denotes the constant term.
pub(crate) fn write_linear_combination(
    f: &mut fmt::Formatter<'_>,
    parts: &[(Rational, String)],
) -> fmt::Result {
    for (idx, (c, name)) in parts.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        match (idx, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if name.is_empty() {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{mag}*{name}")?;
        }
    }
    if parts.is_empty() {
        write!(f, "0")?;
    }
    Ok(())
}
