//! Scalar types used for potential values.
//!
//! Potentials are generic over [`Scalar`]. Two implementations exist:
//! [`Rational`] (arbitrary precision, exact ties) and `f64` (ties decided
//! with an absolute tolerance).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Arbitrary precision binary float used by the large-t equilibrium solver.
pub type HpFloat = FBig<HalfEven, 2>;

/// Default absolute tolerance for float-mode equality.
pub const DEFAULT_TOL: f64 = 1e-9;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + Send + Sync + 'static
{
    /// Whether comparisons are exact (rational mode).
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    /// Equality up to `tol`; exact types ignore the tolerance.
    fn tie(&self, other: &Self, tol: f64) -> bool;

    /// Conversion into a high precision float with `bits` of mantissa.
    fn to_hp(&self, bits: usize) -> HpFloat;

    fn from_rational(r: &Rational) -> Self;

    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer conversion")
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// Text form used in JSON output.
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn is_tie_zero(&self, tol: f64) -> bool {
        self.tie(&Self::zero(), tol)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tie(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn to_hp(&self, bits: usize) -> HpFloat {
        HpFloat::try_from(*self)
            .expect("finite value")
            .with_precision(bits)
            .value()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Extremely large numerators/denominators: fall back to text.
            self.to_string()
                .split_once('/')
                .map(|(n, d)| n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN))
                .unwrap_or(f64::NAN)
        })
    }

    fn tie(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn to_hp(&self, bits: usize) -> HpFloat {
        let num = bigint_to_hp(self.numer(), bits);
        let den = bigint_to_hp(self.denom(), bits);
        num / den
    }
}

fn bigint_to_hp(v: &BigInt, bits: usize) -> HpFloat {
    let i = IBig::from_str(&v.to_string()).expect("decimal integer");
    HpFloat::from(i).with_precision(bits).value()
}

/// A parsed potential entry.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedValue {
    Exact(Rational),
    Float(f64),
}

impl ParsedValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ParsedValue::Exact(r) => Scalar::to_f64(r),
            ParsedValue::Float(f) => *f,
        }
    }
}

/// Parse `"3"`, `"-2/5"` as exact rationals and `"0.25"`, `"1e-3"` as floats.
pub fn parse_value(text: &str) -> Result<ParsedValue> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::invalid("empty numeric value"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::invalid(format!("bad rational '{s}'")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::invalid(format!("bad rational '{s}'")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in '{s}'")));
        }
        return Ok(ParsedValue::Exact(Rational::new(n, d)));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(ParsedValue::Exact(Rational::from_integer(i)));
    }
    match s.parse::<f64>() {
        Ok(f) if f.is_finite() => Ok(ParsedValue::Float(f)),
        _ => Err(Error::invalid(format!("cannot parse number '{s}'"))),
    }
}

/// Parse a rational, rejecting float syntax.
pub fn parse_rational(text: &str) -> Result<Rational> {
    match parse_value(text)? {
        ParsedValue::Exact(r) => Ok(r),
        ParsedValue::Float(_) => Err(Error::invalid(format!("'{text}' is not an exact rational"))),
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
