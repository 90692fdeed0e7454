//! The dual number backend: exact big rationals or `f64` with a tolerance.
//!
//! Every structural map in this crate (flips, duality, X-projection,
//! holonomy) is a rational function of the coordinates, so the exact backend
//! carries them with no rounding at all. The float backend exists for the
//! handful of operations that need radicals: decoration normalization
//! (a cube root), the hyperbolic embedding (square roots), and cell centers
//! (cosines). A coordinate set commits to one backend; the two never mix.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar, always kept in lowest terms with positive
/// denominator by `num-rational`.
pub type Rational = num_rational::BigRational;

/// Absolute tolerance used by the float backend for sign classification and
/// approximate equality. Inputs are expected to be normalized to O(10)
/// magnitudes, where this leaves six orders of headroom under the worked
/// decimal values.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// Which arithmetic a scalar type provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

/// Tri-state sign of a scalar; the float backend maps `|x| < FLOAT_TOLERANCE`
/// to `Zero`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Arithmetic interface every kernel is generic over.
///
/// Implemented by [`Rational`] (exact) and `f64` (tolerance-based). The
/// operator bounds are by-value; big-rational values are cloned where an
/// operand must survive, which is fine at the sizes these algorithms produce.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Sign classification; exact on rationals, tolerance `FLOAT_TOLERANCE`
    /// on floats.
    fn sign(&self) -> Sign;

    /// Lossy view, used only for rendering.
    fn to_f64(&self) -> f64;

    /// Square root; exact backend refuses (the result leaves the rationals).
    fn sqrt(&self) -> Result<Self, Error>;

    /// Cube root; exact backend refuses.
    fn cbrt(&self) -> Result<Self, Error>;

    /// Parse the canonical text form: `p/q` or an integer for rationals, any
    /// of those or a decimal for floats.
    fn parse(text: &str) -> Result<Self, Error>;

    /// Canonical text form (`p/q` in lowest terms / shortest round-trip
    /// decimal); inverse of [`Scalar::parse`].
    fn render(&self) -> String;

    /// Read from a JSON value (string form always allowed; numbers allowed on
    /// the float backend).
    fn from_json(value: &serde_json::Value) -> Result<Self, Error>;

    /// Write as a JSON value: strings for rationals, numbers for floats.
    fn to_json(&self) -> serde_json::Value;

    fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    /// Backend equality: exact on rationals, within `FLOAT_TOLERANCE` on
    /// floats.
    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() == Sign::Zero
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn one() -> Self {
        <Rational as One>::one()
    }

    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn sign(&self) -> Sign {
        if Zero::is_zero(self) {
            Sign::Zero
        } else if Signed::is_positive(self) {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Fall back to a quotient of lossy halves for out-of-range parts.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn sqrt(&self) -> Result<Self, Error> {
        Err(Error::ExactBackendUnsupported { op: "square root" })
    }

    fn cbrt(&self) -> Result<Self, Error> {
        Err(Error::ExactBackendUnsupported { op: "cube root" })
    }

    fn parse(text: &str) -> Result<Self, Error> {
        text.trim().parse::<Rational>().map_err(|_| Error::BadInput {
            detail: format!("cannot parse {text:?} as a rational (expected \"p/q\" or an integer)"),
        })
    }

    fn render(&self) -> String {
        self.to_string()
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, Error> {
        match value {
            serde_json::Value::String(s) => Self::parse(s),
            other => Err(Error::BadInput {
                detail: format!("rational values must be JSON strings, got {other}"),
            }),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.render())
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn sign(&self) -> Sign {
        if self.abs() < FLOAT_TOLERANCE {
            Sign::Zero
        } else if *self > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt(&self) -> Result<Self, Error> {
        if *self < 0.0 {
            return Err(Error::NonpositiveParameter {
                context: format!("square root of {self}"),
            });
        }
        Ok(f64::sqrt(*self))
    }

    fn cbrt(&self) -> Result<Self, Error> {
        Ok(f64::cbrt(*self))
    }

    fn parse(text: &str) -> Result<Self, Error> {
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            let n: f64 = num.trim().parse().map_err(|_| bad_float(text))?;
            let d: f64 = den.trim().parse().map_err(|_| bad_float(text))?;
            if d == 0.0 {
                return Err(bad_float(text));
            }
            return Ok(n / d);
        }
        let v: f64 = t.parse().map_err(|_| bad_float(text))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad_float(text))
        }
    }

    fn render(&self) -> String {
        format!("{self}")
    }

    fn from_json(value: &serde_json::Value) -> Result<Self, Error> {
        match value {
            serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| Error::BadInput {
                detail: format!("number {n} does not fit in f64"),
            }),
            serde_json::Value::String(s) => Self::parse(s),
            other => Err(Error::BadInput {
                detail: format!("float values must be JSON numbers or strings, got {other}"),
            }),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            // Non-finite values cannot appear in valid coordinates; keep the
            // serialization total anyway.
            .unwrap_or(serde_json::Value::Null)
    }
}

fn bad_float(text: &str) -> Error {
    Error::BadInput {
        detail: format!("cannot parse {text:?} as a finite float"),
    }
}

/// Sum of a product list, used by the polynomial kernels.
pub fn dot<S: Scalar>(pairs: &[(S, S)]) -> S {
    pairs
        .iter()
        .map(|(a, b)| a.clone() * b.clone())
        .fold(S::zero(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_and_reduction() {
        let x = Rational::from_ratio(25, 100);
        assert_eq!(x.render(), "1/4");
        assert_eq!(Rational::parse("1/4").unwrap(), x);
        let neg = Rational::from_ratio(3, -9);
        assert_eq!(neg.render(), "-1/3");
        assert_eq!(Rational::from_int(7).render(), "7");
        assert_eq!(Rational::parse("7").unwrap(), Rational::from_int(7));
    }

    #[test]
    fn rational_sign_is_exact() {
        let tiny = Rational::new(BigInt::from(1), BigInt::from(10).pow(30));
        assert_eq!(tiny.sign(), Sign::Positive);
        assert_eq!(<Rational as Scalar>::zero().sign(), Sign::Zero);
        assert_eq!((-tiny).sign(), Sign::Negative);
    }

    #[test]
    fn rational_refuses_radicals() {
        assert!(matches!(
            Rational::from_int(2).sqrt(),
            Err(Error::ExactBackendUnsupported { .. })
        ));
    }

    #[test]
    fn float_sign_uses_tolerance() {
        assert_eq!((FLOAT_TOLERANCE / 2.0).sign(), Sign::Zero);
        assert_eq!((-FLOAT_TOLERANCE / 2.0).sign(), Sign::Zero);
        assert_eq!((FLOAT_TOLERANCE * 2.0).sign(), Sign::Positive);
        assert_eq!((-1.0).sign(), Sign::Negative);
    }

    #[test]
    fn float_parse_accepts_fractions_and_decimals() {
        assert_eq!(f64::parse("17/6").unwrap(), 17.0 / 6.0);
        assert_eq!(f64::parse("2.5").unwrap(), 2.5);
        assert!(f64::parse("nan").is_err());
        assert!(f64::parse("1/0").is_err());
    }

    #[test]
    fn float_render_round_trips() {
        for v in [0.1, 1.0 / 3.0, 1e-12, 12345.678_9] {
            let text = v.render();
            assert_eq!(f64::parse(&text).unwrap(), v);
        }
    }

    #[test]
    fn json_forms_follow_backend() {
        let r = Rational::from_ratio(107, 12);
        assert_eq!(r.to_json(), serde_json::json!("107/12"));
        assert_eq!(Rational::from_json(&serde_json::json!("107/12")).unwrap(), r);
        assert!(Rational::from_json(&serde_json::json!(8.9)).is_err());

        let x = 1.25f64;
        assert_eq!(x.to_json(), serde_json::json!(1.25));
        assert_eq!(f64::from_json(&serde_json::json!(1.25)).unwrap(), 1.25);
        assert_eq!(f64::from_json(&serde_json::json!("5/4")).unwrap(), 1.25);
    }
}
