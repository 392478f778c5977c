//! Node values and amplitudes in one of two arithmetic modes.
//!
//! Integer GCM play runs on arbitrary-precision rationals so that divergent
//! games never overflow; E-GCM play runs on `f64` because its amplitudes are
//! irrational. A computation never mixes the two: positions and graphs carry
//! their mode and are checked at construction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Values in `[-EPS_ZERO, EPS_ZERO]` count as zero in approximate mode.
pub const EPS_ZERO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Approx => f.write_str("approx"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(f64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Scalar {
    pub fn from_int(mode: Mode, v: i64) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v))),
            Mode::Approx => Scalar::Approx(v as f64),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero(mode: Mode) -> Self {
        Self::from_int(mode, 0)
    }

    pub fn one(mode: Mode) -> Self {
        Self::from_int(mode, 1)
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Approx(_) => Mode::Approx,
        }
    }

    /// Strictly positive; in approximate mode, strictly above `EPS_ZERO`.
    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Approx(x) => *x > EPS_ZERO,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Approx(x) => *x < -EPS_ZERO,
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_integer(),
            Scalar::Approx(x) => x.fract() == 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Approx(x) => x.is_finite(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or_else(|| {
                if r.is_positive() {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }),
            Scalar::Approx(x) => *x,
        }
    }

    /// The value as an `i64`, for exact integers in range.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    /// Converts to the requested mode. Exact to approximate always succeeds;
    /// the reverse only for finite floats, which are converted exactly.
    pub fn to_mode(&self, mode: Mode) -> Option<Scalar> {
        match (self, mode) {
            (Scalar::Exact(_), Mode::Exact) | (Scalar::Approx(_), Mode::Approx) => {
                Some(self.clone())
            }
            (Scalar::Exact(_), Mode::Approx) => Some(Scalar::Approx(self.to_f64())),
            (Scalar::Approx(x), Mode::Exact) => BigRational::from_float(*x).map(Scalar::Exact),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(x) => Scalar::Approx(x.abs()),
        }
    }

    /// Parses `"p"` or `"p/q"` into a reduced exact rational.
    pub fn parse_rational(s: &str) -> Result<Scalar, ParseScalarError> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| ParseScalarError::Malformed(s.to_string()))?;
        if den.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(s.to_string()));
        }
        Ok(Scalar::Exact(BigRational::new(num, den)))
    }

    /// JSON rendering: exact integers that fit in `i64` become numbers, other
    /// rationals `"p/q"` strings; approximate values are numbers.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Exact(r) => match r.to_integer().to_i64() {
                Some(i) if r.is_integer() => serde_json::Value::from(i),
                _ => serde_json::Value::String(format_rational(r)),
            },
            Scalar::Approx(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
        }
    }

    /// Reads a JSON value in the given mode. Exact mode accepts rational
    /// strings and integers; approximate mode accepts any number or a
    /// rational string.
    pub fn from_json(v: &serde_json::Value, mode: Mode) -> Option<Scalar> {
        match (v, mode) {
            (serde_json::Value::String(s), Mode::Exact) => Scalar::parse_rational(s).ok(),
            (serde_json::Value::String(s), Mode::Approx) => Scalar::parse_rational(s)
                .ok()
                .map(|r| Scalar::Approx(r.to_f64())),
            (serde_json::Value::Number(n), Mode::Exact) => n
                .as_i64()
                .map(|i| Scalar::from_int(Mode::Exact, i))
                .or_else(|| {
                    n.as_f64()
                        .filter(|x| x.fract() == 0.0)
                        .and_then(|x| Scalar::Approx(x).to_mode(Mode::Exact))
                }),
            (serde_json::Value::Number(n), Mode::Approx) => n.as_f64().map(Scalar::Approx),
            _ => None,
        }
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&format_rational(r)),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            (Scalar::Approx(a), Scalar::Approx(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a $op b),
                    _ => panic!("scalar mode mismatch in {}", stringify!($method)),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Approx(a) => Scalar::Approx(-a),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let s = Scalar::parse_rational("6/-4").unwrap();
        let r = s.as_exact().unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(s.to_string(), "-3/2");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Scalar::parse_rational("1/0"),
            Err(ParseScalarError::ZeroDenominator(_))
        ));
        assert!(matches!(
            Scalar::parse_rational("x"),
            Err(ParseScalarError::Malformed(_))
        ));
    }

    #[test]
    fn approx_zero_band() {
        assert!(!Scalar::Approx(1e-13).is_positive());
        assert!(Scalar::Approx(1e-13).is_zero());
        assert!(Scalar::Approx(1e-11).is_positive());
        assert!(!Scalar::from_int(Mode::Exact, 0).is_positive());
    }

    #[test]
    #[should_panic(expected = "mode mismatch")]
    fn mixing_modes_panics() {
        let _ = Scalar::from_int(Mode::Exact, 1) + Scalar::Approx(1.0);
    }

    #[test]
    fn json_round_trip() {
        let s = Scalar::ratio(-7, 3);
        assert_eq!(s.to_json(), serde_json::json!("-7/3"));
        assert_eq!(Scalar::from_json(&s.to_json(), Mode::Exact), Some(s));
        assert_eq!(Scalar::from_int(Mode::Exact, 4).to_json(), serde_json::json!(4));
        let big = Scalar::parse_rational("100000000000000000000").unwrap();
        assert_eq!(big.to_json(), serde_json::json!("100000000000000000000"));
        assert_eq!(Scalar::from_json(&big.to_json(), Mode::Exact), Some(big));
        let a = Scalar::Approx(0.25);
        assert_eq!(Scalar::from_json(&a.to_json(), Mode::Approx), Some(a));
        assert_eq!(
            Scalar::from_json(&serde_json::json!(-2), Mode::Exact),
            Some(Scalar::from_int(Mode::Exact, -2))
        );
        assert_eq!(Scalar::from_json(&serde_json::json!(0.5), Mode::Exact), None);
    }
}
