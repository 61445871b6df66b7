//! Dual-mode numeric scalar.
//!
//! Probabilities and payoffs are carried either as exact big rationals
//! (parsed from decimal strings such as `"0.99"`) or as IEEE `f64` values.
//! Rational values support exact strict-inequality decisions, which the
//! solvers rely on; float values are flagged as inexact and all strictness
//! decisions within [`FLOAT_MARGIN`] of a tie are refused instead of guessed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Margin under which float-mode strictness decisions are refused.
pub const FLOAT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("cannot parse {0:?} as a decimal or fraction")]
    Parse(String),
    #[error("comparison of {lhs} and {rhs} is numerically ambiguous (margin {margin:e})")]
    AmbiguousComparison { lhs: f64, rhs: f64, margin: f64 },
}

/// A number in either exact-rational or float mode.
///
/// Mixing the two modes in arithmetic demotes the result to float mode.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact ratio `numer / denom`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Float(x)
    }

    /// True when the value is carried exactly.
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// Demote to float mode.
    pub fn to_float_mode(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or_else(|| {
                // Fall back to a quotient of lossy conversions for extreme
                // numerators/denominators.
                let n = r.numer().to_f64().unwrap_or(f64::NAN);
                let d = r.denom().to_f64().unwrap_or(f64::NAN);
                n / d
            }),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Float(x) => *x == 1.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        if let Scalar::Float(_) = self {
            acc = Scalar::Float(1.0);
        }
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact strict `self > other` where possible.
    ///
    /// Rational-vs-rational comparisons are exact. As soon as a float is
    /// involved, a decision closer than [`FLOAT_MARGIN`] is refused.
    pub fn decide_gt(&self, other: &Scalar) -> Result<bool, ScalarError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(a > b),
            _ => {
                let lhs = self.to_f64();
                let rhs = other.to_f64();
                if (lhs - rhs).abs() <= FLOAT_MARGIN {
                    Err(ScalarError::AmbiguousComparison {
                        lhs,
                        rhs,
                        margin: FLOAT_MARGIN,
                    })
                } else {
                    Ok(lhs > rhs)
                }
            }
        }
    }

    /// Parse a decimal string (`"0.99"`, `"-2"`, `"1.5e-3"`) or an integer
    /// fraction (`"15/29"`) into an exact rational.
    pub fn from_decimal_str(s: &str) -> Result<Scalar, ScalarError> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(ScalarError::Parse(s.to_string()));
        }
        if let Some((numer, denom)) = trimmed.split_once('/') {
            let n = BigInt::from_str(numer.trim()).map_err(|_| ScalarError::Parse(s.to_string()))?;
            let d = BigInt::from_str(denom.trim()).map_err(|_| ScalarError::Parse(s.to_string()))?;
            if d.is_zero() {
                return Err(ScalarError::Parse(s.to_string()));
            }
            return Ok(Scalar::Rational(BigRational::new(n, d)));
        }
        parse_decimal(trimmed).ok_or_else(|| ScalarError::Parse(s.to_string()))
    }

    /// Exact rational payload, if in rational mode.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }
}

fn parse_decimal(s: &str) -> Option<Scalar> {
    let (sign, rest) = match s.as_bytes().first()? {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => (1, s),
    };
    let (mantissa, exponent) = match rest.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = rest[pos + 1..].parse().ok()?;
            (&rest[..pos], exp)
        }
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&digits).ok()?;
    if sign < 0 {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * ten.pow(shift as u32))
    } else {
        BigRational::new(numer, ten.pow((-shift) as u32))
    };
    Some(Scalar::Rational(value))
}

/// Render a rational exactly: finite decimal when the reduced denominator is
/// of the form `2^a * 5^b`, otherwise as a `numer/denom` fraction.
fn format_rational(r: &BigRational) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let numer = r.numer().magnitude().clone();
    let denom = r.denom().magnitude().clone();
    let sign = if r.is_negative() { "-" } else { "" };
    let (mut twos, mut rest) = (0u32, denom.clone());
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    let mut fives = 0u32;
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{sign}{numer}/{denom}");
    }
    let k = twos.max(fives);
    let scaled = numer * two.pow(k - twos) * five.pow(k - fives);
    let digits = scaled.to_string();
    if k == 0 {
        return format!("{sign}{digits}");
    }
    let k = k as usize;
    let padded = if digits.len() <= k {
        format!("{}{}", "0".repeat(k + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = padded.len() - k;
    let (int_part, frac_part) = padded.split_at(split);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", format_rational(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a $op b),
                    _ => Scalar::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self) $op (&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self) $op rhs
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self $op (&rhs)
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
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a decimal string, fraction string, or number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                Scalar::from_decimal_str(v).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                // Binary floating point is accepted but stays inexact.
                Ok(Scalar::Float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::Rational(BigRational::from_integer(BigInt::from(v))))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Check that `v` is a probability vector of the expected length: entries in
/// `[0, 1]` and sum exactly one (rational mode) or within the float margin.
pub fn validate_prob_vector(v: &[Scalar], expected_len: usize) -> Result<(), String> {
    if v.len() != expected_len {
        return Err(format!(
            "probability vector has length {}, expected {}",
            v.len(),
            expected_len
        ));
    }
    let one = Scalar::one();
    for (i, x) in v.iter().enumerate() {
        if x.is_negative() || *x > one {
            return Err(format!("entry {i} = {x} is outside [0, 1]"));
        }
    }
    let sum = v.iter().fold(Scalar::zero(), |acc, x| &acc + x);
    let exact = v.iter().all(Scalar::is_exact);
    if exact {
        if !sum.is_one() {
            return Err(format!("entries sum to {sum}, expected exactly 1"));
        }
    } else if (sum.to_f64() - 1.0).abs() > FLOAT_MARGIN {
        return Err(format!("entries sum to {}, expected 1", sum.to_f64()));
    }
    Ok(())
}
