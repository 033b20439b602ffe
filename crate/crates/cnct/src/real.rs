//! Arithmetic kernels. Every algorithm in this crate is generic over [`Real`],
//! with two instantiations: native `f64` (~16 decimal digits) and [`BigReal`],
//! an arbitrary-precision float backed by MPFR.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

const LOG2_10: f64 = 3.321928094887362;

pub trait Real:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the hardware-float kernel.
    const NATIVE: bool;

    fn from_i64(v: i64, digits: u32) -> Self;
    fn from_f64(v: f64, digits: u32) -> Self;
    fn from_decimal(text: &str, digits: u32) -> Result<Self>;
    fn from_biguint(v: &BigUint, digits: u32) -> Self;
    fn from_rational(v: &BigRational, digits: u32) -> Self;

    /// Decimal digits carried by this value's arithmetic.
    fn digits(&self) -> u32;

    /// An integer constant at the same working precision as `self`.
    fn of(&self, v: i64) -> Self {
        Self::from_i64(v, self.digits())
    }

    fn abs(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    /// `self^e` for positive base (or integer-valued exponent).
    fn pow(&self, e: &Self) -> Self;
    fn powi(&self, n: i64) -> Self;

    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_finite(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Normalized decimal representation: value = ±0.d1d2... × 10^exp,
    /// returned as (negative, digit string of length `sig`, exp).
    /// Zero reports ("0", 0).
    fn decimal_parts(&self, sig: usize) -> (bool, String, i64);

    /// Decimal text with `sig` significant digits.
    fn to_decimal(&self, sig: usize) -> String {
        render_decimal(self.decimal_parts(sig))
    }
}

/// Plain or scientific decimal text from normalized parts.
fn render_decimal((neg, digits, exp): (bool, String, i64)) -> String {
    if digits == "0" || digits.is_empty() {
        return "0".to_string();
    }
    if !digits.as_bytes()[0].is_ascii_digit() {
        // inf / nan pass-through
        return if neg { format!("-{digits}") } else { digits };
    }
    let sign = if neg { "-" } else { "" };
    let n = digits.len() as i64;
    if exp > 0 && exp <= n.max(1) + 6 {
        // integer part present
        if exp >= n {
            let zeros = "0".repeat((exp - n) as usize);
            return format!("{sign}{digits}{zeros}");
        }
        let (int, frac) = digits.split_at(exp as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            return format!("{sign}{int}");
        }
        return format!("{sign}{int}.{frac}");
    }
    if exp <= 0 && exp > -5 {
        let zeros = "0".repeat((-exp) as usize);
        let frac = digits.trim_end_matches('0');
        let frac = if frac.is_empty() { "0" } else { frac };
        return format!("{sign}0.{zeros}{frac}");
    }
    // scientific: d.ddd...e<exp-1>
    let (head, tail) = digits.split_at(1);
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{}", exp - 1)
    } else {
        format!("{sign}{head}.{tail}e{}", exp - 1)
    }
}

// ---------------------------------------------------------------------------
// Native f64 kernel
// ---------------------------------------------------------------------------

impl Real for f64 {
    const NATIVE: bool = true;

    fn from_i64(v: i64, _digits: u32) -> Self {
        v as f64
    }
    fn from_f64(v: f64, _digits: u32) -> Self {
        v
    }
    fn from_decimal(text: &str, _digits: u32) -> Result<Self> {
        text.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(text.to_string()))
    }
    fn from_biguint(v: &BigUint, _digits: u32) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }
    fn from_rational(v: &BigRational, _digits: u32) -> Self {
        let n = v.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = v.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    }

    fn digits(&self) -> u32 {
        16
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn pow(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn powi(&self, n: i64) -> Self {
        if n.abs() <= i32::MAX as i64 {
            f64::powi(*self, n as i32)
        } else {
            f64::powf(*self, n as f64)
        }
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }

    fn decimal_parts(&self, sig: usize) -> (bool, String, i64) {
        if *self == 0.0 {
            return (false, "0".to_string(), 0);
        }
        if !f64::is_finite(*self) {
            let name = if self.is_nan() { "nan" } else { "inf" };
            return (*self < 0.0, name.to_string(), 0);
        }
        let sig = sig.clamp(1, 17);
        let s = format!("{:.*e}", sig - 1, self.abs());
        let (mant, exp) = s.split_once('e').expect("f64 sci format");
        let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        let exp: i64 = exp.parse().expect("f64 exponent");
        (*self < 0.0, digits, exp + 1)
    }
}

// ---------------------------------------------------------------------------
// MPFR-backed kernel
// ---------------------------------------------------------------------------

/// Arbitrary-precision real; the precision in decimal digits is fixed at
/// construction and propagated through arithmetic (binary operations carry
/// the larger operand precision).
#[derive(Clone, Debug)]
pub struct BigReal(rug::Float);

fn bits_for(digits: u32) -> u32 {
    ((digits.max(1) as f64) * LOG2_10).ceil() as u32 + 32
}

impl BigReal {
    pub fn inner(&self) -> &rug::Float {
        &self.0
    }

    fn binop(a: &BigReal, b: &BigReal, f: impl FnOnce(&rug::Float, &rug::Float, u32) -> rug::Float) -> BigReal {
        let prec = a.0.prec().max(b.0.prec());
        BigReal(f(&a.0, &b.0, prec))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.digits() as usize))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl Add for BigReal {
    type Output = BigReal;
    fn add(self, rhs: Self) -> Self {
        Self::binop(&self, &rhs, |a, b, p| rug::Float::with_val(p, a + b))
    }
}

impl Sub for BigReal {
    type Output = BigReal;
    fn sub(self, rhs: Self) -> Self {
        Self::binop(&self, &rhs, |a, b, p| rug::Float::with_val(p, a - b))
    }
}

impl Mul for BigReal {
    type Output = BigReal;
    fn mul(self, rhs: Self) -> Self {
        Self::binop(&self, &rhs, |a, b, p| rug::Float::with_val(p, a * b))
    }
}

impl Div for BigReal {
    type Output = BigReal;
    fn div(self, rhs: Self) -> Self {
        Self::binop(&self, &rhs, |a, b, p| rug::Float::with_val(p, a / b))
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> Self {
        BigReal(-self.0)
    }
}

impl Real for BigReal {
    const NATIVE: bool = false;

    fn from_i64(v: i64, digits: u32) -> Self {
        BigReal(rug::Float::with_val(bits_for(digits), v))
    }
    fn from_f64(v: f64, digits: u32) -> Self {
        BigReal(rug::Float::with_val(bits_for(digits), v))
    }
    fn from_decimal(text: &str, digits: u32) -> Result<Self> {
        let parsed = rug::Float::parse(text.trim()).map_err(|_| Error::Parse(text.to_string()))?;
        Ok(BigReal(rug::Float::with_val(bits_for(digits), parsed)))
    }
    fn from_biguint(v: &BigUint, digits: u32) -> Self {
        let i = rug::Integer::from_str_radix(&v.to_str_radix(16), 16).expect("biguint digits");
        BigReal(rug::Float::with_val(bits_for(digits), i))
    }
    fn from_rational(v: &BigRational, digits: u32) -> Self {
        let prec = bits_for(digits);
        let n = rug::Integer::from_str_radix(&v.numer().to_str_radix(16), 16).expect("numer");
        let d = rug::Integer::from_str_radix(&v.denom().to_str_radix(16), 16).expect("denom");
        let n = rug::Float::with_val(prec, n);
        BigReal(rug::Float::with_val(prec, n / d))
    }

    fn digits(&self) -> u32 {
        (((self.0.prec().saturating_sub(32)) as f64) / LOG2_10).round() as u32
    }

    fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }
    fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }
    fn pow(&self, e: &Self) -> Self {
        use rug::ops::Pow;
        Self::binop(self, e, |a, b, p| rug::Float::with_val(p, a.pow(b)))
    }
    fn powi(&self, n: i64) -> Self {
        use rug::ops::Pow;
        BigReal(rug::Float::with_val(self.0.prec(), (&self.0).pow(n)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn decimal_parts(&self, sig: usize) -> (bool, String, i64) {
        if self.0.is_zero() {
            return (false, "0".to_string(), 0);
        }
        if !self.0.is_finite() {
            let name = if self.0.is_nan() { "nan" } else { "inf" };
            return (self.0.is_sign_negative(), name.to_string(), 0);
        }
        let (sign, digits, exp) = self.0.to_sign_string_exp(10, Some(sig.max(1)));
        (sign, digits, i64::from(exp.expect("finite exponent")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        let x = BigReal::from_decimal("0.6931471805599453", 30).unwrap();
        assert!(x.to_decimal(10).starts_with("0.693147180"));
        let y = BigReal::from_i64(1234, 30);
        assert_eq!(y.to_decimal(10), "1234");
        let z = 1.25e-9f64;
        assert_eq!(z.to_decimal(3), "1.25e-9");
        assert_eq!(0.0f64.to_decimal(5), "0");
        assert_eq!((-0.03125f64).to_decimal(4), "-0.03125");
    }

    #[test]
    fn big_arithmetic_precision() {
        let a = BigReal::from_i64(1, 50);
        let three = a.of(3);
        let third = a.clone() / three.clone();
        let back = third * three;
        let err = (back - a).abs();
        assert!(err < BigReal::from_f64(1e-45, 50));
    }

    #[test]
    fn rounding_error_bound_per_operation() {
        // relative rounding error of one operation stays below 10^(1-D)
        let d = 40;
        let x = BigReal::from_decimal("1.000000000000000000000000000000000000001", d).unwrap();
        let y = x.clone() * x.clone();
        let rel = ((y.clone() - x.clone() * x) / y).abs();
        assert!(rel < BigReal::from_f64(1e-39, d) || rel.is_zero());
    }

    #[test]
    fn biguint_conversion_roundtrip() {
        let v = BigUint::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        let x = BigReal::from_biguint(&v, 60);
        assert!(x.to_decimal(39).starts_with("170141183460469231731687303715884105727"));
    }
}
