//! Distance values.
//!
//! Finite spaces are generic over [`Scalar`]. [`Rational`] is the default and
//! makes every comparison decision-exact; `f64` is available for quick
//! numeric experiments.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number.
pub type Rational = num_rational::BigRational;

pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Parses a decimal (`-1.25`, `3`, `2e-3`) or fraction (`1/3`) literal.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Canonical text form, accepted back by [`Scalar::parse_literal`].
    fn to_literal(&self) -> String;

    fn is_finite(&self) -> bool {
        true
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn to_literal(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: f64 = num.trim().parse().ok()?;
            let d: f64 = den.trim().parse().ok()?;
            return (d != 0.0).then(|| n / d).filter(|v| v.is_finite());
        }
        s.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn to_literal(&self) -> String {
        format!("{self}")
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Exact parse of a decimal or fraction literal.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }

    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Renders terminating decimals exactly (`0.375`), everything else as `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = r.denom().clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }

    let places = twos.max(fives);
    let scaled = r.abs() * Rational::from_integer(num_traits::pow(BigInt::from(10u8), places));
    let digits = scaled.to_integer().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Shorthand used heavily in tests: `rat(1, 2)` is one half.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.4"), Some(rat(2, 5)));
        assert_eq!(parse_rational("-1.25"), Some(rat(-5, 4)));
        assert_eq!(parse_rational("3"), Some(rat(3, 1)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("2e-3"), Some(rat(1, 500)));
        assert_eq!(parse_rational("1.5E2"), Some(rat(150, 1)));
        assert_eq!(parse_rational("1/3"), Some(rat(1, 3)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1.2.3", "1/0", "-", ".", "1e", "0x10", "1,5"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
    }

    #[test]
    fn formats_terminating_and_repeating() {
        assert_eq!(format_rational(&rat(3, 8)), "0.375");
        assert_eq!(format_rational(&rat(-5, 4)), "-1.25");
        assert_eq!(format_rational(&rat(1, 20)), "0.05");
        assert_eq!(format_rational(&rat(7, 1)), "7");
        assert_eq!(format_rational(&rat(1, 3)), "1/3");
    }

    #[test]
    fn literal_roundtrip() {
        for r in [rat(1, 3), rat(-7, 40), rat(0, 1), rat(123456789, 1000)] {
            assert_eq!(parse_rational(&format_rational(&r)), Some(r));
        }
    }

    #[test]
    fn float_backend_parses() {
        assert_eq!(<f64 as Scalar>::parse_literal("0.25"), Some(0.25));
        assert_eq!(<f64 as Scalar>::parse_literal("1/4"), Some(0.25));
        assert_eq!(<f64 as Scalar>::parse_literal("inf"), None);
    }
}
