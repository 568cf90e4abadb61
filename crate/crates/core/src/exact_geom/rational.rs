//! Rational helpers: construction, parsing and the `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct RationalParseError(pub String);

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half(v: &Rational) -> Rational {
    v / int(2)
}

pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers can fail the direct conversion.
        let n = v.numer().to_f64().unwrap_or(f64::MAX);
        let d = v.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let s = text.trim();
    let err = || RationalParseError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(fraction.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{}{}", if whole.is_empty() { "0" } else { whole }, fraction);
    let numer: BigInt = digits.parse().map_err(|_| err())?;
    let scale = exponent - fraction.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Canonical text form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(v: &Rational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Closest rational with denominator `2^bits` to an `f64` (used only to place
/// sample points, never to decide a predicate).
pub fn from_f64_dyadic(v: f64, bits: u32) -> Rational {
    let scaled = (v * 2f64.powi(bits as i32)).round();
    let n = BigInt::from(scaled as i128);
    Rational::new(n, BigInt::from(1u8) << bits)
}

pub fn min_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn max_rat<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn abs(v: &Rational) -> Rational {
    v.abs()
}

/// Smallest power of two (possibly fractional) strictly greater than `v >= 0`.
pub fn power_of_two_above(v: &Rational) -> Rational {
    let mut p = one();
    if v.is_zero() {
        return p;
    }
    if *v >= p {
        while p <= *v {
            p *= int(2);
        }
    } else {
        while &p / int(2) > *v {
            p /= int(2);
        }
    }
    p
}

/// `10^-n` as an exact rational.
pub fn ten_pow_neg(n: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), n as usize))
}

/// `2^-n` as an exact rational.
pub fn two_pow_neg(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n)
}
