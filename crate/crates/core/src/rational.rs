//! Exact probabilities.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact probability or weight.
pub type Prob = BigRational;

pub fn to_f64(p: &Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

pub fn from_count(num: u64, den: u64) -> Prob {
    Prob::new(BigInt::from(num), BigInt::from(den))
}

pub fn one() -> Prob {
    Prob::one()
}

pub fn zero() -> Prob {
    Prob::zero()
}

/// Parse a decimal literal such as `0.2`, `3`, `-1.5e-3` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Prob> {
    let bad = || Error::InvalidWeight(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Prob::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        Prob::new(numer, num::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

pub fn is_positive(p: &Prob) -> bool {
    p.is_positive()
}

/// 2^-len as an exact rational.
pub fn dyadic(len: usize) -> Prob {
    Prob::new(BigInt::one(), BigInt::one() << len)
}
