//! Exact rational helpers. All order decisions in the crate go through
//! [`Rational`]; floating point only appears in the Szilard ledger.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"2.9"` exactly.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{whole_digits}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(digits, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `p/q` text, or `p` for integers.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Short decimal rendering used in human reports (`6/5` prints as `1.2`).
/// Falls back to `p/q` when the expansion does not terminate.
pub fn display(q: &Rational) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut places = 0usize;
    while d.is_multiple_of(&two) {
        d /= &two;
        places += 1;
    }
    let mut fives = 0usize;
    while d.is_multiple_of(&five) {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format(q);
    }
    let places = places.max(fives);
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{whole}.{frac}")
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Exact `base^exponent` for a rational exponent, or `None` when the result
/// is irrational (e.g. `2^(1/2)`).
pub fn pow(base: &Rational, exponent: &Rational) -> Option<Rational> {
    if base.is_zero() {
        return if exponent.is_positive() { Some(Rational::zero()) } else { None };
    }
    let q = exponent.denom().to_u32()?;
    let p = exponent.numer().to_i32()?;
    let root = if q == 1 {
        base.clone()
    } else {
        if base.is_negative() {
            return None;
        }
        let n = exact_root(base.numer(), q)?;
        let d = exact_root(base.denom(), q)?;
        Rational::new(n, d)
    };
    Some(if p >= 0 {
        num_traits::pow(root, p as usize)
    } else {
        num_traits::pow(root.recip(), p.unsigned_abs() as usize)
    })
}

fn exact_root(n: &BigInt, q: u32) -> Option<BigInt> {
    let r = n.nth_root(q);
    (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
}

pub fn floor(q: &Rational) -> Rational {
    q.floor()
}

pub fn ceil(q: &Rational) -> Rational {
    q.ceil()
}
