//! Exact rational scalars.
//!
//! Every geometric and counting quantity in the crate is a [`Scalar`], an
//! arbitrary-precision rational kept in lowest terms with a positive
//! denominator. The canonical text form is `"a/b"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: BigInt) -> Scalar {
    Scalar::from_integer(n)
}

/// Canonical `"a/b"` rendering; the denominator is always written, even when
/// it is 1.
pub fn format_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `"a/b"` (or a bare integer `"a"`) with optional leading minus sign
/// on the numerator. The denominator must be a positive integer.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let digits = |t: &str, signed: bool| -> Result<BigInt> {
        let body = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(big(digits(s, true)?)),
        Some((n, d)) => {
            let num = digits(n, true)?;
            let den = digits(d, false)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::new(num, den))
        }
    }
}

pub fn is_nonnegative(x: &Scalar) -> bool {
    !x.is_negative()
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Superfactorial `1! 2! ... n!`.
pub fn superfactorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * factorial(k))
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Convert an integral scalar to `u64`, if it is one.
pub fn to_u64(x: &Scalar) -> Option<u64> {
    if !x.is_integer() || x.is_negative() {
        return None;
    }
    u64::try_from(x.to_integer()).ok()
}
