//! Small helpers around `rug::Rational` and `rug::Float` used across the crate.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let neg = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let num: Integer = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {t:?}")))?;
        let den = Integer::from(10).pow(frac_part.len() as u32);
        let r = Rational::from((num, den));
        return Ok(if neg { -r } else { r });
    }
    t.parse::<Rational>()
        .map_err(|_| Error::Parse(format!("bad rational {t:?}")))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Decimal rendering with `digits` significant digits.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits))
}

pub(crate) fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}
