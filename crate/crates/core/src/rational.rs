//! Exact rational scalars for ordinal features.
//!
//! Ordinal values, split thresholds and search steps are all exact
//! rationals so that grid stepping `v + k*delta` never drifts.

use num_rational::Ratio;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Parses `"-3"`, `"6.6"`, `"1.25e2"` or `"7/3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidValue(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let mut num: i64 = joined.parse().map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = frac_part.len() as i32 - exponent;
    let pow = |e: i32| -> Result<i64> {
        10i64.checked_pow(e as u32).ok_or_else(bad)
    };
    let value = if scale >= 0 {
        Rational::new(num, pow(scale)?)
    } else {
        Rational::from_integer(num.checked_mul(pow(-scale)?).ok_or_else(bad)?)
    };
    Ok(value)
}

/// Renders a rational as a terminating decimal when possible, `a/b` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    let mut den = *value.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let digits = twos.max(fives);
    let scale = match 10i64.checked_pow(digits) {
        Some(s) => s,
        None => return format!("{}/{}", value.numer(), value.denom()),
    };
    let Some(scaled) = value.numer().checked_mul(scale / value.denom()) else {
        return format!("{}/{}", value.numer(), value.denom());
    };
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.unsigned_abs();
    let scale = scale as u64;
    let frac = format!("{:0width$}", abs % scale, width = digits as usize);
    format!("{sign}{}.{}", abs / scale, frac.trim_end_matches('0'))
}

pub(crate) fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(2)
}

/// `true` when `multiple / step` is a positive integer.
pub(crate) fn is_positive_multiple(multiple: &Rational, step: &Rational) -> bool {
    if !step.is_positive() || !multiple.is_positive() {
        return false;
    }
    let ratio = multiple / step;
    ratio.is_integer() && ratio >= Rational::one()
}
