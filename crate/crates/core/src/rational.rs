//! Exact rational numbers and their text forms.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Decimals with more fractional digits than this are rejected instead of
/// silently producing a huge denominator.
pub const MAX_DECIMAL_DIGITS: usize = 6;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-2"`, `"1/20"` or `"0.05"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let parse_err = |position: usize, message: &str| Error::Parse {
        input: text.to_string(),
        position,
        message: message.to_string(),
    };
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    if trimmed.is_empty() {
        return Err(parse_err(0, "empty number"));
    }

    if let Some(slash) = trimmed.find('/') {
        let num = parse_int(&trimmed[..slash]).ok_or_else(|| parse_err(offset, "bad numerator"))?;
        let den = parse_int(&trimmed[slash + 1..])
            .ok_or_else(|| parse_err(offset + slash + 1, "bad denominator"))?;
        if den.is_zero() {
            return Err(parse_err(offset + slash + 1, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body, sign_len) = match trimmed.as_bytes()[0] {
        b'-' => (true, &trimmed[1..], 1),
        b'+' => (false, &trimmed[1..], 1),
        _ => (false, trimmed, 0),
    };
    let (whole, frac) = match body.find('.') {
        Some(dot) => (&body[..dot], &body[dot + 1..]),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(parse_err(offset, "no digits"));
    }
    if let Some(bad) = body
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || c == '.'))
    {
        return Err(parse_err(offset + sign_len + bad.0, "unexpected character"));
    }
    if body.matches('.').count() > 1 {
        return Err(parse_err(offset + sign_len, "more than one decimal point"));
    }
    if frac.len() > MAX_DECIMAL_DIGITS {
        return Err(parse_err(
            offset + sign_len + whole.len() + 1,
            "too many fractional digits (at most 6); use a fraction p/q instead",
        ));
    }
    let digits = format!("{whole}{frac}");
    let mut num: BigInt = digits
        .parse()
        .map_err(|_| parse_err(offset, "bad digits"))?;
    if negative {
        num = -num;
    }
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(Rational::new(num, den))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let t = text.trim();
    if t.is_empty()
        || !t
            .trim_start_matches(['-', '+'])
            .bytes()
            .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    t.parse().ok()
}

/// Parses a comma-separated list such as `"5,4,3,1"` or `"1/2,1/3,1/6"`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in text.split(',') {
        let value = parse_rational(piece).map_err(|e| match e {
            Error::Parse {
                position, message, ..
            } => Error::Parse {
                input: text.to_string(),
                position: start + position,
                message,
            },
            other => other,
        })?;
        out.push(value);
        start += piece.len() + 1;
    }
    Ok(out)
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Always `p/q`, even for integers (`1/1`). Used by machine-readable outputs.
pub fn format_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Rounds to `places` decimal digits, half away from zero, and prints
/// exactly that many digits.
pub fn format_decimal(r: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let rounded = round_half_away(&scaled);
    let negative = rounded.sign() == Sign::Minus;
    let abs = rounded.abs();
    let (whole, frac) = abs.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if places > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac.to_string(), width = places));
    }
    out
}

pub fn round_half_away(r: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if r.is_negative() {
        -(-r + half).floor().to_integer()
    } else {
        (r + half).floor().to_integer()
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A filesystem-friendly tag: `0`, `1`, `1-20`.
pub fn file_tag(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}-{}", r.numer(), r.denom())
    }
}
