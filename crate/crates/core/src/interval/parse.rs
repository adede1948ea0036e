use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{IBox, Interval, IntervalError, Precision};
use crate::bigfloat::BigFloat;

/// Parses an exact real written as a decimal (`-1.25e-3`), a rational
/// (`3/7`) or a hexadecimal-significand literal (`0x1.8p-2`).
pub fn parse_bound(text: &str) -> Result<BigRational, IntervalError> {
    let s = text.trim();
    let err = || IntervalError::Parse(text.to_string());
    if s.contains("0x") || s.contains("0X") {
        return BigFloat::parse_hex(s).map(|v| v.to_rational()).ok_or_else(err);
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s).ok_or_else(err)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(if neg { -value } else { value })
}

/// Parses `[lo,hi]` (or a single value) into an outward-rounded interval.
pub fn parse_interval(text: &str, prec: Precision) -> Result<Interval, IntervalError> {
    let s = text.trim();
    let err = || IntervalError::Parse(text.to_string());
    let (lo, hi) = match s.strip_prefix('[') {
        Some(rest) => {
            let inner = rest.strip_suffix(']').ok_or_else(err)?;
            let (l, h) = inner.split_once(',').ok_or_else(err)?;
            (parse_bound(l)?, parse_bound(h)?)
        }
        None => {
            let v = parse_bound(s)?;
            (v.clone(), v)
        }
    };
    if lo > hi {
        return Err(IntervalError::Inverted);
    }
    let l = Interval::from_rational(&lo, prec);
    let h = Interval::from_rational(&hi, prec);
    Ok(l.hull(&h))
}

/// Parses a semicolon-separated list of intervals, `[lo,hi];[lo,hi];…`.
pub fn parse_box(text: &str, prec: Precision) -> Result<IBox, IntervalError> {
    let parts = text
        .split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_interval(p, prec))
        .collect::<Result<Vec<_>, _>>()?;
    if parts.is_empty() {
        return Err(IntervalError::Parse(text.to_string()));
    }
    IBox::new(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bound_forms() {
        assert_eq!(parse_bound("-1.25e-1").unwrap(), r(-1, 8));
        assert_eq!(parse_bound("3/7").unwrap(), r(3, 7));
        assert_eq!(parse_bound("0x1.8p1").unwrap(), r(3, 1));
        assert_eq!(parse_bound(" 2 ").unwrap(), r(2, 1));
        assert_eq!(parse_bound(".5").unwrap(), r(1, 2));
        assert!(parse_bound("1/0").is_err());
        assert!(parse_bound("abc").is_err());
        assert!(parse_bound("1e").is_err());
    }

    #[test]
    fn domain_strings() {
        let b = parse_box("[-2,2];[0, 1/3]", Precision::DOUBLE).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b[0].to_f64_bounds(), (-2.0, 2.0));
        assert!(b[1].contains_rational(&r(1, 3)));
        assert!(!b[1].is_point());
        assert!(parse_box("[1,0]", Precision::DOUBLE).is_err());
        assert!(parse_box("[1,2", Precision::DOUBLE).is_err());
        assert!(parse_box("", Precision::DOUBLE).is_err());
    }

    #[test]
    fn serialized_bounds_parse_back_exactly() {
        let x = parse_interval("[1/3, 2/3]", Precision::new(113).unwrap()).unwrap();
        let s = x.to_strings();
        let back = parse_interval(&format!("[{},{}]", s.lo_hex, s.hi_hex), x.precision()).unwrap();
        assert_eq!(back, x);
    }
}
