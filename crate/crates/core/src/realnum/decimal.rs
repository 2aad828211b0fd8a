//! Decimal text form `"<mid> ± <rad> [prec=<bits>]"`.
//!
//! The printed midpoint is rounded to nearest and the printed radius is
//! rounded up after absorbing the midpoint rounding, so parsing a printed
//! value always yields an enclosure of the original.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::CertifiedReal;
use super::dyadic::Dyadic;
use super::mag::Mag;
use crate::error::Error;

const RADIUS_DIGITS: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Nearest,
    Up,
}

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Scale a positive rational to `digits` significant decimal digits.
/// Returns `(n, e10)` with value ~ `n * 10^(e10 - digits + 1)`.
fn scientific(v: &BigRational, digits: usize, mode: Rounding) -> (BigInt, i64) {
    debug_assert!(v.is_positive());
    let est = ((v.numer().bits() as f64 - v.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let mut e10 = est;
    loop {
        let shift = digits as i64 - 1 - e10;
        let scaled = if shift >= 0 {
            v * BigRational::from_integer(pow10(shift as u64))
        } else {
            v / BigRational::from_integer(pow10((-shift) as u64))
        };
        let n = match mode {
            Rounding::Nearest => scaled.round(),
            Rounding::Up => scaled.ceil(),
        }
        .to_integer();
        if n >= pow10(digits as u64) {
            e10 += 1;
        } else if n < pow10(digits as u64 - 1) {
            e10 -= 1;
        } else {
            return (n, e10);
        }
    }
}

fn render(n: &BigInt, e10: i64, negative: bool) -> String {
    let s = n.to_string();
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

fn format_scaled(n: &BigInt, e10: i64, digits: usize) -> BigRational {
    let exp = e10 - digits as i64 + 1;
    if exp >= 0 {
        BigRational::from_integer(n * pow10(exp as u64))
    } else {
        BigRational::new(n.clone(), pow10((-exp) as u64))
    }
}

fn mag_from_rational_up(r: &BigRational) -> Mag {
    if r.is_zero() {
        return Mag::zero();
    }
    let (d, err) = Dyadic::from_rational(r, 64);
    Mag::from_dyadic_up(&d).add(&err)
}

impl CertifiedReal {
    /// Number of decimal digits carried by the text form.
    fn decimal_digits(&self) -> usize {
        (self.precision() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mid = self.mid().to_rational();
        let mut rad = self.rad().to_dyadic().to_rational();
        let mid_text = if mid.is_zero() {
            "0".to_string()
        } else {
            let digits = self.decimal_digits();
            let (n, e10) = scientific(&mid.abs(), digits, Rounding::Nearest);
            let shown = format_scaled(&n, e10, digits);
            rad += (shown - mid.abs()).abs();
            render(&n, e10, mid.is_negative())
        };
        let rad_text = if rad.is_zero() {
            "0".to_string()
        } else {
            let (n, e10) = scientific(&rad, RADIUS_DIGITS, Rounding::Up);
            render(&n, e10, false)
        };
        write!(f, "{} ± {} [prec={}]", mid_text, rad_text, self.precision())
    }
}

fn parse_decimal(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::InvalidInput(format!("malformed decimal {s:?}"));
    let s = s.trim();
    let (body, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let e = exp - frac_part.len() as i64;
    let mut v = if e >= 0 {
        BigRational::from_integer(digits * pow10(e as u64))
    } else {
        BigRational::new(digits, pow10((-e) as u64))
    };
    if negative {
        v = -v;
    }
    Ok(v)
}

/// Parse an exact decimal or scientific literal such as `1e60` or `3.5e18`.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    parse_decimal(s)
}

/// Parse a literal that must denote an integer.
pub fn parse_integer(s: &str) -> Result<BigInt, Error> {
    let r = parse_decimal(s)?;
    if r.denom().is_one() {
        Ok(r.to_integer())
    } else {
        Err(Error::InvalidInput(format!("{s:?} is not an integer")))
    }
}

impl FromStr for CertifiedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidInput(format!("malformed enclosure {s:?}"));
        let (mid_text, rest) = s.split_once('±').ok_or_else(bad)?;
        let (rad_text, tag) = rest.split_once('[').ok_or_else(bad)?;
        let prec: u32 = tag
            .trim()
            .strip_prefix("prec=")
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let mid = parse_decimal(mid_text)?;
        let rad = parse_decimal(rad_text)?;
        if rad.is_negative() {
            return Err(bad());
        }
        let center = CertifiedReal::enclose_rational(&mid, prec);
        Ok(center.inflate(mag_from_rational_up(&rad)))
    }
}

/// Exact decimal rendering of an integer-valued rational, or a scientific
/// approximation with `digits` significant digits otherwise.
pub fn rational_to_string(r: &BigRational, digits: usize) -> String {
    if r.denom().is_one() {
        return r.numer().to_string();
    }
    if r.is_zero() {
        return "0".into();
    }
    let (n, e10) = scientific(&r.abs(), digits, Rounding::Nearest);
    render(&n, e10, r.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_and_parses_third() {
        let x = CertifiedReal::ratio(1, 3, 64);
        let s = x.to_string();
        assert!(s.starts_with("3.333333333333333333"), "{s}");
        assert!(s.ends_with("[prec=64]"));
        let y: CertifiedReal = s.parse().unwrap();
        assert!(x.subset_of(&y));
    }

    #[test]
    fn exact_integer_prints_zero_radius() {
        let x = CertifiedReal::from_int(-42, 32);
        assert_eq!(x.to_string(), "-4.2e1 ± 0 [prec=32]");
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse_integer("1e60").unwrap(), pow10(60));
        assert_eq!(parse_integer("3e18").unwrap(), BigInt::from(3_000_000_000_000_000_000u64));
        assert_eq!(parse_integer("3.5e2").unwrap(), BigInt::from(350));
        assert!(parse_integer("3.5").is_err());
        assert!(parse_integer("abc").is_err());
    }

    #[test]
    fn malformed_enclosure_rejected() {
        assert!("1.0 +- 2".parse::<CertifiedReal>().is_err());
        assert!("1.0 ± 2 [prec=x]".parse::<CertifiedReal>().is_err());
    }
}
