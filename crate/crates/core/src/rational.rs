//! Exact rational helpers shared by every module.
//!
//! All numbers in the engine are arbitrary-precision rationals in lowest
//! terms; nothing here rounds.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `n / d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Integer power with a non-negative exponent.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Lossy conversion for reporting and sampling only.
pub fn to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Shift both parts down until they fit.
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if n.is_sign_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// Renders `p/q` in lowest terms, or `p` for integers.
pub fn render(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Display wrapper producing the canonical `p/q` form.
pub struct Show<'a>(pub &'a Rational);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.0))
    }
}

/// Parses `p`, `p/q`, `-p/q` or a finite decimal such as `0.3`.
pub fn parse(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, t),
    };
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = parse_digits(n.trim())?;
        let d: BigInt = parse_digits(d.trim())?;
        if d.is_zero() {
            return None;
        }
        Rational::new(n, d)
    } else if let Some((ip, fp)) = body.split_once('.') {
        if ip.is_empty() && fp.is_empty() {
            return None;
        }
        let ip: BigInt = if ip.is_empty() { BigInt::zero() } else { parse_digits(ip)? };
        let fpv: BigInt = if fp.is_empty() { BigInt::zero() } else { parse_digits(fp)? };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        Rational::new(ip * &scale + fpv, scale)
    } else {
        Rational::from_integer(parse_digits(body)?)
    };
    Some(if neg { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Greatest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

/// Ternary expansion of a rational in `[0, 1)` as `(preperiod, period)`
/// digit strings, computed by long division in base 3.
///
/// The period is never empty; terminating expansions end in period `[0]`.
pub fn ternary_expansion(x: &Rational) -> (Vec<u8>, Vec<u8>) {
    assert!(!x.is_negative() && x < &one(), "ternary expansion needs x in [0,1)");
    let den = x.denom().clone();
    let mut rem = x.numer().clone();
    let three = BigInt::from(3);
    let mut seen: Vec<BigInt> = Vec::new();
    let mut digits = Vec::new();
    loop {
        if let Some(pos) = seen.iter().position(|r| *r == rem) {
            let period = digits.split_off(pos);
            return (digits, period);
        }
        seen.push(rem.clone());
        let scaled = &rem * &three;
        let (q, r) = scaled.div_rem(&den);
        digits.push(q.to_u8().expect("ternary digit"));
        rem = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/6"), Some(rat(1, 2)));
        assert_eq!(parse("-7"), Some(int(-7)));
        assert_eq!(parse("0.3"), Some(rat(3, 10)));
        assert_eq!(parse("- 1/4"), Some(rat(-1, 4)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
        assert_eq!(parse(""), None);
    }

    #[test]
    fn renders_lowest_terms() {
        assert_eq!(render(&rat(6, 4)), "3/2");
        assert_eq!(render(&rat(-4, 2)), "-2");
        assert_eq!(render(&zero()), "0");
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
        assert_eq!(ceil(&rat(-1, 2)), BigInt::from(0));
        assert_eq!(ceil(&rat(7, 2)), BigInt::from(4));
        assert_eq!(floor(&int(3)), BigInt::from(3));
    }

    #[test]
    fn ternary_of_quarter_and_half() {
        // 1/4 = 0.(02) in base 3; 1/2 = 0.(1).
        assert_eq!(ternary_expansion(&rat(1, 4)), (vec![], vec![0, 2]));
        assert_eq!(ternary_expansion(&rat(1, 2)), (vec![], vec![1]));
        assert_eq!(ternary_expansion(&rat(1, 3)), (vec![1], vec![0]));
        assert_eq!(ternary_expansion(&zero()), (vec![], vec![0]));
    }

    #[test]
    fn pow_small() {
        assert_eq!(pow(&rat(1, 2), 10), rat(1, 1024));
        assert_eq!(pow(&int(3), 0), one());
    }
}
