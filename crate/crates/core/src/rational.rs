//! Exact rational numbers and closed intervals.
//!
//! All quantizer geometry is computed over `BigRational` so that boundary
//! membership and equality of midpoints never depend on a tolerance. Values
//! entered as decimal text ("1.2", "-0.45", "2.5e-1") or fractions ("6/5")
//! are converted without rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an exact rational from decimal or fraction notation.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse(n)?;
        let d = parse(d)?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .bytes()
        .chain(frac.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut value = Rational::from_integer(joined.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= pow(&ten, shift as u32);
    } else {
        value /= pow(&ten, (-shift) as u32);
    }
    Ok(if negative { -value } else { value })
}

/// Converts a finite `f64` through its shortest round-trip decimal form, so
/// that `1.2` becomes exactly `6/5`.
pub fn from_f64_decimal(v: f64) -> Result<Rational> {
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite number {v}")));
    }
    parse(&format!("{v:e}"))
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Only reachable for astronomically large values.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn log2_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 900 {
        n.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

/// Base-2 logarithm of a positive rational, accurate for values far outside
/// the `f64` range.
pub fn log2(r: &Rational) -> f64 {
    assert!(r.is_positive(), "log2 of a non-positive rational");
    log2_bigint(r.numer()) - log2_bigint(r.denom())
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!(
                "interval with lo > hi: [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn parse(lo: &str, hi: &str) -> Result<Self> {
        Self::new(parse(lo)?, parse(hi)?)
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[-half, half]`.
    pub fn symmetric(half: Rational) -> Self {
        let half = half.abs();
        Self {
            lo: -half.clone(),
            hi: half,
        }
    }

    pub fn centered(mid: &Rational, len: &Rational) -> Self {
        let half = len / int(2);
        Self {
            lo: mid - &half,
            hi: mid + &half,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when the open interiors intersect.
    pub fn interiors_overlap(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn scale(&self, k: &Rational) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Minkowski sum.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Point of the interval closest to `x`.
    pub fn clamp(&self, x: &Rational) -> Rational {
        if x < &self.lo {
            self.lo.clone()
        } else if x > &self.hi {
            self.hi.clone()
        } else {
            x.clone()
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Lebesgue measure of a finite union of closed intervals (sort and merge).
pub fn union_measure(intervals: &[Interval]) -> Rational {
    merge(intervals)
        .iter()
        .fold(Rational::zero(), |acc, iv| acc + iv.len())
}

/// Sorted, pairwise disjoint components of a finite union of intervals.
pub fn merge(intervals: &[Interval]) -> Vec<Interval> {
    let mut sorted: Vec<&Interval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
    let mut out: Vec<Interval> = Vec::new();
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi.clone();
                }
            }
            _ => out.push(iv.clone()),
        }
    }
    out
}

pub fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse("1.2").unwrap(), ratio(6, 5));
        assert_eq!(parse("-0.45").unwrap(), ratio(-9, 20));
        assert_eq!(parse("2.5e-1").unwrap(), ratio(1, 4));
        assert_eq!(parse("6/5").unwrap(), ratio(6, 5));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("3").unwrap(), int(3));
        assert!(parse("1.2.3").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1/0").is_err());
        assert_eq!(from_f64_decimal(1.2).unwrap(), ratio(6, 5));
        assert_eq!(from_f64_decimal(0.1).unwrap(), ratio(1, 10));
    }

    #[test]
    fn log2_handles_huge_values() {
        let big = pow(&ratio(6, 5), 5000);
        let expected = 5000.0 * 1.2f64.log2();
        assert!((log2(&big) - expected).abs() < 1e-9 * expected);
        assert!((log2(&ratio(1, 8)) + 3.0).abs() < 1e-15);
    }

    #[test]
    fn merge_and_measure() {
        let ivs = vec![
            Interval::new(int(0), int(2)).unwrap(),
            Interval::new(int(1), int(3)).unwrap(),
            Interval::new(int(5), int(6)).unwrap(),
        ];
        assert_eq!(union_measure(&ivs), int(4));
        assert_eq!(merge(&ivs).len(), 2);
        let a = Interval::new(int(0), int(1)).unwrap();
        let b = Interval::new(int(1), int(2)).unwrap();
        assert!(!a.interiors_overlap(&b));
        assert!(a.intersect(&b).is_some());
    }
}
