//! Exact non-negative rationals, possibly-infinite measured values, and
//! closed-form bounds of the shape `a + b·√d`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A non-negative arbitrary-precision rational, always in reduced form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        ExactScalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; fails on a zero denominator or a negative value.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self, Error> {
        if den == 0 {
            return Err(Error::Parse(format!("zero denominator in {num}/{den}")));
        }
        Self::try_from(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Decimal rendering rounded half-up to `places` digits, for humans.
    pub fn to_decimal(&self, places: usize) -> String {
        decimal_string(&self.0, places)
    }
}

impl TryFrom<BigRational> for ExactScalar {
    type Error = Error;

    fn try_from(value: BigRational) -> Result<Self, Error> {
        if value.is_negative() {
            Err(Error::Parse(format!("negative distance {value}")))
        } else {
            Ok(ExactScalar(value))
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        ExactScalar(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar(&self.0 + &rhs.0)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar(&self.0 * &rhs.0)
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        ExactScalar(iter.fold(BigRational::zero(), |acc, x| acc + x.0))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.0)
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Self::try_from(parse_rational(s)?)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text for a rational: `p` when integral, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or a decimal literal such as `-1.25` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut numer =
            BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRational::new(numer, denom));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

pub(crate) fn decimal_string(r: &BigRational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let negative = r.is_negative();
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2u32))).floor();
    let digits = rounded.to_integer();
    let (int, frac) = digits.div_rem(&scale);
    let sign = if negative && !digits.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        let frac = frac.to_string();
        format!("{sign}{int}.{}{frac}", "0".repeat(places - frac.len()))
    }
}

/// A measured audit value: an exact rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Finite(BigRational),
    Infinite,
}

impl Measure {
    pub fn zero() -> Self {
        Measure::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        Measure::Finite(BigRational::one())
    }

    /// `num / den` with the usual audit conventions for a zero denominator:
    /// `0/0` maps to `zero_over_zero`, `x/0` with `x > 0` to `+∞`.
    pub fn ratio(num: BigRational, den: BigRational, zero_over_zero: Measure) -> Measure {
        if den.is_zero() {
            if num.is_zero() {
                zero_over_zero
            } else {
                Measure::Infinite
            }
        } else {
            Measure::Finite(num / den)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Measure::Infinite)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Measure::Finite(r) => Some(r),
            Measure::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Measure::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Measure::Infinite => f64::INFINITY,
        }
    }

    pub fn to_decimal(&self, places: usize) -> String {
        match self {
            Measure::Finite(r) => decimal_string(r, places),
            Measure::Infinite => "inf".to_string(),
        }
    }
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Measure {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Measure::Finite(a), Measure::Finite(b)) => a.cmp(b),
            (Measure::Finite(_), Measure::Infinite) => Ordering::Less,
            (Measure::Infinite, Measure::Finite(_)) => Ordering::Greater,
            (Measure::Infinite, Measure::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Finite(r) => write_rational(f, r),
            Measure::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "+inf" => Ok(Measure::Infinite),
            other => parse_rational(other).map(Measure::Finite),
        }
    }
}

/// An exactly comparable real of the form `a + b·√radicand` with `b ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdBound {
    pub rational: BigRational,
    pub coefficient: BigRational,
    pub radicand: u32,
}

impl SurdBound {
    pub fn rational(value: BigRational) -> Self {
        SurdBound {
            rational: value,
            coefficient: BigRational::zero(),
            radicand: 1,
        }
    }

    pub fn new(rational: BigRational, coefficient: BigRational, radicand: u32) -> Self {
        assert!(
            !coefficient.is_negative(),
            "surd coefficient must be non-negative"
        );
        SurdBound {
            rational,
            coefficient,
            radicand,
        }
    }

    /// Exact test `x ≤ self`.
    pub fn ge_rational(&self, x: &BigRational) -> bool {
        // x ≤ a + b√d  ⇔  x − a ≤ b√d
        let lhs = x - &self.rational;
        if !lhs.is_positive() {
            return true;
        }
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        &lhs * &lhs <= &self.coefficient * &self.coefficient * d
    }

    /// Exact test `x < self`.
    pub fn gt_rational(&self, x: &BigRational) -> bool {
        let lhs = x - &self.rational;
        if !lhs.is_positive() {
            // lhs ≤ 0 ≤ b√d, strict unless both vanish
            return lhs.is_negative() || (self.coefficient.is_positive() && self.radicand > 0);
        }
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        &lhs * &lhs < &self.coefficient * &self.coefficient * d
    }

    /// `measure ≤ self`; `+∞` never is.
    pub fn admits(&self, measure: &Measure) -> bool {
        match measure {
            Measure::Finite(x) => self.ge_rational(x),
            Measure::Infinite => false,
        }
    }

    /// `self − x` as a float, for the human-readable margin column only.
    pub fn margin(&self, measure: &Measure) -> f64 {
        self.to_f64() - measure.to_f64()
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rational.to_f64().unwrap_or(f64::NAN);
        let b = self.coefficient.to_f64().unwrap_or(f64::NAN);
        a + b * f64::from(self.radicand).sqrt()
    }
}

impl fmt::Display for SurdBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.rational)?;
        if !self.coefficient.is_zero() {
            f.write_str(" + ")?;
            write_rational(f, &self.coefficient)?;
            write!(f, "*sqrt({})", self.radicand)?;
        }
        write!(f, " (~{:.6})", self.to_f64())
    }
}

pub(crate) fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn ceil_to_usize(r: &BigRational) -> usize {
    let c = r.ceil().to_integer();
    match c.sign() {
        Sign::Minus => 0,
        _ => c.to_usize().unwrap_or(usize::MAX),
    }
}
