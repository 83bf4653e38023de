//! Exact measures with power-of-two denominators.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `numerator / 2^exponent`, kept reduced (odd numerator, or zero over `2^0`)
/// and inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicMeasure {
    numerator: BigUint,
    exponent: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DyadicError {
    #[error("measure {0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("expected \"num/2^exp\", got {0:?}")]
    Syntax(String),
}

impl DyadicMeasure {
    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Result<Self, DyadicError> {
        let numerator = numerator.into();
        if numerator > (BigUint::one() << exponent) {
            return Err(DyadicError::OutOfRange(format!("{numerator}/2^{exponent}")));
        }
        Ok(Self::reduced(numerator, exponent))
    }

    fn reduced(mut numerator: BigUint, mut exponent: u32) -> Self {
        if numerator.is_zero() {
            return Self {
                numerator,
                exponent: 0,
            };
        }
        let tz = numerator.trailing_zeros().unwrap_or(0).min(exponent as u64) as u32;
        numerator >>= tz;
        exponent -= tz;
        Self {
            numerator,
            exponent,
        }
    }

    pub fn zero() -> Self {
        Self::reduced(BigUint::zero(), 0)
    }

    pub fn one() -> Self {
        Self::reduced(BigUint::one(), 0)
    }

    /// `count / 2^k`: the measure of `count` atoms of a `k`-generator space.
    pub fn from_atoms(count: u64, generators: u32) -> Self {
        Self::new(count, generators).expect("atom count exceeds space size")
    }

    /// `1 - 1/2^n`.
    pub fn one_minus_half_pow(n: u32) -> Self {
        let full = BigUint::one() << n;
        Self::reduced(full - 1u32, n)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.numerator.is_one()
    }

    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u32) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
            e,
        )
    }

    /// Sum, or `None` when it exceeds one.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let (a, b, e) = self.aligned(other);
        Self::new(a + b, e).ok()
    }

    /// Difference, or `None` when negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let (a, b, e) = self.aligned(other);
        (a >= b).then(|| Self::reduced(a - b, e))
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Self::one().checked_sub(self).expect("measure at most one")
    }

    /// Compares with the rational `p / q` (`q > 0`) by cross-multiplication.
    pub fn cmp_ratio(&self, p: &BigUint, q: &BigUint) -> Ordering {
        assert!(!q.is_zero(), "zero denominator");
        let lhs = &self.numerator * q;
        let rhs = p << self.exponent;
        lhs.cmp(&rhs)
    }

    /// Compares with `p / q` for machine integers.
    pub fn cmp_fraction(&self, p: u64, q: u64) -> Ordering {
        self.cmp_ratio(&BigUint::from(p), &BigUint::from(q))
    }

    /// Nearest `f64`; for display and statistics only.
    pub fn to_f64(&self) -> f64 {
        let num = self.numerator.to_f64().unwrap_or(f64::INFINITY);
        num / 2f64.powi(self.exponent as i32)
    }
}

impl PartialOrd for DyadicMeasure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicMeasure {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl FromStr for DyadicMeasure {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || DyadicError::Syntax(s.to_string());
        let (num, den) = s.trim().split_once('/').ok_or_else(syntax)?;
        let exp = den.trim().strip_prefix("2^").ok_or_else(syntax)?;
        let numerator: BigUint = num.trim().parse().map_err(|_| syntax())?;
        let exponent: u32 = exp.parse().map_err(|_| syntax())?;
        Self::new(numerator, exponent)
    }
}

impl Serialize for DyadicMeasure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
