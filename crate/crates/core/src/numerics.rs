//! Exact extended non-negative rationals and horizon-aware distances.
//!
//! Every distance in the crate is a non-negative rational or `∞`. Searches
//! that stop at a word-length horizon may only learn a strict lower bound,
//! which is carried by [`TruncatedDistance::UnknownAbove`] and never folded
//! into `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("product 0·∞ is undefined")]
    UndefinedProduct,
    #[error("negative value {0} is outside ℝ≥0 ∪ {{∞}}")]
    Negative(String),
    #[error("cannot parse `{0}` as a non-negative rational")]
    Parse(String),
}

/// Builds `num/den` as an exact rational.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"3/4"` or `"-1/2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, NumericsError> {
    let text = text.trim();
    let err = || NumericsError::Parse(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(text).map_err(|_| err())?,
        )),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A value of ℚ≥0 ∪ {∞}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtNonNeg(Option<Rational>);

impl ExtNonNeg {
    pub const INFINITY: ExtNonNeg = ExtNonNeg(None);

    pub fn zero() -> Self {
        ExtNonNeg(Some(Rational::zero()))
    }

    pub fn finite(value: Rational) -> Result<Self, NumericsError> {
        if value.is_negative() {
            return Err(NumericsError::Negative(format_rational(&value)));
        }
        Ok(ExtNonNeg(Some(value)))
    }

    pub fn from_int(n: u64) -> Self {
        ExtNonNeg(Some(Rational::from_integer(BigInt::from(n))))
    }

    /// `num/den`; panics on a zero denominator or a negative quotient.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        ExtNonNeg(Some(Rational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_none()
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Some(v) if v.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        self.0.as_ref()
    }

    pub fn into_finite(self) -> Option<Rational> {
        self.0
    }

    /// Numerator and denominator in lowest terms, `None` for `∞`.
    pub fn parts(&self) -> Option<(BigUint, BigUint)> {
        self.0.as_ref().map(|r| {
            (
                r.numer().magnitude().clone(),
                r.denom().magnitude().clone(),
            )
        })
    }

    /// `c·d`, undefined for `0·∞`.
    pub fn scale(&self, c: &Rational) -> Result<Self, NumericsError> {
        if c.is_negative() {
            return Err(NumericsError::Negative(format_rational(c)));
        }
        match &self.0 {
            Some(v) => Ok(ExtNonNeg(Some(v * c))),
            None if c.is_zero() => Err(NumericsError::UndefinedProduct),
            None => Ok(ExtNonNeg::INFINITY),
        }
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        debug_assert!(!q.is_negative());
        match &self.0 {
            Some(v) => ExtNonNeg(Some(v + q)),
            None => ExtNonNeg::INFINITY,
        }
    }

    /// `self − q` truncated at zero; `∞ − q = ∞`.
    pub fn saturating_sub(&self, q: &Rational) -> Self {
        match &self.0 {
            Some(v) if v > q => ExtNonNeg(Some(v - q)),
            Some(_) => ExtNonNeg::zero(),
            None => ExtNonNeg::INFINITY,
        }
    }

    pub fn min_of(a: Self, b: Self) -> Self {
        std::cmp::min(a, b)
    }
}

impl From<u64> for ExtNonNeg {
    fn from(n: u64) -> Self {
        ExtNonNeg::from_int(n)
    }
}

impl Ord for ExtNonNeg {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtNonNeg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ExtNonNeg {
    type Output = ExtNonNeg;

    fn add(self, rhs: &ExtNonNeg) -> ExtNonNeg {
        match (&self.0, &rhs.0) {
            (Some(a), Some(b)) => ExtNonNeg(Some(a + b)),
            _ => ExtNonNeg::INFINITY,
        }
    }
}

impl Add for ExtNonNeg {
    type Output = ExtNonNeg;

    fn add(self, rhs: ExtNonNeg) -> ExtNonNeg {
        &self + &rhs
    }
}

impl fmt::Display for ExtNonNeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(v) => f.write_str(&format_rational(v)),
            None => f.write_str("∞"),
        }
    }
}

impl fmt::Debug for ExtNonNeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtNonNeg {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "∞" | "inf" | "infinity" => Ok(ExtNonNeg::INFINITY),
            other => ExtNonNeg::finite(parse_rational(other)?),
        }
    }
}

/// Outcome of comparing two possibly truncated quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Holds,
    Violated,
    Undecided,
}

/// A distance as far as a bounded search could determine it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TruncatedDistance {
    Known(ExtNonNeg),
    /// The true distance is strictly greater than the bound; finiteness unknown.
    UnknownAbove(Rational),
}

impl TruncatedDistance {
    pub fn zero() -> Self {
        TruncatedDistance::Known(ExtNonNeg::zero())
    }

    pub fn infinite() -> Self {
        TruncatedDistance::Known(ExtNonNeg::INFINITY)
    }

    pub fn from_int(n: u64) -> Self {
        TruncatedDistance::Known(ExtNonNeg::from_int(n))
    }

    pub fn known(&self) -> Option<&ExtNonNeg> {
        match self {
            TruncatedDistance::Known(v) => Some(v),
            TruncatedDistance::UnknownAbove(_) => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, TruncatedDistance::Known(_))
    }

    pub fn is_finite_known(&self) -> bool {
        matches!(self, TruncatedDistance::Known(v) if !v.is_infinite())
    }

    /// Greatest lower bound and whether it is strict.
    fn lower(&self) -> (ExtNonNeg, bool) {
        match self {
            TruncatedDistance::Known(v) => (v.clone(), false),
            TruncatedDistance::UnknownAbove(b) => (ExtNonNeg(Some(b.clone())), true),
        }
    }

    fn upper(&self) -> ExtNonNeg {
        match self {
            TruncatedDistance::Known(v) => v.clone(),
            TruncatedDistance::UnknownAbove(_) => ExtNonNeg::INFINITY,
        }
    }

    pub fn add(&self, other: &TruncatedDistance) -> TruncatedDistance {
        use TruncatedDistance::*;
        match (self, other) {
            (Known(a), Known(b)) => Known(a + b),
            (Known(k), UnknownAbove(b)) | (UnknownAbove(b), Known(k)) => match k.as_finite() {
                Some(k) => UnknownAbove(b + k),
                None => TruncatedDistance::infinite(),
            },
            (UnknownAbove(a), UnknownAbove(b)) => UnknownAbove(a + b),
        }
    }

    pub fn add_rational(&self, q: &Rational) -> TruncatedDistance {
        match self {
            TruncatedDistance::Known(v) => TruncatedDistance::Known(v.add_rational(q)),
            TruncatedDistance::UnknownAbove(b) => TruncatedDistance::UnknownAbove(b + q),
        }
    }

    /// Multiplication by a positive constant.
    pub fn scale(&self, c: &Rational) -> TruncatedDistance {
        debug_assert!(c.is_positive());
        match self {
            TruncatedDistance::Known(v) => {
                TruncatedDistance::Known(v.scale(c).expect("positive scale is total"))
            }
            TruncatedDistance::UnknownAbove(b) => TruncatedDistance::UnknownAbove(b * c),
        }
    }

    /// Minimum that never over-claims exactness: the result is `Known` only
    /// when some exact candidate is no larger than every other candidate's
    /// certified lower bound.
    pub fn min(&self, other: &TruncatedDistance) -> TruncatedDistance {
        use TruncatedDistance::*;
        match (self, other) {
            (Known(a), Known(b)) => Known(std::cmp::min(a, b).clone()),
            (Known(k), UnknownAbove(b)) | (UnknownAbove(b), Known(k)) => {
                if k.as_finite().is_some_and(|k| k <= b) {
                    Known(k.clone())
                } else {
                    // the true minimum exceeds min(b, k) >= b
                    UnknownAbove(b.clone())
                }
            }
            (UnknownAbove(a), UnknownAbove(b)) => UnknownAbove(std::cmp::min(a, b).clone()),
        }
    }

    /// Decides `self ≤ other` from the information carried by both sides.
    pub fn le(&self, other: &TruncatedDistance) -> Decision {
        let upper = self.upper();
        let (other_lower, _) = other.lower();
        if upper <= other_lower {
            return Decision::Holds;
        }
        let (lower, strict) = self.lower();
        let other_upper = other.upper();
        if lower > other_upper || (strict && lower >= other_upper) {
            return Decision::Violated;
        }
        Decision::Undecided
    }

    /// Decides `self = other`.
    pub fn eq_decision(&self, other: &TruncatedDistance) -> Decision {
        match (self.le(other), other.le(self)) {
            (Decision::Holds, Decision::Holds) => Decision::Holds,
            (Decision::Violated, _) | (_, Decision::Violated) => Decision::Violated,
            _ => Decision::Undecided,
        }
    }

    /// Decides `self < other`.
    pub fn lt(&self, other: &TruncatedDistance) -> Decision {
        match other.le(self) {
            Decision::Holds => Decision::Violated,
            Decision::Violated => Decision::Holds,
            Decision::Undecided => Decision::Undecided,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TruncatedDistance::Known(v) if v.is_zero())
    }
}

impl From<ExtNonNeg> for TruncatedDistance {
    fn from(v: ExtNonNeg) -> Self {
        TruncatedDistance::Known(v)
    }
}

impl fmt::Display for TruncatedDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncatedDistance::Known(v) => write!(f, "{v}"),
            TruncatedDistance::UnknownAbove(b) => write!(f, ">{}", format_rational(b)),
        }
    }
}

impl fmt::Debug for TruncatedDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Report encoding. Integers that fit a u64 are written as JSON numbers,
// larger ones as decimal strings.

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(u64),
    Big(String),
}

impl WireInt {
    fn from_big(n: &BigUint) -> Self {
        match n.to_u64() {
            Some(v) => WireInt::Small(v),
            None => WireInt::Big(n.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigUint, String> {
        match self {
            WireInt::Small(v) => Ok(BigUint::from(*v)),
            WireInt::Big(s) => BigUint::from_str(s).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Wire {
    Exact { num: WireInt, den: WireInt },
    Infinite,
    UnknownAbove { num: WireInt, den: WireInt },
}

fn wire_parts(r: &Rational) -> (WireInt, WireInt) {
    (
        WireInt::from_big(r.numer().magnitude()),
        WireInt::from_big(r.denom().magnitude()),
    )
}

fn unwire(num: &WireInt, den: &WireInt) -> Result<Rational, String> {
    let num = num.to_big()?;
    let den = den.to_big()?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    let value = Rational::new(
        BigInt::from_biguint(Sign::Plus, num.clone()),
        BigInt::from_biguint(Sign::Plus, den.clone()),
    );
    // bit-exact encodings are in lowest terms
    if value.numer().magnitude() != &num || value.denom().magnitude() != &den {
        return Err(format!("{num}/{den} is not in lowest terms"));
    }
    Ok(value)
}

impl Serialize for ExtNonNeg {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Some(r) => {
                let (num, den) = wire_parts(r);
                Wire::Exact { num, den }.serialize(serializer)
            }
            None => Wire::Infinite.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNonNeg {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match Wire::deserialize(deserializer)? {
            Wire::Exact { num, den } => Ok(ExtNonNeg(Some(unwire(&num, &den).map_err(D::Error::custom)?))),
            Wire::Infinite => Ok(ExtNonNeg::INFINITY),
            Wire::UnknownAbove { .. } => Err(D::Error::custom("unknown_above is not a definite value")),
        }
    }
}

impl Serialize for TruncatedDistance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            TruncatedDistance::Known(v) => v.serialize(serializer),
            TruncatedDistance::UnknownAbove(b) => {
                let (num, den) = wire_parts(b);
                Wire::UnknownAbove { num, den }.serialize(serializer)
            }
        }
    }
}

impl<'de> Deserialize<'de> for TruncatedDistance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match Wire::deserialize(deserializer)? {
            Wire::Exact { num, den } => Ok(TruncatedDistance::Known(ExtNonNeg(Some(
                unwire(&num, &den).map_err(D::Error::custom)?,
            )))),
            Wire::Infinite => Ok(TruncatedDistance::infinite()),
            Wire::UnknownAbove { num, den } => Ok(TruncatedDistance::UnknownAbove(
                unwire(&num, &den).map_err(D::Error::custom)?,
            )),
        }
    }
}
