//! Exact rationals for image ratios and planner arithmetic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

/// Always stored in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigRatio(BigRational);

impl BigRatio {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, AlgebraError> {
        let den = den.into();
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(BigRatio(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        BigRatio(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        BigRatio(BigRational::zero())
    }

    pub fn one() -> Self {
        BigRatio(BigRational::one())
    }

    /// `2^{-k}`.
    pub fn inverse_power_of_two(k: u64) -> Self {
        BigRatio(BigRational::new(BigInt::one(), BigInt::one() << k as usize))
    }

    /// `1 - 2^{-k}`.
    pub fn one_minus_inverse_power_of_two(k: u64) -> Self {
        Self::one() - Self::inverse_power_of_two(k)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        BigRatio(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(BigRatio(self.0.recip()))
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: u64) -> Self {
        BigRatio(BigRational::new(
            self.0.numer() << k as usize,
            self.0.denom().clone(),
        ))
    }

    /// Multiply by `2^{-k}`.
    pub fn shr(&self, k: u64) -> Self {
        BigRatio(BigRational::new(
            self.0.numer().clone(),
            self.0.denom() << k as usize,
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        BigRatio(num_traits::pow(self.0.clone(), e as usize))
    }

    /// Advisory only; never used in exact comparisons.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `num/den` with unsigned inputs, for sizes and orders.
    pub fn from_counts(num: &BigUint, den: &BigUint) -> Result<Self, AlgebraError> {
        Self::new(
            BigInt::from_biguint(Sign::Plus, num.clone()),
            BigInt::from_biguint(Sign::Plus, den.clone()),
        )
    }
}

impl Add for BigRatio {
    type Output = BigRatio;
    fn add(self, rhs: BigRatio) -> BigRatio {
        BigRatio(self.0 + rhs.0)
    }
}

impl Sub for BigRatio {
    type Output = BigRatio;
    fn sub(self, rhs: BigRatio) -> BigRatio {
        BigRatio(self.0 - rhs.0)
    }
}

impl Mul for BigRatio {
    type Output = BigRatio;
    fn mul(self, rhs: BigRatio) -> BigRatio {
        BigRatio(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigRatio> for &'a BigRatio {
    type Output = BigRatio;
    fn mul(self, rhs: &'a BigRatio) -> BigRatio {
        BigRatio(&self.0 * &rhs.0)
    }
}

impl<'a> Sub<&'a BigRatio> for &'a BigRatio {
    type Output = BigRatio;
    fn sub(self, rhs: &'a BigRatio) -> BigRatio {
        BigRatio(&self.0 - &rhs.0)
    }
}

/// Panics on a zero divisor, like integer division.
impl Div for BigRatio {
    type Output = BigRatio;
    fn div(self, rhs: BigRatio) -> BigRatio {
        BigRatio(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a BigRatio> for &'a BigRatio {
    type Output = BigRatio;
    fn div(self, rhs: &'a BigRatio) -> BigRatio {
        BigRatio(&self.0 / &rhs.0)
    }
}

impl fmt::Display for BigRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `p/q`, integers, and decimal literals with an optional exponent
/// (`0.3`, `1e-6`, `-2.5E3`). Decimals convert exactly.
impl FromStr for BigRatio {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || AlgebraError::BadRational(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Self::new(n, d);
        }
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => {
                let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
                (&s[..i], e)
            }
            None => (s, 0),
        };
        let (negative, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
        if negative {
            num = -num;
        }
        let scale = exponent - frac_part.len() as i64;
        let ten = BigInt::from(10u32);
        let value = if scale >= 0 {
            BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
        };
        Ok(BigRatio(value))
    }
}

#[derive(Serialize, Deserialize)]
struct RatioRepr {
    num: String,
    den: String,
}

/// `{"num": "...", "den": "..."}` with decimal-string components.
impl Serialize for BigRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RatioRepr {
            num: self.0.numer().to_string(),
            den: self.0.denom().to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BigRatio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RatioRepr::deserialize(deserializer)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(D::Error::custom)?;
        BigRatio::new(num, den).map_err(D::Error::custom)
    }
}

/// Exact comparison by cross-multiplication.
pub fn cmp_exact(a: &BigRatio, b: &BigRatio) -> Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRatio {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes() {
        let x = BigRatio::new(3, 6).unwrap();
        assert_eq!(x.numer(), &BigInt::from(1));
        assert_eq!(x.denom(), &BigInt::from(2));
        let y = BigRatio::new(2, -4).unwrap();
        assert_eq!(y.to_string(), "-1/2");
        assert_eq!(BigRatio::new(1, 0), Err(AlgebraError::ZeroDenominator));
    }

    #[test]
    fn basic_ops() {
        assert_eq!(r("1/2") * r("3/4"), r("3/8"));
        assert_eq!(
            BigRatio::one_minus_inverse_power_of_two(10).cmp(&BigRatio::one()),
            Ordering::Less
        );
        assert_eq!(r("1/3").shl(3), r("8/3"));
        assert_eq!(r("1/3").shr(1), r("1/6"));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(r("0.3"), BigRatio::new(3, 10).unwrap());
        assert_eq!(r("1e-6"), BigRatio::new(1, 1_000_000).unwrap());
        assert_eq!(r("-2.5E3"), BigRatio::from_integer(-2500));
        assert_eq!(r(".25"), BigRatio::new(1, 4).unwrap());
        assert_eq!(r("3/8"), BigRatio::new(3, 8).unwrap());
        assert!("abc".parse::<BigRatio>().is_err());
        assert!("1/0".parse::<BigRatio>().is_err());
        assert!(".".parse::<BigRatio>().is_err());
    }
}
