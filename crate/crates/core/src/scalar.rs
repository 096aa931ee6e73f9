//! Scalar abstraction shared by the tiling, LP, regularity and extremality code.
//!
//! Everything that carries a weight, a density or a tolerance is generic over
//! [`Scalar`]. Floating point types compare with a small tolerance; the
//! rational types compare exactly.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Absolute slack used by comparisons. Zero for exact types.
    fn tolerance() -> Self;

    fn floor(&self) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Parses `a/b`, an integer, or a decimal literal.
    fn parse_scalar(s: &str) -> Option<Self>;

    fn from_count(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize fits the scalar type")
    }

    fn ceil(&self) -> Self {
        -(-self.clone()).floor()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn approx_le(&self, other: &Self) -> bool {
        self.clone() <= other.clone() + Self::tolerance()
    }

    fn definitely_gt(&self, other: &Self) -> bool {
        self.clone() > other.clone() + Self::tolerance()
    }

    fn is_integral(&self) -> bool {
        let half = Self::from_ratio(1, 2);
        let nearest = (self.clone() + half).floor();
        self.approx_eq(&nearest)
    }

    /// Largest multiple of `unit` that does not exceed `self` (up to tolerance).
    fn floor_to_multiple(&self, unit: &Self) -> Self {
        let q = self.clone() / unit.clone() + Self::tolerance();
        q.floor() * unit.clone()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn tolerance() -> Self {
                $tol
            }
            fn floor(&self) -> Self {
                <$t>::floor(*self)
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
            fn parse_scalar(s: &str) -> Option<Self> {
                let s = s.trim();
                match s.split_once('/') {
                    Some((a, b)) => {
                        let a: $t = a.trim().parse().ok()?;
                        let b: $t = b.trim().parse().ok()?;
                        (b != 0.0).then(|| a / b)
                    }
                    None => s.parse().ok(),
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

fn parse_decimal_ratio(s: &str) -> Option<(BigInt, BigInt)> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num = BigInt::from_str(a.trim()).ok()?;
        let den = BigInt::from_str(b.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some((num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    Some((num, den))
}

impl Scalar for Rational64 {
    fn tolerance() -> Self {
        Self::zero()
    }
    fn floor(&self) -> Self {
        Ratio::floor(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn parse_scalar(s: &str) -> Option<Self> {
        let (num, den) = parse_decimal_ratio(s)?;
        let r = BigRational::new(num, den);
        Some(Ratio::new(r.numer().to_i64()?, r.denom().to_i64()?))
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        Self::zero()
    }
    fn floor(&self) -> Self {
        Ratio::floor(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }
    fn parse_scalar(s: &str) -> Option<Self> {
        let (num, den) = parse_decimal_ratio(s)?;
        Some(Ratio::new(num, den))
    }
}

/// `n` choose `r` as an exact integer (saturating at `u128::MAX`).
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Scalar view of a binomial coefficient.
pub fn binomial_as<T: Scalar>(n: usize, r: usize) -> T {
    let b = binomial(n, r);
    T::from_u128(b).unwrap_or_else(|| T::from_f64(b as f64).expect("binomial fits the scalar type"))
}
