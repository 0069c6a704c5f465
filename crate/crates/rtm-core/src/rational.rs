//! Arbitrary-precision exact rational numbers.
//!
//! [`Rational`] wraps a reduced big-rational: denominator always positive,
//! numerator and denominator always coprime. All arithmetic is exact — no
//! operation introduces rounding of any kind. This is the only number type
//! used on rigorous paths.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number in canonical form.
///
/// Invariants (maintained by every constructor and operation):
/// * denominator > 0,
/// * gcd(|numerator|, denominator) = 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

/// Error produced when a string cannot be parsed as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
    reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

#[cfg(feature = "oracle")]
impl std::error::Error for ParseRationalError {}

impl Rational {
    /// Builds `num/den` in canonical form. Returns `None` when `den == 0`.
    pub fn new(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self(BigRational::new(num, den)))
    }

    /// The integer `n` as a rational.
    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    /// `num / den` from machine integers; panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    /// `10^exp` for `exp` possibly negative (e.g. `pow10(-10)` = 1/10^10).
    pub fn pow10(exp: i32) -> Self {
        let p = BigInt::from(10u8).pow(exp.unsigned_abs());
        if exp >= 0 {
            Self(BigRational::from_integer(p))
        } else {
            Self(BigRational::new(BigInt::one(), p))
        }
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// Largest integer not exceeding `self` (rounds toward −∞ for negatives).
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer not less than `self`.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Exact reciprocal. Returns `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self(self.0.recip()))
        }
    }

    /// Exact division. Returns `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(Self(&self.0 / &rhs.0))
        }
    }

    /// Exact integer power (negative exponents invert; `0^negative` is `None`).
    pub fn checked_pow(&self, exp: i32) -> Option<Self> {
        if exp < 0 && self.is_zero() {
            return None;
        }
        Some(Self(self.0.pow(exp)))
    }

    /// `self * 10^exp` exactly.
    pub fn scale_pow10(&self, exp: i32) -> Self {
        self * &Self::pow10(exp)
    }

    /// True when `self` is an integer multiple of `step` (`step` nonzero).
    pub fn is_multiple_of(&self, step: &Self) -> bool {
        match self.checked_div(step) {
            Some(q) => q.is_integer(),
            None => false,
        }
    }

    /// Nearest `f64`, for labelled non-rigorous output only.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with exactly `digits` fractional digits, truncated
    /// toward zero. The result is generally *not* exact; rigorous output must
    /// use the `num/den` form instead.
    pub fn decimal_approx(&self, digits: u32) -> String {
        let neg = self.is_negative();
        let a = self.abs();
        let scaled = (&a * &Rational::pow10(digits as i32)).floor_int();
        let s = scaled.to_string();
        let d = digits as usize;
        let (int_part, frac_part) = if s.len() > d {
            let (i, f) = s.split_at(s.len() - d);
            (String::from(i), String::from(f))
        } else {
            let mut f = String::new();
            for _ in 0..(d - s.len()) {
                f.push('0');
            }
            f.push_str(&s);
            (String::from("0"), f)
        };
        let sign = if neg && !(scaled.is_zero()) { "-" } else { "" };
        if d == 0 {
            alloc::format!("{sign}{int_part}")
        } else {
            alloc::format!("{sign}{int_part}.{frac_part}")
        }
    }

}

impl fmt::Display for Rational {
    /// Canonical text form: `num/den`, or just `num` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `num/den` fractions, plain integers, and decimal literals
    /// (parsed exactly, e.g. `0.3966` → `3966/10000` → canonical `1983/5000`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRationalError {
            input: String::from(s),
            reason,
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty string"));
        }
        if let Some((num, den)) = t.split_once('/') {
            let n = BigInt::from_str(num.trim()).map_err(|_| err("bad numerator"))?;
            let d = BigInt::from_str(den.trim()).map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            return Ok(Self(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad fractional part"));
            }
            let (sign, int_digits) = match int_part.as_bytes().first() {
                Some(b'-') => (Sign::Minus, &int_part[1..]),
                Some(b'+') => (Sign::Plus, &int_part[1..]),
                _ => (Sign::Plus, int_part),
            };
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad integer part"));
            }
            let mut all = String::from(int_digits);
            all.push_str(frac_part);
            let mag = BigUint::from_str(if all.is_empty() { "0" } else { &all })
                .map_err(|_| err("bad digits"))?;
            let num = BigInt::from_biguint(sign, mag);
            let den = BigInt::from(10u8).pow(frac_part.len() as u32);
            return Ok(Self(BigRational::new(num, den)));
        }
        let n = BigInt::from_str(t).map_err(|_| err("bad integer"))?;
        Ok(Self::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    /// Exact division; panics on a zero divisor (use [`Rational::checked_div`]
    /// when the divisor is not known to be nonzero).
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        (&self).div(rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Self::from_integer(v)
    }
}

/// Sum of an iterator of rationals (exact).
impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Componentwise parsing helper for vector-valued CLI/config input.
pub fn parse_components(s: &str) -> Result<Vec<Rational>, ParseRationalError> {
    s.split(',').map(|part| part.trim().parse()).collect()
}

/// Total order helper usable in `max_by`/`min_by` chains.
pub fn cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}
