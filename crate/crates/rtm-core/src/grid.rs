//! Grid rounding: the operator `z = R·⌊y/R⌋` that closes each integration
//! step over a fixed rational grid `R·ℤ`.
//!
//! Rounding is always a floor (toward −∞) componentwise, so
//! `0 ≤ y − round(y) < R` holds for every component, and rounded values are
//! exact integer multiples of the resolution.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::rational::Rational;

/// A rounding grid `R·ℤ` described by its resolution `R > 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GridSpec {
    resolution: Rational,
}

impl GridSpec {
    /// Builds a grid with the given resolution. Returns `None` unless
    /// `resolution > 0`.
    pub fn new(resolution: Rational) -> Option<Self> {
        if resolution.is_positive() {
            Some(Self { resolution })
        } else {
            None
        }
    }

    /// The grid `10^-digits·ℤ` (e.g. `decimal(10)` rounds to ten decimals).
    pub fn decimal(digits: u32) -> Self {
        Self {
            resolution: Rational::pow10(-(digits as i32)),
        }
    }

    pub fn resolution(&self) -> &Rational {
        &self.resolution
    }

    /// When the resolution is exactly `10^-d`, returns `d`. Enables the
    /// integer fast path in the integration engine.
    pub fn decimal_digits(&self) -> Option<u32> {
        if !self.resolution.numer().is_one() {
            return None;
        }
        let den = self.resolution.denom();
        // den == 10^d iff its decimal form is 1 followed by d zeros.
        let digits = den.to_string();
        let mut bytes = digits.bytes();
        if bytes.next() != Some(b'1') || !bytes.all(|b| b == b'0') {
            return None;
        }
        (digits.len() - 1).to_u32()
    }
}

/// `⌊x⌋` as a big integer; rounds toward −∞ for negatives.
pub fn floor_rational(x: &Rational) -> BigInt {
    x.floor_int()
}

/// `R·⌊y/R⌋`: the largest grid multiple not exceeding `y`.
pub fn round_to_grid(y: &Rational, grid: &GridSpec) -> Rational {
    let r = grid.resolution();
    let q = floor_rational(&(y / r));
    Rational::from_integer(q) * r
}

/// Componentwise [`round_to_grid`].
pub fn round_vector_to_grid(y: &[Rational], grid: &GridSpec) -> Vec<Rational> {
    y.iter().map(|c| round_to_grid(c, grid)).collect()
}
