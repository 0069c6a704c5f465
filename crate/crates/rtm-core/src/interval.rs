//! Rational interval arithmetic, axis-aligned boxes, and rigorous norm
//! bounds.
//!
//! Endpoints are exact rationals, so the basic operations introduce no
//! rounding at all: the returned interval is the exact image hull of the
//! operands. Widening only ever happens where transcendental endpoint
//! enclosures enter (see [`crate::enclosure`] and [`crate::ranges`]).

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::rational::Rational;

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

/// Error for interval operations with unsatisfiable preconditions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntervalError {
    /// Division by an interval containing zero.
    DivisorContainsZero,
    /// Construction with `lo > hi`.
    EmptyInterval,
}

impl fmt::Display for IntervalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DivisorContainsZero => write!(f, "division by an interval containing zero"),
            Self::EmptyInterval => write!(f, "interval endpoints out of order (lo > hi)"),
        }
    }
}

#[cfg(feature = "oracle")]
impl std::error::Error for IntervalError {}

impl Interval {
    /// `[lo, hi]`; returns an error when `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, IntervalError> {
        if lo > hi {
            Err(IntervalError::EmptyInterval)
        } else {
            Ok(Self { lo, hi })
        }
    }

    /// The degenerate interval `[x, x]`.
    pub fn point(x: Rational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    /// Smallest interval containing both endpoints, in either order.
    pub fn spanning(a: Rational, b: Rational) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::from_ratio(1, 2)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `max(|x|) for x in self` — the magnitude bound used for sup-norms.
    pub fn sup_abs(&self) -> Rational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    /// `min(|x|) for x in self` (zero when the interval straddles zero).
    pub fn inf_abs(&self) -> Rational {
        if self.contains_zero() {
            Rational::zero()
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            if a <= b {
                a
            } else {
                b
            }
        }
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        if lo <= hi {
            Some(Self {
                lo: lo.clone(),
                hi: hi.clone(),
            })
        } else {
            None
        }
    }

    /// Convex hull of the union.
    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() },
            hi: if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() },
        }
    }

    /// Exact image of `{a + b}`.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Exact image of `{a − b}`.
    pub fn sub(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// Exact image of `{a · b}` (sign-case enumeration via the four corner
    /// products).
    pub fn mul(&self, other: &Self) -> Self {
        let c1 = &self.lo * &other.lo;
        let c2 = &self.lo * &other.hi;
        let c3 = &self.hi * &other.lo;
        let c4 = &self.hi * &other.hi;
        let mut lo = c1.clone();
        let mut hi = c1;
        for c in [c2, c3, c4] {
            if c < lo {
                lo = c;
            } else if c > hi {
                hi = c;
            }
        }
        Self { lo, hi }
    }

    /// Exact image of `{a / b}`; the divisor must exclude zero.
    pub fn div(&self, other: &Self) -> Result<Self, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisorContainsZero);
        }
        let recip = Self {
            lo: other.hi.recip().expect("nonzero by the zero check"),
            hi: other.lo.recip().expect("nonzero by the zero check"),
        };
        Ok(self.mul(&recip))
    }

    /// Exact image of `{c · a}` for a scalar `c`.
    pub fn scale(&self, c: &Rational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        Self::spanning(a, b)
    }

    /// Exact image of `{c + a}` for a scalar `c`.
    pub fn shift(&self, c: &Rational) -> Self {
        Self {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    /// Exact image of `{a²}` (tight: accounts for straddling zero).
    pub fn square(&self) -> Self {
        let sq = self.mul(self);
        if self.contains_zero() {
            Self {
                lo: Rational::zero(),
                hi: sq.hi,
            }
        } else {
            sq
        }
    }

    /// Widens both endpoints outward by `delta ≥ 0`.
    pub fn inflate(&self, delta: &Rational) -> Self {
        debug_assert!(!delta.is_negative());
        Self {
            lo: &self.lo - delta,
            hi: &self.hi + delta,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An axis-aligned product of closed rational intervals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntervalBox {
    axes: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(axes: Vec<Interval>) -> Self {
        Self { axes }
    }

    pub fn dimension(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> &Interval {
        &self.axes[i]
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn contains_point(&self, p: &[Rational]) -> bool {
        p.len() == self.axes.len() && self.axes.iter().zip(p).all(|(a, x)| a.contains(x))
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        other.axes.len() == self.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.contains_interval(b))
    }

    /// Widens every axis outward by `delta ≥ 0`.
    pub fn inflate(&self, delta: &Rational) -> Self {
        Self {
            axes: self.axes.iter().map(|a| a.inflate(delta)).collect(),
        }
    }

    /// First axis index whose interval does not contain the corresponding
    /// component, or `None` when the point is inside.
    pub fn first_violation(&self, p: &[Rational]) -> Option<usize> {
        debug_assert_eq!(p.len(), self.axes.len());
        self.axes
            .iter()
            .zip(p)
            .position(|(a, x)| !a.contains(x))
    }
}

/// A matrix of nonnegative entry bounds (e.g. componentwise `|∂f_i/∂u_j|`
/// suprema).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl BoundMatrix {
    /// Row-major `n×n` nonnegative entries. Returns `None` when the length is
    /// not `n²` or any entry is negative.
    pub fn new(n: usize, entries: Vec<Rational>) -> Option<Self> {
        if entries.len() != n * n || entries.iter().any(|e| e.is_negative()) {
            return None;
        }
        Some(Self { n, entries })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    /// Sum of squared entries, exactly.
    pub fn sum_of_squares(&self) -> Rational {
        self.entries.iter().map(|e| e * e).sum()
    }

    /// Componentwise bound on `|A·v|`: row i ↦ Σ_j entry(i,j)·|v_j|.
    pub fn abs_mat_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j) * &v[j].abs()).sum())
            .collect()
    }
}

/// Least multiple of `10^-digits` whose square is ≥ `x` (so the result is an
/// upper bound on `√x` within `10^-digits` of it). `x` must be ≥ 0.
pub fn sqrt_upper(x: &Rational, digits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::from(10u8).pow(digits);
    // Least g with g² ≥ x·10^(2d): g ∈ {s, s+1, s+2} for s = ⌊√⌊x·10^(2d)⌋⌋.
    let scaled = (x * &Rational::from_integer(&scale * &scale)).floor_int();
    let s = scaled.sqrt();
    for cand in [s.clone(), &s + 1u32, &s + 2u32] {
        let cand_sq = Rational::from_integer(&cand * &cand);
        if cand_sq >= x * &Rational::from_integer(&scale * &scale) {
            return Rational::new(cand, scale).expect("positive scale");
        }
    }
    unreachable!("integer sqrt bracket always contains the answer")
}

/// Greatest multiple of `10^-digits` whose square is ≤ `x`; lower counterpart
/// of [`sqrt_upper`]. `x` must be ≥ 0.
pub fn sqrt_lower(x: &Rational, digits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (x * &Rational::from_integer(&scale * &scale)).floor_int();
    // ⌊√⌊x·10^(2d)⌋⌋ / 10^d squares to ≤ x already; integer sqrt is exact.
    Rational::new(scaled.sqrt(), scale).expect("positive scale")
}

/// A rational `q` with `q² ≥ Σ entries²` — an upper bound on the Frobenius
/// norm, within `10^-6` of it. Downstream comparisons against claimed norm
/// constants are then exact rational `≤` checks.
pub fn frobenius_norm_bound(m: &BoundMatrix) -> Rational {
    sqrt_upper(&m.sum_of_squares(), 6)
}

/// Rigorous range of `offset + scale·∏ factors` over the factor intervals.
pub fn range_product_bound(factors: &[Interval], scale: &Rational, offset: &Rational) -> Interval {
    let mut acc = Interval::point(Rational::one());
    for f in factors {
        acc = acc.mul(f);
    }
    acc.scale(scale).shift(offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> Interval {
        Interval::new(r(lo), r(hi)).unwrap()
    }

    #[test]
    fn construction_order_checked() {
        assert!(Interval::new(r("1"), r("0")).is_err());
        assert_eq!(Interval::spanning(r("1"), r("0")), iv("0", "1"));
    }

    #[test]
    fn add_sub_examples() {
        assert_eq!(iv("1", "2").add(&iv("3", "4")), iv("4", "6"));
        assert_eq!(iv("1", "2").sub(&iv("3", "4")), iv("-3", "-1"));
        assert_eq!(iv("1", "2").neg(), iv("-2", "-1"));
    }

    #[test]
    fn mul_sign_cases() {
        assert_eq!(
            iv("-1", "0.0018").mul(&iv("1", "1.033")),
            iv("-1.033", "0.0018594")
        );
        assert_eq!(iv("-2", "3").mul(&iv("-5", "7")), iv("-15", "21"));
        assert_eq!(iv("-2", "-1").mul(&iv("-3", "-2")), iv("2", "6"));
    }

    #[test]
    fn div_rejects_zero_divisor() {
        assert_eq!(
            iv("1", "2").div(&iv("-1", "1")),
            Err(IntervalError::DivisorContainsZero)
        );
        assert_eq!(iv("1", "2").div(&iv("2", "4")).unwrap(), iv("1/4", "1"));
        assert_eq!(iv("-4", "2").div(&iv("-2", "-1")).unwrap(), iv("-2", "4"));
    }

    #[test]
    fn square_straddling_zero_starts_at_zero() {
        assert_eq!(iv("-2", "3").square(), iv("0", "9"));
        assert_eq!(iv("-3", "-2").square(), iv("4", "9"));
        assert_eq!(iv("2", "3").square(), iv("4", "9"));
    }

    #[test]
    fn sup_and_inf_abs() {
        assert_eq!(iv("-2", "1").sup_abs(), r("2"));
        assert_eq!(iv("-2", "1").inf_abs(), r("0"));
        assert_eq!(iv("-5", "-3").inf_abs(), r("3"));
        assert_eq!(iv("3", "5").sup_abs(), r("5"));
    }

    #[test]
    fn product_bound_composition() {
        // offset + scale·∏ over one factor: -3 - 3·[1/4, 1/3] = [-4, -15/4].
        let got = range_product_bound(&[iv("1/4", "1/3")], &r("-3"), &r("-3"));
        assert_eq!(got, iv("-4", "-15/4"));
        // Zero factor collapses the product.
        let got = range_product_bound(&[iv("0", "0"), iv("-7", "9")], &r("5"), &r("2"));
        assert_eq!(got, iv("2", "2"));
        // Empty factor list: offset + scale.
        let got = range_product_bound(&[], &r("5"), &r("2"));
        assert_eq!(got, iv("7", "7"));
    }

    #[test]
    fn sqrt_bounds_bracket_tightly() {
        for (s, d) in [("2", 6u32), ("286.9361", 6), ("46.573971", 8), ("0", 4), ("1/3", 10)] {
            let x = r(s);
            let up = sqrt_upper(&x, d);
            let lo = sqrt_lower(&x, d);
            assert!(&up * &up >= x, "upper bound squared below {s}");
            assert!(&lo * &lo <= x, "lower bound squared above {s}");
            assert!(&up - &lo <= r("2") * Rational::pow10(-(d as i32)));
        }
        // Exact squares are hit exactly from both sides.
        assert_eq!(sqrt_upper(&r("9/4"), 3), r("3/2"));
        assert_eq!(sqrt_lower(&r("9/4"), 3), r("3/2"));
    }

    #[test]
    fn frobenius_bound_examples() {
        let m = BoundMatrix::new(
            3,
            ["0", "0", "1", "0.265", "0", "1.033", "3.506", "5.539", "1.21"]
                .iter()
                .map(|s| r(s))
                .collect(),
        )
        .unwrap();
        assert_eq!(m.sum_of_squares(), r("46.573971"));
        let q = frobenius_norm_bound(&m);
        assert!(&q * &q >= r("46.573971"));
        // The bound certifies the claimed norm constant: q ≤ 6.8246.
        assert!(q <= r("6.8246"));

        let single = BoundMatrix::new(2, ["1", "0", "0", "0"].iter().map(|s| r(s)).collect())
            .unwrap();
        let q = frobenius_norm_bound(&single);
        assert!(q >= r("1") && q <= r("1.000001"));

        let zero = BoundMatrix::new(2, ["0", "0", "0", "0"].iter().map(|s| r(s)).collect())
            .unwrap();
        assert_eq!(frobenius_norm_bound(&zero), r("0"));
    }

    #[test]
    fn bound_matrix_validation_and_matvec() {
        assert!(BoundMatrix::new(2, alloc::vec![r("1"); 3]).is_none());
        assert!(BoundMatrix::new(2, alloc::vec![r("-1"); 4]).is_none());
        let m = BoundMatrix::new(
            3,
            ["0", "0", "1", "0.265", "0", "1.033", "3.506", "5.539", "1.21"]
                .iter()
                .map(|s| r(s))
                .collect(),
        )
        .unwrap();
        let prod = m.abs_mat_vec(&[r("1"), r("1.033"), r("4.98")]);
        assert_eq!(prod[0], r("4.98"));
        assert_eq!(prod[1], r("5.40934"));
        assert_eq!(prod[2], r("15.253587"));
    }

    #[test]
    fn box_membership_and_inflation() {
        let b = IntervalBox::new(alloc::vec![iv("0", "1"), iv("-1", "1")]);
        assert!(b.contains_point(&[r("1/2"), r("0")]));
        assert!(!b.contains_point(&[r("2"), r("0")]));
        assert_eq!(b.first_violation(&[r("1/2"), r("-3")]), Some(1));
        assert_eq!(b.first_violation(&[r("1/2"), r("-1")]), None);
        let w = b.inflate(&r("1/10"));
        assert!(w.contains_box(&b));
        assert!(w.contains_point(&[r("-1/10"), r("11/10")]));
    }
}
