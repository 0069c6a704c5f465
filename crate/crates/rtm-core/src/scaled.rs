//! Internal fixed-scale integer layer behind the enclosure functions.
//!
//! A value is carried as an integer pair `(lo, hi)` meaning the interval
//! `[lo, hi]·10^-exp`. All rounding is directed (floor on lower endpoints,
//! ceiling on upper ones), so containment is preserved by construction. The
//! series cores evaluate truncated Maclaurin series as a single exact integer
//! Horner recurrence over the common denominator, then attach an explicit
//! tail bound; no rational reduction (gcd) happens anywhere on this path.


use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::rational::Rational;

pub(crate) fn pow10(n: u32) -> BigInt {
    BigInt::from(10u8).pow(n)
}

/// `⌊a/b⌋` for `b > 0`.
pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    a.div_floor(b)
}

/// `⌈a/b⌉` for `b > 0`.
pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    a.div_ceil(b)
}

/// An interval `[lo, hi]·10^-exp` with integer endpoints.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub lo: BigInt,
    pub hi: BigInt,
    pub exp: u32,
}

impl Scaled {
    pub fn from_endpoints(lo: BigInt, hi: BigInt, exp: u32) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi, exp }
    }

    pub fn point(v: BigInt, exp: u32) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
            exp,
        }
    }

    /// Outward-rounded enclosure of an exact rational at scale `10^-exp`.
    pub fn from_rational(x: &Rational, exp: u32) -> Self {
        let scaled_num = x.numer() * pow10(exp);
        Self {
            lo: floor_div(&scaled_num, x.denom()),
            hi: ceil_div(&scaled_num, x.denom()),
            exp,
        }
    }

    pub fn to_interval(&self) -> Interval {
        let den = pow10(self.exp);
        Interval::new(
            Rational::new(self.lo.clone(), den.clone()).expect("positive scale"),
            Rational::new(self.hi.clone(), den).expect("positive scale"),
        )
        .expect("lo <= hi by construction")
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Re-expresses at scale `exp'`, rounding outward when coarsening.
    pub fn rescale(&self, exp: u32) -> Self {
        if exp >= self.exp {
            let m = pow10(exp - self.exp);
            Self {
                lo: &self.lo * &m,
                hi: &self.hi * &m,
                exp,
            }
        } else {
            let d = pow10(self.exp - exp);
            Self {
                lo: floor_div(&self.lo, &d),
                hi: ceil_div(&self.hi, &d),
                exp,
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let e = self.exp.max(other.exp);
        (self.rescale(e), other.rescale(e))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            exp: a.exp,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self {
            lo: a.lo - b.hi,
            hi: a.hi - b.lo,
            exp: a.exp,
        }
    }

    /// Product, exact at scale `self.exp + other.exp`.
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
        Self {
            lo,
            hi,
            exp: self.exp + other.exp,
        }
    }

    /// Scales by an integer constant (exact).
    pub fn mul_int(&self, c: i64) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        let (lo, hi) = if c >= 0 { (a, b) } else { (b, a) };
        Self {
            lo,
            hi,
            exp: self.exp,
        }
    }

    /// Scales by a big integer constant (exact).
    pub fn mul_bigint(&self, c: &BigInt) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        let (lo, hi) = if c.is_negative() { (b, a) } else { (a, b) };
        Self {
            lo,
            hi,
            exp: self.exp,
        }
    }

    /// Quotient at scale `10^-out_exp`, rounded outward. `None` when the
    /// divisor contains zero.
    pub fn div(&self, other: &Self, out_exp: u32) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        // v = (a/10^ea)/(b/10^eb) = a·10^eb / (b·10^ea); at scale 10^out_exp
        // the endpoint candidates are a_end·10^(eb+out) / (b_end·10^ea).
        let num_scale = pow10(other.exp + out_exp);
        let den_scale = pow10(self.exp);
        let corners = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for (a, b) in corners {
            let mut num = a * &num_scale;
            let mut den = b * &den_scale;
            if den.is_negative() {
                num = -num;
                den = -den;
            }
            let f = floor_div(&num, &den);
            let c = ceil_div(&num, &den);
            lo = Some(match lo {
                Some(v) if v <= f => v,
                _ => f,
            });
            hi = Some(match hi {
                Some(v) if v >= c => v,
                _ => c,
            });
        }
        Some(Self {
            lo: lo.expect("nonempty corners"),
            hi: hi.expect("nonempty corners"),
            exp: out_exp,
        })
    }

    /// Widens both endpoints outward by `units` at the current scale.
    pub fn widen(&self, units: u32) -> Self {
        Self {
            lo: &self.lo - units,
            hi: &self.hi + units,
            exp: self.exp,
        }
    }

    /// Widens both endpoints outward by a big-integer unit count (≥ 0).
    pub fn widen_bigint(&self, units: &BigInt) -> Self {
        debug_assert!(!units.is_negative());
        Self {
            lo: &self.lo - units,
            hi: &self.hi + units,
            exp: self.exp,
        }
    }

    /// Intersects with `[-10^exp, 10^exp]` (unit clamp for sine/cosine).
    pub fn clamp_unit(&self) -> Self {
        let one = pow10(self.exp);
        let neg = -&one;
        Self {
            lo: if self.lo < neg { neg.clone() } else { self.lo.clone() },
            hi: if self.hi > one { one } else { self.hi.clone() },
            exp: self.exp,
        }
    }

    pub fn width_units(&self) -> BigInt {
        &self.hi - &self.lo
    }
}

/// Ceiling of `|p|/10^e` as a machine integer.
fn arg_magnitude(p: &BigInt, e: u32) -> u32 {
    let c = ceil_div(&p.abs(), &pow10(e));
    u32::try_from(c).unwrap_or(u32::MAX)
}

/// Largest argument magnitude the direct series cores accept.
pub(crate) const SERIES_MAX_ARG: u32 = 16;

/// Picks the truncation order `K` and returns `(K, (top)!·guard checks ok)`.
/// Ensures the geometric-tail bound `tail ≤ 2·c^(top)/top!` is valid and that
/// it is below `10^-(digits+1)`, where `top` is the first omitted order.
fn pick_order(c: u32, digits: u32, odd: bool, step2: bool) -> u32 {
    // `odd`: series over odd powers (sine); `step2`: powers step by 2.
    let c_big = BigInt::from(c.max(1));
    let c_sq = &c_big * &c_big;
    let budget = pow10(digits + 1) * 2u8;
    let mut k: u32 = 0;
    // Running c^top and top! for the first omitted term.
    let (mut top, step): (u32, u32) = if step2 {
        (if odd { 3 } else { 2 }, 2)
    } else {
        (1, 1)
    };
    let mut c_pow = c_big.pow(top);
    let mut fact: BigInt = (1..=top).product::<u32>().into();
    loop {
        // Geometric ratio of consecutive (omitted) terms must be ≤ 1/2.
        let ratio_ok = if step2 {
            BigInt::from((top as u64 + 1) * (top as u64 + 2)) >= 2u8 * &c_sq
        } else {
            BigInt::from(top + 1) >= 2u8 * &c_big
        };
        // tail ≤ 2·c^top/top! ≤ 10^-(digits+1)  ⟺  2·c^top·10^(digits+1) ≤ top!.
        if ratio_ok && &c_pow * &budget <= fact {
            return k;
        }
        k += 1;
        if step2 {
            c_pow *= &c_sq;
            fact *= BigInt::from(top + 1) * BigInt::from(top + 2);
        } else {
            c_pow *= &c_big;
            fact *= BigInt::from(top + 1);
        }
        top += step;
        assert!(k < 10_000_000, "series order runaway");
    }
}

/// Enclosure of `sin(p/10^e)` at scale `10^-digits`. Requires
/// `|p/10^e| ≤ SERIES_MAX_ARG`.
pub(crate) fn sin_scaled(p: &BigInt, e: u32, digits: u32) -> Scaled {
    let c = arg_magnitude(p, e);
    assert!(c <= SERIES_MAX_ARG, "series argument out of range");
    if p.is_zero() {
        return Scaled::point(BigInt::zero(), digits);
    }
    let k = pick_order(c, digits, true, true);
    // sin(p/B) = p·V₀ / (B^(2K+1)·(2K+1)!) where
    //   V_j = W_j − p²·V_{j+1},  V_K = 1,
    //   W_j = B^(2(K−j))·(2K+1)!/(2j+1)!  (so W_K = 1, W_j = W_{j+1}·B²·(2j+2)(2j+3)).
    let b_sq = pow10(2 * e);
    let p_sq = p * p;
    let mut v = BigInt::one();
    let mut w = BigInt::one();
    for j in (0..k).rev() {
        w *= &b_sq;
        w *= BigInt::from(2 * j + 2) * BigInt::from(2 * j + 3);
        v = &w - &p_sq * &v;
    }
    // After the loop W = W₀ = B^(2K)·(2K+1)!; the common denominator is W·B.
    let den = &w * pow10(e);
    let num = p * &v;
    let scale = pow10(digits);
    let lo = floor_div(&(&num * &scale), &den);
    let hi = ceil_div(&(&num * &scale), &den);
    // The omitted tail is ≤ 10^-(digits+1) < 1 unit; widen by one unit.
    Scaled::from_endpoints(lo - 1u8, hi + 1u8, digits).clamp_unit()
}

/// Enclosure of `cos(p/10^e)` at scale `10^-digits`. Requires
/// `|p/10^e| ≤ SERIES_MAX_ARG`.
pub(crate) fn cos_scaled(p: &BigInt, e: u32, digits: u32) -> Scaled {
    let c = arg_magnitude(p, e);
    assert!(c <= SERIES_MAX_ARG, "series argument out of range");
    if p.is_zero() {
        return Scaled::point(pow10(digits), digits);
    }
    let k = pick_order(c, digits, false, true);
    // cos(p/B) = V₀ / (B^(2K)·(2K)!) with W_j = W_{j+1}·B²·(2j+1)(2j+2).
    let b_sq = pow10(2 * e);
    let p_sq = p * p;
    let mut v = BigInt::one();
    let mut w = BigInt::one();
    for j in (0..k).rev() {
        w *= &b_sq;
        w *= BigInt::from(2 * j + 1) * BigInt::from(2 * j + 2);
        v = &w - &p_sq * &v;
    }
    let den = w;
    let scale = pow10(digits);
    let lo = floor_div(&(&v * &scale), &den);
    let hi = ceil_div(&(&v * &scale), &den);
    Scaled::from_endpoints(lo - 1u8, hi + 1u8, digits).clamp_unit()
}

/// Enclosure of `exp(p/10^e)` at scale `10^-digits` (any sign of `p`;
/// the magnitude guard is soft — callers keep arguments moderate).
pub(crate) fn exp_scaled(p: &BigInt, e: u32, digits: u32) -> Scaled {
    if p.is_zero() {
        return Scaled::point(pow10(digits), digits);
    }
    let c = arg_magnitude(p, e);
    let k = pick_order(c, digits, false, false);
    // exp(p/B) = V₀ / (B^K·K!) with V_j = W_j + p·V_{j+1}, V_K = 1,
    // W_j = B^(K−j)·K!/j!  (W_K = 1, W_j = W_{j+1}·B·(j+1)).
    let b = pow10(e);
    let mut v = BigInt::one();
    let mut w = BigInt::one();
    for j in (0..k).rev() {
        w *= &b;
        w *= BigInt::from(j + 1);
        v = &w + p * &v;
    }
    let den = w;
    let scale = pow10(digits);
    let lo = floor_div(&(&v * &scale), &den) - 1u8;
    let hi = ceil_div(&(&v * &scale), &den) + 1u8;
    // exp is positive everywhere.
    let lo = if lo.is_negative() { BigInt::zero() } else { lo };
    Scaled::from_endpoints(lo, hi, digits)
}

/// Enclosure of one arctangent term `atan(1/m)` at scale `10^-digits`, by the
/// alternating series with per-term directed rounding.
fn atan_inv_scaled(m: u32, digits: u32) -> (BigInt, BigInt) {
    let scale = pow10(digits);
    let m_big = BigInt::from(m);
    let m_sq = &m_big * &m_big;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut m_pow = m_big.clone(); // m^(2j+1)
    let mut j: u32 = 0;
    loop {
        let den = &m_pow * BigInt::from(2 * j + 1);
        let t_floor = floor_div(&scale, &den);
        let t_ceil = ceil_div(&scale, &den);
        if j % 2 == 0 {
            lo += &t_floor;
            hi += &t_ceil;
        } else {
            lo -= &t_ceil;
            hi -= &t_floor;
        }
        m_pow *= &m_sq;
        j += 1;
        if j % 2 == 0 {
            continue;
        }
        // The last added index was even, so the partial sum S is an upper
        // bound and atan ∈ [S − t_j, S]; stop once t_j rounds to ≤ 1 unit.
        let next_den = &m_pow * BigInt::from(2 * j + 1);
        let next_ceil = ceil_div(&scale, &next_den);
        if next_ceil <= BigInt::one() {
            lo -= next_ceil;
            return (lo, hi);
        }
    }
}

/// Enclosure of π at scale `10^-digits` via 16·atan(1/5) − 4·atan(1/239).
pub(crate) fn pi_scaled(digits: u32) -> Scaled {
    let guard = 10;
    let g = digits + guard;
    let (a5_lo, a5_hi) = atan_inv_scaled(5, g);
    let (a239_lo, a239_hi) = atan_inv_scaled(239, g);
    let lo = a5_lo * 16u8 - a239_hi * 4u8;
    let hi = a5_hi * 16u8 - a239_lo * 4u8;
    Scaled::from_endpoints(lo, hi, g).rescale(digits)
}

/// Decomposes a rational into `(numerator, e)` with value exactly
/// `numerator/10^e` for some `e ≤ max_exp`. Works on canonical (reduced)
/// rationals: the denominator qualifies iff it has only the prime factors
/// 2 and 5.
pub(crate) fn as_pow10(x: &Rational, max_exp: u32) -> Option<(BigInt, u32)> {
    let den = x.denom();
    if den.is_one() {
        return Some((x.numer().clone(), 0));
    }
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let mut rest = den.clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
        if twos > max_exp {
            return None;
        }
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
        if fives > max_exp {
            return None;
        }
    }
    if !rest.is_one() {
        return None;
    }
    let e = twos.max(fives);
    Some((x.numer() * (pow10(e) / den), e))
}

/// Splits an interval argument into per-endpoint scaled evaluation plus a
/// Lipschitz widening: returns points `(value, exp)` whose hull, widened by
/// the interval width, is used by slope-1 functions (sine/cosine).
pub(crate) fn preround(x: &Rational, exp: u32) -> (BigInt, u32, bool) {
    // Exact when the denominator is already a power of ten at or below scale.
    if let Some((num, e)) = as_pow10(x, exp) {
        return (num, e, true);
    }
    let num = floor_div(&(x.numer() * pow10(exp)), x.denom());
    (num, exp, false)
}
