//! Rigorous range bounds for the elementary functions appearing in the
//! vector field, evaluated over an interval domain.
//!
//! Each function is handled on its monotone pieces: endpoint enclosures are
//! hulled, interior extrema of sin/cos (where the value is exactly ±1) are
//! detected against a π enclosure, and poles of cot/csc inside the domain are
//! reported as errors rather than absorbed.

use num_bigint::BigInt;

use crate::enclosure::{
    enclose_cos, enclose_cot, enclose_csc, enclose_exp, enclose_pi, enclose_sin, EncloseError,
    PrecisionRequest,
};
use crate::grid::floor_rational;
use crate::interval::Interval;
use crate::rational::Rational;

/// The function whose range over a domain is requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RangeFn {
    Sin,
    Cos,
    Cot,
    Csc,
    CscSquared,
    Exp,
}

impl core::fmt::Display for RangeFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let name = match self {
            Self::Sin => "sin",
            Self::Cos => "cos",
            Self::Cot => "cot",
            Self::Csc => "csc",
            Self::CscSquared => "csc^2",
            Self::Exp => "exp",
        };
        f.write_str(name)
    }
}

/// Failure modes of range evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RangeError {
    /// cot/csc have a pole (a multiple of π) inside or too close to the
    /// domain to be excluded at the working precision.
    PoleInDomain { function: RangeFn },
    /// An underlying enclosure failed.
    Enclose(EncloseError),
}

impl From<EncloseError> for RangeError {
    fn from(e: EncloseError) -> Self {
        Self::Enclose(e)
    }
}

impl core::fmt::Display for RangeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::PoleInDomain { function } => {
                write!(f, "{function} has a pole inside the requested domain")
            }
            Self::Enclose(e) => write!(f, "{e}"),
        }
    }
}

/// Multiples `m·q` of a half-integer step `q = step_num/2 · π` that may lie
/// in `[a, b]`: returns the inclusive integer range to scan, conservatively
/// widened by one on each side.
fn scan_range(domain: &Interval, pi: &Interval, half_steps: bool) -> (BigInt, BigInt) {
    // Points are n·π (half_steps = false) or (n + 1/2)·π (half_steps = true).
    // The ±1 widening below absorbs all rounding in these ratios.
    let lo_ratio = domain.lo() / pi.hi();
    let hi_ratio = domain.hi() / pi.lo();
    let offset = if half_steps {
        Rational::from_ratio(1, 2)
    } else {
        Rational::zero()
    };
    let n_min = floor_rational(&(lo_ratio - &offset)) - 1u8;
    let n_max = floor_rational(&(hi_ratio - &offset)) + 1u8;
    (n_min, n_max)
}

/// Whether the point `(n + shift)·π` possibly lies in the closed domain,
/// judged conservatively against the π enclosure.
fn point_maybe_in(domain: &Interval, pi: &Interval, n: &BigInt, half: bool) -> bool {
    let factor = if half {
        Rational::from(n.clone()) + Rational::from_ratio(1, 2)
    } else {
        Rational::from(n.clone())
    };
    let point = pi.scale(&factor);
    // scale flips endpoints for negative factors; Interval::scale handles it.
    point.lo() <= domain.hi() && domain.lo() <= point.hi()
}

fn is_even(n: &BigInt) -> bool {
    use num_integer::Integer;
    n.is_even()
}

/// Interior extrema of sin over the domain: (attains +1, attains −1),
/// conservatively (may report true when the extremum is merely near the
/// boundary at working precision — still sound for an over-approximation).
fn sin_extrema(domain: &Interval, pi: &Interval) -> (bool, bool) {
    // sin = +1 at (2k + 1/2)π, −1 at (2k + 3/2)π, i.e. (n + 1/2)π with n
    // even/odd respectively.
    let (n_min, n_max) = scan_range(domain, pi, true);
    let (mut attains_hi, mut attains_lo) = (false, false);
    let mut n = n_min;
    while n <= n_max {
        if point_maybe_in(domain, pi, &n, true) {
            if is_even(&n) {
                attains_hi = true;
            } else {
                attains_lo = true;
            }
        }
        n += 1u8;
    }
    (attains_hi, attains_lo)
}

fn cos_extrema(domain: &Interval, pi: &Interval) -> (bool, bool) {
    // cos = +1 at even multiples of π, −1 at odd multiples.
    let (n_min, n_max) = scan_range(domain, pi, false);
    let (mut attains_hi, mut attains_lo) = (false, false);
    let mut n = n_min;
    while n <= n_max {
        if point_maybe_in(domain, pi, &n, false) {
            if is_even(&n) {
                attains_hi = true;
            } else {
                attains_lo = true;
            }
        }
        n += 1u8;
    }
    (attains_hi, attains_lo)
}

/// Whether any multiple of π possibly lies in the domain (pole of cot/csc).
fn pole_maybe_in(domain: &Interval, pi: &Interval) -> bool {
    let (n_min, n_max) = scan_range(domain, pi, false);
    let mut n = n_min;
    while n <= n_max {
        if point_maybe_in(domain, pi, &n, false) {
            return true;
        }
        n += 1u8;
    }
    false
}

fn full_unit_range() -> Interval {
    Interval::new(Rational::from_integer(-1), Rational::from_integer(1)).expect("-1 <= 1")
}

/// Domains at least this wide short-circuit sin/cos to [−1, 1].
fn wider_than_full_period(domain: &Interval) -> bool {
    domain.width() >= Rational::from_integer(7)
}

/// Arguments this large make the candidate scan for critical points
/// unreliable relative to the π enclosure; sin/cos fall back to [−1, 1] and
/// cot/csc refuse.
fn too_far_out(domain: &Interval) -> bool {
    domain.sup_abs() > Rational::from_integer(1_000_000_000)
}

/// Rigorous range of `function` over `domain`.
///
/// The result contains the exact image of the closed domain; endpoint values
/// enter via enclosures widened outward, and interior extrema of sin/cos are
/// included exactly (±1). For cot/csc a pole inside the domain is an error.
pub fn monotone_range(
    function: RangeFn,
    domain: &Interval,
    req: &PrecisionRequest,
) -> Result<Interval, RangeError> {
    match function {
        RangeFn::Exp => {
            let lo = enclose_exp(domain.lo(), req)?;
            let hi = enclose_exp(domain.hi(), req)?;
            Ok(Interval::new(lo.lo().clone(), hi.hi().clone()).expect("exp is increasing"))
        }
        RangeFn::Sin | RangeFn::Cos => {
            if wider_than_full_period(domain) || too_far_out(domain) {
                return Ok(full_unit_range());
            }
            let pi = enclose_pi(req)?;
            let at_lo;
            let at_hi;
            let (attains_hi, attains_lo) = match function {
                RangeFn::Sin => {
                    at_lo = enclose_sin(domain.lo(), req)?;
                    at_hi = enclose_sin(domain.hi(), req)?;
                    sin_extrema(domain, &pi)
                }
                _ => {
                    at_lo = enclose_cos(domain.lo(), req)?;
                    at_hi = enclose_cos(domain.hi(), req)?;
                    cos_extrema(domain, &pi)
                }
            };
            let hull = at_lo.hull(&at_hi);
            let one = Rational::from_integer(1);
            let lo = if attains_lo { -&one } else { hull.lo().clone() };
            let hi = if attains_hi { one } else { hull.hi().clone() };
            let raw = Interval::new(lo, hi).expect("extrema only widen");
            Ok(raw.intersect(&full_unit_range()).expect("nonempty"))
        }
        RangeFn::Cot => {
            let pi = enclose_pi(req)?;
            if too_far_out(domain) || pole_maybe_in(domain, &pi) {
                return Err(RangeError::PoleInDomain { function });
            }
            // With no pole inside, the domain sits in one branch, where cot
            // is strictly decreasing.
            let at_lo = enclose_cot(domain.lo(), req)?;
            let at_hi = enclose_cot(domain.hi(), req)?;
            Ok(Interval::new(at_hi.lo().clone(), at_lo.hi().clone())
                .expect("cot decreasing on a branch"))
        }
        RangeFn::Csc => csc_range(domain, req),
        RangeFn::CscSquared => Ok(csc_range(domain, req)?.square()),
    }
}

fn csc_range(domain: &Interval, req: &PrecisionRequest) -> Result<Interval, RangeError> {
    let pi = enclose_pi(req)?;
    if too_far_out(domain) || pole_maybe_in(domain, &pi) {
        return Err(RangeError::PoleInDomain {
            function: RangeFn::Csc,
        });
    }
    let at_lo = enclose_csc(domain.lo(), req)?;
    let at_hi = enclose_csc(domain.hi(), req)?;
    let hull = at_lo.hull(&at_hi);
    // On a pole-free domain sin keeps one sign; csc's only interior extremum
    // is ±1 where sin attains ±1.
    let (sin_hi_in, sin_lo_in) = sin_extrema(domain, &pi);
    let one = Rational::from_integer(1);
    let lo = if sin_hi_in && !hull.lo().is_negative() {
        one.clone()
    } else {
        hull.lo().clone()
    };
    let hi = if sin_lo_in && !hull.hi().is_positive() {
        -one
    } else {
        hull.hi().clone()
    };
    Ok(Interval::new(lo, hi).expect("extrema only tighten toward ±1 correctly"))
}

/// Convenience used by box evaluation: the range of `f(c·x)` over `x ∈ domain`
/// equals the range of `f` over `c·domain`.
pub fn scaled_domain(domain: &Interval, c: i64) -> Interval {
    domain.scale(&Rational::from_integer(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn dom(a: &str, b: &str) -> Interval {
        Interval::new(q(a), q(b)).unwrap()
    }

    fn req() -> PrecisionRequest {
        PrecisionRequest::width_pow10(12)
    }

    #[test]
    fn cot_over_doubled_radial_box() {
        let rng = monotone_range(RangeFn::Cot, &dom("521/500", "787/500"), &req()).unwrap();
        // cot(787/500) ≈ −0.0032037, cot(521/500) ≈ 0.5843013
        assert!(rng.contains(&q("-0.0032036841654718568038803919066")));
        assert!(rng.contains(&q("0.58430125862626649504971538688")));
        assert!(*rng.lo() > q("-0.0033"));
        assert!(*rng.hi() < q("0.5871"));
    }

    #[test]
    fn sin_with_interior_maximum() {
        let rng = monotone_range(RangeFn::Sin, &dom("1569/1000", "3143/1000"), &req()).unwrap();
        assert_eq!(*rng.hi(), q("1"));
        // Lower endpoint is sin(3143/1000) ≈ −0.0014073
        assert!(*rng.lo() <= q("-0.00140734594563614730768962290273"));
        assert!(*rng.lo() > q("-0.001408"));
    }

    #[test]
    fn cos_point_domain() {
        let rng = monotone_range(RangeFn::Cos, &dom("0", "0"), &req()).unwrap();
        assert!(rng.contains(&q("1")));
        assert!(rng.width() <= Rational::pow10(-12));
    }

    #[test]
    fn cos_with_interior_minimum() {
        let rng = monotone_range(RangeFn::Cos, &dom("3", "4"), &req()).unwrap();
        assert_eq!(*rng.lo(), q("-1"));
        // cos(3) ≈ −0.98999, cos(4) ≈ −0.65364; max of range is cos(4).
        assert!(rng.contains(&q("-0.653643620863611914639168183098")));
        assert!(*rng.hi() < q("-0.6536"));
    }

    #[test]
    fn sine_full_period_short_circuit() {
        let rng = monotone_range(RangeFn::Sin, &dom("-100", "100"), &req()).unwrap();
        assert_eq!(*rng.lo(), q("-1"));
        assert_eq!(*rng.hi(), q("1"));
    }

    #[test]
    fn pole_detection() {
        let err = monotone_range(RangeFn::Cot, &dom("3", "4"), &req());
        assert!(matches!(err, Err(RangeError::PoleInDomain { .. })));
        let err = monotone_range(RangeFn::Csc, &dom("-1/10", "1/10"), &req());
        assert!(matches!(err, Err(RangeError::PoleInDomain { .. })));
    }

    #[test]
    fn csc_squared_with_interior_minimum() {
        // Over [1.042, 1.574] (π/2 interior): csc² ranges in [1, csc²(1.042)].
        let rng =
            monotone_range(RangeFn::CscSquared, &dom("521/500", "787/500"), &req()).unwrap();
        assert_eq!(*rng.lo(), q("1"));
        assert!(rng.contains(&q("1.34140796083223916619380866901")));
        assert!(*rng.hi() < q("1.3415"));
    }

    #[test]
    fn csc_negative_branch() {
        // sin < 0 on (π, 2π): csc over [3.5, 4] is negative, hits −1 nowhere
        // here (sin = −1 at 3π/2 ≈ 4.712 is outside), so endpoints rule.
        let rng = monotone_range(RangeFn::Csc, &dom("7/2", "4"), &req()).unwrap();
        assert!(rng.hi().is_negative());
        // csc(3.5) ≈ −2.85076, csc(4) ≈ −1.32135
        assert!(rng.contains(&q("-2.85076297218571862344")));
        assert!(rng.contains(&q("-1.32134870881090439475")));
        // And over [4.5, 5] (containing 3π/2 ≈ 4.7124): upper endpoint is −1.
        let rng2 = monotone_range(RangeFn::Csc, &dom("9/2", "5"), &req()).unwrap();
        assert_eq!(*rng2.hi(), q("-1"));
    }

    #[test]
    fn exp_is_increasing() {
        let rng = monotone_range(RangeFn::Exp, &dom("0", "1"), &req()).unwrap();
        assert!(rng.contains(&q("1")));
        assert!(rng.contains(&q("2.71828182845904523536028747135")));
        assert!(*rng.lo() <= q("1"));
        assert!(*rng.hi() >= q("2.7182818284"));
    }
}
