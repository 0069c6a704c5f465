//! Adaptive-precision rigorous enclosures of sin, cos, cot, csc, exp and π
//! at rational arguments.
//!
//! Every function returns a closed rational interval proven (by construction:
//! truncated series plus an explicit tail bound, with all rounding directed
//! outward) to contain the true value. Precision escalates through a fixed
//! deterministic schedule of working digit counts, and results at successive
//! stages are intersected, so a tighter request always yields an interval
//! nested inside a looser one.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::grid::{floor_rational, GridSpec};
use crate::interval::Interval;
use crate::rational::Rational;
use crate::scaled::{self, Scaled};

/// How tight an enclosure is wanted and how much refinement is allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionRequest {
    /// Upper bound on the width of the returned interval (must be > 0).
    pub target_width: Rational,
    /// Maximum number of precision escalations before giving up.
    pub max_refinements: u32,
}

impl PrecisionRequest {
    pub fn new(target_width: Rational, max_refinements: u32) -> Self {
        assert!(target_width.is_positive(), "target width must be positive");
        assert!(max_refinements > 0, "refinement budget must be positive");
        Self {
            target_width,
            max_refinements,
        }
    }

    /// Target width `10^-digits` with the default refinement budget.
    pub fn width_pow10(digits: u32) -> Self {
        Self::new(Rational::pow10(-(digits as i32)), 20)
    }

    /// Stepping default for a grid of resolution `R`: width `R/1000`.
    pub fn for_grid(grid: &GridSpec) -> Self {
        Self::new(grid.resolution() * Rational::from_ratio(1, 1000), 20)
    }
}

impl Default for PrecisionRequest {
    fn default() -> Self {
        Self::width_pow10(13)
    }
}

/// Failure modes of enclosure construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncloseError {
    /// The width target was not met within the refinement budget.
    RefinementBudgetExhausted { achieved_width: Rational },
    /// A quotient's denominator enclosure still straddled zero at full
    /// precision — the argument is too close to a pole of cot/csc.
    PoleProximity { argument: Rational },
    /// A value sits so close to a grid line that its floor could not be
    /// decided within the refinement budget.
    GridTieUnresolved { lo: Rational, hi: Rational },
}

impl core::fmt::Display for EncloseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::RefinementBudgetExhausted { achieved_width } => write!(
                f,
                "refinement budget exhausted (best width {achieved_width})"
            ),
            Self::PoleProximity { argument } => {
                write!(f, "argument {argument} is too close to a pole")
            }
            Self::GridTieUnresolved { lo, hi } => write!(
                f,
                "enclosure [{lo}, {hi}] straddles a grid line after all refinements"
            ),
        }
    }
}

/// Working digits at refinement stage `i` (0-based): 16·2^i. The schedule is
/// independent of the request, so enclosures at different targets share a
/// common prefix of stages and nest under intersection.
fn stage_digits(stage: u32) -> u32 {
    16u32.checked_shl(stage).unwrap_or(u32::MAX / 2)
}

/// Shared refinement driver: evaluates `raw` at escalating precision,
/// intersecting successive results, until the width target is met.
fn run_stages<G>(req: &PrecisionRequest, mut raw: G) -> Result<Interval, EncloseError>
where
    G: FnMut(u32) -> Result<Interval, EncloseError>,
{
    let mut current: Option<Interval> = None;
    for stage in 0..req.max_refinements {
        let iv = raw(stage_digits(stage))?;
        let next = match &current {
            None => iv,
            Some(c) => c
                .intersect(&iv)
                .expect("stage enclosures share the true value"),
        };
        if next.width() <= req.target_width {
            return Ok(next);
        }
        current = Some(next);
    }
    Err(EncloseError::RefinementBudgetExhausted {
        achieved_width: current.map(|c| c.width()).unwrap_or_else(Rational::one),
    })
}

/// Enclosure of π.
pub fn enclose_pi(req: &PrecisionRequest) -> Result<Interval, EncloseError> {
    run_stages(req, |d| Ok(scaled::pi_scaled(d).to_interval()))
}

/// Arguments with magnitude above this are reduced modulo 2π first.
fn needs_reduction(x: &Rational) -> bool {
    x.abs() > Rational::from_integer(12)
}

/// Number of decimal digits of a positive integer.
fn digit_len(n: &BigInt) -> u32 {
    let mut d = 1u32;
    let mut probe = BigInt::from(10u8);
    let a = n.abs();
    while a >= probe {
        probe *= 10u8;
        d += 1;
    }
    d
}

/// Core sin/cos evaluation at one working precision, including argument
/// prerounding and (for large arguments) reduction modulo 2π.
fn circular_raw(x: &Rational, digits: u32, is_sin: bool) -> Scaled {
    let eval = |p: &BigInt, e: u32, d: u32| {
        if is_sin {
            scaled::sin_scaled(p, e, d)
        } else {
            scaled::cos_scaled(p, e, d)
        }
    };
    if !needs_reduction(x) {
        let work = digits + 2;
        let (p, e, exact) = scaled::preround(x, work);
        let s = eval(&p, e, work);
        // Prerounding moved the argument by < 10^-work; |slope| ≤ 1.
        let s = if exact { s } else { s.widen(1) };
        return s.clamp_unit();
    }
    // k ≈ x/(2π); any integer works for soundness, a good one keeps the
    // reduced argument small.
    let k_int = {
        let approx_two_pi = Rational::from_ratio(6283185307, 1_000_000_000);
        let half = Rational::from_ratio(1, 2);
        floor_rational(&(x / &approx_two_pi + half))
    };
    let pd = digits + digit_len(&k_int) + 6;
    let pi = scaled::pi_scaled(pd);
    let shift = pi.mul_bigint(&(&k_int * 2u8));
    let xs = Scaled::from_rational(x, pd);
    let reduced = xs.sub(&shift).rescale(digits + 2);
    // Evaluate at the lower endpoint; widen by the reduced interval's width
    // (|slope| ≤ 1) plus the evaluation's own slack.
    let width_units = reduced.width_units();
    let s = eval(&reduced.lo, digits + 2, digits + 2);
    s.widen_bigint(&width_units).clamp_unit()
}

fn circular(x: &Rational, req: &PrecisionRequest, is_sin: bool) -> Result<Interval, EncloseError> {
    run_stages(req, |d| Ok(circular_raw(x, d, is_sin).to_interval()))
}

/// Enclosure of sin(x); result ⊆ [−1, 1].
pub fn enclose_sin(x: &Rational, req: &PrecisionRequest) -> Result<Interval, EncloseError> {
    circular(x, req, true)
}

/// Enclosure of cos(x); result ⊆ [−1, 1].
pub fn enclose_cos(x: &Rational, req: &PrecisionRequest) -> Result<Interval, EncloseError> {
    circular(x, req, false)
}

/// Enclosure of exp(x).
pub fn enclose_exp(x: &Rational, req: &PrecisionRequest) -> Result<Interval, EncloseError> {
    if x.abs() > Rational::from_integer(100_000) {
        return Err(EncloseError::RefinementBudgetExhausted {
            achieved_width: Rational::one(),
        });
    }
    run_stages(req, |d| {
        let work = d + 2;
        let (p, e, exact) = scaled::preround(x, work);
        let lo_side = scaled::exp_scaled(&p, e, work);
        if exact {
            return Ok(lo_side.to_interval());
        }
        // exp is increasing: bracket between the two adjacent grid arguments.
        let hi_side = scaled::exp_scaled(&(&p + 1u8), e, work);
        Ok(Scaled::from_endpoints(lo_side.lo, hi_side.hi, work).to_interval())
    })
}

/// Quotient-style enclosure: numerator(x)/sin(x), used for cot (numerator
/// cos) and csc (numerator 1). Retries through the precision schedule while
/// the sine enclosure still straddles zero.
fn over_sin(
    x: &Rational,
    req: &PrecisionRequest,
    numerator_cos: bool,
) -> Result<Interval, EncloseError> {
    let mut current: Option<Interval> = None;
    let mut saw_pole = false;
    for stage in 0..req.max_refinements {
        let d = stage_digits(stage);
        let s = circular_raw(x, d, true);
        if s.contains_zero() {
            saw_pole = true;
            continue;
        }
        let num = if numerator_cos {
            circular_raw(x, d, false)
        } else {
            Scaled::point(BigInt::from(1u8), 0)
        };
        let q = num.div(&s, d).expect("sine enclosure excludes zero");
        let iv = q.to_interval();
        let next = match &current {
            None => iv,
            Some(c) => c
                .intersect(&iv)
                .expect("stage enclosures share the true value"),
        };
        if next.width() <= req.target_width {
            return Ok(next);
        }
        current = Some(next);
    }
    if current.is_none() && saw_pole {
        return Err(EncloseError::PoleProximity {
            argument: x.clone(),
        });
    }
    Err(EncloseError::RefinementBudgetExhausted {
        achieved_width: current.map(|c| c.width()).unwrap_or_else(Rational::one),
    })
}

/// Enclosure of cot(x) = cos(x)/sin(x); errors near multiples of π.
pub fn enclose_cot(x: &Rational, req: &PrecisionRequest) -> Result<Interval, EncloseError> {
    over_sin(x, req, true)
}

/// Enclosure of csc(x) = 1/sin(x); errors near multiples of π.
pub fn enclose_csc(x: &Rational, req: &PrecisionRequest) -> Result<Interval, EncloseError> {
    over_sin(x, req, false)
}

/// Grid floor of an enclosed value: refines until every point of the
/// enclosure has the same floor, then returns `R·⌊v/R⌋`.
///
/// `refine(attempt)` (attempt = 1, 2, …) must yield enclosures of the same
/// value with width → 0; it returns `None` once its budget is exhausted,
/// which surfaces here as a grid-tie error — a side is never picked silently.
pub fn floor_of_enclosed<F>(
    v: &Interval,
    grid: &GridSpec,
    mut refine: F,
) -> Result<Rational, EncloseError>
where
    F: FnMut(u32) -> Option<Result<Interval, EncloseError>>,
{
    let r = grid.resolution();
    let mut current = v.clone();
    let mut attempt = 0u32;
    loop {
        let lo_floor = floor_rational(&(current.lo() / r));
        let hi_floor = floor_rational(&(current.hi() / r));
        if lo_floor == hi_floor {
            return Ok(Rational::from(lo_floor) * r);
        }
        attempt += 1;
        match refine(attempt) {
            Some(Ok(tighter)) => {
                current = current
                    .intersect(&tighter)
                    .expect("refinements enclose the same value");
            }
            Some(Err(e)) => return Err(e),
            None => {
                return Err(EncloseError::GridTieUnresolved {
                    lo: current.lo().clone(),
                    hi: current.hi().clone(),
                })
            }
        }
    }
}

/// Convenience: enclosures of each component of a rational vector (exact —
/// width zero), used where point data meets interval-typed interfaces.
pub fn exact_intervals(v: &[Rational]) -> Vec<Interval> {
    v.iter().map(|x| Interval::point(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn req(digits: u32) -> PrecisionRequest {
        PrecisionRequest::width_pow10(digits)
    }

    #[test]
    fn pi_width_and_digits() {
        let iv = enclose_pi(&req(12)).unwrap();
        assert!(iv.width() <= Rational::pow10(-12));
        assert!(*iv.lo() > q("3.14159265358"));
        assert!(*iv.hi() < q("3.14159265360"));
    }

    #[test]
    fn pi_requests_nest() {
        let coarse = enclose_pi(&req(6)).unwrap();
        let fine = enclose_pi(&req(9)).unwrap();
        assert!(coarse.contains_interval(&fine));
        let unit = enclose_pi(&PrecisionRequest::new(Rational::from_integer(1), 5)).unwrap();
        assert!(unit.contains(&q("3.1415926535897932384626433832795028841971")));
    }

    #[test]
    fn sine_reference_points() {
        let z = enclose_sin(&q("0"), &req(12)).unwrap();
        assert!(z.contains(&q("0")));
        let near_pi = enclose_sin(&q("3143/1000"), &req(12)).unwrap();
        assert!(*near_pi.lo() > q("-0.001408"));
        assert!(*near_pi.hi() < q("-0.001407"));
        let tiny = enclose_sin(&q("3141592653/1000000000"), &req(12)).unwrap();
        assert!(tiny.contains(&q("0.00000000058979323846264338")));
        assert!(tiny.width() <= Rational::pow10(-12));
    }

    #[test]
    fn cosine_reference_points() {
        let one = enclose_cos(&q("0"), &req(12)).unwrap();
        assert!(one.contains(&q("1")));
        let c = enclose_cos(&q("1569/1000"), &req(12)).unwrap();
        assert!(*c.lo() > q("0.0017963"));
        assert!(*c.hi() < q("0.0017964"));
        let c132 = enclose_cos(&q("33/25"), &req(12)).unwrap();
        assert!(c132.contains(&q("0.248175451652372959573982729427")));
    }

    #[test]
    fn circular_enclosures_stay_in_unit_range() {
        let req1 = PrecisionRequest::new(Rational::from_ratio(1, 10), 3);
        for num in [-40i64, -13, -7, 0, 5, 11, 31, 400] {
            let x = Rational::from_ratio(num, 7);
            let s = enclose_sin(&x, &req1).unwrap();
            assert!(*s.lo() >= q("-1") && *s.hi() <= q("1"));
            let c = enclose_cos(&x, &req1).unwrap();
            assert!(*c.lo() >= q("-1") && *c.hi() <= q("1"));
        }
    }

    #[test]
    fn large_arguments_are_reduced() {
        // sin(100) = -0.50636564110975879…
        let s = enclose_sin(&q("100"), &req(12)).unwrap();
        assert!(s.contains(&q("-0.506365641109758793656557610459")));
        assert!(s.width() <= Rational::pow10(-12));
        // cos(-1000) = 0.56237907629070299…
        let c = enclose_cos(&q("-1000"), &req(10)).unwrap();
        assert!(c.contains(&q("0.562379076290702991078249226605")));
    }

    #[test]
    fn cot_csc_reference_points() {
        let d5 = enclose_cot(&q("787/500"), &req(10)).unwrap();
        assert!(*d5.lo() > q("-0.003204"));
        assert!(*d5.hi() < q("-0.003203"));
        let e5 = enclose_cot(&q("521/500"), &req(10)).unwrap();
        assert!(e5.contains(&q("0.58430125862626649504971538688")));
        let e3 = enclose_csc(&q("33/25"), &req(10)).unwrap();
        assert!(e3.contains(&q("1.0322952536591153896589227747")));
        let near_half_pi = enclose_csc(&q("15707963267/10000000000"), &req(12)).unwrap();
        assert!(near_half_pi.contains(&q("1.00000000000000000000450268417")));
        // cot just below π: large magnitude but still enclosed.
        let big = enclose_cot(&q("3141/1000"), &req(6)).unwrap();
        assert!(big.contains(&q("-1687.32612126663329540031772552")));
    }

    #[test]
    fn pole_is_reported() {
        // sin(0) = 0 exactly: csc must refuse rather than divide.
        let err = enclose_csc(&q("0"), &PrecisionRequest::new(Rational::pow10(-6), 3));
        assert!(matches!(err, Err(EncloseError::PoleProximity { .. })));
    }

    #[test]
    fn exp_reference_points() {
        let one = enclose_exp(&q("0"), &req(12)).unwrap();
        assert!(one.contains(&q("1")));
        // Both growth-factor arguments used by the error-certificate chain.
        let a = enclose_exp(&q("272369786/100000000"), &req(12)).unwrap();
        assert!(a.contains(&q("15.2365608685642860841154627796")));
        let b = enclose_exp(&q("270663636/100000000"), &req(12)).unwrap();
        assert!(b.contains(&q("14.9788073685038305299981243166")));
        // Negative argument stays positive.
        let n = enclose_exp(&q("-3"), &req(12)).unwrap();
        assert!(n.lo().is_positive());
        assert!(n.contains(&q("0.0497870683678639429793424156500617766316")));
    }

    #[test]
    fn floor_of_enclosed_refines_to_decision() {
        let grid = GridSpec::decimal(10);
        // π/2 floored on the 10⁻¹⁰ grid.
        let seed = enclose_pi(&req(4)).unwrap().scale(&q("1/2"));
        let got = floor_of_enclosed(&seed, &grid, |attempt| {
            Some(enclose_pi(&req(4 + 4 * attempt)).map(|iv| iv.scale(&q("1/2"))))
        })
        .unwrap();
        assert_eq!(got, q("15707963267/10000000000"));
    }

    #[test]
    fn floor_of_enclosed_simple_and_tie_cases() {
        let coarse = GridSpec::new(Rational::from_integer(1)).unwrap();
        let iv = Interval::new(q("3/10"), q("4/10")).unwrap();
        let got = floor_of_enclosed(&iv, &coarse, |_| None).unwrap();
        assert!(got.is_zero());
        // An enclosure pinned across a grid line with no refinement budget.
        let tie = Interval::new(q("0.52039999"), q("0.52040001")).unwrap();
        let err = floor_of_enclosed(&tie, &GridSpec::decimal(10), |_| None);
        assert!(matches!(err, Err(EncloseError::GridTieUnresolved { .. })));
    }

    #[test]
    fn width_contract_and_budget_error() {
        let tight = PrecisionRequest::new(Rational::pow10(-40), 2);
        // 16 then 32 digits cannot reach width 10⁻⁴⁰.
        let err = enclose_sin(&q("1/3"), &tight);
        assert!(matches!(
            err,
            Err(EncloseError::RefinementBudgetExhausted { .. })
        ));
        let ok = enclose_sin(&q("1/3"), &req(20)).unwrap();
        assert!(ok.width() <= Rational::pow10(-20));
        assert!(ok.contains(&q("0.3271946967961522441733440852676206060643")));
    }
}
