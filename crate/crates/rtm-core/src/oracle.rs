//! Independent reference enclosures used by the test suites (feature
//! `oracle`; never part of a rigorous production path).
//!
//! Everything here is deliberately implemented differently from the main
//! enclosure machinery, so agreement between the two is evidence against
//! implementation error rather than a tautology:
//!
//! * series are summed term by term in exact rational arithmetic, where the
//!   main path runs one integer Horner recurrence over a common denominator;
//! * π comes from Euler's identity `π/4 = 5·atan(1/7) + 2·atan(3/79)`,
//!   where the main path uses `π/4 = 4·atan(1/5) − atan(1/239)`;
//! * tails are bounded by the doubled first omitted term under a checked
//!   ratio condition, where the main path widens by fixed output units.

use crate::interval::Interval;
use crate::rational::Rational;

/// `10^-(digits+1)`: the tail size the series are driven below.
fn goal(digits: u32) -> Rational {
    Rational::pow10(-(digits as i32 + 1))
}

/// Alternating arctangent series for rational `|x| < 1`; the remainder is
/// bounded by the first omitted term.
fn atan_rational(x: &Rational, digits: u32) -> Interval {
    debug_assert!(x.abs() < Rational::one());
    let goal = goal(digits);
    let x_sq = x * x;
    let mut power = x.clone();
    let mut sum = Rational::zero();
    let mut j: i64 = 0;
    loop {
        let term = &power / &Rational::from_integer(2 * j + 1);
        sum = if j % 2 == 0 { sum + &term } else { sum - &term };
        power = &power * &x_sq;
        j += 1;
        let next = power.abs() / Rational::from_integer(2 * j + 1);
        if next <= goal {
            return Interval::new(&sum - &next, &sum + &next).expect("lo <= hi");
        }
    }
}

/// Enclosure of π from Euler's two-term arctangent identity.
pub fn oracle_pi(digits: u32) -> Interval {
    let a = atan_rational(&Rational::from_ratio(1, 7), digits + 2);
    let b = atan_rational(&Rational::from_ratio(3, 79), digits + 2);
    a.scale(&Rational::from_integer(20))
        .add(&b.scale(&Rational::from_integer(8)))
}

/// Largest argument magnitude accepted by the series (matches the main
/// path's direct-evaluation window).
fn assert_in_window(x: &Rational) {
    assert!(
        x.abs() <= Rational::from_integer(16),
        "oracle series argument out of range"
    );
}

/// Enclosure of sin(x) for rational `|x| ≤ 16`.
pub fn oracle_sin(x: &Rational, digits: u32) -> Interval {
    assert_in_window(x);
    let goal = goal(digits);
    let x_sq = x * x;
    let two = Rational::from_integer(2);
    let mut power = x.clone(); // x^(2j+1)
    let mut factorial = Rational::one(); // (2j+1)!
    let mut sum = Rational::zero();
    let mut j: i64 = 0;
    loop {
        let term = &power / &factorial;
        sum = if j % 2 == 0 { sum + &term } else { sum - &term };
        power = &power * &x_sq;
        factorial = &factorial * &Rational::from_integer((2 * j + 2) * (2 * j + 3));
        j += 1;
        // Tail ≤ 2·t_j once consecutive term ratios are ≤ 1/2, i.e.
        // 2x² ≤ (2j+2)(2j+3).
        let ratio_ok = &x_sq * &two <= Rational::from_integer((2 * j + 2) * (2 * j + 3));
        let tail = &two * &(power.abs() / &factorial);
        if ratio_ok && tail <= goal {
            return Interval::new(&sum - &tail, &sum + &tail).expect("lo <= hi");
        }
    }
}

/// Enclosure of cos(x) for rational `|x| ≤ 16`.
pub fn oracle_cos(x: &Rational, digits: u32) -> Interval {
    assert_in_window(x);
    let goal = goal(digits);
    let x_sq = x * x;
    let two = Rational::from_integer(2);
    let mut power = Rational::one(); // x^(2j)
    let mut factorial = Rational::one(); // (2j)!
    let mut sum = Rational::zero();
    let mut j: i64 = 0;
    loop {
        let term = &power / &factorial;
        sum = if j % 2 == 0 { sum + &term } else { sum - &term };
        power = &power * &x_sq;
        factorial = &factorial * &Rational::from_integer((2 * j + 1) * (2 * j + 2));
        j += 1;
        let ratio_ok = &x_sq * &two <= Rational::from_integer((2 * j + 1) * (2 * j + 2));
        let tail = &two * &(power.abs() / &factorial);
        if ratio_ok && tail <= goal {
            return Interval::new(&sum - &tail, &sum + &tail).expect("lo <= hi");
        }
    }
}

/// Enclosure of exp(x) for rational `|x| ≤ 16`.
pub fn oracle_exp(x: &Rational, digits: u32) -> Interval {
    assert_in_window(x);
    let goal = goal(digits);
    let two = Rational::from_integer(2);
    let mut power = Rational::one(); // x^j
    let mut factorial = Rational::one(); // j!
    let mut sum = Rational::zero();
    let mut j: i64 = 0;
    loop {
        sum = sum + &(&power / &factorial);
        power = &power * x;
        factorial = &factorial * &Rational::from_integer(j + 1);
        j += 1;
        // Ratio condition 2|x| ≤ j+1 makes the tail ≤ 2·t_j.
        let ratio_ok = &x.abs() * &two <= Rational::from_integer(j + 1);
        let tail = &two * &(power.abs() / &factorial);
        if ratio_ok && tail <= goal {
            let lo = &sum - &tail;
            let lo = if lo.is_negative() { Rational::zero() } else { lo };
            return Interval::new(lo, &sum + &tail).expect("lo <= hi");
        }
    }
}

/// Enclosure of cot(x); `None` when the sine enclosure cannot exclude zero.
pub fn oracle_cot(x: &Rational, digits: u32) -> Option<Interval> {
    let s = oracle_sin(x, digits + 6);
    let c = oracle_cos(x, digits + 6);
    c.div(&s).ok()
}

/// Enclosure of csc(x); `None` when the sine enclosure cannot exclude zero.
pub fn oracle_csc(x: &Rational, digits: u32) -> Option<Interval> {
    let s = oracle_sin(x, digits + 6);
    Interval::point(Rational::one()).div(&s).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::{enclose_cos, enclose_pi, enclose_sin, PrecisionRequest};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    /// Containment up to the reference string's own truncation error: the
    /// series tails can be far tighter than the quoted decimal places.
    fn check(iv: &Interval, reference: &str, ref_digits: i32) {
        let slop = Rational::pow10(-(ref_digits - 1));
        let padded = iv.inflate(&slop);
        assert!(
            padded.contains(&q(reference)),
            "{} not within {} of enclosure {}",
            reference,
            slop.decimal_approx(3),
            iv
        );
    }

    #[test]
    fn pi_reference_digits() {
        let p = oracle_pi(40);
        check(&p, "3.1415926535897932384626433832795028841971", 40);
        assert!(p.width() <= Rational::pow10(-38));
    }

    #[test]
    fn series_reference_digits() {
        check(
            &oracle_sin(&q("1"), 35),
            "0.8414709848078965066525023216302989996225",
            40,
        );
        check(
            &oracle_cos(&q("1"), 35),
            "0.5403023058681397174009366074429766037323",
            40,
        );
        check(
            &oracle_exp(&q("1"), 35),
            "2.7182818284590452353602874713526624977572",
            40,
        );
        check(
            &oracle_exp(&q("-3"), 35),
            "0.0497870683678639429793424156500617766316",
            40,
        );
        check(
            &oracle_sin(&q("100/10"), 35),
            "-0.5440211108893698134047476618513772816836",
            40,
        );
    }

    #[test]
    fn agrees_with_main_path() {
        let req = PrecisionRequest::width_pow10(20);
        for x in ["1/3", "-7/2", "1569/1000", "31415926535/10000000000"] {
            let x = q(x);
            let main_sin = enclose_sin(&x, &req).unwrap();
            let main_cos = enclose_cos(&x, &req).unwrap();
            // Two independent enclosures of the same value must intersect.
            assert!(oracle_sin(&x, 30).intersect(&main_sin).is_some());
            assert!(oracle_cos(&x, 30).intersect(&main_cos).is_some());
        }
        let main_pi = enclose_pi(&req).unwrap();
        assert!(oracle_pi(30).intersect(&main_pi).is_some());
    }

    #[test]
    fn pole_detection() {
        assert!(oracle_cot(&q("0"), 20).is_none());
        assert!(oracle_csc(&q("0"), 20).is_none());
        let c = oracle_cot(&q("33/25"), 30).unwrap();
        check(&c, "0.2561903408154518718734162271301959426226", 40);
        let s = oracle_csc(&q("33/25"), 30).unwrap();
        check(&s, "1.0322952536591153896589227747018560963759", 40);
    }
}
