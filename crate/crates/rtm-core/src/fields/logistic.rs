//! One-dimensional logistic-style demo field `y' = y − y²/3`.
//!
//! The right-hand side is polynomial with rational coefficients, so every
//! evaluation — including the higher Taylor coefficient fields `F_i` — is
//! exact. This field exercises the engine's unrounded mode and provides a
//! case where the true solution is independently computable, which the error
//! bound property tests rely on.

use alloc::vec;
use alloc::vec::Vec;

use crate::enclosure::{EncloseError, PrecisionRequest};
use crate::field::VectorField;
use crate::interval::{Interval, IntervalBox};
use crate::rational::Rational;
use crate::ranges::RangeError;

#[derive(Clone, Copy, Debug, Default)]
pub struct LogisticField;

/// Dense polynomial with rational coefficients, index = power.
type Poly = Vec<Rational>;

fn poly_f() -> Poly {
    // y − y²/3
    vec![
        Rational::zero(),
        Rational::from_integer(1),
        Rational::from_ratio(-1, 3),
    ]
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

fn poly_derivative(a: &Poly) -> Poly {
    if a.len() <= 1 {
        return vec![Rational::zero()];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * &Rational::from_integer(i as i64))
        .collect()
}

fn poly_eval(a: &Poly, y: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in a.iter().rev() {
        acc = acc * y + c;
    }
    acc
}

/// Horner evaluation over an interval argument (rigorous, may be wide).
fn poly_eval_interval(a: &Poly, y: &Interval) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for c in a.iter().rev() {
        acc = acc.mul(y).shift(c);
    }
    acc
}

/// The Taylor coefficient field `F_order`: `F_0 = f`, `F_{i+1} = F_i'·f`.
fn coefficient_poly(order: u32) -> Poly {
    let f = poly_f();
    let mut current = f.clone();
    for _ in 0..order {
        current = poly_mul(&poly_derivative(&current), &f);
    }
    current
}

impl VectorField for LogisticField {
    fn dimension(&self) -> usize {
        1
    }

    fn name(&self) -> &'static str {
        "logistic-demo"
    }

    fn exact_rational(&self) -> bool {
        true
    }

    fn eval_exact(&self, u: &[Rational], order: u32) -> Option<Vec<Rational>> {
        if u.len() != 1 {
            return None;
        }
        Some(vec![poly_eval(&coefficient_poly(order), &u[0])])
    }

    fn eval_enclosure(
        &self,
        u: &[Rational],
        _req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, EncloseError> {
        let exact = self
            .eval_exact(u, 0)
            .expect("dimension checked by callers");
        Ok(exact.into_iter().map(Interval::point).collect())
    }

    fn f_range_over(
        &self,
        domain: &IntervalBox,
        _req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError> {
        Ok(vec![poly_eval_interval(&poly_f(), domain.axis(0))])
    }

    fn jacobian_range_over(
        &self,
        domain: &IntervalBox,
        _req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError> {
        // f' = 1 − (2/3)y, linear, so interval evaluation is exact.
        Ok(vec![poly_eval_interval(
            &poly_derivative(&poly_f()),
            domain.axis(0),
        )])
    }

    fn f1_range_over(
        &self,
        domain: &IntervalBox,
        _req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError> {
        Ok(vec![poly_eval_interval(
            &coefficient_poly(1),
            domain.axis(0),
        )])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn pointwise_values() {
        let f = LogisticField;
        assert_eq!(f.eval_exact(&[q("1/2")], 0).unwrap(), vec![q("5/12")]);
        assert_eq!(f.eval_exact(&[q("0")], 0).unwrap(), vec![q("0")]);
        // Fixed point at y = 3.
        assert_eq!(f.eval_exact(&[q("3")], 0).unwrap(), vec![q("0")]);
    }

    #[test]
    fn coefficient_tower() {
        // F₁ = f'·f = (1 − 2y/3)(y − y²/3).
        let f = LogisticField;
        let y = q("1/2");
        let expect = (q("1") - q("2/3") * &y) * (&y - &y * &y * q("1/3"));
        assert_eq!(f.eval_exact(&[y], 1).unwrap(), vec![expect]);
        // F₂ = F₁'·f at a point, against a hand expansion at y = 1:
        // f(1) = 2/3, f'(1) = 1/3, f''= −2/3;
        // F₁' = f''·f + (f')² → F₂(1) = (−2/3·2/3 + 1/9)·2/3 = −2/9.
        assert_eq!(f.eval_exact(&[q("1")], 2).unwrap(), vec![q("-2/9")]);
    }

    #[test]
    fn ranges_cover_points() {
        let f = LogisticField;
        let bx = IntervalBox::new(vec![Interval::new(q("2/5"), q("9/10")).unwrap()]);
        let req = PrecisionRequest::default();
        let fr = f.f_range_over(&bx, &req).unwrap();
        let jr = f.jacobian_range_over(&bx, &req).unwrap();
        let f1r = f.f1_range_over(&bx, &req).unwrap();
        for num in [40i64, 55, 70, 90] {
            let y = Rational::from_ratio(num, 100);
            assert!(fr[0].contains(&f.eval_exact(&[y.clone()], 0).unwrap()[0]));
            assert!(f1r[0].contains(&f.eval_exact(&[y.clone()], 1).unwrap()[0]));
            let deriv = q("1") - q("2/3") * &y;
            assert!(jr[0].contains(&deriv));
        }
        // Jacobian range is exact for the linear derivative.
        assert_eq!(*jr[0].lo(), q("1") - q("2/3") * q("9/10"));
        assert_eq!(*jr[0].hi(), q("1") - q("2/3") * q("2/5"));
    }
}
