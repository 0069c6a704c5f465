//! The vector-field contract consumed by the stepping engine and the bound
//! computations, plus the derived-constant set feeding the global error
//! bound.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::enclosure::{EncloseError, PrecisionRequest};
use crate::interval::{sqrt_upper, Interval, IntervalBox};
use crate::rational::Rational;
use crate::ranges::RangeError;

/// An autonomous ODE right-hand side `u' = f(u)` with rigorous evaluation
/// modes.
///
/// `F_i` denotes the higher Taylor coefficient fields of solutions:
/// `F_0 = f` and `F_{i+1} = (DF_i)·f`, so `u^(i+1)(t) = F_i(u(t))`.
pub trait VectorField: Sync {
    fn dimension(&self) -> usize;

    /// Registry key, e.g. `"cmc-s4"` or `"logistic-demo"`.
    fn name(&self) -> &'static str;

    /// True when `f` is polynomial with rational coefficients, so points
    /// evaluate exactly and rounding may be disabled.
    fn exact_rational(&self) -> bool;

    /// Exact value of `F_order` at a rational point, when representable
    /// (`exact_rational` fields; `order = 0` is `f` itself).
    fn eval_exact(&self, u: &[Rational], order: u32) -> Option<Vec<Rational>>;

    /// Rigorous per-component enclosure of `f` at a rational point.
    fn eval_enclosure(
        &self,
        u: &[Rational],
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, EncloseError>;

    /// Integer fast path for grid states: given `u = nums/10^exp`, returns
    /// per-component pairs `(lo, hi)` with `lo/10^digits ≤ f_i ≤
    /// hi/10^digits`, or `None` when the field has no such path (the engine
    /// then uses `eval_enclosure`).
    fn eval_pow10(
        &self,
        nums: &[BigInt],
        exp: u32,
        digits: u32,
    ) -> Option<Result<Vec<(BigInt, BigInt)>, EncloseError>> {
        let _ = (nums, exp, digits);
        None
    }

    /// Rigorous componentwise range of `f` over a box.
    fn f_range_over(
        &self,
        domain: &IntervalBox,
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError>;

    /// Rigorous entrywise range of the Jacobian `Df` over a box, row-major.
    fn jacobian_range_over(
        &self,
        domain: &IntervalBox,
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError>;

    /// Rigorous componentwise range of `F₁ = (Df)·f` over a box. The default
    /// multiplies the Jacobian and f ranges intervalwise.
    fn f1_range_over(
        &self,
        domain: &IntervalBox,
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError> {
        let f = self.f_range_over(domain, req)?;
        let df = self.jacobian_range_over(domain, req)?;
        let n = self.dimension();
        debug_assert_eq!(f.len(), n);
        debug_assert_eq!(df.len(), n * n);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Interval::point(Rational::zero());
            for (j, fj) in f.iter().enumerate() {
                acc = acc.add(&df[i * n + j].mul(fj));
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Verified constants entering the global error bound: `M₀ ≥ sup|f_i|`,
/// `M_i ≥ sup|F_m component i|`, `K_i ≥` a Lipschitz bound for `F_i`, and the
/// box margin `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    /// Componentwise bound on `|f|` over the working box.
    pub m0: Rational,
    /// Componentwise bounds on the order-`m` coefficient field `F_m`.
    pub m_components: Vec<Rational>,
    /// `K₀ … K_{m−1}`: Jacobian-norm bounds for `F₀ … F_{m−1}`.
    pub k_coefficients: Vec<Rational>,
    /// Distance from the inner box to the boundary of the derivative box.
    pub epsilon: Rational,
}

impl BoundSet {
    pub fn new(
        m0: Rational,
        m_components: Vec<Rational>,
        k_coefficients: Vec<Rational>,
        epsilon: Rational,
    ) -> Option<Self> {
        if m0.is_negative()
            || epsilon.is_negative()
            || m_components.is_empty()
            || k_coefficients.is_empty()
            || m_components.iter().any(Rational::is_negative)
            || k_coefficients.iter().any(Rational::is_negative)
        {
            return None;
        }
        Some(Self {
            m0,
            m_components,
            k_coefficients,
            epsilon,
        })
    }

    /// The Lipschitz constant of the order-`m` update map:
    /// `L = K₀ + Σ_{i=1}^{m−1} K_i·hⁱ/(i+1)!`.
    pub fn lipschitz_l(&self, h: &Rational) -> Rational {
        let mut l = self.k_coefficients[0].clone();
        let mut h_pow = Rational::from_integer(1);
        for (i, k) in self.k_coefficients.iter().enumerate().skip(1) {
            h_pow = &h_pow * h;
            l = l + k * &h_pow / &Rational::from(factorial_of(i as u64 + 1));
        }
        l
    }

    /// Rational upper bound on `M = √(Σ M_i²)`.
    pub fn magnitude_m(&self) -> Rational {
        let sum: Rational = self.m_components.iter().map(|m| m * m).sum();
        sqrt_upper(&sum, 12)
    }

    /// Order implied by the K-coefficient list.
    pub fn order(&self) -> u32 {
        self.k_coefficients.len() as u32
    }
}

fn factorial_of(n: u64) -> BigInt {
    let mut acc = BigInt::from(1u8);
    for v in 2..=n {
        acc *= BigInt::from(v);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn single_order_lipschitz_is_k0() {
        let b = BoundSet::new(
            q("4.98"),
            alloc::vec![q("4.98"), q("5.41"), q("15.26")],
            alloc::vec![q("6.8246")],
            q("0.001"),
        )
        .unwrap();
        assert_eq!(b.lipschitz_l(&q("3991/250000000")), q("6.8246"));
        assert_eq!(b.order(), 1);
    }

    #[test]
    fn higher_order_lipschitz_terms() {
        // L = K₀ + K₁h/2! + K₂h²/3!
        let b = BoundSet::new(
            q("1"),
            alloc::vec![q("1")],
            alloc::vec![q("2"), q("3"), q("4")],
            q("1"),
        )
        .unwrap();
        let h = q("1/10");
        let expected = q("2") + q("3") * &h / q("2") + q("4") * &(&h * &h) / q("6");
        assert_eq!(b.lipschitz_l(&h), expected);
    }

    #[test]
    fn magnitude_upper_bound() {
        let b = BoundSet::new(
            q("4.98"),
            alloc::vec![q("4.98"), q("5.41"), q("15.26")],
            alloc::vec![q("6.8246")],
            q("0.001"),
        )
        .unwrap();
        let m = b.magnitude_m();
        // M² ≥ 4.98² + 5.41² + 15.26² = 286.9361
        assert!(&m * &m >= q("286.9361"));
        assert!(m < q("16.9393"));
    }

    #[test]
    fn invalid_bound_sets_rejected() {
        assert!(BoundSet::new(q("-1"), alloc::vec![q("1")], alloc::vec![q("1")], q("1")).is_none());
        assert!(BoundSet::new(q("1"), alloc::vec![], alloc::vec![q("1")], q("1")).is_none());
    }
}
