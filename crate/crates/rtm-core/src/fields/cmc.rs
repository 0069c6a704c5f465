//! The three-dimensional vector field whose trajectories trace the profile
//! curve of a constant-mean-curvature hypersurface of the 4-sphere, together
//! with the verification passes for all of its working constants.
//!
//! With state `u = (u₁, u₂, u₃) = (r, θ, α)` the right-hand side is
//!
//! ```text
//! f₁ = cos u₃
//! f₂ = sin u₃ / sin u₁
//! f₃ = 2·cot(2u₂)·cos u₃ / sin u₁ − 3·cot(u₁)·sin u₃ − 3
//! ```
//!
//! written below through the elementary pieces `g₁ = cos u₃, g₂ = sin u₃,
//! g₃ = csc u₁, g₄ = cot u₁, g₅ = cot 2u₂, g₆ = csc² 2u₂`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::enclosure::{enclose_cot, enclose_csc, EncloseError, PrecisionRequest};
use crate::field::{BoundSet, VectorField};
use crate::interval::{frobenius_norm_bound, range_product_bound, BoundMatrix, Interval, IntervalBox};
use crate::rational::Rational;
use crate::ranges::{monotone_range, RangeError, RangeFn};
use crate::report::{CheckReport, Inequality, Relation};
use crate::scaled::{self, Scaled};

#[derive(Clone, Copy, Debug, Default)]
pub struct CmcField;

/// Which sine denominator straddled zero during pointwise evaluation.
enum PoleAxis {
    SinU1,
    Sin2U2,
}

/// Evaluates all three components at a point enclosure, at one working
/// precision. `Err` means a denominator's sine enclosure still straddles
/// zero at this precision.
fn eval_point_scaled(u: &[Scaled; 3], digits: u32) -> Result<[Scaled; 3], PoleAxis> {
    let sin_at = |x: &Scaled| {
        scaled::sin_scaled(&x.lo, x.exp, digits)
            .widen_bigint(&lipschitz_units(x, digits))
            .clamp_unit()
    };
    let cos_at = |x: &Scaled| {
        scaled::cos_scaled(&x.lo, x.exp, digits)
            .widen_bigint(&lipschitz_units(x, digits))
            .clamp_unit()
    };
    let s1 = sin_at(&u[0]);
    if s1.contains_zero() {
        return Err(PoleAxis::SinU1);
    }
    let two_u2 = Scaled::from_endpoints(&u[1].lo * 2u8, &u[1].hi * 2u8, u[1].exp);
    let s2 = sin_at(&two_u2);
    if s2.contains_zero() {
        return Err(PoleAxis::Sin2U2);
    }
    let c1 = cos_at(&u[0]);
    let c2 = cos_at(&two_u2);
    let s3 = sin_at(&u[2]);
    let c3 = cos_at(&u[2]);

    let f1 = c3.clone();
    let f2 = s3
        .div(&s1, digits)
        .expect("s1 excludes zero");
    // 2·(c2/s2)·(c3/s1) − 3·(c1/s1)·s3 − 3
    let cot2 = c2.div(&s2, digits).expect("s2 excludes zero");
    let c3_over_s1 = c3.div(&s1, digits).expect("s1 excludes zero");
    let cot1 = c1.div(&s1, digits).expect("s1 excludes zero");
    let term1 = cot2.mul(&c3_over_s1).mul_int(2).rescale(digits);
    let term2 = cot1.mul(&s3).mul_int(-3).rescale(digits);
    let three = Scaled::point(BigInt::from(3u8), 0);
    let f3 = term1.add(&term2).sub(&three).rescale(digits);
    Ok([f1, f2, f3])
}

/// Widening (in output units at `digits`) that covers an interval argument
/// of the given width for a slope-1 function: the argument width expressed
/// at the output scale, rounded up.
fn lipschitz_units(x: &Scaled, digits: u32) -> BigInt {
    let w = x.width_units();
    if w.is_zero() {
        return w;
    }
    if digits >= x.exp {
        w * scaled::pow10(digits - x.exp)
    } else {
        scaled::ceil_div(&w, &scaled::pow10(x.exp - digits))
    }
}

/// Precision schedule shared by the pointwise evaluators.
fn stage_digits(stage: u32) -> u32 {
    16u32.checked_shl(stage).unwrap_or(u32::MAX / 2)
}

impl CmcField {
    /// The compact box the computed trajectories are required to stay in:
    /// `[1.321, 1.571] × [0.522, 0.786] × [1.57, 3.142]`.
    pub fn nominal_inner_box() -> IntervalBox {
        box3(
            ("1321/1000", "1571/1000"),
            ("522/1000", "786/1000"),
            ("157/100", "3142/1000"),
        )
    }

    /// The inflation of the inner box (by 1/1000 per side) on which all
    /// derivative bounds are taken:
    /// `[1.32, 1.572] × [0.521, 0.787] × [1.569, 3.143]`.
    pub fn nominal_derivative_box() -> IntervalBox {
        box3(
            ("33/25", "393/250"),
            ("521/1000", "787/1000"),
            ("1569/1000", "3143/1000"),
        )
    }
}

fn box3(a: (&str, &str), b: (&str, &str), c: (&str, &str)) -> IntervalBox {
    let iv = |p: (&str, &str)| {
        Interval::new(p.0.parse().unwrap(), p.1.parse().unwrap()).expect("lo <= hi")
    };
    IntervalBox::new(vec![iv(a), iv(b), iv(c)])
}

impl VectorField for CmcField {
    fn dimension(&self) -> usize {
        3
    }

    fn name(&self) -> &'static str {
        "cmc-s4"
    }

    fn exact_rational(&self) -> bool {
        false
    }

    fn eval_exact(&self, _u: &[Rational], _order: u32) -> Option<Vec<Rational>> {
        None
    }

    fn eval_enclosure(
        &self,
        u: &[Rational],
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, EncloseError> {
        assert_eq!(u.len(), 3, "three-dimensional field");
        let mut current: Option<Vec<Interval>> = None;
        let mut saw_pole = false;
        for stage in 0..req.max_refinements {
            let d = stage_digits(stage);
            let us = [
                Scaled::from_rational(&u[0], d),
                Scaled::from_rational(&u[1], d),
                Scaled::from_rational(&u[2], d),
            ];
            let fs = match eval_point_scaled(&us, d) {
                Ok(fs) => fs,
                Err(_) => {
                    saw_pole = true;
                    continue;
                }
            };
            let ivs: Vec<Interval> = fs.iter().map(Scaled::to_interval).collect();
            let next = match &current {
                None => ivs,
                Some(c) => c
                    .iter()
                    .zip(&ivs)
                    .map(|(a, b)| a.intersect(b).expect("stages share the true value"))
                    .collect(),
            };
            if next.iter().all(|iv| iv.width() <= req.target_width) {
                return Ok(next);
            }
            current = Some(next);
        }
        if current.is_none() && saw_pole {
            return Err(EncloseError::PoleProximity {
                argument: u[0].clone(),
            });
        }
        Err(EncloseError::RefinementBudgetExhausted {
            achieved_width: current
                .map(|c| {
                    c.iter()
                        .map(Interval::width)
                        .max()
                        .expect("three components")
                })
                .unwrap_or_else(|| Rational::from_integer(1)),
        })
    }

    fn eval_pow10(
        &self,
        nums: &[BigInt],
        exp: u32,
        digits: u32,
    ) -> Option<Result<Vec<(BigInt, BigInt)>, EncloseError>> {
        if nums.len() != 3 {
            return None;
        }
        // The series cores accept |argument| ≤ 16; 2u₂ doubles one of them.
        let limit = BigInt::from(8u8) * scaled::pow10(exp);
        if nums.iter().any(|p| p.abs() > limit) {
            return None;
        }
        let us = [
            Scaled::point(nums[0].clone(), exp),
            Scaled::point(nums[1].clone(), exp),
            Scaled::point(nums[2].clone(), exp),
        ];
        Some(match eval_point_scaled(&us, digits) {
            Ok(fs) => Ok(fs
                .into_iter()
                .map(|s| {
                    let s = s.rescale(digits);
                    (s.lo, s.hi)
                })
                .collect()),
            Err(axis) => {
                let which = match axis {
                    PoleAxis::SinU1 => 0,
                    PoleAxis::Sin2U2 => 1,
                };
                Err(EncloseError::PoleProximity {
                    argument: Rational::new(nums[which].clone(), scaled::pow10(exp))
                        .expect("positive denominator"),
                })
            }
        })
    }

    fn f_range_over(
        &self,
        domain: &IntervalBox,
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError> {
        let g = GRanges::over(domain, req)?;
        Ok(vec![g.f1_range(), g.f2_range(), g.f3_range()])
    }

    fn jacobian_range_over(
        &self,
        domain: &IntervalBox,
        req: &PrecisionRequest,
    ) -> Result<Vec<Interval>, RangeError> {
        let g = GRanges::over(domain, req)?;
        Ok(g.jacobian_entries().to_vec())
    }
}

/// Rigorous enclosure of `f(u)` at a rational point (three components).
pub fn cmc_f_enclose(
    u: &[Rational],
    req: &PrecisionRequest,
) -> Result<Vec<Interval>, EncloseError> {
    CmcField.eval_enclosure(u, req)
}

/// Ranges of the six elementary pieces over a box, and the composites built
/// from them.
struct GRanges {
    g1: Interval, // cos u₃
    g2: Interval, // sin u₃
    g3: Interval, // csc u₁
    g4: Interval, // cot u₁
    g5: Interval, // cot 2u₂
    g6: Interval, // csc² 2u₂
}

impl GRanges {
    fn over(domain: &IntervalBox, req: &PrecisionRequest) -> Result<Self, RangeError> {
        assert_eq!(domain.dimension(), 3, "three-dimensional field");
        let u1 = domain.axis(0);
        let u2_doubled = domain.axis(1).scale(&Rational::from_integer(2));
        let u3 = domain.axis(2);
        Ok(Self {
            g1: monotone_range(RangeFn::Cos, u3, req)?,
            g2: monotone_range(RangeFn::Sin, u3, req)?,
            g3: monotone_range(RangeFn::Csc, u1, req)?,
            g4: monotone_range(RangeFn::Cot, u1, req)?,
            g5: monotone_range(RangeFn::Cot, &u2_doubled, req)?,
            g6: monotone_range(RangeFn::CscSquared, &u2_doubled, req)?,
        })
    }

    fn f1_range(&self) -> Interval {
        self.g1.clone()
    }

    /// g₇ = g₂g₃.
    fn f2_range(&self) -> Interval {
        self.g2.mul(&self.g3)
    }

    /// g₈ = 2g₅g₁g₃.
    fn g8_range(&self) -> Interval {
        range_product_bound(
            &[self.g5.clone(), self.g1.clone(), self.g3.clone()],
            &Rational::from_integer(2),
            &Rational::zero(),
        )
    }

    /// g₉ = −3 − 3g₂g₄.
    fn g9_range(&self) -> Interval {
        range_product_bound(
            &[self.g2.clone(), self.g4.clone()],
            &Rational::from_integer(-3),
            &Rational::from_integer(-3),
        )
    }

    fn f3_range(&self) -> Interval {
        self.g8_range().add(&self.g9_range())
    }

    /// Entrywise ranges of the Jacobian, row-major:
    /// ```text
    /// [ 0                    0          −g₂            ]
    /// [ −g₂g₃g₄              0          g₁g₃           ]
    /// [ g₃(3g₂g₃ − 2g₁g₄g₅)  −4g₁g₃g₆   −3g₁g₄ − 2g₂g₃g₅ ]
    /// ```
    fn jacobian_entries(&self) -> [Interval; 9] {
        let zero = Interval::point(Rational::zero());
        let three = Rational::from_integer(3);
        let e13 = self.g2.neg();
        let e21 = self.g2.mul(&self.g3).mul(&self.g4).neg();
        let e23 = self.g1.mul(&self.g3);
        let inner = self
            .g2
            .mul(&self.g3)
            .scale(&three)
            .sub(&self.g1.mul(&self.g4).mul(&self.g5).scale(&Rational::from_integer(2)));
        let e31 = self.g3.mul(&inner);
        let e32 = self
            .g1
            .mul(&self.g3)
            .mul(&self.g6)
            .scale(&Rational::from_integer(-4));
        let e33 = self
            .g1
            .mul(&self.g4)
            .scale(&Rational::from_integer(-3))
            .sub(&self.g2.mul(&self.g3).mul(&self.g5).scale(&Rational::from_integer(2)));
        [
            zero.clone(),
            zero.clone(),
            e13,
            e21,
            zero.clone(),
            e23,
            e31,
            e32,
            e33,
        ]
    }
}

/// The claimed working constants that the verification passes re-derive:
/// componentwise |f| bounds, entrywise Jacobian bounds, the Jacobian norm
/// bound K₀, the step-magnitude bound M₀, componentwise |F₁| bounds, and the
/// box margin ε.
#[derive(Clone, Debug)]
pub struct CmcClaims {
    pub f_abs: [Rational; 3],
    pub jacobian_abs: [Rational; 9],
    pub k0: Rational,
    pub m0: Rational,
    pub f1_abs: [Rational; 3],
    pub epsilon: Rational,
}

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

impl CmcClaims {
    /// The claim set re-verified by the shipped certificate.
    pub fn baseline() -> Self {
        Self {
            f_abs: [q("1"), q("1.033"), q("4.98")],
            jacobian_abs: [
                q("0"),
                q("0"),
                q("1"),
                q("0.265"),
                q("0"),
                q("1.033"),
                q("3.506"),
                q("5.539"),
                q("1.21"),
            ],
            k0: q("6.8246"),
            m0: q("4.98"),
            f1_abs: [q("4.98"), q("5.41"), q("15.26")],
            epsilon: q("0.001"),
        }
    }

    pub fn bound_matrix(&self) -> BoundMatrix {
        BoundMatrix::new(3, self.jacobian_abs.to_vec()).expect("nonnegative entries")
    }

    /// The error-bound constants implied by this claim set (order 1).
    pub fn bound_set(&self) -> BoundSet {
        BoundSet::new(
            self.m0.clone(),
            self.f1_abs.to_vec(),
            vec![self.k0.clone()],
            self.epsilon.clone(),
        )
        .expect("nonnegative claims")
    }
}

/// Rigorous bound constants derived over a box, with no reference to any
/// claimed values: componentwise `sup|f_c|`, entrywise Jacobian magnitude
/// bounds, the Frobenius norm bound, and the componentwise `|J·f|` bounds.
/// All entries are safe-side rational upper bounds.
#[derive(Clone, Debug)]
pub struct DerivedBounds {
    pub f_abs: [Rational; 3],
    pub jacobian_abs: [Rational; 9],
    pub frobenius: Rational,
    pub jf_abs: [Rational; 3],
}

impl DerivedBounds {
    /// Computes all bounds over `domain` with enclosures at the requested
    /// precision.
    pub fn over(domain: &IntervalBox, req: &PrecisionRequest) -> Result<Self, RangeError> {
        let g = GRanges::over(domain, req)?;
        let f_abs = [
            g.f1_range().sup_abs(),
            g.f2_range().sup_abs(),
            g.f3_range().sup_abs(),
        ];
        let entries = g.jacobian_entries();
        let jacobian_abs: [Rational; 9] = core::array::from_fn(|i| entries[i].sup_abs());
        let matrix =
            BoundMatrix::new(3, jacobian_abs.to_vec()).expect("magnitudes are nonnegative");
        let frobenius = frobenius_norm_bound(&matrix);
        let jf = matrix.abs_mat_vec(&f_abs);
        let jf_abs = [jf[0].clone(), jf[1].clone(), jf[2].clone()];
        Ok(Self {
            f_abs,
            jacobian_abs,
            frobenius,
            jf_abs,
        })
    }

    /// Largest componentwise slope bound: how far one step of length `h` can
    /// move any coordinate.
    pub fn step_magnitude(&self) -> Rational {
        let mut m = self.f_abs[0].clone();
        for c in &self.f_abs[1..] {
            if *c > m {
                m = c.clone();
            }
        }
        m
    }

    /// Error-bound constants implied by these derived values at order 1.
    pub fn bound_set(&self, epsilon: Rational) -> BoundSet {
        BoundSet::new(
            self.step_magnitude(),
            self.jf_abs.to_vec(),
            vec![self.frobenius.clone()],
            epsilon,
        )
        .expect("derived bounds are nonnegative")
    }
}

/// Elementary-range pass: each of the six pieces, over the given box, is
/// contained in the interval spanned by its claimed closed-form endpoints
/// (endpoints enclosed rigorously; ±1 endpoints exact).
pub fn verify_lemma1(
    domain: &IntervalBox,
    req: &PrecisionRequest,
) -> Result<CheckReport, RangeError> {
    let g = GRanges::over(domain, req)?;
    let u1 = domain.axis(0);
    let u2d = domain.axis(1).scale(&Rational::from_integer(2));
    let u3 = domain.axis(2);
    let mut report = CheckReport::new("elementary ranges over the derivative box");
    let one = Rational::from_integer(1);

    // g₁ = cos u₃ ∈ [−1, cos(inf u₃)]
    report.push(Inequality::new(
        "g1 lower endpoint",
        Rational::from_integer(-1),
        Relation::Le,
        g.g1.lo().clone(),
    ));
    let cos_lo = monotone_range(RangeFn::Cos, &Interval::point(u3.lo().clone()), req)?;
    report.push(Inequality::new(
        "g1 upper endpoint",
        g.g1.hi().clone(),
        Relation::Le,
        cos_lo.hi().clone(),
    ));

    // g₂ = sin u₃ ∈ [sin(sup u₃), 1]
    let sin_hi = monotone_range(RangeFn::Sin, &Interval::point(u3.hi().clone()), req)?;
    report.push(Inequality::new(
        "g2 lower endpoint",
        sin_hi.lo().clone(),
        Relation::Le,
        g.g2.lo().clone(),
    ));
    report.push(Inequality::new(
        "g2 upper endpoint",
        g.g2.hi().clone(),
        Relation::Le,
        one.clone(),
    ));

    // g₃ = csc u₁ ∈ [1, csc(inf u₁)]
    report.push(Inequality::new(
        "g3 lower endpoint",
        one.clone(),
        Relation::Le,
        g.g3.lo().clone(),
    ));
    let csc_lo = enclose_csc(u1.lo(), req).map_err(RangeError::Enclose)?;
    report.push(Inequality::new(
        "g3 upper endpoint",
        g.g3.hi().clone(),
        Relation::Le,
        csc_lo.hi().clone(),
    ));

    // g₄ = cot u₁ ∈ [cot(sup u₁), cot(inf u₁)]
    let cot_u1_hi = enclose_cot(u1.hi(), req).map_err(RangeError::Enclose)?;
    let cot_u1_lo = enclose_cot(u1.lo(), req).map_err(RangeError::Enclose)?;
    report.push(Inequality::new(
        "g4 lower endpoint",
        cot_u1_hi.lo().clone(),
        Relation::Le,
        g.g4.lo().clone(),
    ));
    report.push(Inequality::new(
        "g4 upper endpoint",
        g.g4.hi().clone(),
        Relation::Le,
        cot_u1_lo.hi().clone(),
    ));

    // g₅ = cot 2u₂ ∈ [cot(sup 2u₂), cot(inf 2u₂)]
    let cot_u2_hi = enclose_cot(u2d.hi(), req).map_err(RangeError::Enclose)?;
    let cot_u2_lo = enclose_cot(u2d.lo(), req).map_err(RangeError::Enclose)?;
    report.push(Inequality::new(
        "g5 lower endpoint",
        cot_u2_hi.lo().clone(),
        Relation::Le,
        g.g5.lo().clone(),
    ));
    report.push(Inequality::new(
        "g5 upper endpoint",
        g.g5.hi().clone(),
        Relation::Le,
        cot_u2_lo.hi().clone(),
    ));

    // g₆ = csc² 2u₂ ∈ [1, csc²(inf 2u₂)]
    report.push(Inequality::new(
        "g6 lower endpoint",
        one,
        Relation::Le,
        g.g6.lo().clone(),
    ));
    let csc_sq_lo = enclose_csc(u2d.lo(), req)
        .map_err(RangeError::Enclose)?
        .square();
    report.push(Inequality::new(
        "g6 upper endpoint",
        g.g6.hi().clone(),
        Relation::Le,
        csc_sq_lo.hi().clone(),
    ));

    Ok(report)
}

/// Componentwise |f| pass: reconstructs the composite ranges g₇ = g₂g₃,
/// g₈ = 2g₅g₁g₃, g₉ = −3 − 3g₂g₄ and confirms the claimed bounds
/// |f₁| ≤ 1, |f₂| < 1.033, |f₃| < 4.98.
pub fn verify_lemma2(
    domain: &IntervalBox,
    claims: &CmcClaims,
    req: &PrecisionRequest,
) -> Result<CheckReport, RangeError> {
    let g = GRanges::over(domain, req)?;
    let mut report = CheckReport::new("componentwise bounds on f");
    report.push(Inequality::new(
        "|f1| bound",
        g.f1_range().sup_abs(),
        Relation::Le,
        claims.f_abs[0].clone(),
    ));
    let g7 = g.f2_range();
    report.push(Inequality::new(
        "g7 lower bound",
        q("-0.002"),
        Relation::Lt,
        g7.lo().clone(),
    ));
    report.push(Inequality::new(
        "|f2| bound",
        g7.sup_abs(),
        Relation::Lt,
        claims.f_abs[1].clone(),
    ));
    let g8 = g.g8_range();
    let g9 = g.g9_range();
    report.push(Inequality::new(
        "|g8| bound",
        g8.sup_abs(),
        Relation::Lt,
        q("1.2064"),
    ));
    report.push(Inequality::new(
        "|g9| bound",
        g9.sup_abs(),
        Relation::Lt,
        q("3.7686"),
    ));
    report.push(Inequality::new(
        "|f3| via |g8|+|g9|",
        g8.sup_abs() + g9.sup_abs(),
        Relation::Lt,
        claims.f_abs[2].clone(),
    ));
    report.push(Inequality::new(
        "|f3| direct range",
        g.f3_range().sup_abs(),
        Relation::Lt,
        claims.f_abs[2].clone(),
    ));
    Ok(report)
}

/// Jacobian pass: every entry range is bounded by its claimed entry, and the
/// claimed entry matrix has Frobenius norm at most K₀.
pub fn verify_lemma3(
    domain: &IntervalBox,
    claims: &CmcClaims,
    req: &PrecisionRequest,
) -> Result<CheckReport, RangeError> {
    let g = GRanges::over(domain, req)?;
    let entries = g.jacobian_entries();
    let mut report = CheckReport::new("entrywise Jacobian bounds and norm");
    for (idx, entry) in entries.iter().enumerate() {
        let (i, j) = (idx / 3 + 1, idx % 3 + 1);
        report.push(Inequality::new(
            format!("|df{i}/du{j}| bound"),
            entry.sup_abs(),
            Relation::Le,
            claims.jacobian_abs[idx].clone(),
        ));
    }
    let bm = claims.bound_matrix();
    report.push(Inequality::new(
        "entry sum of squares vs K0^2",
        bm.sum_of_squares(),
        Relation::Le,
        &claims.k0 * &claims.k0,
    ));
    report.push(Inequality::new(
        "Frobenius norm bound vs K0",
        frobenius_norm_bound(&bm),
        Relation::Le,
        claims.k0.clone(),
    ));
    report.note(format!(
        "matrix norm convention: Frobenius (sum of squared entries = {})",
        bm.sum_of_squares()
    ));
    Ok(report)
}

/// F₁ pass: componentwise |F₁| bounds both by direct interval ranges and by
/// the claimed-matrix × claimed-|f| product, plus the M₀ consistency checks.
pub fn verify_lemma4(
    field: &CmcField,
    domain: &IntervalBox,
    claims: &CmcClaims,
    req: &PrecisionRequest,
) -> Result<CheckReport, RangeError> {
    let f1 = field.f1_range_over(domain, req)?;
    let mut report = CheckReport::new("componentwise bounds on F1 = (Df)f");
    for (i, range) in f1.iter().enumerate() {
        report.push(Inequality::new(
            format!("|F1_{}| direct range", i + 1),
            range.sup_abs(),
            Relation::Le,
            claims.f1_abs[i].clone(),
        ));
    }
    let product = claims.bound_matrix().abs_mat_vec(&claims.f_abs);
    for (i, p) in product.iter().enumerate() {
        report.push(Inequality::new(
            format!("matrix-vector bound {}", i + 1),
            p.clone(),
            Relation::Le,
            claims.f1_abs[i].clone(),
        ));
    }
    for (i, fb) in claims.f_abs.iter().enumerate() {
        report.push(Inequality::new(
            format!("M0 covers |f{}|", i + 1),
            fb.clone(),
            Relation::Le,
            claims.m0.clone(),
        ));
    }
    let m = claims.bound_set().magnitude_m();
    let sum_sq: Rational = claims.f1_abs.iter().map(|x| x * x).sum();
    report.push(Inequality::new(
        "M^2 covers sum of F1 bounds squared",
        sum_sq,
        Relation::Le,
        &m * &m,
    ));
    report.note(
        "componentwise |f| bounds feeding the product come from the f-range pass, \
         not the elementary-range pass (cross-reference slip in the claim source)",
    );
    report.note(format!("magnitude bound M = {}", m.decimal_approx(10)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req() -> PrecisionRequest {
        PrecisionRequest::width_pow10(12)
    }

    /// The grid floor of (π/2, 0.5204, π) on the 10⁻¹⁰ grid.
    fn start_state() -> Vec<Rational> {
        vec![
            q("15707963267/10000000000"),
            q("5204/10000"),
            q("31415926535/10000000000"),
        ]
    }

    #[test]
    fn pointwise_evaluation_at_start_state() {
        let f = cmc_f_enclose(&start_state(), &req()).unwrap();
        // f₁ = cos(α₀) barely above −1.
        assert!(f[0].contains(&q("-0.999999999999999999995968587163195")));
        assert!(*f[0].lo() >= q("-1"));
        // f₂ = sin(α₀)/sin(r₀) ≈ 8.9793e-11, strictly positive.
        assert!(f[1].lo().is_positive());
        assert!(*f[1].lo() > q("8979/100000000000000"));
        assert!(*f[1].hi() < q("898/10000000000000"));
        // f₃ ≈ 2cot(1.0408)·(−1) − 3cot(r₀)sin(α₀) − 3 ≈ −4.1718.
        assert!(*f[2].lo() > q("-4.1719") && *f[2].hi() < q("-4.1718"));
        for c in &f {
            assert!(c.width() <= Rational::pow10(-12));
        }
    }

    #[test]
    fn pointwise_evaluation_near_quarter_theta() {
        // 2u₂ near π/2 makes cot(2u₂) ≈ 0: f₃ ≈ −3cot(u₁)sin(u₃) − 3.
        let u = vec![q("1.4"), q("7853981634/10000000000"), q("2")];
        let f = cmc_f_enclose(&u, &req()).unwrap();
        // cot(u₁)sin(u₃) = 0.1568326…; the cot(2u₂) term is ~1e-11, so
        // f₃ = −3·0.1568326… − 3 + O(1e-10) = −3.4704979….
        assert!(*f[2].lo() > q("-3.4705") && *f[2].hi() < q("-3.4704"));
    }

    #[test]
    fn pole_rejected() {
        let u = vec![q("0"), q("5204/10000"), q("1")];
        let err = CmcField.eval_enclosure(&u, &PrecisionRequest::new(Rational::pow10(-6), 3));
        assert!(matches!(err, Err(EncloseError::PoleProximity { .. })));
    }

    #[test]
    fn fast_path_agrees_with_rational_path() {
        let nums = vec![
            BigInt::from(15707963267i64),
            BigInt::from(5204000000i64),
            BigInt::from(31415926535i64),
        ];
        let pairs = CmcField.eval_pow10(&nums, 10, 30).unwrap().unwrap();
        let ivs = cmc_f_enclose(&start_state(), &req()).unwrap();
        for (i, (lo, hi)) in pairs.iter().enumerate() {
            let scale = Rational::pow10(-30);
            let plo = Rational::from(lo.clone()) * &scale;
            let phi = Rational::from(hi.clone()) * &scale;
            // Both paths enclose the same true value.
            assert!(phi >= *ivs[i].lo() && plo <= *ivs[i].hi());
            assert!(&phi - &plo < Rational::pow10(-25));
        }
    }

    #[test]
    fn ranges_contain_point_evaluations() {
        let field = CmcField;
        let bx = CmcField::nominal_derivative_box();
        let fr = field.f_range_over(&bx, &req()).unwrap();
        let f1r = field.f1_range_over(&bx, &req()).unwrap();
        // Points across the inner box (including its corners).
        let samples = [
            ("1321/1000", "522/1000", "157/100"),
            ("1571/1000", "786/1000", "3142/1000"),
            ("1450/1000", "650/1000", "2356/1000"),
            ("1571/1000", "522/1000", "157/100"),
            ("1321/1000", "786/1000", "3142/1000"),
        ];
        for (a, b, c) in samples {
            let u = vec![q(a), q(b), q(c)];
            let f = cmc_f_enclose(&u, &req()).unwrap();
            for i in 0..3 {
                assert!(
                    fr[i].contains_interval(&f[i]),
                    "component {} of f at ({a},{b},{c}) outside its box range",
                    i + 1
                );
            }
        }
        // F₁ ranges bound the claimed constants' magnitudes comfortably.
        assert!(f1r[0].sup_abs() < q("4.98"));
        assert!(f1r[1].sup_abs() < q("5.41"));
        assert!(f1r[2].sup_abs() < q("15.26"));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        // Non-rigorous spot check of the symbolic Jacobian: central
        // differences of f against the entry ranges over a tiny box.
        let field = CmcField;
        let u = [q("1.45"), q("0.65"), q("2.3")];
        let h = q("1/100000");
        let tiny = IntervalBox::new(vec![
            Interval::new(&u[0] - &h, &u[0] + &h).unwrap(),
            Interval::new(&u[1] - &h, &u[1] + &h).unwrap(),
            Interval::new(&u[2] - &h, &u[2] + &h).unwrap(),
        ]);
        let entries = field.jacobian_range_over(&tiny, &req()).unwrap();
        for j in 0..3 {
            let mut up = u.to_vec();
            let mut dn = u.to_vec();
            up[j] = &u[j] + &h;
            dn[j] = &u[j] - &h;
            let fu = cmc_f_enclose(&up, &req()).unwrap();
            let fd = cmc_f_enclose(&dn, &req()).unwrap();
            for i in 0..3 {
                let diff = (fu[i].midpoint() - fd[i].midpoint())
                    / (Rational::from_integer(2) * &h);
                let entry = &entries[i * 3 + j];
                // Central difference error is O(h²) ≈ 1e-10; allow 1e-6.
                let tol = Rational::pow10(-6);
                assert!(
                    diff >= entry.lo() - &tol && diff <= entry.hi() + &tol,
                    "finite difference {} outside entry ({},{}) range {}",
                    diff.decimal_approx(12),
                    i + 1,
                    j + 1,
                    entry
                );
            }
        }
    }

    #[test]
    fn lemma_passes_hold_on_nominal_boxes() {
        let bx = CmcField::nominal_derivative_box();
        let claims = CmcClaims::baseline();
        let r1 = verify_lemma1(&bx, &req()).unwrap();
        assert!(r1.all_hold(), "violations: {:?}", r1.violations());
        let r2 = verify_lemma2(&bx, &claims, &req()).unwrap();
        assert!(r2.all_hold(), "violations: {:?}", r2.violations());
        let r3 = verify_lemma3(&bx, &claims, &req()).unwrap();
        assert!(r3.all_hold(), "violations: {:?}", r3.violations());
        let r4 = verify_lemma4(&CmcField, &bx, &claims, &req()).unwrap();
        assert!(r4.all_hold(), "violations: {:?}", r4.violations());
    }

    #[test]
    fn lemma_passes_fail_on_widened_box() {
        // Widening the θ axis to [0.4, 0.9] breaks several claimed bounds.
        let bx = box3(
            ("33/25", "393/250"),
            ("400/1000", "900/1000"),
            ("1569/1000", "3143/1000"),
        );
        let claims = CmcClaims::baseline();
        let r3 = verify_lemma3(&bx, &claims, &req()).unwrap();
        assert!(!r3.all_hold());
        assert!(!r3.violations().is_empty());
    }

    #[test]
    fn claimed_product_values() {
        // The claimed-matrix × claimed-|f| product evaluates exactly.
        let claims = CmcClaims::baseline();
        let p = claims.bound_matrix().abs_mat_vec(&claims.f_abs);
        assert_eq!(p[0], q("4.98"));
        assert_eq!(p[1], q("5.40934"));
        assert_eq!(p[2], q("15.253587"));
        // And the entry sum of squares is the documented exact value.
        assert_eq!(claims.bound_matrix().sum_of_squares(), q("46.573971"));
    }

    #[test]
    fn derived_bounds_over_derivative_box() {
        let req = PrecisionRequest::width_pow10(12);
        let d = DerivedBounds::over(&CmcField::nominal_derivative_box(), &req).unwrap();
        let within = |x: &Rational, lo: &str, hi: &str| {
            assert!(
                *x >= q(lo) && *x <= q(hi),
                "{} outside [{lo}, {hi}]",
                x.decimal_approx(12)
            );
        };
        // The third axis crosses π, so sup|cos u₃| is exactly 1.
        assert_eq!(d.f_abs[0], q("1"));
        within(&d.f_abs[1], "1.032295", "1.032296");
        within(&d.f_abs[2], "4.974913", "4.974915");
        within(&d.frobenius, "6.824285", "6.824286");
        // Componentwise |J·f| sits under the claimed set (4.98, 5.41, 15.26).
        let claims = CmcClaims::baseline();
        for (derived, claimed) in d.jf_abs.iter().zip(claims.f1_abs.iter()) {
            assert!(derived <= claimed);
        }
        // Derived entry bounds sit under the claimed entry bounds too.
        for (derived, claimed) in d.jacobian_abs.iter().zip(claims.jacobian_abs.iter()) {
            assert!(derived <= claimed, "{} > {}", derived.decimal_approx(9), claimed);
        }
        // The implied error-bound constants are usable as-is.
        let bs = d.bound_set(q("0.001"));
        assert_eq!(bs.m0, d.f_abs[2]);
        within(&bs.magnitude_m(), "16.91", "16.94");
    }
}
