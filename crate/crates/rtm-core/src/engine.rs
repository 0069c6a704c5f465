//! The rounded Taylor stepper and its a-priori error bound.
//!
//! One step from state `z` of a method of order `m` forms the exact Taylor
//! update
//!
//! ```text
//! y = z + f(z)·h + F₁(z)·h²/2! + … + F_{m−1}(z)·h^m/m!
//! ```
//!
//! and then rounds every component down onto the grid: `z' = R·⌊y/R⌋`. All
//! arithmetic is exact rational/integer work; for transcendental fields the
//! floor of each component is decided from a rigorous enclosure of `y`,
//! refined until the enclosure no longer straddles a grid line, so the
//! computed sequence is bit-for-bit the mathematically defined one.
//!
//! [`compute_error_bound`] evaluates the closed-form bound on the distance
//! between the rounded sequence and the true flow started at `z₀`:
//!
//! ```text
//! (M·h^m/(L·(m+1)!) + √n·R/(L·h)) · (e^{L·k·h} − 1)
//! ```
//!
//! with `L` the h-adjusted Lipschitz bound and `M` the magnitude bound on
//! the order-`m` Taylor coefficient field.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::enclosure::{
    enclose_exp, enclose_pi, floor_of_enclosed, EncloseError, PrecisionRequest,
};
use crate::field::{BoundSet, VectorField};
use crate::grid::{round_to_grid, GridSpec};
use crate::interval::{sqrt_upper, Interval, IntervalBox};
use crate::rational::Rational;
use crate::scaled;

/// One coordinate of the initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitialValue {
    Exact(Rational),
    /// `coefficient·π`, resolved through a π enclosure and floored onto the
    /// grid (requires rounding to be enabled).
    PiTimes(Rational),
}

/// Which intermediate states a run keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaptureMode {
    /// Every state `z₀ … z_k`.
    Full,
    /// `z₀`, `z_k`, and any explicitly requested indices.
    Endpoints,
}

#[derive(Clone, Debug)]
pub struct RtmConfig {
    /// Taylor order `m ≥ 1` of one step.
    pub order: u32,
    /// Step size `h > 0`.
    pub step: Rational,
    /// Number of steps `k`.
    pub steps: u64,
    /// Rounding grid; `None` disables rounding (exact-rational fields only).
    pub grid: Option<GridSpec>,
    pub initial: Vec<InitialValue>,
    pub capture: CaptureMode,
    /// Extra indices recorded under [`CaptureMode::Endpoints`].
    pub capture_indices: Vec<u64>,
    /// When set, every computed state (including `z₀`) must lie in this box.
    pub containment: Option<IntervalBox>,
    pub track_monotonicity: bool,
}

impl RtmConfig {
    pub fn new(
        order: u32,
        step: Rational,
        steps: u64,
        grid: Option<GridSpec>,
        initial: Vec<InitialValue>,
    ) -> Self {
        Self {
            order,
            step,
            steps,
            grid,
            initial,
            capture: CaptureMode::Endpoints,
            capture_indices: Vec::new(),
            containment: None,
            track_monotonicity: true,
        }
    }
}

/// Per-axis counts of step-to-step comparisons (they sum to `steps`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MonotonicityRecord {
    pub increases: u64,
    pub decreases: u64,
    pub stationary: u64,
}

/// The result of a run: endpoint states, requested intermediate states, and
/// the per-axis summaries needed by downstream checks.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub field_name: String,
    pub order: u32,
    pub step: Rational,
    pub steps: u64,
    pub resolution: Option<Rational>,
    pub start: Vec<Rational>,
    pub end: Vec<Rational>,
    /// `(index, state)` pairs in index order; always contains index 0 and
    /// the final index.
    pub captured: Vec<(u64, Vec<Rational>)>,
    pub monotonicity: Option<Vec<MonotonicityRecord>>,
    /// Exact per-axis min/max over every computed state.
    pub extremes: Vec<Interval>,
    /// Number of precision escalations needed to decide floors.
    pub refinement_events: u64,
}

impl Trajectory {
    pub fn state_at(&self, index: u64) -> Option<&[Rational]> {
        self.captured
            .iter()
            .find(|(i, _)| *i == index)
            .map(|(_, s)| s.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    InvalidConfig { reason: String },
    UnsupportedOrder { order: u32 },
    DimensionMismatch { expected: usize, got: usize },
    /// A computed state left the containment box.
    BoxViolation { step: u64, axis: usize },
    Enclose(EncloseError),
}

impl From<EncloseError> for EngineError {
    fn from(e: EncloseError) -> Self {
        Self::Enclose(e)
    }
}

impl core::fmt::Display for EngineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::InvalidConfig { reason } => write!(f, "invalid configuration: {reason}"),
            Self::UnsupportedOrder { order } => {
                write!(f, "order {order} is not supported for this field")
            }
            Self::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Self::BoxViolation { step, axis } => {
                write!(f, "state left the containment box at step {step}, axis {axis}")
            }
            Self::Enclose(e) => write!(f, "enclosure failure: {e}"),
        }
    }
}

fn validate(field: &dyn VectorField, config: &RtmConfig) -> Result<(), EngineError> {
    let dim = field.dimension();
    if config.initial.len() != dim {
        return Err(EngineError::DimensionMismatch {
            expected: dim,
            got: config.initial.len(),
        });
    }
    if config.order == 0 {
        return Err(EngineError::InvalidConfig {
            reason: "order must be at least 1".into(),
        });
    }
    if !config.step.is_positive() {
        return Err(EngineError::InvalidConfig {
            reason: "step size must be positive".into(),
        });
    }
    if config.grid.is_none() {
        if !field.exact_rational() {
            return Err(EngineError::InvalidConfig {
                reason: "disabling rounding requires an exact-rational field".into(),
            });
        }
        if config
            .initial
            .iter()
            .any(|v| matches!(v, InitialValue::PiTimes(_)))
        {
            return Err(EngineError::InvalidConfig {
                reason: "symbolic initial values require a rounding grid".into(),
            });
        }
    }
    if config.order > 1 && !field.exact_rational() {
        return Err(EngineError::UnsupportedOrder {
            order: config.order,
        });
    }
    if let Some(bx) = &config.containment {
        if bx.dimension() != dim {
            return Err(EngineError::DimensionMismatch {
                expected: dim,
                got: bx.dimension(),
            });
        }
    }
    Ok(())
}

/// Resolves the initial coordinates, flooring onto the grid when one is set.
fn resolve_initial(config: &RtmConfig) -> Result<Vec<Rational>, EngineError> {
    config
        .initial
        .iter()
        .map(|iv| match iv {
            InitialValue::Exact(r) => Ok(match &config.grid {
                Some(grid) => round_to_grid(r, grid),
                None => r.clone(),
            }),
            InitialValue::PiTimes(c) => {
                let grid = config.grid.as_ref().expect("validated: grid present");
                let scaled_pi = |req: &PrecisionRequest| {
                    enclose_pi(req).map(|p| p.scale(c))
                };
                let base = scaled_pi(&PrecisionRequest::for_grid(grid))?;
                let value = floor_of_enclosed(&base, grid, |attempt| {
                    if attempt > 12 {
                        return None;
                    }
                    let width = grid.resolution()
                        * Rational::pow10(-(6 + 4 * attempt as i32));
                    Some(scaled_pi(&PrecisionRequest::new(width, 20)))
                })?;
                Ok(value)
            }
        })
        .collect()
}

/// Shared mutable bookkeeping for a run.
struct Tracker {
    mono: Vec<MonotonicityRecord>,
    mins: Vec<Rational>,
    maxs: Vec<Rational>,
    captured: Vec<(u64, Vec<Rational>)>,
    refinements: u64,
}

impl Tracker {
    fn new(start: &[Rational]) -> Self {
        Self {
            mono: vec![MonotonicityRecord::default(); start.len()],
            mins: start.to_vec(),
            maxs: start.to_vec(),
            captured: vec![(0, start.to_vec())],
            refinements: 0,
        }
    }

    fn observe(&mut self, prev: &[Rational], next: &[Rational]) {
        for (c, (p, n)) in prev.iter().zip(next).enumerate() {
            match n.cmp(p) {
                core::cmp::Ordering::Greater => self.mono[c].increases += 1,
                core::cmp::Ordering::Less => self.mono[c].decreases += 1,
                core::cmp::Ordering::Equal => self.mono[c].stationary += 1,
            }
            if n < &self.mins[c] {
                self.mins[c] = n.clone();
            }
            if n > &self.maxs[c] {
                self.maxs[c] = n.clone();
            }
        }
    }
}

fn want_capture(config: &RtmConfig, index: u64) -> bool {
    match config.capture {
        CaptureMode::Full => true,
        CaptureMode::Endpoints => {
            index == config.steps || config.capture_indices.contains(&index)
        }
    }
}

fn check_containment(
    config: &RtmConfig,
    state: &[Rational],
    step: u64,
) -> Result<(), EngineError> {
    if let Some(bx) = &config.containment {
        if let Some(axis) = bx.first_violation(state) {
            return Err(EngineError::BoxViolation { step, axis });
        }
    }
    Ok(())
}

fn finish(
    field: &dyn VectorField,
    config: &RtmConfig,
    start: Vec<Rational>,
    end: Vec<Rational>,
    tracker: Tracker,
) -> Trajectory {
    let extremes = tracker
        .mins
        .into_iter()
        .zip(tracker.maxs)
        .map(|(lo, hi)| Interval::new(lo, hi).expect("min <= max"))
        .collect();
    Trajectory {
        field_name: String::from(field.name()),
        order: config.order,
        step: config.step.clone(),
        steps: config.steps,
        resolution: config.grid.as_ref().map(|g| g.resolution().clone()),
        start,
        end,
        captured: tracker.captured,
        monotonicity: config.track_monotonicity.then_some(tracker.mono),
        extremes,
        refinement_events: tracker.refinements,
    }
}

/// Runs the method for `config.steps` steps and returns the trajectory.
pub fn rtm_run(field: &dyn VectorField, config: &RtmConfig) -> Result<Trajectory, EngineError> {
    validate(field, config)?;
    let start = resolve_initial(config)?;
    check_containment(config, &start, 0)?;
    if field.exact_rational() {
        run_exact(field, config, start)
    } else {
        let grid = config.grid.as_ref().expect("validated: grid present");
        match grid.decimal_digits() {
            Some(g) => run_grid_pow10(field, config, grid, g, start),
            None => run_general(field, config, grid, start),
        }
    }
}

/// One step of the method from an arbitrary state (convenience wrapper; the
/// bulk runner uses specialised loops that produce identical states).
pub fn rtm_step(
    field: &dyn VectorField,
    state: &[Rational],
    config: &RtmConfig,
) -> Result<Vec<Rational>, EngineError> {
    validate(field, config)?;
    if state.len() != field.dimension() {
        return Err(EngineError::DimensionMismatch {
            expected: field.dimension(),
            got: state.len(),
        });
    }
    if field.exact_rational() {
        let coeffs = taylor_coefficients(&config.step, config.order);
        exact_step(field, state, config, &coeffs)
    } else {
        let grid = config.grid.as_ref().expect("validated: grid present");
        let mut refinements = 0u64;
        general_step(field, state, &config.step, grid, &mut refinements)
    }
}

/// `h^{i+1}/(i+1)!` for `i = 0 … order−1`.
fn taylor_coefficients(h: &Rational, order: u32) -> Vec<Rational> {
    let mut coeffs = Vec::with_capacity(order as usize);
    let mut c = h.clone();
    coeffs.push(c.clone());
    for i in 1..order {
        c = c * h / Rational::from_integer(i as i64 + 1);
        coeffs.push(c.clone());
    }
    coeffs
}

fn exact_step(
    field: &dyn VectorField,
    state: &[Rational],
    config: &RtmConfig,
    coeffs: &[Rational],
) -> Result<Vec<Rational>, EngineError> {
    let mut y = state.to_vec();
    for (ord, coeff) in coeffs.iter().enumerate() {
        let f = field
            .eval_exact(state, ord as u32)
            .ok_or(EngineError::UnsupportedOrder {
                order: config.order,
            })?;
        if f.len() != state.len() {
            return Err(EngineError::DimensionMismatch {
                expected: state.len(),
                got: f.len(),
            });
        }
        for (yc, fc) in y.iter_mut().zip(&f) {
            *yc += &(fc * coeff);
        }
    }
    Ok(match &config.grid {
        Some(grid) => y.iter().map(|v| round_to_grid(v, grid)).collect(),
        None => y,
    })
}

fn run_exact(
    field: &dyn VectorField,
    config: &RtmConfig,
    start: Vec<Rational>,
) -> Result<Trajectory, EngineError> {
    let coeffs = taylor_coefficients(&config.step, config.order);
    let mut tracker = Tracker::new(&start);
    let mut state = start.clone();
    for i in 0..config.steps {
        let next = exact_step(field, &state, config, &coeffs)?;
        tracker.observe(&state, &next);
        state = next;
        let idx = i + 1;
        check_containment(config, &state, idx)?;
        if want_capture(config, idx) {
            tracker.captured.push((idx, state.clone()));
        }
    }
    Ok(finish(field, config, start, state, tracker))
}

/// Outcome of one fast-path attempt at a fixed working precision.
enum FastStep {
    Done(Vec<BigInt>),
    /// Some component's update bracket straddles a grid line; the bracket of
    /// that component's unrounded value is reported for diagnostics.
    Tie(Rational, Rational),
    Pole(EncloseError),
    NoPath,
}

fn try_grid_step(
    field: &dyn VectorField,
    nums: &[BigInt],
    g: u32,
    hn: &BigInt,
    hd: &BigInt,
    digits: u32,
) -> FastStep {
    match field.eval_pow10(nums, g, digits) {
        None => FastStep::NoPath,
        Some(Err(e)) => FastStep::Pole(e),
        Some(Ok(pairs)) => {
            // y_c·10^g = p_c + hn·f_c / (hd·10^(digits−g)) with
            // f_c·10^digits ∈ [flo, fhi].
            let den = hd * scaled::pow10(digits - g);
            let mut out = Vec::with_capacity(nums.len());
            for (p, (flo, fhi)) in nums.iter().zip(&pairs) {
                let lo_fl = scaled::floor_div(&(hn * flo), &den);
                let hi_fl = scaled::floor_div(&(hn * fhi), &den);
                if lo_fl != hi_fl {
                    let full_den = Rational::new(
                        &den * scaled::pow10(g),
                        BigInt::from(1u8),
                    )
                    .expect("positive");
                    let base = Rational::from(p * &den);
                    let lo = (&base + &Rational::from(hn * flo)) / &full_den;
                    let hi = (&base + &Rational::from(hn * fhi)) / &full_den;
                    return FastStep::Tie(lo, hi);
                }
                out.push(p + lo_fl);
            }
            FastStep::Done(out)
        }
    }
}

/// Doubling schedule for the fast path's working precision, and the cap on
/// escalations before a tie is reported unresolvable.
const FAST_PATH_MAX_ESCALATIONS: u32 = 8;

fn run_grid_pow10(
    field: &dyn VectorField,
    config: &RtmConfig,
    grid: &GridSpec,
    g: u32,
    start: Vec<Rational>,
) -> Result<Trajectory, EngineError> {
    let dim = field.dimension();
    let mut nums = states_to_nums(&start, g);
    let hn = config.step.numer().clone();
    let hd = config.step.denom().clone();
    let box_ints = config.containment.as_ref().map(|bx| box_int_bounds(bx, g));
    let d0 = g + 10;

    let mut tracker = Tracker::new(&start);
    let mut int_mins = nums.clone();
    let mut int_maxs = nums.clone();
    let mut int_mono = vec![MonotonicityRecord::default(); dim];

    for i in 0..config.steps {
        let mut digits = d0;
        let mut escalations = 0u32;
        let next = loop {
            match try_grid_step(field, &nums, g, &hn, &hd, digits) {
                FastStep::Done(next) => break next,
                FastStep::Tie(lo, hi) => {
                    if escalations >= FAST_PATH_MAX_ESCALATIONS {
                        return Err(EncloseError::GridTieUnresolved { lo, hi }.into());
                    }
                }
                FastStep::Pole(e) => {
                    if escalations >= FAST_PATH_MAX_ESCALATIONS {
                        return Err(e.into());
                    }
                }
                FastStep::NoPath => {
                    // The field has no integer fast path here; take this one
                    // step through the enclosure machinery.
                    let state = nums_to_states(&nums, g);
                    let next = general_step(
                        field,
                        &state,
                        &config.step,
                        grid,
                        &mut tracker.refinements,
                    )?;
                    break states_to_nums(&next, g);
                }
            }
            digits *= 2;
            escalations += 1;
            tracker.refinements += 1;
        };

        for c in 0..dim {
            match next[c].cmp(&nums[c]) {
                core::cmp::Ordering::Greater => int_mono[c].increases += 1,
                core::cmp::Ordering::Less => int_mono[c].decreases += 1,
                core::cmp::Ordering::Equal => int_mono[c].stationary += 1,
            }
            if next[c] < int_mins[c] {
                int_mins[c] = next[c].clone();
            }
            if next[c] > int_maxs[c] {
                int_maxs[c] = next[c].clone();
            }
        }
        let idx = i + 1;
        if let Some(bi) = &box_ints {
            for (c, (lo, hi)) in bi.iter().enumerate() {
                if &next[c] < lo || &next[c] > hi {
                    return Err(EngineError::BoxViolation { step: idx, axis: c });
                }
            }
        }
        if want_capture(config, idx) {
            tracker.captured.push((idx, nums_to_states(&next, g)));
        }
        nums = next;
    }

    tracker.mono = int_mono;
    tracker.mins = nums_to_states(&int_mins, g);
    tracker.maxs = nums_to_states(&int_maxs, g);
    let end = nums_to_states(&nums, g);
    Ok(finish(field, config, start, end, tracker))
}

/// Integer numerators of on-grid states at scale `10^-g`.
fn states_to_nums(states: &[Rational], g: u32) -> Vec<BigInt> {
    states
        .iter()
        .map(|r| {
            let scaled_num = r.numer() * scaled::pow10(g);
            debug_assert!((&scaled_num % r.denom()).is_zero(), "state not on grid");
            scaled_num / r.denom()
        })
        .collect()
}

fn nums_to_states(nums: &[BigInt], g: u32) -> Vec<Rational> {
    nums.iter()
        .map(|n| Rational::new(n.clone(), scaled::pow10(g)).expect("positive denominator"))
        .collect()
}

/// Per-axis integer containment bounds at grid scale: `state` is inside iff
/// `ceil(lo·10^g) ≤ num ≤ floor(hi·10^g)`.
fn box_int_bounds(bx: &IntervalBox, g: u32) -> Vec<(BigInt, BigInt)> {
    bx.axes()
        .iter()
        .map(|iv| {
            let p = scaled::pow10(g);
            let lo = scaled::ceil_div(&(iv.lo().numer() * &p), iv.lo().denom());
            let hi = scaled::floor_div(&(iv.hi().numer() * &p), iv.hi().denom());
            (lo, hi)
        })
        .collect()
}

/// One rounded step through the enclosure machinery (any grid).
fn general_step(
    field: &dyn VectorField,
    state: &[Rational],
    h: &Rational,
    grid: &GridSpec,
    refinements: &mut u64,
) -> Result<Vec<Rational>, EngineError> {
    let f = field.eval_enclosure(state, &PrecisionRequest::for_grid(grid))?;
    let mut next = Vec::with_capacity(state.len());
    for (c, (zc, fc)) in state.iter().zip(&f).enumerate() {
        let y = fc.scale(h).shift(zc);
        let rounded = floor_of_enclosed(&y, grid, |attempt| {
            if attempt > 12 {
                return None;
            }
            *refinements += 1;
            let width = grid.resolution() * Rational::pow10(-(3 + 2 * attempt as i32));
            let req = PrecisionRequest::new(width, 20);
            Some(
                field
                    .eval_enclosure(state, &req)
                    .map(|fs| fs[c].scale(h).shift(zc)),
            )
        })?;
        next.push(rounded);
    }
    Ok(next)
}

fn run_general(
    field: &dyn VectorField,
    config: &RtmConfig,
    grid: &GridSpec,
    start: Vec<Rational>,
) -> Result<Trajectory, EngineError> {
    let mut tracker = Tracker::new(&start);
    let mut state = start.clone();
    for i in 0..config.steps {
        let next = general_step(field, &state, &config.step, grid, &mut tracker.refinements)?;
        tracker.observe(&state, &next);
        state = next;
        let idx = i + 1;
        check_containment(config, &state, idx)?;
        if want_capture(config, idx) {
            tracker.captured.push((idx, state.clone()));
        }
    }
    Ok(finish(field, config, start, state, tracker))
}

/// The a-priori bound on `max_i |z_i − u(t_i)|` for the rounded sequence,
/// with every sub-term retained for reporting.
#[derive(Clone, Debug)]
pub struct ErrorBound {
    /// `(truncation_term + rounding_term) · growth_factor`.
    pub total: Rational,
    /// `M·h^m/(L·(m+1)!)`.
    pub truncation_term: Rational,
    /// `√n·R/(L·h)`; zero when rounding is disabled.
    pub rounding_term: Rational,
    /// Upper bound on `e^{L·k·h} − 1`.
    pub growth_factor: Rational,
    /// `L = K₀ + Σ_{i≥1} K_i·hⁱ/(i+1)!`.
    pub lipschitz: Rational,
    /// `M ≥ √(ΣM_i²)`.
    pub magnitude: Rational,
    /// `ε − M₀·h − total`: positive iff the step-containment hypothesis
    /// behind the bound is satisfied with room to spare.
    pub hypothesis_slack: Rational,
    pub hypothesis_ok: bool,
}

/// Evaluates the error bound for `steps` steps of size `step` on a grid of
/// the given resolution (`None` = exact arithmetic) in dimension `n`.
pub fn compute_error_bound(
    bounds: &BoundSet,
    step: &Rational,
    steps: u64,
    resolution: Option<&Rational>,
    dimension: usize,
) -> Result<ErrorBound, EngineError> {
    if !step.is_positive() {
        return Err(EngineError::InvalidConfig {
            reason: "step size must be positive".into(),
        });
    }
    let lipschitz = bounds.lipschitz_l(step);
    if !lipschitz.is_positive() {
        return Err(EngineError::InvalidConfig {
            reason: "Lipschitz bound must be positive".into(),
        });
    }
    let magnitude = bounds.magnitude_m();
    let m = bounds.order();
    let mut h_pow = Rational::one();
    for _ in 0..m {
        h_pow = h_pow * step;
    }
    let mut factorial = Rational::one();
    for i in 2..=(m + 1) {
        factorial = factorial * Rational::from_integer(i as i64);
    }
    let truncation_term = &magnitude * &h_pow / &(&lipschitz * &factorial);
    let rounding_term = match resolution {
        Some(r) => {
            if !r.is_positive() {
                return Err(EngineError::InvalidConfig {
                    reason: "grid resolution must be positive".into(),
                });
            }
            let sqrt_n = sqrt_upper(&Rational::from_integer(dimension as i64), 12);
            &sqrt_n * r / &(&lipschitz * step)
        }
        None => Rational::zero(),
    };
    let exponent = &(&lipschitz * &Rational::from_integer(steps as i64)) * step;
    let exp_hi = enclose_exp(&exponent, &PrecisionRequest::width_pow10(12))?
        .hi()
        .clone();
    let one = Rational::one();
    let growth_factor = if exp_hi > one {
        &exp_hi - &one
    } else {
        Rational::zero()
    };
    let total = &(&truncation_term + &rounding_term) * &growth_factor;
    let used = &(&bounds.m0 * step) + &total;
    let hypothesis_slack = &bounds.epsilon - &used;
    let hypothesis_ok = hypothesis_slack.is_positive();
    Ok(ErrorBound {
        total,
        truncation_term,
        rounding_term,
        growth_factor,
        lipschitz,
        magnitude,
        hypothesis_slack,
        hypothesis_ok,
    })
}
