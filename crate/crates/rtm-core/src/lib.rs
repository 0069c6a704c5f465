//! Exact rational arithmetic, rigorous transcendental enclosures, and the
//! round Taylor method (RTM) for ODE integration with certified error bounds.
//!
//! Everything in a rigorous code path works over arbitrary-precision
//! rationals: arithmetic is exact, and every transcendental quantity is
//! represented by a proven two-sided rational enclosure. The integration
//! engine rounds each step down onto a rational grid, which keeps state sizes
//! bounded and makes runs bit-reproducible across platforms, while the
//! certified global error bound accounts for the rounding.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization, and the command
//! line live in the companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(any(test, feature = "oracle"))]
extern crate std;

pub mod enclosure;
pub mod engine;
pub mod field;
pub mod fields;
pub mod grid;
pub mod interval;
pub mod ranges;
pub mod rational;
pub mod report;

mod scaled;

#[cfg(feature = "oracle")]
pub mod oracle;

pub use enclosure::{
    enclose_cos, enclose_cot, enclose_csc, enclose_exp, enclose_pi, enclose_sin,
    floor_of_enclosed, EncloseError, PrecisionRequest,
};
pub use engine::{
    compute_error_bound, rtm_run, rtm_step, CaptureMode, EngineError, ErrorBound, InitialValue,
    MonotonicityRecord, RtmConfig, Trajectory,
};
pub use field::{BoundSet, VectorField};
pub use grid::{floor_rational, round_to_grid, round_vector_to_grid, GridSpec};
pub use interval::{
    frobenius_norm_bound, range_product_bound, sqrt_lower, sqrt_upper, BoundMatrix, Interval,
    IntervalBox,
};
pub use ranges::{monotone_range, RangeError, RangeFn};
pub use rational::{ParseRationalError, Rational};
pub use report::{CheckReport, Inequality, Relation};
