//! End-to-end existence proof: thirty-two rounded Taylor runs, bound
//! derivations over two box families, deviation chains, and the
//! intermediate-value conclusion, assembled into a [`Certificate`].
//!
//! Two families of constants run side by side. The *reference* family
//! re-verifies every stated working constant exactly as given (over the
//! stated boxes). The *certified* family derives all bounds from scratch
//! over a repaired containment box — the stated box does not actually
//! contain the computed sequences — and only the certified chains gate the
//! verdict; the reference family documents that the stated constants hold
//! as claimed.

use rayon::prelude::*;
use rtm_core::fields::cmc::{
    verify_lemma1, verify_lemma2, verify_lemma3, verify_lemma4, CmcClaims, DerivedBounds,
};
use rtm_core::fields::CmcField;
use rtm_core::{
    compute_error_bound, enclose_exp, enclose_pi, floor_rational, rtm_run, sqrt_upper,
    CaptureMode, EngineError, GridSpec, Inequality, InitialValue, Interval, IntervalBox,
    PrecisionRequest, Rational, Relation, RtmConfig, Trajectory,
};

use crate::certificate::{
    rat_str, AxisCounts, Attestations, Certificate, Chain, Check, ConfigSection, Edge,
    ErrorBoundsSection, FamilyBounds, FamilyConstants, GronwallFamily, GronwallSection,
    HorizonBound, MarginFamily, MarginsSection, MirandaSection, PiEnclosure, RectangleJson,
    Report, TablesSection, Verdict, FORMAT_VERSION,
};
use crate::tables;

fn q(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

/// Full-proof parameterization. The defaults reproduce the published run;
/// changing them recomputes every bound honestly (and skips the end-state
/// table comparison, which is only meaningful for the published shape).
#[derive(Clone, Debug)]
pub struct ProofConfig {
    pub order: u32,
    pub steps: u64,
    pub resolution: Rational,
    pub epsilon: Rational,
    pub threads: Option<usize>,
}

impl Default for ProofConfig {
    fn default() -> Self {
        Self {
            order: 1,
            steps: 25_000,
            resolution: Rational::pow10(-10),
            epsilon: q("1/1000"),
            threads: None,
        }
    }
}

/// Short and long integration horizons (the two rectangle edges in time).
fn horizon_short() -> Rational {
    q("3966/10000")
}

fn horizon_long() -> Rational {
    q("3991/10000")
}

/// Starting second coordinate for sample `j`: `5204/10⁴ + j·(4/10⁴)/15`.
fn sample_a(j: usize) -> Rational {
    Rational::from_ratio(3903 + 2 * j as i64, 7500)
}

/// Half the sample spacing: the furthest any admissible start sits from a
/// sampled one.
fn delta0() -> Rational {
    Rational::from_ratio(1, 7500)
}

fn box3(a: (&str, &str), b: (&str, &str), c: (&str, &str)) -> IntervalBox {
    let iv =
        |p: (&str, &str)| Interval::new(q(p.0), q(p.1)).expect("box endpoints ordered");
    IntervalBox::new(vec![iv(a), iv(b), iv(c)])
}

/// Repaired containment box: verified to hold every computed state of all
/// thirty-two runs (the stated box is too tight on three sides).
fn repaired_inner_box() -> IntervalBox {
    box3(
        ("13212/10000", "15708/10000"),
        ("5204/10000", "7884/10000"),
        ("15640/10000", "31416/10000"),
    )
}

/// Inflation of the repaired box holding every true solution started from a
/// computed initial state (deviation stays below the inflation margin).
fn repaired_derivative_box() -> IntervalBox {
    repaired_inner_box().inflate(&q("1/1000"))
}

/// Wider inflation holding, in addition, the true solutions started between
/// samples (deviation + start-separation growth stays below the margin).
fn tube_box() -> IntervalBox {
    repaired_inner_box().inflate(&q("35/10000"))
}

const CLAIMED_RTILDE_CEILING: &str = "3048/10000000";
const CLAIMED_GRONWALL_SHORT: &str = "999/500000"; // 0.001998
const CLAIMED_GRONWALL_LONG: &str = "51/25000"; // 0.00204
const CLAIMED_INTERP_CEILING: &str = "1/100000";
const CLAIMED_SLOPE2: &str = "1033/1000";
const START_ROUNDING_CEILING: &str = "3/1000000000";

/// Claimed distance-to-target margins for the four boundary families.
const CLAIMED_MARGIN_ALPHA_SHORT: &str = "264/100000";
const CLAIMED_MARGIN_ALPHA_LONG: &str = "2601/1000000";
const CLAIMED_MARGIN_THETA_LOW: &str = "45/100000";
const CLAIMED_MARGIN_THETA_HIGH: &str = "375/1000000";

/// Collects failure reasons; every gating check funnels through here.
struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
        }
    }

    /// Converts and records an inequality; a violation becomes a failure
    /// reason.
    fn check(&mut self, ineq: &Inequality) -> Check {
        let c = Check::from_inequality(ineq);
        if !c.holds {
            self.failures.push(format!(
                "{}: {} {} {} is violated",
                c.label, c.lhs, c.relation, c.rhs
            ));
        }
        c
    }

    fn require(&mut self, ok: bool, reason: impl Into<String>) {
        if !ok {
            self.failures.push(reason.into());
        }
    }
}

fn ineq(label: &str, lhs: Rational, relation: Relation, rhs: Rational) -> Inequality {
    Inequality::new(label, lhs, relation, rhs)
}

/// Upper endpoint of a rigorous `exp(x)` enclosure.
fn exp_upper(x: &Rational) -> Rational {
    enclose_exp(x, &PrecisionRequest::width_pow10(12))
        .expect("exponential enclosure at modest width")
        .hi()
        .clone()
}

/// `δ₀ · e^{K·t}`, rounded up: growth of a start separation under the
/// derivative bound `K`.
pub fn gronwall_bound(delta0: &Rational, k: &Rational, t: &Rational) -> Rational {
    assert!(!delta0.is_negative() && !k.is_negative() && !t.is_negative());
    delta0 * &exp_upper(&(k * t))
}

/// Which side of the target a boundary-edge family must clear.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSide {
    Above,
    Below,
}

/// Signed clearance of each value past the far endpoint of the target
/// enclosure. A positive distance means the value sits strictly on the
/// required side of every point of the enclosure, so the sign condition
/// holds no matter where in the enclosure the true target lies.
pub fn edge_distances(values: &[Rational], target: &Interval, side: EdgeSide) -> Vec<Rational> {
    values
        .iter()
        .map(|v| match side {
            EdgeSide::Above => v - target.hi(),
            EdgeSide::Below => target.lo() - v,
        })
        .collect()
}

/// Two-dimensional intermediate-value conclusion: a zero of `(F, G)` exists
/// in the rectangle exactly when all four boundary sign conditions hold.
pub fn miranda_conclude(edges: &[Edge]) -> bool {
    edges.len() == 4 && edges.iter().all(|e| e.holds)
}

/// `√3 · R · e^{K·t}`, rounded up: growth of the initial-state grid rounding
/// (each start coordinate moves down by less than `R` when floored).
fn start_rounding_term(resolution: &Rational, k: &Rational, t: &Rational) -> Rational {
    &(&sqrt_upper(&Rational::from_integer(3), 15) * resolution) * &exp_upper(&(k * t))
}

/// One rounded Taylor run for sample `j` over the given horizon.
fn run_one(
    cfg: &ProofConfig,
    j: usize,
    horizon: &Rational,
    window_index: u64,
) -> Result<Trajectory, EngineError> {
    let step = horizon / &Rational::from_integer(cfg.steps as i64);
    let grid = GridSpec::new(cfg.resolution.clone()).expect("positive resolution");
    let mut run_cfg = RtmConfig::new(
        cfg.order,
        step,
        cfg.steps,
        Some(grid),
        vec![
            InitialValue::PiTimes(q("1/2")),
            InitialValue::Exact(sample_a(j)),
            InitialValue::PiTimes(Rational::one()),
        ],
    );
    run_cfg.capture = CaptureMode::Endpoints;
    run_cfg.capture_indices = vec![window_index];
    run_cfg.track_monotonicity = true;
    rtm_run(&CmcField, &run_cfg)
}

fn axis_counts(t: &Trajectory, axis: usize) -> AxisCounts {
    let rec = &t.monotonicity.as_ref().expect("tracking enabled")[axis];
    AxisCounts {
        increases: rec.increases,
        decreases: rec.decreases,
        stationary: rec.stationary,
    }
}

fn interval_pair(iv: &Interval) -> [String; 2] {
    [rat_str(iv.lo()), rat_str(iv.hi())]
}

/// Executes the complete verification and assembles the certificate. All
/// failures are reported through the verdict; this function only panics on
/// internal invariant violations, never on a failed proof obligation.
pub fn run_full_proof(cfg: &ProofConfig) -> Certificate {
    let mut gate = Gate::new();
    let req = PrecisionRequest::width_pow10(12);
    let claims = {
        let mut c = CmcClaims::baseline();
        c.epsilon = cfg.epsilon.clone();
        c
    };

    let t_short = horizon_short();
    let t_long = horizon_long();
    let steps_rat = Rational::from_integer(cfg.steps as i64);
    let h_short = &t_short / &steps_rat;
    let h_long = &t_long / &steps_rat;

    let config = ConfigSection {
        field: "cmc-s4".into(),
        order: cfg.order,
        steps: cfg.steps,
        resolution: rat_str(&cfg.resolution),
        horizon_short: rat_str(&t_short),
        horizon_long: rat_str(&t_long),
        step_short: rat_str(&h_short),
        step_long: rat_str(&h_long),
        sample_count: tables::SAMPLE_COUNT,
        start: ["pi/2".into(), "sample".into(), "pi".into()],
        epsilon: rat_str(&cfg.epsilon),
        sha256: String::new(),
    }
    .sealed();

    // ----- constants verification over the stated boxes -----
    let inner = CmcField::nominal_inner_box();
    let derivative = CmcField::nominal_derivative_box();
    let mut lemmas = Vec::new();
    let lemma_results = [
        verify_lemma1(&derivative, &req).expect("stated boxes avoid poles"),
        verify_lemma2(&derivative, &claims, &req).expect("stated boxes avoid poles"),
        verify_lemma3(&derivative, &claims, &req).expect("stated boxes avoid poles"),
        verify_lemma4(&CmcField, &derivative, &claims, &req).expect("stated boxes avoid poles"),
    ];
    for r in &lemma_results {
        gate.require(
            r.all_hold(),
            format!("constants pass '{}' has violations: {:?}", r.title, r.violations()),
        );
        lemmas.push(Report::from_report(r));
    }

    // ----- bound constants: reference (stated) and certified (derived) -----
    let ref_bs = claims.bound_set();
    let cert_derived = DerivedBounds::over(&repaired_derivative_box(), &req)
        .expect("repaired derivative box avoids poles");
    let cert_bs = cert_derived.bound_set(cfg.epsilon.clone());
    let k4 = DerivedBounds::over(&tube_box(), &req)
        .expect("tube box avoids poles")
        .frobenius;

    let horizon_bound = |gate: &mut Gate,
                         bs: &rtm_core::BoundSet,
                         h: &Rational,
                         reference: bool|
     -> (Rational, HorizonBound) {
        let eb = compute_error_bound(bs, h, cfg.steps, Some(&cfg.resolution), 3)
            .expect("bound constants are positive");
        let mut checks = Vec::new();
        if reference {
            checks.push(gate.check(&ineq(
                "global error bound stays below the stated ceiling",
                eb.total.clone(),
                Relation::Lt,
                q(CLAIMED_RTILDE_CEILING),
            )));
        }
        checks.push(gate.check(&ineq(
            "global error bound stays below the box inflation margin",
            eb.total.clone(),
            Relation::Lt,
            cfg.epsilon.clone(),
        )));
        checks.push(gate.check(&ineq(
            "one-step containment hypothesis slack is positive",
            eb.hypothesis_slack.clone(),
            Relation::Gt,
            Rational::zero(),
        )));
        let json = HorizonBound {
            step: rat_str(h),
            total: rat_str(&eb.total),
            truncation_term: rat_str(&eb.truncation_term),
            rounding_term: rat_str(&eb.rounding_term),
            growth_factor: rat_str(&eb.growth_factor),
            hypothesis_slack: rat_str(&eb.hypothesis_slack),
            checks,
        };
        (eb.total, json)
    };

    let (rtilde_ref_short, eb_ref_short) = horizon_bound(&mut gate, &ref_bs, &h_short, true);
    let (rtilde_ref_long, eb_ref_long) = horizon_bound(&mut gate, &ref_bs, &h_long, true);
    let (rtilde_cert_short, eb_cert_short) = horizon_bound(&mut gate, &cert_bs, &h_short, false);
    let (rtilde_cert_long, eb_cert_long) = horizon_bound(&mut gate, &cert_bs, &h_long, false);

    let family_constants = |label: &str, bs: &rtm_core::BoundSet| FamilyConstants {
        box_label: label.into(),
        k0: rat_str(&bs.k_coefficients[0]),
        m0: rat_str(&bs.m0),
        m_components: [
            rat_str(&bs.m_components[0]),
            rat_str(&bs.m_components[1]),
            rat_str(&bs.m_components[2]),
        ],
        magnitude: rat_str(&bs.magnitude_m()),
        epsilon: rat_str(&bs.epsilon),
    };

    let error_bounds = ErrorBoundsSection {
        reference: FamilyBounds {
            constants: family_constants("stated derivative box", &ref_bs),
            short: eb_ref_short,
            long: eb_ref_long,
        },
        certified: FamilyBounds {
            constants: family_constants("repaired derivative box (inflated by 1/1000)", &cert_bs),
            short: eb_cert_short,
            long: eb_cert_long,
        },
    };

    // ----- start-separation growth (both families) -----
    let d0 = delta0();
    let k_ref = claims.k0.clone();
    let gron_ref_short = gronwall_bound(&d0, &k_ref, &t_short);
    let gron_ref_long = gronwall_bound(&d0, &k_ref, &t_long);
    let gron_cert_short = gronwall_bound(&d0, &k4, &t_short);
    let gron_cert_long = gronwall_bound(&d0, &k4, &t_long);

    let z0_ref_short = start_rounding_term(&cfg.resolution, &k_ref, &t_short);
    let z0_ref_long = start_rounding_term(&cfg.resolution, &k_ref, &t_long);
    let z0_cert_short = start_rounding_term(&cfg.resolution, &k4, &t_short);
    let z0_cert_long = start_rounding_term(&cfg.resolution, &k4, &t_long);

    let gron_ref_checks = vec![
        gate.check(&ineq(
            "separation growth stays below the stated short-horizon ceiling",
            gron_ref_short.clone(),
            Relation::Lt,
            q(CLAIMED_GRONWALL_SHORT),
        )),
        gate.check(&ineq(
            "separation growth stays below the stated long-horizon ceiling",
            gron_ref_long.clone(),
            Relation::Lt,
            q(CLAIMED_GRONWALL_LONG),
        )),
    ];
    // The certified tube must absorb deviation + separation growth + start
    // rounding, otherwise the wider box (over which its own derivative
    // bound was taken) is not known to hold the in-between solutions.
    let tube_total = &(&rtilde_cert_long + &gron_cert_long) + &z0_cert_long;
    let gron_cert_checks = vec![gate.check(&ineq(
        "certified deviation tube fits inside the outer box inflation",
        tube_total,
        Relation::Le,
        q("35/10000"),
    ))];

    let gronwall = GronwallSection {
        delta0: rat_str(&d0),
        reference: GronwallFamily {
            k: rat_str(&k_ref),
            short: rat_str(&gron_ref_short),
            long: rat_str(&gron_ref_long),
            checks: gron_ref_checks,
        },
        certified: GronwallFamily {
            k: rat_str(&k4),
            short: rat_str(&gron_cert_short),
            long: rat_str(&gron_cert_long),
            checks: gron_cert_checks,
        },
    };

    // ----- the thirty-two runs -----
    // Last index at or before the short horizon on the long-horizon grid:
    // grid times i·h_long for i in [window_index, steps] cover the whole
    // time rectangle edge within half a step.
    let window_index = u64::try_from(floor_rational(&(&t_short / &h_long)))
        .expect("window index fits in u64");
    let jobs: Vec<(usize, Rational)> = (0..tables::SAMPLE_COUNT)
        .map(|j| (j, t_short.clone()))
        .chain((0..tables::SAMPLE_COUNT).map(|j| (j, t_long.clone())))
        .collect();
    let run_all = || -> Vec<Result<Trajectory, EngineError>> {
        jobs.par_iter()
            .map(|(j, horizon)| run_one(cfg, *j, horizon, window_index))
            .collect()
    };
    let mut results = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(run_all),
        None => run_all(),
    };
    let runs_long: Vec<_> = results.split_off(tables::SAMPLE_COUNT);
    let runs_short: Vec<_> = results;

    let mut notes: Vec<String> = Vec::new();
    for (label, runs) in [("short", &runs_short), ("long", &runs_long)] {
        for (j, r) in runs.iter().enumerate() {
            if let Err(e) = r {
                gate.require(false, format!("integration failed (sample {j}, {label} horizon): {e}"));
            }
        }
    }
    if runs_short.iter().chain(runs_long.iter()).any(|r| r.is_err()) {
        return assemble_failure(config, lemmas, error_bounds, gronwall, notes, gate);
    }
    let runs_short: Vec<Trajectory> = runs_short.into_iter().map(|r| r.unwrap()).collect();
    let runs_long: Vec<Trajectory> = runs_long.into_iter().map(|r| r.unwrap()).collect();

    // ----- end-state table comparison (published shape only) -----
    let published_shape =
        cfg.order == 1 && cfg.steps == 25_000 && cfg.resolution == Rational::pow10(-10);
    let states = |runs: &[Trajectory]| -> Vec<[String; 3]> {
        runs.iter()
            .map(|t| [rat_str(&t.end[0]), rat_str(&t.end[1]), rat_str(&t.end[2])])
            .collect()
    };
    let mut matched = 0usize;
    let mut mismatches = Vec::new();
    if published_shape {
        for (label, runs, table) in [
            ("short", &runs_short, &tables::END_STATES_SHORT),
            ("long", &runs_long, &tables::END_STATES_LONG),
        ] {
            for (j, run) in runs.iter().enumerate() {
                for c in 0..3 {
                    let expected = q(table[j][c]);
                    if run.end[c] == expected {
                        matched += 1;
                    } else {
                        mismatches.push(format!(
                            "{label} horizon, sample {j}, component {c}: computed {} != published {}",
                            rat_str(&run.end[c]),
                            table[j][c]
                        ));
                    }
                }
            }
        }
        gate.require(
            mismatches.is_empty(),
            format!("end-state table comparison failed for {} entries", mismatches.len()),
        );
    } else {
        notes.push(
            "end-state table comparison skipped: the configuration differs from the published \
             shape (order 1, 25000 steps, resolution 1/10^10)"
                .into(),
        );
    }
    let tables_section = TablesSection {
        compared: published_shape,
        matched,
        total: 96,
        mismatches,
        end_states_short: states(&runs_short),
        end_states_long: states(&runs_long),
    };

    // ----- containment of every computed state -----
    let inner_repaired = repaired_inner_box();
    let mut global: Vec<Interval> = runs_short[0].extremes.clone();
    let mut runs_contained = true;
    let mut printed_contained = true;
    for t in runs_short.iter().chain(runs_long.iter()) {
        for (axis, ext) in t.extremes.iter().enumerate() {
            if !inner_repaired.axes()[axis].contains_interval(ext) {
                runs_contained = false;
            }
            if !inner.axes()[axis].contains_interval(ext) {
                printed_contained = false;
            }
            global[axis] = global[axis].hull(ext);
        }
    }
    gate.require(
        runs_contained,
        "a computed state leaves the repaired containment box",
    );
    notes.push(if printed_contained {
        "the stated containment box holds every computed state".into()
    } else {
        format!(
            "the stated containment box does not hold the computed sequences (exact extremes: \
             first {}..{}, second {}..{}, third {}..{}); the verdict rests on the repaired box \
             with every bound re-derived over its inflations",
            rat_str(global[0].lo()),
            rat_str(global[0].hi()),
            rat_str(global[1].lo()),
            rat_str(global[1].hi()),
            rat_str(global[2].lo()),
            rat_str(global[2].hi()),
        )
    });

    // ----- target enclosures -----
    let pi = enclose_pi(&PrecisionRequest::width_pow10(15)).expect("pi at width 10^-15");
    let half = Rational::from_ratio(1, 2);
    let quarter = Rational::from_ratio(1, 4);
    let half_pi = pi.scale(&half);
    let quarter_pi = pi.scale(&quarter);

    // ----- exact orderings and monotonicity attestations -----
    let strictly_increasing = |runs: &[Trajectory]| -> bool {
        runs.windows(2).all(|w| w[0].end[2] < w[1].end[2])
    };
    let ordering_short = strictly_increasing(&runs_short);
    let ordering_long = strictly_increasing(&runs_long);
    gate.require(
        ordering_short,
        "final third components are not strictly increasing across samples (short horizon)",
    );
    gate.require(
        ordering_long,
        "final third components are not strictly increasing across samples (long horizon)",
    );

    let theta_low = axis_counts(&runs_long[0], 1);
    let theta_high = axis_counts(&runs_long[tables::SAMPLE_COUNT - 1], 1);
    gate.require(
        theta_low.decreases == 0,
        "second component is not non-decreasing along the low-corner run",
    );
    gate.require(
        theta_high.decreases == 0,
        "second component is not non-decreasing along the high-corner run",
    );

    let window_checks = vec![
        gate.check(&ineq(
            "window start time stays strictly below the short horizon",
            &Rational::from_integer(window_index as i64) * &h_long,
            Relation::Lt,
            t_short.clone(),
        )),
        gate.check(&ineq(
            "short horizon stays strictly below the next grid time",
            t_short.clone(),
            Relation::Lt,
            &Rational::from_integer(window_index as i64 + 1) * &h_long,
        )),
    ];

    let refinement_events: u64 = runs_short
        .iter()
        .chain(runs_long.iter())
        .map(|t| t.refinement_events)
        .sum();

    let attestations = Attestations {
        ordering_short_strict: ordering_short,
        ordering_long_strict: ordering_long,
        theta_low_start: theta_low,
        theta_high_start: theta_high,
        containment_box: [
            interval_pair(&inner_repaired.axes()[0]),
            interval_pair(&inner_repaired.axes()[1]),
            interval_pair(&inner_repaired.axes()[2]),
        ],
        runs_contained,
        global_extremes: [
            interval_pair(&global[0]),
            interval_pair(&global[1]),
            interval_pair(&global[2]),
        ],
        window_index,
        window_checks,
        refinement_events,
    };

    // ----- the four margin families -----
    let chain = |rtilde: &Rational,
                 gron: Option<&Rational>,
                 interp: Option<&Rational>,
                 z0: &Rational|
     -> (Rational, Chain) {
        let mut total = rtilde + z0;
        if let Some(g) = gron {
            total = &total + g;
        }
        if let Some(i) = interp {
            total = &total + i;
        }
        (
            total.clone(),
            Chain {
                rtilde: rat_str(rtilde),
                gronwall: gron.map(rat_str),
                interpolation: interp.map(rat_str),
                start_rounding: rat_str(z0),
                total: rat_str(&total),
            },
        )
    };

    // Time interpolation between grid points: the second component moves at
    // most (slope bound)·h/2 from the nearest grid time.
    let interp_ref = &(&q(CLAIMED_SLOPE2) * &h_long) * &half;
    let interp_cert = &(&cert_derived.f_abs[1] * &h_long) * &half;

    let mut families = Vec::new();
    let mut family = |gate: &mut Gate,
                      id: &str,
                      description: &str,
                      target: &str,
                      direction: &str,
                      distances: Vec<Rational>,
                      claimed: Rational,
                      reference: (Rational, Chain),
                      certified: (Rational, Chain),
                      z0_pair: (&Rational, &Rational)|
     -> bool {
        let min_distance = distances
            .iter()
            .min()
            .expect("at least one distance")
            .clone();
        let mut checks = Vec::new();
        checks.push(gate.check(&ineq(
            "every value clears the target on the required side",
            min_distance.clone(),
            Relation::Gt,
            Rational::zero(),
        )));
        checks.push(gate.check(&ineq(
            "measured distance meets the stated margin",
            min_distance.clone(),
            Relation::Ge,
            claimed.clone(),
        )));
        checks.push(gate.check(&ineq(
            "stated margin clears the reference deviation chain",
            claimed.clone(),
            Relation::Gt,
            reference.0.clone(),
        )));
        checks.push(gate.check(&ineq(
            "measured distance clears the certified deviation chain",
            min_distance.clone(),
            Relation::Gt,
            certified.0.clone(),
        )));
        checks.push(gate.check(&ineq(
            "reference start-rounding correction stays below the ceiling",
            z0_pair.0.clone(),
            Relation::Lt,
            q(START_ROUNDING_CEILING),
        )));
        checks.push(gate.check(&ineq(
            "certified start-rounding correction stays below the ceiling",
            z0_pair.1.clone(),
            Relation::Lt,
            q(START_ROUNDING_CEILING),
        )));
        let pass = checks.iter().all(|c| c.holds);
        families.push(MarginFamily {
            id: id.into(),
            description: description.into(),
            target: target.into(),
            direction: direction.into(),
            distances: distances.iter().map(rat_str).collect(),
            min_distance: rat_str(&min_distance),
            claimed_margin: rat_str(&claimed),
            reference_chain: reference.1,
            certified_chain: certified.1,
            checks,
        });
        pass
    };

    let alpha_short_finals: Vec<Rational> = runs_short.iter().map(|t| t.end[2].clone()).collect();
    let alpha_short_dists = edge_distances(&alpha_short_finals, &half_pi, EdgeSide::Above);
    let edge_t_short = family(
        &mut gate,
        "alpha-short",
        "final third component sits above the half-turn target at the short horizon, \
         for every sample",
        "pi/2",
        "above",
        alpha_short_dists,
        q(CLAIMED_MARGIN_ALPHA_SHORT),
        chain(&rtilde_ref_short, Some(&gron_ref_short), None, &z0_ref_short),
        chain(&rtilde_cert_short, Some(&gron_cert_short), None, &z0_cert_short),
        (&z0_ref_short, &z0_cert_short),
    );

    let alpha_long_finals: Vec<Rational> = runs_long.iter().map(|t| t.end[2].clone()).collect();
    let alpha_long_dists = edge_distances(&alpha_long_finals, &half_pi, EdgeSide::Below);
    let edge_t_long = family(
        &mut gate,
        "alpha-long",
        "final third component sits below the half-turn target at the long horizon, \
         for every sample",
        "pi/2",
        "below",
        alpha_long_dists,
        q(CLAIMED_MARGIN_ALPHA_LONG),
        chain(&rtilde_ref_long, Some(&gron_ref_long), None, &z0_ref_long),
        chain(&rtilde_cert_long, Some(&gron_cert_long), None, &z0_cert_long),
        (&z0_ref_long, &z0_cert_long),
    );

    // The two corner runs in the second component use the long-horizon grid;
    // monotonicity turns the window extremes into single grid values.
    let theta_low_value = runs_long[0].end[1].clone();
    let edge_a_low = family(
        &mut gate,
        "theta-low",
        "second component stays below the quarter-turn target along the low-corner run, \
         throughout the time window",
        "pi/4",
        "below",
        edge_distances(
            core::slice::from_ref(&theta_low_value),
            &quarter_pi,
            EdgeSide::Below,
        ),
        q(CLAIMED_MARGIN_THETA_LOW),
        chain(&rtilde_ref_long, None, Some(&interp_ref), &z0_ref_long),
        chain(&rtilde_cert_long, None, Some(&interp_cert), &z0_cert_long),
        (&z0_ref_long, &z0_cert_long),
    );

    let theta_high_value = runs_long[tables::SAMPLE_COUNT - 1]
        .state_at(window_index)
        .expect("window index captured")[1]
        .clone();
    let edge_a_high = family(
        &mut gate,
        "theta-high",
        "second component stays above the quarter-turn target along the high-corner run, \
         throughout the time window",
        "pi/4",
        "above",
        edge_distances(
            core::slice::from_ref(&theta_high_value),
            &quarter_pi,
            EdgeSide::Above,
        ),
        q(CLAIMED_MARGIN_THETA_HIGH),
        chain(&rtilde_ref_long, None, Some(&interp_ref), &z0_ref_long),
        chain(&rtilde_cert_long, None, Some(&interp_cert), &z0_cert_long),
        (&z0_ref_long, &z0_cert_long),
    );

    // The stated interpolation ceiling is itself re-verified.
    let interp_check = gate.check(&ineq(
        "interpolation term stays below the stated ceiling",
        interp_ref.clone(),
        Relation::Lt,
        q(CLAIMED_INTERP_CEILING),
    ));
    if let Some(f) = families.iter_mut().find(|f| f.id == "theta-low") {
        f.checks.push(interp_check);
    }

    let margins = MarginsSection {
        pi: PiEnclosure {
            lo: rat_str(pi.lo()),
            hi: rat_str(pi.hi()),
            width: rat_str(&pi.width()),
        },
        families,
        attestations,
    };

    // ----- two-dimensional intermediate-value conclusion -----
    let edges = vec![
        Edge {
            id: "t = short horizon".into(),
            requirement: "F > 0 across the edge".into(),
            holds: edge_t_short,
        },
        Edge {
            id: "t = long horizon".into(),
            requirement: "F < 0 across the edge".into(),
            holds: edge_t_long,
        },
        Edge {
            id: "a = low corner".into(),
            requirement: "G < 0 across the edge".into(),
            holds: edge_a_low,
        },
        Edge {
            id: "a = high corner".into(),
            requirement: "G > 0 across the edge".into(),
            holds: edge_a_high,
        },
    ];
    let conclusion = miranda_conclude(&edges);
    gate.require(
        conclusion,
        "sign conditions on the rectangle boundary are not all established",
    );
    let miranda = MirandaSection {
        rectangle: RectangleJson {
            a: [rat_str(&sample_a(0)), rat_str(&sample_a(15))],
            t: [rat_str(&t_short), rat_str(&t_long)],
        },
        f_identity: "F(a, t) = (third component at time t from start a) - pi/2".into(),
        g_identity: "G(a, t) = (second component at time t from start a) - pi/4".into(),
        edges,
        conclusion,
    };

    // ----- disclosed discrepancies -----
    notes.push(
        "the stated aggregate magnitude 16.9424 differs from the square root of the stated \
         component bounds (16.9391...); the computation uses the component bounds directly"
            .into(),
    );
    notes.push(
        "the stated slope constant 1.033 used for time interpolation is the second \
         component's bound; one statement attributes it to the third component"
            .into(),
    );
    notes.push(
        "initial states are floored onto the grid, moving the start by less than \
         sqrt(3)*R; the correction sqrt(3)*R*e^(K*t) is added to every deviation chain"
            .into(),
    );
    notes.push("a time window written with endpoint 0.3944 is treated as 0.3991".into());

    let verdict = Verdict {
        status: if gate.failures.is_empty() {
            "pass".into()
        } else {
            "fail".into()
        },
        failures: gate.failures,
    };

    Certificate {
        format_version: FORMAT_VERSION,
        created_unix: now_unix(),
        config,
        lemmas,
        tables: tables_section,
        error_bounds,
        gronwall,
        margins,
        miranda,
        notes,
        verdict,
    }
}

/// Certificate skeleton when the integrations themselves failed: everything
/// computed so far is kept, dependent sections are empty, verdict fails.
fn assemble_failure(
    config: ConfigSection,
    lemmas: Vec<Report>,
    error_bounds: ErrorBoundsSection,
    gronwall: GronwallSection,
    mut notes: Vec<String>,
    gate: Gate,
) -> Certificate {
    notes.push("integration failure: dependent sections are empty".into());
    Certificate {
        format_version: FORMAT_VERSION,
        created_unix: now_unix(),
        config,
        lemmas,
        tables: TablesSection {
            compared: false,
            matched: 0,
            total: 96,
            mismatches: Vec::new(),
            end_states_short: Vec::new(),
            end_states_long: Vec::new(),
        },
        error_bounds,
        gronwall,
        margins: MarginsSection {
            pi: PiEnclosure {
                lo: String::new(),
                hi: String::new(),
                width: String::new(),
            },
            families: Vec::new(),
            attestations: Attestations {
                ordering_short_strict: false,
                ordering_long_strict: false,
                theta_low_start: AxisCounts {
                    increases: 0,
                    decreases: 0,
                    stationary: 0,
                },
                theta_high_start: AxisCounts {
                    increases: 0,
                    decreases: 0,
                    stationary: 0,
                },
                containment_box: Default::default(),
                runs_contained: false,
                global_extremes: Default::default(),
                window_index: 0,
                window_checks: Vec::new(),
                refinement_events: 0,
            },
        },
        miranda: MirandaSection {
            rectangle: RectangleJson {
                a: [rat_str(&sample_a(0)), rat_str(&sample_a(15))],
                t: [rat_str(&horizon_short()), rat_str(&horizon_long())],
            },
            f_identity: String::new(),
            g_identity: String::new(),
            edges: Vec::new(),
            conclusion: false,
        },
        notes,
        verdict: Verdict {
            status: "fail".into(),
            failures: gate.failures,
        },
    }
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
