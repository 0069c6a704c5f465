//! The machine-checkable certificate emitted by the proof pipeline.
//!
//! Every rational is serialized as an exact `"numerator/denominator"` string
//! and every comparison is stored with both sides, the relation, and the
//! achieved slack, so an external checker can re-audit each step without
//! rerunning the integrations. The document is deterministic apart from
//! `created_unix`.

use rtm_core::{CheckReport, Inequality, Rational};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

/// Exact `"num/den"` form used everywhere in the document.
pub fn rat_str(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    pub created_unix: u64,
    pub config: ConfigSection,
    pub lemmas: Vec<Report>,
    pub tables: TablesSection,
    pub error_bounds: ErrorBoundsSection,
    pub gronwall: GronwallSection,
    pub margins: MarginsSection,
    pub miranda: MirandaSection,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

/// The run configuration, hashed so downstream tooling can tie a certificate
/// to exactly one parameterization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigSection {
    pub field: String,
    pub order: u32,
    pub steps: u64,
    pub resolution: String,
    pub horizon_short: String,
    pub horizon_long: String,
    pub step_short: String,
    pub step_long: String,
    pub sample_count: usize,
    /// Symbolic initial state; the first and last components are floored
    /// onto the grid from enclosures.
    pub start: [String; 3],
    pub epsilon: String,
    pub sha256: String,
}

impl ConfigSection {
    /// Fills in the hash over every other field (serialized compactly with
    /// `sha256` empty).
    pub fn sealed(mut self) -> Self {
        self.sha256 = String::new();
        let canonical = serde_json::to_string(&self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        self.sha256 = format!("{digest:x}");
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub status: String,
    /// Structured reasons when the status is "fail"; empty on pass.
    pub failures: Vec<String>,
}

/// One rigorously checked comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub lhs: String,
    pub relation: String,
    pub rhs: String,
    pub slack: String,
    pub holds: bool,
}

impl Check {
    pub fn from_inequality(ineq: &Inequality) -> Self {
        Self {
            label: ineq.label.clone(),
            lhs: rat_str(&ineq.lhs),
            relation: ineq.relation.symbol().to_string(),
            rhs: rat_str(&ineq.rhs),
            slack: rat_str(&ineq.slack()),
            holds: ineq.holds(),
        }
    }
}

/// A titled group of checks (one verification pass).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub all_hold: bool,
}

impl Report {
    pub fn from_report(r: &CheckReport) -> Self {
        Self {
            title: r.title.clone(),
            checks: r.checks.iter().map(Check::from_inequality).collect(),
            notes: r.notes.clone(),
            all_hold: r.all_hold(),
        }
    }
}

/// End-state comparison against the embedded reference tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TablesSection {
    /// False when the configuration differs from the published one, in which
    /// case the comparison is skipped and flagged in the notes.
    pub compared: bool,
    pub matched: usize,
    pub total: usize,
    pub mismatches: Vec<String>,
    /// Computed end states, row per starting angle.
    pub end_states_short: Vec<[String; 3]>,
    pub end_states_long: Vec<[String; 3]>,
}

/// The bound constants of one family (one derivative box).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyConstants {
    pub box_label: String,
    /// Frobenius bound on the Jacobian.
    pub k0: String,
    /// Largest componentwise slope bound (one-step movement per unit time).
    pub m0: String,
    /// Componentwise bounds on the derivative of the right-hand side along
    /// trajectories.
    pub m_components: [String; 3],
    /// `√(Σ m_components²)` upper bound.
    pub magnitude: String,
    pub epsilon: String,
}

/// The global error bound for one step size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HorizonBound {
    pub step: String,
    pub total: String,
    pub truncation_term: String,
    pub rounding_term: String,
    pub growth_factor: String,
    pub hypothesis_slack: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyBounds {
    pub constants: FamilyConstants,
    pub short: HorizonBound,
    pub long: HorizonBound,
}

/// `reference` re-verifies the stated constants; `certified` is derived from
/// scratch over the repaired boxes and is what the verdict rests on.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBoundsSection {
    pub reference: FamilyBounds,
    pub certified: FamilyBounds,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GronwallFamily {
    pub k: String,
    pub short: String,
    pub long: String,
    pub checks: Vec<Check>,
}

/// Start-separation growth bounds `δ₀·e^{K·t}` for the half-spacing of the
/// sample grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GronwallSection {
    pub delta0: String,
    pub reference: GronwallFamily,
    pub certified: GronwallFamily,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiEnclosure {
    pub lo: String,
    pub hi: String,
    pub width: String,
}

/// One accumulated deviation chain: everything separating a computed grid
/// value from the true flow value it certifies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Chain {
    pub rtilde: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gronwall: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<String>,
    pub start_rounding: String,
    pub total: String,
}

/// One of the four boundary margin families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginFamily {
    pub id: String,
    pub description: String,
    pub target: String,
    pub direction: String,
    /// Rigorous lower bounds on the distance to the target, one per
    /// participating value.
    pub distances: Vec<String>,
    pub min_distance: String,
    pub claimed_margin: String,
    pub reference_chain: Chain,
    pub certified_chain: Chain,
    pub checks: Vec<Check>,
}

/// Exact orderings and containment facts backing the margin families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Attestations {
    /// Final third components strictly increase across the sample grid.
    pub ordering_short_strict: bool,
    pub ordering_long_strict: bool,
    /// Per-axis step counts for the two corner runs on the long horizon.
    pub theta_low_start: AxisCounts,
    pub theta_high_start: AxisCounts,
    /// The repaired containment box and the exact extremes over all runs.
    pub containment_box: [[String; 2]; 3],
    pub runs_contained: bool,
    pub global_extremes: [[String; 2]; 3],
    /// Last step index at or before the short horizon on the long grid.
    pub window_index: u64,
    pub window_checks: Vec<Check>,
    pub refinement_events: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisCounts {
    pub increases: u64,
    pub decreases: u64,
    pub stationary: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginsSection {
    pub pi: PiEnclosure,
    pub families: Vec<MarginFamily>,
    pub attestations: Attestations,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RectangleJson {
    pub a: [String; 2],
    pub t: [String; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub requirement: String,
    pub holds: bool,
}

/// The two-dimensional intermediate-value argument: opposite strict signs on
/// the four edges force a joint zero inside the rectangle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MirandaSection {
    pub rectangle: RectangleJson,
    pub f_identity: String,
    pub g_identity: String,
    pub edges: Vec<Edge>,
    pub conclusion: bool,
}
