//! Proof driver: runs the certified integrations, derives every bound, and
//! writes a machine-checkable JSON certificate plus CSV views of the
//! computed sequences.

pub mod certificate;
pub mod csvio;
pub mod pipeline;
pub mod tables;

pub use certificate::Certificate;
pub use pipeline::{run_full_proof, ProofConfig};
