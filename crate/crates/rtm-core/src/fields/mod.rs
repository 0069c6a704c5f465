//! Concrete vector fields and the name registry used by callers that select
//! a field at runtime.

pub mod cmc;
pub mod logistic;

pub use cmc::{cmc_f_enclose, CmcClaims, CmcField, DerivedBounds};
pub use logistic::LogisticField;

use crate::field::VectorField;

static CMC: CmcField = CmcField;
static LOGISTIC: LogisticField = LogisticField;

/// Looks up a field by its registry key.
pub fn field_by_name(name: &str) -> Option<&'static dyn VectorField> {
    match name {
        "cmc-s4" => Some(&CMC),
        "logistic-demo" => Some(&LOGISTIC),
        _ => None,
    }
}

/// All registry keys, for help text and error messages.
pub fn field_names() -> &'static [&'static str] {
    &["cmc-s4", "logistic-demo"]
}
