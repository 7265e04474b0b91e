//! Evaluation codes on the tower: one-point and family codes, duality via
//! the differential `dw / (1 - z)`, self-dual rescaling, transitivity and
//! minimum distance.

mod code;
mod distance;
mod eta;
mod plan;
mod transitive;

pub use code::{goppa_code, FamilyParams, LinearCode};
pub use distance::{
    distance_strategies, min_distance, min_distance_with, DistanceStrategy, MinDistance, DEFAULT_BUDGET,
};
pub use eta::{
    dual_via_eta, eta_form, family_code, family_code_with, family_divisors, residue_sums, selfdual_scale, EtaForm,
};
pub use plan::{plan_transitive_code, Recipe};
pub use transitive::{certify_transitive, TransitivityCertificate};
