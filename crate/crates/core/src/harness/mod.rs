//! Randomised and exact verification of the maximum and extreme-value
//! theorems.

pub mod berge;
pub mod campaign;
pub mod evt;
pub mod gen;
pub mod maxthm;
pub mod report;

pub use berge::{berge_classical, gen_berge, BergeInstance};
pub use campaign::{fuzz_campaign, parse_suites, CampaignReport, Suite};
pub use evt::{
    delta_condition_d_probe, evt_diagnose, gen_evt_closure, gen_evt_quantale, regression_counterexamples, sierpinski_instance,
    verify_evt_closure, verify_evt_quantale,
};
pub use gen::{default_quantales, trial_rng, GeneratorConfig};
pub use maxthm::{gen_max_instance, max_trial, verify_max_theorem, TheoremInstance, Variant};
pub use report::{Outcome, Secondary, SuiteSummary, VerificationReport};
