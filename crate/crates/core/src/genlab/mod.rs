//! Seeded instance generators, file formats and verification campaigns.

pub mod campaign;
pub mod gen;
pub mod io;
pub mod rng;

pub use campaign::{
    check_instance, run_campaign, run_campaign_with, trial_subsets, CampaignConfig, CampaignReport, CheckOptions,
    FailureRecord, Fault, Instance, SectionReport, TheoremId,
};
pub use gen::{
    gen_kframe, gen_operator, gen_parseval_kframe, operator_with_singular_values, random_kframe, random_operator,
    random_parseval_kframe, random_unit_vector, GenConfig, SubsetPolicy,
};
pub use rng::{trial_seed, SeededRng};
