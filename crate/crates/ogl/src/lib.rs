//! Campaign runner, lemma catalog, fixtures and report types behind the
//! `ogl` command-line interface.

pub mod campaigns;
pub mod catalog;
pub mod fixtures;
pub mod report;

pub use campaigns::{run_campaign, CampaignParams, DEFAULT_SEED, DEFAULT_WITNESS_BUDGET};
pub use report::{TrialRecord, VerificationReport};
