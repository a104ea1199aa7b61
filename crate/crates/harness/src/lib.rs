//! Seeded verification campaigns over the `nilorbit` library: configuration,
//! execution, JSON/CSV reports and bit-exact replay of individual trials.

pub mod campaign;
pub mod config;
pub mod replay;
pub mod report;

pub use campaign::run_campaign;
pub use config::{CampaignConfig, Check, ConfigFile, Format};
pub use report::{Report, Status, TrialRecord, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("stale report: written by {report}, this is {tool}")]
    Stale { report: String, tool: String },
    #[error("no such trial: {0}")]
    UnknownTrial(String),
}
