//! Badge-behavior analytics toolkit.
//!
//! Pipeline: ingest action/badge event streams, compute per-user activity
//! profiles (consistency, intensity, weekly rate), cluster users into Low /
//! Medium / High activity groups with a product-scale distance, measure
//! activity curves centered on badge awards, track group flows across badge
//! lifecycle segments, and train a gradient-boosted-tree classifier that
//! predicts post-badge activity decline. A seeded synthetic generator
//! provides ground truth for end-to-end checks.

pub mod cluster;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod stats;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    ActionClass, ActionEvent, ActionType, BadgeAward, BadgeSpec, GroupLabel, Tier, TimeWindow,
    UserId, UserRecord,
};
