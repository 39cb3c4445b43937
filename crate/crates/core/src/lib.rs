pub mod data;
pub mod detect;
pub mod error;
pub mod experiments;
pub mod harness;
pub mod learn;
pub mod metrics;
