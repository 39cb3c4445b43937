//! Drift detectors behind one streaming contract.
//!
//! Every detector consumes one real value per step and answers with a
//! [`Outcome`]. After a [`Outcome::Drift`] the caller is expected to
//! [`Detector::reset`] before feeding more data.

mod adwin;
mod ddm;
mod eddm;
mod hddm;
mod kswin;
mod novel;
mod page_hinkley;
pub mod window;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use adwin::Adwin;
pub use ddm::Ddm;
pub use eddm::Eddm;
pub use hddm::{HddmA, HddmW};
pub use kswin::Kswin;
pub use novel::{classify_window, Minps, MySd, TanDd, Trend, FLAT_BAND_DEG};
pub use page_hinkley::PageHinkley;
pub use window::{DriftWindow, DD_WINDOW};

/// Per-sample detector signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Normal,
    Warning,
    Drift,
}

/// Streaming drift detector.
pub trait Detector: Send {
    /// Feeds one value. Non-finite values are rejected and leave the state
    /// untouched.
    fn update(&mut self, x: f64) -> Result<Outcome>;

    /// Restores the freshly constructed state.
    fn reset(&mut self);

    /// Number of updates after construction or reset that only collect
    /// data and always answer [`Outcome::Normal`].
    fn warmup_len(&self) -> usize;

    /// Updates consumed since construction or the last reset.
    fn seen(&self) -> usize;

    /// Whether the next update only fills the detector's buffers.
    fn is_filling(&self) -> bool {
        self.seen() < self.warmup_len()
    }

    fn kind(&self) -> DetectorKind;
}

pub(crate) fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput(x))
    }
}

/// The ten detectors available to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    TanDd,
    Minps,
    MySd,
    Adwin,
    Ddm,
    Eddm,
    Kswin,
    PageHinkley,
    HddmA,
    HddmW,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 10] = [
        DetectorKind::TanDd,
        DetectorKind::Minps,
        DetectorKind::MySd,
        DetectorKind::Adwin,
        DetectorKind::Ddm,
        DetectorKind::Eddm,
        DetectorKind::Kswin,
        DetectorKind::PageHinkley,
        DetectorKind::HddmA,
        DetectorKind::HddmW,
    ];

    pub fn label(self) -> &'static str {
        match self {
            DetectorKind::TanDd => "myTanDD",
            DetectorKind::Minps => "MINPS",
            DetectorKind::MySd => "mySD",
            DetectorKind::Adwin => "ADWIN",
            DetectorKind::Ddm => "DDM",
            DetectorKind::Eddm => "EDDM",
            DetectorKind::Kswin => "KSWIN",
            DetectorKind::PageHinkley => "PH",
            DetectorKind::HddmA => "HDDM_A",
            DetectorKind::HddmW => "HDDM_W",
        }
    }

    /// True for the only detector that draws random numbers.
    pub fn is_stochastic(self) -> bool {
        self == DetectorKind::Kswin
    }

    /// Builds a detector with default parameters. `seed` is used by KSWIN
    /// only.
    pub fn build(self, seed: u64) -> Box<dyn Detector> {
        match self {
            DetectorKind::TanDd => Box::new(TanDd::new()),
            DetectorKind::Minps => Box::new(Minps::new()),
            DetectorKind::MySd => Box::new(MySd::new()),
            DetectorKind::Adwin => Box::new(Adwin::default()),
            DetectorKind::Ddm => Box::new(Ddm::default()),
            DetectorKind::Eddm => Box::new(Eddm::default()),
            DetectorKind::Kswin => Box::new(Kswin::with_seed(seed)),
            DetectorKind::PageHinkley => Box::new(PageHinkley::default()),
            DetectorKind::HddmA => Box::new(HddmA::default()),
            DetectorKind::HddmW => Box::new(HddmW::default()),
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfiguration(format!("unknown detector {s:?}")))
    }
}
