//! Quantum-inspired evolutionary algorithm (QEA) for binary optimization,
//! together with a two-stage orthogonal-array parameter tuner and the
//! benchmark families used to exercise it (MMDP, COUNTSAT, P-PEAKS and
//! eleven classes of 0-1 knapsack instances).
//!
//! The crate is organised bottom-up:
//!
//! * [`qbit`]: amplitude pairs, observation and the rotation gate.
//! * [`engine`]: the grouped-population QEA loop.
//! * [`problems`]: objective functions, generators, knapsack repair.
//! * [`doe`]: orthogonal arrays and main-effects analysis.
//! * [`tuner`]: the exploration/exploitation tuning heuristic.
//! * [`harness`]: run matrices, statistics and CSV output.

pub mod doe;
pub mod engine;
pub mod error;
pub mod fmt;
pub mod harness;
pub mod params;
pub mod problems;
pub mod qbit;
pub mod seed;
pub mod tuner;

pub use error::{Error, Result};

/// Direction of optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// Strict comparison: `a` is better than `b`. Ties are never better.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Maximize => a > b,
            Sense::Minimize => a < b,
        }
    }

    /// `true` when `value` is at least as good as `target`, allowing a
    /// relative slack of 1e-9 for non-integral objectives.
    pub fn reaches(self, value: f64, target: f64) -> bool {
        let slack = 1e-9 * target.abs().max(1.0);
        match self {
            Sense::Maximize => value >= target - slack,
            Sense::Minimize => value <= target + slack,
        }
    }

    /// The worst representable objective for this sense.
    pub fn worst(self) -> f64 {
        match self {
            Sense::Maximize => f64::NEG_INFINITY,
            Sense::Minimize => f64::INFINITY,
        }
    }
}
