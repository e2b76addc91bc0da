//! Benchmark objective functions and instance generators.

mod countsat;
mod knapsack;
mod mmdp;
mod ppeaks;

pub use countsat::{countsat_value, CountSat};
pub use knapsack::{KnapsackClass, KnapsackInstance, CAPACITY_PRESETS};
pub use mmdp::{mmdp_eval, Mmdp, MMDP_SUBFUNCTION};
pub use ppeaks::PPeaksInstance;

use crate::error::Result;
use crate::Sense;

/// A binary optimization problem as seen by the engine.
pub trait Problem: Send + Sync {
    fn bit_count(&self) -> usize;

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    /// Objective value of a (repaired, if applicable) bit string.
    fn evaluate(&self, bits: &[bool]) -> Result<f64>;

    /// Projects `bits` onto the feasible region in place. The default
    /// problem has no constraints.
    fn repair(&self, _bits: &mut [bool]) {}

    fn needs_repair(&self) -> bool {
        false
    }

    fn known_optimum(&self) -> Option<f64> {
        None
    }

    /// Short label used in reports.
    fn name(&self) -> String;
}

/// Any of the shipped benchmark families.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemInstance {
    Mmdp(Mmdp),
    CountSat(CountSat),
    PPeaks(PPeaksInstance),
    Knapsack(KnapsackInstance),
}

impl ProblemInstance {
    fn inner(&self) -> &dyn Problem {
        match self {
            ProblemInstance::Mmdp(p) => p,
            ProblemInstance::CountSat(p) => p,
            ProblemInstance::PPeaks(p) => p,
            ProblemInstance::Knapsack(p) => p,
        }
    }
}

impl Problem for ProblemInstance {
    fn bit_count(&self) -> usize {
        self.inner().bit_count()
    }
    fn sense(&self) -> Sense {
        self.inner().sense()
    }
    fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        self.inner().evaluate(bits)
    }
    fn repair(&self, bits: &mut [bool]) {
        self.inner().repair(bits)
    }
    fn needs_repair(&self) -> bool {
        self.inner().needs_repair()
    }
    fn known_optimum(&self) -> Option<f64> {
        self.inner().known_optimum()
    }
    fn name(&self) -> String {
        self.inner().name()
    }
}

pub(crate) fn check_len(bits: &[bool], n: usize) -> Result<()> {
    if bits.len() != n {
        return Err(crate::error::invalid(format!(
            "bit string has length {}, problem expects {n}",
            bits.len()
        )));
    }
    Ok(())
}
