use crate::error::{invalid, Result};

use super::{check_len, Problem};

/// Deceptive bipolar subfunction indexed by the unitation of a 6-bit block.
pub const MMDP_SUBFUNCTION: [f64; 7] = [1.0, 0.0, 0.360384, 0.640576, 0.360384, 0.0, 1.0];

/// Massively multimodal deceptive problem with `blocks` six-bit blocks.
/// Optimum is `blocks`, reached by any string whose blocks are all-zero
/// or all-one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mmdp {
    blocks: usize,
}

impl Mmdp {
    pub fn new(blocks: usize) -> Result<Self> {
        if blocks == 0 {
            return Err(invalid("MMDP needs at least one block"));
        }
        Ok(Mmdp { blocks })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }
}

pub fn mmdp_eval(bits: &[bool]) -> Result<f64> {
    if bits.len() % 6 != 0 {
        return Err(invalid(format!(
            "MMDP string length {} is not a multiple of 6",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(6)
        .map(|block| MMDP_SUBFUNCTION[block.iter().filter(|b| **b).count()])
        .sum())
}

impl Problem for Mmdp {
    fn bit_count(&self) -> usize {
        6 * self.blocks
    }

    fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        check_len(bits, self.bit_count())?;
        mmdp_eval(bits)
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(self.blocks as f64)
    }

    fn name(&self) -> String {
        format!("mmdp-k{}", self.blocks)
    }
}
