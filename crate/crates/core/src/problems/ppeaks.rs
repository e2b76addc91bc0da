use std::fmt::Write as _;

use rand::Rng;

use crate::error::{invalid, Error, Result};

use super::{check_len, Problem};

/// P-PEAKS multimodal generator: fitness is the normalized Hamming
/// similarity to the nearest of `P` random peaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPeaksInstance {
    bits: usize,
    peaks: Vec<Vec<u64>>,
    seed: Option<u64>,
}

fn pack(bits: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64)];
    for (i, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
        words[i / 64] |= 1 << (i % 64);
    }
    words
}

impl PPeaksInstance {
    /// `peaks` independent uniform strings of `bits` bits.
    pub fn generate<R: Rng + ?Sized>(peaks: usize, bits: usize, rng: &mut R) -> Result<Self> {
        if peaks == 0 || bits == 0 {
            return Err(invalid("P-PEAKS needs at least one peak and one bit"));
        }
        let peaks = (0..peaks)
            .map(|_| pack(&(0..bits).map(|_| rng.gen::<bool>()).collect::<Vec<_>>()))
            .collect();
        Ok(PPeaksInstance { bits, peaks, seed: None })
    }

    /// Generates with a dedicated seed recorded in the instance.
    pub fn generate_seeded(peaks: usize, bits: usize, seed: u64) -> Result<Self> {
        let mut inst = Self::generate(peaks, bits, &mut crate::seed::rng_from_seed(seed))?;
        inst.seed = Some(seed);
        Ok(inst)
    }

    pub fn from_peaks(peaks: &[Vec<bool>]) -> Result<Self> {
        let bits = peaks.first().map(Vec::len).unwrap_or(0);
        if bits == 0 || peaks.iter().any(|p| p.len() != bits) {
            return Err(invalid("peaks must be non-empty and of equal, non-zero length"));
        }
        Ok(PPeaksInstance {
            bits,
            peaks: peaks.iter().map(|p| pack(p)).collect(),
            seed: None,
        })
    }

    pub fn peak_count(&self) -> usize {
        self.peaks.len()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn peak(&self, k: usize) -> Vec<bool> {
        (0..self.bits)
            .map(|i| self.peaks[k][i / 64] >> (i % 64) & 1 == 1)
            .collect()
    }

    /// Renders the instance file: header `P N seed`, then one row of `0`/`1`
    /// characters per peak.
    pub fn to_text(&self) -> String {
        let seed = self.seed.map_or("-".to_string(), |s| s.to_string());
        let mut out = format!("{} {} {}\n", self.peaks.len(), self.bits, seed);
        for k in 0..self.peaks.len() {
            let row: String = self.peak(k).iter().map(|b| if *b { '1' } else { '0' }).collect();
            writeln!(out, "{row}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty P-PEAKS file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("bad P-PEAKS header `{header}`")));
        }
        let p: usize = parse_field(fields[0], "peak count")?;
        let n: usize = parse_field(fields[1], "bit length")?;
        let seed = match fields[2] {
            "-" => None,
            s => Some(parse_field(s, "seed")?),
        };
        let mut peaks = Vec::with_capacity(p);
        for line in lines {
            let row = line.trim();
            if row.len() != n || !row.bytes().all(|c| c == b'0' || c == b'1') {
                return Err(Error::Parse(format!("bad peak row of length {}", row.len())));
            }
            peaks.push(row.bytes().map(|c| c == b'1').collect::<Vec<_>>());
        }
        if peaks.len() != p {
            return Err(Error::Parse(format!("expected {p} peaks, found {}", peaks.len())));
        }
        let mut inst = Self::from_peaks(&peaks)?;
        inst.seed = seed;
        Ok(inst)
    }
}

pub(crate) fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} from `{s}`")))
}

impl Problem for PPeaksInstance {
    fn bit_count(&self) -> usize {
        self.bits
    }

    fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        check_len(bits, self.bits)?;
        let x = pack(bits);
        let nearest = self
            .peaks
            .iter()
            .map(|peak| {
                peak.iter()
                    .zip(&x)
                    .map(|(a, b)| (a ^ b).count_ones() as usize)
                    .sum::<usize>()
            })
            .min()
            .expect("at least one peak");
        Ok((self.bits - nearest) as f64 / self.bits as f64)
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(1.0)
    }

    fn name(&self) -> String {
        format!("ppeaks-p{}-n{}", self.peaks.len(), self.bits)
    }
}
