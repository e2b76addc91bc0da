//! 0-1 knapsack instances: eleven generator classes, the greedy ratio
//! repair operator and a plain-text instance format.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::fmt::g17;

use super::ppeaks::parse_field;
use super::{check_len, Problem};

/// Capacity fractions of the total weight used for instance sweeps.
pub const CAPACITY_PRESETS: [f64; 5] = [0.01, 0.05, 0.10, 0.20, 0.50];

const RANGE: i64 = 1000;
const SPANNER_SIZE: usize = 2;
const SPANNER_MULTIPLIER_LIMIT: i64 = 10;
const MSTR_K1: i64 = 300;
const MSTR_K2: i64 = 200;
const MSTR_D: i64 = 6;
const PCEIL_D: i64 = 3;
const CIRCLE_D: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnapsackClass {
    Uncorrelated,
    WeaklyCorrelated,
    StronglyCorrelated,
    InverseStronglyCorrelated,
    AlmostStronglyCorrelated,
    SubsetSum,
    SimilarWeights,
    Spanner,
    MultipleStronglyCorrelated,
    ProfitCeiling,
    Circle,
}

impl KnapsackClass {
    pub const ALL: [KnapsackClass; 11] = [
        KnapsackClass::Uncorrelated,
        KnapsackClass::WeaklyCorrelated,
        KnapsackClass::StronglyCorrelated,
        KnapsackClass::InverseStronglyCorrelated,
        KnapsackClass::AlmostStronglyCorrelated,
        KnapsackClass::SubsetSum,
        KnapsackClass::SimilarWeights,
        KnapsackClass::Spanner,
        KnapsackClass::MultipleStronglyCorrelated,
        KnapsackClass::ProfitCeiling,
        KnapsackClass::Circle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KnapsackClass::Uncorrelated => "uncorrelated",
            KnapsackClass::WeaklyCorrelated => "weakly-correlated",
            KnapsackClass::StronglyCorrelated => "strongly-correlated",
            KnapsackClass::InverseStronglyCorrelated => "inverse-strongly-correlated",
            KnapsackClass::AlmostStronglyCorrelated => "almost-strongly-correlated",
            KnapsackClass::SubsetSum => "subset-sum",
            KnapsackClass::SimilarWeights => "similar-weights",
            KnapsackClass::Spanner => "spanner",
            KnapsackClass::MultipleStronglyCorrelated => "multiple-strongly-correlated",
            KnapsackClass::ProfitCeiling => "profit-ceiling",
            KnapsackClass::Circle => "circle",
        }
    }

    /// Draws one (profit, weight) pair for the non-spanner classes.
    fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> (f64, f64) {
        fn w<R: Rng + ?Sized>(rng: &mut R) -> i64 {
            rng.gen_range(1..=RANGE)
        }
        match self {
            KnapsackClass::Uncorrelated => {
                let wt = w(rng);
                (w(rng) as f64, wt as f64)
            }
            KnapsackClass::WeaklyCorrelated => {
                let wt = w(rng);
                let p = rng.gen_range(wt - 100..=wt + 100).max(1);
                (p as f64, wt as f64)
            }
            KnapsackClass::StronglyCorrelated => {
                let wt = w(rng);
                ((wt + 100) as f64, wt as f64)
            }
            KnapsackClass::InverseStronglyCorrelated => {
                let p = w(rng);
                (p as f64, (p + 100) as f64)
            }
            KnapsackClass::AlmostStronglyCorrelated => {
                let wt = w(rng);
                let p = rng.gen_range(wt + 98..=wt + 102);
                (p as f64, wt as f64)
            }
            KnapsackClass::SubsetSum => {
                let wt = w(rng);
                (wt as f64, wt as f64)
            }
            KnapsackClass::SimilarWeights => {
                let wt = rng.gen_range(100_000..=100_100i64);
                (w(rng) as f64, wt as f64)
            }
            KnapsackClass::MultipleStronglyCorrelated => {
                let wt = w(rng);
                let k = if wt % MSTR_D == 0 { MSTR_K1 } else { MSTR_K2 };
                ((wt + k) as f64, wt as f64)
            }
            KnapsackClass::ProfitCeiling => {
                let wt = w(rng);
                ((PCEIL_D * (wt / PCEIL_D)) as f64, wt as f64)
            }
            KnapsackClass::Circle => {
                let wt = w(rng) as f64;
                let p = CIRCLE_D * (2000f64.powi(2) - (wt - 2000.0).powi(2)).sqrt();
                (p.round(), wt)
            }
            KnapsackClass::Spanner => unreachable!("spanner items are built from a spanner set"),
        }
    }
}

impl fmt::Display for KnapsackClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KnapsackClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KnapsackClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown knapsack generator class `{s}`")))
    }
}

/// A 0-1 knapsack instance. Feasibility is `Σ w_i x_i < C` (strict).
#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    profits: Vec<f64>,
    weights: Vec<f64>,
    capacity: f64,
    class: Option<KnapsackClass>,
    seed: Option<u64>,
    // Item indices by ascending / descending profit-weight ratio, ties by
    // index in both.
    by_ratio: Vec<usize>,
    by_ratio_desc: Vec<usize>,
}

impl KnapsackInstance {
    pub fn new(profits: Vec<f64>, weights: Vec<f64>, capacity: f64) -> Result<Self> {
        if profits.is_empty() || profits.len() != weights.len() {
            return Err(invalid("profits and weights must be non-empty and of equal length"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid("weights must be positive"));
        }
        if profits.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid("profits must be non-negative"));
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(invalid(format!("capacity {capacity} must be positive")));
        }
        let ratio = |i: usize| profits[i] / weights[i];
        let mut by_ratio: Vec<usize> = (0..profits.len()).collect();
        by_ratio.sort_by(|&a, &b| ratio(a).total_cmp(&ratio(b)).then(a.cmp(&b)));
        let mut by_ratio_desc = by_ratio.clone();
        by_ratio_desc.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));
        Ok(KnapsackInstance {
            profits,
            weights,
            capacity,
            class: None,
            seed: None,
            by_ratio,
            by_ratio_desc,
        })
    }

    /// Draws `n` items of `class` and sets `C = capacity_fraction · Σw`.
    pub fn generate<R: Rng + ?Sized>(
        class: KnapsackClass,
        n: usize,
        capacity_fraction: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("knapsack needs at least one item"));
        }
        if !(capacity_fraction > 0.0 && capacity_fraction < 1.0) {
            return Err(invalid(format!(
                "capacity fraction {capacity_fraction} outside (0, 1)"
            )));
        }
        let items: Vec<(f64, f64)> = if class == KnapsackClass::Spanner {
            // Strongly correlated spanner set, scaled down by m + 1.
            let scale = (SPANNER_MULTIPLIER_LIMIT + 1) as f64;
            let spanner: Vec<(f64, f64)> = (0..SPANNER_SIZE)
                .map(|_| {
                    let w = rng.gen_range(1..=RANGE) as f64;
                    (((w + 100.0) / scale).ceil(), (w / scale).ceil())
                })
                .collect();
            (0..n)
                .map(|_| {
                    let (p, w) = spanner[rng.gen_range(0..SPANNER_SIZE)];
                    let a = rng.gen_range(1..=SPANNER_MULTIPLIER_LIMIT) as f64;
                    (a * p, a * w)
                })
                .collect()
        } else {
            (0..n).map(|_| class.draw(rng)).collect()
        };
        let (profits, weights): (Vec<f64>, Vec<f64>) = items.into_iter().unzip();
        let capacity = capacity_fraction * weights.iter().sum::<f64>();
        let mut inst = KnapsackInstance::new(profits, weights, capacity)?;
        inst.class = Some(class);
        Ok(inst)
    }

    /// Generates with a dedicated seed recorded in the instance.
    pub fn generate_seeded(
        class: KnapsackClass,
        n: usize,
        capacity_fraction: f64,
        seed: u64,
    ) -> Result<Self> {
        let mut inst = Self::generate(
            class,
            n,
            capacity_fraction,
            &mut crate::seed::rng_from_seed(seed),
        )?;
        inst.seed = Some(seed);
        Ok(inst)
    }

    pub fn len(&self) -> usize {
        self.profits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profits.is_empty()
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn class(&self) -> Option<KnapsackClass> {
        self.class
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn weight_of(&self, bits: &[bool]) -> f64 {
        bits.iter()
            .zip(&self.weights)
            .filter(|(b, _)| **b)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn profit_of(&self, bits: &[bool]) -> f64 {
        bits.iter()
            .zip(&self.profits)
            .filter(|(b, _)| **b)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn is_feasible(&self, bits: &[bool]) -> bool {
        self.weight_of(bits) < self.capacity
    }

    /// Total profit of a feasible selection.
    pub fn knapsack_eval(&self, bits: &[bool]) -> Result<f64> {
        check_len(bits, self.len())?;
        let weight = self.weight_of(bits);
        if weight >= self.capacity {
            return Err(Error::Infeasible {
                weight,
                capacity: self.capacity,
            });
        }
        Ok(self.profit_of(bits))
    }

    /// Greedy ratio repair: while overweight, drop the selected item with
    /// the lowest profit/weight ratio (lower index first on ties); then add
    /// unselected items by decreasing ratio while they still fit.
    pub fn knapsack_repair(&self, bits: &mut [bool]) {
        let mut weight = self.weight_of(bits);
        for &i in &self.by_ratio {
            if weight < self.capacity {
                break;
            }
            if bits[i] {
                bits[i] = false;
                weight -= self.weights[i];
            }
        }
        // Recompute to shed accumulated rounding before the add pass.
        weight = self.weight_of(bits);
        for &i in &self.by_ratio_desc {
            if !bits[i] && weight + self.weights[i] < self.capacity {
                bits[i] = true;
                weight += self.weights[i];
            }
        }
    }

    /// Instance file: header `n C generator_class seed`, then
    /// `index profit weight` per item.
    pub fn to_text(&self) -> String {
        let class = self.class.map_or("custom".to_string(), |c| c.to_string());
        let seed = self.seed.map_or("-".to_string(), |s| s.to_string());
        let mut out = format!("{} {} {} {}\n", self.len(), g17(self.capacity), class, seed);
        for (i, (p, w)) in self.profits.iter().zip(&self.weights).enumerate() {
            writeln!(out, "{} {} {}", i, g17(*p), g17(*w)).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty knapsack file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("bad knapsack header `{header}`")));
        }
        let n: usize = parse_field(fields[0], "item count")?;
        let capacity: f64 = parse_field(fields[1], "capacity")?;
        let class = match fields[2] {
            "custom" => None,
            c => Some(c.parse::<KnapsackClass>()?),
        };
        let seed = match fields[3] {
            "-" => None,
            s => Some(parse_field(s, "seed")?),
        };
        let mut profits = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (expected, line) in lines.enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 || parse_field::<usize>(f[0], "item index")? != expected {
                return Err(Error::Parse(format!("bad item line `{line}`")));
            }
            profits.push(parse_field(f[1], "profit")?);
            weights.push(parse_field(f[2], "weight")?);
        }
        if profits.len() != n {
            return Err(Error::Parse(format!("expected {n} items, found {}", profits.len())));
        }
        let mut inst = KnapsackInstance::new(profits, weights, capacity)?;
        inst.class = class;
        inst.seed = seed;
        Ok(inst)
    }
}

impl Problem for KnapsackInstance {
    fn bit_count(&self) -> usize {
        self.len()
    }

    fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        self.knapsack_eval(bits)
    }

    fn repair(&self, bits: &mut [bool]) {
        self.knapsack_repair(bits)
    }

    fn needs_repair(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        let class = self.class.map_or("custom", KnapsackClass::as_str);
        format!("knapsack-{class}-n{}", self.len())
    }
}
