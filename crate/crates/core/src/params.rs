//! Tunable QEA parameters: bounds, vectors, presets and the parameter file.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{EngineConfig, InitMode, MigrationMode, StopCriteria, TraceMode};
use crate::error::{invalid, Error, Result};
use crate::qbit::RotationPolicy;
use crate::Sense;

/// Number of tuned parameters: eight angles, population, groups, migration.
pub const NP: usize = 11;

pub const POPULATION: usize = 8;
pub const GROUPS: usize = 9;
pub const MIGRATION: usize = 10;

pub const PARAM_NAMES: [&str; NP] = [
    "theta1",
    "theta2",
    "theta3",
    "theta4",
    "theta5",
    "theta6",
    "theta7",
    "theta8",
    "population",
    "groups",
    "migration",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Real,
    Integer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    pub lower: f64,
    pub upper: f64,
    pub unit: String,
}

impl ParamSpec {
    pub fn new(name: &str, kind: ParamKind, lower: f64, upper: f64, unit: &str) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(invalid(format!("{name}: bounds [{lower}, {upper}] must satisfy LL < UL")));
        }
        Ok(ParamSpec {
            name: name.to_string(),
            kind,
            lower,
            upper,
            unit: unit.to_string(),
        })
    }

    /// Clamps to the bounds, then rounds half-up for integer parameters.
    pub fn normalize(&self, v: f64) -> f64 {
        let v = v.clamp(self.lower, self.upper);
        match self.kind {
            ParamKind::Real => v,
            ParamKind::Integer => (v + 0.5).floor().clamp(self.lower.ceil(), self.upper.floor()),
        }
    }

    /// Number of distinct values the parameter can take, if finite.
    pub fn distinct_values(&self) -> Option<u64> {
        match self.kind {
            ParamKind::Real => None,
            ParamKind::Integer => Some((self.upper.floor() - self.lower.ceil()) as u64 + 1),
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower && v <= self.upper && (self.kind == ParamKind::Real || v.fract() == 0.0)
    }
}

/// Bounds for all eleven parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    pub specs: Vec<ParamSpec>,
}

/// Named bound presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacePreset {
    /// MMDP and COUNTSAT bounds.
    Mmdp,
    Knapsack,
    PPeaks,
}

impl FromStr for SpacePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mmdp" | "countsat" => Ok(SpacePreset::Mmdp),
            "knapsack" => Ok(SpacePreset::Knapsack),
            "ppeaks" => Ok(SpacePreset::PPeaks),
            _ => Err(invalid(format!("unknown parameter space `{s}`"))),
        }
    }
}

impl ParamSpace {
    /// `theta_max` bounds θ1..θ8 except θ3/θ5, which use `theta35_max`.
    pub fn build(theta_max: f64, theta35_max: f64, pop: (f64, f64), groups: (f64, f64), mig: (f64, f64)) -> Result<Self> {
        let mut specs = Vec::with_capacity(NP);
        for (k, name) in PARAM_NAMES[..8].iter().enumerate() {
            let ul = if k == 2 || k == 4 { theta35_max } else { theta_max };
            specs.push(ParamSpec::new(name, ParamKind::Real, 0.0, ul, "pi")?);
        }
        specs.push(ParamSpec::new("population", ParamKind::Integer, pop.0, pop.1, "individuals")?);
        specs.push(ParamSpec::new("groups", ParamKind::Integer, groups.0, groups.1, "groups")?);
        specs.push(ParamSpec::new("migration", ParamKind::Integer, mig.0, mig.1, "generations")?);
        Ok(ParamSpace { specs })
    }

    pub fn preset(p: SpacePreset) -> Self {
        match p {
            SpacePreset::Mmdp | SpacePreset::PPeaks => {
                Self::build(0.05, 0.5, (5.0, 200.0), (1.0, 20.0), (1.0, 500.0))
            }
            SpacePreset::Knapsack => Self::build(0.001, 0.05, (5.0, 100.0), (1.0, 10.0), (1.0, 200.0)),
        }
        .expect("preset bounds are valid")
    }

    pub fn normalize(&self, pv: &ParamVector) -> ParamVector {
        let mut values = pv.values;
        for (v, spec) in values.iter_mut().zip(&self.specs) {
            *v = spec.normalize(*v);
        }
        // population must be a multiple of the group count
        let groups = values[GROUPS].max(1.0);
        let mut pop = (values[POPULATION] / groups).ceil() * groups;
        if pop > self.specs[POPULATION].upper {
            pop = (self.specs[POPULATION].upper / groups).floor() * groups;
        }
        values[POPULATION] = pop.max(groups);
        ParamVector { values, init_mode: pv.init_mode }
    }

    pub fn contains(&self, pv: &ParamVector) -> bool {
        pv.values.iter().zip(&self.specs).all(|(v, s)| s.contains(*v))
    }
}

/// Concrete values for the eleven parameters. Angles are multiples of π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub values: [f64; NP],
    #[serde(default)]
    pub init_mode: InitMode,
}

/// Named parameter vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamPreset {
    Untuned,
    MmdpTuned,
    KnapsackTuned,
    PPeaksTuned,
}

impl ParamPreset {
    pub const ALL: [ParamPreset; 4] = [
        ParamPreset::Untuned,
        ParamPreset::MmdpTuned,
        ParamPreset::KnapsackTuned,
        ParamPreset::PPeaksTuned,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamPreset::Untuned => "untuned",
            ParamPreset::MmdpTuned => "mmdp-tuned",
            ParamPreset::KnapsackTuned => "knapsack-tuned",
            ParamPreset::PPeaksTuned => "ppeaks-tuned",
        }
    }

    pub fn vector(self) -> ParamVector {
        let (theta, pop, groups, mig) = match self {
            ParamPreset::Untuned => ([0.0, 0.0, 0.01, 0.0, 0.01, 0.0, 0.0, 0.0], 50.0, 10.0, 100.0),
            ParamPreset::MmdpTuned => (
                [0.000147, 0.0282, 0.205, 0.0485, 0.002, 0.0205, 0.035, 0.033],
                28.0,
                4.0,
                6.0,
            ),
            ParamPreset::KnapsackTuned => (
                [0.00035, 0.00026, 0.01423, 0.0003, 0.01405, 0.00070, 0.00067, 0.00088],
                80.0,
                10.0,
                197.0,
            ),
            ParamPreset::PPeaksTuned => (
                [0.0184, 0.0, 0.169, 0.0784, 0.0768, 0.0, 0.0163, 0.0818],
                132.0,
                4.0,
                125.0,
            ),
        };
        ParamVector::new(theta, pop, groups, mig)
    }
}

impl FromStr for ParamPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamPreset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown parameter preset `{s}`")))
    }
}

impl fmt::Display for ParamPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

// Flat key-value form used by the parameter file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    theta1: f64,
    theta2: f64,
    theta3: f64,
    theta4: f64,
    theta5: f64,
    theta6: f64,
    theta7: f64,
    theta8: f64,
    population: u64,
    groups: u64,
    migration: u64,
    #[serde(default)]
    init_mode: InitMode,
}

impl ParamVector {
    pub fn new(theta_pi: [f64; 8], population: f64, groups: f64, migration: f64) -> Self {
        let mut values = [0.0; NP];
        values[..8].copy_from_slice(&theta_pi);
        values[POPULATION] = population;
        values[GROUPS] = groups;
        values[MIGRATION] = migration;
        ParamVector { values, init_mode: InitMode::Equal }
    }

    pub fn theta_pi(&self) -> [f64; 8] {
        self.values[..8].try_into().unwrap()
    }

    pub fn population(&self) -> usize {
        self.values[POPULATION].round() as usize
    }

    pub fn groups(&self) -> usize {
        self.values[GROUPS].round() as usize
    }

    pub fn migration(&self) -> u64 {
        self.values[MIGRATION].round() as u64
    }

    pub fn with_init_mode(mut self, mode: InitMode) -> Self {
        self.init_mode = mode;
        self
    }

    /// Engine configuration for a problem of the given sense. The
    /// population is raised to a multiple of the group count.
    pub fn engine_config(&self, sense: Sense, stop: StopCriteria) -> Result<EngineConfig> {
        if self.groups() == 0 || self.migration() == 0 {
            return Err(invalid("group count and migration period must be at least 1"));
        }
        Ok(EngineConfig {
            population_size: self.population(),
            group_count: self.groups(),
            global_migration_period: self.migration(),
            rotation: RotationPolicy::from_pi_multiples(self.theta_pi(), sense)?,
            init_mode: self.init_mode,
            migration: MigrationMode::Grouped,
            stop,
            trace: TraceMode::Subsampled,
        }
        .normalized())
    }

    pub fn to_toml(&self) -> String {
        let t = self.theta_pi();
        let file = ParamFile {
            theta1: t[0],
            theta2: t[1],
            theta3: t[2],
            theta4: t[3],
            theta5: t[4],
            theta6: t[5],
            theta7: t[6],
            theta8: t[7],
            population: self.population() as u64,
            groups: self.groups() as u64,
            migration: self.migration(),
            init_mode: self.init_mode,
        };
        toml::to_string(&file).expect("flat table serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let f: ParamFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let theta = [f.theta1, f.theta2, f.theta3, f.theta4, f.theta5, f.theta6, f.theta7, f.theta8];
        Ok(ParamVector::new(theta, f.population as f64, f.groups as f64, f.migration as f64)
            .with_init_mode(f.init_mode))
    }
}
