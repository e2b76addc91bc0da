//! The grouped-population QEA loop.
//!
//! Individuals are split into `M` static groups of `N / M`. Each
//! generation every individual rotates its Q-bits towards an attractor
//! (its group best, or the global best on migration generations), is
//! observed, repaired if the problem needs it, and evaluated. Individual,
//! group and global bests are kept elitist.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::problems::Problem;
use crate::qbit::{QbitString, RotationPolicy};
use crate::seed::{rng_from_seed, Rng as StreamRng};
use crate::Sense;

/// Generation after which subsampled traces keep only every 10th point.
const TRACE_FULL_PREFIX: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    #[default]
    Equal,
    Random,
}

/// How attractors are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MigrationMode {
    /// Group best every generation, global best when `t % GM == 0`.
    #[default]
    Grouped,
    /// Every individual is attracted to its own best.
    NoMigration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TraceMode {
    Off,
    /// Every generation up to 10⁴, then every 10th.
    #[default]
    Subsampled,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct StopCriteria {
    pub max_evaluations: Option<u64>,
    pub max_generations: Option<u64>,
    pub stop_at_optimum: Option<f64>,
}

impl StopCriteria {
    pub fn evaluations(max: u64) -> Self {
        StopCriteria {
            max_evaluations: Some(max),
            ..Default::default()
        }
    }

    pub fn generations(max: u64) -> Self {
        StopCriteria {
            max_generations: Some(max),
            ..Default::default()
        }
    }

    pub fn with_optimum(mut self, target: Option<f64>) -> Self {
        self.stop_at_optimum = target;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub population_size: usize,
    pub group_count: usize,
    pub global_migration_period: u64,
    pub rotation: RotationPolicy,
    pub init_mode: InitMode,
    pub migration: MigrationMode,
    pub stop: StopCriteria,
    pub trace: TraceMode,
}

impl EngineConfig {
    /// Raises the population to the next multiple of the group count.
    pub fn normalized(mut self) -> Self {
        if self.group_count > 0 {
            self.population_size = self.population_size.max(1).div_ceil(self.group_count) * self.group_count;
        }
        self
    }

    pub fn group_size(&self) -> usize {
        self.population_size / self.group_count
    }

    pub fn validate(&self, problem: &dyn Problem) -> Result<()> {
        if self.population_size == 0 || self.group_count == 0 {
            return Err(invalid("population size and group count must be at least 1"));
        }
        if self.population_size % self.group_count != 0 {
            return Err(invalid(format!(
                "group count {} does not divide population size {}",
                self.group_count, self.population_size
            )));
        }
        if self.global_migration_period == 0 {
            return Err(invalid("global migration period must be at least 1"));
        }
        if self.stop.max_evaluations.is_none() && self.stop.max_generations.is_none() {
            return Err(invalid("either an evaluation or a generation limit is required"));
        }
        if let Some(max) = self.stop.max_evaluations {
            if max < self.population_size as u64 {
                return Err(invalid(format!(
                    "evaluation budget {max} is smaller than one generation ({})",
                    self.population_size
                )));
            }
        }
        if problem.bit_count() == 0 {
            return Err(invalid("problem has no bits"));
        }
        if self.rotation.sense != problem.sense() {
            return Err(invalid("rotation policy sense differs from the problem's sense"));
        }
        Ok(())
    }
}

/// An observed (and repaired) bit string with its objective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySolution {
    pub bits: Vec<bool>,
    pub objective: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub qbits: QbitString,
    /// Most recent observation.
    pub observed: BinarySolution,
    /// Individual best so far.
    pub best: BinarySolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    pub individuals: Vec<Individual>,
    pub group_bests: Vec<BinarySolution>,
    pub global_best: BinarySolution,
    pub generation: u64,
    pub evaluations: u64,
    group_size: usize,
    sense: Sense,
}

fn observe_solution<R: Rng + ?Sized>(
    q: &QbitString,
    problem: &dyn Problem,
    rng: &mut R,
) -> Result<BinarySolution> {
    let mut bits = q.observe(rng);
    if problem.needs_repair() {
        problem.repair(&mut bits);
    }
    let objective = problem.evaluate(&bits)?;
    Ok(BinarySolution {
        bits,
        objective,
        feasible: true,
    })
}

fn best_of<'a>(sense: Sense, it: impl Iterator<Item = &'a BinarySolution>) -> &'a BinarySolution {
    it.reduce(|acc, s| if sense.better(s.objective, acc.objective) { s } else { acc })
        .expect("non-empty population")
}

impl PopulationState {
    /// Initialization, first observation and evaluation, best bookkeeping.
    pub fn initialize<R: Rng + ?Sized>(
        problem: &dyn Problem,
        config: &EngineConfig,
        rng: &mut R,
    ) -> Result<Self> {
        config.validate(problem)?;
        let n = problem.bit_count();
        let sense = problem.sense();
        let mut individuals = Vec::with_capacity(config.population_size);
        for _ in 0..config.population_size {
            let qbits = match config.init_mode {
                InitMode::Equal => QbitString::init_equal(n)?,
                InitMode::Random => QbitString::init_random(n, rng)?,
            };
            let observed = observe_solution(&qbits, problem, rng)?;
            individuals.push(Individual {
                qbits,
                best: observed.clone(),
                observed,
            });
        }
        let group_size = config.group_size();
        let group_bests = individuals
            .chunks(group_size)
            .map(|g| best_of(sense, g.iter().map(|ind| &ind.best)).clone())
            .collect();
        let global_best = best_of(sense, individuals.iter().map(|ind| &ind.best)).clone();
        Ok(PopulationState {
            evaluations: individuals.len() as u64,
            individuals,
            group_bests,
            global_best,
            generation: 0,
            group_size,
            sense,
        })
    }

    pub fn group_of(&self, i: usize) -> usize {
        i / self.group_size
    }

    /// The attractor for individual `i` in the generation about to run
    /// (`generation + 1`), read from the previous generation's bests.
    pub fn select_attractor(&self, i: usize, config: &EngineConfig) -> &BinarySolution {
        let t = self.generation + 1;
        match config.migration {
            MigrationMode::NoMigration => &self.individuals[i].best,
            MigrationMode::Grouped if t % config.global_migration_period == 0 => &self.global_best,
            MigrationMode::Grouped => &self.group_bests[self.group_of(i)],
        }
    }

    /// One generation: rotate, observe, repair, evaluate, update bests.
    pub fn step_generation<R: Rng + ?Sized>(
        &mut self,
        problem: &dyn Problem,
        config: &EngineConfig,
        rng: &mut R,
    ) -> Result<()> {
        let sense = self.sense;
        let policy = &config.rotation;
        let mut next = Vec::with_capacity(self.individuals.len());
        for i in 0..self.individuals.len() {
            let attractor = self.select_attractor(i, config);
            let ind = &self.individuals[i];
            let better = sense.better(attractor.objective, ind.observed.objective);
            let mut qbits = ind.qbits.clone();
            for ((q, &x), &b) in qbits
                .qbits_mut()
                .iter_mut()
                .zip(&ind.observed.bits)
                .zip(&attractor.bits)
            {
                let d = policy.delta_theta(x, b, better, q, rng);
                if d != 0.0 {
                    *q = q.rotate(d);
                }
            }
            let observed = observe_solution(&qbits, problem, rng)?;
            next.push((qbits, observed));
        }
        for (ind, (qbits, observed)) in self.individuals.iter_mut().zip(next) {
            if sense.better(observed.objective, ind.best.objective) {
                ind.best = observed.clone();
            }
            ind.qbits = qbits;
            ind.observed = observed;
        }
        for (j, group) in self.individuals.chunks(self.group_size).enumerate() {
            let candidate = best_of(sense, group.iter().map(|ind| &ind.best));
            if sense.better(candidate.objective, self.group_bests[j].objective) {
                self.group_bests[j] = candidate.clone();
            }
        }
        let candidate = best_of(sense, self.individuals.iter().map(|ind| &ind.best));
        if sense.better(candidate.objective, self.global_best.objective) {
            self.global_best = candidate.clone();
        }
        self.generation += 1;
        self.evaluations += self.individuals.len() as u64;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub generation: u64,
    pub best: f64,
}

/// Outcome of one engine run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub best: BinarySolution,
    pub evaluations: u64,
    pub generations: u64,
    pub success: bool,
    pub trace: Vec<TracePoint>,
}

fn should_stop(state: &PopulationState, config: &EngineConfig, sense: Sense) -> bool {
    if let Some(target) = config.stop.stop_at_optimum {
        if sense.reaches(state.global_best.objective, target) {
            return true;
        }
    }
    if let Some(max) = config.stop.max_generations {
        if state.generation >= max {
            return true;
        }
    }
    if let Some(max) = config.stop.max_evaluations {
        if state.evaluations + state.individuals.len() as u64 > max {
            return true;
        }
    }
    false
}

/// Runs the algorithm to its stop criteria with a stream seeded by `seed`.
pub fn run(problem: &dyn Problem, config: &EngineConfig, seed: u64) -> Result<RunRecord> {
    run_with_rng(problem, config, &mut rng_from_seed(seed))
}

pub fn run_with_rng(
    problem: &dyn Problem,
    config: &EngineConfig,
    rng: &mut StreamRng,
) -> Result<RunRecord> {
    let sense = problem.sense();
    let mut state = PopulationState::initialize(problem, config, rng)?;
    let mut trace = Vec::new();
    let mut record = |state: &PopulationState, force: bool| {
        let g = state.generation;
        let keep = match config.trace {
            TraceMode::Off => false,
            TraceMode::Full => true,
            TraceMode::Subsampled => force || g <= TRACE_FULL_PREFIX || g % 10 == 0,
        };
        if keep && trace.last().map_or(true, |p: &TracePoint| p.generation != g) {
            trace.push(TracePoint {
                generation: g,
                best: state.global_best.objective,
            });
        }
    };
    record(&state, false);
    while !should_stop(&state, config, sense) {
        state.step_generation(problem, config, rng)?;
        record(&state, false);
    }
    record(&state, true);
    let success = config
        .stop
        .stop_at_optimum
        .is_some_and(|t| sense.reaches(state.global_best.objective, t));
    Ok(RunRecord {
        best: state.global_best,
        evaluations: state.evaluations,
        generations: state.generation,
        success,
        trace,
    })
}
