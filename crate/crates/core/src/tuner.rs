//! Two-stage orthogonal-array parameter tuning.
//!
//! Exploration searches the full bounds with an `NL1`-level array (L50 by
//! default); exploitation then searches shrinking neighbourhoods of the
//! incumbent (`PIVOT`) with an `NL2`-level array (L27). Each iteration runs
//! one experiment batch, assembles the main-effects vector (PVA), takes the
//! best raw row (PVB) and applies an elitist update.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::doe::{assemble_pva, main_effects, ExperimentResponse, OrthogonalArray, ResponseStat};
use crate::engine::{run, InitMode, StopCriteria, TraceMode};
use crate::error::{invalid, Result};
use crate::fmt::g17;
use crate::params::{ParamSpace, ParamSpec, ParamVector, NP, PARAM_NAMES};
use crate::problems::Problem;
use crate::seed::{derive, rng_from_seed};
use crate::Sense;

/// Concrete level values, one list per parameter.
pub type Levels = Vec<Vec<f64>>;

const REDRAW_ATTEMPTS: usize = 64;

// Seed-stream tags.
const STREAM_LEVELS: u64 = 0;
const STREAM_ROWS: u64 = 1;
const STREAM_PVA: u64 = 2;
const STREAM_START: u64 = 3;

/// Maps a parameter vector and seed to one measured objective.
pub trait Evaluator: Sync {
    fn sense(&self) -> Sense;
    fn evaluate(&self, pv: &ParamVector, seed: u64) -> Result<f64>;
}

/// Runs the QEA on a problem; the response is the run's best objective.
pub struct QeaEvaluator<'a> {
    pub problem: &'a dyn Problem,
    pub stop: StopCriteria,
}

impl<'a> QeaEvaluator<'a> {
    pub fn new(problem: &'a dyn Problem, stop: StopCriteria) -> Self {
        QeaEvaluator { problem, stop }
    }
}

impl Evaluator for QeaEvaluator<'_> {
    fn sense(&self) -> Sense {
        self.problem.sense()
    }

    fn evaluate(&self, pv: &ParamVector, seed: u64) -> Result<f64> {
        let mut config = pv.engine_config(self.problem.sense(), self.stop)?;
        config.trace = TraceMode::Off;
        Ok(run(self.problem, &config, seed)?.best.objective)
    }
}

fn uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    if hi > lo {
        rng.gen_range(lo..=hi)
    } else {
        lo
    }
}

// Draws `count` normalized values in [lo, hi], redrawing values already
// present. Collapsed intervals yield repeats of the bound.
fn draw_into<R: Rng + ?Sized>(
    spec: &ParamSpec,
    lo: f64,
    hi: f64,
    count: usize,
    out: &mut Vec<f64>,
    rng: &mut R,
) {
    for _ in 0..count {
        let mut v = spec.normalize(uniform(lo, hi, rng));
        for _ in 0..REDRAW_ATTEMPTS {
            if hi <= lo || !out.contains(&v) {
                break;
            }
            v = spec.normalize(uniform(lo, hi, rng));
        }
        out.push(v);
    }
}

fn warn_if_narrow(spec: &ParamSpec, nl: usize) {
    if spec.distinct_values().is_some_and(|d| d < nl as u64) {
        log::warn!("{}: range holds fewer than {nl} distinct values, levels repeat", spec.name);
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn check_odd(nl: usize) -> Result<()> {
    if nl < 3 || nl % 2 == 0 {
        return Err(invalid(format!("level count {nl} must be odd and at least 3")));
    }
    Ok(())
}

/// `nl` sorted values per parameter drawn uniformly over the full bounds.
pub fn explore_levels_initial<R: Rng + ?Sized>(space: &ParamSpace, nl: usize, rng: &mut R) -> Result<Levels> {
    if nl < 2 {
        return Err(invalid("at least two levels are required"));
    }
    Ok(space
        .specs
        .iter()
        .map(|spec| {
            warn_if_narrow(spec, nl);
            let mut v = Vec::with_capacity(nl);
            draw_into(spec, spec.lower, spec.upper, nl, &mut v, rng);
            sorted(v)
        })
        .collect())
}

/// The pivot plus `(nl-1)/2` draws in `[LL, pivot]` and as many in
/// `[pivot, UL]`.
pub fn explore_levels_around_pivot<R: Rng + ?Sized>(
    pivot: &ParamVector,
    space: &ParamSpace,
    nl: usize,
    rng: &mut R,
) -> Result<Levels> {
    check_odd(nl)?;
    check_within(pivot, space)?;
    let half = (nl - 1) / 2;
    Ok(space
        .specs
        .iter()
        .zip(pivot.values)
        .map(|(spec, p)| {
            warn_if_narrow(spec, nl);
            let mut v = vec![p];
            draw_into(spec, spec.lower, p, half, &mut v, rng);
            draw_into(spec, p, spec.upper, half, &mut v, rng);
            sorted(v)
        })
        .collect())
}

fn check_within(pivot: &ParamVector, space: &ParamSpace) -> Result<()> {
    for (j, (v, s)) in pivot.values.iter().zip(&space.specs).enumerate() {
        if !(*v >= s.lower && *v <= s.upper) {
            return Err(invalid(format!("pivot {} = {v} outside [{}, {}]", PARAM_NAMES[j], s.lower, s.upper)));
        }
    }
    Ok(())
}

/// Neighbourhood `[p - r(p - LL), p + r(UL - p)]` for radius factor `r`.
pub fn neighbourhood(spec: &ParamSpec, p: f64, radius: f64) -> (f64, f64) {
    (p - radius * (p - spec.lower), p + radius * (spec.upper - p))
}

fn neighbourhood_levels<R: Rng + ?Sized>(spec: &ParamSpec, p: f64, nl: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    let (lo, hi) = neighbourhood(spec, p, radius);
    let half = (nl - 1) / 2;
    let mut v = vec![p];
    draw_into(spec, lo, p, half, &mut v, rng);
    draw_into(spec, p, hi, half, &mut v, rng);
    sorted(v)
}

/// The pivot plus draws within a tenth of the distance to each bound.
pub fn exploit_levels_initial<R: Rng + ?Sized>(
    pivot: &ParamVector,
    space: &ParamSpace,
    nl: usize,
    rng: &mut R,
) -> Result<Levels> {
    check_odd(nl)?;
    check_within(pivot, space)?;
    Ok(space
        .specs
        .iter()
        .zip(pivot.values)
        .map(|(spec, p)| neighbourhood_levels(spec, p, nl, 0.1, rng))
        .collect())
}

/// Levels for exploitation iteration `i` (1-based). After an improvement
/// a parameter whose value moved gets both pivots plus `nl-2` draws
/// between them; otherwise it gets a neighbourhood of radius `0.1/i`.
pub fn exploit_levels_next<R: Rng + ?Sized>(
    pivot: &ParamVector,
    pivot_prev: &ParamVector,
    improved: bool,
    i: usize,
    space: &ParamSpace,
    nl: usize,
    rng: &mut R,
) -> Result<Levels> {
    check_odd(nl)?;
    if i == 0 {
        return Err(invalid("iteration index starts at 1"));
    }
    check_within(pivot, space)?;
    let radius = 0.1 / i as f64;
    Ok(space
        .specs
        .iter()
        .enumerate()
        .map(|(j, spec)| {
            let (p, q) = (pivot.values[j], pivot_prev.values[j]);
            if improved && p != q {
                let (lo, hi) = (p.min(q), p.max(q));
                let mut v = vec![p, q];
                for _ in 0..nl - 2 {
                    let mut x = spec.normalize(uniform(lo, hi, rng));
                    for _ in 0..REDRAW_ATTEMPTS {
                        if x > lo && x < hi && !v.contains(&x) {
                            break;
                        }
                        x = spec.normalize(uniform(lo, hi, rng));
                    }
                    v.push(x);
                }
                sorted(v)
            } else {
                neighbourhood_levels(spec, p, nl, radius, rng)
            }
        })
        .collect())
}

/// Assignment of parameters to array columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnMap {
    pub params: [usize; NP],
    /// Two-level column driving the initialization mode, if any.
    pub init_mode: Option<usize>,
}

impl ColumnMap {
    /// The first `NP` columns with `nl` levels, in order. With
    /// `assign_init_mode`, the first unused two-level column drives the
    /// initialization mode; otherwise leftover columns are dummies.
    pub fn auto(oa: &OrthogonalArray, nl: usize, assign_init_mode: bool) -> Result<Self> {
        let cols: Vec<usize> = (0..oa.columns()).filter(|j| oa.levels()[*j] == nl).take(NP).collect();
        let params: [usize; NP] = cols.try_into().map_err(|_| {
            invalid(format!("array has fewer than {NP} columns with {nl} levels"))
        })?;
        let init_mode = if assign_init_mode {
            Some(
                (0..oa.columns())
                    .find(|j| oa.levels()[*j] == 2 && !params.contains(j))
                    .ok_or_else(|| invalid("array has no free two-level column"))?,
            )
        } else {
            None
        };
        Ok(ColumnMap { params, init_mode })
    }

    fn check(&self, oa: &OrthogonalArray, levels: &Levels) -> Result<()> {
        if levels.len() != NP {
            return Err(invalid(format!("{} level lists for {NP} parameters", levels.len())));
        }
        let mut used = vec![false; oa.columns()];
        let all = self.params.iter().copied().chain(self.init_mode);
        for (k, col) in all.enumerate() {
            if col >= oa.columns() || used[col] {
                return Err(invalid(format!("column {col} is out of range or assigned twice")));
            }
            used[col] = true;
            let want = if k < NP { levels[k].len() } else { 2 };
            if oa.levels()[col] != want {
                return Err(invalid(format!(
                    "column {col} has {} levels, its factor has {want}",
                    oa.levels()[col]
                )));
            }
        }
        Ok(())
    }

    fn vector(&self, oa: &OrthogonalArray, levels: &Levels, row: usize) -> ParamVector {
        let mut values = [0.0; NP];
        for (p, v) in values.iter_mut().enumerate() {
            *v = levels[p][oa.level(row, self.params[p])];
        }
        let init_mode = match self.init_mode.map(|c| oa.level(row, c)) {
            Some(1) => InitMode::Random,
            _ => InitMode::Equal,
        };
        ParamVector { values, init_mode }
    }
}

/// Identifies one experiment batch within a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchId {
    pub seed: u64,
    pub stage: u64,
    pub iteration: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchResult {
    pub responses: Vec<ExperimentResponse>,
    pub vectors: Vec<ParamVector>,
    pub best_row: usize,
    pub pvb: ParamVector,
    pub ofv_pvb: f64,
}

fn measure<E: Evaluator + ?Sized>(
    evaluator: &E,
    pv: &ParamVector,
    runs: usize,
    stat: ResponseStat,
    seeds: impl Fn(usize) -> u64 + Sync,
) -> Result<f64> {
    let per_run = (0..runs)
        .into_par_iter()
        .map(|r| evaluator.evaluate(pv, seeds(r)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ExperimentResponse::from_runs(0, per_run, stat, evaluator.sense())?.response)
}

/// Executes every array row `runs` times. Cell seeds depend only on
/// `(seed, stage, iteration, row, run)`, so results are schedule-free.
#[allow(clippy::too_many_arguments)]
pub fn run_experiment_batch<E: Evaluator + ?Sized>(
    evaluator: &E,
    oa: &OrthogonalArray,
    levels: &Levels,
    map: &ColumnMap,
    space: &ParamSpace,
    runs: usize,
    stat: ResponseStat,
    id: BatchId,
) -> Result<BatchResult> {
    if runs == 0 {
        return Err(invalid("runs per experiment must be at least 1"));
    }
    map.check(oa, levels)?;
    let vectors: Vec<ParamVector> = (0..oa.rows())
        .map(|r| space.normalize(&map.vector(oa, levels, r)))
        .collect();
    let cells = (0..oa.rows() * runs)
        .into_par_iter()
        .map(|cell| {
            let (row, run) = (cell / runs, cell % runs);
            let seed = derive(id.seed, &[id.stage, id.iteration, STREAM_ROWS, row as u64, run as u64]);
            evaluator.evaluate(&vectors[row], seed)
        })
        .collect::<Result<Vec<f64>>>()?;
    let sense = evaluator.sense();
    let responses = cells
        .chunks(runs)
        .enumerate()
        .map(|(row, c)| ExperimentResponse::from_runs(row, c.to_vec(), stat, sense))
        .collect::<Result<Vec<_>>>()?;
    let best_row = (1..responses.len()).fold(0, |b, r| {
        if sense.better(responses[r].response, responses[b].response) {
            r
        } else {
            b
        }
    });
    Ok(BatchResult {
        pvb: vectors[best_row],
        ofv_pvb: responses[best_row].response,
        best_row,
        responses,
        vectors,
    })
}

/// Main-effects vector of a finished batch.
pub fn analyse_batch(
    oa: &OrthogonalArray,
    levels: &Levels,
    map: &ColumnMap,
    space: &ParamSpace,
    batch: &BatchResult,
    sense: Sense,
) -> Result<ParamVector> {
    let effects = main_effects(oa, &batch.responses, sense)?;
    let mut column_values: Vec<Option<Vec<f64>>> = vec![None; oa.columns()];
    for (p, &col) in map.params.iter().enumerate() {
        column_values[col] = Some(levels[p].clone());
    }
    if let Some(col) = map.init_mode {
        column_values[col] = Some(vec![0.0, 1.0]);
    }
    // assemble_pva reports used columns in column order
    let picked = assemble_pva(&effects, &column_values)?;
    let used: Vec<usize> = (0..oa.columns()).filter(|c| column_values[*c].is_some()).collect();
    let value_at = |col: usize| picked[used.binary_search(&col).unwrap()];
    let mut values = [0.0; NP];
    for (p, v) in values.iter_mut().enumerate() {
        *v = value_at(map.params[p]);
    }
    let init_mode = match map.init_mode.map(value_at) {
        Some(x) if x == 1.0 => InitMode::Random,
        _ => InitMode::Equal,
    };
    Ok(space.normalize(&ParamVector { values, init_mode }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Exploration,
    Exploitation,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Exploration => "exploration",
            Stage::Exploitation => "exploitation",
        }
    }

    fn id(self) -> u64 {
        match self {
            Stage::Exploration => 1,
            Stage::Exploitation => 2,
        }
    }
}

/// Which vector the elitist update kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotSource {
    Pvb,
    Pva,
    Kept,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryRecord {
    pub stage: Stage,
    pub iteration: usize,
    pub pivot: ParamVector,
    pub ofv_pivot: f64,
    pub ofv_pva: f64,
    pub ofv_pvb: f64,
    pub source: PivotSource,
    pub stagnation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningState {
    pub pivot: ParamVector,
    pub ofv_pivot: f64,
    pub stage: Stage,
    pub iteration: usize,
    /// Consecutive iterations without a pivot improvement.
    pub stagnation: usize,
    pub levels: Levels,
    pub history: Vec<HistoryRecord>,
    pub sense: Sense,
}

impl TuningState {
    /// A state with no incumbent; the first update always accepts.
    pub fn new(start: ParamVector, sense: Sense) -> Self {
        TuningState {
            pivot: start,
            ofv_pivot: sense.worst(),
            stage: Stage::Exploration,
            iteration: 0,
            stagnation: 0,
            levels: Vec::new(),
            history: Vec::new(),
            sense,
        }
    }
}

/// Elitist update: PVB wins if strictly better than both PVA and the
/// pivot, else PVA wins if strictly better than the pivot, else the
/// pivot stays and the stagnation counter grows.
pub fn pivot_update(state: &mut TuningState, ofv_pva: f64, pva: ParamVector, ofv_pvb: f64, pvb: ParamVector) -> PivotSource {
    let s = state.sense;
    let source = if s.better(ofv_pvb, ofv_pva) && s.better(ofv_pvb, state.ofv_pivot) {
        state.pivot = pvb;
        state.ofv_pivot = ofv_pvb;
        PivotSource::Pvb
    } else if s.better(ofv_pva, state.ofv_pivot) {
        state.pivot = pva;
        state.ofv_pivot = ofv_pva;
        PivotSource::Pva
    } else {
        PivotSource::Kept
    };
    if source == PivotSource::Kept {
        state.stagnation += 1;
    } else {
        state.stagnation = 0;
    }
    source
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunerConfig {
    pub n1: usize,
    pub n2: usize,
    pub nwi1: usize,
    pub nwi2: usize,
    pub nl1: usize,
    pub nl2: usize,
    pub runs: usize,
    pub stat: ResponseStat,
    pub explore_oa: OrthogonalArray,
    pub exploit_oa: OrthogonalArray,
    pub assign_init_mode: bool,
}

impl Default for TunerConfig {
    fn default() -> Self {
        TunerConfig {
            n1: 3,
            n2: 3,
            nwi1: 2,
            nwi2: 2,
            nl1: 5,
            nl2: 3,
            runs: 30,
            stat: ResponseStat::Best,
            explore_oa: OrthogonalArray::l50(),
            exploit_oa: OrthogonalArray::l27(),
            assign_init_mode: false,
        }
    }
}

impl TunerConfig {
    pub fn validate(&self) -> Result<()> {
        check_odd(self.nl1)?;
        check_odd(self.nl2)?;
        if self.n1 == 0 || self.n2 == 0 || self.nwi1 == 0 || self.nwi2 == 0 || self.runs == 0 {
            return Err(invalid("iteration limits, stagnation limits and runs must be at least 1"));
        }
        ColumnMap::auto(&self.explore_oa, self.nl1, self.assign_init_mode)?;
        ColumnMap::auto(&self.exploit_oa, self.nl2, false)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningOutcome {
    pub pivot: ParamVector,
    pub ofv_pivot: f64,
    pub history: Vec<HistoryRecord>,
    /// Row responses of the first batch of each stage.
    pub exploration_first: Vec<f64>,
    pub exploitation_first: Vec<f64>,
}

struct Campaign<'a, E: Evaluator + ?Sized> {
    evaluator: &'a E,
    space: &'a ParamSpace,
    config: &'a TunerConfig,
    seed: u64,
}

impl<E: Evaluator + ?Sized> Campaign<'_, E> {
    fn level_rng(&self, stage: Stage, i: usize) -> crate::seed::Rng {
        rng_from_seed(derive(self.seed, &[stage.id(), i as u64, STREAM_LEVELS]))
    }

    // One iteration at the state's stage: batch, analysis, update.
    fn iterate(&self, state: &mut TuningState, levels: Levels) -> Result<Vec<f64>> {
        let stage = state.stage;
        let i = state.iteration;
        let (oa, map) = match stage {
            Stage::Exploration => (
                &self.config.explore_oa,
                ColumnMap::auto(&self.config.explore_oa, self.config.nl1, self.config.assign_init_mode)?,
            ),
            Stage::Exploitation => (
                &self.config.exploit_oa,
                ColumnMap::auto(&self.config.exploit_oa, self.config.nl2, false)?,
            ),
        };
        let id = BatchId { seed: self.seed, stage: stage.id(), iteration: i as u64 };
        let batch = run_experiment_batch(
            self.evaluator,
            oa,
            &levels,
            &map,
            self.space,
            self.config.runs,
            self.config.stat,
            id,
        )?;
        let pva = analyse_batch(oa, &levels, &map, self.space, &batch, state.sense)?;
        let ofv_pva = measure(self.evaluator, &pva, self.config.runs, self.config.stat, |r| {
            derive(self.seed, &[stage.id(), i as u64, STREAM_PVA, r as u64])
        })?;
        let source = pivot_update(state, ofv_pva, pva, batch.ofv_pvb, batch.pvb);
        state.levels = levels;
        let record = HistoryRecord {
            stage,
            iteration: i,
            pivot: state.pivot,
            ofv_pivot: state.ofv_pivot,
            ofv_pva,
            ofv_pvb: batch.ofv_pvb,
            source,
            stagnation: state.stagnation,
        };
        log::info!(
            "{} {}: pivot {} (pva {}, pvb {}, kept {:?})",
            stage.as_str(),
            i,
            g17(state.ofv_pivot),
            g17(ofv_pva),
            g17(batch.ofv_pvb),
            source
        );
        state.history.push(record);
        Ok(batch.responses.iter().map(|r| r.response).collect())
    }
}

/// Full campaign from scratch.
pub fn tune<E: Evaluator + ?Sized>(
    evaluator: &E,
    space: &ParamSpace,
    config: &TunerConfig,
    seed: u64,
) -> Result<TuningOutcome> {
    tune_from(evaluator, space, config, seed, None)
}

/// Full campaign. With `start`, exploration begins around that vector
/// (after measuring it) instead of drawing levels over the full bounds.
pub fn tune_from<E: Evaluator + ?Sized>(
    evaluator: &E,
    space: &ParamSpace,
    config: &TunerConfig,
    seed: u64,
    start: Option<ParamVector>,
) -> Result<TuningOutcome> {
    config.validate()?;
    let c = Campaign { evaluator, space, config, seed };
    let sense = evaluator.sense();
    let mut state = TuningState::new(
        start.map(|p| space.normalize(&p)).unwrap_or_else(|| space.normalize(&ParamVector::new([0.0; 8], 0.0, 0.0, 0.0))),
        sense,
    );
    if start.is_some() {
        state.ofv_pivot = measure(evaluator, &state.pivot, config.runs, config.stat, |r| {
            derive(seed, &[0, 0, STREAM_START, r as u64])
        })?;
    }

    state.iteration = 1;
    let levels = match start {
        None => explore_levels_initial(space, config.nl1, &mut c.level_rng(Stage::Exploration, 1))?,
        Some(_) => explore_levels_around_pivot(&state.pivot, space, config.nl1, &mut c.level_rng(Stage::Exploration, 1))?,
    };
    let exploration_first = c.iterate(&mut state, levels)?;
    while state.iteration < config.n1 && state.stagnation < config.nwi1 {
        state.iteration += 1;
        let mut rng = c.level_rng(Stage::Exploration, state.iteration);
        let levels = explore_levels_around_pivot(&state.pivot, space, config.nl1, &mut rng)?;
        c.iterate(&mut state, levels)?;
    }

    state.stage = Stage::Exploitation;
    state.iteration = 1;
    state.stagnation = 0;
    let mut prev = state.pivot;
    let levels = exploit_levels_initial(&state.pivot, space, config.nl2, &mut c.level_rng(Stage::Exploitation, 1))?;
    let exploitation_first = c.iterate(&mut state, levels)?;
    let mut improved = state.history.last().is_some_and(|h| h.source != PivotSource::Kept);
    while state.iteration < config.n2 && state.stagnation < config.nwi2 {
        state.iteration += 1;
        let mut rng = c.level_rng(Stage::Exploitation, state.iteration);
        let levels = exploit_levels_next(&state.pivot, &prev, improved, state.iteration, space, config.nl2, &mut rng)?;
        prev = state.pivot;
        c.iterate(&mut state, levels)?;
        improved = state.history.last().is_some_and(|h| h.source != PivotSource::Kept);
    }

    Ok(TuningOutcome {
        pivot: state.pivot,
        ofv_pivot: state.ofv_pivot,
        history: state.history,
        exploration_first,
        exploitation_first,
    })
}

/// Root-mean-square deviation of `responses` from `reference`.
pub fn rms_deviation(responses: &[f64], reference: f64) -> f64 {
    if responses.is_empty() {
        return f64::NAN;
    }
    (responses.iter().map(|r| (r - reference).powi(2)).sum::<f64>() / responses.len() as f64).sqrt()
}

/// Deviation from the reference under large (first exploration batch)
/// and small (first exploitation batch) parameter variation.
pub fn robustness_metrics(exploration_first: &[f64], exploitation_first: &[f64], reference: f64) -> (f64, f64) {
    (
        rms_deviation(exploration_first, reference),
        rms_deviation(exploitation_first, reference),
    )
}

pub const HISTORY_HEADER: &str = "stage,iteration,theta1,theta2,theta3,theta4,theta5,theta6,theta7,theta8,population,groups,migration,init_mode,ofv_pivot,ofv_pva,ofv_pvb,source,stagnation";

/// History as CSV; angles are multiples of π.
pub fn history_csv(history: &[HistoryRecord]) -> String {
    let mut out = String::from(HISTORY_HEADER);
    out.push('\n');
    for h in history {
        let values: Vec<String> = h.pivot.values.iter().map(|v| g17(*v)).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            h.stage.as_str(),
            h.iteration,
            values.join(","),
            match h.pivot.init_mode {
                InitMode::Equal => "equal",
                InitMode::Random => "random",
            },
            g17(h.ofv_pivot),
            g17(h.ofv_pva),
            g17(h.ofv_pvb),
            match h.source {
                PivotSource::Pvb => "pvb",
                PivotSource::Pva => "pva",
                PivotSource::Kept => "kept",
            },
            h.stagnation
        )
        .unwrap();
    }
    out
}

/// History as one JSON object per line.
pub fn history_jsonl(history: &[HistoryRecord]) -> String {
    history
        .iter()
        .map(|h| serde_json::to_string(h).expect("history serializes") + "\n")
        .collect()
}
