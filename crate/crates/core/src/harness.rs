//! Run matrices, summary statistics and CSV output.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{run, EngineConfig, RunRecord, StopCriteria};
use crate::error::{invalid, Error, Result};
use crate::fmt::g17;
use crate::params::ParamVector;
use crate::problems::{CountSat, KnapsackClass, KnapsackInstance, Mmdp, PPeaksInstance, Problem, ProblemInstance};
use crate::Sense;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsSummary {
    pub runs: usize,
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
    pub success_pct: f64,
    pub avg_evaluations: f64,
    pub avg_generations: f64,
}

/// Order statistics over per-run best objectives. A run succeeds when
/// its best reaches `optimum`.
pub fn aggregate(records: &[RunRecord], optimum: Option<f64>, sense: Sense) -> Result<StatsSummary> {
    if records.is_empty() {
        return Err(invalid("cannot summarize zero runs"));
    }
    let n = records.len() as f64;
    let mut values: Vec<f64> = records.iter().map(|r| r.best.objective).collect();
    values.sort_by(f64::total_cmp);
    let (lo, hi) = (values[0], values[values.len() - 1]);
    let (best, worst) = match sense {
        Sense::Maximize => (hi, lo),
        Sense::Minimize => (lo, hi),
    };
    let mid = values.len() / 2;
    let median = if values.len() % 2 == 0 {
        (values[mid - 1] + values[mid]) / 2.0
    } else {
        values[mid]
    };
    let mean = values.iter().sum::<f64>() / n;
    let std = if records.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let successes = match optimum {
        Some(t) => records.iter().filter(|r| sense.reaches(r.best.objective, t)).count(),
        None => 0,
    };
    Ok(StatsSummary {
        runs: records.len(),
        best,
        worst,
        mean,
        median,
        std,
        success_pct: 100.0 * successes as f64 / n,
        avg_evaluations: records.iter().map(|r| r.evaluations as f64).sum::<f64>() / n,
        avg_generations: records.iter().map(|r| r.generations as f64).sum::<f64>() / n,
    })
}

/// `runs` independent runs; run `k` uses seed `seed + k`.
pub fn run_matrix(problem: &dyn Problem, config: &EngineConfig, runs: usize, seed: u64) -> Result<Vec<RunRecord>> {
    if runs == 0 {
        return Err(invalid("runs must be at least 1"));
    }
    config.validate(problem)?;
    (0..runs as u64)
        .into_par_iter()
        .map(|k| run(problem, config, seed.wrapping_add(k)))
        .collect()
}

/// Runs one labelled parameter vector on a problem and summarizes.
pub fn evaluate_params(
    problem: &dyn Problem,
    params: &ParamVector,
    stop: StopCriteria,
    runs: usize,
    seed: u64,
) -> Result<(StatsSummary, Vec<RunRecord>)> {
    let stop = if stop.stop_at_optimum.is_none() {
        stop.with_optimum(problem.known_optimum())
    } else {
        stop
    };
    let config = params.engine_config(problem.sense(), stop)?;
    let records = run_matrix(problem, &config, runs, seed)?;
    Ok((aggregate(&records, problem.known_optimum(), problem.sense())?, records))
}

/// One line of a summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub problem: String,
    pub label: String,
    pub stats: StatsSummary,
}

pub const SUMMARY_HEADER: &str = "problem,algo-label,best,worst,average,median,std,%success,avg-NFE,avg-gen";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let s = &r.stats;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.problem,
            r.label,
            g17(s.best),
            g17(s.worst),
            g17(s.mean),
            g17(s.median),
            g17(s.std),
            g17(s.success_pct),
            g17(s.avg_evaluations),
            g17(s.avg_generations)
        )
        .unwrap();
    }
    out
}

/// `(generation, best-so-far)` rows of one run.
pub fn trace_csv(record: &RunRecord) -> String {
    let mut out = String::from("generation,best\n");
    for p in &record.trace {
        writeln!(out, "{},{}", p.generation, g17(p.best)).unwrap();
    }
    out
}

/// Every labelled parameter set on every problem, side by side.
pub fn compare(
    problems: &[ProblemInstance],
    sets: &[(String, ParamVector)],
    stop: StopCriteria,
    runs: usize,
    seed: u64,
) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for problem in problems {
        for (label, params) in sets {
            let (stats, _) = evaluate_params(problem, params, stop, runs, seed)?;
            rows.push(SummaryRow {
                problem: problem.name(),
                label: label.clone(),
                stats,
            });
        }
    }
    Ok(rows)
}

fn field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| invalid(format!("bad {what} `{s}`")))
}

/// Parses a problem selector:
///
/// * `mmdp:K`, `countsat:N`
/// * `ppeaks:P:N[:SEED]`
/// * `knapsack:CLASS:N:FRACTION[:SEED]`
/// * `file:PATH` for a knapsack or P-PEAKS instance file
///
/// Generated instances without an explicit seed use `default_seed`.
pub fn parse_problem(selector: &str, default_seed: u64) -> Result<ProblemInstance> {
    let parts: Vec<&str> = selector.split(':').collect();
    let seed_at = |i: usize| parts.get(i).map_or(Ok(default_seed), |s| field(s, "seed"));
    match parts[..] {
        ["mmdp", k] => Ok(ProblemInstance::Mmdp(Mmdp::new(field(k, "block count")?)?)),
        ["countsat", n] => Ok(ProblemInstance::CountSat(CountSat::new(field(n, "variable count")?)?)),
        ["ppeaks", p, n] | ["ppeaks", p, n, _] => Ok(ProblemInstance::PPeaks(PPeaksInstance::generate_seeded(
            field(p, "peak count")?,
            field(n, "bit count")?,
            seed_at(3)?,
        )?)),
        ["knapsack", class, n, frac] | ["knapsack", class, n, frac, _] => {
            let class: KnapsackClass = class.parse()?;
            Ok(ProblemInstance::Knapsack(KnapsackInstance::generate_seeded(
                class,
                field(n, "item count")?,
                field(frac, "capacity fraction")?,
                seed_at(4)?,
            )?))
        }
        _ => match selector.strip_prefix("file:") {
            Some(path) => load_instance(Path::new(path)),
            None => Err(invalid(format!("unrecognized problem selector `{selector}`"))),
        },
    }
}

/// Reads an instance file, telling the formats apart by header width.
pub fn load_instance(path: &Path) -> Result<ProblemInstance> {
    let text = std::fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or_default();
    match header.split_whitespace().count() {
        4 => Ok(ProblemInstance::Knapsack(KnapsackInstance::from_text(&text)?)),
        3 => Ok(ProblemInstance::PPeaks(PPeaksInstance::from_text(&text)?)),
        _ => Err(Error::Parse(format!("{}: unrecognized instance header", path.display()))),
    }
}

/// Text form of a generated instance; `None` for closed-form problems.
pub fn instance_text(problem: &ProblemInstance) -> Option<String> {
    match problem {
        ProblemInstance::Knapsack(k) => Some(k.to_text()),
        ProblemInstance::PPeaks(p) => Some(p.to_text()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{BinarySolution, TracePoint};
    use crate::params::ParamPreset;

    fn record(objective: f64, evaluations: u64) -> RunRecord {
        RunRecord {
            best: BinarySolution { bits: vec![], objective, feasible: true },
            evaluations,
            generations: evaluations / 10,
            success: false,
            trace: vec![TracePoint { generation: 0, best: objective }],
        }
    }

    #[test]
    fn single_run_summary() {
        let s = aggregate(&[record(5.0, 10)], Some(5.0), Sense::Maximize).unwrap();
        assert_eq!((s.best, s.worst, s.mean, s.median, s.std), (5.0, 5.0, 5.0, 5.0, 0.0));
        assert_eq!(s.success_pct, 100.0);
        assert!(aggregate(&[], None, Sense::Maximize).is_err());
    }

    #[test]
    fn hand_computed_summary() {
        let recs: Vec<_> = [3.0, 1.0, 4.0, 2.0].iter().map(|v| record(*v, 100)).collect();
        let s = aggregate(&recs, Some(4.0), Sense::Maximize).unwrap();
        assert_eq!((s.best, s.worst, s.median, s.mean), (4.0, 1.0, 2.5, 2.5));
        assert_eq!(s.success_pct, 25.0);
        // sample variance of {1,2,3,4} is 5/3
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let m = aggregate(&recs, Some(1.0), Sense::Minimize).unwrap();
        assert_eq!((m.best, m.worst, m.success_pct), (1.0, 4.0, 25.0));
    }

    #[test]
    fn all_at_optimum() {
        let recs: Vec<_> = (0..30).map(|_| record(6860.0, 500)).collect();
        let s = aggregate(&recs, Some(6860.0), Sense::Maximize).unwrap();
        assert_eq!((s.success_pct, s.std, s.avg_evaluations), (100.0, 0.0, 500.0));
    }

    #[test]
    fn selectors() {
        assert_eq!(parse_problem("mmdp:20", 0).unwrap().bit_count(), 120);
        assert_eq!(parse_problem("countsat:20", 0).unwrap().known_optimum(), Some(6860.0));
        let p = parse_problem("ppeaks:10:64:7", 0).unwrap();
        assert_eq!(p, parse_problem("ppeaks:10:64", 7).unwrap());
        let k = parse_problem("knapsack:strongly-correlated:50:0.5:3", 0).unwrap();
        assert_eq!(k.bit_count(), 50);
        for bad in ["mmdp", "mmdp:x", "knapsack:nope:5:0.5", "tsp:5", "ppeaks:1"] {
            assert!(parse_problem(bad, 0).is_err(), "{bad}");
        }
    }

    #[test]
    fn instance_files_load_by_header() {
        let dir = tempfile::tempdir().unwrap();
        for sel in ["knapsack:uncorrelated:20:0.2:5", "ppeaks:3:40:5"] {
            let p = parse_problem(sel, 0).unwrap();
            let path = dir.path().join("inst.txt");
            std::fs::write(&path, instance_text(&p).unwrap()).unwrap();
            let q = parse_problem(&format!("file:{}", path.display()), 0).unwrap();
            assert_eq!(p, q);
        }
        assert!(instance_text(&parse_problem("mmdp:2", 0).unwrap()).is_none());
    }

    #[test]
    fn matrix_is_order_independent() {
        let p = parse_problem("countsat:20", 0).unwrap();
        let stop = StopCriteria::evaluations(3000);
        let pv = ParamPreset::Untuned.vector();
        let (a, ra) = evaluate_params(&p, &pv, stop, 6, 42).unwrap();
        let (b, rb) = evaluate_params(&p, &pv, stop, 6, 42).unwrap();
        assert_eq!((a, ra.clone()), (b, rb));
        // run k reproduces alone with seed + k
        let config = pv.engine_config(Sense::Maximize, stop.with_optimum(Some(6860.0))).unwrap();
        assert_eq!(run(&p, &config, 45).unwrap(), ra[3]);
        assert!(ra.iter().all(|r| r.evaluations <= 3000));
    }

    #[test]
    fn csv_layout() {
        let row = SummaryRow {
            problem: "countsat-20".into(),
            label: "ucqea".into(),
            stats: aggregate(&[record(0.1, 10)], None, Sense::Maximize).unwrap(),
        };
        let csv = summary_csv(&[row]);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(SUMMARY_HEADER));
        assert_eq!(
            lines.next(),
            Some("countsat-20,ucqea,0.10000000000000001,0.10000000000000001,0.10000000000000001,0.10000000000000001,0,0,10,1")
        );
        assert_eq!(trace_csv(&record(2.0, 1)), "generation,best\n0,2\n");
    }
}
