// Parallel run matrix with summary and per-run convergence traces.
//
// ```bash
// cargo run --release --example run_matrix_csv
// ```

use std::fs;

use qea::engine::{StopCriteria, TraceMode};
use qea::harness::{aggregate, run_matrix, summary_csv, trace_csv, SummaryRow};
use qea::params::ParamPreset;
use qea::problems::{CountSat, Problem};
use qea::Sense;

pub fn run_example() -> qea::Result<()> {
    let problem = CountSat::new(30)?;
    let stop = StopCriteria::evaluations(5_000).with_optimum(problem.known_optimum());
    let mut config = ParamPreset::MmdpTuned.vector().engine_config(Sense::Maximize, stop)?;
    config.trace = TraceMode::Full;
    let records = run_matrix(&problem, &config, 8, 2024)?;

    let dir = std::env::temp_dir().join("qea-run-matrix-example");
    fs::create_dir_all(&dir)?;
    let stats = aggregate(&records, problem.known_optimum(), problem.sense())?;
    let csv = summary_csv(&[SummaryRow { problem: problem.name(), label: "tcqea".into(), stats }]);
    fs::write(dir.join("summary.csv"), &csv)?;
    for (k, r) in records.iter().enumerate() {
        fs::write(dir.join(format!("trace-{k}.csv")), trace_csv(r))?;
    }
    print!("{csv}");
    println!("traces in {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
