// A reduced tuning campaign on MMDP and a check of the result.
//
// ```bash
// cargo run --release --example tuning_campaign
// RUST_LOG=info cargo run --release --example tuning_campaign
// ```

use qea::doe::ResponseStat;
use qea::engine::StopCriteria;
use qea::harness::evaluate_params;
use qea::params::{ParamPreset, ParamSpace, SpacePreset};
use qea::problems::{Mmdp, Problem};
use qea::tuner::{history_csv, robustness_metrics, tune, QeaEvaluator, TunerConfig};

pub fn run_example() -> qea::Result<()> {
    let _ = env_logger::builder().is_test(true).try_init();
    let problem = Mmdp::new(4)?;
    let stop = StopCriteria::evaluations(3_000).with_optimum(problem.known_optimum());
    let evaluator = QeaEvaluator::new(&problem, stop);
    let config = TunerConfig { n1: 2, n2: 1, runs: 3, stat: ResponseStat::Mean, ..Default::default() };
    let out = tune(&evaluator, &ParamSpace::preset(SpacePreset::Mmdp), &config, 99)?;
    print!("{}", history_csv(&out.history));
    let (large, small) = robustness_metrics(&out.exploration_first, &out.exploitation_first, 4.0);
    println!("rms deviation: large {large:.4}, small {small:.4}");
    println!("{}", out.pivot.to_toml());

    for (label, pv) in [("tuned", out.pivot), ("untuned", ParamPreset::Untuned.vector())] {
        let (s, _) = evaluate_params(&problem, &pv, stop, 10, 500)?;
        println!("{label:8} success {:5.1}%  avg NFE {:.0}", s.success_pct, s.avg_evaluations);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
