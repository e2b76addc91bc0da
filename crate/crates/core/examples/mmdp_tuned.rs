// Published tuned parameters against the canonical setting on MMDP.
//
// ```bash
// cargo run --release --example mmdp_tuned
// ```

use qea::engine::StopCriteria;
use qea::harness::{compare, summary_csv};
use qea::params::ParamPreset;
use qea::problems::{Mmdp, ProblemInstance};

pub fn run_example() -> qea::Result<()> {
    let problems = [ProblemInstance::Mmdp(Mmdp::new(10)?)];
    let sets = [
        ("ucqea".to_string(), ParamPreset::Untuned.vector()),
        ("tcqea".to_string(), ParamPreset::MmdpTuned.vector()),
    ];
    let rows = compare(&problems, &sets, StopCriteria::evaluations(10_000), 5, 7)?;
    print!("{}", summary_csv(&rows));
    assert!(rows[1].stats.mean >= rows[0].stats.mean);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
