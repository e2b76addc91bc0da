// COUNTSAT closed form and the deceptive s = 1 trap.
//
// ```bash
// cargo run --release --example countsat_compare
// ```

use qea::engine::StopCriteria;
use qea::harness::{compare, summary_csv};
use qea::params::ParamPreset;
use qea::problems::{countsat_value, CountSat, ProblemInstance};

pub fn run_example() -> qea::Result<()> {
    let n = 20;
    for s in [0, 1, 2, 10, 19, 20] {
        println!("f({s:2}) = {}", countsat_value(n, s));
    }
    let problems = [ProblemInstance::CountSat(CountSat::new(n as usize)?)];
    let sets = [
        ("ucqea".to_string(), ParamPreset::Untuned.vector()),
        ("mmdp-tuned".to_string(), ParamPreset::MmdpTuned.vector()),
    ];
    let rows = compare(&problems, &sets, StopCriteria::evaluations(10_000), 10, 3)?;
    print!("{}", summary_csv(&rows));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
