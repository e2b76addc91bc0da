// A small P-PEAKS landscape solved with tuned-style parameters.
//
// ```bash
// cargo run --release --example ppeaks
// ```

use qea::engine::StopCriteria;
use qea::harness::evaluate_params;
use qea::params::{ParamPreset, ParamSpace, SpacePreset};
use qea::problems::PPeaksInstance;

pub fn run_example() -> qea::Result<()> {
    let inst = PPeaksInstance::generate_seeded(4, 64, 21)?;
    // the published vector lies slightly outside its own bounds; clamp it
    let space = ParamSpace::preset(SpacePreset::PPeaks);
    let params = space.normalize(&ParamPreset::PPeaksTuned.vector());
    let (stats, _) = evaluate_params(&inst, &params, StopCriteria::evaluations(20_000), 5, 1)?;
    println!(
        "P = 4, N = 64: best {:.4}, mean {:.4}, success {}%, avg NFE {}",
        stats.best, stats.mean, stats.success_pct, stats.avg_evaluations
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
