// Generating knapsack instances, repairing selections and checking a
// small instance against exhaustive search.
//
// ```bash
// cargo run --release --example knapsack_instances
// ```

use qea::engine::{run, StopCriteria};
use qea::params::ParamPreset;
use qea::problems::{KnapsackClass, KnapsackInstance, Problem};

fn brute_force(k: &KnapsackInstance) -> f64 {
    let n = k.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            k.knapsack_eval(&bits).ok()
        })
        .fold(0.0, f64::max)
}

pub fn run_example() -> qea::Result<()> {
    for class in KnapsackClass::ALL {
        let k = KnapsackInstance::generate_seeded(class, 200, 0.5, 11)?;
        let mut all = vec![true; k.len()];
        k.knapsack_repair(&mut all);
        println!(
            "{:<28} C = {:>9.1}  greedy repair of all-ones: profit {:.1}",
            class.as_str(),
            k.capacity(),
            k.profit_of(&all)
        );
    }

    let k = KnapsackInstance::generate_seeded(KnapsackClass::StronglyCorrelated, 14, 0.5, 5)?;
    let optimum = brute_force(&k);
    let stop = StopCriteria::evaluations(20_000).with_optimum(Some(optimum));
    let config = ParamPreset::KnapsackTuned.vector().engine_config(k.sense(), stop)?;
    let r = run(&k, &config, 1)?;
    println!("n = 14: exhaustive optimum {optimum}, QEA {} after {} evaluations", r.best.objective, r.evaluations);
    print!("{}", k.to_text().lines().take(3).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
