// Built-in orthogonal arrays and a main-effects analysis.
//
// ```bash
// cargo run --example orthogonal_arrays
// ```

use qea::doe::{assemble_pva, main_effects, ExperimentResponse, OrthogonalArray};
use qea::Sense;

pub fn run_example() -> qea::Result<()> {
    for oa in [OrthogonalArray::l27(), OrthogonalArray::l50()] {
        print!("{}x{} ", oa.rows(), oa.columns());
        print!("{}", oa.validate_strength2().render());
    }

    // response = 2·level(col 0) − level(col 3), other columns inert
    let oa = OrthogonalArray::l27();
    let responses: Vec<ExperimentResponse> = (0..oa.rows())
        .map(|r| {
            let y = 2.0 * oa.level(r, 0) as f64 - oa.level(r, 3) as f64;
            ExperimentResponse { row: r, response: y, per_run: vec![y] }
        })
        .collect();
    let fx = main_effects(&oa, &responses, Sense::Maximize)?;
    println!("column 0 level means {:?}", fx.level_means[0]);
    println!("column 3 level means {:?}", fx.level_means[3]);

    let mut values: Vec<Option<Vec<f64>>> = vec![None; oa.columns()];
    values[0] = Some(vec![10.0, 20.0, 30.0]);
    values[3] = Some(vec![0.1, 0.2, 0.3]);
    println!("assembled vector {:?}", assemble_pva(&fx, &values)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
