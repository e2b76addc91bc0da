// Rotating a single Q-bit towards a target basis state and observing it.
//
// ```bash
// cargo run --example qbit_rotation
// ```

use qea::qbit::{Qbit, QbitString, RotationCase, RotationPolicy};
use qea::seed::rng_from_seed;
use qea::Sense;

pub fn run_example() -> qea::Result<()> {
    let mut rng = rng_from_seed(1);
    let policy = RotationPolicy::from_pi_multiples([0.0, 0.0, 0.05, 0.0, 0.05, 0.0, 0.0, 0.0], Sense::Maximize)?;

    // x = 0, attractor bit = 1, attractor fitter: the θ3 case pulls towards |1>.
    let case = RotationCase::lookup(false, true, true);
    println!("case index {} target |{}>", case.index, u8::from(case.target_one));

    let mut q = Qbit::EQUAL;
    for step in 0..=10 {
        if step % 2 == 0 {
            println!("step {step:2}: P(0) = {:.4}", q.p_zero());
        }
        let d = policy.delta_theta(false, true, true, &q, &mut rng);
        q = q.rotate(d);
    }
    assert!(q.p_zero() < 0.5);

    let s = QbitString::init_random(16, &mut rng)?;
    let bits: String = s.observe(&mut rng).iter().map(|b| if *b { '1' } else { '0' }).collect();
    println!("observed {bits}, {} of 16 Q-bits still undecided", s.diversity(0.05)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
