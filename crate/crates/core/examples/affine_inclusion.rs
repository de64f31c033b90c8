// Soft inclusion: the chance of being kept grows linearly with the score.
//
// ```bash
// cargo run --example affine_inclusion
// ```

use tts_core::analytics::affine_dominance_check;
use tts_core::mechanism::{affine_inclusion_probability, expected_utility, hard_threshold_include};
use tts_core::DEFAULT_THRESHOLD;

pub fn run_example() -> tts_core::Result<()> {
    let (offset, slope) = (0.2, 4.0);
    println!("{:>7} {:>6} {:>7} {:>8} {:>8}", "score", "hard", "p", "clamped", "utility");
    for score in [-0.3, -0.05, 0.0, 0.06, 0.1, 0.2, 0.25] {
        let a = affine_inclusion_probability(score, offset, slope)?;
        println!(
            "{score:>7} {:>6} {:>7.3} {:>8} {:>8.3}",
            hard_threshold_include(score, DEFAULT_THRESHOLD)?,
            a.probability,
            a.clamped,
            expected_utility(a.probability, 1.0, 0.1, true)?
        );
    }
    // Truthful reporting dominates when v·b·α·γ·η exceeds the effort cost.
    for cost in [0.05, 0.2, 0.5] {
        println!("cost {cost}: truthful dominates = {}", affine_dominance_check(1.0, slope, 0.9, 0.15, 0.7, cost));
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
