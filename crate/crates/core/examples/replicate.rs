// Monte Carlo replications of a five-source truthful world, next to the
// closed-form expected score.
//
// ```bash
// cargo run --release --example replicate
// ```

use tts_core::simulator::run_replications;
use tts_core::{validate_config, WorldConfig, DEFAULT_THRESHOLD};

pub fn run_example() -> tts_core::Result<()> {
    let config = WorldConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/truthful_world.json"))?;
    let check = validate_config(&config);
    println!("valid: {}  peer margin: {:.4}", check.is_valid(), check.margin);

    let result = run_replications(&config, 2000, DEFAULT_THRESHOLD)?;
    println!("{:<10} {:>8} {:>8} {:>8} {:>7} {:>8}", "cell", "mean", "se", "analytic", "incl", "utility");
    for c in &result.cells {
        println!(
            "{:<10} {:>8.4} {:>8.4} {:>8.4} {:>7.3} {:>8.3}",
            c.cell,
            c.mean,
            c.se.unwrap_or(f64::NAN),
            c.analytic.unwrap_or(f64::NAN),
            c.inclusion_frequency.unwrap_or(f64::NAN),
            c.utility.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
