// How the score of one source decays as it flips a growing share of its
// stances. Prints plot-ready CSV.
//
// ```bash
// cargo run --release --example incentive_sweep > sweep.csv
// ```

use tts_core::simulator::incentive_sweep;
use tts_core::{WorldConfig, DEFAULT_THRESHOLD};

pub fn run_example() -> tts_core::Result<()> {
    let config = WorldConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/truthful_world.json"))?;
    let phis = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
    let result = incentive_sweep(&config, 0, &phis, 2000, DEFAULT_THRESHOLD)?;
    result.write_csv(std::io::stdout().lock())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
