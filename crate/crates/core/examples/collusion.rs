// Two truthful sources against four that contradict every claim. Majority
// voting rewards the bloc; correlated-agreement scoring does not.
//
// ```bash
// cargo run --release --example collusion
// ```

use tts_core::simulator::collusion_experiment;
use tts_core::{WorldConfig, DEFAULT_THRESHOLD};

pub fn run_example() -> tts_core::Result<()> {
    let config = WorldConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/collusion_world.json"))?;
    let r = collusion_experiment(&config, 500, DEFAULT_THRESHOLD)?;

    println!("{:<10} {:>10} {:>10}  role", "source", "ca score", "majority");
    for (ca, maj) in r.tts.cells.iter().zip(&r.majority.cells) {
        let i = ca.source.unwrap_or_default();
        let role = if r.colluders.contains(&i) { "colluder" } else { "truthful" };
        println!("{:<10} {:>10.4} {:>10.4}  {role}", ca.cell, ca.mean, maj.mean);
    }
    println!("ca ordering holds: {}", r.tts_ordering_holds);
    println!("majority fooled:   {}", r.majority_ordering_holds);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
