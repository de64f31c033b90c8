// Empirical deviation tails of one source's score against the bounded
// differences bound.
//
// ```bash
// cargo run --release --example concentration
// ```

use tts_core::simulator::concentration_experiment;
use tts_core::WorldConfig;

pub fn run_example() -> tts_core::Result<()> {
    let config = WorldConfig::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/truthful_world.json"))?;
    for k in [50, 200] {
        let cfg = WorldConfig { n_claims: k, ..config.clone() };
        let r = concentration_experiment(&cfg, 0, &[0.1, 0.2, 0.3], 2000)?;
        for c in &r.result.cells {
            println!(
                "K={k:<4} {:<6} empirical {:.4}  bound {:.4}",
                c.cell,
                c.mean,
                c.bound.unwrap_or(f64::NAN)
            );
        }
        println!("K={k:<4} holds: {}", r.holds);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
