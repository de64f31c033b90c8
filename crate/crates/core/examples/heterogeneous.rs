// Peers whose coverage and informativeness vary claim by claim, scored with
// and without reputation weights.
//
// ```bash
// cargo run --release --example heterogeneous
// ```

use tts_core::analytics::{expected_source_score, ExpectedScoreParams};
use tts_core::simulator::run_replications;
use tts_core::{validate_config, SourceStrategy, WorldConfig, DEFAULT_THRESHOLD};

const K: usize = 120;

pub fn run_example() -> tts_core::Result<()> {
    let strategies = vec![SourceStrategy::truthful(0.9, 0.1, 1.0); 4];
    let mut config = WorldConfig::new(0.4, K, strategies, 99);
    // Source 0 is uniform; the peers are strong on one third of the claims
    // and weak elsewhere, each on a different third.
    config.peer_coverage = Some(
        (0..4)
            .map(|j| (0..K).map(|k| if j == 0 || k % 3 == j - 1 { 0.95 } else { 0.5 }).collect())
            .collect(),
    );
    config.peer_informativeness = Some(
        (0..4)
            .map(|j| (0..K).map(|k| if j == 0 || k % 3 == j - 1 { 0.8 } else { 0.2 }).collect())
            .collect(),
    );
    let check = validate_config(&config);
    println!("valid: {}  margin: {:.4}", check.is_valid(), check.margin);

    let params = ExpectedScoreParams::from_world(&config, 0);
    println!("expected score, uniform weights: {:.4}", expected_source_score(&params, None)?);
    println!("expected score, weights 3:1:1:  {:.4}", expected_source_score(&params, Some(&[3.0, 1.0, 1.0]))?);

    let plain = run_replications(&config, 2000, DEFAULT_THRESHOLD)?;
    config.reputation_weights = Some(vec![1.0, 3.0, 1.0, 1.0]);
    let weighted = run_replications(&config, 2000, DEFAULT_THRESHOLD)?;
    for (p, w) in plain.cells.iter().zip(&weighted.cells) {
        println!(
            "{:<9} plain {:.4} (analytic {:.4})  weighted {:.4} (analytic {:.4})",
            p.cell,
            p.mean,
            p.analytic.unwrap_or(f64::NAN),
            w.mean,
            w.analytic.unwrap_or(f64::NAN)
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
