// Score a small stance matrix: one wire service, two outlets that mostly
// agree with it, and a bot that supports everything.
//
// ```bash
// cargo run --example score_matrix
// ```

use tts_core::mechanism::majority_score;
use tts_core::{score_all, StanceMatrix, DEFAULT_THRESHOLD};

pub fn run_example() -> tts_core::Result<()> {
    let matrix = StanceMatrix::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/stances_4x8.json"))?;
    let report = score_all(&matrix, 42, DEFAULT_THRESHOLD, None)?;

    println!("{:<8} {:>8} {:>9}  included", "source", "score", "majority");
    for (i, id) in matrix.source_ids().iter().enumerate() {
        println!(
            "{id:<8} {:>8.4} {:>9.4}  {}",
            report.scores[id],
            majority_score(i, &matrix)?,
            report.included[id]
        );
    }
    // The bot agrees with the majority on most claims yet earns nothing
    // beyond chance.
    println!("bot permutation: {:?}", report.permutations["bot"]);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
