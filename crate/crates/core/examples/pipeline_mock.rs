// Run the two-pass pipeline over the planted-source fixture with the
// deterministic mock providers.
//
// ```bash
// cargo run --example pipeline_mock [seed]
// ```

use tts_core::pipeline::{run_tts, DocumentPool, PipelineOptions, Providers};
use tts_core::cli::DEFAULT_SEED;
use tts_core::DEFAULT_THRESHOLD;

pub fn run_example() -> tts_core::Result<()> {
    run_with_seed(DEFAULT_SEED)
}

fn run_with_seed(seed: u64) -> tts_core::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/planted_pool.json");
    let pool = DocumentPool::load(path)?;
    let result = run_tts(
        &pool.query,
        &pool.documents,
        DEFAULT_THRESHOLD,
        &Providers::mock(),
        seed,
        &PipelineOptions::default(),
    )?;

    println!("query: {}", pool.query);
    for doc in &pool.documents {
        let id = &doc.source_id;
        println!(
            "{id:<12} {:>8.4}  claims={:<2} {}",
            result.report.scores[id],
            result.claim_sets[id].len(),
            if result.report.included[id] { "kept" } else { "dropped" }
        );
    }
    println!("reliable: {:?}", result.reliable_set);
    println!("summary: {}", result.final_summary);
    Ok(())
}

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    if let Err(e) = run_with_seed(seed) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
