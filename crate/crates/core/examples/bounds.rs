// Sample-size and tail-bound calculators.
//
// ```bash
// cargo run --example bounds
// ```

use tts_core::analytics::{gap_lower_bound, lipschitz_delta, mcdiarmid_tail, min_claims};

pub fn run_example() -> tts_core::Result<()> {
    // Claims needed when the truthful-vs-deviation gap and the peer margin are
    // both 0.1, inclusion is worth 1, effort costs 0.5 and ε = 0.01.
    let k = min_claims(0.1, 0.1, 1.0, 0.5, 0.01)?;
    println!("min claims (g=0.1, m=0.1, v=1, c=0.5, eps=0.01): {k}");

    for margin in [0.05, 0.1, 0.2] {
        let g = gap_lower_bound(0.1, 0.9, 0.8, margin)?;
        println!("margin {margin:<4}  gap >= {g:.4}  min claims {}", min_claims(g, margin, 1.0, 0.5, 0.01)?);
    }

    println!("\n{:>5} {:>5} {:>10} {:>8}", "K", "t", "tail", "delta");
    for k in [50, 100, 200, 1000] {
        for t in [0.1, 0.2, 0.3] {
            println!("{k:>5} {t:>5} {:>10.6} {:>8.4}", mcdiarmid_tail(k, t)?, lipschitz_delta(k)?);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
