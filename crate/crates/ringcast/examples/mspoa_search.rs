//! Randomized hill-climbing search for ring instances with a large
//! sequential price of anarchy (worst arrival order vs optimum). The
//! proven ceiling is 2; small rings already get close.
//!
//! Run with: cargo run --release --example mspoa_search

use ringcast::sequential::{extremal_search, SearchObjective};
use ringcast::rational_to_string;

fn main() -> ringcast::Result<()> {
    let result = extremal_search(SearchObjective::MsPoa, 4, 60, 11)?;
    println!(
        "best instance found (n = {}, {} restarts, seed {}):",
        result.n, result.trials, result.seed
    );
    println!(
        "  costs {:?}",
        result
            .best_game
            .edge_costs()
            .iter()
            .map(rational_to_string)
            .collect::<Vec<_>>()
    );
    println!(
        "  worst order {:?} gives ratio {} ≈ {:.6}",
        result.best_order.0,
        rational_to_string(&result.ratio),
        result.ratio_f64
    );
    assert!(result.ratio_f64 <= 2.0 + 1e-12, "proven bound is 2");
    Ok(())
}
