//! Tests the two-permutation conjecture empirically: for random ring
//! instances, the better of two specific arrival orders (a structured
//! order built from the optimum, and the descending order) stays within
//! 4/3 of the optimum.
//!
//! Run with: cargo run --release --example two_permutation

use ringcast::sequential::two_permutation_experiment;

fn main() -> ringcast::Result<()> {
    let report = two_permutation_experiment(50, 200, 7)?;
    println!(
        "n = {}, {} trials (seed {}), arithmetic: {}",
        report.n,
        report.trials,
        report.seed,
        if report.exact { "exact" } else { "f64" }
    );
    println!(
        "max over trials of min(two orders) ratio = {:.6}",
        report.max_min_ratio
    );
    println!(
        "all trials within 4/3: {}",
        report.all_within_four_thirds
    );
    assert!(report.all_within_four_thirds);
    Ok(())
}
