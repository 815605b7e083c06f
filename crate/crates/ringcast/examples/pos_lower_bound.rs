//! Shows the price of stability approaching 4/3 on the family
//! [2, 1+ε, 2] as ε shrinks: the unique equilibrium costs 4 while the
//! optimum costs 3+ε.
//!
//! Run with: cargo run --example pos_lower_bound

use ringcast::equilibrium::enumerate_nash;
use ringcast::rational::{rat, rat_to_f64};
use ringcast::{rational_to_string, RingGame};

fn main() -> ringcast::Result<()> {
    for exp in [1, 2, 3, 4] {
        let eps = rat(1, 10i64.pow(exp));
        let game = RingGame::new(vec![
            rat(2, 1),
            rat(1, 1) + eps.clone(),
            rat(2, 1),
        ])?;
        let report = enumerate_nash(&game)?;
        println!(
            "eps = 1/10^{exp}: {} equilibria, PoS = {} ≈ {:.6}",
            report.equilibria.len(),
            rational_to_string(&report.pos),
            rat_to_f64(&report.pos)
        );
        // The middle edge being strictly more expensive than 1 makes the
        // direct-edges profile the unique equilibrium.
        assert_eq!(report.equilibria.len(), 1);
        assert_eq!(report.pos, rat(4, 1) / (rat(3, 1) + eps));
    }
    println!("PoS ↑ 4/3, matching the proven upper bound for rings");
    Ok(())
}
