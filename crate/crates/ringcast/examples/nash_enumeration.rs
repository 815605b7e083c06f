//! Enumerates all pure Nash equilibria of a small ring instance and prints
//! the exact price of anarchy and price of stability.
//!
//! Run with: cargo run --example nash_enumeration

use ringcast::equilibrium::enumerate_nash;
use ringcast::rational_to_string;
use ringcast::RingGame;

fn main() -> ringcast::Result<()> {
    // Two players; edge 1 (cost 1) sits between them, edges 0 and 2
    // (cost 2 each) reach the target directly.
    let game = RingGame::from_i64(&[2, 1, 2])?;
    let opt = game.optimum();
    println!(
        "optimum drops edge {} at cost {}",
        opt.dropped_edge,
        rational_to_string(&opt.cost)
    );

    let report = enumerate_nash(&game)?;
    println!("{} pure Nash equilibria:", report.equilibria.len());
    for p in &report.equilibria {
        println!("  {} costs {}", p, rational_to_string(&game.social_cost(p)?));
    }
    println!(
        "PoA = {} (worst NE {}), PoS = {} (best NE {})",
        rational_to_string(&report.poa),
        report.worst_witness,
        rational_to_string(&report.pos),
        report.best_witness
    );
    assert_eq!(report.poa, ringcast::rational::rat(4, 3));
    Ok(())
}
