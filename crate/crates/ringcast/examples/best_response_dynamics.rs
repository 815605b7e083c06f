//! Runs best-response dynamics and shows the Rosenthal potential strictly
//! decreasing with every deviation until a Nash equilibrium is reached.
//!
//! Run with: cargo run --example best_response_dynamics

use ringcast::equilibrium::{best_response_dynamics, is_nash, Schedule, TieBreak};
use ringcast::rational::rat;
use ringcast::{rational_to_string, RingGame};

fn main() -> ringcast::Result<()> {
    // The optimum profile here is not an equilibrium: dropping edge 0
    // forces player 0 onto the long way around, from which it deviates.
    let game = RingGame::new(vec![rat(2, 1), rat(11, 10), rat(2, 1)])?;
    let opt = game.optimum();
    println!(
        "start at the optimum profile {} (cost {}, drops edge {})",
        opt.profile,
        rational_to_string(&opt.cost),
        opt.dropped_edge
    );

    let (nash, trace) =
        best_response_dynamics(&game, &opt.profile, Schedule::RoundRobin, TieBreak::PreferLeft)?;
    for step in &trace {
        println!(
            "player {} switches {:?} → {:?}: cost {} → {}, potential {} → {}",
            step.player,
            step.old_direction,
            step.new_direction,
            rational_to_string(&step.cost_before),
            rational_to_string(&step.cost_after),
            rational_to_string(&step.potential_before),
            rational_to_string(&step.potential_after)
        );
        assert!(step.potential_after < step.potential_before);
    }
    println!(
        "reached {} after {} moves (cost {})",
        nash,
        trace.len(),
        rational_to_string(&game.social_cost(&nash)?)
    );
    assert!(is_nash(&game, &nash)?);
    Ok(())
}
