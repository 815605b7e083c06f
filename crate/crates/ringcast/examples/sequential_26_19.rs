//! Plays the 26/19 sequential lower-bound instance under two arrival
//! orders: the natural order reaches cost 26/19 times the optimum, while
//! the reverse order reaches the optimum exactly. The instance is
//! perturbed by δ = 1/1000 so every myopic comparison is strict.
//!
//! Run with: cargo run --example sequential_26_19

use ringcast::equilibrium::TieBreak;
use ringcast::rational::rat;
use ringcast::report::perturbed_26_19_instance;
use ringcast::sequential::{sequential_play, ArrivalOrder};
use ringcast::rational_to_string;

fn main() -> ringcast::Result<()> {
    let game = perturbed_26_19_instance();
    println!(
        "edge costs: {:?}",
        game.edge_costs().iter().map(rational_to_string).collect::<Vec<_>>()
    );

    for order in [vec![0, 1, 2], vec![2, 1, 0]] {
        let out = sequential_play(&game, &ArrivalOrder::new(order.clone())?, TieBreak::PreferLeft)?;
        println!("order {order:?}:");
        for step in &out.trace {
            println!(
                "  player {} goes {:?}, myopic cost {}, buys {}",
                step.player,
                step.direction,
                rational_to_string(&step.myopic_cost),
                rational_to_string(&step.newly_bought)
            );
        }
        println!(
            "  network cost {} vs optimum {} — ratio {}",
            rational_to_string(&out.network_cost),
            rational_to_string(&out.optimum_cost),
            rational_to_string(&out.ratio)
        );
    }

    let forward = sequential_play(&game, &ArrivalOrder::new(vec![0, 1, 2])?, TieBreak::PreferLeft)?;
    assert_eq!(forward.network_cost, rat(26, 19));
    let reverse = sequential_play(&game, &ArrivalOrder::new(vec![2, 1, 0])?, TieBreak::PreferLeft)?;
    assert_eq!(reverse.network_cost, reverse.optimum_cost);
    Ok(())
}
