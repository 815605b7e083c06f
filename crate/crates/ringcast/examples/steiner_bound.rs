//! General-graph multicast: computes an exact minimum Steiner tree,
//! plays the players in DFS order over that tree, and verifies the chain
//! of inequalities proving the outcome costs at most 4 times the tree.
//!
//! Run with: cargo run --example steiner_bound

use ringcast::multicast::{ring_to_graph, steiner_tree_exact, verify_bound4, MulticastGame};
use ringcast::rational::rat;
use ringcast::{rational_to_string, RingGame};

fn main() -> ringcast::Result<()> {
    // A small non-ring graph: 4 sources, one hub, one target.
    let game = MulticastGame::new(
        6,
        vec![
            (0, 4, rat(3, 1)),
            (1, 4, rat(2, 1)),
            (2, 4, rat(2, 1)),
            (3, 4, rat(3, 1)),
            (4, 5, rat(4, 1)),
            (0, 5, rat(6, 1)),
            (3, 5, rat(5, 1)),
        ],
        vec![0, 1, 2, 3],
        5,
    )?;
    let tree = steiner_tree_exact(&game)?;
    println!(
        "Steiner tree uses edges {:?} at cost {}",
        tree.edge_indices,
        rational_to_string(&tree.cost)
    );

    let report = verify_bound4(&game)?;
    println!("DFS arrival order: {:?}", report.order.0);
    for (desc, holds) in &report.inequalities {
        println!("  [{}] {}", if *holds { "ok" } else { "VIOLATED" }, desc);
    }
    println!(
        "final cost {} ≤ 4 × tree cost {}: ratio {}",
        rational_to_string(&report.final_cost),
        rational_to_string(&report.tree_cost),
        rational_to_string(&report.ratio)
    );
    assert!(report.all_hold && report.within_factor_four);

    // Ring embeddings are a special case: the tree is the ring minus its
    // most expensive edge.
    let ring = RingGame::from_i64(&[2, 1, 5, 1, 2])?;
    let embedded = ring_to_graph(&ring);
    let ring_tree = steiner_tree_exact(&embedded)?;
    assert_eq!(ring_tree.cost, ring.optimum().cost);
    println!(
        "ring embedding: Steiner tree cost {} = ring optimum",
        rational_to_string(&ring_tree.cost)
    );
    Ok(())
}
