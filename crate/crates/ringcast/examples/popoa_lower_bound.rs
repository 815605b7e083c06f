//! Builds lower-bound instances for the potential-optimum price of
//! anarchy: an LP maximizes the cost ratio of a potential minimizer that
//! leaves one edge unused. Small sizes solve exactly; larger sizes use
//! floating point and approach the limit value 2.
//!
//! Run with: cargo run --release --example popoa_lower_bound

use ringcast::equilibrium::{popoa, popoa_family_instance};
use ringcast::report::{popoa_default_p, popoa_scan};
use ringcast::rational_to_string;

fn main() -> ringcast::Result<()> {
    // A concrete exact instance: depth l = 1 on a 6-player ring.
    let fam = popoa_family_instance(1, 6)?;
    println!(
        "family (l=1, n=6): LP value {:.6}, unused edge {}, costs {:?}",
        fam.lp_value,
        fam.unused_edge,
        fam.game
            .edge_costs()
            .iter()
            .map(rational_to_string)
            .collect::<Vec<_>>()
    );
    let rep = popoa(&fam.game)?;
    println!(
        "enumerated POPoA on that instance: {} (over {} potential minima)",
        rational_to_string(&rep.worst_ratio),
        rep.minima_count
    );

    // LP values grow toward 2 with the ring size.
    let scan = popoa_scan(&[10, 14, 30, 60, 120])?;
    for row in &scan.rows {
        println!(
            "n = {:>3}, p = {:>2}: LP value {:.6} ({})",
            row.n,
            row.p,
            row.lp_value,
            if row.exact { "exact" } else { "f64" }
        );
        assert_eq!(row.p, popoa_default_p(row.n));
    }
    Ok(())
}
