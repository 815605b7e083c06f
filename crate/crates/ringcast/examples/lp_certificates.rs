//! Verifies the LP duality certificates behind the ring bounds: the 4/3
//! price-of-stability family and the 26/19 sequential bound. Each
//! certificate is a nonnegative multiplier vector whose constraint
//! combination dominates the LP objective — checked in exact arithmetic.
//!
//! Run with: cargo run --example lp_certificates

use ringcast::lp::{
    appendix_certificate_exact, build_mspos_lp, build_pos_lp, check_certificate,
    mspos_certificate, simplex_solve,
};
use ringcast::rational_to_string;

fn main() -> ringcast::Result<()> {
    for k in 1..=3 {
        let lp = build_pos_lp(k + 1, k + 1, k)?;
        let cert = appendix_certificate_exact(k).expect("exact weights exist for k <= 3");
        let check = check_certificate(&lp, &cert)?;
        let solved = simplex_solve(&lp)?;
        println!(
            "{}: certified bound {} ({}), simplex value {}",
            lp.id,
            rational_to_string(&cert.bound),
            if check.certified { "valid" } else { "INVALID" },
            rational_to_string(solved.value.as_ref().unwrap())
        );
        assert!(check.certified);
        assert_eq!(solved.value.as_ref(), Some(&cert.bound));
    }

    let (n, o, i) = (3, 3, 1);
    let lp = build_mspos_lp(n, o, i)?;
    let cert = mspos_certificate(n, o, i)?;
    let check = check_certificate(&lp, &cert)?;
    let solved = simplex_solve(&lp)?;
    println!(
        "{}: certified bound {} ({}), simplex value {}",
        lp.id,
        rational_to_string(&cert.bound),
        if check.certified { "valid" } else { "INVALID" },
        rational_to_string(solved.value.as_ref().unwrap())
    );
    assert!(check.certified);
    assert_eq!(rational_to_string(&cert.bound), "26/19");
    Ok(())
}
