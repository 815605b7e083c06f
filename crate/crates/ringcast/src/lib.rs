//! Exact-arithmetic analysis of multicast network design games on ring
//! topologies, plus a general-graph multicast extension.
//!
//! Every player on a ring has two strategies, clockwise (`Left`) or
//! counterclockwise (`Right`), to reach the common target; edge costs are
//! split equally among users. The crate computes Nash equilibria, Rosenthal
//! potential optima, myopic sequential-arrival outcomes and the associated
//! quality ratios (PoA, PoS, POPoA, msPoA, msPoS), all in exact rational
//! arithmetic, and verifies the bound proofs through an exact-rational
//! simplex with LP duality certificates.
//!
//! See the `examples/` directory for one runnable entry point per
//! capability, or the `ringcast` binary for a command-line front end.

pub mod equilibrium;
pub mod lp;
pub mod multicast;
pub mod rational;
pub mod report;
pub mod ring;
pub mod sequential;

pub use rational::{harmonic, parse_rational, rational_to_string, Rat};
pub use ring::{Direction, Profile, RingGame};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what} refused: {n} exceeds the limit of {limit} ({hint})")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
        hint: &'static str,
    },
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Hex SHA-256, used to fingerprint instances in reports.
pub fn hex_sha256(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Fingerprint of an edge-cost vector, stable across serializations.
pub fn cost_digest(costs: &[Rat]) -> String {
    let s: Vec<String> = costs.iter().map(rational_to_string).collect();
    hex_sha256(s.join(",").as_bytes())
}
