//! Shared generators and oracles for the integration test suites.
// Each suite uses a subset of these helpers.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ringcast::multicast::MulticastGame;
use ringcast::rational::{rat, rat_int, Rat};
use ringcast::RingGame;

/// Random ring game with the given player count; costs are positive
/// multiples of 1/denom up to 1.
pub fn random_ring(rng: &mut ChaCha8Rng, n: usize, denom: i64) -> RingGame {
    let costs: Vec<Rat> = (0..=n).map(|_| rat(rng.gen_range(1..=denom), denom)).collect();
    RingGame::new(costs).expect("positive costs form a valid ring")
}

/// Random connected multicast instance: spanning tree plus noise edges.
pub fn random_graph(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_sources: usize,
) -> MulticastGame {
    let vertices = rng.gen_range(4..=max_vertices);
    let mut edges: Vec<(usize, usize, Rat)> = (1..vertices)
        .map(|v| (rng.gen_range(0..v), v, rat_int(rng.gen_range(1..=20))))
        .collect();
    for _ in 0..rng.gen_range(0..=vertices) {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u != v {
            edges.push((u, v, rat_int(rng.gen_range(1..=20))));
        }
    }
    let n_sources = rng.gen_range(1..=max_sources);
    let sources: Vec<usize> = (0..n_sources).map(|_| rng.gen_range(0..vertices)).collect();
    MulticastGame::new(vertices, edges, sources, 0).expect("tree construction is connected")
}

/// Solves the square system `m · x = b` exactly; `None` if singular.
fn solve_square(mut m: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    use num_traits::Zero;
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let p = m[col][col].clone();
        for j in col..k {
            m[col][j] = &m[col][j] / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..k {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                }
                b[r] = &b[r] - &(&f * &b[col]);
            }
        }
    }
    Some(b)
}

/// Brute-force LP oracle: enumerates every basic point (each choice of
/// `num_vars` active constraints among the rows and the bounds x_i >= 0),
/// keeps the feasible ones, and returns their objective values. Only
/// supports pure-inequality LPs.
pub fn feasible_vertex_values(lp: &ringcast::lp::LinearProgram) -> Vec<Rat> {
    use num_traits::{Signed, Zero};
    use ringcast::lp::Relation;

    let m = lp.num_vars;
    // Candidate active rows: constraint index or m + variable index
    // (nonnegativity bound).
    let total = lp.constraints.len() + m;
    let mut values = Vec::new();
    let mut choice = (0..m).collect::<Vec<usize>>();
    loop {
        let mat: Vec<Vec<Rat>> = choice
            .iter()
            .map(|&c| {
                if c < lp.constraints.len() {
                    lp.constraints[c].form.coeffs.clone()
                } else {
                    (0..m)
                        .map(|j| {
                            if j == c - lp.constraints.len() {
                                Rat::from_integer(1.into())
                            } else {
                                Rat::zero()
                            }
                        })
                        .collect()
                }
            })
            .collect();
        let rhs: Vec<Rat> = choice
            .iter()
            .map(|&c| {
                if c < lp.constraints.len() {
                    &lp.constraints[c].rhs - &lp.constraints[c].form.constant
                } else {
                    Rat::zero()
                }
            })
            .collect();
        if let Some(x) = solve_square(mat, rhs) {
            let feasible = x.iter().all(|v| !v.is_negative())
                && lp.constraints.iter().all(|c| {
                    let lhs = c.form.eval(&x);
                    match c.rel {
                        Relation::Le => lhs <= c.rhs,
                        Relation::Eq => lhs == c.rhs,
                    }
                });
            if feasible {
                values.push(lp.objective.eval(&x));
            }
        }
        // Next combination in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return values;
            }
            i -= 1;
            if choice[i] + (m - i) < total {
                choice[i] += 1;
                for j in i + 1..m {
                    choice[j] = choice[j - 1] + 1;
                }
                break;
            }
        }
    }
}
