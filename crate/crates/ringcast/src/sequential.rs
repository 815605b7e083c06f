//! Myopic sequential-arrival dynamics: players arrive one at a time under a
//! permutation and pick the cheaper path given the shares induced by the
//! players already present.

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::TieBreak;
use crate::rational::{rat, serde_rat, serde_rat_vec, Rat};
use crate::ring::{path_edges, Direction, Profile, RingGame};
use crate::{Error, Result};

/// Largest n for which msPoA/msPoS enumerate all n! arrival orders.
pub const PERMUTATION_LIMIT: usize = 8;

/// Largest n for which the two-permutation experiment runs in exact
/// rational arithmetic; beyond it, double precision with a 1e-9 tolerance.
pub const EXACT_EXPERIMENT_LIMIT: usize = 200;

/// Permutation of the player indices 0..n−1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrivalOrder(pub Vec<usize>);

impl ArrivalOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Validation(format!(
                    "arrival order {perm:?} is not a permutation of 0..{n}"
                )));
            }
            seen[p] = true;
        }
        Ok(ArrivalOrder(perm))
    }

    pub fn identity(n: usize) -> Self {
        ArrivalOrder((0..n).collect())
    }

    pub fn descending(n: usize) -> Self {
        ArrivalOrder((0..n).rev().collect())
    }
}

/// One arrival in a sequential play-through.
#[derive(Debug, Clone, Serialize)]
pub struct ArrivalStep {
    pub player: usize,
    pub direction: Direction,
    /// Myopic cost paid at arrival time (minimum of the two path shares).
    #[serde(with = "serde_rat")]
    pub myopic_cost: Rat,
    /// Total cost of edges this arrival is the first to use.
    #[serde(with = "serde_rat")]
    pub newly_bought: Rat,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequentialOutcome {
    pub profile: Profile,
    pub trace: Vec<ArrivalStep>,
    /// Σ newly_bought over the trace = social cost of the final profile.
    #[serde(with = "serde_rat")]
    pub network_cost: Rat,
    #[serde(with = "serde_rat")]
    pub optimum_cost: Rat,
    /// network_cost / optimum_cost (1 when the optimum is free).
    #[serde(with = "serde_rat")]
    pub ratio: Rat,
    pub tie: TieBreak,
}

/// Plays the game under the given arrival order. Each player picks the
/// direction minimizing her share, where edge e costs c_e/(load + 1) with
/// loads counted over already-arrived players. `TieBreak::Stay` has no
/// incumbent strategy at arrival time and falls back to `PreferLeft`.
pub fn sequential_play(
    game: &RingGame,
    order: &ArrivalOrder,
    tie: TieBreak,
) -> Result<SequentialOutcome> {
    let n = game.n();
    if order.0.len() != n {
        return Err(Error::Validation(format!(
            "order covers {} players but the game has {n}",
            order.0.len()
        )));
    }
    ArrivalOrder::new(order.0.clone())?;

    let mut loads = vec![0usize; n + 1];
    let mut dirs = vec![Direction::Left; n];
    let mut trace = Vec::with_capacity(n);
    for &p in &order.0 {
        let share = |dir: Direction, loads: &[usize]| -> Rat {
            path_edges(p, dir, n)
                .map(|e| game.edge_cost(e) / rat((loads[e] + 1) as i64, 1))
                .sum()
        };
        let left = share(Direction::Left, &loads);
        let right = share(Direction::Right, &loads);
        let dir = match tie {
            TieBreak::PreferRight => {
                if right <= left {
                    Direction::Right
                } else {
                    Direction::Left
                }
            }
            // PreferLeft; Stay has no incumbent strategy at arrival time.
            _ => {
                if left <= right {
                    Direction::Left
                } else {
                    Direction::Right
                }
            }
        };
        let myopic_cost = if dir == Direction::Left { left } else { right };
        let mut newly_bought = Rat::zero();
        for e in path_edges(p, dir, n) {
            if loads[e] == 0 {
                newly_bought += game.edge_cost(e);
            }
            loads[e] += 1;
        }
        dirs[p] = dir;
        trace.push(ArrivalStep {
            player: p,
            direction: dir,
            myopic_cost,
            newly_bought,
        });
    }

    let profile = Profile::new(dirs);
    let network_cost: Rat = trace.iter().map(|s| s.newly_bought.clone()).sum();
    debug_assert_eq!(network_cost, game.social_cost(&profile)?);
    let optimum_cost = game.optimum().cost;
    let ratio = if optimum_cost.is_zero() {
        Rat::one()
    } else {
        &network_cost / &optimum_cost
    };
    Ok(SequentialOutcome {
        profile,
        trace,
        network_cost,
        optimum_cost,
        ratio,
        tie,
    })
}

/// Result of optimizing the sequential ratio over arrival orders.
#[derive(Debug, Clone, Serialize)]
pub struct OrderSearchOutcome {
    #[serde(with = "serde_rat")]
    pub ratio: Rat,
    pub order: ArrivalOrder,
    /// True when all n! orders were enumerated; false for sampled
    /// estimates (a lower bound for msPoA, an upper bound for msPoS).
    pub exact: bool,
    pub orders_examined: usize,
}

fn ms_extremum(game: &RingGame, worst: bool, tie: TieBreak) -> Result<OrderSearchOutcome> {
    let n = game.n();
    if n > PERMUTATION_LIMIT {
        return Err(Error::LimitExceeded {
            what: "arrival-order enumeration",
            n,
            limit: PERMUTATION_LIMIT,
            hint: "use the sampled estimate instead",
        });
    }
    let mut best: Option<(Rat, Vec<usize>)> = None;
    let mut examined = 0usize;
    for perm in (0..n).permutations(n) {
        examined += 1;
        let out = sequential_play(game, &ArrivalOrder(perm.clone()), tie)?;
        let better = match &best {
            None => true,
            Some((r, _)) => {
                if worst {
                    out.ratio > *r
                } else {
                    out.ratio < *r
                }
            }
        };
        if better {
            best = Some((out.ratio, perm));
        }
    }
    let (ratio, order) = best.expect("n >= 1 games have at least one order");
    Ok(OrderSearchOutcome {
        ratio,
        order: ArrivalOrder(order),
        exact: true,
        orders_examined: examined,
    })
}

/// Worst sequential outcome over all arrival orders, relative to optimum.
pub fn ms_poa(game: &RingGame) -> Result<OrderSearchOutcome> {
    ms_extremum(game, true, TieBreak::PreferLeft)
}

/// Best sequential outcome over all arrival orders, relative to optimum.
pub fn ms_pos(game: &RingGame) -> Result<OrderSearchOutcome> {
    ms_extremum(game, false, TieBreak::PreferLeft)
}

/// Sampled (worst, best) estimates over random arrival orders, for games
/// beyond the enumeration limit. The worst estimate is a lower bound on
/// msPoA and the best an upper bound on msPoS; both are flagged inexact.
pub fn ms_ratios_sampled(
    game: &RingGame,
    trials: usize,
    seed: u64,
) -> Result<(OrderSearchOutcome, OrderSearchOutcome)> {
    let n = game.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<(Rat, Vec<usize>)> = None;
    let mut best: Option<(Rat, Vec<usize>)> = None;
    for _ in 0..trials.max(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates with the seeded generator.
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let out = sequential_play(game, &ArrivalOrder(perm.clone()), TieBreak::PreferLeft)?;
        if worst.as_ref().map_or(true, |(r, _)| out.ratio > *r) {
            worst = Some((out.ratio.clone(), perm.clone()));
        }
        if best.as_ref().map_or(true, |(r, _)| out.ratio < *r) {
            best = Some((out.ratio, perm));
        }
    }
    let mk = |b: Option<(Rat, Vec<usize>)>| {
        let (ratio, order) = b.unwrap();
        OrderSearchOutcome {
            ratio,
            order: ArrivalOrder(order),
            exact: false,
            orders_examined: trials.max(1),
        }
    };
    Ok((mk(worst), mk(best)))
}

/// The arrival order (n−1, …, o, 0, 1, …, o−1) built on the ring oriented
/// so that the cheaper side of the optimum's dropped edge arrives last.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem5Order {
    pub order: ArrivalOrder,
    /// True when the ring was mirrored (edge i ↦ n−i) before constructing
    /// the order, to ensure Σ_{i<o} a_i ≥ Σ_{i>o} a_i.
    pub mirrored: bool,
    /// Dropped edge of the optimum in the (possibly mirrored) indexing.
    pub o: usize,
}

/// Builds the bounded-ratio arrival order: players right of the optimum's
/// dropped edge o arrive first in descending index order, then players
/// 0..o−1 ascending, after mirroring the ring if the left side of o is the
/// cheaper one.
pub fn theorem5_order(game: &RingGame) -> Theorem5Order {
    let n = game.n();
    let o = game.optimum().dropped_edge;
    let left_sum: Rat = (0..o).map(|e| game.edge_cost(e).clone()).sum();
    let right_sum: Rat = (o + 1..=n).map(|e| game.edge_cost(e).clone()).sum();
    let (o, mirrored) = if left_sum < right_sum {
        (n - o, true)
    } else {
        (o, false)
    };
    let mut working: Vec<usize> = (o..n).rev().collect();
    working.extend(0..o);
    let order = if mirrored {
        working.into_iter().map(|p| n - 1 - p).collect()
    } else {
        working
    };
    Theorem5Order {
        order: ArrivalOrder(order),
        mirrored,
        o,
    }
}

/// Exact min-of-two-orders ratio: the better of the structured order and
/// plain descending arrival, over the optimum.
pub fn two_permutation_ratio(game: &RingGame) -> Result<Rat> {
    let a = sequential_play(game, &theorem5_order(game).order, TieBreak::PreferLeft)?;
    let b = sequential_play(
        game,
        &ArrivalOrder::descending(game.n()),
        TieBreak::PreferLeft,
    )?;
    Ok(a.ratio.min(b.ratio))
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoPermutationTrial {
    pub trial: usize,
    pub instance_digest: String,
    pub min_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoPermutationReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// True when every trial ran in exact rational arithmetic.
    pub exact: bool,
    /// Max over instances of min(two orders' costs)/optimum.
    pub max_min_ratio: f64,
    #[serde(with = "serde_rat_vec")]
    pub worst_instance: Vec<Rat>,
    /// Whether every trial stayed within 4/3 (plus 1e-9 in float mode).
    pub all_within_four_thirds: bool,
    pub per_trial: Vec<TwoPermutationTrial>,
}

const FLOAT_TOLERANCE: f64 = 1e-9;

/// Plays random instances of size n and checks that the better of the
/// structured order and descending arrival always lands within 4/3 of the
/// optimum. Exact arithmetic up to `EXACT_EXPERIMENT_LIMIT` players,
/// double precision beyond (flagged).
pub fn two_permutation_experiment(n: usize, trials: usize, seed: u64) -> Result<TwoPermutationReport> {
    if n == 0 {
        return Err(Error::Validation("need at least one player".into()));
    }
    let exact = n <= EXACT_EXPERIMENT_LIMIT;
    let results: Vec<(f64, Vec<Rat>)> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64));
            let costs: Vec<Rat> = (0..=n).map(|_| rat(rng.gen_range(1..=1000), 1000)).collect();
            let ratio = if exact {
                let game = RingGame::new(costs.clone()).expect("nonnegative by construction");
                crate::rational::rat_to_f64(&two_permutation_ratio(&game)?)
            } else {
                let f: Vec<f64> = costs
                    .iter()
                    .map(crate::rational::rat_to_f64)
                    .collect();
                two_permutation_ratio_f64(&f)
            };
            Ok((ratio, costs))
        })
        .collect::<Result<_>>()?;
    let per_trial: Vec<TwoPermutationTrial> = results
        .iter()
        .enumerate()
        .map(|(t, (ratio, costs))| TwoPermutationTrial {
            trial: t,
            instance_digest: crate::cost_digest(costs),
            min_ratio: *ratio,
        })
        .collect();
    let (max_min_ratio, worst_instance) = results
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one trial");
    let limit = 4.0 / 3.0 + if exact { 0.0 } else { FLOAT_TOLERANCE };
    Ok(TwoPermutationReport {
        n,
        trials: trials.max(1),
        seed,
        exact,
        max_min_ratio,
        worst_instance,
        all_within_four_thirds: max_min_ratio <= limit,
        per_trial,
    })
}

/// Double-precision sequential play for the large-n experiment path.
pub fn sequential_play_f64(costs: &[f64], order: &[usize]) -> f64 {
    let n = costs.len() - 1;
    let mut loads = vec![0usize; n + 1];
    let mut bought = 0.0;
    for &p in order {
        let left: f64 = (0..=p).map(|e| costs[e] / (loads[e] + 1) as f64).sum();
        let right: f64 = (p + 1..=n).map(|e| costs[e] / (loads[e] + 1) as f64).sum();
        let edges: Box<dyn Iterator<Item = usize>> = if left <= right {
            Box::new(0..=p)
        } else {
            Box::new(p + 1..=n)
        };
        for e in edges {
            if loads[e] == 0 {
                bought += costs[e];
            }
            loads[e] += 1;
        }
    }
    bought
}

fn two_permutation_ratio_f64(costs: &[f64]) -> f64 {
    let n = costs.len() - 1;
    // Dropped edge of the optimum: most expensive, lowest index on ties.
    let o = (0..=n)
        .rev()
        .max_by(|&a, &b| costs[a].total_cmp(&costs[b]))
        .unwrap();
    let optimum: f64 = costs.iter().sum::<f64>() - costs[o];
    let left_sum: f64 = costs[..o].iter().sum();
    let right_sum: f64 = costs[o + 1..].iter().sum();
    let (costs_w, o) = if left_sum < right_sum {
        let rev: Vec<f64> = costs.iter().rev().copied().collect();
        (rev, n - o)
    } else {
        (costs.to_vec(), o)
    };
    let mut structured: Vec<usize> = (o..n).rev().collect();
    structured.extend(0..o);
    let descending: Vec<usize> = (0..n).rev().collect();
    // The structured order runs on the mirrored ring; descending arrival is
    // mirror-symmetric so the original costs serve directly.
    let c1 = sequential_play_f64(&costs_w, &structured);
    let c2 = sequential_play_f64(costs, &descending);
    if optimum <= 0.0 {
        1.0
    } else {
        c1.min(c2) / optimum
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchObjective {
    MsPoa,
    MsPos,
}

/// Best instance found by randomized search, with everything needed to
/// reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub objective: SearchObjective,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub best_game: RingGame,
    pub best_order: ArrivalOrder,
    #[serde(with = "serde_rat")]
    pub ratio: Rat,
    pub ratio_f64: f64,
}

const SEARCH_DENOM: i64 = 1000;

fn search_value(game: &RingGame, objective: SearchObjective) -> Result<OrderSearchOutcome> {
    match objective {
        SearchObjective::MsPoa => ms_poa(game),
        SearchObjective::MsPos => ms_pos(game),
    }
}

/// Randomized hill-climbing over integer-grid edge costs, maximizing the
/// chosen sequential ratio. Every candidate is scored by exact
/// enumeration of all arrival orders, so n must be within the permutation
/// limit; results are reproducible from (n, trials, seed).
pub fn extremal_search(
    objective: SearchObjective,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::Validation("need at least one player".into()));
    }
    if n > PERMUTATION_LIMIT {
        return Err(Error::LimitExceeded {
            what: "extremal search scoring",
            n,
            limit: PERMUTATION_LIMIT,
            hint: "scoring enumerates all n! arrival orders",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Rat, RingGame, ArrivalOrder)> = None;
    for _ in 0..trials.max(1) {
        let mut costs: Vec<i64> = (0..=n).map(|_| rng.gen_range(1..=SEARCH_DENOM)).collect();
        let mut game = RingGame::new(costs.iter().map(|&c| rat(c, SEARCH_DENOM)).collect())?;
        let mut value = search_value(&game, objective)?;
        // Coordinate-wise hill climbing with a shrinking step.
        let mut step = SEARCH_DENOM / 4;
        while step >= 1 {
            let mut improved = false;
            for e in 0..=n {
                for delta in [step, -step] {
                    let cand = costs[e] + delta;
                    if cand < 0 {
                        continue;
                    }
                    let mut c2 = costs.clone();
                    c2[e] = cand;
                    let g2 = RingGame::new(c2.iter().map(|&c| rat(c, SEARCH_DENOM)).collect())?;
                    let v2 = search_value(&g2, objective)?;
                    if v2.ratio > value.ratio {
                        costs = c2;
                        game = g2;
                        value = v2;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2;
            }
        }
        if best.as_ref().map_or(true, |(r, _, _)| value.ratio > *r) {
            best = Some((value.ratio, game, value.order));
        }
    }
    let (ratio, best_game, best_order) = best.expect("at least one trial");
    let ratio_f64 = crate::rational::rat_to_f64(&ratio);
    Ok(SearchResult {
        objective,
        n,
        trials: trials.max(1),
        seed,
        best_game,
        best_order,
        ratio,
        ratio_f64,
    })
}
