//! Nash equilibria, best-response dynamics, potential optima, and the
//! static quality ratios (PoA, PoS, POPoA) on rings.
//!
//! Equilibrium membership uses weak inequalities (a tie counts as stable),
//! while a deviation in dynamics requires a strict improvement. This makes
//! limit instances like the 4/3 family realizable exactly.

use num_traits::Zero;
use serde::Serialize;

use crate::rational::Rat;
use crate::ring::{Direction, Profile, RingGame};
use crate::{Error, Result};

/// Default cap on exhaustive 2^n profile enumeration.
pub const ENUMERATION_LIMIT: usize = 16;

/// How to resolve exact cost ties between the two directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TieBreak {
    PreferLeft,
    PreferRight,
    /// Keep the current strategy. Only meaningful when one exists; callers
    /// without a current strategy fall back to `PreferLeft`.
    Stay,
}

/// The direction minimizing player `i`'s cost with all other strategies
/// fixed; exact ties resolved by `tie`.
pub fn best_response(
    game: &RingGame,
    profile: &Profile,
    i: usize,
    tie: TieBreak,
) -> Result<Direction> {
    let left = game.hypothetical_cost(profile, i, Direction::Left)?;
    let right = game.hypothetical_cost(profile, i, Direction::Right)?;
    Ok(match left.cmp(&right) {
        std::cmp::Ordering::Less => Direction::Left,
        std::cmp::Ordering::Greater => Direction::Right,
        std::cmp::Ordering::Equal => match tie {
            TieBreak::PreferLeft => Direction::Left,
            TieBreak::PreferRight => Direction::Right,
            TieBreak::Stay => profile.direction(i),
        },
    })
}

/// True iff no player can strictly reduce her cost by switching direction.
pub fn is_nash(game: &RingGame, profile: &Profile) -> Result<bool> {
    for i in 0..game.n() {
        let current = game.hypothetical_cost(profile, i, profile.direction(i))?;
        let other = game.hypothetical_cost(profile, i, profile.direction(i).flipped())?;
        if other < current {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive Nash enumeration report.
#[derive(Debug, Clone, Serialize)]
pub struct NashReport {
    pub equilibria: Vec<Profile>,
    #[serde(with = "crate::rational::serde_rat")]
    pub best_cost: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub worst_cost: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub optimum_cost: Rat,
    /// Worst equilibrium cost over optimum cost.
    #[serde(with = "crate::rational::serde_rat")]
    pub poa: Rat,
    /// Best equilibrium cost over optimum cost.
    #[serde(with = "crate::rational::serde_rat")]
    pub pos: Rat,
    pub best_witness: Profile,
    pub worst_witness: Profile,
}

pub fn enumerate_nash(game: &RingGame) -> Result<NashReport> {
    enumerate_nash_with_limit(game, ENUMERATION_LIMIT)
}

/// Tests all 2^n profiles. Refuses when n exceeds `limit`.
pub fn enumerate_nash_with_limit(game: &RingGame, limit: usize) -> Result<NashReport> {
    let n = game.n();
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "exhaustive Nash enumeration",
            n,
            limit,
            hint: "raise the limit or use sampled analyses",
        });
    }
    let optimum = game.optimum();
    let mut equilibria = Vec::new();
    let mut best: Option<(Rat, Profile)> = None;
    let mut worst: Option<(Rat, Profile)> = None;
    for code in 0..1usize << n {
        let p = Profile::from_code(code, n);
        if is_nash(game, &p)? {
            let cost = game.social_cost(&p)?;
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost.clone(), p.clone()));
            }
            if worst.as_ref().map_or(true, |(c, _)| cost > *c) {
                worst = Some((cost.clone(), p.clone()));
            }
            equilibria.push(p);
        }
    }
    // A potential game always has at least one pure equilibrium.
    let (best_cost, best_witness) = best.unwrap();
    let (worst_cost, worst_witness) = worst.unwrap();
    let ratio = |c: &Rat| {
        if optimum.cost.is_zero() {
            Rat::from_integer(1.into())
        } else {
            c / &optimum.cost
        }
    };
    Ok(NashReport {
        poa: ratio(&worst_cost),
        pos: ratio(&best_cost),
        equilibria,
        best_cost,
        worst_cost,
        optimum_cost: optimum.cost,
        best_witness,
        worst_witness,
    })
}

/// Move schedule for best-response dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Cycle over players 0..n until a full pass makes no move.
    RoundRobin,
    /// The chain from the optimum profile: starting at the endpoints of the
    /// dropped edge `o`, let players `o-1, o-2, ...` (or `o, o+1, ...` on
    /// the mirrored side) deviate while they strictly improve.
    Chain,
}

#[derive(Debug, Clone, Serialize)]
pub struct DynamicsStep {
    pub player: usize,
    pub old_direction: Direction,
    pub new_direction: Direction,
    #[serde(with = "crate::rational::serde_rat")]
    pub cost_before: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub cost_after: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub potential_before: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub potential_after: Rat,
}

pub type DynamicsTrace = Vec<DynamicsStep>;

/// Runs best-response dynamics from `start`; deviations require strict
/// improvement, so the potential strictly decreases and termination is
/// guaranteed. Returns the reached Nash profile and the full trace.
pub fn best_response_dynamics(
    game: &RingGame,
    start: &Profile,
    schedule: Schedule,
    tie: TieBreak,
) -> Result<(Profile, DynamicsTrace)> {
    game.check_profile(start)?;
    let mut profile = start.clone();
    let mut trace = Vec::new();
    match schedule {
        Schedule::RoundRobin => loop {
            let mut moved = false;
            for i in 0..game.n() {
                if try_improve(game, &mut profile, i, tie, &mut trace)? {
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        },
        Schedule::Chain => {
            let o = game.optimum().dropped_edge;
            // Key fact: with the edge o unused, only its incident players can
            // be the first improvers. Try the descending chain o-1, o-2, ...
            // and the ascending chain o, o+1, ... from the mirrored side.
            let descending: Vec<usize> = (0..o).rev().collect();
            let ascending: Vec<usize> = (o..game.n()).collect();
            let chain = if descending
                .first()
                .map_or(false, |&i| strictly_improves(game, &profile, i).unwrap_or(false))
            {
                descending
            } else {
                ascending
            };
            for i in chain {
                if !try_improve(game, &mut profile, i, tie, &mut trace)? {
                    break;
                }
            }
        }
    }
    Ok((profile, trace))
}

fn strictly_improves(game: &RingGame, profile: &Profile, i: usize) -> Result<bool> {
    let current = game.hypothetical_cost(profile, i, profile.direction(i))?;
    let other = game.hypothetical_cost(profile, i, profile.direction(i).flipped())?;
    Ok(other < current)
}

fn try_improve(
    game: &RingGame,
    profile: &mut Profile,
    i: usize,
    tie: TieBreak,
    trace: &mut DynamicsTrace,
) -> Result<bool> {
    if !strictly_improves(game, profile, i)? {
        return Ok(false);
    }
    let old = profile.direction(i);
    let new = best_response(game, profile, i, tie)?;
    debug_assert_ne!(old, new);
    let cost_before = game.hypothetical_cost(profile, i, old)?;
    let potential_before = game.potential(profile)?;
    profile.set(i, new);
    let cost_after = game.player_cost(profile, i)?;
    let potential_after = game.potential(profile)?;
    debug_assert!(potential_after < potential_before);
    trace.push(DynamicsStep {
        player: i,
        old_direction: old,
        new_direction: new,
        cost_before,
        cost_after,
        potential_before,
        potential_after,
    });
    Ok(true)
}

/// For a profile leaving edge `e` unused: if the profile is not a Nash
/// equilibrium, one of the unused edge's incident players (`e-1` or `e`)
/// strictly improves by switching; returns such a player, or `None` when
/// the profile is an equilibrium.
pub fn improving_endpoint(game: &RingGame, profile: &Profile) -> Result<Option<usize>> {
    game.check_profile(profile)?;
    let e = profile.unused_edge(game.n()).ok_or_else(|| {
        Error::NotApplicable("profile uses every edge; no unused edge to inspect".into())
    })?;
    if is_nash(game, profile)? {
        return Ok(None);
    }
    // Incident players of edge e (nodes e-1 and e), clipped to the ring.
    let candidates = [e.checked_sub(1), (e < game.n()).then_some(e)];
    for i in candidates.into_iter().flatten() {
        if strictly_improves(game, profile, i)? {
            return Ok(Some(i));
        }
    }
    // The endpoint argument guarantees one of the candidates improves.
    unreachable!("non-Nash threshold profile without an improving endpoint");
}

/// All profiles attaining the exact minimum of the potential.
pub fn potential_minima(game: &RingGame) -> Result<Vec<Profile>> {
    potential_minima_with_limit(game, ENUMERATION_LIMIT)
}

pub fn potential_minima_with_limit(game: &RingGame, limit: usize) -> Result<Vec<Profile>> {
    let n = game.n();
    if n > limit {
        return Err(Error::LimitExceeded {
            what: "potential minimization",
            n,
            limit,
            hint: "raise the limit or use the threshold-profile LP",
        });
    }
    let mut minima: Vec<Profile> = Vec::new();
    let mut min: Option<Rat> = None;
    for code in 0..1usize << n {
        let p = Profile::from_code(code, n);
        let phi = game.potential(&p)?;
        match &min {
            Some(m) if phi > *m => {}
            Some(m) if phi == *m => minima.push(p),
            _ => {
                min = Some(phi);
                minima = vec![p];
            }
        }
    }
    Ok(minima)
}

/// Potential-optimum price of anarchy/stability summary.
#[derive(Debug, Clone, Serialize)]
pub struct PopoaReport {
    /// Worst potential-optimum cost over optimum cost (POPoA).
    #[serde(with = "crate::rational::serde_rat")]
    pub worst_ratio: Rat,
    /// Best potential-optimum cost over optimum cost (POPoS).
    #[serde(with = "crate::rational::serde_rat")]
    pub best_ratio: Rat,
    pub worst_witness: Profile,
    pub best_witness: Profile,
    pub minima_count: usize,
}

/// (worst, best) social cost over the potential minima, divided by optimum.
pub fn popoa(game: &RingGame) -> Result<PopoaReport> {
    popoa_with_limit(game, ENUMERATION_LIMIT)
}

pub fn popoa_with_limit(game: &RingGame, limit: usize) -> Result<PopoaReport> {
    let minima = potential_minima_with_limit(game, limit)?;
    let optimum = game.optimum();
    let mut best: Option<(Rat, Profile)> = None;
    let mut worst: Option<(Rat, Profile)> = None;
    for p in &minima {
        let cost = game.social_cost(p)?;
        if best.as_ref().map_or(true, |(c, _)| cost < *c) {
            best = Some((cost.clone(), p.clone()));
        }
        if worst.as_ref().map_or(true, |(c, _)| cost > *c) {
            worst = Some((cost, p.clone()));
        }
    }
    let (best_cost, best_witness) = best.unwrap();
    let (worst_cost, worst_witness) = worst.unwrap();
    let ratio = |c: &Rat| {
        if optimum.cost.is_zero() {
            Rat::from_integer(1.into())
        } else {
            c / &optimum.cost
        }
    };
    Ok(PopoaReport {
        worst_ratio: ratio(&worst_cost),
        best_ratio: ratio(&best_cost),
        worst_witness,
        best_witness,
        minima_count: minima.len(),
    })
}

/// A POPoA lower-bound instance realized from the threshold-profile LP.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyInstance {
    pub game: RingGame,
    /// Social cost of the intended potential minimizer over optimum cost,
    /// as reported by the LP objective.
    pub lp_value: f64,
    /// Index of the edge the intended potential minimizer leaves unused.
    pub unused_edge: usize,
    /// False when the LP was solved in floating point and the game costs
    /// are rounded rationals.
    pub exact: bool,
}

/// Builds the POPoA lower-bound instance with size parameter `l` on a ring
/// of `n` players by maximizing the cost of the threshold profile missing
/// edge `p = l - 1` subject to it minimizing the potential among threshold
/// profiles and edge `n` being the most expensive.
pub fn popoa_family_instance(l: usize, n: usize) -> Result<FamilyInstance> {
    if l == 0 {
        return Err(Error::Validation("family parameter l must be >= 1".into()));
    }
    if n <= 2 * l + 2 {
        return Err(Error::Validation(format!(
            "family construction needs n > 2l + 2 (got l = {l}, n = {n})"
        )));
    }
    crate::lp::solve_popoa_instance(n, l - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn game(costs: &[i64]) -> RingGame {
        RingGame::from_i64(costs).unwrap()
    }

    fn profile(s: &str) -> Profile {
        Profile::new(
            s.chars()
                .map(|c| if c == 'L' { Direction::Left } else { Direction::Right })
                .collect(),
        )
    }

    fn instance_26_19() -> RingGame {
        RingGame::new(vec![rat(6, 19), rat(10, 19), rat(3, 19), rat(10, 19)]).unwrap()
    }

    #[test]
    fn best_response_examples() {
        // Player 1 in [2,1,2] under (L,L): left 1 + 2/2 = 2, right 2 -> tie.
        let g = game(&[2, 1, 2]);
        let p = profile("LL");
        assert_eq!(best_response(&g, &p, 1, TieBreak::Stay).unwrap(), Direction::Left);
        assert_eq!(
            best_response(&g, &p, 1, TieBreak::PreferRight).unwrap(),
            Direction::Right
        );

        let g1 = game(&[1, 3]);
        for p in [profile("L"), profile("R")] {
            assert_eq!(
                best_response(&g1, &p, 0, TieBreak::PreferRight).unwrap(),
                Direction::Left
            );
        }

        // Player 2 in the 26/19 instance under (L,L,L): left 10/19 = right.
        let g19 = instance_26_19();
        let p = profile("LLL");
        assert_eq!(
            g19.hypothetical_cost(&p, 2, Direction::Left).unwrap(),
            rat(10, 19)
        );
        assert_eq!(
            g19.hypothetical_cost(&p, 2, Direction::Right).unwrap(),
            rat(10, 19)
        );
        assert_eq!(
            best_response(&g19, &p, 2, TieBreak::PreferRight).unwrap(),
            Direction::Right
        );
    }

    #[test]
    fn is_nash_examples() {
        let g = game(&[2, 1, 2]);
        // (L,R): both players pay 2 with alternative 1 + 2/2 = 2 -> weakly stable.
        assert!(is_nash(&g, &profile("LR")).unwrap());
        // (L,L): player 1 pays 2, alternative 2 -> weakly stable.
        assert!(is_nash(&g, &profile("LL")).unwrap());

        let g1 = game(&[1, 2]);
        assert!(!is_nash(&g1, &profile("R")).unwrap());
    }

    #[test]
    fn enumerate_nash_poa_example() {
        // a_0 = 1, middle edges 0, a_n = n - eps: all-Right is an equilibrium
        // of cost n - eps while the optimum costs 1.
        let n = 4;
        let mut costs = vec![rat_int(1)];
        costs.extend(std::iter::repeat(rat_int(0)).take(n - 1));
        costs.push(rat_int(n as i64) - rat(1, 1000));
        let g = RingGame::new(costs).unwrap();
        let report = enumerate_nash(&g).unwrap();
        assert_eq!(report.optimum_cost, rat_int(1));
        assert!(report.equilibria.contains(&profile("RRRR")));
        assert_eq!(report.poa, rat_int(4) - rat(1, 1000));
    }

    #[test]
    fn enumerate_nash_symmetric_single_player() {
        let g = game(&[1, 1]);
        let report = enumerate_nash(&g).unwrap();
        assert_eq!(report.equilibria.len(), 2);
        assert_eq!(report.poa, rat_int(1));
        assert_eq!(report.pos, rat_int(1));
    }

    /// The exact [2,1,2] instance has the weak equilibria (L,L) and (R,R)
    /// of optimum cost 3, so its PoS is 1; the strict 4/3 family perturbs
    /// the middle edge up: [2, 1+eps, 2].
    #[test]
    fn pos_four_thirds_family() {
        let exact = game(&[2, 1, 2]);
        let report = enumerate_nash(&exact).unwrap();
        assert_eq!(report.pos, rat_int(1));
        assert!(report.equilibria.contains(&profile("LL")));
        assert!(report.equilibria.contains(&profile("LR")));

        let eps = rat(1, 1000);
        let g = RingGame::new(vec![rat_int(2), rat_int(1) + &eps, rat_int(2)]).unwrap();
        let report = enumerate_nash(&g).unwrap();
        // (L,R) is the unique equilibrium: cost 4, optimum 3 + eps.
        assert_eq!(report.equilibria, vec![profile("LR")]);
        assert_eq!(report.pos, rat_int(4) / (rat_int(3) + &eps));
        assert_eq!(report.poa, report.pos);
    }

    #[test]
    fn dynamics_terminates_at_weak_equilibrium() {
        let g = game(&[2, 1, 2]);
        let start = g.optimum().profile;
        let (reached, trace) = best_response_dynamics(&g, &start, Schedule::Chain, TieBreak::Stay).unwrap();
        assert!(trace.is_empty());
        assert_eq!(reached, start);
        assert!(is_nash(&g, &reached).unwrap());
    }

    #[test]
    fn dynamics_on_nash_start_is_empty() {
        let g = game(&[2, 1, 2]);
        let p = profile("LR");
        let (reached, trace) =
            best_response_dynamics(&g, &p, Schedule::RoundRobin, TieBreak::Stay).unwrap();
        assert!(trace.is_empty());
        assert_eq!(reached, p);
    }

    /// Chain dynamics on a ring where the optimum profile is unstable: with
    /// costs [20, 15, 24] the optimum drops edge 2 and player 1 strictly
    /// prefers the right path (24 < 15 + 20/2), after which the profile
    /// stabilizes.
    #[test]
    fn chain_dynamics_moves_an_endpoint() {
        let g = game(&[20, 15, 24]);
        let opt = g.optimum();
        assert_eq!(opt.dropped_edge, 2);
        assert!(!is_nash(&g, &opt.profile).unwrap());
        let (reached, trace) =
            best_response_dynamics(&g, &opt.profile, Schedule::Chain, TieBreak::Stay).unwrap();
        assert!(!trace.is_empty());
        assert_eq!(trace[0].player, 1);
        assert!(is_nash(&g, &reached).unwrap());
        // Potential strictly decreases along the trace.
        for step in &trace {
            assert!(step.potential_after < step.potential_before);
            assert!(step.cost_after < step.cost_before);
        }
    }

    #[test]
    fn improving_endpoint_examples() {
        // PoA family: the optimum (all-Right) is already stable.
        let g = RingGame::new(vec![
            rat_int(1),
            rat_int(0),
            rat_int(0),
            rat_int(0),
            rat_int(4) - rat(1, 1000),
        ])
        .unwrap();
        let opt = g.optimum();
        assert_eq!(improving_endpoint(&g, &opt.profile).unwrap(), None);

        // Unstable optimum: endpoint player 1 improves.
        let g2 = game(&[20, 15, 24]);
        assert_eq!(improving_endpoint(&g2, &g2.optimum().profile).unwrap(), Some(1));

        // All edges used -> not applicable.
        let g3 = game(&[1, 1, 1]);
        let mixed = profile("RL");
        assert!(matches!(
            improving_endpoint(&g3, &mixed),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn potential_minima_examples() {
        let g1 = game(&[1, 2]);
        assert_eq!(potential_minima(&g1).unwrap(), vec![profile("L")]);

        // [2,1,2]: Φ(LL) = Φ(LR) = Φ(RR) = 4, Φ(RL) = 11/2.
        let g = game(&[2, 1, 2]);
        let minima = potential_minima(&g).unwrap();
        assert_eq!(minima.len(), 3);
        assert!(minima.contains(&profile("LL")));
        assert!(minima.contains(&profile("LR")));
        assert!(minima.contains(&profile("RR")));

        let zeros = game(&[0, 0, 0]);
        assert_eq!(potential_minima(&zeros).unwrap().len(), 4);
    }

    #[test]
    fn popoa_examples() {
        let g1 = game(&[3, 7]);
        let r = popoa(&g1).unwrap();
        assert_eq!(r.worst_ratio, rat_int(1));
        assert_eq!(r.best_ratio, rat_int(1));

        // [2,1,2]: minima costs are 3, 4, 3 -> worst 4/3, best 1.
        let g = game(&[2, 1, 2]);
        let r = popoa(&g).unwrap();
        assert_eq!(r.worst_ratio, rat(4, 3));
        assert_eq!(r.best_ratio, rat_int(1));
    }

    #[test]
    fn every_potential_minimum_is_nash() {
        for costs in [
            vec![2i64, 1, 2],
            vec![1, 5, 2, 4],
            vec![3, 0, 1, 7, 2],
            vec![1, 1, 6, 3, 4],
        ] {
            let g = game(&costs);
            for p in potential_minima(&g).unwrap() {
                assert!(is_nash(&g, &p).unwrap(), "{costs:?} {p}");
            }
        }
    }

    #[test]
    fn enumeration_limit_refusal() {
        let g = RingGame::new(vec![rat_int(1); 20]).unwrap();
        assert!(matches!(
            enumerate_nash_with_limit(&g, 16),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn popoa_family_degenerate_l_rejected() {
        assert!(popoa_family_instance(0, 10).is_err());
        assert!(popoa_family_instance(3, 8).is_err());
    }
}
