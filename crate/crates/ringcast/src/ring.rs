//! Core model of the multicast game on a ring: costs, loads, player costs,
//! the Rosenthal potential, the optimum network, and normalization of raw
//! instances into canonical form.
//!
//! Indexing follows the counter-clockwise convention: player `i` sits at
//! node `i`, edge `i` connects node `i-1` to node `i`, and edges `0` and `n`
//! are the two edges incident to the target `t`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{ensure_nonnegative, harmonic, rational_to_string, Rat};
use crate::{Error, Result};

/// One of the two ring strategies: `Left` is clockwise through edges
/// `i, i-1, ..., 0`; `Right` is counterclockwise through `i+1, ..., n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// A multicast ring game with `n` players and `n + 1` nonnegative edge costs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingGame {
    #[serde(with = "crate::rational::serde_rat_vec")]
    edge_costs: Vec<Rat>,
}

impl RingGame {
    pub fn new(edge_costs: Vec<Rat>) -> Result<Self> {
        if edge_costs.len() < 2 {
            return Err(Error::Validation(
                "a ring game needs at least 2 edges (n >= 1)".into(),
            ));
        }
        ensure_nonnegative(&edge_costs)?;
        Ok(RingGame { edge_costs })
    }

    pub fn from_i64(costs: &[i64]) -> Result<Self> {
        Self::new(costs.iter().map(|&c| crate::rational::rat_int(c)).collect())
    }

    /// Number of players.
    pub fn n(&self) -> usize {
        self.edge_costs.len() - 1
    }

    pub fn edge_costs(&self) -> &[Rat] {
        &self.edge_costs
    }

    pub fn edge_cost(&self, e: usize) -> &Rat {
        &self.edge_costs[e]
    }

    pub fn total_cost(&self) -> Rat {
        self.edge_costs.iter().sum()
    }

    /// Scales every edge cost by a positive rational.
    pub fn scaled(&self, lambda: &Rat) -> Result<Self> {
        RingGame::new(self.edge_costs.iter().map(|c| c * lambda).collect())
    }

    /// Mirror image of the ring: edge `i` maps to edge `n - i`, player `i`
    /// to player `n - 1 - i`. Left and right swap under this relabeling.
    pub fn mirrored(&self) -> Self {
        let mut costs = self.edge_costs.clone();
        costs.reverse();
        RingGame { edge_costs: costs }
    }

    /// Inclusive edge range of player `player` going in direction `dir`.
    pub fn path_edges(&self, player: usize, dir: Direction) -> Result<std::ops::RangeInclusive<usize>> {
        if player >= self.n() {
            return Err(Error::Validation(format!(
                "player {player} out of range (n = {})",
                self.n()
            )));
        }
        Ok(path_edges(player, dir, self.n()))
    }

    /// Number of users per edge under `profile`.
    pub fn edge_loads(&self, profile: &Profile) -> Result<EdgeLoads> {
        self.check_profile(profile)?;
        let mut loads = vec![0usize; self.n() + 1];
        for (i, &dir) in profile.directions().iter().enumerate() {
            for e in path_edges(i, dir, self.n()) {
                loads[e] += 1;
            }
        }
        Ok(EdgeLoads(loads))
    }

    /// Player `i`'s exact fair-share cost under `profile`.
    pub fn player_cost(&self, profile: &Profile, i: usize) -> Result<Rat> {
        let loads = self.edge_loads(profile)?;
        Ok(self.path_share(profile.direction(i), i, &loads, false))
    }

    /// Hypothetical cost of player `i` playing `dir` while everyone else
    /// keeps the strategy in `profile`. Loads are recomputed with `i` on the
    /// candidate path.
    pub fn hypothetical_cost(&self, profile: &Profile, i: usize, dir: Direction) -> Result<Rat> {
        self.check_profile(profile)?;
        let mut loads = self.edge_loads(profile)?;
        for e in path_edges(i, profile.direction(i), self.n()) {
            loads.0[e] -= 1;
        }
        Ok(self.path_share(dir, i, &loads, true))
    }

    fn path_share(&self, dir: Direction, i: usize, loads: &EdgeLoads, join: bool) -> Rat {
        let mut cost = Rat::zero();
        for e in path_edges(i, dir, self.n()) {
            let users = if join { loads.0[e] + 1 } else { loads.0[e] };
            debug_assert!(users > 0);
            cost += self.edge_cost(e) / Rat::from_integer(users.into());
        }
        cost
    }

    /// Sum of the costs of all edges used by at least one player.
    pub fn social_cost(&self, profile: &Profile) -> Result<Rat> {
        let loads = self.edge_loads(profile)?;
        Ok(self
            .edge_costs
            .iter()
            .zip(loads.0.iter())
            .filter(|(_, &l)| l > 0)
            .map(|(c, _)| c)
            .sum())
    }

    /// Rosenthal potential Φ = Σ_e c_e · H_{load(e)}, with H_0 = 0.
    pub fn potential(&self, profile: &Profile) -> Result<Rat> {
        let loads = self.edge_loads(profile)?;
        Ok(self
            .edge_costs
            .iter()
            .zip(loads.0.iter())
            .map(|(c, &l)| c * harmonic(l))
            .sum())
    }

    /// The optimum network: all edges except a most expensive one. Ties on
    /// the most expensive edge are broken toward the lowest index.
    pub fn optimum(&self) -> OptimumResult {
        let o = self
            .edge_costs
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
            .map(|(i, _)| i)
            .unwrap();
        let cost = self
            .edge_costs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != o)
            .map(|(_, c)| c)
            .sum();
        OptimumResult {
            dropped_edge: o,
            cost,
            profile: Profile::threshold(self.n(), o),
        }
    }

    pub fn check_profile(&self, profile: &Profile) -> Result<()> {
        if profile.len() != self.n() {
            return Err(Error::Dimension(format!(
                "profile has {} entries, game has {} players",
                profile.len(),
                self.n()
            )));
        }
        Ok(())
    }
}

pub fn path_edges(player: usize, dir: Direction, n: usize) -> std::ops::RangeInclusive<usize> {
    match dir {
        Direction::Left => 0..=player,
        Direction::Right => player + 1..=n,
    }
}

/// A pure strategy profile: one direction per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile(Vec<Direction>);

impl Profile {
    pub fn new(directions: Vec<Direction>) -> Self {
        Profile(directions)
    }

    /// Profile built from the bits of `code`: bit `i` set means player `i`
    /// goes `Right`. Used by exhaustive enumeration.
    pub fn from_code(code: usize, n: usize) -> Self {
        Profile(
            (0..n)
                .map(|i| {
                    if code >> i & 1 == 1 {
                        Direction::Right
                    } else {
                        Direction::Left
                    }
                })
                .collect(),
        )
    }

    /// Threshold profile leaving edge `e` unused: players `0..e` go left,
    /// players `e..n` go right.
    pub fn threshold(n: usize, e: usize) -> Self {
        Profile(
            (0..n)
                .map(|i| {
                    if i < e {
                        Direction::Left
                    } else {
                        Direction::Right
                    }
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn direction(&self, i: usize) -> Direction {
        self.0[i]
    }

    pub fn directions(&self) -> &[Direction] {
        &self.0
    }

    pub fn with(&self, i: usize, dir: Direction) -> Profile {
        let mut p = self.clone();
        p.0[i] = dir;
        p
    }

    pub fn set(&mut self, i: usize, dir: Direction) {
        self.0[i] = dir;
    }

    /// The single unused edge if this is a threshold profile, else `None`.
    /// A ring profile leaves an edge unused iff it is a threshold profile.
    pub fn unused_edge(&self, n: usize) -> Option<usize> {
        let e = self
            .0
            .iter()
            .position(|&d| d == Direction::Right)
            .unwrap_or(n);
        if self.0[..e].iter().all(|&d| d == Direction::Left)
            && self.0[e..].iter().all(|&d| d == Direction::Right)
        {
            Some(e)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for d in &self.0 {
            f.write_str(match d {
                Direction::Left => "L",
                Direction::Right => "R",
            })?;
        }
        Ok(())
    }
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.chars()
            .map(|c| match c {
                'L' => Ok(Direction::Left),
                'R' => Ok(Direction::Right),
                _ => Err(serde::de::Error::custom(format!("bad direction {c:?}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Profile)
    }
}

/// Per-edge user counts induced by a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeLoads(pub Vec<usize>);

/// A most expensive edge, the optimum cost, and the threshold profile
/// realizing the optimum network.
#[derive(Debug, Clone, Serialize)]
pub struct OptimumResult {
    pub dropped_edge: usize,
    #[serde(with = "crate::rational::serde_rat")]
    pub cost: Rat,
    pub profile: Profile,
}

/// A raw, possibly non-canonical ring instance: a cyclic sequence of nodes,
/// each hosting a multiset of players or the target, with weighted edges
/// between consecutive nodes (`edges[i]` connects `nodes[i]` to
/// `nodes[(i + 1) % len]`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawRingInstance {
    pub nodes: Vec<RawNode>,
    #[serde(with = "crate::rational::serde_rat_vec")]
    pub edges: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawNode {
    Target { target: bool },
    Players { players: Vec<u32> },
}

/// Canonicalization result: the normalized game plus the raw player id at
/// each canonical position.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalRing {
    pub game: RingGame,
    /// `player_ids[i]` is the raw identifier of canonical player `i`.
    pub player_ids: Vec<u32>,
}

/// Normalizes a raw ring so that every non-target node hosts exactly one
/// player: multi-player nodes are split into copies joined by zero-cost
/// edges, and player-free nodes are contracted by summing their two
/// adjacent edge costs. Edge 0 is the edge leaving the target toward the
/// first node after it in sequence order.
pub fn canonicalize(raw: &RawRingInstance) -> Result<CanonicalRing> {
    if raw.nodes.len() != raw.edges.len() {
        return Err(Error::Validation(format!(
            "ring is not cyclic: {} nodes but {} edges",
            raw.nodes.len(),
            raw.edges.len()
        )));
    }
    ensure_nonnegative(&raw.edges)?;
    let targets: Vec<usize> = raw
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, v)| matches!(v, RawNode::Target { target: true }))
        .map(|(i, _)| i)
        .collect();
    if targets.len() != 1 {
        return Err(Error::Validation(format!(
            "expected exactly one target node, found {}",
            targets.len()
        )));
    }
    let t = targets[0];
    let m = raw.nodes.len();

    let mut edge_costs: Vec<Rat> = Vec::new();
    let mut player_ids: Vec<u32> = Vec::new();
    let mut pending = Rat::zero(); // cost accumulated since the last emitted node

    for step in 0..m {
        let idx = (t + step) % m;
        // Edge from nodes[idx] to nodes[idx + 1].
        pending += &raw.edges[idx];
        let next = (idx + 1) % m;
        if next == t {
            break;
        }
        match &raw.nodes[next] {
            // The single target was counted above and next != t.
            RawNode::Target { target: true } => unreachable!(),
            RawNode::Target { target: false } => {
                return Err(Error::Validation("node marked target: false".into()));
            }
            RawNode::Players { players } if players.is_empty() => {
                // Contract: keep accumulating into `pending`.
            }
            RawNode::Players { players } => {
                let mut ids = players.clone();
                ids.sort_unstable();
                for (j, id) in ids.into_iter().enumerate() {
                    edge_costs.push(if j == 0 {
                        std::mem::take(&mut pending)
                    } else {
                        Rat::zero() // zero-cost edge between node copies
                    });
                    player_ids.push(id);
                }
            }
        }
    }
    edge_costs.push(pending); // closing edge back to the target

    if player_ids.is_empty() {
        return Err(Error::Validation("instance has no players".into()));
    }
    Ok(CanonicalRing {
        game: RingGame::new(edge_costs)?,
        player_ids,
    })
}

/// Instance file form of a canonical ring game: `{"n": 2, "edges": ["1", "0", "4"]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RingInstanceFile {
    pub n: usize,
    pub edges: Vec<String>,
}

impl RingGame {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("ring").is_some() {
            let raw = raw_from_json(&value)?;
            return Ok(canonicalize(&raw)?.game);
        }
        let file: RingInstanceFile =
            serde_json::from_value(value).map_err(|e| Error::Parse(format!("instance: {e}")))?;
        let costs = file
            .edges
            .iter()
            .map(|s| crate::rational::parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        if costs.len() != file.n + 1 {
            return Err(Error::Parse(format!(
                "field \"n\" is {} but {} edges were given (expected n + 1)",
                file.n,
                costs.len()
            )));
        }
        RingGame::new(costs)
    }

    pub fn to_json(&self) -> String {
        let file = RingInstanceFile {
            n: self.n(),
            edges: self.edge_costs.iter().map(rational_to_string).collect(),
        };
        serde_json::to_string_pretty(&file).unwrap()
    }
}

/// Raw instance file form:
/// `{"ring": [{"target": true}, {"players": [0, 1]}], "edges": ["1", "4"]}`.
fn raw_from_json(value: &serde_json::Value) -> Result<RawRingInstance> {
    #[derive(Deserialize)]
    struct RawFile {
        ring: Vec<RawNode>,
        edges: Vec<String>,
    }
    let file: RawFile = serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("raw instance: {e}")))?;
    let edges = file
        .edges
        .iter()
        .map(|s| crate::rational::parse_rational(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(RawRingInstance {
        nodes: file.ring,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn game(costs: &[i64]) -> RingGame {
        RingGame::from_i64(costs).unwrap()
    }

    #[test]
    fn path_edges_by_definition() {
        let g = game(&[1, 1, 1, 1]); // n = 3
        assert_eq!(g.path_edges(1, Direction::Left).unwrap(), 0..=1);
        assert_eq!(g.path_edges(1, Direction::Right).unwrap(), 2..=3);
        assert_eq!(g.path_edges(0, Direction::Left).unwrap(), 0..=0);
        assert!(g.path_edges(3, Direction::Left).is_err());
    }

    #[test]
    fn edge_loads_examples() {
        let g = game(&[1, 1, 1]); // n = 2
        let ll = Profile::new(vec![Direction::Left, Direction::Left]);
        assert_eq!(g.edge_loads(&ll).unwrap().0, vec![2, 1, 0]);
        let lr = Profile::new(vec![Direction::Left, Direction::Right]);
        assert_eq!(g.edge_loads(&lr).unwrap().0, vec![1, 0, 1]);

        let g3 = game(&[1, 1, 1, 1]); // n = 3
        let llr = Profile::new(vec![Direction::Left, Direction::Left, Direction::Right]);
        assert_eq!(g3.edge_loads(&llr).unwrap().0, vec![2, 1, 0, 1]);
    }

    /// The 26/19 worked instance: weights 6/19, 10/19, 3/19, 10/19.
    fn instance_26_19() -> RingGame {
        RingGame::new(vec![rat(6, 19), rat(10, 19), rat(3, 19), rat(10, 19)]).unwrap()
    }

    #[test]
    fn player_cost_examples() {
        let g = instance_26_19();
        let llr = Profile::new(vec![Direction::Left, Direction::Left, Direction::Right]);
        // player 1 left: 10/19 + (6/19)/2 = 13/19
        assert_eq!(g.player_cost(&llr, 1).unwrap(), rat(13, 19));

        let single = game(&[2, 5]);
        let p = Profile::new(vec![Direction::Left]);
        assert_eq!(single.player_cost(&p, 0).unwrap(), rat_int(2));
    }

    #[test]
    fn social_cost_examples() {
        let g = instance_26_19();
        let llr = Profile::new(vec![Direction::Left, Direction::Left, Direction::Right]);
        assert_eq!(g.social_cost(&llr).unwrap(), rat(26, 19));

        let zeros = game(&[0, 0, 0]);
        let p = Profile::from_code(0, 2);
        assert_eq!(zeros.social_cost(&p).unwrap(), rat_int(0));

        let g2 = game(&[1, 1, 1]);
        let lr = Profile::new(vec![Direction::Left, Direction::Right]);
        assert_eq!(g2.social_cost(&lr).unwrap(), rat_int(2));
    }

    #[test]
    fn potential_examples() {
        let g = game(&[1, 0, 1]);
        let ll = Profile::new(vec![Direction::Left, Direction::Left]);
        assert_eq!(g.potential(&ll).unwrap(), rat(3, 2));

        let g19 = instance_26_19();
        let llr = Profile::new(vec![Direction::Left, Direction::Left, Direction::Right]);
        // (6/19)·H_2 + (10/19)·H_1 + (10/19)·H_1 = 29/19
        assert_eq!(g19.potential(&llr).unwrap(), rat(29, 19));
    }

    #[test]
    fn degenerate_game_rejected() {
        assert!(RingGame::from_i64(&[5]).is_err());
        assert!(RingGame::new(vec![rat(-1, 2), rat_int(1)]).is_err());
    }

    #[test]
    fn optimum_examples() {
        let g = instance_26_19();
        let opt = g.optimum();
        assert_eq!(opt.dropped_edge, 1); // tie between edges 1 and 3, lowest wins
        assert_eq!(opt.cost, rat_int(1));

        let g2 = game(&[1, 2, 3]);
        let opt2 = g2.optimum();
        assert_eq!(opt2.dropped_edge, 2);
        assert_eq!(opt2.cost, rat_int(3));
        assert_eq!(
            opt2.profile,
            Profile::new(vec![Direction::Left, Direction::Left])
        );
    }

    #[test]
    fn cost_conservation() {
        let g = instance_26_19();
        for code in 0..8usize {
            let p = Profile::from_code(code, 3);
            let total: Rat = (0..3).map(|i| g.player_cost(&p, i).unwrap()).sum();
            assert_eq!(total, g.social_cost(&p).unwrap());
        }
    }

    #[test]
    fn unused_edge_detection() {
        assert_eq!(Profile::threshold(3, 2).unused_edge(3), Some(2));
        assert_eq!(Profile::threshold(3, 0).unused_edge(3), Some(0));
        assert_eq!(Profile::threshold(3, 3).unused_edge(3), Some(3));
        let mixed = Profile::new(vec![Direction::Right, Direction::Left, Direction::Left]);
        assert_eq!(mixed.unused_edge(3), None);
    }

    #[test]
    fn canonicalize_contracts_empty_nodes() {
        // t -(1)- u(player 0) -(2)- v(empty) -(3)- t  =>  n = 1, edges [1, 5]
        let raw = RawRingInstance {
            nodes: vec![
                RawNode::Target { target: true },
                RawNode::Players { players: vec![0] },
                RawNode::Players { players: vec![] },
            ],
            edges: vec![rat_int(1), rat_int(2), rat_int(3)],
        };
        let canon = canonicalize(&raw).unwrap();
        assert_eq!(canon.game.edge_costs(), &[rat_int(1), rat_int(5)]);
        assert_eq!(canon.player_ids, vec![0]);
    }

    #[test]
    fn canonicalize_splits_shared_nodes() {
        // t -(1)- u(players 0, 1) -(4)- t  =>  n = 2, edges [1, 0, 4]
        let raw = RawRingInstance {
            nodes: vec![
                RawNode::Target { target: true },
                RawNode::Players {
                    players: vec![1, 0],
                },
            ],
            edges: vec![rat_int(1), rat_int(4)],
        };
        let canon = canonicalize(&raw).unwrap();
        assert_eq!(
            canon.game.edge_costs(),
            &[rat_int(1), rat_int(0), rat_int(4)]
        );
        assert_eq!(canon.player_ids, vec![0, 1]);
    }

    #[test]
    fn canonicalize_identity_on_canonical_input() {
        let raw = RawRingInstance {
            nodes: vec![
                RawNode::Target { target: true },
                RawNode::Players { players: vec![0] },
                RawNode::Players { players: vec![1] },
            ],
            edges: vec![rat_int(2), rat_int(1), rat_int(2)],
        };
        let canon = canonicalize(&raw).unwrap();
        assert_eq!(
            canon.game.edge_costs(),
            &[rat_int(2), rat_int(1), rat_int(2)]
        );
    }

    #[test]
    fn canonicalize_rejects_malformed_rings() {
        let no_target = RawRingInstance {
            nodes: vec![RawNode::Players { players: vec![0] }],
            edges: vec![rat_int(1)],
        };
        assert!(canonicalize(&no_target).is_err());

        let not_cyclic = RawRingInstance {
            nodes: vec![
                RawNode::Target { target: true },
                RawNode::Players { players: vec![0] },
            ],
            edges: vec![rat_int(1)],
        };
        assert!(canonicalize(&not_cyclic).is_err());
    }

    #[test]
    fn instance_json_round_trip() {
        let g = instance_26_19();
        let text = g.to_json();
        let back = RingGame::from_json(&text).unwrap();
        assert_eq!(g, back);

        let raw_text = r#"{"ring": [{"target": true}, {"players": [0, 1]}], "edges": ["1", "4"]}"#;
        let canon = RingGame::from_json(raw_text).unwrap();
        assert_eq!(canon.edge_costs(), &[rat_int(1), rat_int(0), rat_int(4)]);

        assert!(RingGame::from_json(r#"{"n": 3, "edges": ["1"]}"#).is_err());
    }
}
