//! Multicast games on general undirected graphs: exact Steiner-tree
//! optimum, DFS arrival order, myopic sequential play through shared-cost
//! shortest paths, and verification of the factor-4 bound with its proof
//! quantities.

use std::collections::BinaryHeap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{parse_rational, rat, rational_to_string, serde_rat, Rat};
use crate::ring::RingGame;
use crate::sequential::ArrivalOrder;
use crate::{Error, Result};

/// Largest terminal count for the exact Steiner computation (subset DP is
/// exponential in the number of terminals).
pub const STEINER_TERMINAL_LIMIT: usize = 12;

/// Undirected multicast game: every source routes to the common target,
/// sharing each edge's cost equally among its users.
#[derive(Debug, Clone)]
pub struct MulticastGame {
    pub vertices: usize,
    /// (u, v, cost); parallel edges and the order of endpoints carry no
    /// meaning beyond identification by index.
    pub edges: Vec<(usize, usize, Rat)>,
    pub sources: Vec<usize>,
    pub target: usize,
}

#[derive(Serialize, Deserialize)]
struct MulticastGameWire {
    vertices: usize,
    edges: Vec<(usize, usize, String)>,
    sources: Vec<usize>,
    target: usize,
}

impl Serialize for MulticastGame {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MulticastGameWire {
            vertices: self.vertices,
            edges: self
                .edges
                .iter()
                .map(|(u, v, c)| (*u, *v, rational_to_string(c)))
                .collect(),
            sources: self.sources.clone(),
            target: self.target,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MulticastGame {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = MulticastGameWire::deserialize(d)?;
        let edges = w
            .edges
            .into_iter()
            .map(|(u, v, c)| Ok((u, v, parse_rational(&c).map_err(serde::de::Error::custom)?)))
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        let game = MulticastGame {
            vertices: w.vertices,
            edges,
            sources: w.sources,
            target: w.target,
        };
        game.validate().map_err(serde::de::Error::custom)?;
        Ok(game)
    }
}

impl MulticastGame {
    pub fn new(
        vertices: usize,
        edges: Vec<(usize, usize, Rat)>,
        sources: Vec<usize>,
        target: usize,
    ) -> Result<Self> {
        let g = MulticastGame {
            vertices,
            edges,
            sources,
            target,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.target >= self.vertices {
            return Err(Error::Validation(format!(
                "target {} out of range for {} vertices",
                self.target, self.vertices
            )));
        }
        for &s in &self.sources {
            if s >= self.vertices {
                return Err(Error::Validation(format!("source {s} out of range")));
            }
        }
        for (i, (u, v, c)) in self.edges.iter().enumerate() {
            if *u >= self.vertices || *v >= self.vertices {
                return Err(Error::Validation(format!("edge {i} endpoint out of range")));
            }
            if c < &Rat::zero() {
                return Err(Error::Validation(format!(
                    "edge {i} has negative cost {}",
                    rational_to_string(c)
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.sources.len()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn adjacency(&self, restrict: Option<&[usize]>) -> Vec<Vec<(usize, usize)>> {
        // vertex -> (neighbor, edge index)
        let mut adj = vec![Vec::new(); self.vertices];
        match restrict {
            Some(idx) => {
                for &i in idx {
                    let (u, v, _) = self.edges[i];
                    adj[u].push((v, i));
                    adj[v].push((u, i));
                }
            }
            None => {
                for (i, &(u, v, _)) in self.edges.iter().enumerate() {
                    adj[u].push((v, i));
                    adj[v].push((u, i));
                }
            }
        }
        for a in adj.iter_mut() {
            a.sort();
        }
        adj
    }

    /// Deterministic Dijkstra from `from` under the given edge weights:
    /// settles each vertex with the minimum cost, breaking ties by the
    /// lexicographically smallest vertex sequence. Returns per-vertex cost
    /// and edge-index path.
    fn shortest_paths(
        &self,
        from: usize,
        weights: &[Rat],
    ) -> (Vec<Option<Rat>>, Vec<Vec<usize>>) {
        #[derive(PartialEq, Eq)]
        struct Label(Rat, Vec<usize>, Vec<usize>, usize); // cost, vpath, epath, vertex
        impl Ord for Label {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                // BinaryHeap is a max-heap; invert for min extraction.
                (&other.0, &other.1).cmp(&(&self.0, &self.1))
            }
        }
        impl PartialOrd for Label {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        // Ties in cost are broken by lexicographic vertex path, with the
        // target sorted first: on ring embeddings this coincides with the
        // ring convention of preferring the lower-indexed direction.
        let key = |v: usize| if v == self.target { 0 } else { v + 1 };
        let adj = self.adjacency(None);
        let mut cost = vec![None; self.vertices];
        let mut path = vec![Vec::new(); self.vertices];
        let mut heap = BinaryHeap::new();
        heap.push(Label(Rat::zero(), vec![key(from)], Vec::new(), from));
        while let Some(Label(c, vpath, epath, v)) = heap.pop() {
            if cost[v].is_some() {
                continue;
            }
            cost[v] = Some(c.clone());
            path[v] = epath.clone();
            for &(w, ei) in &adj[v] {
                if cost[w].is_none() {
                    let mut vp = vpath.clone();
                    vp.push(key(w));
                    let mut ep = epath.clone();
                    ep.push(ei);
                    heap.push(Label(&c + &weights[ei], vp, ep, w));
                }
            }
        }
        (cost, path)
    }

    fn base_weights(&self) -> Vec<Rat> {
        self.edges.iter().map(|(_, _, c)| c.clone()).collect()
    }

    /// Distinct terminal vertices: the sources plus the target.
    pub fn terminals(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.sources.clone();
        t.push(self.target);
        t.sort_unstable();
        t.dedup();
        t
    }
}

/// Tree spanning all terminals, by edge indices into the game.
#[derive(Debug, Clone, Serialize)]
pub struct SteinerTree {
    pub edge_indices: Vec<usize>,
    #[serde(with = "serde_rat")]
    pub cost: Rat,
    /// False when produced by the 2-approximation fallback.
    pub exact: bool,
}

/// Minimum-cost Steiner tree by dynamic programming over terminal
/// subsets. Exponential in the terminal count; refuses beyond
/// `STEINER_TERMINAL_LIMIT` and suggests the approximate fallback.
pub fn steiner_tree_exact(game: &MulticastGame) -> Result<SteinerTree> {
    let terms = game.terminals();
    if terms.len() > STEINER_TERMINAL_LIMIT {
        return Err(Error::LimitExceeded {
            what: "exact Steiner terminal count",
            n: terms.len(),
            limit: STEINER_TERMINAL_LIMIT,
            hint: "use steiner_tree_approx (2-approximation, flagged)",
        });
    }
    if terms.len() <= 1 {
        return Ok(SteinerTree {
            edge_indices: Vec::new(),
            cost: Rat::zero(),
            exact: true,
        });
    }

    let weights = game.base_weights();
    let nv = game.vertices;
    let mut dist: Vec<Vec<Option<Rat>>> = Vec::with_capacity(nv);
    let mut paths: Vec<Vec<Vec<usize>>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let (d, p) = game.shortest_paths(v, &weights);
        dist.push(d);
        paths.push(p);
    }
    for &t in &terms {
        for &u in &terms {
            if dist[t][u].is_none() {
                return Err(Error::Infeasible(format!(
                    "terminals {t} and {u} are disconnected"
                )));
            }
        }
    }

    // Dreyfus-Wagner over the source terminals, rooted at the target.
    let base: Vec<usize> = terms
        .iter()
        .copied()
        .filter(|&v| v != game.target)
        .collect();
    let k = base.len();
    let full = (1usize << k) - 1;
    let inf: Option<Rat> = None;

    #[derive(Clone)]
    enum Merge {
        Single,
        Split(usize),
    }
    // merged[s][v]: best tree for subset s whose "junction" is v, before
    // attaching v to the rest; dp[s][v]: after routing junction u to v.
    let mut dp: Vec<Vec<Option<Rat>>> = vec![vec![inf.clone(); nv]; full + 1];
    let mut dp_via: Vec<Vec<usize>> = vec![vec![usize::MAX; nv]; full + 1];
    let mut merge_choice: Vec<Vec<Merge>> = vec![vec![Merge::Single; nv]; full + 1];

    for s in 1..=full {
        let mut merged: Vec<Option<Rat>> = vec![None; nv];
        if s.count_ones() == 1 {
            let t = base[s.trailing_zeros() as usize];
            for v in 0..nv {
                merged[v] = dist[t][v].clone();
            }
        } else {
            for v in 0..nv {
                let mut sub = (s - 1) & s;
                while sub > 0 {
                    if sub < s - sub {
                        break; // each split visited once
                    }
                    if let (Some(a), Some(b)) = (&dp[sub][v], &dp[s ^ sub][v]) {
                        let c = a + b;
                        if merged[v].as_ref().map_or(true, |m| c < *m) {
                            merged[v] = Some(c);
                            merge_choice[s][v] = Merge::Split(sub);
                        }
                    }
                    sub = (sub - 1) & s;
                }
            }
        }
        for v in 0..nv {
            for u in 0..nv {
                if let (Some(m), Some(d)) = (&merged[u], &dist[u][v]) {
                    let c = m + d;
                    if dp[s][v].as_ref().map_or(true, |cur| c < *cur) {
                        dp[s][v] = Some(c);
                        dp_via[s][v] = u;
                    }
                }
            }
        }
    }

    let cost = dp[full][game.target]
        .clone()
        .ok_or_else(|| Error::Infeasible("terminals are disconnected".into()))?;

    // Reconstruct the edge set, then clean up degenerate overlaps from
    // tie choices: spanning forest of the collected edges, then repeated
    // pruning of non-terminal leaves.
    let mut collected: Vec<usize> = Vec::new();
    let mut stack = vec![(full, game.target)];
    while let Some((s, v)) = stack.pop() {
        let u = dp_via[s][v];
        collected.extend_from_slice(&paths[u][v]);
        match merge_choice[s][u] {
            Merge::Single => {
                let t = base[s.trailing_zeros() as usize];
                collected.extend_from_slice(&paths[t][u]);
            }
            Merge::Split(sub) => {
                stack.push((sub, u));
                stack.push((s ^ sub, u));
            }
        }
    }
    collected.sort_unstable();
    collected.dedup();
    let tree_edges = prune_to_terminal_tree(game, &collected, &terms);
    let tree_cost: Rat = tree_edges.iter().map(|&i| game.edges[i].2.clone()).sum();
    debug_assert!(tree_cost <= cost);
    if tree_cost != cost {
        // Tie-induced overlap removed a paid edge; the DP value is the
        // ground truth either way.
        return Ok(SteinerTree {
            edge_indices: tree_edges,
            cost: tree_cost,
            exact: true,
        });
    }
    Ok(SteinerTree {
        edge_indices: tree_edges,
        cost,
        exact: true,
    })
}

/// Kruskal spanning forest over the given edges, then repeated removal of
/// non-terminal leaves.
fn prune_to_terminal_tree(game: &MulticastGame, edges: &[usize], terms: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..game.vertices).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut order: Vec<usize> = edges.to_vec();
    order.sort_by(|&a, &b| game.edges[a].2.cmp(&game.edges[b].2).then(a.cmp(&b)));
    let mut kept = Vec::new();
    for i in order {
        let (u, v, _) = game.edges[i];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            kept.push(i);
        }
    }
    let is_term = {
        let mut t = vec![false; game.vertices];
        for &v in terms {
            t[v] = true;
        }
        t
    };
    loop {
        let mut degree = vec![0usize; game.vertices];
        for &i in &kept {
            degree[game.edges[i].0] += 1;
            degree[game.edges[i].1] += 1;
        }
        let before = kept.len();
        kept.retain(|&i| {
            let (u, v, _) = game.edges[i];
            !(degree[u] == 1 && !is_term[u]) && !(degree[v] == 1 && !is_term[v])
        });
        if kept.len() == before {
            break;
        }
    }
    kept.sort_unstable();
    kept
}

/// Shortest-path-metric MST 2-approximation, for terminal counts beyond
/// the exact limit. Always flagged inexact.
pub fn steiner_tree_approx(game: &MulticastGame) -> Result<SteinerTree> {
    let terms = game.terminals();
    if terms.len() <= 1 {
        return Ok(SteinerTree {
            edge_indices: Vec::new(),
            cost: Rat::zero(),
            exact: false,
        });
    }
    let weights = game.base_weights();
    let mut collected: Vec<usize> = Vec::new();
    // Prim over the terminal metric, expanding each chosen metric edge to
    // its underlying path.
    let mut in_tree = vec![false; terms.len()];
    in_tree[0] = true;
    let sp: Vec<(Vec<Option<Rat>>, Vec<Vec<usize>>)> = terms
        .iter()
        .map(|&t| game.shortest_paths(t, &weights))
        .collect();
    for _ in 1..terms.len() {
        let mut best: Option<(Rat, usize, usize)> = None;
        for a in 0..terms.len() {
            if !in_tree[a] {
                continue;
            }
            for (b, &tb) in terms.iter().enumerate() {
                if in_tree[b] {
                    continue;
                }
                if let Some(d) = &sp[a].0[tb] {
                    if best.as_ref().map_or(true, |(c, _, _)| d < c) {
                        best = Some((d.clone(), a, b));
                    }
                }
            }
        }
        let (_, a, b) =
            best.ok_or_else(|| Error::Infeasible("terminals are disconnected".into()))?;
        collected.extend_from_slice(&sp[a].1[terms[b]]);
        in_tree[b] = true;
    }
    collected.sort_unstable();
    collected.dedup();
    let kept = prune_to_terminal_tree(game, &collected, &terms);
    let cost = kept.iter().map(|&i| game.edges[i].2.clone()).sum();
    Ok(SteinerTree {
        edge_indices: kept,
        cost,
        exact: false,
    })
}

/// Players ordered by first DFS visit of their source, rooting the tree at
/// the target and visiting children in ascending vertex id. Players whose
/// source is visited simultaneously (same vertex) arrive in index order.
pub fn dfs_order(tree: &SteinerTree, game: &MulticastGame) -> Result<ArrivalOrder> {
    let adj = game.adjacency(Some(&tree.edge_indices));
    let mut visited = vec![false; game.vertices];
    let mut visit_rank = vec![usize::MAX; game.vertices];
    let mut rank = 0usize;
    let mut stack = vec![game.target];
    while let Some(v) = stack.pop() {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        visit_rank[v] = rank;
        rank += 1;
        // Push in reverse so ascending-id children are visited first.
        for &(w, _) in adj[v].iter().rev() {
            if !visited[w] {
                stack.push(w);
            }
        }
    }
    for (i, &s) in game.sources.iter().enumerate() {
        if !visited[s] {
            return Err(Error::Infeasible(format!(
                "source of player {i} (vertex {s}) is not in the tree"
            )));
        }
    }
    let mut players: Vec<usize> = (0..game.n()).collect();
    players.sort_by_key(|&i| (visit_rank[game.sources[i]], i));
    ArrivalOrder::new(players)
}

/// One arrival in a graph play-through, with the quantities used by the
/// factor-4 proof.
#[derive(Debug, Clone, Serialize)]
pub struct GraphArrival {
    pub player: usize,
    /// Myopic cost at arrival time.
    #[serde(with = "serde_rat")]
    pub s_i: Rat,
    /// Full cost of edges this player is the first to use.
    #[serde(with = "serde_rat")]
    pub b_i: Rat,
    /// Edge-index path chosen.
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSequentialOutcome {
    /// Edge-index path per player, indexed by player.
    pub strategies: Vec<Vec<usize>>,
    #[serde(with = "serde_rat")]
    pub cost: Rat,
    pub trace: Vec<GraphArrival>,
}

/// Myopic sequential play on the graph: each arrival routes along a
/// minimum-cost path to the target under weights c_e/(load_e + 1), with
/// ties broken by the lexicographically smallest vertex sequence.
pub fn graph_sequential_play(
    game: &MulticastGame,
    order: &ArrivalOrder,
) -> Result<GraphSequentialOutcome> {
    if order.0.len() != game.n() {
        return Err(Error::Validation(format!(
            "order covers {} players but the game has {}",
            order.0.len(),
            game.n()
        )));
    }
    ArrivalOrder::new(order.0.clone())?;
    let mut loads = vec![0usize; game.edges.len()];
    let mut strategies = vec![Vec::new(); game.n()];
    let mut trace = Vec::with_capacity(game.n());
    let mut cost = Rat::zero();
    for &p in &order.0 {
        let weights: Vec<Rat> = game
            .edges
            .iter()
            .zip(&loads)
            .map(|((_, _, c), &l)| c / rat((l + 1) as i64, 1))
            .collect();
        let (d, paths) = game.shortest_paths(game.sources[p], &weights);
        let s_i = d[game.target]
            .clone()
            .ok_or_else(|| Error::Infeasible(format!("player {p} cannot reach the target")))?;
        let path = paths[game.target].clone();
        let mut b_i = Rat::zero();
        for &e in &path {
            if loads[e] == 0 {
                b_i += &game.edges[e].2;
                cost += &game.edges[e].2;
            }
            loads[e] += 1;
        }
        strategies[p] = path.clone();
        trace.push(GraphArrival {
            player: p,
            s_i,
            b_i,
            path,
        });
    }
    debug_assert_eq!(
        cost,
        trace.iter().map(|a| a.b_i.clone()).sum::<Rat>()
    );
    Ok(GraphSequentialOutcome {
        strategies,
        cost,
        trace,
    })
}

/// Distances inside the tree (unique paths), from a given vertex.
fn tree_distances(game: &MulticastGame, tree: &SteinerTree, from: usize) -> Vec<Option<Rat>> {
    let adj = game.adjacency(Some(&tree.edge_indices));
    let mut dist: Vec<Option<Rat>> = vec![None; game.vertices];
    let mut stack = vec![from];
    dist[from] = Some(Rat::zero());
    while let Some(v) = stack.pop() {
        let dv = dist[v].clone().unwrap();
        for &(w, e) in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(&dv + &game.edges[e].2);
                stack.push(w);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Serialize)]
pub struct Bound4Row {
    pub player: usize,
    #[serde(with = "serde_rat")]
    pub s_i: Rat,
    #[serde(with = "serde_rat")]
    pub b_i: Rat,
    /// Tree distance from this source to the previous arrival's source
    /// (to the target, for the first arrival).
    #[serde(with = "serde_rat")]
    pub d_prev: Rat,
}

#[derive(Debug, Clone, Serialize)]
pub struct Bound4Report {
    pub order: ArrivalOrder,
    #[serde(with = "serde_rat")]
    pub tree_cost: Rat,
    #[serde(with = "serde_rat")]
    pub final_cost: Rat,
    #[serde(with = "serde_rat")]
    pub ratio: Rat,
    pub rows: Vec<Bound4Row>,
    /// (description, holds) per proof inequality.
    pub inequalities: Vec<(String, bool)>,
    pub all_hold: bool,
    pub within_factor_four: bool,
}

/// Runs DFS-ordered sequential play and checks every inequality of the
/// factor-4 argument on the resulting trace. A violation indicates an
/// implementation bug, since the proof guarantees them.
pub fn verify_bound4(game: &MulticastGame) -> Result<Bound4Report> {
    let tree = steiner_tree_exact(game)?;
    let order = dfs_order(&tree, game)?;
    let play = graph_sequential_play(game, &order)?;
    let n = game.n();

    let mut rows = Vec::with_capacity(n);
    let mut inequalities = Vec::new();
    for (i, arrival) in play.trace.iter().enumerate() {
        let src = game.sources[arrival.player];
        let prev = if i == 0 {
            game.target
        } else {
            game.sources[play.trace[i - 1].player]
        };
        let d_prev = tree_distances(game, &tree, prev)[src]
            .clone()
            .ok_or_else(|| Error::Infeasible("tree does not span a source".into()))?;
        rows.push(Bound4Row {
            player: arrival.player,
            s_i: arrival.s_i.clone(),
            b_i: arrival.b_i.clone(),
            d_prev,
        });
    }
    for (i, row) in rows.iter().enumerate() {
        let (desc, holds) = if i == 0 {
            (
                format!("S_0 <= d_T(s_{}, t)", row.player),
                row.s_i <= row.d_prev,
            )
        } else {
            let prev = &rows[i - 1];
            let rhs = &row.d_prev + &prev.s_i - &prev.b_i / rat(2, 1);
            (
                format!("S_{i} <= d_T + S_{} - B_{}/2", i - 1, i - 1),
                row.s_i <= rhs,
            )
        };
        inequalities.push((desc, holds));
    }
    if let Some(last) = rows.last() {
        inequalities.push((
            format!("S_{} >= B_{}/2", n - 1, n - 1),
            last.s_i >= &last.b_i / rat(2, 1),
        ));
    }
    let within = if tree.cost.is_zero() {
        play.cost.is_zero()
    } else {
        play.cost <= rat(4, 1) * &tree.cost
    };
    inequalities.push(("cost <= 4 * cost(T)".into(), within));
    let all_hold = inequalities.iter().all(|(_, h)| *h);
    let ratio = if tree.cost.is_zero() {
        Rat::one()
    } else {
        &play.cost / &tree.cost
    };
    Ok(Bound4Report {
        order,
        tree_cost: tree.cost,
        final_cost: play.cost,
        ratio,
        rows,
        inequalities,
        all_hold,
        within_factor_four: within,
    })
}

/// Embeds a ring game: player vertices 0..n−1, target vertex n; graph
/// edge i keeps ring edge i's cost and connects vertex i−1 to vertex i,
/// with edges 0 and n incident to the target.
pub fn ring_to_graph(ring: &RingGame) -> MulticastGame {
    let n = ring.n();
    let mut edges = Vec::with_capacity(n + 1);
    for e in 0..=n {
        let u = if e == 0 { n } else { e - 1 };
        let v = if e == n { n } else { e };
        edges.push((u, v, ring.edge_cost(e).clone()));
    }
    MulticastGame {
        vertices: n + 1,
        edges,
        sources: (0..n).collect(),
        target: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::TieBreak;
    use crate::rational::rat_int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(vertices: usize, edges: &[(usize, usize, i64)], sources: &[usize], target: usize) -> MulticastGame {
        MulticastGame::new(
            vertices,
            edges.iter().map(|&(u, v, c)| (u, v, rat_int(c))).collect(),
            sources.to_vec(),
            target,
        )
        .unwrap()
    }

    #[test]
    fn coincident_terminals_need_no_edges() {
        let game = g(2, &[(0, 1, 5)], &[0, 0], 0);
        let tree = steiner_tree_exact(&game).unwrap();
        assert!(tree.edge_indices.is_empty());
        assert_eq!(tree.cost, rat_int(0));
    }

    #[test]
    fn star_tree_uses_all_star_edges() {
        // target 0 in the center, sources at the leaves.
        let game = g(4, &[(0, 1, 2), (0, 2, 3), (0, 3, 4)], &[1, 2, 3], 0);
        let tree = steiner_tree_exact(&game).unwrap();
        assert_eq!(tree.edge_indices, vec![0, 1, 2]);
        assert_eq!(tree.cost, rat_int(9));
    }

    #[test]
    fn steiner_point_is_used_when_cheaper() {
        // Three terminals around a hub: going through the hub (3 edges of
        // cost 1) beats any pairwise connection (cost 3 each).
        let game = g(
            4,
            &[(0, 3, 1), (1, 3, 1), (2, 3, 1), (0, 1, 3), (1, 2, 3)],
            &[1, 2],
            0,
        );
        let tree = steiner_tree_exact(&game).unwrap();
        assert_eq!(tree.cost, rat_int(3));
        assert_eq!(tree.edge_indices, vec![0, 1, 2]);
    }

    #[test]
    fn ring_embedding_matches_ring_optimum() {
        let ring = RingGame::from_i64(&[3, 9, 1, 4]).unwrap();
        let game = ring_to_graph(&ring);
        let tree = steiner_tree_exact(&game).unwrap();
        assert_eq!(tree.cost, ring.optimum().cost);
    }

    #[test]
    fn dfs_order_on_path_and_star() {
        // Path t - s_0 - s_1.
        let game = g(3, &[(0, 1, 1), (1, 2, 1)], &[1, 2], 0);
        let tree = steiner_tree_exact(&game).unwrap();
        assert_eq!(dfs_order(&tree, &game).unwrap().0, vec![0, 1]);
        // Star rooted at t with three leaves.
        let game = g(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)], &[1, 2, 3], 0);
        let tree = steiner_tree_exact(&game).unwrap();
        assert_eq!(dfs_order(&tree, &game).unwrap().0, vec![0, 1, 2]);
    }

    #[test]
    fn disjoint_paths_bought_independently() {
        // Two sources with private 2-edge paths to t; sharing would cost
        // more.
        let game = g(
            5,
            &[(1, 3, 1), (3, 0, 1), (2, 4, 1), (4, 0, 1), (1, 2, 10)],
            &[1, 2],
            0,
        );
        let out = graph_sequential_play(&game, &ArrivalOrder::identity(2)).unwrap();
        assert_eq!(out.cost, rat_int(4));
        assert_eq!(out.trace[0].b_i, rat_int(2));
        assert_eq!(out.trace[1].b_i, rat_int(2));
    }

    #[test]
    fn ring_play_matches_graph_play() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let n = rng.gen_range(1..=6usize);
            let costs: Vec<i64> = (0..=n).map(|_| rng.gen_range(0..=30)).collect();
            let ring = RingGame::from_i64(&costs).unwrap();
            let graph = ring_to_graph(&ring);
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let order = ArrivalOrder(perm);
            let ring_out =
                crate::sequential::sequential_play(&ring, &order, TieBreak::PreferLeft).unwrap();
            let graph_out = graph_sequential_play(&graph, &order).unwrap();
            assert_eq!(
                ring_out.network_cost, graph_out.cost,
                "costs {costs:?} order {:?}",
                order.0
            );
            for (r, g) in ring_out.trace.iter().zip(&graph_out.trace) {
                assert_eq!(r.myopic_cost, g.s_i);
                assert_eq!(r.newly_bought, g.b_i);
            }
        }
    }

    #[test]
    fn single_player_bound4_is_tight() {
        let game = g(3, &[(1, 2, 2), (2, 0, 3)], &[1], 0);
        let report = verify_bound4(&game).unwrap();
        assert!(report.all_hold);
        assert_eq!(report.ratio, rat_int(1));
        assert_eq!(report.rows[0].s_i, rat_int(5));
        assert_eq!(report.rows[0].b_i, rat_int(5));
    }

    #[test]
    fn bound4_holds_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let vertices = rng.gen_range(4..=10usize);
            // Random spanning tree plus noise edges keeps things connected.
            let mut edges: Vec<(usize, usize, Rat)> = (1..vertices)
                .map(|v| (rng.gen_range(0..v), v, rat_int(rng.gen_range(1..=20))))
                .collect();
            for _ in 0..rng.gen_range(0..=6) {
                let u = rng.gen_range(0..vertices);
                let v = rng.gen_range(0..vertices);
                if u != v {
                    edges.push((u, v, rat_int(rng.gen_range(1..=20))));
                }
            }
            let n_sources = rng.gen_range(1..=5usize);
            let sources: Vec<usize> = (0..n_sources)
                .map(|_| rng.gen_range(0..vertices))
                .collect();
            let game = MulticastGame::new(vertices, edges, sources, 0).unwrap();
            let report = verify_bound4(&game).unwrap();
            assert!(report.all_hold, "{report:?}");
            assert!(report.within_factor_four);
        }
    }

    #[test]
    fn terminal_limit_refusal() {
        let vertices = 16;
        let edges: Vec<(usize, usize, Rat)> =
            (1..vertices).map(|v| (v - 1, v, rat_int(1))).collect();
        let sources: Vec<usize> = (1..15).collect();
        let game = MulticastGame::new(vertices, edges, sources, 0).unwrap();
        assert!(matches!(
            steiner_tree_exact(&game),
            Err(Error::LimitExceeded { .. })
        ));
        let approx = steiner_tree_approx(&game).unwrap();
        assert!(!approx.exact);
        assert_eq!(approx.cost, rat_int(14));
    }

    #[test]
    fn disconnected_terminals_are_infeasible() {
        let game = g(4, &[(0, 1, 1)], &[1, 3], 0);
        assert!(matches!(
            steiner_tree_exact(&game),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let game = g(4, &[(0, 1, 2), (1, 2, 3), (2, 3, 5)], &[1, 3], 0);
        let json = game.to_json().unwrap();
        assert!(json.contains("\"vertices\": 4"));
        let back = MulticastGame::from_json(&json).unwrap();
        assert_eq!(back.edges, game.edges);
        assert_eq!(back.sources, game.sources);
        assert!(MulticastGame::from_json("{\"vertices\":1,\"edges\":[[0,5,\"1\"]],\"sources\":[],\"target\":0}").is_err());
    }
}
