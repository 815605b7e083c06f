//! Symbolic linear programs over edge-cost variables, an exact simplex
//! solver, and duality certificates for the ratio bounds.
//!
//! Certificate checking never touches floating point: the bounds being
//! certified (4/3, 22/17, 26/19, ...) are equality-tight and only exact
//! rational arithmetic can confirm tightness.

pub mod simplex;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::equilibrium::FamilyInstance;
use crate::rational::{rat, rat_to_f64, rational_to_string, serde_rat, serde_rat_vec, Rat};
use crate::ring::RingGame;
use crate::{harmonic, Error, Result};

pub use simplex::SimplexOutcome;

/// Dense linear expression Σ coeffs[i]·a_i + constant over variables
/// a_0..a_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    #[serde(with = "serde_rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub constant: Rat,
}

impl LinearForm {
    pub fn zero(num_vars: usize) -> Self {
        LinearForm {
            coeffs: vec![Rat::zero(); num_vars],
            constant: Rat::zero(),
        }
    }

    /// Evaluates the form at a point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .fold(self.constant.clone(), |acc, t| acc + t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub form: LinearForm,
    pub rel: Relation,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
    pub label: String,
}

/// Maximization LP over variables a_0..a_{num_vars-1}, all constrained
/// nonnegative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearProgram {
    pub id: String,
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: LinearForm,
}

impl LinearProgram {
    pub fn validate(&self) -> Result<()> {
        if self.objective.coeffs.len() != self.num_vars {
            return Err(Error::Dimension(format!(
                "objective has {} coefficients for {} variables",
                self.objective.coeffs.len(),
                self.num_vars
            )));
        }
        for c in &self.constraints {
            if c.form.coeffs.len() != self.num_vars {
                return Err(Error::Dimension(format!(
                    "constraint {:?} has {} coefficients for {} variables",
                    c.label,
                    c.form.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    /// Checks primal feasibility of a point (exact).
    pub fn is_feasible(&self, point: &[Rat]) -> bool {
        point.len() == self.num_vars
            && point.iter().all(|x| !x.is_negative())
            && self.constraints.iter().all(|c| {
                let v = c.form.eval(point);
                match c.rel {
                    Relation::Le => v <= c.rhs,
                    Relation::Eq => v == c.rhs,
                }
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Solves the LP in exact rational arithmetic.
pub fn simplex_solve(lp: &LinearProgram) -> Result<SimplexOutcome<Rat>> {
    simplex::solve::<Rat>(lp)
}

/// Floating-point solve for instance sizes where exact pivoting is too
/// slow. Results carry a 1e-9 pivot tolerance and are never used inside
/// certificate checking.
pub fn simplex_solve_f64(lp: &LinearProgram) -> Result<SimplexOutcome<f64>> {
    simplex::solve::<f64>(lp)
}

/// Nonnegative (on inequalities) multiplier vector claiming
/// `objective ≤ bound` by weak duality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "serde_rat_vec")]
    pub multipliers: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub bound: Rat,
}

impl Certificate {
    /// Rescales all multipliers so the combined right-hand side equals
    /// `bound`. This recovers the normalized certificate from combinations
    /// quoted with unnormalized weights.
    pub fn rescaled_to(&self, lp: &LinearProgram, bound: Rat) -> Result<Certificate> {
        if self.multipliers.len() != lp.constraints.len() {
            return Err(Error::Dimension(
                "certificate length does not match constraint count".into(),
            ));
        }
        let combined_rhs: Rat = self
            .multipliers
            .iter()
            .zip(&lp.constraints)
            .map(|(y, c)| y * (&c.rhs - &c.form.constant))
            .sum();
        if combined_rhs.is_zero() {
            return Err(Error::NotApplicable(
                "combined right-hand side is zero; cannot rescale".into(),
            ));
        }
        let scale = &bound / &combined_rhs;
        Ok(Certificate {
            multipliers: self.multipliers.iter().map(|y| y * &scale).collect(),
            bound,
        })
    }
}

/// Outcome of verifying a certificate against an LP.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateCheck {
    pub certified: bool,
    /// Per-variable combined coefficient minus objective coefficient;
    /// all must be ≥ 0.
    #[serde(with = "serde_rat_vec")]
    pub coefficient_slack: Vec<Rat>,
    /// Claimed bound minus combined right-hand side; must be ≥ 0.
    #[serde(with = "serde_rat")]
    pub rhs_gap: Rat,
    pub failures: Vec<String>,
}

/// Verifies that the multiplier combination of the constraints dominates
/// the objective coefficientwise and that the combined right-hand side is
/// at most the claimed bound, establishing `objective ≤ bound` by weak
/// duality over nonnegative variables.
pub fn check_certificate(lp: &LinearProgram, cert: &Certificate) -> Result<CertificateCheck> {
    lp.validate()?;
    if cert.multipliers.len() != lp.constraints.len() {
        return Err(Error::Dimension(format!(
            "certificate has {} multipliers for {} constraints",
            cert.multipliers.len(),
            lp.constraints.len()
        )));
    }
    for (y, c) in cert.multipliers.iter().zip(&lp.constraints) {
        if matches!(c.rel, Relation::Le) && y.is_negative() {
            return Err(Error::Validation(format!(
                "negative multiplier {} on inequality {:?}",
                rational_to_string(y),
                c.label
            )));
        }
    }

    let mut failures = Vec::new();
    let mut slack = Vec::with_capacity(lp.num_vars);
    for v in 0..lp.num_vars {
        let combined: Rat = cert
            .multipliers
            .iter()
            .zip(&lp.constraints)
            .map(|(y, c)| y * &c.form.coeffs[v])
            .sum();
        let s = combined - &lp.objective.coeffs[v];
        if s.is_negative() {
            failures.push(format!(
                "variable a_{v}: combined coefficient falls short by {}",
                rational_to_string(&-&s)
            ));
        }
        slack.push(s);
    }
    let combined_rhs: Rat = cert
        .multipliers
        .iter()
        .zip(&lp.constraints)
        .map(|(y, c)| y * (&c.rhs - &c.form.constant))
        .sum();
    let rhs_gap = &cert.bound - &lp.objective.constant - &combined_rhs;
    if rhs_gap.is_negative() {
        failures.push(format!(
            "combined right-hand side exceeds the bound by {}",
            rational_to_string(&-&rhs_gap)
        ));
    }
    Ok(CertificateCheck {
        certified: failures.is_empty(),
        coefficient_slack: slack,
        rhs_gap,
        failures,
    })
}

fn indicator_sum(num_vars: usize, skip: usize) -> LinearForm {
    let mut f = LinearForm::zero(num_vars);
    for (i, c) in f.coeffs.iter_mut().enumerate() {
        if i != skip {
            *c = Rat::one();
        }
    }
    f
}

/// Bound LP for the price of stability argument: starting from the optimum
/// profile (all players left of the most expensive edge `o` go Left), a
/// chain of best responses switches players o−1, o−2, ..., o−k to Right
/// and then stops. Variables are edge costs a_0..a_n.
///
/// Constraint j states that player o−j prefers Right given the chain state
/// where players o−1..o−j+1 already switched: the per-edge shares are
/// a_e/(load+1) with Right loads e−o+j−1 on edges e ≥ o−j+1 and Left loads
/// o−j−e on edges e ≤ o−j. For k ≤ 7 a final constraint states player
/// o−k−1 prefers to stay Left. The objective is the cost of the resulting
/// network, which misses edge o−k, normalized by the optimum Σ_{i≠o} a_i = 1.
///
/// In the k ≥ 8 regime only the first 7 switch inequalities are kept.
pub fn build_pos_lp(n: usize, o: usize, k: usize) -> Result<LinearProgram> {
    if !(1 <= k && k < o && o <= n) {
        return Err(Error::Validation(format!(
            "build_pos_lp requires 1 <= k < o <= n (got n = {n}, o = {o}, k = {k})"
        )));
    }
    let nv = n + 1;
    let mut constraints = Vec::new();
    constraints.push(Constraint {
        form: indicator_sum(nv, o),
        rel: Relation::Eq,
        rhs: Rat::one(),
        label: "normalization".into(),
    });
    for j in 1..=k.min(7) {
        // Right cost minus Left cost of player o−j, ≤ 0.
        let mut f = LinearForm::zero(nv);
        for l in 0..nv {
            if l >= o - j + 1 {
                f.coeffs[l] += rat(1, (l + j - o) as i64);
            } else {
                f.coeffs[l] -= rat(1, (o - j + 1 - l) as i64);
            }
        }
        constraints.push(Constraint {
            form: f,
            rel: Relation::Le,
            rhs: Rat::zero(),
            label: format!("switch player {}", o - j),
        });
    }
    if k <= 7 {
        // Left cost minus Right cost of player o−k−1, ≤ 0.
        let mut f = LinearForm::zero(nv);
        for l in 0..nv {
            if l + k + 1 <= o {
                f.coeffs[l] += rat(1, (o - k - l) as i64);
            } else {
                f.coeffs[l] -= rat(1, (l + k + 1 - o) as i64);
            }
        }
        constraints.push(Constraint {
            form: f,
            rel: Relation::Le,
            rhs: Rat::zero(),
            label: format!("stay player {}", o - k - 1),
        });
    }
    Ok(LinearProgram {
        id: format!("pos(n={n},o={o},k={k})"),
        num_vars: nv,
        constraints,
        objective: indicator_sum(nv, o - k),
    })
}

/// Bound LP for the myopic sequential price of stability: under the
/// arrival order (n−1, ..., o, 0, 1, ..., o−1) suppose players 0..i took
/// Left and player i+1 took Right. Variables are edge costs a_0..a_n.
///
/// The first constraint states player i preferred Left at her arrival, the
/// second that player i+1 preferred Right, both after relaxing the shares
/// of the early right-going players to full cost. Maximality constraints
/// force edge o to be the most expensive (it is the edge the optimum
/// drops), and the optimum is normalized to 1. The objective is the cost
/// of the resulting network, which misses edge i+1.
pub fn build_mspos_lp(n: usize, o: usize, i: usize) -> Result<LinearProgram> {
    if !(i + 1 < o && o <= n) {
        return Err(Error::Validation(format!(
            "build_mspos_lp requires 0 <= i+1 < o <= n (got n = {n}, o = {o}, i = {i})"
        )));
    }
    let nv = n + 1;
    let mut constraints = Vec::new();

    // Left cost of player i (players 0..i−1 already Left) minus the
    // relaxed Right cost, ≤ 0.
    let mut f = LinearForm::zero(nv);
    for l in 0..nv {
        if l <= i {
            f.coeffs[l] += rat(1, (i - l + 1) as i64);
        } else {
            f.coeffs[l] -= Rat::one();
        }
    }
    constraints.push(Constraint {
        form: f,
        rel: Relation::Le,
        rhs: Rat::zero(),
        label: format!("player {i} prefers left"),
    });

    // Relaxed Right cost of player i+1 minus her Left cost, ≤ 0.
    let mut f = LinearForm::zero(nv);
    for l in 0..nv {
        if l <= i + 1 {
            f.coeffs[l] -= rat(1, (i + 2 - l) as i64);
        } else if l <= o {
            f.coeffs[l] += Rat::one();
        }
    }
    constraints.push(Constraint {
        form: f,
        rel: Relation::Le,
        rhs: Rat::zero(),
        label: format!("player {} prefers right", i + 1),
    });

    constraints.push(Constraint {
        form: indicator_sum(nv, o),
        rel: Relation::Eq,
        rhs: Rat::one(),
        label: "normalization".into(),
    });

    // Edge o is the most expensive edge (the optimum drops it).
    for e in 0..nv {
        if e == o {
            continue;
        }
        let mut f = LinearForm::zero(nv);
        f.coeffs[e] = Rat::one();
        f.coeffs[o] = -Rat::one();
        constraints.push(Constraint {
            form: f,
            rel: Relation::Le,
            rhs: Rat::zero(),
            label: format!("edge {e} at most edge {o}"),
        });
    }

    Ok(LinearProgram {
        id: format!("mspos(n={n},o={o},i={i})"),
        num_vars: nv,
        constraints,
        objective: indicator_sum(nv, i + 1),
    })
}

/// The published 26/19 certificate for `build_mspos_lp`, completed with
/// the implicit weight 3/19 on the maximality constraint a_i ≤ a_o that
/// the quoted three-weight combination relies on.
pub fn mspos_certificate(n: usize, o: usize, i: usize) -> Result<Certificate> {
    let lp = build_mspos_lp(n, o, i)?;
    let mut multipliers = vec![rat(2, 19), rat(24, 19), rat(26, 19)];
    for e in 0..=n {
        if e == o {
            continue;
        }
        multipliers.push(if e == i { rat(3, 19) } else { Rat::zero() });
    }
    debug_assert_eq!(multipliers.len(), lp.constraints.len());
    Ok(Certificate {
        multipliers,
        bound: rat(26, 19),
    })
}

/// Rosenthal potential of the threshold profile missing edge `j`, as a
/// linear form over the edge costs: Φ_j = Σ_{i<j} a_i·H_{j−i} +
/// Σ_{i>j} a_i·H_{i−j}.
fn potential_form(num_vars: usize, j: usize) -> LinearForm {
    let mut f = LinearForm::zero(num_vars);
    for (i, c) in f.coeffs.iter_mut().enumerate() {
        if i != j {
            *c = harmonic(i.abs_diff(j));
        }
    }
    f
}

/// Bound LP for the potential-optimum price of anarchy family: edge costs
/// a_0..a_n such that the threshold profile missing edge p minimizes the
/// potential among all threshold profiles, edge n is the most expensive
/// (so the optimum misses it and costs 1 after normalization), and the
/// profile's social cost Σ_{i≠p} a_i is maximized.
///
/// Alternatives are restricted to threshold profiles; on enumerated
/// instances every potential minimum matches a threshold profile's cost,
/// and small-n results are cross-validated against full enumeration.
pub fn build_popoa_lp(n: usize, p: usize) -> Result<LinearProgram> {
    if p >= n {
        return Err(Error::Validation(format!(
            "build_popoa_lp requires 0 <= p < n (got n = {n}, p = {p})"
        )));
    }
    let nv = n + 1;
    let phi_p = potential_form(nv, p);
    let mut constraints = Vec::new();
    for q in 0..nv {
        if q == p {
            continue;
        }
        let phi_q = potential_form(nv, q);
        let mut f = LinearForm::zero(nv);
        for v in 0..nv {
            f.coeffs[v] = &phi_p.coeffs[v] - &phi_q.coeffs[v];
        }
        constraints.push(Constraint {
            form: f,
            rel: Relation::Le,
            rhs: Rat::zero(),
            label: format!("potential vs threshold {q}"),
        });
    }
    for e in 0..n {
        let mut f = LinearForm::zero(nv);
        f.coeffs[e] = Rat::one();
        f.coeffs[n] = -Rat::one();
        constraints.push(Constraint {
            form: f,
            rel: Relation::Le,
            rhs: Rat::zero(),
            label: format!("edge {e} at most edge {n}"),
        });
    }
    constraints.push(Constraint {
        form: indicator_sum(nv, n),
        rel: Relation::Eq,
        rhs: Rat::one(),
        label: "normalization".into(),
    });
    Ok(LinearProgram {
        id: format!("popoa(n={n},p={p})"),
        num_vars: nv,
        constraints,
        objective: indicator_sum(nv, p),
    })
}

/// Largest ring size solved exactly when realizing POPoA family
/// instances; beyond it the LP runs in floating point and the costs are
/// rounded back to rationals.
pub const POPOA_EXACT_LIMIT: usize = 16;

/// Solves `build_popoa_lp(n, p)` and realizes the optimizer as a ring
/// game.
pub fn solve_popoa_instance(n: usize, p: usize) -> Result<FamilyInstance> {
    let lp = build_popoa_lp(n, p)?;
    if n <= POPOA_EXACT_LIMIT {
        let out = simplex_solve(&lp)?;
        let (Some(value), LpStatus::Optimal) = (out.value.clone(), out.status) else {
            return Err(Error::Infeasible(format!("{} did not solve", lp.id)));
        };
        let game = RingGame::new(out.primal)?;
        Ok(FamilyInstance {
            game,
            lp_value: rat_to_f64(&value),
            unused_edge: p,
            exact: true,
        })
    } else {
        let out = simplex_solve_f64(&lp)?;
        let (Some(value), LpStatus::Optimal) = (out.value, out.status) else {
            return Err(Error::Infeasible(format!("{} did not solve", lp.id)));
        };
        let costs: Vec<Rat> = out
            .primal
            .iter()
            .map(|&x| Rat::from_float(x.max(0.0)).unwrap_or_else(Rat::zero))
            .collect();
        Ok(FamilyInstance {
            game: RingGame::new(costs)?,
            lp_value: value,
            unused_edge: p,
            exact: false,
        })
    }
}

/// Published dual weights for the price-of-stability LPs, k = 1..3, as
/// exact fractions in constraint order (normalization, switches, stay).
pub fn appendix_certificate_exact(k: usize) -> Option<Certificate> {
    let (weights, bound) = match k {
        1 => (vec![rat(4, 3), rat(10, 9), rat(2, 9)], rat(4, 3)),
        2 => (
            vec![rat(22, 17), rat(252, 323), rat(202, 323), rat(90, 323)],
            rat(22, 17),
        ),
        3 => (
            vec![
                rat(29, 23),
                rat(2976, 4025),
                rat(1206, 4025),
                rat(2256, 4025),
                rat(1224, 4025),
            ],
            rat(29, 23),
        ),
        _ => return None,
    };
    Some(Certificate {
        multipliers: weights,
        bound,
    })
}

/// Published dual weights for k = 4..7 and the k ≥ 8 regime, as printed
/// (decimals, plus one exact fraction at k = 4 rendered to f64).
pub fn appendix_decimals(k: usize) -> Option<Vec<f64>> {
    let v: Vec<f64> = match k {
        1 => vec![4.0 / 3.0, 10.0 / 9.0, 2.0 / 9.0],
        2 => vec![22.0 / 17.0, 252.0 / 323.0, 202.0 / 323.0, 90.0 / 323.0],
        3 => vec![
            29.0 / 23.0,
            2976.0 / 4025.0,
            1206.0 / 4025.0,
            2256.0 / 4025.0,
            1224.0 / 4025.0,
        ],
        4 => vec![
            1.243533565,
            0.722076586,
            446160.0 / 1659763.0,
            0.268809463,
            0.528169383,
            0.329251827,
        ],
        5 => vec![
            1.229596836,
            0.711037768,
            0.257115234,
            0.201170436,
            0.199302216,
            0.50797093,
            0.348431623,
        ],
        6 => vec![
            1.217310111,
            0.702648246,
            0.250967669,
            0.189905238,
            0.168566505,
            0.179311025,
            0.494134279,
            0.362553601,
        ],
        7 => vec![
            1.206536915,
            0.69586637,
            0.247111078,
            0.184286036,
            0.157438535,
            0.148587957,
            0.165607593,
            0.484007846,
            0.373384452,
        ],
        _ if k >= 8 => vec![
            1.330802428,
            0.750587484,
            0.246845878,
            0.168106752,
            0.12615003,
            0.096800836,
            0.072578056,
            0.048719834,
        ],
        _ => return None,
    };
    Some(v)
}

/// Tolerance used when comparing recomputed duals against published
/// decimals.
pub const APPENDIX_DECIMAL_TOLERANCE: f64 = 1e-6;

/// Result of re-deriving a published dual table from scratch.
#[derive(Debug, Clone, Serialize)]
pub struct RecomputedDuals {
    pub k: usize,
    /// The (n, o) at which the duals were recomputed — the smallest pair
    /// reproducing the published values, if any.
    pub n: usize,
    pub o: usize,
    pub certificate: Certificate,
    /// True when every entry matches the published table (exactly for
    /// k ≤ 3, within 1e-6 for decimals).
    pub matches_published: bool,
    /// Indices (and published/recomputed values) that disagree.
    pub discrepancies: Vec<(usize, f64, f64)>,
}

/// Re-derives the published dual weights by solving the bound LP exactly
/// and reading the dual off the final basis, scanning small (n, o) for the
/// first pair that reproduces the table. Mismatches are reported, never
/// silently accepted.
pub fn recompute_appendix_duals(k: usize) -> Result<RecomputedDuals> {
    if k == 0 {
        return Err(Error::Validation("k must be >= 1".into()));
    }
    let published = appendix_decimals(k).expect("published table covers all k >= 1");
    let exact = appendix_certificate_exact(k);
    // The k ≥ 8 regime is quoted at large (n, o); smaller k tables are
    // reproduced at minimal rings.
    let candidates: Vec<(usize, usize)> = if k >= 8 {
        vec![(40, 20), (2 * k + 4, k + 2), (60, 30)]
    } else {
        let mut v = Vec::new();
        for n in (k + 1)..=(k + 8) {
            for o in (k + 1)..=n {
                v.push((n, o));
            }
        }
        v
    };
    let mut best: Option<RecomputedDuals> = None;
    for (n, o) in candidates {
        let lp = build_pos_lp(n, o, k)?;
        let out = simplex_solve(&lp)?;
        if out.status != LpStatus::Optimal {
            continue;
        }
        let cert = Certificate {
            multipliers: out.dual.clone(),
            bound: out.value.clone().unwrap(),
        };
        let mut discrepancies = Vec::new();
        if cert.multipliers.len() == published.len() {
            for (idx, (y, pubv)) in cert.multipliers.iter().zip(&published).enumerate() {
                let matches = match &exact {
                    Some(e) => *y == e.multipliers[idx],
                    None => (rat_to_f64(y) - pubv).abs() <= APPENDIX_DECIMAL_TOLERANCE,
                };
                if !matches {
                    discrepancies.push((idx, *pubv, rat_to_f64(y)));
                }
            }
        } else {
            discrepancies.push((usize::MAX, published.len() as f64, cert.multipliers.len() as f64));
        }
        let rec = RecomputedDuals {
            k,
            n,
            o,
            certificate: cert,
            matches_published: discrepancies.is_empty(),
            discrepancies,
        };
        if rec.matches_published {
            return Ok(rec);
        }
        let better = match &best {
            None => true,
            Some(b) => rec.discrepancies.len() < b.discrepancies.len(),
        };
        if better {
            best = Some(rec);
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("no (n, o) candidate solved for k = {k}")))
}

/// Verifies the standard zero-gap invariant: the dual returned alongside
/// an exact optimum certifies the optimal value itself.
pub fn dual_certifies_optimum(lp: &LinearProgram, out: &SimplexOutcome<Rat>) -> Result<bool> {
    let Some(value) = &out.value else {
        return Ok(false);
    };
    let cert = Certificate {
        multipliers: out.dual.clone(),
        bound: value.clone(),
    };
    Ok(check_certificate(lp, &cert)?.certified)
}
