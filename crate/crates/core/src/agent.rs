//! Per-node computations of the distributed algorithm.
//!
//! Each round an agent solves a relaxed allocation subproblem over the
//! convex hull of its mixed-integer set (penalizing uniform violation `v`),
//! exchanges the resulting dual prices with its neighbors, moves its
//! allocation along the price disagreement, and recovers a mixed-integer
//! point by the lexicographic minimal-violation solve.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hull;
use crate::lp::{solve_lp_with, LinearProgram, LpConfig, LpError, LpStatus};
use crate::milp::{self, lex_min_violation, pricing_oracle, LexMinResult, MilpConfig, MilpError};
use crate::problem::{dot, AgentBlock, Instance};

/// One agent's working state across rounds.
#[derive(Debug, Clone, Default)]
pub struct AgentState {
    /// Allocation estimate, length `S`.
    pub y: Vec<f64>,
    /// Dual price of the allocation constraint, length `S`.
    pub mu: Vec<f64>,
    /// Relaxed primal point (in the hull).
    pub z: Vec<f64>,
    /// Uniform violation of the allocation by `z`.
    pub v: f64,
    /// Recovery outputs.
    pub rho: f64,
    pub xi: f64,
    pub x: Vec<f64>,
    /// Subproblem optimal value (cost plus penalty).
    pub j_lp: f64,
}

/// How the relaxed subproblem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubproblemMode {
    /// Exact LP over enumerated hull points (blocks with at most one
    /// continuous coordinate).
    ExactHull,
    /// Approximate duals from a projected subgradient ascent using only a
    /// pricing oracle over the mixed-integer set.
    InnerSubgradient,
}

/// Diminishing step sizes `alpha0 / (t+1)^gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub alpha0: f64,
    pub gamma: f64,
}

impl StepSchedule {
    pub fn new(alpha0: f64, gamma: f64) -> Self {
        StepSchedule { alpha0, gamma }
    }

    pub fn at(&self, t: usize) -> f64 {
        self.alpha0 / ((t + 1) as f64).powf(self.gamma)
    }

    /// Square-summable but not summable requires `gamma` in (1/2, 1].
    pub fn validate(&self) -> Result<(), String> {
        if !(self.alpha0 > 0.0) {
            return Err(format!("alpha0 must be positive, got {}", self.alpha0));
        }
        if !(self.gamma > 0.5 && self.gamma <= 1.0) {
            return Err(format!("gamma must lie in (0.5, 1], got {}", self.gamma));
        }
        Ok(())
    }
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule { alpha0: 1.0, gamma: 0.8 }
    }
}

/// Algorithm parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgoConfig {
    /// Violation penalty weight; `None` derives `10 * N * max_i ||c_i||_1`.
    pub m_penalty: Option<f64>,
    /// Margin added to the uniform tightening for finite-time feasibility.
    pub delta: f64,
    pub step: StepSchedule,
    pub mode: SubproblemMode,
    /// Subgradient iterations per round in inner mode.
    pub inner_iters: usize,
    /// Scale on the inner step size `M / (1 + ||A_i||_inf)`.
    pub inner_step_scale: f64,
    /// Cap on hull enumeration in exact mode.
    pub hull_cap: u128,
    /// Recover a mixed-integer point every this many rounds.
    pub recovery_stride: usize,
    /// Per-agent slack allowance in the finite-time bound.
    pub eps_bound: f64,
    #[serde(skip)]
    pub milp: MilpConfig,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        AlgoConfig {
            m_penalty: None,
            delta: 0.0,
            step: StepSchedule::default(),
            mode: SubproblemMode::ExactHull,
            inner_iters: 500,
            // quarter of M / (1 + ||A||_inf); the full ratio overshoots on
            // blocks whose dual prices sit far below the penalty weight
            inner_step_scale: 0.25,
            hull_cap: hull::DEFAULT_HULL_CAP,
            recovery_stride: 1,
            eps_bound: 1e-6,
            milp: MilpConfig::default(),
        }
    }
}

impl AlgoConfig {
    pub fn validate(&self) -> Result<(), String> {
        if let Some(m) = self.m_penalty {
            if !(m > 0.0) {
                return Err(format!("penalty weight must be positive, got {m}"));
            }
        }
        if self.delta < 0.0 {
            return Err(format!("delta must be nonnegative, got {}", self.delta));
        }
        if self.inner_iters == 0 {
            return Err("inner_iters must be at least 1".into());
        }
        if self.recovery_stride == 0 {
            return Err("recovery_stride must be at least 1".into());
        }
        self.step.validate()
    }

    /// Resolve the penalty weight for an instance.
    pub fn penalty_for(&self, inst: &Instance) -> f64 {
        self.m_penalty.unwrap_or_else(|| default_penalty(inst))
    }
}

/// `10 * N * max_i ||c_i||_1`, a crude upper bound on the allocation
/// prices that keeps the violation penalty inactive near optimality.
pub fn default_penalty(inst: &Instance) -> f64 {
    let worst = inst
        .blocks
        .iter()
        .map(|b| b.cost.iter().map(|c| c.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    (10.0 * inst.n_agents as f64 * worst).max(1.0)
}

#[derive(Debug, Error)]
pub enum AgentError {
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Hull(#[from] hull::HullError),
    #[error("relaxed subproblem came back {0:?}; it must always be solvable")]
    BadSubproblem(LpStatus),
}

/// Primal-dual solution of the relaxed subproblem.
#[derive(Debug, Clone)]
pub struct SubproblemSolution {
    pub z: Vec<f64>,
    pub v: f64,
    pub mu: Vec<f64>,
    pub j_lp: f64,
    /// Set when the price mass reaches 99 percent of the penalty weight;
    /// the penalty is then distorting the solution and should be raised.
    pub m_active: bool,
}

/// Exact relaxed subproblem over enumerated hull points:
/// `min c'z + M v  s.t.  A z <= y + v 1, z in conv(X_i), v >= 0`
/// with `z` expressed by convex multipliers over `points`.
pub fn solve_relaxed_subproblem_hull(
    block: &AgentBlock,
    points: &[Vec<f64>],
    y: &[f64],
    m_penalty: f64,
    lp_cfg: &LpConfig,
) -> Result<SubproblemSolution, AgentError> {
    let k = points.len();
    let s = block.n_coupling();
    let mut objective: Vec<f64> = points.iter().map(|p| block.cost_value(p)).collect();
    objective.push(m_penalty);
    let mut ineq_lhs = Vec::with_capacity(s);
    for (srow, ys) in block.coupling.iter().zip(y) {
        let mut row: Vec<f64> = points.iter().map(|p| dot(srow, p)).collect();
        row.push(-1.0);
        ineq_lhs.push(row);
        let _ = ys;
    }
    let mut convexity = vec![1.0; k];
    convexity.push(0.0);
    let lp = LinearProgram {
        objective,
        ineq_lhs,
        ineq_rhs: y.to_vec(),
        eq_lhs: vec![convexity],
        eq_rhs: vec![1.0],
        bounds: vec![(0.0, f64::INFINITY); k + 1],
    };
    let out = solve_lp_with(&lp, lp_cfg)?;
    if out.status != LpStatus::Optimal {
        return Err(AgentError::BadSubproblem(out.status));
    }
    let lambda = &out.primal[..k];
    let v = out.primal[k].max(0.0);
    let n = block.n_vars();
    let mut z = vec![0.0; n];
    for (w, p) in lambda.iter().zip(points) {
        if *w != 0.0 {
            for j in 0..n {
                z[j] += w * p[j];
            }
        }
    }
    let mu = out.dual_ineq;
    let m_active = mu.iter().sum::<f64>() >= 0.99 * m_penalty;
    Ok(SubproblemSolution {
        z,
        v,
        mu,
        j_lp: out.cost,
        m_active,
    })
}

/// Relaxed subproblem via the inner dual method: duals from projected
/// subgradient ascent, primal reconstructed as the best response at the
/// averaged prices with the violation repaired to feasibility. The value
/// is the dual estimate, exact in the limit of inner iterations.
pub fn solve_relaxed_subproblem_inner(
    block: &AgentBlock,
    y: &[f64],
    m_penalty: f64,
    iters: usize,
    step_scale: f64,
    cfg: &MilpConfig,
) -> Result<SubproblemSolution, AgentError> {
    let (mu, value) = inner_dual_subgradient(block, y, m_penalty, iters, step_scale, cfg)?;
    let (z, _) = pricing_oracle(block, &mu, cfg)?;
    let v = block
        .coupling_value(&z)
        .iter()
        .zip(y)
        .map(|(az, ys)| az - ys)
        .fold(0.0f64, f64::max);
    let m_active = mu.iter().sum::<f64>() >= 0.99 * m_penalty;
    Ok(SubproblemSolution {
        z,
        v,
        mu,
        j_lp: value,
        m_active,
    })
}

/// Projected subgradient ascent on the dual of the relaxed subproblem over
/// `{mu >= 0, 1'mu <= M}`; returns the ergodic average and its dual value.
pub fn inner_dual_subgradient(
    block: &AgentBlock,
    y: &[f64],
    m_penalty: f64,
    iters: usize,
    step_scale: f64,
    cfg: &MilpConfig,
) -> Result<(Vec<f64>, f64), AgentError> {
    let s = block.n_coupling();
    let inf_norm = block
        .coupling
        .iter()
        .map(|row| row.iter().map(|a| a.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let beta0 = step_scale * m_penalty / (1.0 + inf_norm);
    let mut mu = vec![0.0; s];
    let mut sum_mu = vec![0.0; s];
    for k in 0..iters {
        let (x_bar, _) = pricing_oracle(block, &mu, cfg)?;
        let beta = beta0 / ((k + 1) as f64).sqrt();
        let usage = block.coupling_value(&x_bar);
        for i in 0..s {
            mu[i] += beta * (usage[i] - y[i]);
        }
        project_price_set(&mut mu, m_penalty);
        for i in 0..s {
            sum_mu[i] += mu[i];
        }
    }
    let mut avg: Vec<f64> = sum_mu.iter().map(|v| v / iters as f64).collect();
    project_price_set(&mut avg, m_penalty);
    let value = local_lp_cost_via_duality(block, &avg, y, cfg)?;
    Ok((avg, value))
}

/// Euclidean projection onto `{mu >= 0, 1'mu <= m}`.
pub fn project_price_set(mu: &mut [f64], m: f64) {
    for v in mu.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let total: f64 = mu.iter().sum();
    if total <= m {
        return;
    }
    // projection onto the simplex {mu >= 0, 1'mu = m}
    let mut sorted: Vec<f64> = mu.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut theta = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        prefix += v;
        let candidate = (prefix - m) / (k + 1) as f64;
        if *v - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    for v in mu.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}

/// `y + alpha * sum_j (mu_self - mu_j)` over the neighbor prices.
pub fn allocation_update(
    y: &[f64],
    mu_self: &[f64],
    mu_neighbors: &[Vec<f64>],
    alpha: f64,
) -> Vec<f64> {
    let mut out = y.to_vec();
    for mu_j in mu_neighbors {
        for (o, (ms, mj)) in out.iter_mut().zip(mu_self.iter().zip(mu_j)) {
            *o += alpha * (ms - mj);
        }
    }
    out
}

/// Subproblem value by strong duality:
/// `min_{x in X_i} (c_i + A_i'mu)'x - mu'y`.
pub fn local_lp_cost_via_duality(
    block: &AgentBlock,
    mu: &[f64],
    y: &[f64],
    cfg: &MilpConfig,
) -> Result<f64, MilpError> {
    let (_, value) = pricing_oracle(block, mu, cfg)?;
    Ok(value - dot(mu, y))
}

/// Mixed-integer recovery at the given allocation.
pub fn recover_mixed_integer(
    block: &AgentBlock,
    y: &[f64],
    cfg: &MilpConfig,
) -> Result<LexMinResult, MilpError> {
    lex_min_violation(block, y, cfg)
}

/// Hull points for every block of an instance, for exact-hull runs.
pub fn instance_hulls(inst: &Instance, cap: u128) -> Result<Vec<Vec<Vec<f64>>>, hull::HullError> {
    inst.blocks.iter().map(|b| hull::hull_points(b, cap)).collect()
}

/// Exact subproblem value cross-check used in tests: the dual value at
/// `mu` must meet the primal optimum iff `mu` is dual optimal.
pub fn dual_value(
    block: &AgentBlock,
    mu: &[f64],
    y: &[f64],
    m_penalty: f64,
    cfg: &MilpConfig,
) -> Result<f64, MilpError> {
    let base = local_lp_cost_via_duality(block, mu, y, cfg)?;
    // the v-term contributes only when the price mass exceeds the penalty
    let excess = mu.iter().sum::<f64>() - m_penalty;
    if excess > 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Ok(base)
    }
}

pub use milp::LexMinResult as Recovery;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::fixtures;
    use rand::Rng;

    fn lp_cfg() -> LpConfig {
        LpConfig::default()
    }

    fn milp_cfg() -> MilpConfig {
        MilpConfig::default()
    }

    fn budget_block() -> AgentBlock {
        fixtures::two_agents_shared_budget().blocks[0].clone()
    }

    fn hull_of(block: &AgentBlock) -> Vec<Vec<f64>> {
        hull::hull_points(block, hull::DEFAULT_HULL_CAP).unwrap()
    }

    #[test]
    fn exact_subproblem_with_slack_allocation() {
        let blk = budget_block();
        let sol = solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &[2.0], 10.0, &lp_cfg()).unwrap();
        assert!((sol.z[0] - 2.0).abs() < 1e-9);
        assert!(sol.v.abs() < 1e-9);
        assert!((sol.j_lp + 2.0).abs() < 1e-9);
        // dual optimality certificate: value at mu equals the optimum
        let g = dual_value(&blk, &sol.mu, &[2.0], 10.0, &milp_cfg()).unwrap();
        assert!((g - sol.j_lp).abs() < 1e-7, "dual value {g} vs {}", sol.j_lp);
        assert!(sol.mu.iter().all(|m| *m >= 0.0));
        assert!(!sol.m_active);
    }

    #[test]
    fn exact_subproblem_with_deficit_allocation() {
        let blk = budget_block();
        let sol = solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &[-1.0], 10.0, &lp_cfg()).unwrap();
        assert!(sol.z[0].abs() < 1e-9);
        assert!((sol.v - 1.0).abs() < 1e-9);
        assert!((sol.j_lp - 10.0).abs() < 1e-9);
        // the violation is interior, which pins the price at the penalty
        assert!((sol.mu[0] - 10.0).abs() < 1e-7, "mu = {:?}", sol.mu);
        assert!(sol.m_active, "penalty-limited price must raise the flag");
        let g = dual_value(&blk, &sol.mu, &[-1.0], 10.0, &milp_cfg()).unwrap();
        assert!((g - sol.j_lp).abs() < 1e-7);
    }

    #[test]
    fn attainable_allocation_needs_no_violation() {
        let blk = budget_block();
        for x_bar in [vec![0.0], vec![1.0], vec![2.0]] {
            let y = blk.coupling_value(&x_bar);
            let sol =
                solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &y, 1000.0, &lp_cfg()).unwrap();
            assert!(sol.v < 1e-9);
            assert!(sol.j_lp <= blk.cost_value(&x_bar) + 1e-9);
        }
    }

    #[test]
    fn inner_value_tracks_exact_value() {
        let blk = budget_block();
        for y in [vec![2.0], vec![-1.0]] {
            let exact =
                solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &y, 10.0, &lp_cfg()).unwrap();
            let (_, value) = inner_dual_subgradient(&blk, &y, 10.0, 500, 1.0, &milp_cfg()).unwrap();
            assert!(
                (value - exact.j_lp).abs() <= 0.1,
                "y = {y:?}: inner {value} vs exact {}",
                exact.j_lp
            );
        }
    }

    #[test]
    fn single_inner_step_is_one_projected_subgradient_step() {
        let blk = budget_block();
        let y = [-1.0];
        let (mu, _) = inner_dual_subgradient(&blk, &y, 10.0, 1, 1.0, &milp_cfg()).unwrap();
        // from mu = 0 the priced minimizer is x = 2, the subgradient 2-(-1),
        // beta0 = 10 / (1 + 1); the step lands outside and projects to M
        let expected = (10.0f64 / 2.0 * 3.0).min(10.0);
        assert!((mu[0] - expected).abs() < 1e-12, "mu = {:?}", mu);
    }

    #[test]
    fn inner_duals_stay_in_price_set() {
        let blk = fixtures::two_agents_signed_rows().blocks[0].clone();
        let mut rng = crate::seeds::stream(41, "agent-dual-feas");
        for _ in 0..10 {
            let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let m = 5.0;
            let (mu, _) = inner_dual_subgradient(&blk, &y, m, 50, 1.0, &milp_cfg()).unwrap();
            assert!(mu.iter().all(|v| *v >= 0.0));
            assert!(mu.iter().sum::<f64>() <= m + 1e-9);
            let exact = solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &y, m, &lp_cfg()).unwrap();
            assert!(exact.mu.iter().all(|v| *v >= 0.0));
            assert!(exact.mu.iter().sum::<f64>() <= m + 1e-9);
        }
    }

    #[test]
    fn mode_equivalence_on_fixture_blocks() {
        for blk in [
            budget_block(),
            fixtures::two_agents_signed_rows().blocks[0].clone(),
            fixtures::three_agents_ranked_costs().blocks[2].clone(),
        ] {
            let y = vec![0.5; blk.n_coupling()];
            // exceeds every dual price of these blocks without inflating
            // the inner step size beyond what 2000 iterations can settle
            let m = 5.0;
            let scale = AlgoConfig::default().inner_step_scale;
            let exact = solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &y, m, &lp_cfg()).unwrap();
            let inner = solve_relaxed_subproblem_inner(&blk, &y, m, 2000, scale, &milp_cfg()).unwrap();
            let tol = 0.02 * (1.0 + exact.j_lp.abs());
            assert!(
                (inner.j_lp - exact.j_lp).abs() <= tol,
                "inner {} vs exact {}",
                inner.j_lp,
                exact.j_lp
            );
        }
    }

    #[test]
    fn allocation_update_arithmetic() {
        // consensus fixed point
        let y = vec![1.0, -2.0];
        let mu = vec![0.5, 0.25];
        let updated = allocation_update(&y, &mu, &[mu.clone(), mu.clone()], 0.7);
        assert_eq!(updated, y);

        // plain arithmetic
        let updated = allocation_update(&[0.0], &[1.0], &[vec![0.0]], 0.5);
        assert_eq!(updated, vec![0.5]);
    }

    #[test]
    fn pairwise_updates_conserve_total_allocation() {
        let mut rng = crate::seeds::stream(43, "agent-conserve");
        for _ in 0..20 {
            let y1: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let y2: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let m1: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..2.0)).collect();
            let m2: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..2.0)).collect();
            let alpha = rng.gen_range(0.01..1.0);
            let u1 = allocation_update(&y1, &m1, &[m2.clone()], alpha);
            let u2 = allocation_update(&y2, &m2, &[m1.clone()], alpha);
            for s in 0..3 {
                let before = y1[s] + y2[s];
                let after = u1[s] + u2[s];
                assert!((before - after).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duality_cost_examples() {
        let blk = budget_block();
        let j = local_lp_cost_via_duality(&blk, &[1.0], &[2.0], &milp_cfg()).unwrap();
        assert!((j + 2.0).abs() < 1e-9);
        // zero price collapses to the unconstrained block bound
        let j = local_lp_cost_via_duality(&blk, &[0.0], &[7.5], &milp_cfg()).unwrap();
        assert!((j + 2.0).abs() < 1e-9);
    }

    #[test]
    fn weak_duality_against_exact_value() {
        let blk = budget_block();
        let y = [2.0];
        let exact = solve_relaxed_subproblem_hull(&blk, &hull_of(&blk), &y, 10.0, &lp_cfg()).unwrap();
        let mut rng = crate::seeds::stream(47, "agent-weak-duality");
        for _ in 0..20 {
            let mu = vec![rng.gen_range(0.0..10.0)];
            let g = dual_value(&blk, &mu, &y, 10.0, &milp_cfg()).unwrap();
            assert!(g <= exact.j_lp + 1e-7, "g = {g} exceeds {}", exact.j_lp);
        }
    }

    #[test]
    fn recovery_examples() {
        let blk = budget_block();
        let r = recover_mixed_integer(&blk, &[2.0], &milp_cfg()).unwrap();
        assert!((r.rho, r.x[0]) == (0.0, 2.0));
        let r = recover_mixed_integer(&blk, &[-1.0], &milp_cfg()).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-9 && r.x[0] == 0.0);

        let e3 = fixtures::three_agents_ranked_costs();
        let r = recover_mixed_integer(&e3.blocks[2], &[5.0], &milp_cfg()).unwrap();
        assert!(r.rho.abs() < 1e-9);
        assert_eq!(r.x, vec![5.0]);
        assert!((r.xi + 15.0).abs() < 1e-9);
    }

    #[test]
    fn recovery_zero_violation_when_allocation_covers_a_point() {
        let blk = fixtures::two_agents_signed_rows().blocks[0].clone();
        // y = A x for x = 1 covers that point exactly
        let y = blk.coupling_value(&[1.0]);
        let r = recover_mixed_integer(&blk, &y, &milp_cfg()).unwrap();
        assert!(r.rho <= 1e-9);
    }

    #[test]
    fn projection_cases() {
        let mut mu = vec![-1.0, 0.5];
        project_price_set(&mut mu, 10.0);
        assert_eq!(mu, vec![0.0, 0.5]);

        let mut mu = vec![6.0, 6.0];
        project_price_set(&mut mu, 10.0);
        assert!((mu[0] - 5.0).abs() < 1e-12 && (mu[1] - 5.0).abs() < 1e-12);
        let mut mu = vec![12.0, 1.0];
        project_price_set(&mut mu, 10.0);
        assert!((mu.iter().sum::<f64>() - 10.0).abs() < 1e-12);
        assert!(mu[1] >= 0.0 && mu[0] > mu[1]);
    }

    #[test]
    fn default_penalty_scales_with_instance() {
        let inst = fixtures::three_agents_ranked_costs();
        assert_eq!(default_penalty(&inst), 10.0 * 3.0 * 3.0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = AlgoConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.step.gamma = 0.5;
        assert!(cfg.validate().is_err());
        cfg.step.gamma = 1.0;
        cfg.delta = -0.1;
        assert!(cfg.validate().is_err());
    }
}
