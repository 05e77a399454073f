//! Centralized references and a-posteriori guarantees.
//!
//! Exact solves of the tightened LP approximation and its master
//! decomposition, the partial-integrality census of LP vertices, Slater
//! certificates for the tightened coupling constraint, the asymptotic and
//! finite-time suboptimality bounds evaluated from run data, and the batch
//! comparison of the uniform tightening against the worst-case per-row
//! one.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hull::{hull_points, HullError};
use crate::lp::{solve_lp_with, LinearProgram, LpConfig, LpError, LpStatus};
use crate::milp::{
    block_program, lex_min_violation, solve_milp, stacked_program, MilpConfig, MilpError,
    MilpStatus,
};
use crate::network::TraceRow;
use crate::problem::{
    dot, evaluate_solution, generate_random, AgentBlock, EvalError, GeneratorParams, Instance,
    SolutionVector, FEAS_TOL,
};
use crate::restriction::restriction_report;

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub milp: MilpConfig,
    pub hull_cap: u128,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            milp: MilpConfig::default(),
            hull_cap: crate::hull::DEFAULT_HULL_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error("restricted LP is infeasible at this tightening")]
    RestrictedInfeasible,
    #[error("allocation not admissible for agent {agent}")]
    AllocationNotAdmissible { agent: usize },
    #[error("trace row lacks per-agent data: {0}")]
    MissingTraceData(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Solution of the tightened LP approximation.
#[derive(Debug, Clone)]
pub struct CentralLp {
    pub feasible: bool,
    /// Per-agent relaxed points; empty when infeasible.
    pub z: Vec<Vec<f64>>,
    pub cost: f64,
    /// Multipliers of the coupling rows.
    pub coupling_duals: Vec<f64>,
    /// Solved over enumerated hulls (exact) or the blocks' continuous
    /// relaxations (a superset of the hulls).
    pub hull_exact: bool,
    /// Heuristic hint from a perturbed re-solve; never a certificate.
    pub maybe_non_unique: bool,
}

fn instance_hulls_or_none(inst: &Instance, cap: u128) -> Option<Vec<Vec<Vec<f64>>>> {
    inst.blocks.iter().map(|b| hull_points(b, cap).ok()).collect()
}

/// Stacked LP over convex multipliers of the per-block hull points.
struct HullLp {
    lp: LinearProgram,
    /// Column offset of each block's multipliers.
    offsets: Vec<usize>,
}

fn build_hull_lp(inst: &Instance, hulls: &[Vec<Vec<f64>>], rhs: &[f64]) -> HullLp {
    let total: usize = hulls.iter().map(|h| h.len()).sum();
    let s = inst.n_coupling;
    let mut objective = Vec::with_capacity(total);
    let mut coupling = vec![Vec::with_capacity(total); s];
    let mut eq_lhs = Vec::with_capacity(inst.n_agents);
    let mut offsets = Vec::with_capacity(inst.n_agents);
    let mut offset = 0;
    for (blk, points) in inst.blocks.iter().zip(hulls) {
        offsets.push(offset);
        for p in points {
            objective.push(blk.cost_value(p));
            for (srow, row) in blk.coupling.iter().zip(coupling.iter_mut()) {
                row.push(dot(srow, p));
            }
        }
        offset += points.len();
    }
    for (i, points) in hulls.iter().enumerate() {
        let mut row = vec![0.0; total];
        row[offsets[i]..offsets[i] + points.len()].fill(1.0);
        eq_lhs.push(row);
    }
    HullLp {
        lp: LinearProgram {
            objective,
            ineq_lhs: coupling,
            ineq_rhs: rhs.to_vec(),
            eq_lhs,
            eq_rhs: vec![1.0; inst.n_agents],
            bounds: vec![(0.0, f64::INFINITY); total],
        },
        offsets,
    }
}

fn hull_solution_to_z(
    inst: &Instance,
    hulls: &[Vec<Vec<f64>>],
    offsets: &[usize],
    lambda: &[f64],
) -> Vec<Vec<f64>> {
    inst.blocks
        .iter()
        .enumerate()
        .map(|(i, blk)| {
            let n = blk.n_vars();
            let mut z = vec![0.0; n];
            for (k, p) in hulls[i].iter().enumerate() {
                let w = lambda[offsets[i] + k];
                if w != 0.0 {
                    for j in 0..n {
                        z[j] += w * p[j];
                    }
                }
            }
            z
        })
        .collect()
}

/// Stacked LP in the original variables with each block relaxed to its
/// continuous polyhedron; a superset of the hull form.
fn build_relaxed_lp(inst: &Instance, rhs: &[f64]) -> LinearProgram {
    let mip = stacked_program(inst);
    let mut lp = mip.lp;
    for (s, r) in rhs.iter().enumerate() {
        lp.ineq_rhs[s] = *r;
    }
    lp
}

fn split_stacked(inst: &Instance, x: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(inst.n_agents);
    let mut offset = 0;
    for blk in &inst.blocks {
        out.push(x[offset..offset + blk.n_vars()].to_vec());
        offset += blk.n_vars();
    }
    out
}

/// Solve the tightened LP approximation `min sum c'z` s.t.
/// `sum A_i z_i <= b - sigma`, `z_i` in the hull of the block set.
pub fn solve_restricted_lp_central(
    inst: &Instance,
    sigma: &[f64],
    cfg: &AnalysisConfig,
) -> Result<CentralLp, AnalysisError> {
    let rhs: Vec<f64> = inst.resource.iter().zip(sigma).map(|(b, s)| b - s).collect();
    let infeasible = |hull_exact| CentralLp {
        feasible: false,
        z: vec![],
        cost: f64::INFINITY,
        coupling_duals: vec![],
        hull_exact,
        maybe_non_unique: false,
    };
    match instance_hulls_or_none(inst, cfg.hull_cap) {
        Some(hulls) => {
            let built = build_hull_lp(inst, &hulls, &rhs);
            let out = solve_lp_with(&built.lp, &cfg.milp.lp)?;
            match out.status {
                LpStatus::Infeasible => Ok(infeasible(true)),
                LpStatus::Unbounded => Err(AnalysisError::Milp(MilpError::UnboundedRelaxation)),
                LpStatus::Optimal => {
                    let z = hull_solution_to_z(inst, &hulls, &built.offsets, &out.primal);
                    // perturbed re-solve: a different optimal point hints at
                    // a non-unique optimum
                    let mut probe = built.lp.clone();
                    for (j, c) in probe.objective.iter_mut().enumerate() {
                        *c += 1e-7 * ((j % 5) as f64 - 2.0);
                    }
                    let alt = solve_lp_with(&probe, &cfg.milp.lp)?;
                    let maybe_non_unique = alt.status == LpStatus::Optimal && {
                        let z_alt = hull_solution_to_z(inst, &hulls, &built.offsets, &alt.primal);
                        z.iter()
                            .zip(&z_alt)
                            .any(|(a, b)| a.iter().zip(b).any(|(x, y)| (x - y).abs() > 1e-4))
                    };
                    Ok(CentralLp {
                        feasible: true,
                        z,
                        cost: out.cost,
                        coupling_duals: out.dual_ineq,
                        hull_exact: true,
                        maybe_non_unique,
                    })
                }
            }
        }
        None => {
            let lp = build_relaxed_lp(inst, &rhs);
            let out = solve_lp_with(&lp, &cfg.milp.lp)?;
            match out.status {
                LpStatus::Infeasible => Ok(infeasible(false)),
                LpStatus::Unbounded => Err(AnalysisError::Milp(MilpError::UnboundedRelaxation)),
                LpStatus::Optimal => Ok(CentralLp {
                    feasible: true,
                    z: split_stacked(inst, &out.primal),
                    cost: out.cost,
                    coupling_duals: out.dual_ineq[..inst.n_coupling].to_vec(),
                    hull_exact: false,
                    maybe_non_unique: false,
                }),
            }
        }
    }
}

/// Optimal cost of one subproblem at a fixed allocation.
fn subproblem_value_hull(
    blk: &AgentBlock,
    points: &[Vec<f64>],
    y: &[f64],
    lp_cfg: &LpConfig,
) -> Result<Option<(f64, Vec<f64>)>, LpError> {
    let k = points.len();
    let objective: Vec<f64> = points.iter().map(|p| blk.cost_value(p)).collect();
    let ineq_lhs: Vec<Vec<f64>> = blk
        .coupling
        .iter()
        .map(|srow| points.iter().map(|p| dot(srow, p)).collect())
        .collect();
    let lp = LinearProgram {
        objective,
        ineq_lhs,
        ineq_rhs: y.to_vec(),
        eq_lhs: vec![vec![1.0; k]],
        eq_rhs: vec![1.0],
        bounds: vec![(0.0, f64::INFINITY); k],
    };
    let out = solve_lp_with(&lp, lp_cfg)?;
    if out.status != LpStatus::Optimal {
        return Ok(None);
    }
    let n = blk.n_vars();
    let mut z = vec![0.0; n];
    for (w, p) in out.primal.iter().zip(points) {
        if *w != 0.0 {
            for j in 0..n {
                z[j] += w * p[j];
            }
        }
    }
    Ok(Some((out.cost, z)))
}

/// `p_i(y_i)`: the block's optimal relaxed cost at allocation `y_i`.
pub fn subproblem_value(
    blk: &AgentBlock,
    y: &[f64],
    cfg: &AnalysisConfig,
) -> Result<Option<f64>, AnalysisError> {
    match hull_points(blk, cfg.hull_cap) {
        Ok(points) => Ok(subproblem_value_hull(blk, &points, y, &cfg.milp.lp)?.map(|(c, _)| c)),
        Err(_) => {
            let mut lhs = blk.coupling.clone();
            let mut rhs = y.to_vec();
            lhs.extend(blk.local_lhs.iter().cloned());
            rhs.extend_from_slice(&blk.local_rhs);
            let lp = LinearProgram::inequality_form(
                blk.cost.clone(),
                lhs,
                rhs,
                blk.lower.iter().copied().zip(blk.upper.iter().copied()).collect(),
            );
            let out = solve_lp_with(&lp, &cfg.milp.lp)?;
            Ok((out.status == LpStatus::Optimal).then_some(out.cost))
        }
    }
}

/// Master decomposition solution derived from the central LP.
#[derive(Debug, Clone)]
pub struct MasterSolution {
    /// Per-agent allocations summing to `b - sigma`.
    pub y: Vec<Vec<f64>>,
    pub p_values: Vec<f64>,
    pub z: Vec<Vec<f64>>,
    pub lp_cost: f64,
    pub hull_exact: bool,
}

/// Allocations from the central solve: `y_i = A_i z_i` plus an equal split
/// of the leftover resource, so the allocations sum to `b - sigma` and
/// every subproblem stays feasible.
pub fn solve_master_central(
    inst: &Instance,
    sigma: &[f64],
    cfg: &AnalysisConfig,
) -> Result<MasterSolution, AnalysisError> {
    let central = solve_restricted_lp_central(inst, sigma, cfg)?;
    if !central.feasible {
        return Err(AnalysisError::RestrictedInfeasible);
    }
    let s = inst.n_coupling;
    let n = inst.n_agents as f64;
    let mut usage = vec![0.0; s];
    for (blk, z) in inst.blocks.iter().zip(&central.z) {
        for (u, a) in usage.iter_mut().zip(blk.coupling_value(z)) {
            *u += a;
        }
    }
    let slack: Vec<f64> = inst
        .resource
        .iter()
        .zip(sigma)
        .zip(&usage)
        .map(|((b, sg), u)| b - sg - u)
        .collect();
    let y: Vec<Vec<f64>> = inst
        .blocks
        .iter()
        .zip(&central.z)
        .map(|(blk, z)| {
            blk.coupling_value(z)
                .iter()
                .zip(&slack)
                .map(|(a, sl)| a + sl / n)
                .collect()
        })
        .collect();
    let p_values: Vec<f64> = inst
        .blocks
        .iter()
        .zip(&y)
        .enumerate()
        .map(|(agent, (blk, yi))| {
            subproblem_value(blk, yi, cfg)?.ok_or(AnalysisError::AllocationNotAdmissible { agent })
        })
        .collect::<Result<_, _>>()?;
    Ok(MasterSolution {
        y,
        p_values,
        z: central.z,
        lp_cost: central.cost,
        hull_exact: central.hull_exact,
    })
}

/// Integrality tolerance of the census.
pub const CENSUS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub integral: Vec<usize>,
    pub fractional: Vec<usize>,
}

impl Census {
    /// `N - S - 1`, the guaranteed number of integral agents at a vertex.
    pub fn guaranteed(inst: &Instance) -> usize {
        inst.n_agents.saturating_sub(inst.n_coupling + 1)
    }
}

/// Classify agents by whether their relaxed point has integral integer
/// coordinates.
pub fn integrality_census(inst: &Instance, z: &[Vec<f64>]) -> Census {
    let mut integral = Vec::new();
    let mut fractional = Vec::new();
    for (i, (blk, zi)) in inst.blocks.iter().zip(z).enumerate() {
        if blk.is_integer_feasible(zi, CENSUS_TOL) {
            integral.push(i);
        } else {
            fractional.push(i);
        }
    }
    Census {
        integral,
        fractional,
    }
}

/// Strictly feasible point of the tightened coupling constraint together
/// with its worst-row slack.
#[derive(Debug, Clone, Serialize)]
pub struct SlaterCertificate {
    pub z_hat: Vec<Vec<f64>>,
    pub zeta: f64,
}

impl SlaterCertificate {
    /// Recompute the slack from the stored point.
    pub fn recompute_zeta(&self, inst: &Instance, sigma: &[f64]) -> f64 {
        let mut usage = vec![0.0; inst.n_coupling];
        for (blk, z) in inst.blocks.iter().zip(&self.z_hat) {
            for (u, a) in usage.iter_mut().zip(blk.coupling_value(z)) {
                *u += a;
            }
        }
        inst.resource
            .iter()
            .zip(sigma)
            .zip(&usage)
            .map(|((b, sg), u)| b - sg - u)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Maximize the worst-row slack of the tightened coupling constraint over
/// the hulls; a certificate is returned iff the maximum is positive.
pub fn find_slater_point(
    inst: &Instance,
    sigma: &[f64],
    cfg: &AnalysisConfig,
) -> Result<Option<SlaterCertificate>, AnalysisError> {
    let rhs: Vec<f64> = inst.resource.iter().zip(sigma).map(|(b, s)| b - s).collect();
    let hulls = match instance_hulls_or_none(inst, cfg.hull_cap) {
        Some(h) => h,
        None => return Err(AnalysisError::Hull(HullError::UnsupportedContinuous { dim: 2 })),
    };
    let built = build_hull_lp(inst, &hulls, &rhs);
    let mut lp = built.lp;
    // drop the cost terms and maximize the appended slack variable
    lp.objective.fill(0.0);
    let cols = lp.objective.len();
    lp.objective.push(-1.0);
    for row in &mut lp.ineq_lhs {
        row.push(1.0);
    }
    for row in &mut lp.eq_lhs {
        row.push(0.0);
    }
    lp.bounds.push((f64::NEG_INFINITY, f64::INFINITY));
    let out = solve_lp_with(&lp, &cfg.milp.lp)?;
    if out.status != LpStatus::Optimal {
        return Ok(None);
    }
    let zeta = out.primal[cols];
    if zeta <= 1e-9 {
        return Ok(None);
    }
    let z_hat = hull_solution_to_z(inst, &hulls, &built.offsets, &out.primal[..cols]);
    Ok(Some(SlaterCertificate { z_hat, zeta }))
}

/// Feasibility verdict for the original problem.
pub fn check_feasibility(inst: &Instance, sol: &SolutionVector) -> Result<bool, EvalError> {
    Ok(evaluate_solution(inst, sol)?.is_feasible(FEAS_TOL))
}

/// Asymptotic suboptimality bound evaluated at an allocation profile.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticBound {
    pub rhs: f64,
    /// Contribution of the (at most `S+1`) non-integral agents.
    pub fractional_sum: f64,
    /// Tightening-scaled Slater term.
    pub slater_term: f64,
    pub fractional_agents: Vec<usize>,
    pub p_values: Vec<f64>,
}

/// Evaluate the asymptotic bound: the recovered cost exceeds the true
/// optimum by at most the non-integral agents' recovery premium plus the
/// tightening-scaled Slater term.
pub fn asymptotic_bound(
    inst: &Instance,
    y: &[Vec<f64>],
    x: &[Vec<f64>],
    z: &[Vec<f64>],
    slater: &SlaterCertificate,
    sigma_asy: f64,
    cfg: &AnalysisConfig,
) -> Result<AsymptoticBound, AnalysisError> {
    let p_values: Vec<f64> = inst
        .blocks
        .iter()
        .zip(y)
        .enumerate()
        .map(|(agent, (blk, yi))| {
            subproblem_value(blk, yi, cfg)?.ok_or(AnalysisError::AllocationNotAdmissible { agent })
        })
        .collect::<Result<_, _>>()?;
    let census = integrality_census(inst, z);
    let fractional_sum: f64 = census
        .fractional
        .iter()
        .map(|&i| inst.blocks[i].cost_value(&x[i]) - p_values[i])
        .sum();
    let slater_sum: f64 = inst
        .blocks
        .iter()
        .zip(&slater.z_hat)
        .zip(&p_values)
        .map(|((blk, zh), p)| blk.cost_value(zh) - p)
        .sum();
    let slater_term = sigma_asy / slater.zeta * slater_sum;
    Ok(AsymptoticBound {
        rhs: fractional_sum + slater_term,
        fractional_sum,
        slater_term,
        fractional_agents: census.fractional,
        p_values,
    })
}

/// `(1/zeta) * sum_i (max - min of c_i'x over X_i)`: the sensitivity of
/// the decomposition value to resource perturbations.
pub fn gamma_factor(inst: &Instance, zeta: f64, cfg: &AnalysisConfig) -> Result<f64, MilpError> {
    let spreads: Vec<f64> = inst
        .blocks
        .par_iter()
        .map(|blk| -> Result<f64, MilpError> {
            let min = solve_milp(&block_program(blk, blk.cost.clone()), &cfg.milp)?;
            let negated: Vec<f64> = blk.cost.iter().map(|c| -c).collect();
            let max = solve_milp(&block_program(blk, negated), &cfg.milp)?;
            match (min.status, max.status) {
                (MilpStatus::Optimal, MilpStatus::Optimal) => Ok(-max.cost - min.cost),
                _ => Err(MilpError::InfeasibleBlock),
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(spreads.iter().sum::<f64>() / zeta)
}

/// Finite-time suboptimality bound from one trace row:
/// recovered-minus-relaxed cost, a price-mass slack allowance, and the
/// tightening-scaled value sensitivity.
pub fn finite_time_bound(
    row: &TraceRow,
    gamma: f64,
    eps: f64,
    sigma_asy: f64,
    delta: f64,
) -> Result<f64, AnalysisError> {
    if row.mu.is_empty() {
        return Err(AnalysisError::MissingTraceData(
            "per-agent prices are not stored for this run size".into(),
        ));
    }
    let price_mass: f64 = row
        .mu
        .iter()
        .map(|mu| mu.iter().map(|v| v.abs()).sum::<f64>())
        .sum();
    Ok((row.milp_cost - row.lp_cost_sum) + eps * price_mass + gamma * (sigma_asy + delta))
}

/// The usual ground truth: stacked branch-and-bound optimum.
pub fn optimal_milp_cost(inst: &Instance, cfg: &AnalysisConfig) -> Result<Option<f64>, MilpError> {
    let out = solve_milp(&stacked_program(inst), &cfg.milp)?;
    Ok(match out.status {
        MilpStatus::Optimal => Some(out.cost),
        MilpStatus::Infeasible => None,
    })
}

/// Everything the run artifact records about guarantees; fields are best
/// effort and explain themselves through `notes`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub j_milp: Option<f64>,
    pub lp_restricted_cost: Option<f64>,
    pub slater_zeta: Option<f64>,
    pub gamma: Option<f64>,
    pub asymptotic_rhs: Option<f64>,
    pub finite_time_rhs_final: Option<f64>,
    pub actual_gap: Option<f64>,
    pub fractional_agents: Vec<usize>,
    pub notes: Vec<String>,
}

/// Assemble the bound report for a finished run.
pub fn bound_report(
    inst: &Instance,
    trace: &crate::network::RunTrace,
    delta: f64,
    eps: f64,
    cfg: &AnalysisConfig,
) -> BoundReport {
    let mut notes = Vec::new();
    let sigma = &trace.sigma;
    let sigma_asy = trace.sigma_asy;

    let j_milp = match optimal_milp_cost(inst, cfg) {
        Ok(v) => {
            if v.is_none() {
                notes.push("stacked problem infeasible".into());
            }
            v
        }
        Err(e) => {
            notes.push(format!("optimal cost unavailable: {e}"));
            None
        }
    };
    let lp_restricted_cost = match solve_restricted_lp_central(inst, sigma, cfg) {
        Ok(c) if c.feasible => Some(c.cost),
        Ok(_) => {
            notes.push("restricted LP infeasible".into());
            None
        }
        Err(e) => {
            notes.push(format!("restricted LP failed: {e}"));
            None
        }
    };
    let slater = match find_slater_point(inst, sigma, cfg) {
        Ok(s) => {
            if s.is_none() {
                notes.push("no Slater point at this tightening".into());
            }
            s
        }
        Err(e) => {
            notes.push(format!("Slater search failed: {e}"));
            None
        }
    };
    let gamma = slater.as_ref().and_then(|s| match gamma_factor(inst, s.zeta, cfg) {
        Ok(g) => Some(g),
        Err(e) => {
            notes.push(format!("gamma unavailable: {e}"));
            None
        }
    });

    let last = trace.rows.last();
    let mut fractional_agents = Vec::new();
    let mut asymptotic_rhs = None;
    if let (Some(slater), Some(row)) = (&slater, last) {
        if !row.y.is_empty() {
            let x: Vec<Vec<f64>> = trace.final_solution.assignments.clone();
            match asymptotic_bound(inst, &row.y, &x, &row.z, slater, sigma_asy, cfg) {
                Ok(b) => {
                    fractional_agents = b.fractional_agents.clone();
                    asymptotic_rhs = Some(b.rhs);
                }
                Err(e) => notes.push(format!("asymptotic bound unavailable: {e}")),
            }
        } else {
            notes.push("per-agent trace data not stored at this size".into());
        }
    }
    let finite_time_rhs_final = match (gamma, last) {
        (Some(g), Some(row)) => match finite_time_bound(row, g, eps, sigma_asy, delta) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("finite-time bound unavailable: {e}"));
                None
            }
        },
        _ => None,
    };
    let actual_gap = match (j_milp, last) {
        (Some(j), Some(row)) if row.feasible => Some(row.milp_cost - j),
        _ => None,
    };
    BoundReport {
        j_milp,
        lp_restricted_cost,
        slater_zeta: slater.map(|s| s.zeta),
        gamma,
        asymptotic_rhs,
        finite_time_rhs_final,
        actual_gap,
        fractional_agents,
        notes,
    }
}

/// One instance's comparison record.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub instance_id: u64,
    pub ours_applicable: bool,
    pub baseline_applicable: bool,
    pub gap_present: Option<bool>,
    pub rel_subopt_ours: Option<f64>,
    pub rel_subopt_baseline: Option<f64>,
    pub rel_restriction_ours: Option<f64>,
    pub rel_restriction_baseline: Option<f64>,
    pub fault: Option<String>,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Recover a full mixed-integer point from centrally solved allocations
/// and report its relative suboptimality.
fn recovered_relative_subopt(
    inst: &Instance,
    sigma: &[f64],
    j_milp: f64,
    cfg: &AnalysisConfig,
) -> Result<Option<f64>, AnalysisError> {
    let master = solve_master_central(inst, sigma, cfg)?;
    let xs: Vec<Vec<f64>> = inst
        .blocks
        .iter()
        .zip(&master.y)
        .map(|(blk, yi)| Ok(lex_min_violation(blk, yi, &cfg.milp)?.x))
        .collect::<Result<_, AnalysisError>>()?;
    let sol = SolutionVector::new(xs, "central-recovery");
    let ev = evaluate_solution(inst, &sol)?;
    if !ev.is_feasible(FEAS_TOL) {
        return Ok(None);
    }
    if j_milp.abs() <= 1e-12 {
        return Ok(None);
    }
    Ok(Some(((ev.cost - j_milp) / j_milp).abs()))
}

/// Compare the uniform tightening against the worst-case per-row one on a
/// single instance.
pub fn compare_single(inst: &Instance, instance_id: u64, cfg: &AnalysisConfig) -> ComparisonRow {
    let mut row = ComparisonRow {
        instance_id,
        ours_applicable: false,
        baseline_applicable: false,
        gap_present: None,
        rel_subopt_ours: None,
        rel_subopt_baseline: None,
        rel_restriction_ours: None,
        rel_restriction_baseline: None,
        fault: None,
    };
    let fail = |row: &mut ComparisonRow, e: String| {
        row.fault = Some(e);
    };

    let report = match restriction_report(inst, &cfg.milp) {
        Ok(r) => r,
        Err(e) => {
            fail(&mut row, format!("restriction: {e}"));
            return row;
        }
    };
    let s = inst.n_coupling;
    let sigma_ours = vec![report.sigma_asy; s];
    let sigma_base = report.sigma_baseline.clone();
    let b_norm = norm2(&inst.resource);
    if b_norm > 0.0 {
        row.rel_restriction_ours = Some(norm2(&sigma_ours) / b_norm);
        row.rel_restriction_baseline = Some(norm2(&sigma_base) / b_norm);
    }

    let ours_lp = match solve_restricted_lp_central(inst, &sigma_ours, cfg) {
        Ok(c) => c,
        Err(e) => {
            fail(&mut row, format!("restricted LP: {e}"));
            return row;
        }
    };
    row.ours_applicable = ours_lp.feasible;
    let base_lp = match solve_restricted_lp_central(inst, &sigma_base, cfg) {
        Ok(c) => c,
        Err(e) => {
            fail(&mut row, format!("baseline LP: {e}"));
            return row;
        }
    };
    row.baseline_applicable = base_lp.feasible;

    let j_milp = match optimal_milp_cost(inst, cfg) {
        Ok(Some(j)) => j,
        Ok(None) => {
            fail(&mut row, "instance infeasible".into());
            return row;
        }
        Err(e) => {
            fail(&mut row, format!("ground truth: {e}"));
            return row;
        }
    };
    match solve_restricted_lp_central(inst, &vec![0.0; s], cfg) {
        Ok(c) if c.feasible => {
            row.gap_present = Some(j_milp - c.cost > 1e-6 * (1.0 + j_milp.abs()));
        }
        Ok(_) => {}
        Err(e) => {
            fail(&mut row, format!("relaxation: {e}"));
            return row;
        }
    }

    if row.ours_applicable {
        match recovered_relative_subopt(inst, &sigma_ours, j_milp, cfg) {
            Ok(v) => row.rel_subopt_ours = v,
            Err(e) => fail(&mut row, format!("our recovery: {e}")),
        }
    }
    if row.baseline_applicable {
        match recovered_relative_subopt(inst, &sigma_base, j_milp, cfg) {
            Ok(v) => row.rel_subopt_baseline = v,
            Err(e) => fail(&mut row, format!("baseline recovery: {e}")),
        }
    }
    row
}

/// Generate `count` instances and compare the two tightenings on each;
/// per-instance faults are recorded in the rows and the batch continues.
pub fn compare_methods(
    params: &GeneratorParams,
    count: usize,
    cfg: &AnalysisConfig,
) -> Vec<ComparisonRow> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut p = params.clone();
            p.seed = params.seed.wrapping_add(i as u64);
            match generate_random(&p) {
                Ok(inst) => compare_single(&inst, p.seed, cfg),
                Err(e) => ComparisonRow {
                    instance_id: p.seed,
                    ours_applicable: false,
                    baseline_applicable: false,
                    gap_present: None,
                    rel_subopt_ours: None,
                    rel_subopt_baseline: None,
                    rel_restriction_ours: None,
                    rel_restriction_baseline: None,
                    fault: Some(format!("generator: {e}")),
                },
            }
        })
        .collect()
}

/// Fixed-schema CSV of comparison rows.
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(
        "instance_id,ours_applicable,baseline_applicable,gap_present,rel_subopt_ours,rel_subopt_baseline,rel_restriction_ours,rel_restriction_baseline\n",
    );
    let opt = |v: &Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let optb = |v: &Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.instance_id,
            r.ours_applicable,
            r.baseline_applicable,
            optb(&r.gap_present),
            opt(&r.rel_subopt_ours),
            opt(&r.rel_subopt_baseline),
            opt(&r.rel_restriction_ours),
            opt(&r.rel_restriction_baseline),
        ));
    }
    out
}

/// Batch-level applicability and suboptimality aggregates.
#[derive(Debug, Clone, Serialize)]
pub struct BatchAggregate {
    pub total: usize,
    pub faults: usize,
    pub ours_applicable: usize,
    pub baseline_applicable: usize,
    pub gap_present: usize,
    pub mean_rel_subopt_ours: Option<f64>,
    pub mean_rel_subopt_baseline: Option<f64>,
}

pub fn aggregate(rows: &[ComparisonRow]) -> BatchAggregate {
    let mean = |vals: Vec<f64>| {
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    BatchAggregate {
        total: rows.len(),
        faults: rows.iter().filter(|r| r.fault.is_some()).count(),
        ours_applicable: rows.iter().filter(|r| r.ours_applicable).count(),
        baseline_applicable: rows.iter().filter(|r| r.baseline_applicable).count(),
        gap_present: rows.iter().filter(|r| r.gap_present == Some(true)).count(),
        mean_rel_subopt_ours: mean(rows.iter().filter_map(|r| r.rel_subopt_ours).collect()),
        mean_rel_subopt_baseline: mean(rows.iter().filter_map(|r| r.rel_subopt_baseline).collect()),
    }
}
