//! Coupling-constraint tightening quantities.
//!
//! For each block the row-wise lower bounds `L_i` of its coupling values,
//! the point of `X_i` that stays uniformly closest to `L_i`, and from these
//! the uniform tightening amount that guarantees recovered mixed-integer
//! points respect the original coupling constraint. The worst-case per-row
//! tightening used by dual-decomposition schemes is computed alongside for
//! comparison.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::milp::{block_program, solve_milp, MilpConfig, MilpError, MilpStatus};
use crate::problem::{dot, AgentBlock, Instance};

/// Values this close to zero are treated as exact zeros so structurally
/// zero restrictions survive floating-point noise.
const ZERO_SNAP: f64 = 1e-9;

/// Per-agent tightening data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRestriction {
    /// Row-wise minima of the block's coupling values over `X_i`.
    pub lower_bounds: Vec<f64>,
    /// Point of `X_i` minimizing the worst row gap to `lower_bounds`.
    pub min_violation_point: Vec<f64>,
    /// That minimal worst-row gap.
    pub min_violation: f64,
}

/// Full tightening report for an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub per_agent: Vec<AgentRestriction>,
    /// Uniform tightening `(S+1) * max_i min_violation_i`.
    pub sigma_asy: f64,
    /// Worst-case per-row tightening `S * max_i (max_x A_i^s x - L_i^s)`.
    pub sigma_baseline: Vec<f64>,
    /// Set when the uniform tightening vanishes structurally.
    pub zero_case: bool,
}

fn snap_zero(v: f64) -> f64 {
    if v.abs() <= ZERO_SNAP {
        0.0
    } else {
        v
    }
}

/// Row-wise minima `L_i^s = min { A_i^s x : x in X_i }`.
pub fn row_lower_bounds(block: &AgentBlock, cfg: &MilpConfig) -> Result<Vec<f64>, MilpError> {
    block
        .coupling
        .iter()
        .map(|row| {
            let out = solve_milp(&block_program(block, row.clone()), cfg)?;
            match out.status {
                MilpStatus::Optimal => Ok(out.cost),
                MilpStatus::Infeasible => Err(MilpError::InfeasibleBlock),
            }
        })
        .collect()
}

/// Point of `X_i` minimizing the worst row gap `max_s (A_i^s x - L_i^s)`,
/// solved exactly with one auxiliary unrestricted variable.
pub fn min_violation_point(
    block: &AgentBlock,
    lower_bounds: &[f64],
    cfg: &MilpConfig,
) -> Result<(Vec<f64>, f64), MilpError> {
    let n = block.n_vars();
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut ineq_lhs = Vec::with_capacity(block.n_coupling() + block.local_lhs.len());
    let mut ineq_rhs = Vec::with_capacity(ineq_lhs.capacity());
    for (row, l) in block.coupling.iter().zip(lower_bounds) {
        let mut full = Vec::with_capacity(n + 1);
        full.extend_from_slice(row);
        full.push(-1.0);
        ineq_lhs.push(full);
        ineq_rhs.push(*l);
    }
    for (row, rhs) in block.local_lhs.iter().zip(&block.local_rhs) {
        let mut full = Vec::with_capacity(n + 1);
        full.extend_from_slice(row);
        full.push(0.0);
        ineq_lhs.push(full);
        ineq_rhs.push(*rhs);
    }
    let mut bounds: Vec<(f64, f64)> = block
        .lower
        .iter()
        .copied()
        .zip(block.upper.iter().copied())
        .collect();
    bounds.push((f64::NEG_INFINITY, f64::INFINITY));
    let mip = crate::milp::MixedIntegerProgram {
        lp: crate::lp::LinearProgram::inequality_form(objective, ineq_lhs, ineq_rhs, bounds),
        integer_idx: block.integer_idx.clone(),
    };
    let out = solve_milp(&mip, cfg)?;
    if out.status == MilpStatus::Infeasible {
        return Err(MilpError::InfeasibleBlock);
    }
    let x = out.solution[..n].to_vec();
    let gap = worst_row_gap(block, &x, lower_bounds);
    Ok((x, snap_zero(gap)))
}

fn worst_row_gap(block: &AgentBlock, x: &[f64], lower_bounds: &[f64]) -> f64 {
    block
        .coupling
        .iter()
        .zip(lower_bounds)
        .map(|(row, l)| dot(row, x) - l)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// The scalar each agent contributes to the uniform tightening; a
/// max-consensus over these, scaled by `S+1`, reproduces it exactly.
pub fn local_restriction_term(block: &AgentBlock, cfg: &MilpConfig) -> Result<f64, MilpError> {
    let lower = row_lower_bounds(block, cfg)?;
    let (_, gap) = min_violation_point(block, &lower, cfg)?;
    Ok(gap)
}

/// Uniform tightening amount and its per-agent terms.
pub fn sigma_asy(inst: &Instance, cfg: &MilpConfig) -> Result<(f64, Vec<f64>, bool), MilpError> {
    let terms: Vec<f64> = inst
        .blocks
        .par_iter()
        .map(|blk| local_restriction_term(blk, cfg))
        .collect::<Result<_, _>>()?;
    let worst = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sigma = snap_zero((inst.n_coupling as f64 + 1.0) * worst.max(0.0));
    Ok((sigma, terms, sigma == 0.0))
}

/// Worst-case per-row tightening `S * max_i (max_{x in X_i} A_i^s x - L_i^s)`.
pub fn sigma_baseline(inst: &Instance, cfg: &MilpConfig) -> Result<Vec<f64>, MilpError> {
    let s_count = inst.n_coupling;
    let per_agent: Vec<Vec<f64>> = inst
        .blocks
        .par_iter()
        .map(|blk| -> Result<Vec<f64>, MilpError> {
            let lower = row_lower_bounds(blk, cfg)?;
            blk.coupling
                .iter()
                .zip(&lower)
                .map(|(row, l)| {
                    let negated: Vec<f64> = row.iter().map(|a| -a).collect();
                    let out = solve_milp(&block_program(blk, negated), cfg)?;
                    match out.status {
                        MilpStatus::Optimal => Ok(-out.cost - l),
                        MilpStatus::Infeasible => Err(MilpError::InfeasibleBlock),
                    }
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok((0..s_count)
        .map(|s| {
            let worst = per_agent
                .iter()
                .map(|spreads| spreads[s])
                .fold(f64::NEG_INFINITY, f64::max);
            snap_zero(s_count as f64 * worst.max(0.0))
        })
        .collect())
}

/// Compute every tightening quantity of an instance in one pass.
pub fn restriction_report(inst: &Instance, cfg: &MilpConfig) -> Result<RestrictionReport, MilpError> {
    let per_agent: Vec<AgentRestriction> = inst
        .blocks
        .par_iter()
        .map(|blk| -> Result<AgentRestriction, MilpError> {
            let lower_bounds = row_lower_bounds(blk, cfg)?;
            let (min_violation_point, min_violation) = min_violation_point(blk, &lower_bounds, cfg)?;
            Ok(AgentRestriction {
                lower_bounds,
                min_violation_point,
                min_violation,
            })
        })
        .collect::<Result<_, _>>()?;
    let worst = per_agent
        .iter()
        .map(|a| a.min_violation)
        .fold(f64::NEG_INFINITY, f64::max);
    let sigma = snap_zero((inst.n_coupling as f64 + 1.0) * worst.max(0.0));
    Ok(RestrictionReport {
        per_agent,
        sigma_asy: sigma,
        sigma_baseline: sigma_baseline(inst, cfg)?,
        zero_case: sigma == 0.0,
    })
}
