//! Exact small-scale mixed-integer machinery.
//!
//! [`solve_milp`] is an LP-relaxation branch-and-bound (best-first on the
//! relaxation bound, branching on the most fractional integer coordinate),
//! and [`solve_milp_bruteforce`] the enumeration oracle it is tested
//! against. On top of these sit the pricing oracle over a block's
//! mixed-integer set and the two-stage lexicographic minimal-violation
//! solve used to recover integer points from negotiated allocations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::lp::{solve_lp_with, LinearProgram, LpConfig, LpError, LpStatus};
use crate::problem::{dot, AgentBlock, Instance};

/// A linear program plus the indices of its integer-constrained variables.
#[derive(Debug, Clone)]
pub struct MixedIntegerProgram {
    pub lp: LinearProgram,
    pub integer_idx: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct MilpOutcome {
    pub status: MilpStatus,
    /// Empty unless optimal.
    pub solution: Vec<f64>,
    pub cost: f64,
    /// Linear relaxations solved (branch-and-bound) or integer assignments
    /// evaluated (brute force).
    pub node_count: usize,
}

#[derive(Debug, Clone)]
pub struct MilpConfig {
    pub node_budget: usize,
    pub int_tol: f64,
    /// Bounds within this of the incumbent are pruned.
    pub prune_eps: f64,
    /// Cap on brute-force integer assignments.
    pub enumeration_cap: u128,
    pub lp: LpConfig,
}

impl Default for MilpConfig {
    fn default() -> Self {
        MilpConfig {
            node_budget: 1_000_000,
            int_tol: 1e-6,
            prune_eps: 1e-9,
            enumeration_cap: 100_000,
            lp: LpConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum MilpError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("node budget {budget} exhausted (incumbent cost {incumbent:?}, best open bound {best_bound})")]
    NodeBudget {
        budget: usize,
        incumbent: Option<f64>,
        best_bound: f64,
    },
    #[error("brute force needs {needed} integer assignments, cap is {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error("linear relaxation is unbounded; the mixed-integer set must be compact")]
    UnboundedRelaxation,
    #[error("block has an empty mixed-integer feasible set")]
    InfeasibleBlock,
    #[error("integer index {idx} out of range for {n} variables")]
    BadIntegerIndex { idx: usize, n: usize },
}

/// `min objective' x` over a single block's mixed-integer set.
pub fn block_program(block: &AgentBlock, objective: Vec<f64>) -> MixedIntegerProgram {
    MixedIntegerProgram {
        lp: LinearProgram::inequality_form(
            objective,
            block.local_lhs.clone(),
            block.local_rhs.clone(),
            block.lower.iter().copied().zip(block.upper.iter().copied()).collect(),
        ),
        integer_idx: block.integer_idx.clone(),
    }
}

/// The full instance as one MILP: coupling rows over the stacked variables
/// plus every block's local rows, box and integrality.
pub fn stacked_program(inst: &Instance) -> MixedIntegerProgram {
    let total = inst.total_vars();
    let mut objective = Vec::with_capacity(total);
    let mut coupling = vec![vec![0.0; total]; inst.n_coupling];
    let mut ineq_lhs = Vec::new();
    let mut ineq_rhs = Vec::new();
    let mut bounds = Vec::with_capacity(total);
    let mut integer_idx = Vec::new();
    let mut offset = 0;
    for blk in &inst.blocks {
        let n = blk.n_vars();
        objective.extend_from_slice(&blk.cost);
        for (s, row) in blk.coupling.iter().enumerate() {
            coupling[s][offset..offset + n].copy_from_slice(row);
        }
        for (row, rhs) in blk.local_lhs.iter().zip(&blk.local_rhs) {
            let mut full = vec![0.0; total];
            full[offset..offset + n].copy_from_slice(row);
            ineq_lhs.push(full);
            ineq_rhs.push(*rhs);
        }
        bounds.extend(blk.lower.iter().copied().zip(blk.upper.iter().copied()));
        integer_idx.extend(blk.integer_idx.iter().map(|j| offset + j));
        offset += n;
    }
    let mut all_lhs = coupling;
    let mut all_rhs = inst.resource.clone();
    all_lhs.append(&mut ineq_lhs);
    all_rhs.append(&mut ineq_rhs);
    MixedIntegerProgram {
        lp: LinearProgram::inequality_form(objective, all_lhs, all_rhs, bounds),
        integer_idx,
    }
}

struct Node {
    bound: f64,
    seq: u64,
    x: Vec<f64>,
    var_bounds: Vec<(f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // reversed so the max-heap pops the lowest bound, FIFO on ties
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(other.seq.cmp(&self.seq))
    }
}

fn most_fractional(x: &[f64], integer_idx: &[usize], int_tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &j in integer_idx {
        let frac = x[j] - x[j].floor();
        let dist = frac.min(1.0 - frac);
        if dist > int_tol && best.map_or(true, |(_, d)| dist > d) {
            best = Some((j, dist));
        }
    }
    best.map(|(j, _)| j)
}

/// Globally optimal solve by best-first branch-and-bound on the LP
/// relaxation. Deterministic: branching picks the most fractional integer
/// coordinate (lowest index on ties) and the queue breaks bound ties FIFO.
pub fn solve_milp(mip: &MixedIntegerProgram, cfg: &MilpConfig) -> Result<MilpOutcome, MilpError> {
    let n = mip.lp.n_vars();
    if let Some(&idx) = mip.integer_idx.iter().find(|&&j| j >= n) {
        return Err(MilpError::BadIntegerIndex { idx, n });
    }

    let mut nodes = 0usize;
    let mut seq = 0u64;
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut incumbent: Option<(Vec<f64>, f64)> = None;

    let solve_node = |var_bounds: &[(f64, f64)], nodes: &mut usize| -> Result<Option<(f64, Vec<f64>)>, MilpError> {
        *nodes += 1;
        let mut lp = mip.lp.clone();
        lp.bounds = var_bounds.to_vec();
        let out = solve_lp_with(&lp, &cfg.lp)?;
        match out.status {
            LpStatus::Optimal => Ok(Some((out.cost, out.primal))),
            LpStatus::Infeasible => Ok(None),
            LpStatus::Unbounded => Err(MilpError::UnboundedRelaxation),
        }
    };

    match solve_node(&mip.lp.bounds, &mut nodes)? {
        None => {
            return Ok(MilpOutcome {
                status: MilpStatus::Infeasible,
                solution: vec![],
                cost: f64::INFINITY,
                node_count: nodes,
            })
        }
        Some((bound, x)) => heap.push(Node {
            bound,
            seq,
            x,
            var_bounds: mip.lp.bounds.clone(),
        }),
    }

    while let Some(node) = heap.pop() {
        if let Some((_, inc)) = &incumbent {
            if node.bound >= inc - cfg.prune_eps {
                break; // best-first: every open node is at least as bad
            }
        }
        match most_fractional(&node.x, &mip.integer_idx, cfg.int_tol) {
            None => {
                let mut x = node.x;
                for &j in &mip.integer_idx {
                    x[j] = x[j].round();
                }
                let cost = dot(&mip.lp.objective, &x);
                if incumbent.as_ref().map_or(true, |(_, c)| cost < *c) {
                    incumbent = Some((x, cost));
                }
            }
            Some(j) => {
                let v = node.x[j];
                for (child_lo, child_hi) in [
                    (node.var_bounds[j].0, v.floor()),
                    (v.ceil(), node.var_bounds[j].1),
                ] {
                    if child_lo > child_hi {
                        continue;
                    }
                    if nodes >= cfg.node_budget {
                        return Err(MilpError::NodeBudget {
                            budget: cfg.node_budget,
                            incumbent: incumbent.map(|(_, c)| c),
                            best_bound: node.bound,
                        });
                    }
                    let mut vb = node.var_bounds.clone();
                    vb[j] = (child_lo, child_hi);
                    if let Some((bound, x)) = solve_node(&vb, &mut nodes)? {
                        let worse = incumbent
                            .as_ref()
                            .map_or(false, |(_, c)| bound >= c - cfg.prune_eps);
                        if !worse {
                            seq += 1;
                            heap.push(Node {
                                bound,
                                seq,
                                x,
                                var_bounds: vb,
                            });
                        }
                    }
                }
            }
        }
    }

    Ok(match incumbent {
        Some((solution, cost)) => MilpOutcome {
            status: MilpStatus::Optimal,
            solution,
            cost,
            node_count: nodes,
        },
        None => MilpOutcome {
            status: MilpStatus::Infeasible,
            solution: vec![],
            cost: f64::INFINITY,
            node_count: nodes,
        },
    })
}

/// Enumerate every integer assignment, solving the continuous-part LP for
/// each; ground truth for branch-and-bound equivalence.
pub fn solve_milp_bruteforce(
    mip: &MixedIntegerProgram,
    cfg: &MilpConfig,
) -> Result<MilpOutcome, MilpError> {
    let n = mip.lp.n_vars();
    if let Some(&idx) = mip.integer_idx.iter().find(|&&j| j >= n) {
        return Err(MilpError::BadIntegerIndex { idx, n });
    }
    let cont: Vec<usize> = (0..n).filter(|j| !mip.integer_idx.contains(j)).collect();
    let ranges: Vec<(i64, i64)> = mip
        .integer_idx
        .iter()
        .map(|&j| {
            let (lo, hi) = mip.lp.bounds[j];
            ((lo - 1e-9).ceil() as i64, (hi + 1e-9).floor() as i64)
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(MilpOutcome {
            status: MilpStatus::Infeasible,
            solution: vec![],
            cost: f64::INFINITY,
            node_count: 0,
        });
    }
    let needed: u128 = ranges.iter().map(|(lo, hi)| (hi - lo + 1) as u128).product();
    if needed > cfg.enumeration_cap {
        return Err(MilpError::EnumerationCap {
            needed,
            cap: cfg.enumeration_cap,
        });
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut evaluated = 0usize;
    let mut combo: Vec<i64> = ranges.iter().map(|(lo, _)| *lo).collect();
    'outer: loop {
        evaluated += 1;
        let mut x = vec![0.0; n];
        for (k, &j) in mip.integer_idx.iter().enumerate() {
            x[j] = combo[k] as f64;
        }
        if cont.is_empty() {
            let feasible = mip
                .lp
                .ineq_lhs
                .iter()
                .zip(&mip.lp.ineq_rhs)
                .all(|(row, rhs)| dot(row, &x) <= rhs + 1e-9)
                && mip
                    .lp
                    .eq_lhs
                    .iter()
                    .zip(&mip.lp.eq_rhs)
                    .all(|(row, rhs)| (dot(row, &x) - rhs).abs() <= 1e-9);
            if feasible {
                let cost = dot(&mip.lp.objective, &x);
                if best.as_ref().map_or(true, |(_, c)| cost < *c) {
                    best = Some((x, cost));
                }
            }
        } else {
            // reduced LP over the continuous coordinates
            let reduce = |rows: &[Vec<f64>], rhs: &[f64]| {
                let lhs: Vec<Vec<f64>> = rows
                    .iter()
                    .map(|row| cont.iter().map(|&j| row[j]).collect())
                    .collect();
                let adjusted: Vec<f64> = rows
                    .iter()
                    .zip(rhs)
                    .map(|(row, b)| b - mip.integer_idx.iter().map(|&j| row[j] * x[j]).sum::<f64>())
                    .collect();
                (lhs, adjusted)
            };
            let (ineq_lhs, ineq_rhs) = reduce(&mip.lp.ineq_lhs, &mip.lp.ineq_rhs);
            let (eq_lhs, eq_rhs) = reduce(&mip.lp.eq_lhs, &mip.lp.eq_rhs);
            let lp = LinearProgram {
                objective: cont.iter().map(|&j| mip.lp.objective[j]).collect(),
                ineq_lhs,
                ineq_rhs,
                eq_lhs,
                eq_rhs,
                bounds: cont.iter().map(|&j| mip.lp.bounds[j]).collect(),
            };
            let out = solve_lp_with(&lp, &cfg.lp)?;
            if out.status == LpStatus::Unbounded {
                return Err(MilpError::UnboundedRelaxation);
            }
            if out.status == LpStatus::Optimal {
                for (k, &j) in cont.iter().enumerate() {
                    x[j] = out.primal[k];
                }
                let cost = dot(&mip.lp.objective, &x);
                if best.as_ref().map_or(true, |(_, c)| cost < *c) {
                    best = Some((x, cost));
                }
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == combo.len() {
                break 'outer;
            }
            combo[k] += 1;
            if combo[k] <= ranges[k].1 {
                break;
            }
            combo[k] = ranges[k].0;
            k += 1;
        }
    }

    Ok(match best {
        Some((solution, cost)) => MilpOutcome {
            status: MilpStatus::Optimal,
            solution,
            cost,
            node_count: evaluated,
        },
        None => MilpOutcome {
            status: MilpStatus::Infeasible,
            solution: vec![],
            cost: f64::INFINITY,
            node_count: evaluated,
        },
    })
}

/// `c_i + A_i' mu`, the priced cost vector of a block.
pub fn priced_objective(block: &AgentBlock, mu: &[f64]) -> Vec<f64> {
    (0..block.n_vars())
        .map(|j| {
            block.cost[j]
                + mu.iter()
                    .zip(&block.coupling)
                    .map(|(m, row)| m * row[j])
                    .sum::<f64>()
        })
        .collect()
}

/// Minimize the priced cost over the block's mixed-integer set. By
/// linearity the value equals the minimum over the block's convex hull.
pub fn pricing_oracle(
    block: &AgentBlock,
    mu: &[f64],
    cfg: &MilpConfig,
) -> Result<(Vec<f64>, f64), MilpError> {
    let out = solve_milp(&block_program(block, priced_objective(block, mu)), cfg)?;
    match out.status {
        MilpStatus::Optimal => Ok((out.solution, out.cost)),
        MilpStatus::Infeasible => Err(MilpError::InfeasibleBlock),
    }
}

/// Result of the two-stage lexicographic minimal-violation solve.
#[derive(Debug, Clone)]
pub struct LexMinResult {
    /// Smallest uniform relaxation of the allocation that admits a point
    /// of the block's mixed-integer set.
    pub rho: f64,
    /// Optimal block cost at that minimal violation.
    pub xi: f64,
    pub x: Vec<f64>,
}

/// Violation slack added to the stage-two right-hand side so the stage-one
/// optimum is never cut off by solver tolerance.
const STAGE2_SLACK: f64 = 1e-9;

/// Minimize the coupling violation `rho` first, then the block cost at
/// that violation.
pub fn lex_min_violation(
    block: &AgentBlock,
    y: &[f64],
    cfg: &MilpConfig,
) -> Result<LexMinResult, MilpError> {
    let n = block.n_vars();
    let s = block.n_coupling();

    // stage one: min rho  s.t.  A x - rho 1 <= y, x in X, rho >= 0
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut ineq_lhs: Vec<Vec<f64>> = Vec::with_capacity(s + block.local_lhs.len());
    let mut ineq_rhs = Vec::with_capacity(s + block.local_lhs.len());
    for (row, ys) in block.coupling.iter().zip(y) {
        let mut full = Vec::with_capacity(n + 1);
        full.extend_from_slice(row);
        full.push(-1.0);
        ineq_lhs.push(full);
        ineq_rhs.push(*ys);
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
    bounds.push((0.0, f64::INFINITY));
    let stage1 = MixedIntegerProgram {
        lp: LinearProgram::inequality_form(objective, ineq_lhs, ineq_rhs, bounds),
        integer_idx: block.integer_idx.clone(),
    };
    let out1 = solve_milp(&stage1, cfg)?;
    if out1.status == MilpStatus::Infeasible {
        return Err(MilpError::InfeasibleBlock);
    }
    let rho = out1.cost.max(0.0);

    // stage two: min c'x  s.t.  A x <= y + rho 1, x in X
    let relaxed: Vec<f64> = y.iter().map(|ys| ys + rho + STAGE2_SLACK).collect();
    let mut lhs = block.coupling.clone();
    let mut rhs = relaxed;
    lhs.extend(block.local_lhs.iter().cloned());
    rhs.extend_from_slice(&block.local_rhs);
    let stage2 = MixedIntegerProgram {
        lp: LinearProgram::inequality_form(
            block.cost.clone(),
            lhs,
            rhs,
            block.lower.iter().copied().zip(block.upper.iter().copied()).collect(),
        ),
        integer_idx: block.integer_idx.clone(),
    };
    let out2 = solve_milp(&stage2, cfg)?;
    if out2.status == MilpStatus::Infeasible {
        // rho was chosen so the relaxed allocation is attainable
        return Err(MilpError::InfeasibleBlock);
    }
    Ok(LexMinResult {
        rho,
        xi: out2.cost,
        x: out2.solution,
    })
}
