//! Constraint-coupled MILP data model.
//!
//! An [`Instance`] couples `N` agent blocks through `S` shared inequality
//! rows `sum_i A_i x_i <= b`. Each [`AgentBlock`] carries its cost vector,
//! coupling columns, local polyhedron `D_i x_i <= d_i`, finite box bounds
//! and the set of integer coordinates.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seeds;

/// Feasibility tolerance on constraints and on integrality checks.
pub const FEAS_TOL: f64 = 1e-6;

/// One agent's share of the problem data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentBlock {
    /// Cost vector `c_i`, length `n_i`.
    pub cost: Vec<f64>,
    /// Coupling matrix `A_i`, `S x n_i`, row major.
    pub coupling: Vec<Vec<f64>>,
    /// Local constraint matrix `D_i`, `m_i x n_i`, row major.
    pub local_lhs: Vec<Vec<f64>>,
    /// Local right-hand side `d_i`, length `m_i`.
    pub local_rhs: Vec<f64>,
    /// Zero-based indices of the integer-constrained coordinates.
    pub integer_idx: Vec<usize>,
    /// Finite lower box bounds, length `n_i`.
    pub lower: Vec<f64>,
    /// Finite upper box bounds, length `n_i`.
    pub upper: Vec<f64>,
}

impl AgentBlock {
    pub fn n_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn n_coupling(&self) -> usize {
        self.coupling.len()
    }

    pub fn is_integer(&self, j: usize) -> bool {
        self.integer_idx.contains(&j)
    }

    /// `A_i x`, length `S`.
    pub fn coupling_value(&self, x: &[f64]) -> Vec<f64> {
        self.coupling.iter().map(|row| dot(row, x)).collect()
    }

    /// `c_i' x`.
    pub fn cost_value(&self, x: &[f64]) -> f64 {
        dot(&self.cost, x)
    }

    /// Local rows and box bounds within `tol`.
    pub fn is_local_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.local_lhs
            .iter()
            .zip(&self.local_rhs)
            .all(|(row, rhs)| dot(row, x) <= rhs + tol)
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol)
    }

    /// Integer coordinates within `tol` of integers.
    pub fn is_integer_feasible(&self, x: &[f64], tol: f64) -> bool {
        self.integer_idx
            .iter()
            .all(|&j| (x[j] - x[j].round()).abs() <= tol)
    }

    /// Membership in `X_i` within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.is_local_feasible(x, tol) && self.is_integer_feasible(x, tol)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A full constraint-coupled MILP instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(rename = "N")]
    pub n_agents: usize,
    #[serde(rename = "S")]
    pub n_coupling: usize,
    /// Shared resource vector `b`, length `S`.
    pub resource: Vec<f64>,
    pub blocks: Vec<AgentBlock>,
    /// Provenance of generated instances; round-trips untouched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorParams>,
}

impl Instance {
    pub fn new(blocks: Vec<AgentBlock>, resource: Vec<f64>) -> Self {
        Instance {
            n_agents: blocks.len(),
            n_coupling: resource.len(),
            resource,
            blocks,
            generator: None,
        }
    }

    /// Total number of variables across all blocks.
    pub fn total_vars(&self) -> usize {
        self.blocks.iter().map(|b| b.n_vars()).sum()
    }

    /// All dimension and finiteness violations; empty iff the instance is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.n_agents == 0 || self.blocks.is_empty() {
            issues.push("instance has no agent blocks".to_string());
        }
        if self.blocks.len() != self.n_agents {
            issues.push(format!(
                "N = {} but {} blocks present",
                self.n_agents,
                self.blocks.len()
            ));
        }
        if self.resource.len() != self.n_coupling {
            issues.push(format!(
                "resource length {} != S = {}",
                self.resource.len(),
                self.n_coupling
            ));
        }
        if self.resource.iter().any(|v| !v.is_finite()) {
            issues.push("resource vector has non-finite entries".to_string());
        }
        for (i, blk) in self.blocks.iter().enumerate() {
            let n = blk.n_vars();
            if n == 0 {
                issues.push(format!("block {i}: empty cost vector"));
            }
            if blk.coupling.len() != self.n_coupling {
                issues.push(format!(
                    "block {i}: coupling has {} rows, expected S = {}",
                    blk.coupling.len(),
                    self.n_coupling
                ));
            }
            for (s, row) in blk.coupling.iter().enumerate() {
                if row.len() != n {
                    issues.push(format!("block {i}: coupling row {s} has length {}", row.len()));
                }
            }
            if blk.local_lhs.len() != blk.local_rhs.len() {
                issues.push(format!(
                    "block {i}: {} local rows vs {} right-hand sides",
                    blk.local_lhs.len(),
                    blk.local_rhs.len()
                ));
            }
            for (r, row) in blk.local_lhs.iter().enumerate() {
                if row.len() != n {
                    issues.push(format!("block {i}: local row {r} has length {}", row.len()));
                }
            }
            if blk.lower.len() != n || blk.upper.len() != n {
                issues.push(format!("block {i}: box bound lengths do not match n_i = {n}"));
            }
            for j in 0..blk.lower.len().min(blk.upper.len()).min(n) {
                if !blk.lower[j].is_finite() || !blk.upper[j].is_finite() {
                    issues.push(format!("block {i}: non-compact block (infinite bound on x_{j})"));
                } else if blk.lower[j] > blk.upper[j] {
                    issues.push(format!("block {i}: lower[{j}] > upper[{j}]"));
                }
            }
            for &j in &blk.integer_idx {
                if j >= n {
                    issues.push(format!("block {i}: integer index {j} out of range (n_i = {n})"));
                }
            }
            let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
            if !finite(&blk.cost)
                || !blk.coupling.iter().all(|r| finite(r))
                || !blk.local_lhs.iter().all(|r| finite(r))
                || !finite(&blk.local_rhs)
            {
                issues.push(format!("block {i}: non-finite matrix or vector entry"));
            }
        }
        issues
    }
}

/// A per-agent assignment together with the procedure that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionVector {
    pub assignments: Vec<Vec<f64>>,
    pub tag: String,
}

impl SolutionVector {
    pub fn new(assignments: Vec<Vec<f64>>, tag: impl Into<String>) -> Self {
        SolutionVector {
            assignments,
            tag: tag.into(),
        }
    }

    /// Flat copy in block order.
    pub fn stacked(&self) -> Vec<f64> {
        self.assignments.iter().flatten().copied().collect()
    }
}

/// Outcome of checking a solution against an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// `sum_i c_i' x_i`.
    pub cost: f64,
    /// `b - sum_i A_i x_i`; negative entries mean coupling violation.
    pub coupling_slack: Vec<f64>,
    pub local_feasible: Vec<bool>,
    pub integer_ok: Vec<bool>,
}

impl Evaluation {
    /// Feasible for the original problem within `tol`.
    pub fn is_feasible(&self, tol: f64) -> bool {
        self.coupling_slack.iter().all(|s| *s >= -tol)
            && self.local_feasible.iter().all(|f| *f)
            && self.integer_ok.iter().all(|f| *f)
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("solution has {got} assignments, instance has {expected} blocks")]
    AgentCount { got: usize, expected: usize },
    #[error("assignment {agent} has length {got}, block expects {expected}")]
    VarCount {
        agent: usize,
        got: usize,
        expected: usize,
    },
}

/// Cost, coupling slack and per-agent feasibility flags of a solution.
pub fn evaluate_solution(inst: &Instance, sol: &SolutionVector) -> Result<Evaluation, EvalError> {
    if sol.assignments.len() != inst.blocks.len() {
        return Err(EvalError::AgentCount {
            got: sol.assignments.len(),
            expected: inst.blocks.len(),
        });
    }
    for (i, (x, blk)) in sol.assignments.iter().zip(&inst.blocks).enumerate() {
        if x.len() != blk.n_vars() {
            return Err(EvalError::VarCount {
                agent: i,
                got: x.len(),
                expected: blk.n_vars(),
            });
        }
    }
    let mut cost = 0.0;
    let mut usage = vec![0.0; inst.n_coupling];
    let mut local_feasible = Vec::with_capacity(inst.blocks.len());
    let mut integer_ok = Vec::with_capacity(inst.blocks.len());
    for (x, blk) in sol.assignments.iter().zip(&inst.blocks) {
        cost += blk.cost_value(x);
        for (u, v) in usage.iter_mut().zip(blk.coupling_value(x)) {
            *u += v;
        }
        local_feasible.push(blk.is_local_feasible(x, FEAS_TOL));
        integer_ok.push(blk.is_integer_feasible(x, FEAS_TOL));
    }
    let coupling_slack = inst
        .resource
        .iter()
        .zip(&usage)
        .map(|(b, u)| b - u)
        .collect();
    Ok(Evaluation {
        cost,
        coupling_slack,
        local_feasible,
        integer_ok,
    })
}

/// Which coordinates the generator marks as integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegerMarking {
    /// Only the first coordinate of each block (mixed-integer blocks).
    First,
    /// Every coordinate (pure-integer blocks).
    All,
}

/// Parameters of the random instance model: random local polyhedra with a
/// cost vector aligned to them, random coupling rows and a resource vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub n_agents: usize,
    pub n_coupling: usize,
    pub seed: u64,
    /// Local rows per block (`m_i`).
    pub local_rows: usize,
    /// Variables per block (`n_i`).
    pub n_vars: usize,
    /// Entry range for `D_i`.
    pub local_lhs_range: (f64, f64),
    /// Entry range for `d_i`.
    pub local_rhs_range: (f64, f64),
    /// Entry range for the auxiliary cost `c_hat`; the block cost is `D_i' c_hat`.
    pub cost_hat_range: (f64, f64),
    /// Entry range for `A_i`.
    pub coupling_range: (f64, f64),
    /// Entry range for `b`.
    pub resource_range: (f64, f64),
    /// Box bounds applied to every coordinate.
    pub box_bounds: (f64, f64),
    pub integer_marking: IntegerMarking,
}

impl GeneratorParams {
    /// The reference random model: 6x2 local polyhedra with entries in
    /// [0,1], right-hand sides in [0,40], box [-60,60], cost weights in
    /// [0,5], coupling entries in [0,1] and the first coordinate integer.
    pub fn baseline(n_agents: usize, n_coupling: usize, seed: u64, resource_range: (f64, f64)) -> Self {
        GeneratorParams {
            n_agents,
            n_coupling,
            seed,
            local_rows: 6,
            n_vars: 2,
            local_lhs_range: (0.0, 1.0),
            local_rhs_range: (0.0, 40.0),
            cost_hat_range: (0.0, 5.0),
            coupling_range: (0.0, 1.0),
            resource_range,
            box_bounds: (-60.0, 60.0),
            integer_marking: IntegerMarking::First,
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.n_agents == 0 {
            issues.push("n_agents must be >= 1".to_string());
        }
        if self.n_vars == 0 {
            issues.push("n_vars must be >= 1".to_string());
        }
        let ranges = [
            ("local_lhs_range", self.local_lhs_range),
            ("local_rhs_range", self.local_rhs_range),
            ("cost_hat_range", self.cost_hat_range),
            ("coupling_range", self.coupling_range),
            ("resource_range", self.resource_range),
            ("box_bounds", self.box_bounds),
        ];
        for (name, (lo, hi)) in ranges {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                issues.push(format!("{name} is degenerate: ({lo}, {hi})"));
            }
        }
        issues
    }
}

#[derive(Debug, Error)]
#[error("invalid generator parameters: {0}")]
pub struct GeneratorError(pub String);

/// `M' w` for a row-major `M`; the generator derives block costs this way
/// so that the cost pulls against the local polyhedron's facets.
fn transpose_times(matrix: &[Vec<f64>], weights: &[f64], n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| matrix.iter().zip(weights).map(|(row, w)| row[j] * w).sum())
        .collect()
}

/// Draw a random instance. Deterministic for fixed parameters.
pub fn generate_random(params: &GeneratorParams) -> Result<Instance, GeneratorError> {
    let issues = params.validate();
    if !issues.is_empty() {
        return Err(GeneratorError(issues.join("; ")));
    }
    let mut rng = seeds::stream(params.seed, "generator");
    let mut sample = |range: (f64, f64)| rng.gen_range(range.0..range.1);

    let n = params.n_vars;
    let m = params.local_rows;
    let mut blocks = Vec::with_capacity(params.n_agents);
    for _ in 0..params.n_agents {
        let local_lhs: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| sample(params.local_lhs_range)).collect())
            .collect();
        let local_rhs: Vec<f64> = (0..m).map(|_| sample(params.local_rhs_range)).collect();
        let cost_hat: Vec<f64> = (0..m).map(|_| sample(params.cost_hat_range)).collect();
        let cost = transpose_times(&local_lhs, &cost_hat, n);
        let coupling: Vec<Vec<f64>> = (0..params.n_coupling)
            .map(|_| (0..n).map(|_| sample(params.coupling_range)).collect())
            .collect();
        let integer_idx = match params.integer_marking {
            IntegerMarking::First => vec![0],
            IntegerMarking::All => (0..n).collect(),
        };
        blocks.push(AgentBlock {
            cost,
            coupling,
            local_lhs,
            local_rhs,
            integer_idx,
            lower: vec![params.box_bounds.0; n],
            upper: vec![params.box_bounds.1; n],
        });
    }
    let resource: Vec<f64> = (0..params.n_coupling)
        .map(|_| sample(params.resource_range))
        .collect();
    Ok(Instance {
        n_agents: params.n_agents,
        n_coupling: params.n_coupling,
        resource,
        blocks,
        generator: Some(params.clone()),
    })
}

#[derive(Debug, Error)]
pub enum InstanceIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Write an instance as pretty-printed JSON. Numbers use the shortest
/// decimal form that round-trips to the same binary value.
pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<(), InstanceIoError> {
    let text = serde_json::to_string_pretty(inst)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, InstanceIoError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_solution(sol: &SolutionVector, path: impl AsRef<Path>) -> Result<(), InstanceIoError> {
    let text = serde_json::to_string_pretty(sol)?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<SolutionVector, InstanceIoError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "instance: N={}, S={}, vars={}",
            self.n_agents,
            self.n_coupling,
            self.total_vars()
        )
    }
}

/// Small hand-checked instances used across the test suites.
pub mod fixtures {
    use super::*;

    fn interval_block(cost: f64, coupling: Vec<Vec<f64>>, lo: f64, hi: f64) -> AgentBlock {
        AgentBlock {
            cost: vec![cost],
            coupling,
            local_lhs: vec![],
            local_rhs: vec![],
            integer_idx: vec![0],
            lower: vec![lo],
            upper: vec![hi],
        }
    }

    /// Two agents, one shared row: `X_i = {0,1,2}`, `A_i = [1]`, `c_i = [-1]`,
    /// `b = [3]`. Optimal mixed-integer cost -3.
    pub fn two_agents_shared_budget() -> Instance {
        let blk = interval_block(-1.0, vec![vec![1.0]], 0.0, 2.0);
        Instance::new(vec![blk.clone(), blk], vec![3.0])
    }

    /// Two agents and two opposing coupling rows (`x` and `-x`) over
    /// `X_i = {0,1}`, `b = (1,0)`. Optimal cost -1; its tightened LP
    /// approximation is infeasible, which makes it the standing
    /// assumption-failure fixture.
    pub fn two_agents_signed_rows() -> Instance {
        let blk = interval_block(-1.0, vec![vec![1.0], vec![-1.0]], 0.0, 1.0);
        Instance::new(vec![blk.clone(), blk], vec![1.0, 0.0])
    }

    /// Three agents with ranked costs -1, -2, -3 over `X_i = {0,...,5}`
    /// sharing `b = [6]`. The LP approximation has the unique optimum
    /// `z = (0,1,5)` with cost -17, which is also the unique optimal
    /// allocation split.
    pub fn three_agents_ranked_costs() -> Instance {
        let blocks = vec![
            interval_block(-1.0, vec![vec![1.0]], 0.0, 5.0),
            interval_block(-2.0, vec![vec![1.0]], 0.0, 5.0),
            interval_block(-3.0, vec![vec![1.0]], 0.0, 5.0),
        ];
        Instance::new(blocks, vec![6.0])
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fixtures_validate_clean() {
        for inst in [
            two_agents_shared_budget(),
            two_agents_signed_rows(),
            three_agents_ranked_costs(),
        ] {
            assert!(inst.validate().is_empty(), "{:?}", inst.validate());
        }
    }

    #[test]
    fn validate_reports_resource_length() {
        let mut inst = two_agents_shared_budget();
        inst.resource = vec![3.0, 1.0];
        let issues = inst.validate();
        assert!(issues.iter().any(|s| s.contains("resource length")), "{issues:?}");
    }

    #[test]
    fn validate_reports_non_compact_block() {
        let mut inst = two_agents_shared_budget();
        inst.blocks[0].upper[0] = f64::INFINITY;
        let issues = inst.validate();
        assert!(issues.iter().any(|s| s.contains("non-compact")), "{issues:?}");
    }

    #[test]
    fn evaluate_shared_budget_solutions() {
        let inst = two_agents_shared_budget();
        let ev = evaluate_solution(&inst, &SolutionVector::new(vec![vec![2.0], vec![1.0]], "manual"))
            .unwrap();
        assert_eq!(ev.cost, -3.0);
        assert_eq!(ev.coupling_slack, vec![0.0]);
        assert!(ev.is_feasible(FEAS_TOL));

        let ev = evaluate_solution(&inst, &SolutionVector::new(vec![vec![2.0], vec![2.0]], "manual"))
            .unwrap();
        assert_eq!(ev.coupling_slack, vec![-1.0]);
        assert!(!ev.is_feasible(FEAS_TOL));
    }

    #[test]
    fn evaluate_ranked_costs_optimum() {
        let inst = three_agents_ranked_costs();
        let sol = SolutionVector::new(vec![vec![0.0], vec![1.0], vec![5.0]], "manual");
        let ev = evaluate_solution(&inst, &sol).unwrap();
        assert_eq!(ev.cost, -17.0);
        assert_eq!(ev.coupling_slack, vec![0.0]);
        assert!(ev.is_feasible(FEAS_TOL));
    }

    #[test]
    fn evaluate_rejects_dimension_mismatch() {
        let inst = two_agents_shared_budget();
        let err = evaluate_solution(&inst, &SolutionVector::new(vec![vec![1.0]], "manual"));
        assert!(matches!(err, Err(EvalError::AgentCount { .. })));
        let err =
            evaluate_solution(&inst, &SolutionVector::new(vec![vec![1.0, 2.0], vec![0.0]], "manual"));
        assert!(matches!(err, Err(EvalError::VarCount { .. })));
    }

    #[test]
    fn generator_matches_requested_shape() {
        let params = GeneratorParams::baseline(100, 10, 1, (-600.0, -500.0));
        let inst = generate_random(&params).unwrap();
        assert!(inst.validate().is_empty());
        assert_eq!(inst.blocks.len(), 100);
        assert_eq!(inst.resource.len(), 10);
        assert!(inst.resource.iter().all(|b| (-600.0..-500.0).contains(b)));
        for blk in &inst.blocks {
            assert_eq!(blk.n_vars(), 2);
            assert_eq!(blk.local_lhs.len(), 6);
            assert_eq!(blk.integer_idx, vec![0]);
        }
    }

    #[test]
    fn generator_positive_resource_model() {
        let params = GeneratorParams::baseline(50, 10, 7, (300.0, 400.0));
        let inst = generate_random(&params).unwrap();
        assert!(inst.validate().is_empty());
        assert_eq!(inst.blocks.len(), 50);
        assert!(inst.resource.iter().all(|b| (300.0..400.0).contains(b)));
    }

    #[test]
    fn generator_is_deterministic() {
        let params = GeneratorParams::baseline(20, 3, 42, (-120.0, -100.0));
        let a = generate_random(&params).unwrap();
        let b = generate_random(&params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cost_rule_is_exact_transpose_product() {
        let d = vec![vec![0.5, 0.25], vec![1.0, 0.0], vec![0.125, 2.0]];
        let w = vec![2.0, 4.0, 8.0];
        // exact in binary arithmetic for these dyadic entries
        assert_eq!(transpose_times(&d, &w, 2), vec![0.5 * 2.0 + 4.0 + 1.0, 0.5 + 16.0]);
    }

    #[test]
    fn generator_rejects_degenerate_ranges() {
        let mut params = GeneratorParams::baseline(5, 2, 1, (-10.0, -5.0));
        params.coupling_range = (1.0, 1.0);
        assert!(generate_random(&params).is_err());
    }

    #[test]
    fn instance_round_trip_is_field_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let inst = two_agents_shared_budget();
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn generated_round_trip_preserves_evaluation_bits() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let params = GeneratorParams::baseline(50, 10, 7, (300.0, 400.0));
        let inst = generate_random(&params).unwrap();
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(inst, back);

        let sol = SolutionVector::new(
            inst.blocks.iter().map(|b| vec![1.0; b.n_vars()]).collect(),
            "probe",
        );
        let ev_a = evaluate_solution(&inst, &sol).unwrap();
        let ev_b = evaluate_solution(&back, &sol).unwrap();
        assert_eq!(ev_a.cost.to_bits(), ev_b.cost.to_bits());
        for (a, b) in ev_a.coupling_slack.iter().zip(&ev_b.coupling_slack) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn parse_error_names_missing_field() {
        let text = r#"{"N": 1, "S": 1, "blocks": []}"#;
        let err = serde_json::from_str::<Instance>(text).unwrap_err();
        assert!(err.to_string().contains("resource"), "{err}");
    }

    #[test]
    fn evaluation_cost_is_linear() {
        let inst = three_agents_ranked_costs();
        let xa = SolutionVector::new(vec![vec![0.0], vec![1.0], vec![5.0]], "a");
        let xb = SolutionVector::new(vec![vec![2.0], vec![3.0], vec![1.0]], "b");
        let lam = 0.25;
        let mix = SolutionVector::new(
            xa.assignments
                .iter()
                .zip(&xb.assignments)
                .map(|(a, b)| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| lam * x + (1.0 - lam) * y)
                        .collect()
                })
                .collect(),
            "mix",
        );
        let ca = evaluate_solution(&inst, &xa).unwrap().cost;
        let cb = evaluate_solution(&inst, &xb).unwrap().cost;
        let cm = evaluate_solution(&inst, &mix).unwrap().cost;
        assert!((cm - (lam * ca + (1.0 - lam) * cb)).abs() < 1e-12);
    }
}
