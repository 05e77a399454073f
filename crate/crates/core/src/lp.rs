//! Dense two-phase primal simplex returning primal and dual solutions.
//!
//! The solver accepts inequality rows (`A x <= b`), equality rows
//! (`E x = f`) and per-variable bounds that may be infinite. Internally the
//! problem is reduced to standard form: finite lower bounds are shifted out,
//! upper-bounded-only variables are mirrored, free variables are split into
//! nonnegative pairs, and finite upper bounds become explicit rows. Dantzig
//! pricing is used until an iteration budget is hit, after which the solver
//! switches to Bland's rule so termination is guaranteed.
//!
//! Dual multipliers are reported in the Lagrangian convention: `mu >= 0` for
//! `<=` rows, free sign for equality rows, and stationarity
//! `c + A'mu + E'nu` vanishing on the interior of the box.

use thiserror::Error;

use crate::problem::dot;

/// `min c'x  s.t.  A x <= b, E x = f, lo <= x <= hi` (entries of `lo`/`hi`
/// may be infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub ineq_lhs: Vec<Vec<f64>>,
    pub ineq_rhs: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    /// An LP with only inequality rows and the given bounds.
    pub fn inequality_form(
        objective: Vec<f64>,
        ineq_lhs: Vec<Vec<f64>>,
        ineq_rhs: Vec<f64>,
        bounds: Vec<(f64, f64)>,
    ) -> Self {
        LinearProgram {
            objective,
            ineq_lhs,
            ineq_rhs,
            eq_lhs: vec![],
            eq_rhs: vec![],
            bounds,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    fn check_dims(&self) -> Result<(), String> {
        let n = self.n_vars();
        if self.bounds.len() != n {
            return Err(format!("{} bounds for {} variables", self.bounds.len(), n));
        }
        if self.ineq_lhs.len() != self.ineq_rhs.len() {
            return Err("inequality lhs/rhs row count mismatch".into());
        }
        if self.eq_lhs.len() != self.eq_rhs.len() {
            return Err("equality lhs/rhs row count mismatch".into());
        }
        for row in self.ineq_lhs.iter().chain(&self.eq_lhs) {
            if row.len() != n {
                return Err(format!("row of length {} for {} variables", row.len(), n));
            }
        }
        for &(lo, hi) in &self.bounds {
            if lo > hi || lo.is_nan() || hi.is_nan() {
                return Err(format!("inconsistent bound ({lo}, {hi})"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver result. `primal` and the dual vectors are empty unless optimal.
#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// One multiplier per inequality row, `>= 0`.
    pub dual_ineq: Vec<f64>,
    /// One multiplier per equality row, free sign.
    pub dual_eq: Vec<f64>,
    pub cost: f64,
}

#[derive(Debug, Clone)]
pub struct LpConfig {
    /// Entries smaller than this never act as pivots.
    pub pivot_tol: f64,
    /// Feasibility and optimality tolerance.
    pub feas_tol: f64,
    /// Pivots before switching from Dantzig pricing to Bland's rule;
    /// defaults to `5 * (rows + cols)`.
    pub bland_after: Option<usize>,
    /// Hard pivot budget; defaults to `10_000 + 200 * (rows + cols)`.
    pub max_pivots: Option<usize>,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            pivot_tol: 1e-9,
            feas_tol: 1e-7,
            bland_after: None,
            max_pivots: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("pivot budget exhausted after {pivots} pivots in phase {phase} ({rows} rows, {cols} cols)")]
    PivotLimit {
        pivots: usize,
        phase: u8,
        rows: usize,
        cols: usize,
    },
    #[error("numerical breakdown: {0}")]
    Numerical(String),
}

/// Solve with default configuration.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    solve_lp_with(lp, &LpConfig::default())
}

enum VarMap {
    Shift { col: usize, offset: f64 },
    Mirror { col: usize, offset: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    m: usize,
    cols: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    red: Vec<f64>,
    obj: f64,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    /// Reduced costs of `costs` priced out against the current basis.
    fn price_out(&mut self, costs: &[f64]) {
        self.red.copy_from_slice(costs);
        self.obj = 0.0;
        for r in 0..self.m {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                self.obj += cb * self.rhs[r];
                for c in 0..self.cols {
                    self.red[c] -= cb * self.a[r * self.cols + c];
                }
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.at(row, col);
        let inv = 1.0 / p;
        for c in 0..self.cols {
            self.a[row * self.cols + c] *= inv;
        }
        self.rhs[row] *= inv;
        self.a[row * self.cols + col] = 1.0;
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let f = self.at(r, col);
            if f != 0.0 {
                for c in 0..self.cols {
                    let v = self.at(row, c);
                    self.a[r * self.cols + c] -= f * v;
                }
                self.rhs[r] -= f * self.rhs[row];
                self.a[r * self.cols + col] = 0.0;
            }
        }
        let f = self.red[col];
        if f != 0.0 {
            for c in 0..self.cols {
                self.red[c] -= f * self.at(row, c);
            }
            // entering variable rises to the normalized rhs; the objective
            // moves by its reduced cost times that step
            self.obj += f * self.rhs[row];
            self.red[col] = 0.0;
        }
        self.basis[row] = col;
    }
}

enum LoopResult {
    Optimal,
    Unbounded,
}

/// Run simplex iterations on the current cost row. `enterable(c)` gates the
/// entering columns; `artificial_from` marks columns whose basic rows take
/// pivot priority so artificial variables never grow off zero.
#[allow(clippy::too_many_arguments)]
fn simplex_loop(
    t: &mut Tableau,
    enterable: &dyn Fn(usize) -> bool,
    artificial_from: usize,
    cfg: &LpConfig,
    pivots: &mut usize,
    bland_after: usize,
    max_pivots: usize,
    phase: u8,
) -> Result<LoopResult, LpError> {
    loop {
        let bland = *pivots >= bland_after;
        // entering column
        let mut enter: Option<usize> = None;
        let mut best = -cfg.pivot_tol;
        for c in 0..t.cols {
            if !enterable(c) {
                continue;
            }
            let r = t.red[c];
            if r < best {
                enter = Some(c);
                if bland {
                    break;
                }
                best = r;
            } else if bland && r < -cfg.pivot_tol {
                enter = Some(c);
                break;
            }
        }
        let Some(e) = enter else {
            return Ok(LoopResult::Optimal);
        };

        // leaving row: rows holding a basic artificial get priority so they
        // stay pinned at zero once phase 1 is done
        let mut leave: Option<usize> = None;
        if artificial_from > 0 {
            for r in 0..t.m {
                if t.basis[r] >= artificial_from
                    && t.at(r, e).abs() > cfg.pivot_tol
                    && t.rhs[r] <= cfg.feas_tol
                {
                    leave = Some(r);
                    break;
                }
            }
        }
        if leave.is_none() {
            let mut best_ratio = f64::INFINITY;
            for r in 0..t.m {
                let a = t.at(r, e);
                if a > cfg.pivot_tol {
                    let ratio = t.rhs[r].max(0.0) / a;
                    let better = ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.map_or(true, |lr| t.basis[r] < t.basis[lr]));
                    if better {
                        best_ratio = ratio;
                        leave = Some(r);
                    }
                }
            }
        }
        let Some(l) = leave else {
            return Ok(LoopResult::Unbounded);
        };

        t.pivot(l, e);
        *pivots += 1;
        if *pivots > max_pivots {
            return Err(LpError::PivotLimit {
                pivots: *pivots,
                phase,
                rows: t.m,
                cols: t.cols,
            });
        }
    }
}

pub fn solve_lp_with(lp: &LinearProgram, cfg: &LpConfig) -> Result<LpOutcome, LpError> {
    lp.check_dims().map_err(LpError::Malformed)?;
    let n = lp.n_vars();

    // variable transformation to w >= 0
    let mut maps = Vec::with_capacity(n);
    let mut n_struct = 0usize;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = lp.bounds[j];
        if lo.is_finite() {
            let col = n_struct;
            n_struct += 1;
            maps.push(VarMap::Shift { col, offset: lo });
            if hi.is_finite() {
                upper_rows.push((col, hi - lo));
            }
        } else if hi.is_finite() {
            let col = n_struct;
            n_struct += 1;
            maps.push(VarMap::Mirror { col, offset: hi });
        } else {
            let pos = n_struct;
            let neg = n_struct + 1;
            n_struct += 2;
            maps.push(VarMap::Split { pos, neg });
        }
    }

    // transformed objective
    let mut c_struct = vec![0.0; n_struct];
    let mut c_const = 0.0;
    for j in 0..n {
        let cj = lp.objective[j];
        match maps[j] {
            VarMap::Shift { col, offset } => {
                c_struct[col] += cj;
                c_const += cj * offset;
            }
            VarMap::Mirror { col, offset } => {
                c_struct[col] -= cj;
                c_const += cj * offset;
            }
            VarMap::Split { pos, neg } => {
                c_struct[pos] += cj;
                c_struct[neg] -= cj;
            }
        }
    }

    let mi = lp.ineq_lhs.len();
    let me = lp.eq_lhs.len();
    let mb = upper_rows.len();
    let m = mi + me + mb;

    // transformed rows: user inequalities, user equalities, bound rows
    let mut rows = vec![vec![0.0; n_struct]; m];
    let mut rhs = vec![0.0; m];
    let mut is_eq = vec![false; m];
    for (r, (lhs, b)) in lp
        .ineq_lhs
        .iter()
        .zip(&lp.ineq_rhs)
        .chain(lp.eq_lhs.iter().zip(&lp.eq_rhs))
        .enumerate()
    {
        is_eq[r] = r >= mi;
        let mut b = *b;
        for j in 0..n {
            let a = lhs[j];
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shift { col, offset } => {
                    rows[r][col] += a;
                    b -= a * offset;
                }
                VarMap::Mirror { col, offset } => {
                    rows[r][col] -= a;
                    b -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    rows[r][pos] += a;
                    rows[r][neg] -= a;
                }
            }
        }
        rhs[r] = b;
    }
    for (k, &(col, ub)) in upper_rows.iter().enumerate() {
        let r = mi + me + k;
        rows[r][col] = 1.0;
        rhs[r] = ub; // ub >= 0 because hi >= lo
    }

    // column layout: structural | slacks (ineq + bound rows) | artificials
    let n_slack = mi + mb;
    let mut slack_of = vec![usize::MAX; m];
    {
        let mut next = n_struct;
        for r in 0..m {
            if !is_eq[r] {
                slack_of[r] = next;
                next += 1;
            }
        }
    }
    let art_from = n_struct + n_slack;
    let mut flip = vec![false; m];
    let mut art_of = vec![usize::MAX; m];
    let mut n_art = 0usize;
    for r in 0..m {
        if rhs[r] < 0.0 {
            flip[r] = true;
        }
        if is_eq[r] || flip[r] {
            art_of[r] = art_from + n_art;
            n_art += 1;
        }
    }
    let cols = art_from + n_art;

    // assemble tableau
    let mut t = Tableau {
        m,
        cols,
        a: vec![0.0; m * cols],
        rhs: vec![0.0; m],
        basis: vec![0; m],
        red: vec![0.0; cols],
        obj: 0.0,
    };
    for r in 0..m {
        let sign = if flip[r] { -1.0 } else { 1.0 };
        for c in 0..n_struct {
            t.a[r * cols + c] = sign * rows[r][c];
        }
        if slack_of[r] != usize::MAX {
            t.a[r * cols + slack_of[r]] = sign;
        }
        if art_of[r] != usize::MAX {
            t.a[r * cols + art_of[r]] = 1.0;
        }
        t.rhs[r] = sign * rhs[r];
        // initial basis: slack where it forms the identity, artificial otherwise
        t.basis[r] = if art_of[r] != usize::MAX {
            art_of[r]
        } else {
            slack_of[r]
        };
    }

    let bland_after = cfg.bland_after.unwrap_or(5 * (m + cols));
    let max_pivots = cfg.max_pivots.unwrap_or(10_000 + 200 * (m + cols));
    let mut pivots = 0usize;

    let infeasible = || LpOutcome {
        status: LpStatus::Infeasible,
        primal: vec![],
        dual_ineq: vec![],
        dual_eq: vec![],
        cost: f64::INFINITY,
    };

    // phase 1
    if n_art > 0 {
        let mut phase1 = vec![0.0; cols];
        for c in art_from..cols {
            phase1[c] = 1.0;
        }
        t.price_out(&phase1);
        match simplex_loop(&mut t, &|_| true, 0, cfg, &mut pivots, bland_after, max_pivots, 1)? {
            LoopResult::Unbounded => {
                // the phase-1 objective is bounded below by zero; only
                // pivot-tolerance starvation can land here
                return Err(LpError::Numerical("phase-1 ray with no admissible pivot".into()));
            }
            LoopResult::Optimal => {}
        }
        if t.obj > cfg.feas_tol {
            return Ok(infeasible());
        }
        // drive remaining basic artificials out where possible
        for r in 0..m {
            if t.basis[r] >= art_from {
                if let Some(c) = (0..art_from).find(|&c| t.at(r, c).abs() > cfg.pivot_tol) {
                    t.pivot(r, c);
                }
            }
        }
    }

    // phase 2
    let mut phase2 = vec![0.0; cols];
    phase2[..n_struct].copy_from_slice(&c_struct);
    t.price_out(&phase2);
    let afrom = if n_art > 0 { art_from } else { 0 };
    match simplex_loop(
        &mut t,
        &|c| c < art_from,
        afrom,
        cfg,
        &mut pivots,
        bland_after,
        max_pivots,
        2,
    )? {
        LoopResult::Unbounded => {
            return Ok(LpOutcome {
                status: LpStatus::Unbounded,
                primal: vec![],
                dual_ineq: vec![],
                dual_eq: vec![],
                cost: f64::NEG_INFINITY,
            });
        }
        LoopResult::Optimal => {}
    }
    // a basic artificial that could not be priced out above zero means the
    // driven system is inconsistent after all
    for r in 0..m {
        if t.basis[r] >= art_from && t.rhs[r] > cfg.feas_tol {
            return Ok(infeasible());
        }
    }

    // primal in the original space
    let mut w = vec![0.0; cols];
    for r in 0..m {
        w[t.basis[r]] = t.rhs[r];
    }
    let primal: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            VarMap::Shift { col, offset } => offset + w[col],
            VarMap::Mirror { col, offset } => offset - w[col],
            VarMap::Split { pos, neg } => w[pos] - w[neg],
        })
        .collect();

    // duals: y = c_B' B^{-1}, read through each row's initial identity column
    let mut dual_ineq = Vec::with_capacity(mi);
    let mut dual_eq = Vec::with_capacity(me);
    for r in 0..mi + me {
        let ident = if art_of[r] != usize::MAX {
            art_of[r]
        } else {
            slack_of[r]
        };
        let mut y = 0.0;
        for rr in 0..m {
            let cb = phase2[t.basis[rr]];
            if cb != 0.0 {
                y += cb * t.at(rr, ident);
            }
        }
        let y_orig = if flip[r] { -y } else { y };
        let mult = -y_orig;
        if r < mi {
            // optimality guarantees mult >= 0 up to pivot dust; clamp only that
            dual_ineq.push(if mult < 0.0 && mult > -1e-6 { 0.0 } else { mult });
        } else {
            dual_eq.push(mult);
        }
    }

    Ok(LpOutcome {
        status: LpStatus::Optimal,
        primal,
        dual_ineq,
        dual_eq,
        cost: t.obj + c_const,
    })
}

/// KKT residuals of an optimal outcome, computed directly from the data.
#[derive(Debug, Clone, PartialEq)]
pub struct DualityReport {
    /// Worst violation of rows and bounds by the primal point.
    pub primal_inf: f64,
    /// Worst violation of the sign conditions on reduced costs.
    pub dual_inf: f64,
    /// Worst `|mu_i * slack_i|` over inequality rows.
    pub comp_slack: f64,
    /// `|c'x - g(mu, nu)|` with `g` the box-form dual function.
    pub gap: f64,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("duality report requires an optimal outcome")]
    NotOptimal,
}

pub fn lp_duality_report(lp: &LinearProgram, out: &LpOutcome) -> Result<DualityReport, ReportError> {
    if out.status != LpStatus::Optimal {
        return Err(ReportError::NotOptimal);
    }
    let x = &out.primal;
    let mut primal_inf: f64 = 0.0;
    for (row, b) in lp.ineq_lhs.iter().zip(&lp.ineq_rhs) {
        primal_inf = primal_inf.max(dot(row, x) - b);
    }
    for (row, f) in lp.eq_lhs.iter().zip(&lp.eq_rhs) {
        primal_inf = primal_inf.max((dot(row, x) - f).abs());
    }
    for (v, &(lo, hi)) in x.iter().zip(&lp.bounds) {
        primal_inf = primal_inf.max(lo - v).max(v - hi);
    }

    // reduced costs r = c + A'mu + E'nu
    let n = lp.n_vars();
    let mut red = lp.objective.clone();
    for (row, mu) in lp.ineq_lhs.iter().zip(&out.dual_ineq) {
        for j in 0..n {
            red[j] += mu * row[j];
        }
    }
    for (row, nu) in lp.eq_lhs.iter().zip(&out.dual_eq) {
        for j in 0..n {
            red[j] += nu * row[j];
        }
    }

    let at_tol = 1e-7;
    let mut dual_inf: f64 = 0.0;
    for j in 0..n {
        let (lo, hi) = lp.bounds[j];
        let at_lo = x[j] <= lo + at_tol;
        let at_hi = x[j] >= hi - at_tol;
        let viol = match (at_lo, at_hi) {
            (true, true) => 0.0,
            (true, false) => (-red[j]).max(0.0),
            (false, true) => red[j].max(0.0),
            (false, false) => red[j].abs(),
        };
        dual_inf = dual_inf.max(viol);
    }
    for mu in &out.dual_ineq {
        dual_inf = dual_inf.max(-mu);
    }

    let mut comp_slack: f64 = 0.0;
    for ((row, b), mu) in lp.ineq_lhs.iter().zip(&lp.ineq_rhs).zip(&out.dual_ineq) {
        comp_slack = comp_slack.max((mu * (b - dot(row, x))).abs());
    }

    // box-form dual value: g = -mu'b - nu'f + min over the box of r'x
    let mut g = -dot(&out.dual_ineq, &lp.ineq_rhs) - dot(&out.dual_eq, &lp.eq_rhs);
    for j in 0..n {
        let (lo, hi) = lp.bounds[j];
        let r = red[j];
        if r.abs() <= at_tol {
            continue;
        }
        g += if r > 0.0 { r * lo } else { r * hi };
    }
    let gap = if g.is_finite() {
        (dot(&lp.objective, x) - g).abs()
    } else {
        f64::INFINITY
    };

    Ok(DualityReport {
        primal_inf,
        dual_inf,
        comp_slack,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn simple_lp() -> LinearProgram {
        // min -x - y  s.t.  x + y <= 1,  x, y >= 0
        LinearProgram::inequality_form(
            vec![-1.0, -1.0],
            vec![vec![1.0, 1.0]],
            vec![1.0],
            vec![(0.0, f64::INFINITY), (0.0, f64::INFINITY)],
        )
    }

    #[test]
    fn solves_simple_lp_with_row_dual() {
        let lp = simple_lp();
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_close(out.cost, -1.0, 1e-9);
        assert_close(out.primal[0] + out.primal[1], 1.0, 1e-9);
        assert_close(out.dual_ineq[0], 1.0, 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        let lp = LinearProgram::inequality_form(
            vec![1.0],
            vec![vec![1.0]],
            vec![-1.0],
            vec![(0.0, f64::INFINITY)],
        );
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let lp = LinearProgram::inequality_form(vec![-1.0], vec![], vec![], vec![(0.0, f64::INFINITY)]);
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Unbounded);
    }

    #[test]
    fn handles_equality_rows_and_free_variables() {
        // min x + 2y  s.t.  x + y = 3, x free, y in [0, 10]
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            ineq_lhs: vec![],
            ineq_rhs: vec![],
            eq_lhs: vec![vec![1.0, 1.0]],
            eq_rhs: vec![3.0],
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY), (0.0, 10.0)],
        };
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_close(out.cost, 3.0, 1e-9);
        assert_close(out.primal[0], 3.0, 1e-9);
        assert_close(out.primal[1], 0.0, 1e-9);
        assert_close(out.dual_eq[0], -1.0, 1e-9);
        let rep = lp_duality_report(&lp, &out).unwrap();
        assert!(rep.gap <= 1e-9, "{rep:?}");
    }

    #[test]
    fn lower_bounded_row_dual_sign() {
        // min x  s.t.  -x <= -2 (x >= 2), x in [0, 10]
        let lp = LinearProgram::inequality_form(
            vec![1.0],
            vec![vec![-1.0]],
            vec![-2.0],
            vec![(0.0, 10.0)],
        );
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_close(out.primal[0], 2.0, 1e-9);
        assert_close(out.dual_ineq[0], 1.0, 1e-9);
        let rep = lp_duality_report(&lp, &out).unwrap();
        assert!(rep.gap <= 1e-9 && rep.dual_inf <= 1e-9, "{rep:?}");
    }

    #[test]
    fn mirrored_variable() {
        // min -x  s.t.  x <= 3 via bound only, x unbounded below
        let lp = LinearProgram::inequality_form(vec![-1.0], vec![], vec![], vec![(f64::NEG_INFINITY, 3.0)]);
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_close(out.primal[0], 3.0, 1e-12);
        assert_close(out.cost, -3.0, 1e-12);
    }

    #[test]
    fn report_residuals_small_at_optimum() {
        let lp = simple_lp();
        let out = solve_lp(&lp).unwrap();
        let rep = lp_duality_report(&lp, &out).unwrap();
        assert!(rep.primal_inf <= 1e-9, "{rep:?}");
        assert!(rep.dual_inf <= 1e-9, "{rep:?}");
        assert!(rep.comp_slack <= 1e-9, "{rep:?}");
        assert!(rep.gap <= 1e-9, "{rep:?}");
    }

    #[test]
    fn report_sees_perturbed_primal() {
        let lp = simple_lp();
        let mut out = solve_lp(&lp).unwrap();
        out.primal[0] += 0.1;
        let rep = lp_duality_report(&lp, &out).unwrap();
        assert_close(rep.primal_inf, 0.1, 1e-9);
    }

    #[test]
    fn report_requires_optimal_status() {
        let lp = simple_lp();
        let mut out = solve_lp(&lp).unwrap();
        out.status = LpStatus::Infeasible;
        assert!(matches!(lp_duality_report(&lp, &out), Err(ReportError::NotOptimal)));
    }

    #[test]
    fn zero_objective_gap_is_exactly_zero() {
        let lp = LinearProgram::inequality_form(
            vec![0.0, 0.0],
            vec![vec![1.0, 1.0]],
            vec![1.0],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        let rep = lp_duality_report(&lp, &out).unwrap();
        assert_eq!(rep.gap, 0.0);
    }

    #[test]
    fn rejects_malformed_input() {
        let lp = LinearProgram::inequality_form(vec![1.0], vec![vec![1.0, 2.0]], vec![1.0], vec![(0.0, 1.0)]);
        assert!(matches!(solve_lp(&lp), Err(LpError::Malformed(_))));
    }

    fn random_feasible_bounded_lp(rng: &mut impl Rng) -> LinearProgram {
        let n = rng.gen_range(1..6);
        let m = rng.gen_range(1..7);
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
        let lhs: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let rhs: Vec<f64> = lhs
            .iter()
            .map(|row| dot(row, &x0) + rng.gen_range(0.0..1.0))
            .collect();
        let objective = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        LinearProgram::inequality_form(objective, lhs, rhs, vec![(0.0, 10.0); n])
    }

    #[test]
    fn fuzz_strong_duality_on_random_lps() {
        let mut rng = crate::seeds::stream(11, "lp-fuzz");
        for _ in 0..300 {
            let lp = random_feasible_bounded_lp(&mut rng);
            let out = solve_lp(&lp).unwrap();
            assert_eq!(out.status, LpStatus::Optimal);
            let rep = lp_duality_report(&lp, &out).unwrap();
            let scale = 1.0 + out.cost.abs();
            assert!(rep.gap <= 1e-6 * scale, "{rep:?} for {lp:?}");
            assert!(rep.primal_inf <= 1e-7, "{rep:?}");
            assert!(rep.dual_inf <= 1e-6, "{rep:?}");
            assert!(rep.comp_slack <= 1e-6 * scale, "{rep:?}");
        }
    }

    #[test]
    fn objective_scaling_scales_cost_and_duals() {
        let mut rng = crate::seeds::stream(13, "lp-scale");
        for _ in 0..50 {
            let lp = random_feasible_bounded_lp(&mut rng);
            let lam = rng.gen_range(0.5..4.0);
            let mut scaled = lp.clone();
            for c in &mut scaled.objective {
                *c *= lam;
            }
            let a = solve_lp(&lp).unwrap();
            let b = solve_lp(&scaled).unwrap();
            assert_close(b.cost, lam * a.cost, 1e-7 * (1.0 + a.cost.abs()) * lam);
            for (da, db) in a.dual_ineq.iter().zip(&b.dual_ineq) {
                assert_close(*db, lam * da, 1e-6 * (1.0 + da.abs()) * lam);
            }
        }
    }

    #[test]
    fn redundant_row_does_not_change_cost() {
        let mut rng = crate::seeds::stream(17, "lp-redundant");
        for _ in 0..50 {
            let lp = random_feasible_bounded_lp(&mut rng);
            let mut extended = lp.clone();
            extended.ineq_lhs.push(lp.ineq_lhs[0].clone());
            extended.ineq_rhs.push(lp.ineq_rhs[0]);
            let a = solve_lp(&lp).unwrap();
            let b = solve_lp(&extended).unwrap();
            assert_close(a.cost, b.cost, 1e-7 * (1.0 + a.cost.abs()));
        }
    }

    #[test]
    fn deterministic_given_input() {
        let mut rng = crate::seeds::stream(19, "lp-det");
        let lp = random_feasible_bounded_lp(&mut rng);
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp).unwrap();
        assert_eq!(a.primal, b.primal);
        assert_eq!(a.cost.to_bits(), b.cost.to_bits());
    }

    #[test]
    fn zero_variable_problem() {
        let lp = LinearProgram::inequality_form(vec![], vec![], vec![], vec![]);
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.cost, 0.0);
    }
}
