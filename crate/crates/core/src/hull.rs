//! Extreme points of the convex hull of a block's mixed-integer set.
//!
//! `X_i` is a union of slices, one per assignment of the integer
//! coordinates. Every extreme point of `conv(X_i)` is an extreme point of
//! one slice, so enumerating slice vertices yields a finite generator set
//! for the hull. Blocks with at most one continuous coordinate are
//! supported: a slice is then a single point or an interval, whose at most
//! two endpoints are enumerated. Two-dimensional candidate sets are pruned
//! to their planar hull.

use thiserror::Error;

use crate::problem::AgentBlock;

/// Default cap on the number of integer assignments enumerated.
pub const DEFAULT_HULL_CAP: u128 = 100_000;

#[derive(Debug, Error)]
pub enum HullError {
    #[error("hull enumeration needs {needed} integer assignments, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("hull enumeration supports at most one continuous coordinate, block has {dim}")]
    UnsupportedContinuous { dim: usize },
    #[error("block has empty feasible set")]
    EmptySet,
}

const SLICE_TOL: f64 = 1e-9;

/// Integer ranges `[ceil(lo), floor(hi)]` of the block's integer coordinates.
fn integer_ranges(block: &AgentBlock) -> Vec<(i64, i64)> {
    block
        .integer_idx
        .iter()
        .map(|&j| {
            let lo = (block.lower[j] - SLICE_TOL).ceil() as i64;
            let hi = (block.upper[j] + SLICE_TOL).floor() as i64;
            (lo, hi)
        })
        .collect()
}

/// Points of `X_i` whose convex hull equals `conv(X_i)`.
pub fn hull_points(block: &AgentBlock, cap: u128) -> Result<Vec<Vec<f64>>, HullError> {
    let n = block.n_vars();
    let cont: Vec<usize> = (0..n).filter(|j| !block.is_integer(*j)).collect();
    if cont.len() > 1 {
        return Err(HullError::UnsupportedContinuous { dim: cont.len() });
    }
    let ranges = integer_ranges(block);
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Err(HullError::EmptySet);
    }
    let needed: u128 = ranges
        .iter()
        .map(|(lo, hi)| (hi - lo + 1) as u128)
        .product();
    if needed > cap {
        return Err(HullError::CapExceeded { needed, cap });
    }

    let mut points = Vec::new();
    let mut combo: Vec<i64> = ranges.iter().map(|(lo, _)| *lo).collect();
    loop {
        let mut x = vec![0.0; n];
        for (k, &j) in block.integer_idx.iter().enumerate() {
            x[j] = combo[k] as f64;
        }
        match cont.first() {
            None => {
                if block
                    .local_lhs
                    .iter()
                    .zip(&block.local_rhs)
                    .all(|(row, rhs)| crate::problem::dot(row, &x) <= rhs + SLICE_TOL)
                {
                    points.push(x);
                }
            }
            Some(&jc) => {
                // interval of the continuous coordinate within this slice
                let mut lo = block.lower[jc];
                let mut hi = block.upper[jc];
                let mut empty = false;
                for (row, rhs) in block.local_lhs.iter().zip(&block.local_rhs) {
                    let a = row[jc];
                    let rest: f64 = block
                        .integer_idx
                        .iter()
                        .map(|&j| row[j] * x[j])
                        .sum();
                    let slack = rhs - rest;
                    if a.abs() <= 1e-12 {
                        if slack < -SLICE_TOL {
                            empty = true;
                            break;
                        }
                    } else if a > 0.0 {
                        hi = hi.min(slack / a);
                    } else {
                        lo = lo.max(slack / a);
                    }
                }
                if !empty && lo <= hi + SLICE_TOL {
                    let hi = hi.max(lo);
                    let mut p = x.clone();
                    p[jc] = lo;
                    points.push(p);
                    if hi - lo > SLICE_TOL {
                        let mut p = x;
                        p[jc] = hi;
                        points.push(p);
                    }
                }
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == combo.len() {
                if points.is_empty() {
                    return Err(HullError::EmptySet);
                }
                if n == 2 {
                    return Ok(planar_hull(points));
                }
                return Ok(points);
            }
            combo[k] += 1;
            if combo[k] <= ranges[k].1 {
                break;
            }
            combo[k] = ranges[k].0;
            k += 1;
        }
    }
}

/// Andrew's monotone chain; keeps only hull vertices of a planar point set.
fn planar_hull(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| a[0] == b[0] && a[1] == b[1]);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::fixtures;

    #[test]
    fn interval_block_has_two_extremes() {
        let inst = fixtures::two_agents_shared_budget();
        let pts = hull_points(&inst.blocks[0], DEFAULT_HULL_CAP).unwrap();
        assert_eq!(pts.len(), 3); // one-dimensional, no planar pruning
        assert!(pts.contains(&vec![0.0]) && pts.contains(&vec![2.0]));
    }

    #[test]
    fn mixed_block_enumerates_slice_endpoints() {
        // x0 integer in [0,2], x1 continuous in [0,3] with x0 + x1 <= 3
        let block = AgentBlock {
            cost: vec![0.0, 0.0],
            coupling: vec![vec![1.0, 1.0]],
            local_lhs: vec![vec![1.0, 1.0]],
            local_rhs: vec![3.0],
            integer_idx: vec![0],
            lower: vec![0.0, 0.0],
            upper: vec![2.0, 3.0],
        };
        let pts = hull_points(&block, DEFAULT_HULL_CAP).unwrap();
        // planar hull of {(0,0),(0,3),(1,0),(1,2),(2,0),(2,1)}
        assert!(pts.contains(&vec![0.0, 0.0]));
        assert!(pts.contains(&vec![0.0, 3.0]));
        assert!(pts.contains(&vec![2.0, 0.0]));
        assert!(pts.contains(&vec![2.0, 1.0]));
        assert!(!pts.contains(&vec![1.0, 0.0])); // interior of an edge
        for p in &pts {
            assert!(block.contains(p, 1e-9));
        }
    }

    #[test]
    fn infeasible_slice_rows_prune_assignments() {
        // row with zero continuous coefficient: x0 <= 0 cuts x0 = 1, 2
        let block = AgentBlock {
            cost: vec![0.0, 0.0],
            coupling: vec![],
            local_lhs: vec![vec![1.0, 0.0]],
            local_rhs: vec![0.0],
            integer_idx: vec![0],
            lower: vec![0.0, 0.0],
            upper: vec![2.0, 1.0],
        };
        let pts = hull_points(&block, DEFAULT_HULL_CAP).unwrap();
        assert!(pts.iter().all(|p| p[0] == 0.0));
    }

    #[test]
    fn cap_is_enforced() {
        let inst = fixtures::two_agents_shared_budget();
        match hull_points(&inst.blocks[0], 2) {
            Err(HullError::CapExceeded { needed: 3, cap: 2 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn two_continuous_coordinates_unsupported() {
        let block = AgentBlock {
            cost: vec![0.0, 0.0],
            coupling: vec![],
            local_lhs: vec![],
            local_rhs: vec![],
            integer_idx: vec![],
            lower: vec![0.0, 0.0],
            upper: vec![1.0, 1.0],
        };
        assert!(matches!(
            hull_points(&block, DEFAULT_HULL_CAP),
            Err(HullError::UnsupportedContinuous { dim: 2 })
        ));
    }

    #[test]
    fn empty_set_detected() {
        let block = AgentBlock {
            cost: vec![0.0],
            coupling: vec![],
            local_lhs: vec![vec![1.0]],
            local_rhs: vec![-1.0],
            integer_idx: vec![0],
            lower: vec![0.0],
            upper: vec![1.0],
        };
        assert!(matches!(hull_points(&block, DEFAULT_HULL_CAP), Err(HullError::EmptySet)));
    }
}
