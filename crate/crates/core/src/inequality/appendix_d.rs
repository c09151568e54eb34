//! Numerical sweep of `|−cos θ_ab + cos θ_ac| ≤ 1 − cos θ_ab cos θ_ac` over
//! the square [0, π]².

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{InequalityReport, SATISFACTION_TOLERANCE};
use crate::error::{Error, Result};
use crate::montecarlo::{derive_trial_draws, SeedSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixDNode {
    pub theta_ab: f64,
    pub theta_ac: f64,
    pub report: InequalityReport,
}

/// Violation counts of the algebraic sub-checks. With `x = cos θ_ab` and
/// `y = cos θ_ac` these are `x(y + 1) ≤ y + 1`, `y(1 + x) ≤ 1 + x`, `x ≤ 1`
/// and `y ≤ 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubCheckViolations {
    pub left: u64,
    pub right: u64,
    pub cos_ab: u64,
    pub cos_ac: u64,
}

impl SubCheckViolations {
    pub fn total(&self) -> u64 {
        self.left + self.right + self.cos_ab + self.cos_ac
    }

    fn merge(self, other: Self) -> Self {
        SubCheckViolations {
            left: self.left + other.left,
            right: self.right + other.right,
            cos_ab: self.cos_ab + other.cos_ab,
            cos_ac: self.cos_ac + other.cos_ac,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AppendixDSummary {
    pub nodes: u64,
    pub violations: u64,
    /// Smallest margin; near-zero margins tie and are broken by larger lhs,
    /// then smaller angles, so the reported node is partition independent.
    pub worst: Option<AppendixDNode>,
    pub sub_checks: SubCheckViolations,
}

impl AppendixDSummary {
    pub fn worst_margin(&self) -> Option<f64> {
        self.worst.map(|w| w.report.margin)
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.sub_checks.total() == 0
    }

    fn single(node: AppendixDNode, x: f64, y: f64) -> Self {
        let tol = SATISFACTION_TOLERANCE;
        let flag = |bad: bool| u64::from(bad);
        AppendixDSummary {
            nodes: 1,
            violations: flag(!node.report.satisfied),
            worst: Some(node),
            sub_checks: SubCheckViolations {
                left: flag(x * (y + 1.0) > y + 1.0 + tol),
                right: flag(y * (1.0 + x) > 1.0 + x + tol),
                cos_ab: flag(x > 1.0 + tol),
                cos_ac: flag(y > 1.0 + tol),
            },
        }
    }

    /// Associative and commutative, so any split of the sweep gives the same
    /// result.
    pub fn merge(self, other: Self) -> Self {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(if worst_order(&a, &b) == Ordering::Greater { b } else { a }),
            (a, b) => a.or(b),
        };
        AppendixDSummary {
            nodes: self.nodes + other.nodes,
            violations: self.violations + other.violations,
            worst,
            sub_checks: self.sub_checks.merge(other.sub_checks),
        }
    }
}

fn snapped(margin: f64) -> f64 {
    if margin.abs() <= SATISFACTION_TOLERANCE {
        0.0
    } else {
        margin
    }
}

fn worst_order(a: &AppendixDNode, b: &AppendixDNode) -> Ordering {
    snapped(a.report.margin)
        .total_cmp(&snapped(b.report.margin))
        .then(b.report.lhs.total_cmp(&a.report.lhs))
        .then(a.theta_ab.total_cmp(&b.theta_ab))
        .then(a.theta_ac.total_cmp(&b.theta_ac))
}

fn node_from_cosines(theta_ab: f64, theta_ac: f64, x: f64, y: f64) -> AppendixDNode {
    AppendixDNode {
        theta_ab,
        theta_ac,
        report: InequalityReport::new((-x + y).abs(), 1.0 - x * y),
    }
}

pub fn appendix_d_node(theta_ab: f64, theta_ac: f64) -> AppendixDNode {
    node_from_cosines(theta_ab, theta_ac, theta_ab.cos(), theta_ac.cos())
}

/// Node `i` of an `n`-point uniform grid on [0, π]; the last node is π
/// exactly.
pub fn grid_angle(i: usize, n: usize) -> f64 {
    if i + 1 == n {
        PI
    } else {
        i as f64 * PI / (n - 1) as f64
    }
}

pub fn verify_appendix_d(grid_n: usize) -> Result<AppendixDSummary> {
    if grid_n < 2 {
        return Err(Error::InvalidGrid(grid_n));
    }
    let angles: Vec<f64> = (0..grid_n).map(|i| grid_angle(i, grid_n)).collect();
    let cosines: Vec<f64> = angles.iter().map(|t| t.cos()).collect();
    Ok((0..grid_n)
        .into_par_iter()
        .map(|i| {
            let (t_ab, x) = (angles[i], cosines[i]);
            angles
                .iter()
                .zip(&cosines)
                .map(|(&t_ac, &y)| AppendixDSummary::single(node_from_cosines(t_ab, t_ac, x, y), x, y))
                .fold(AppendixDSummary::default(), AppendixDSummary::merge)
        })
        .reduce(AppendixDSummary::default, AppendixDSummary::merge))
}

pub fn verify_appendix_d_pairs(pairs: &[(f64, f64)]) -> AppendixDSummary {
    pairs
        .par_iter()
        .map(|&(t_ab, t_ac)| {
            let node = appendix_d_node(t_ab, t_ac);
            AppendixDSummary::single(node, t_ab.cos(), t_ac.cos())
        })
        .reduce(AppendixDSummary::default, AppendixDSummary::merge)
}

/// `count` angle pairs drawn uniformly from [0, π)² out of `seed`.
pub fn verify_appendix_d_random(count: u64, seed: &SeedSpec) -> AppendixDSummary {
    let pairs: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            let d = derive_trial_draws(seed, i);
            (d.u1() * PI, d.u2() * PI)
        })
        .collect();
    verify_appendix_d_pairs(&pairs)
}
