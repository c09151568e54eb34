//! Bell's original inequality, the Bell-like bound, and the machinery that
//! checks them.

mod appendix_d;
mod derivation;

pub use appendix_d::{
    appendix_d_node, grid_angle, verify_appendix_d, verify_appendix_d_pairs, verify_appendix_d_random,
    AppendixDNode, AppendixDSummary, SubCheckViolations,
};
pub use derivation::{
    replay_bell_derivation, replay_bell_derivation_uniform, Assumption, AssumptionViolation, DerivationReport,
    DerivationStep,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::check_angle;

/// Slack added to the right-hand side before declaring a violation.
pub const SATISFACTION_TOLERANCE: f64 = 1e-12;

/// How far outside [-1, 1] a correlation may stray before it is rejected.
pub const CORRELATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs − lhs`; negative when violated.
    pub margin: f64,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        InequalityReport {
            lhs,
            rhs,
            satisfied: lhs <= rhs + SATISFACTION_TOLERANCE,
            margin: rhs - lhs,
        }
    }

    /// Satisfied once the right-hand side is widened by `slack`.
    pub fn satisfied_with_slack(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack + SATISFACTION_TOLERANCE
    }
}

fn check_correlation(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value.abs() <= 1.0 + CORRELATION_SLACK {
        Ok(value)
    } else {
        Err(Error::Range { what, value })
    }
}

/// `|E(a,b) − E(a,c)| ≤ 1 + E(b,c)`.
pub fn bell_original(e_ab: f64, e_ac: f64, e_bc: f64) -> Result<InequalityReport> {
    let e_ab = check_correlation("E(a,b)", e_ab)?;
    let e_ac = check_correlation("E(a,c)", e_ac)?;
    let e_bc = check_correlation("E(b,c)", e_bc)?;
    Ok(InequalityReport::new((e_ab - e_ac).abs(), 1.0 + e_bc))
}

/// `|E(a,b) − E(a,c)| ≤ 1 − cos θ_ab cos θ_ac`.
///
/// The right-hand side is a function of the angles only, not a correlation.
pub fn bell_like(e_ab: f64, e_ac: f64, theta_ab: f64, theta_ac: f64) -> Result<InequalityReport> {
    let e_ab = check_correlation("E(a,b)", e_ab)?;
    let e_ac = check_correlation("E(a,c)", e_ac)?;
    let theta_ab = check_angle(theta_ab)?;
    let theta_ac = check_angle(theta_ac)?;
    Ok(InequalityReport::new(
        (e_ab - e_ac).abs(),
        1.0 - theta_ab.cos() * theta_ac.cos(),
    ))
}
