//! Singlet statistics: the quantum-mechanical predictions every model is
//! compared against, and an inverse-CDF sampler that reproduces them.

use crate::error::Result;
use crate::geometry::{check_angle, SettingPair};
use crate::hidden::{DomainTag, HiddenVariable, OutcomePair, Sign, TrialDraws};
use crate::model::LhvModel;

use super::table::JointTable;

// Half-angle forms, exact at θ = 0 and θ = π.
pub(crate) fn same_probability(theta: f64) -> f64 {
    (0.5 * (1.0 - theta.cos())).clamp(0.0, 1.0)
}

pub(crate) fn opposite_probability(theta: f64) -> f64 {
    (0.5 * (1.0 + theta.cos())).clamp(0.0, 1.0)
}

/// sin²(θ/2): probability that the second particle shows the same sign as
/// the first.
pub fn qm_conditional_same(theta: f64) -> Result<f64> {
    Ok(same_probability(check_angle(theta)?))
}

/// cos²(θ/2): probability of opposite signs.
pub fn qm_conditional_opposite(theta: f64) -> Result<f64> {
    Ok(opposite_probability(check_angle(theta)?))
}

/// P(±, ±) = ½ sin²(θ/2), P(±, ∓) = ½ cos²(θ/2).
pub fn qm_joint_table(theta: f64) -> Result<JointTable> {
    let theta = check_angle(theta)?;
    let same = 0.5 * same_probability(theta);
    let opposite = 0.5 * opposite_probability(theta);
    JointTable::new(same, opposite, opposite, same)
}

/// E(θ) = −cos θ.
pub fn qm_expectation(theta: f64) -> Result<f64> {
    Ok(-check_angle(theta)?.cos())
}

/// Outcome given the first sign and a uniform `u`: the second sign repeats
/// the first iff `u < sin²(θ/2)`.
pub(crate) fn singlet_outcome(theta: f64, first: Sign, u: f64) -> OutcomePair {
    let second = if u < same_probability(theta) {
        first
    } else {
        -first
    };
    OutcomePair::new(first, second)
}

/// Draws one outcome pair of the singlet table at angle `theta`: the first
/// sign is +1 iff `draw1 < ½`, the second copies it iff `draw2 < sin²(θ/2)`.
pub fn qm_oracle_sample(theta: f64, draw1: f64, draw2: f64) -> OutcomePair {
    singlet_outcome(theta, Sign::from_draw(draw1), draw2)
}

/// Quantum predictions for any setting pair. The outcome depends on both
/// settings at once, so this is the reference oracle rather than a
/// local model.
#[derive(Debug, Clone, Copy, Default)]
pub struct QmSinglet;

impl LhvModel for QmSinglet {
    fn name(&self) -> &'static str {
        "qm"
    }

    fn sample_lambda(&self, _pair: &SettingPair, draws: &TrialDraws) -> Result<HiddenVariable> {
        draws.lambda(DomainTag::SHARED)
    }

    fn evaluate(&self, lambda: &HiddenVariable, pair: &SettingPair) -> Result<OutcomePair> {
        Ok(singlet_outcome(pair.angle(), lambda.s(), lambda.u1()))
    }

    fn exact_correlation(&self, pair: &SettingPair) -> Option<f64> {
        Some(-pair.angle().cos())
    }
}
