//! The deterministic outcome map every model family implements.
//!
//! A model is the function `F(λ, t₁)` restricted to the detector settings of
//! a scenario: given a hidden variable and a setting pair it returns the pair
//! of signs the two detectors show. Evaluation is pure; the randomness lives
//! entirely in how λ is drawn.

use crate::error::Result;
use crate::geometry::{ScenarioId, SettingPair};
use crate::hidden::{DomainTag, HiddenVariable, OutcomePair, TrialDraws};

pub trait LhvModel: Send + Sync {
    /// Short identifier, also used to label random streams.
    fn name(&self) -> &'static str;

    /// Draws λ for a run of `pair`'s scenario from the model's measure ρ(λ).
    fn sample_lambda(&self, pair: &SettingPair, draws: &TrialDraws) -> Result<HiddenVariable>;

    /// Deterministic outcome of measuring `pair` on `lambda`.
    ///
    /// Models that encode factuality fail with `SettingMismatch` when λ lies
    /// in another scenario's domain.
    fn evaluate(&self, lambda: &HiddenVariable, pair: &SettingPair) -> Result<OutcomePair>;

    fn domain_tag(&self, lambda: &HiddenVariable) -> DomainTag {
        lambda.tag()
    }

    /// Closed-form E for `pair`, when the model has one.
    fn exact_correlation(&self, _pair: &SettingPair) -> Option<f64> {
        None
    }
}

pub fn evaluate_model<M: LhvModel + ?Sized>(
    model: &M,
    lambda: &HiddenVariable,
    pair: &SettingPair,
) -> Result<OutcomePair> {
    model.evaluate(lambda, pair)
}

/// The two readings of "one λ behind all three scenarios".
///
/// Either each scenario has its own evolution function `Fᵢ(λ, t₁)`, or one
/// function is read out at a different time per scenario, `F(λ, tᵢ)`. Both
/// produce a set of six outcome functions `A₁…B₃` over a common Λ, so the
/// models use the same machinery for both and the reading only changes how
/// scenarios are labeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasurementPath {
    #[default]
    SeparateFunctions,
    SeparateTimes,
}

impl MeasurementPath {
    pub fn scenario_label(self, scenario: ScenarioId) -> String {
        match self {
            MeasurementPath::SeparateFunctions => format!("F{scenario}(λ, t1)"),
            MeasurementPath::SeparateTimes => format!("F(λ, t{scenario})"),
        }
    }
}
