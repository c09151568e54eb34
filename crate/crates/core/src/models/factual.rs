//! Factual model: each scenario owns a disjoint domain Λᵢ.
//!
//! A λ fixes the detector orientations along with everything else, so a λ
//! that produced outcomes along (a, b) cannot also produce outcomes along
//! (a, c). Within its own domain every scenario reproduces the singlet
//! table; across domains the outcome functions are simply undefined and
//! evaluation fails with `SettingMismatch`.

use crate::error::{Error, Result};
use crate::geometry::{ScenarioId, SettingPair};
use crate::hidden::{DomainTag, HiddenVariable, OutcomePair, TrialDraws};
use crate::model::LhvModel;

use super::measure::{pick_by_measure, validate_measures};
use super::qm::singlet_outcome;

#[derive(Debug, Clone)]
pub struct FactualModel {
    scenarios: Vec<SettingPair>,
    angles: Vec<f64>,
    measures: Vec<f64>,
}

impl FactualModel {
    /// One domain per scenario, all of equal measure.
    pub fn new(scenarios: Vec<SettingPair>) -> Result<Self> {
        if scenarios.is_empty() {
            return Err(Error::InvalidMeasures("a factual model needs at least one scenario".into()));
        }
        for (i, pair) in scenarios.iter().enumerate() {
            if scenarios[..i].iter().any(|p| p.scenario == pair.scenario) {
                return Err(Error::InvalidMeasures(format!(
                    "scenario {} declared twice",
                    pair.scenario
                )));
            }
        }
        let n = scenarios.len();
        let angles = scenarios.iter().map(SettingPair::angle).collect();
        Ok(FactualModel {
            scenarios,
            angles,
            measures: vec![1.0 / n as f64; n],
        })
    }

    /// Sets Z(Λᵢ) for each declared scenario, in declaration order.
    pub fn with_measures(mut self, measures: Vec<f64>) -> Result<Self> {
        if measures.len() != self.scenarios.len() {
            return Err(Error::InvalidMeasures(format!(
                "{} measures for {} scenarios",
                measures.len(),
                self.scenarios.len()
            )));
        }
        validate_measures(&measures)?;
        self.measures = measures;
        Ok(self)
    }

    pub fn scenarios(&self) -> &[SettingPair] {
        &self.scenarios
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    fn index_of(&self, scenario: ScenarioId) -> Result<usize> {
        self.scenarios
            .iter()
            .position(|p| p.scenario == scenario)
            .ok_or(Error::UnknownScenario(scenario))
    }

    /// Draws λ from the scenario's own domain and the outcome it produces.
    pub fn sample(
        &self,
        scenario: ScenarioId,
        draws: &TrialDraws,
    ) -> Result<(HiddenVariable, OutcomePair)> {
        let index = self.index_of(scenario)?;
        let lambda = draws.lambda(DomainTag(scenario.0))?;
        let outcome = singlet_outcome(self.angles[index], lambda.s(), lambda.u1());
        Ok((lambda, outcome))
    }

    /// Draws λ from the whole of Λ: the domain is picked by its measure using
    /// the selector slot.
    pub fn sample_domain(&self, draws: &TrialDraws) -> Result<HiddenVariable> {
        let index = pick_by_measure(&self.measures, draws.selector());
        draws.lambda(DomainTag(self.scenarios[index].scenario.0))
    }
}

impl LhvModel for FactualModel {
    fn name(&self) -> &'static str {
        "factual"
    }

    fn sample_lambda(&self, pair: &SettingPair, draws: &TrialDraws) -> Result<HiddenVariable> {
        self.sample(pair.scenario, draws).map(|(lambda, _)| lambda)
    }

    fn evaluate(&self, lambda: &HiddenVariable, pair: &SettingPair) -> Result<OutcomePair> {
        let index = self.index_of(pair.scenario)?;
        if lambda.tag() != DomainTag(pair.scenario.0) {
            return Err(Error::SettingMismatch {
                domain: lambda.tag(),
                scenario: pair.scenario,
            });
        }
        if !self.scenarios[index].same_settings(pair) {
            return Err(Error::UndeclaredSettings(pair.scenario));
        }
        Ok(singlet_outcome(self.angles[index], lambda.s(), lambda.u1()))
    }

    fn exact_correlation(&self, pair: &SettingPair) -> Option<f64> {
        let index = self.index_of(pair.scenario).ok()?;
        self.scenarios[index]
            .same_settings(pair)
            .then(|| -self.angles[index].cos())
    }
}
