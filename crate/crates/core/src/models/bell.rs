//! The model built under Bell's three assumptions and the closed forms it
//! implies.
//!
//! In every run A₁ = A₂ = s. The scenario-3 functions are tied to the
//! scenario-1 and scenario-2 tables through B₁ = −A₃ and B₂ = B₃, so A₃ keeps
//! the (A₁, B₁) singlet statistics at θ_ab and B₃ keeps the (A₂, B₂)
//! statistics at θ_ac. Given s the two are thresholded on independent
//! uniforms, which forces E(b, c) = −cos θ_ab cos θ_ac whatever θ_bc is.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{check_angle, DetectorTriple, SettingPair};
use crate::hidden::{DomainTag, HiddenVariable, OutcomePair, Sign, TrialDraws};
use crate::model::{LhvModel, MeasurementPath};

use super::qm::{opposite_probability, qm_joint_table, same_probability};
use super::record::SixFunctionRecord;
use super::table::JointTable;

/// Expectation values of the three scenarios of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTriple {
    pub e_ab: f64,
    pub e_ac: f64,
    pub e_bc: f64,
}

fn bell_record(s: Sign, u1: f64, u2: f64, a3_keep: f64, b3_flip: f64) -> SixFunctionRecord {
    let a3 = if u1 < a3_keep { s } else { -s };
    let b3 = if u2 < b3_flip { -s } else { s };
    SixFunctionRecord {
        a1: s,
        b1: -a3,
        a2: s,
        b2: b3,
        a3,
        b3,
    }
}

/// The six outcome functions at `lambda` under Bell's assumptions:
/// `a1 = a2 = s`, `a3 = s` iff `u1 < cos²(θ_ab/2)`, `b1 = −a3`,
/// `b3 = −s` iff `u2 < cos²(θ_ac/2)`, `b2 = b3`.
pub fn bell_constrained_record(
    lambda: &HiddenVariable,
    theta_ab: f64,
    theta_ac: f64,
) -> Result<SixFunctionRecord> {
    let theta_ab = check_angle(theta_ab)?;
    let theta_ac = check_angle(theta_ac)?;
    Ok(bell_record(
        lambda.s(),
        lambda.u1(),
        lambda.u2(),
        opposite_probability(theta_ab),
        opposite_probability(theta_ac),
    ))
}

/// E_ab = −cos θ_ab, E_ac = −cos θ_ac, E_bc = −cos θ_ab cos θ_ac.
pub fn bell_constrained_exact(theta_ab: f64, theta_ac: f64) -> Result<CorrelationTriple> {
    let (cab, cac) = (check_angle(theta_ab)?.cos(), check_angle(theta_ac)?.cos());
    Ok(CorrelationTriple {
        e_ab: -cab,
        e_ac: -cac,
        e_bc: -cab * cac,
    })
}

/// The joint tables of the Bell-constrained construction, each labeled by
/// the pair of functions it describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellAssumptionTables {
    /// (A₁, B₁), the first experiment.
    pub a1_b1: JointTable,
    /// (A₂, −A₃), Table 1 after substituting A₁ → A₂ and B₁ → −A₃.
    pub a2_neg_a3: JointTable,
    /// (A₂, B₂), the second experiment.
    pub a2_b2: JointTable,
    /// (A₂, B₃), the second experiment after substituting B₂ → B₃.
    pub a2_b3: JointTable,
    /// (A₃, B₃), derived from the two tables above.
    pub a3_b3: JointTable,
}

/// Builds the tables, deriving (A₃, B₃) by splitting on the value of A₂:
/// for A₂ = ±1 the same-sign probability of A₃ and B₃ is
/// `cos²(θ_ab/2) sin²(θ_ac/2) + sin²(θ_ab/2) cos²(θ_ac/2)`, and each value
/// of A₂ carries weight ½.
pub fn bell_assumption_tables(theta_ab: f64, theta_ac: f64) -> Result<BellAssumptionTables> {
    let theta_ab = check_angle(theta_ab)?;
    let theta_ac = check_angle(theta_ac)?;
    let a1_b1 = qm_joint_table(theta_ab)?;
    let a2_b2 = qm_joint_table(theta_ac)?;

    let (c_ab, s_ab) = (opposite_probability(theta_ab), same_probability(theta_ab));
    let (c_ac, s_ac) = (opposite_probability(theta_ac), same_probability(theta_ac));
    let same_given_plus = c_ab * s_ac + s_ab * c_ac;
    let same_given_minus = s_ab * c_ac + c_ab * s_ac;
    let same = 0.5 * same_given_plus + 0.5 * same_given_minus;

    Ok(BellAssumptionTables {
        a1_b1,
        a2_neg_a3: a1_b1,
        a2_b2,
        a2_b3: a2_b2,
        a3_b3: JointTable::from_same_probability(same)?,
    })
}

/// Local model satisfying Bell's three assumptions on every λ.
#[derive(Debug, Clone, Copy)]
pub struct BellConstrainedModel {
    triple: DetectorTriple,
    a3_keep: f64,
    b3_flip: f64,
    path: MeasurementPath,
}

impl BellConstrainedModel {
    pub fn new(triple: DetectorTriple) -> Self {
        BellConstrainedModel {
            triple,
            a3_keep: opposite_probability(triple.theta_ab()),
            b3_flip: opposite_probability(triple.theta_ac()),
            path: MeasurementPath::default(),
        }
    }

    pub fn with_path(self, path: MeasurementPath) -> Self {
        BellConstrainedModel { path, ..self }
    }

    pub fn triple(&self) -> &DetectorTriple {
        &self.triple
    }

    pub fn path(&self) -> MeasurementPath {
        self.path
    }

    pub fn record(&self, lambda: &HiddenVariable) -> SixFunctionRecord {
        bell_record(lambda.s(), lambda.u1(), lambda.u2(), self.a3_keep, self.b3_flip)
    }

    pub fn exact(&self) -> CorrelationTriple {
        let (cab, cac) = (self.triple.theta_ab().cos(), self.triple.theta_ac().cos());
        CorrelationTriple {
            e_ab: -cab,
            e_ac: -cac,
            e_bc: -cab * cac,
        }
    }
}

pub(crate) fn scenario_outcome(record: &SixFunctionRecord, pair: &SettingPair) -> OutcomePair {
    match pair.scenario {
        DetectorTriple::AB => OutcomePair::new(record.a1, record.b1),
        DetectorTriple::AC => OutcomePair::new(record.a2, record.b2),
        _ => OutcomePair::new(record.a3, record.b3),
    }
}

pub(crate) fn triple_exact(triple: &CorrelationTriple, pair: &SettingPair) -> Option<f64> {
    match pair.scenario {
        DetectorTriple::AB => Some(triple.e_ab),
        DetectorTriple::AC => Some(triple.e_ac),
        DetectorTriple::BC => Some(triple.e_bc),
        _ => None,
    }
}

impl LhvModel for BellConstrainedModel {
    fn name(&self) -> &'static str {
        "bell-constrained"
    }

    fn sample_lambda(&self, pair: &SettingPair, draws: &TrialDraws) -> Result<HiddenVariable> {
        self.triple.resolve(pair)?;
        draws.lambda(DomainTag::SHARED)
    }

    fn evaluate(&self, lambda: &HiddenVariable, pair: &SettingPair) -> Result<OutcomePair> {
        self.triple.resolve(pair)?;
        Ok(scenario_outcome(&self.record(lambda), pair))
    }

    fn exact_correlation(&self, pair: &SettingPair) -> Option<f64> {
        self.triple.resolve(pair).ok()?;
        triple_exact(&self.exact(), pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::table::compose_through_shared;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn lambda(s: Sign, u1: f64, u2: f64) -> HiddenVariable {
        HiddenVariable::new(DomainTag::SHARED, s, u1, u2).unwrap()
    }

    #[test]
    fn zero_draws_at_right_angles() {
        let rec = bell_constrained_record(&lambda(Sign::Plus, 0.0, 0.0), FRAC_PI_2, FRAC_PI_2)
            .unwrap();
        assert_eq!(
            rec,
            SixFunctionRecord {
                a1: Sign::Plus,
                b1: Sign::Minus,
                a2: Sign::Plus,
                b2: Sign::Minus,
                a3: Sign::Plus,
                b3: Sign::Minus,
            }
        );
    }

    #[test]
    fn zero_angle_saturates_threshold() {
        for &u1 in &[0.0, 0.25, 0.5, 0.999_999] {
            for s in [Sign::Plus, Sign::Minus] {
                let rec = bell_constrained_record(&lambda(s, u1, 0.3), 0.0, 1.0).unwrap();
                assert_eq!(rec.a3, s);
                assert_eq!(rec.b1, -s);
            }
        }
    }

    #[test]
    fn exact_values() {
        let e = bell_constrained_exact(0.0, 0.0).unwrap();
        assert_eq!((e.e_ab, e.e_ac, e.e_bc), (-1.0, -1.0, -1.0));
        assert!(bell_constrained_exact(FRAC_PI_2, 1.234).unwrap().e_bc.abs() < 1e-16);
        let e = bell_constrained_exact(FRAC_PI_3, 2.0 * FRAC_PI_3).unwrap();
        assert!((e.e_bc - 0.25).abs() < 1e-15);
        assert!(bell_constrained_exact(-0.5, 0.0).is_err());
    }

    #[test]
    fn derived_table_agrees_with_closed_form_and_composition() {
        for i in 0..=12 {
            for j in 0..=12 {
                let (tab, tac) = (PI * i as f64 / 12.0, PI * j as f64 / 12.0);
                let tables = bell_assumption_tables(tab, tac).unwrap();
                let closed = bell_constrained_exact(tab, tac).unwrap().e_bc;
                assert!((tables.a3_b3.expectation() - closed).abs() < 1e-14);

                // The same table through conditional independence given A₂.
                let a2_a3 = tables.a2_neg_a3.negate_second();
                let composed = compose_through_shared(&a2_a3, &tables.a2_b3).unwrap();
                for (x, y) in composed.entries().iter().zip(tables.a3_b3.entries()) {
                    assert!((x - y).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn model_rejects_foreign_settings() {
        let triple = DetectorTriple::planar_degrees(0.0, 60.0, 120.0);
        let model = BellConstrainedModel::new(triple);
        let lam = lambda(Sign::Plus, 0.0, 0.0);
        let foreign = SettingPair::new(1, triple.a, triple.c);
        assert!(model.evaluate(&lam, &foreign).is_err());
        let out = model.evaluate(&lam, &triple.pair_ab()).unwrap();
        assert_eq!(out, OutcomePair::new(Sign::Plus, Sign::Minus));
    }

    #[test]
    fn both_measurement_paths_agree() {
        let triple = DetectorTriple::planar_degrees(0.0, 45.0, 100.0);
        let functions = BellConstrainedModel::new(triple);
        let times = functions.with_path(MeasurementPath::SeparateTimes);
        let draws = TrialDraws([0.2, 0.4, 0.6, 0.8]);
        for pair in triple.pairs() {
            let lam = functions.sample_lambda(&pair, &draws).unwrap();
            assert_eq!(
                functions.evaluate(&lam, &pair).unwrap(),
                times.evaluate(&lam, &pair).unwrap()
            );
        }
        assert_eq!(times.path().scenario_label(DetectorTriple::BC), "F(λ, t3)");
    }
}
