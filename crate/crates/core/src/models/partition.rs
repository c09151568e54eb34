//! The eight-cell partition of Λ by sign relations, used to bound
//! |E(a, b) − E(a, c)| without assuming any relation between the functions.
//!
//! Inside every cell the two measured experiments keep their singlet tables:
//! (A₁, B₁) at θ_ab and (A₂, B₂) at θ_ac. The cell's three relations then
//! fix A₂ from A₁, A₃ from B₁ and B₃ from B₂. For the second cell this gives
//! exactly the (A₂, −A₃) and (A₂, −B₃) tables with the sin²/cos² layout of
//! the first experiment, and in every cell
//! `|A₁B₁ − A₂B₂| = 1 − r·A₃B₃` pointwise with `E_cell[r·A₃B₃] = cos θ_ab cos θ_ac`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{check_angle, DetectorTriple, SettingPair};
use crate::hidden::{DomainTag, HiddenVariable, OutcomePair, Sign, TrialDraws};
use crate::model::LhvModel;

use super::bell::{scenario_outcome, triple_exact, CorrelationTriple};
use super::measure::{pick_by_measure, validate_measures};
use super::qm::{opposite_probability, qm_joint_table};
use super::record::{Cell, SixFunctionRecord};
use super::table::{compose_through_shared, JointTable};

/// Measures Z(Λ̃₁)…Z(Λ̃₈), summing to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 8]", into = "[f64; 8]")]
pub struct EightPartition {
    measures: [f64; 8],
}

impl EightPartition {
    pub fn new(measures: [f64; 8]) -> Result<Self> {
        validate_measures(&measures)?;
        Ok(EightPartition { measures })
    }

    pub fn uniform() -> Self {
        EightPartition {
            measures: [0.125; 8],
        }
    }

    /// All of Λ in one cell.
    pub fn single(cell: Cell) -> Self {
        let mut measures = [0.0; 8];
        measures[cell.index() as usize - 1] = 1.0;
        EightPartition { measures }
    }

    pub fn measures(&self) -> &[f64; 8] {
        &self.measures
    }

    pub fn measure(&self, cell: Cell) -> f64 {
        self.measures[cell.index() as usize - 1]
    }

    pub fn pick(&self, u: f64) -> Cell {
        Cell::ALL[pick_by_measure(&self.measures, u)]
    }
}

impl TryFrom<[f64; 8]> for EightPartition {
    type Error = crate::Error;

    fn try_from(measures: [f64; 8]) -> Result<Self> {
        EightPartition::new(measures)
    }
}

impl From<EightPartition> for [f64; 8] {
    fn from(p: EightPartition) -> [f64; 8] {
        p.measures
    }
}

fn cell_record(cell: Cell, s: Sign, u1: f64, u2: f64, b1_flip: f64, b2_flip: f64) -> SixFunctionRecord {
    let a1 = s;
    let b1 = if u1 < b1_flip { -a1 } else { a1 };
    let a2 = cell.a2_from_a1() * a1;
    let b2 = if u2 < b2_flip { -a2 } else { a2 };
    SixFunctionRecord {
        a1,
        b1,
        a2,
        b2,
        a3: cell.a3_from_b1() * b1,
        b3: cell.b3_from_b2() * b2,
    }
}

/// The six outcome functions at `lambda` when λ lies in `cell`.
///
/// `A₁ = s` and `B₁ = −A₁` iff `u1 < cos²(θ_ab/2)`; `A₂ = ±A₁` per the cell
/// and `B₂ = −A₂` iff `u2 < cos²(θ_ac/2)`; A₃ and B₃ follow from B₁ and B₂
/// through the cell's relations. Cell 1 coincides with the Bell-constrained
/// record.
pub fn eight_partition_record(
    cell: Cell,
    lambda: &HiddenVariable,
    theta_ab: f64,
    theta_ac: f64,
) -> Result<SixFunctionRecord> {
    let theta_ab = check_angle(theta_ab)?;
    let theta_ac = check_angle(theta_ac)?;
    Ok(cell_record(
        cell,
        lambda.s(),
        lambda.u1(),
        lambda.u2(),
        opposite_probability(theta_ab),
        opposite_probability(theta_ac),
    ))
}

/// Joint tables of one cell, derived from the two measured experiments and
/// the cell's sign relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellTables {
    pub cell: Cell,
    pub a1_b1: JointTable,
    pub a2_b2: JointTable,
    pub a2_a3: JointTable,
    pub a2_b3: JointTable,
    pub a3_b3: JointTable,
}

pub fn cell_tables(cell: Cell, theta_ab: f64, theta_ac: f64) -> Result<CellTables> {
    let a1_b1 = qm_joint_table(theta_ab)?;
    let a2_b2 = qm_joint_table(theta_ac)?;
    let a2_a3 = a1_b1
        .negate_first_if(cell.a2_from_a1() == Sign::Minus)
        .negate_second_if(cell.a3_from_b1() == Sign::Minus);
    let a2_b3 = a2_b2.negate_second_if(cell.b3_from_b2() == Sign::Minus);
    let a3_b3 = compose_through_shared(&a2_a3, &a2_b3)?;
    Ok(CellTables {
        cell,
        a1_b1,
        a2_b2,
        a2_a3,
        a2_b3,
        a3_b3,
    })
}

/// Per-cell averages behind the partition bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellBound {
    /// E_cell[A₁B₁ − A₂B₂].
    pub difference: f64,
    /// E_cell[1 − r·A₃B₃], the cell's upper bound on |difference|.
    pub bound: f64,
}

impl CellTables {
    pub fn bound(&self) -> CellBound {
        let r = self.cell.bound_sign().value() as f64;
        CellBound {
            difference: self.a1_b1.expectation() - self.a2_b2.expectation(),
            bound: 1.0 - r * self.a3_b3.expectation(),
        }
    }
}

pub fn cell_exact_bound(cell: Cell, theta_ab: f64, theta_ac: f64) -> Result<CellBound> {
    Ok(cell_tables(cell, theta_ab, theta_ac)?.bound())
}

/// The pointwise bound `1 − r·A₃B₃ ∈ {0, 2}` of `|A₁B₁ − A₂B₂|` in the
/// record's own cell.
pub fn cell_bound_integrand(record: &SixFunctionRecord) -> i64 {
    1 - record.cell().bound_sign().value() * (record.a3 * record.b3).value()
}

/// Σᵢ Z(Λ̃ᵢ) E_cell[1 − r·A₃B₃], which is 1 − cos θ_ab cos θ_ac for every
/// valid partition.
pub fn eight_partition_aggregate(partition: &EightPartition, theta_ab: f64, theta_ac: f64) -> Result<f64> {
    let mut total = 0.0;
    for cell in Cell::ALL {
        total += partition.measure(cell) * cell_exact_bound(cell, theta_ab, theta_ac)?.bound;
    }
    Ok(total)
}

/// λ drawn from the partition: the cell by its measure, then (s, u1, u2).
#[derive(Debug, Clone, Copy)]
pub struct EightPartitionModel {
    triple: DetectorTriple,
    partition: EightPartition,
    b1_flip: f64,
    b2_flip: f64,
    exact: CorrelationTriple,
}

impl EightPartitionModel {
    pub fn new(triple: DetectorTriple, partition: EightPartition) -> Result<Self> {
        let (theta_ab, theta_ac) = (triple.theta_ab(), triple.theta_ac());
        let mut e_bc = 0.0;
        for cell in Cell::ALL {
            e_bc += partition.measure(cell) * cell_tables(cell, theta_ab, theta_ac)?.a3_b3.expectation();
        }
        Ok(EightPartitionModel {
            triple,
            partition,
            b1_flip: opposite_probability(theta_ab),
            b2_flip: opposite_probability(theta_ac),
            exact: CorrelationTriple {
                e_ab: -theta_ab.cos(),
                e_ac: -theta_ac.cos(),
                e_bc,
            },
        })
    }

    pub fn triple(&self) -> &DetectorTriple {
        &self.triple
    }

    pub fn partition(&self) -> &EightPartition {
        &self.partition
    }

    pub fn exact(&self) -> CorrelationTriple {
        self.exact
    }

    pub fn record(&self, lambda: &HiddenVariable) -> Result<SixFunctionRecord> {
        let cell = Cell::new(lambda.tag().0)?;
        Ok(cell_record(cell, lambda.s(), lambda.u1(), lambda.u2(), self.b1_flip, self.b2_flip))
    }

    /// λ from the partition's measure, independent of any scenario.
    pub fn sample(&self, draws: &TrialDraws) -> Result<HiddenVariable> {
        let cell = self.partition.pick(draws.selector());
        draws.lambda(DomainTag(cell.index()))
    }
}

impl LhvModel for EightPartitionModel {
    fn name(&self) -> &'static str {
        "eight-partition"
    }

    fn sample_lambda(&self, pair: &SettingPair, draws: &TrialDraws) -> Result<HiddenVariable> {
        self.triple.resolve(pair)?;
        self.sample(draws)
    }

    fn evaluate(&self, lambda: &HiddenVariable, pair: &SettingPair) -> Result<OutcomePair> {
        self.triple.resolve(pair)?;
        Ok(scenario_outcome(&self.record(lambda)?, pair))
    }

    fn exact_correlation(&self, pair: &SettingPair) -> Option<f64> {
        self.triple.resolve(pair).ok()?;
        triple_exact(&self.exact, pair)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::bell::{bell_assumption_tables, bell_constrained_record};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn cell(i: u32) -> Cell {
        Cell::new(i).unwrap()
    }

    #[test]
    fn cell_one_is_the_bell_record() {
        for &(s, u1, u2) in &[(Sign::Plus, 0.0, 0.0), (Sign::Minus, 0.7, 0.2), (Sign::Plus, 0.4, 0.9)] {
            let lam = HiddenVariable::new(DomainTag(1), s, u1, u2).unwrap();
            assert_eq!(
                eight_partition_record(cell(1), &lam, 1.0, 2.0).unwrap(),
                bell_constrained_record(&lam, 1.0, 2.0).unwrap()
            );
        }
    }

    #[test]
    fn records_obey_their_cell() {
        let lam = HiddenVariable::new(DomainTag(0), Sign::Minus, 0.3, 0.6).unwrap();
        for c in Cell::ALL {
            let rec = eight_partition_record(c, &lam, 0.8, 2.4).unwrap();
            assert_eq!(rec.cell(), c);
        }
    }

    #[test]
    fn second_cell_reproduces_its_tables() {
        // (A₂, −A₃) and (A₂, −B₃) carry the singlet layout: ½ sin² on the
        // diagonal.
        let (tab, tac) = (0.9, 2.1);
        let t = cell_tables(cell(2), tab, tac).unwrap();
        let expect_ab = qm_joint_table(tab).unwrap();
        let expect_ac = qm_joint_table(tac).unwrap();
        assert_eq!(t.a2_a3.negate_second(), expect_ab);
        assert_eq!(t.a2_b3.negate_second(), expect_ac);
        assert!((t.a3_b3.expectation() - tab.cos() * tac.cos()).abs() < 1e-15);
        let b = t.bound();
        assert!((b.bound - (1.0 - tab.cos() * tac.cos())).abs() < 1e-15);
    }

    #[test]
    fn cell_one_tables_match_bell_tables() {
        let t = cell_tables(cell(1), 0.7, 1.9).unwrap();
        let bell = bell_assumption_tables(0.7, 1.9).unwrap();
        for (x, y) in t.a3_b3.entries().iter().zip(bell.a3_b3.entries()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn every_cell_bound_is_universal() {
        for c in Cell::ALL {
            for i in 0..=8 {
                for j in 0..=8 {
                    let (tab, tac) = (PI * i as f64 / 8.0, PI * j as f64 / 8.0);
                    let b = cell_exact_bound(c, tab, tac).unwrap();
                    let rhs = 1.0 - tab.cos() * tac.cos();
                    assert!((b.bound - rhs).abs() < 1e-14, "{c} {tab} {tac}");
                    assert!(b.difference.abs() <= b.bound + 1e-12);
                }
            }
        }
    }

    #[test]
    fn aggregate_values() {
        let uniform = EightPartition::uniform();
        assert!((eight_partition_aggregate(&uniform, FRAC_PI_2, FRAC_PI_2).unwrap() - 1.0).abs() < 1e-15);
        assert!(eight_partition_aggregate(&uniform, 0.0, 0.0).unwrap().abs() < 1e-15);
        let first = EightPartition::single(cell(1));
        let v = eight_partition_aggregate(&first, FRAC_PI_3, FRAC_PI_3).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
    }

    #[test]
    fn partition_validation() {
        assert!(EightPartition::new([0.125; 8]).is_ok());
        assert!(EightPartition::new([0.1; 8]).is_err());
        let mut negative = [0.125; 8];
        negative[0] = -0.125;
        negative[1] = 0.375;
        assert!(EightPartition::new(negative).is_err());
    }

    #[test]
    fn model_tags_lambda_with_its_cell() {
        let triple = DetectorTriple::planar_degrees(0.0, 30.0, 75.0);
        let model = EightPartitionModel::new(triple, EightPartition::single(cell(6))).unwrap();
        let lam = model.sample_lambda(&triple.pair_bc(), &TrialDraws([0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(lam.tag(), DomainTag(6));
        assert_eq!(model.record(&lam).unwrap().cell(), cell(6));
        let bad = lam.with_tag(DomainTag(9));
        assert!(model.evaluate(&bad, &triple.pair_ab()).is_err());
    }
}
