//! Step-by-step replay of Bell's derivation on a weighted sample of outcome
//! records.
//!
//! Each substitution step replaces one integrand by another. The replay
//! checks two things separately: whether the two integrands agree record by
//! record (pure arithmetic on the signs), and whether the sample satisfies
//! the identification the step relies on (read off the sign relations). The
//! two must coincide.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::InequalityReport;
use crate::error::{Error, Result};
use crate::models::{SignRelations, SixFunctionRecord};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Assumption {
    /// `A₁(a, λ) = A₂(a, λ)`
    First,
    /// `B₁(b, λ) = −A₃(b, λ)`
    Second,
    /// `B₂(c, λ) = B₃(c, λ)`
    Third,
}

impl Assumption {
    pub const ALL: [Assumption; 3] = [Assumption::First, Assumption::Second, Assumption::Third];

    pub fn ordinal(self) -> u32 {
        self as u32 + 1
    }

    pub fn holds(self, relations: &SignRelations) -> bool {
        match self {
            Assumption::First => relations.a1_eq_a2,
            Assumption::Second => relations.b1_eq_neg_a3,
            Assumption::Third => relations.b2_eq_b3,
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Assumption::First => "A₁ = A₂",
            Assumption::Second => "B₁ = −A₃",
            Assumption::Third => "B₂ = B₃",
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Assumption::First => "first",
            Assumption::Second => "second",
            Assumption::Third => "third",
        };
        write!(f, "{name} assumption ({})", self.statement())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionViolation {
    pub assumption: Assumption,
    /// Index of the first record where it fails.
    pub record: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub label: String,
    /// The weighted integral this step produces.
    pub value: f64,
    /// The identification this step substitutes, if any.
    pub assumption: Option<Assumption>,
    /// Whether every record satisfies `assumption`.
    pub assumption_holds: bool,
    /// Whether the new integrand equals (or bounds) the previous one on every
    /// record.
    pub integrand_holds: bool,
    /// Whether `|E(a,b) − E(a,c)| ≤ value` numerically.
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub samples: usize,
    /// `|∫ (A₁B₁ − A₂B₂) ρ|`.
    pub lhs: f64,
    pub steps: Vec<DerivationStep>,
    /// The first failing assumption, in derivation order.
    pub violation: Option<AssumptionViolation>,
    /// `|E(a,b) − E(a,c)|` against `1 + E(b,c)` on the sample.
    pub conclusion: InequalityReport,
}

impl DerivationReport {
    pub fn all_assumptions_hold(&self) -> bool {
        self.violation.is_none()
    }

    /// Every step's integrand check agrees with its assumption check.
    pub fn consistent(&self) -> bool {
        self.steps.iter().all(|s| s.assumption.is_none() || s.integrand_holds == s.assumption_holds)
    }
}

fn check_weights(records: &[SixFunctionRecord], weights: &[f64]) -> Result<()> {
    if records.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} records but {} weights",
            records.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::InvalidWeights(format!("weight {w} is not a nonnegative number")));
    }
    let total: f64 = weights.iter().sum();
    if !weights.is_empty() && (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

pub fn replay_bell_derivation(records: &[SixFunctionRecord], weights: &[f64]) -> Result<DerivationReport> {
    check_weights(records, weights)?;

    let v = |s: crate::hidden::Sign| s.value();
    let integrate = |f: &dyn Fn(&SixFunctionRecord) -> i64| -> f64 {
        records.iter().zip(weights).map(|(r, w)| w * f(r) as f64).sum()
    };
    let pointwise = |f: &dyn Fn(&SixFunctionRecord) -> bool| records.iter().all(f);

    let start = |r: &SixFunctionRecord| v(r.a1) * v(r.b1) - v(r.a2) * v(r.b2);
    let after_first = |r: &SixFunctionRecord| v(r.a1) * v(r.b1) * (1 - v(r.b1) * v(r.b2));
    let eq3 = |r: &SixFunctionRecord| 1 - v(r.b1) * v(r.b2);
    let eq4 = |r: &SixFunctionRecord| 1 + v(r.a3) * v(r.b2);
    let eq5 = |r: &SixFunctionRecord| 1 + v(r.a3) * v(r.b3);

    let lhs = integrate(&start).abs();
    let total_weight: f64 = weights.iter().sum();
    let e_bc = integrate(&|r| v(r.a3) * v(r.b3));

    let assumption_holds = |a: Assumption| pointwise(&|r| a.holds(&r.relations()));
    let step = |label: &str, value: f64, assumption: Option<Assumption>, integrand_holds: bool| DerivationStep {
        label: label.to_string(),
        value,
        assumption,
        assumption_holds: assumption.map_or(true, assumption_holds),
        integrand_holds,
        bound_holds: InequalityReport::new(lhs, value).satisfied,
    };

    let steps = vec![
        step(
            "|∫ A₁B₁ [1 − B₁B₂] ρ|",
            integrate(&after_first).abs(),
            Some(Assumption::First),
            pointwise(&|r| start(r) == after_first(r)),
        ),
        step(
            "∫ [1 − B₁B₂] ρ",
            integrate(&eq3),
            None,
            pointwise(&|r| after_first(r).abs() <= eq3(r)),
        ),
        step(
            "∫ [1 + A₃B₂] ρ",
            integrate(&eq4),
            Some(Assumption::Second),
            pointwise(&|r| eq3(r) == eq4(r)),
        ),
        step(
            "∫ [1 + A₃B₃] ρ",
            integrate(&eq5),
            Some(Assumption::Third),
            pointwise(&|r| eq4(r) == eq5(r)),
        ),
        step("1 + E(b,c)", total_weight + e_bc, None, true),
    ];

    let violation = Assumption::ALL.iter().find_map(|&a| {
        records
            .iter()
            .position(|r| !a.holds(&r.relations()))
            .map(|record| AssumptionViolation { assumption: a, record })
    });

    Ok(DerivationReport {
        samples: records.len(),
        lhs,
        steps,
        violation,
        conclusion: InequalityReport::new(lhs, total_weight + e_bc),
    })
}

/// Replay with equal weight on every record.
pub fn replay_bell_derivation_uniform(records: &[SixFunctionRecord]) -> Result<DerivationReport> {
    let w = 1.0 / records.len().max(1) as f64;
    replay_bell_derivation(records, &vec![w; records.len()])
}
