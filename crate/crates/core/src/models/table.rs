use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hidden::Sign;

const TABLE_TOLERANCE: f64 = 1e-12;

/// Joint distribution of two ±1 variables with unbiased marginals.
///
/// Rows are the first variable, columns the second: `pp` is P(+, +), `pm` is
/// P(+, −) and so on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    pp: f64,
    pm: f64,
    mp: f64,
    mm: f64,
}

impl JointTable {
    pub fn new(pp: f64, pm: f64, mp: f64, mm: f64) -> Result<Self> {
        let entries = [pp, pm, mp, mm];
        if let Some(bad) = entries.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidTable(format!("entry {bad} outside [0, 1]")));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > TABLE_TOLERANCE {
            return Err(Error::InvalidTable(format!("entries sum to {total}")));
        }
        for (name, marginal) in [
            ("first = +1", pp + pm),
            ("first = -1", mp + mm),
            ("second = +1", pp + mp),
            ("second = -1", pm + mm),
        ] {
            if (marginal - 0.5).abs() > TABLE_TOLERANCE {
                return Err(Error::InvalidTable(format!("marginal P({name}) = {marginal}")));
            }
        }
        Ok(JointTable { pp, pm, mp, mm })
    }

    /// Table in which the second variable equals the first with probability
    /// `p_same`.
    pub fn from_same_probability(p_same: f64) -> Result<Self> {
        let p_same = p_same.clamp(0.0, 1.0);
        let p_opposite = 1.0 - p_same;
        JointTable::new(0.5 * p_same, 0.5 * p_opposite, 0.5 * p_opposite, 0.5 * p_same)
    }

    pub fn probability(&self, first: Sign, second: Sign) -> f64 {
        match (first, second) {
            (Sign::Plus, Sign::Plus) => self.pp,
            (Sign::Plus, Sign::Minus) => self.pm,
            (Sign::Minus, Sign::Plus) => self.mp,
            (Sign::Minus, Sign::Minus) => self.mm,
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }

    pub fn same_sign_probability(&self) -> f64 {
        self.pp + self.mm
    }

    /// E[first · second].
    pub fn expectation(&self) -> f64 {
        (self.pp + self.mm) - (self.pm + self.mp)
    }

    /// Table of (−first, second).
    pub fn negate_first(&self) -> Self {
        JointTable {
            pp: self.mp,
            pm: self.mm,
            mp: self.pp,
            mm: self.pm,
        }
    }

    /// Table of (first, −second).
    pub fn negate_second(&self) -> Self {
        JointTable {
            pp: self.pm,
            pm: self.pp,
            mp: self.mm,
            mm: self.mp,
        }
    }

    pub fn negate_second_if(&self, negate: bool) -> Self {
        if negate {
            self.negate_second()
        } else {
            *self
        }
    }

    pub fn negate_first_if(&self, negate: bool) -> Self {
        if negate {
            self.negate_first()
        } else {
            *self
        }
    }
}

/// Joint table of `(Y, Z)` given the tables of `(X, Y)` and `(X, Z)`, for Y
/// and Z conditionally independent given the shared variable X.
///
/// Splits on the value of X: P(Y = y, Z = z) = Σₓ P(x) P(y | x) P(z | x).
pub fn compose_through_shared(x_y: &JointTable, x_z: &JointTable) -> Result<JointTable> {
    let mut joint = [[0.0; 2]; 2];
    for x in [Sign::Plus, Sign::Minus] {
        let p_x = x_y.probability(x, Sign::Plus) + x_y.probability(x, Sign::Minus);
        for (i, y) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
            for (j, z) in [Sign::Plus, Sign::Minus].into_iter().enumerate() {
                let p_y = x_y.probability(x, y) / p_x;
                let p_z = x_z.probability(x, z) / p_x;
                joint[i][j] += p_x * p_y * p_z;
            }
        }
    }
    JointTable::new(joint[0][0], joint[0][1], joint[1][0], joint[1][1])
}
