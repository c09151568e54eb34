use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hidden::Sign;

/// Values of the six outcome functions at one λ:
/// `A₁(a), B₁(b)` of scenario 1, `A₂(a), B₂(c)` of scenario 2 and
/// `A₃(b), B₃(c)` of scenario 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SixFunctionRecord {
    pub a1: Sign,
    pub b1: Sign,
    pub a2: Sign,
    pub b2: Sign,
    pub a3: Sign,
    pub b3: Sign,
}

impl SixFunctionRecord {
    pub fn relations(&self) -> SignRelations {
        SignRelations {
            a1_eq_a2: self.a1 == self.a2,
            b1_eq_neg_a3: self.b1 == -self.a3,
            b2_eq_b3: self.b2 == self.b3,
        }
    }

    /// The partition cell Λ̃ᵢ this record falls in.
    pub fn cell(&self) -> Cell {
        self.relations().cell()
    }
}

/// Which of Bell's three identifications `A₁ = A₂`, `B₁ = −A₃`, `B₂ = B₃`
/// hold at one λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignRelations {
    pub a1_eq_a2: bool,
    pub b1_eq_neg_a3: bool,
    pub b2_eq_b3: bool,
}

impl SignRelations {
    pub fn satisfies_bell_assumptions(&self) -> bool {
        self.a1_eq_a2 && self.b1_eq_neg_a3 && self.b2_eq_b3
    }

    pub fn cell(&self) -> Cell {
        let index = 1
            + 4 * u8::from(!self.a1_eq_a2)
            + 2 * u8::from(!self.b1_eq_neg_a3)
            + u8::from(!self.b2_eq_b3);
        Cell(index)
    }
}

/// One of the eight cells Λ̃₁…Λ̃₈ that split Λ by the sign relations among
/// the six outcome functions.
///
/// | cell | A₁ vs A₂ | B₁ vs A₃ | B₂ vs B₃ |
/// |------|----------|----------|----------|
/// | 1    | =        | = −      | =        |
/// | 2    | =        | = −      | = −      |
/// | 3    | =        | =        | =        |
/// | 4    | =        | =        | = −      |
/// | 5    | = −      | = −      | =        |
/// | 6    | = −      | = −      | = −      |
/// | 7    | = −      | =        | =        |
/// | 8    | = −      | =        | = −      |
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Cell(u8);

impl Cell {
    pub const ALL: [Cell; 8] = [
        Cell(1),
        Cell(2),
        Cell(3),
        Cell(4),
        Cell(5),
        Cell(6),
        Cell(7),
        Cell(8),
    ];

    pub fn new(index: u32) -> Result<Self> {
        match index {
            1..=8 => Ok(Cell(index as u8)),
            _ => Err(Error::InvalidCell(index)),
        }
    }

    pub fn index(self) -> u32 {
        u32::from(self.0)
    }

    pub fn relations(self) -> SignRelations {
        let bits = self.0 - 1;
        SignRelations {
            a1_eq_a2: bits & 4 == 0,
            b1_eq_neg_a3: bits & 2 == 0,
            b2_eq_b3: bits & 1 == 0,
        }
    }

    /// Sign `r` with `A₂ = r·A₁`.
    pub(crate) fn a2_from_a1(self) -> Sign {
        if self.relations().a1_eq_a2 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Sign `r` with `A₃ = r·B₁`.
    pub(crate) fn a3_from_b1(self) -> Sign {
        if self.relations().b1_eq_neg_a3 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Sign `r` with `B₃ = r·B₂`.
    pub(crate) fn b3_from_b2(self) -> Sign {
        if self.relations().b2_eq_b3 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Sign `r` for which `|A₁B₁ − A₂B₂| = 1 − r·A₃B₃` holds pointwise in
    /// this cell.
    pub fn bound_sign(self) -> Sign {
        // A₁B₁ − A₂B₂ = A₁(ρ₁A₃ − ρ₀ρ₂B₃), so r = ρ₀ρ₁ρ₂ with the three
        // relation signs below (ρ₁ = B₁/A₃ = A₃/B₁).
        self.a2_from_a1() * self.a3_from_b1() * self.b3_from_b2()
    }
}

impl TryFrom<u32> for Cell {
    type Error = Error;

    fn try_from(index: u32) -> Result<Self> {
        Cell::new(index)
    }
}

impl From<Cell> for u32 {
    fn from(cell: Cell) -> u32 {
        cell.index()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ̃{}", self.0)
    }
}
