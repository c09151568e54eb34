//! The realized hidden variable λ, detector outcomes and the raw uniforms a
//! trial consumes.

use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A ±1 value: a measured spin projection or one of the outcome functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `Plus` iff `u < 1/2`.
    pub fn from_draw(u: f64) -> Sign {
        if u < 0.5 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Which cell of the owning model's λ-space a hidden variable lies in: a
/// factual domain Λᵢ (tag = scenario id), a partition cell Λ̃ᵢ (tag = cell),
/// or [`DomainTag::SHARED`] for models with one undivided Λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainTag(pub u32);

impl DomainTag {
    pub const SHARED: DomainTag = DomainTag(0);
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == DomainTag::SHARED {
            f.write_str("Λ")
        } else {
            write!(f, "#{}", self.0)
        }
    }
}

/// λ = (domain tag, sign s, u1, u2) with `u1, u2 ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenVariable {
    tag: DomainTag,
    s: Sign,
    u1: f64,
    u2: f64,
}

impl HiddenVariable {
    pub fn new(tag: DomainTag, s: Sign, u1: f64, u2: f64) -> Result<Self> {
        for (name, u) in [("u1", u1), ("u2", u2)] {
            if !(0.0..1.0).contains(&u) {
                return Err(Error::InvalidLambda(format!("{name} = {u} is outside [0, 1)")));
            }
        }
        Ok(HiddenVariable { tag, s, u1, u2 })
    }

    pub fn tag(&self) -> DomainTag {
        self.tag
    }

    pub fn s(&self) -> Sign {
        self.s
    }

    pub fn u1(&self) -> f64 {
        self.u1
    }

    pub fn u2(&self) -> f64 {
        self.u2
    }

    pub fn with_tag(self, tag: DomainTag) -> Self {
        HiddenVariable { tag, ..self }
    }
}

/// Results of Alice's and Bob's detectors in one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomePair {
    pub alice: Sign,
    pub bob: Sign,
}

impl OutcomePair {
    pub fn new(alice: Sign, bob: Sign) -> Self {
        OutcomePair { alice, bob }
    }

    pub fn product(&self) -> i64 {
        (self.alice * self.bob).value()
    }
}

/// Number of unit uniforms one trial consumes.
pub const DRAWS_PER_TRIAL: usize = 4;

/// The uniforms drawn for one trial, each in `[0, 1)`.
///
/// By convention slot 0 decides s, slots 1 and 2 become u1 and u2, and slot 3
/// selects a domain or partition cell where a model needs one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialDraws(pub [f64; DRAWS_PER_TRIAL]);

impl TrialDraws {
    pub fn sign(&self) -> Sign {
        Sign::from_draw(self.0[0])
    }

    pub fn u1(&self) -> f64 {
        self.0[1]
    }

    pub fn u2(&self) -> f64 {
        self.0[2]
    }

    pub fn selector(&self) -> f64 {
        self.0[3]
    }

    /// λ built from slots 0..=2.
    pub fn lambda(&self, tag: DomainTag) -> Result<HiddenVariable> {
        HiddenVariable::new(tag, self.sign(), self.u1(), self.u2())
    }
}
