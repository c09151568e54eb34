use thiserror::Error;

use crate::geometry::ScenarioId;
use crate::hidden::DomainTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// λ belongs to the domain of a different scenario than the settings it
    /// is evaluated against.
    #[error("hidden variable from domain {domain} evaluated against scenario {scenario}")]
    SettingMismatch { domain: DomainTag, scenario: ScenarioId },

    #[error("scenario {0} is not declared by this model")]
    UnknownScenario(ScenarioId),

    #[error("settings given for scenario {0} differ from the ones the model declares")]
    UndeclaredSettings(ScenarioId),

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{what} = {value} is not a correlation in [-1, 1]")]
    Range { what: &'static str, value: f64 },

    #[error("partition cell {0} does not exist (cells are numbered 1..=8)")]
    InvalidCell(u32),

    #[error("invalid measures: {0}")]
    InvalidMeasures(String),

    #[error("invalid joint table: {0}")]
    InvalidTable(String),

    #[error("invalid hidden variable: {0}")]
    InvalidLambda(String),

    #[error("direction ({x}, {y}, {z}) cannot be normalized")]
    DegenerateDirection { x: f64, y: f64, z: f64 },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("grid must have at least 2 nodes per axis, got {0}")]
    InvalidGrid(usize),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}
