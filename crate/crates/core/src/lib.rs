//! Simulation and verification of EPR spin-correlation experiments under
//! explicit local hidden-variable models.
//!
//! * [`geometry`] and [`hidden`] hold detector settings, the hidden variable
//!   λ and outcomes; [`model`] the deterministic outcome map all models share.
//! * [`models`] has the singlet oracle and the three local families: the
//!   model obeying Bell's assumptions, the factual model with disjoint
//!   domains, and the eight-cell partition model.
//! * [`inequality`] evaluates Bell's inequality and the bound
//!   `|E(a,b) − E(a,c)| ≤ 1 − cos θ_ab cos θ_ac`, replays Bell's derivation
//!   step by step and sweeps the angle square.
//! * [`montecarlo`] estimates correlations reproducibly.

pub mod error;
pub mod geometry;
pub mod hidden;
pub mod inequality;
pub mod model;
pub mod models;
pub mod montecarlo;

pub use error::{Error, Result};
pub use geometry::{angle_between, check_angle, DetectorTriple, Direction, ScenarioId, SettingPair};
pub use hidden::{DomainTag, HiddenVariable, OutcomePair, Sign, TrialDraws, DRAWS_PER_TRIAL};
pub use model::{evaluate_model, LhvModel, MeasurementPath};
pub use montecarlo::{
    derive_trial_draws, estimate_correlation, estimate_correlation_sharded, estimate_mean,
    estimate_pair_statistics, trial_draws, CorrelationEstimate, MeanEstimate, PairStatistics,
    SeedSpec, StreamId,
};
