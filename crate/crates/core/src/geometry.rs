//! Detector orientations and the setting pairs that make up a measurement
//! scenario.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack tolerated when an angle is checked against `[0, π]`.
pub const ANGLE_SLACK: f64 = 1e-9;

/// Unit 3-vector giving the orientation of a detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    pub const X: Direction = Direction { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Direction = Direction { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Direction = Direction { x: 0.0, y: 0.0, z: 1.0 };

    /// Normalizes `(x, y, z)`. Fails on zero or non-finite input.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::DegenerateDirection { x, y, z });
        }
        Ok(Direction {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Direction in the x-y plane at azimuth `phi` (radians) from x̂.
    pub fn planar(phi: f64) -> Self {
        let (sin, cos) = phi.sin_cos();
        Direction {
            x: cos,
            y: sin,
            z: 0.0,
        }
    }

    pub fn planar_degrees(phi_deg: f64) -> Self {
        Self::planar(phi_deg.to_radians())
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Azimuth of the projection onto the x-y plane, in radians.
    pub fn azimuth(&self) -> f64 {
        self.y.atan2(self.x)
    }

    fn norm_of(x: f64, y: f64, z: f64) -> f64 {
        (x * x + y * y + z * z).sqrt()
    }
}

impl Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        Direction {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// Angle between two detector orientations, in `[0, π]`.
///
/// Uses `2·atan2(|d1 − d2|, |d1 + d2|)`, which equals `arccos(d1·d2)` but
/// stays accurate to machine precision next to 0 and π where `arccos` loses
/// half of the digits.
pub fn angle_between(d1: &Direction, d2: &Direction) -> f64 {
    let diff = Direction::norm_of(d1.x - d2.x, d1.y - d2.y, d1.z - d2.z);
    let sum = Direction::norm_of(d1.x + d2.x, d1.y + d2.y, d1.z + d2.z);
    (2.0 * diff.atan2(sum)).clamp(0.0, PI)
}

/// Checks that `theta` lies in `[0, π]` up to [`ANGLE_SLACK`] and clamps it.
pub fn check_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() || !(-ANGLE_SLACK..=PI + ANGLE_SLACK).contains(&theta) {
        return Err(Error::domain("theta", theta, "[0, π]"));
    }
    Ok(theta.clamp(0.0, PI))
}

/// Identifier of one measurement scenario of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScenarioId(pub u32);

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The two detector settings of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingPair {
    pub scenario: ScenarioId,
    pub alice: Direction,
    pub bob: Direction,
}

impl SettingPair {
    pub fn new(scenario: u32, alice: Direction, bob: Direction) -> Self {
        SettingPair {
            scenario: ScenarioId(scenario),
            alice,
            bob,
        }
    }

    pub fn angle(&self) -> f64 {
        angle_between(&self.alice, &self.bob)
    }

    pub(crate) fn same_settings(&self, other: &SettingPair) -> bool {
        self.alice == other.alice && self.bob == other.bob
    }
}

/// Three detector orientations `a`, `b`, `c` and their three scenarios:
/// 1 = (a, b), 2 = (a, c), 3 = (b, c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorTriple {
    pub a: Direction,
    pub b: Direction,
    pub c: Direction,
}

impl DetectorTriple {
    pub const AB: ScenarioId = ScenarioId(1);
    pub const AC: ScenarioId = ScenarioId(2);
    pub const BC: ScenarioId = ScenarioId(3);

    pub fn new(a: Direction, b: Direction, c: Direction) -> Self {
        DetectorTriple { a, b, c }
    }

    /// Coplanar triple with `b` at `theta_ab` and `c` at `theta_ac` from `a`,
    /// both measured the same way round.
    pub fn planar(theta_ab: f64, theta_ac: f64) -> Self {
        DetectorTriple {
            a: Direction::planar(0.0),
            b: Direction::planar(theta_ab),
            c: Direction::planar(theta_ac),
        }
    }

    pub fn planar_degrees(a_deg: f64, b_deg: f64, c_deg: f64) -> Self {
        DetectorTriple {
            a: Direction::planar_degrees(a_deg),
            b: Direction::planar_degrees(b_deg),
            c: Direction::planar_degrees(c_deg),
        }
    }

    pub fn pair_ab(&self) -> SettingPair {
        SettingPair::new(Self::AB.0, self.a, self.b)
    }

    pub fn pair_ac(&self) -> SettingPair {
        SettingPair::new(Self::AC.0, self.a, self.c)
    }

    pub fn pair_bc(&self) -> SettingPair {
        SettingPair::new(Self::BC.0, self.b, self.c)
    }

    pub fn pairs(&self) -> [SettingPair; 3] {
        [self.pair_ab(), self.pair_ac(), self.pair_bc()]
    }

    pub fn pair(&self, scenario: ScenarioId) -> Option<SettingPair> {
        match scenario {
            Self::AB => Some(self.pair_ab()),
            Self::AC => Some(self.pair_ac()),
            Self::BC => Some(self.pair_bc()),
            _ => None,
        }
    }

    pub fn theta_ab(&self) -> f64 {
        angle_between(&self.a, &self.b)
    }

    pub fn theta_ac(&self) -> f64 {
        angle_between(&self.a, &self.c)
    }

    pub fn theta_bc(&self) -> f64 {
        angle_between(&self.b, &self.c)
    }

    /// Recovers the triple from scenarios 1, 2 and 3 when they have the
    /// (a, b), (a, c), (b, c) shape. Other scenario ids are ignored.
    pub fn from_pairs(pairs: &[SettingPair]) -> Option<Self> {
        let find = |id: ScenarioId| pairs.iter().find(|p| p.scenario == id);
        let (ab, ac, bc) = (find(Self::AB)?, find(Self::AC)?, find(Self::BC)?);
        let consistent = ab.alice == ac.alice && ab.bob == bc.alice && ac.bob == bc.bob;
        consistent.then(|| DetectorTriple::new(ab.alice, ab.bob, ac.bob))
    }

    /// Returns the declared pair for `pair.scenario`, checking the settings.
    pub(crate) fn resolve(&self, pair: &SettingPair) -> Result<SettingPair> {
        let declared = self
            .pair(pair.scenario)
            .ok_or(Error::UnknownScenario(pair.scenario))?;
        if !declared.same_settings(pair) {
            return Err(Error::UndeclaredSettings(pair.scenario));
        }
        Ok(declared)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn axis_angles() {
        assert_eq!(angle_between(&Direction::X, &Direction::X), 0.0);
        assert_eq!(angle_between(&Direction::X, &-Direction::X), PI);
        assert!((angle_between(&Direction::X, &Direction::Y) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn constructor_normalizes() {
        let d = Direction::new(3.0, -4.0, 12.0).unwrap();
        assert!((d.dot(&d) - 1.0).abs() < 1e-12);
        assert!((d.x() - 3.0 / 13.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_vectors_rejected() {
        assert!(Direction::new(0.0, 0.0, 0.0).is_err());
        assert!(Direction::new(f64::NAN, 1.0, 0.0).is_err());
        assert!(Direction::new(f64::INFINITY, 1.0, 0.0).is_err());
    }

    #[test]
    fn angle_domain_slack() {
        assert_eq!(check_angle(-1e-10).unwrap(), 0.0);
        assert_eq!(check_angle(PI + 1e-10).unwrap(), PI);
        assert!(check_angle(-1e-6).is_err());
        assert!(check_angle(PI + 1e-6).is_err());
        assert!(check_angle(f64::NAN).is_err());
    }

    #[test]
    fn triple_round_trips_through_pairs() {
        let t = DetectorTriple::planar_degrees(0.0, 60.0, 120.0);
        assert_eq!(DetectorTriple::from_pairs(&t.pairs()), Some(t));
        assert!((t.theta_ab() - PI / 3.0).abs() < 1e-15);
        assert!((t.theta_ac() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((t.theta_bc() - PI / 3.0).abs() < 1e-15);

        let mut shuffled = t.pairs();
        shuffled[2].alice = t.a;
        assert_eq!(DetectorTriple::from_pairs(&shuffled), None);
    }

    #[test]
    fn resolve_checks_settings() {
        let t = DetectorTriple::planar_degrees(0.0, 60.0, 120.0);
        assert!(t.resolve(&t.pair_ac()).is_ok());
        let wrong = SettingPair::new(2, t.a, t.b);
        assert_eq!(t.resolve(&wrong), Err(Error::UndeclaredSettings(ScenarioId(2))));
        let unknown = SettingPair::new(7, t.a, t.b);
        assert_eq!(t.resolve(&unknown), Err(Error::UnknownScenario(ScenarioId(7))));
    }

    fn unit() -> impl Strategy<Value = Direction> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("non-degenerate", |(x, y, z)| x * x + y * y + z * z > 1e-6)
            .prop_map(|(x, y, z)| Direction::new(x, y, z).unwrap())
    }

    proptest! {
        #[test]
        fn unit_norm(d in unit()) {
            prop_assert!((d.dot(&d) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn angle_is_symmetric(d1 in unit(), d2 in unit()) {
            prop_assert_eq!(angle_between(&d1, &d2), angle_between(&d2, &d1));
        }

        #[test]
        fn self_and_antipode(d in unit()) {
            prop_assert!(angle_between(&d, &d).abs() < 1e-12);
            prop_assert!((angle_between(&d, &-d) - PI).abs() < 1e-12);
        }

        #[test]
        fn agrees_with_arccos(d1 in unit(), d2 in unit()) {
            let reference = d1.dot(&d2).clamp(-1.0, 1.0).acos();
            prop_assert!((angle_between(&d1, &d2) - reference).abs() < 1e-7);
        }
    }
}
