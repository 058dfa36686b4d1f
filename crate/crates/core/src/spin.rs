//! Detector settings, spin states and the `±1` measurement maps.
//!
//! A unit setting `a` is carried by a [`DirectionPair`] `(n_r, n_d)` and
//! turned into the detector element `D = ξ(n_r) + ξ(n_d) ε₊`. In the
//! positively oriented basis its coefficients are
//! `(0, n_r.z, n_r.y, n_r.x, n_d.x, n_d.y, n_d.z, 0)`.

use core::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::algebra::{Multivector, Orientation};
use crate::conformal::{GeometryError, Quaternion, Vec3, DEGENERACY_TOL};

/// Tolerance on the unit length and planarity of external settings.
pub const UNIT_TOL: f64 = 1e-9;

/// Below this residual the general-mode Gram-Schmidt switches reference axis.
const GRAM_SCHMIDT_FLOOR: f64 = 1e-6;

/// Which detector of a four-particle run a GHZ-role pair feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GhzRole {
    /// First detector.
    A,
    /// Second detector.
    B,
    /// Third detector.
    C,
    /// Fourth detector.
    D,
}

impl GhzRole {
    /// Roles in detector order.
    pub const ALL: [GhzRole; 4] = [GhzRole::A, GhzRole::B, GhzRole::C, GhzRole::D];

    /// Signs applied to `(a_x, a_y, a_z)` before scaling.
    pub const fn signs(self) -> [f64; 3] {
        match self {
            GhzRole::A => [-1.0, 1.0, -1.0],
            GhzRole::B | GhzRole::C => [1.0, 1.0, 1.0],
            GhzRole::D => [1.0, -1.0, -1.0],
        }
    }
}

/// How a [`DirectionPair`] was built from its external setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PairMode {
    /// Setting in the x-y plane, `n_d` the in-plane quarter turn of `n_r`.
    Planar,
    /// Four-particle role mapping scaled by `2^(-1/4)`.
    GhzRole {
        /// Target detector.
        role: GhzRole,
    },
    /// Arbitrary 3D setting with `n_d` from Gram-Schmidt against `e_z`.
    General3d,
}

/// External unit setting together with its internal vectors `n_r`, `n_d`.
///
/// In planar and general modes `‖n_r‖ = ‖n_d‖ = 1/√2` and `n_r · n_d = 0`.
/// In GHZ-role mode `‖n_r‖² + ‖n_d‖² = 1/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct DirectionPair {
    mode: PairMode,
    external: Vec3,
    n_r: Vec3,
    n_d: Vec3,
}

#[derive(Deserialize)]
struct RawPair {
    mode: PairMode,
    external: Vec3,
    n_r: Vec3,
    n_d: Vec3,
}

impl TryFrom<RawPair> for DirectionPair {
    type Error = GeometryError;

    fn try_from(raw: RawPair) -> Result<Self, Self::Error> {
        let rebuilt = DirectionPair::build(raw.external, raw.mode)?;
        let off = (rebuilt.n_r - raw.n_r).norm().max((rebuilt.n_d - raw.n_d).norm());
        if off > 1e-12 {
            return Err(GeometryError::Inconsistent { deviation: off });
        }
        Ok(rebuilt)
    }
}

fn check_unit(a: Vec3) -> Result<(), GeometryError> {
    if !a.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    let n = a.norm();
    if n < DEGENERACY_TOL {
        return Err(GeometryError::DegenerateInput { norm: n });
    }
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(GeometryError::NotUnit { norm: n });
    }
    Ok(())
}

impl DirectionPair {
    /// Builds a pair in the given mode.
    pub fn build(a: Vec3, mode: PairMode) -> Result<Self, GeometryError> {
        match mode {
            PairMode::Planar => make_pair_planar(a),
            PairMode::GhzRole { role } => make_pair_ghz(a, role),
            PairMode::General3d => make_pair_general(a),
        }
    }

    /// Construction mode.
    pub const fn mode(&self) -> PairMode {
        self.mode
    }

    /// The external setting.
    pub const fn external(&self) -> Vec3 {
        self.external
    }

    /// Real part `n_r`.
    pub const fn n_r(&self) -> Vec3 {
        self.n_r
    }

    /// Dual part `n_d`.
    pub const fn n_d(&self) -> Vec3 {
        self.n_d
    }
}

/// `n_r = a/√2`, `n_d = (a · (e_x ∧ e_y))/√2 = (-a_y, a_x, 0)/√2`.
///
/// Requires a unit vector with `a_z = 0`.
pub fn make_pair_planar(a: Vec3) -> Result<DirectionPair, GeometryError> {
    if a.z.abs() > UNIT_TOL {
        return Err(GeometryError::NotPlanar { z: a.z });
    }
    check_unit(a)?;
    let a = Vec3::new(a.x, a.y, 0.0);
    let contracted = Vec3::new(-a.y, a.x, 0.0).normalized()?;
    Ok(DirectionPair {
        mode: PairMode::Planar,
        external: a,
        n_r: a.scale(FRAC_1_SQRT_2),
        n_d: contracted.scale(FRAC_1_SQRT_2),
    })
}

/// Role-signed mapping `n_r = (s_x a_x, s_y a_y, 0)`, `n_d = (0, 0, s_z a_z)`,
/// both scaled by `2^(-1/4)`.
pub fn make_pair_ghz(a: Vec3, role: GhzRole) -> Result<DirectionPair, GeometryError> {
    check_unit(a)?;
    let k = libm::pow(2.0, -0.25);
    let [sx, sy, sz] = role.signs();
    Ok(DirectionPair {
        mode: PairMode::GhzRole { role },
        external: a,
        n_r: Vec3::new(sx * a.x, sy * a.y, 0.0).scale(k),
        n_d: Vec3::new(0.0, 0.0, sz * a.z).scale(k),
    })
}

/// `n_r = a/√2` and `n_d` the unit Gram-Schmidt residual of `e_z` against
/// `a` (of `e_x` when `a` is nearly parallel to `e_z`), scaled by `1/√2`.
pub fn make_pair_general(a: Vec3) -> Result<DirectionPair, GeometryError> {
    check_unit(a)?;
    let mut residual = Vec3::Z - a.scale(a.dot(Vec3::Z));
    if residual.norm() < GRAM_SCHMIDT_FLOOR {
        residual = Vec3::X - a.scale(a.dot(Vec3::X));
    }
    // second pass restores orthogonality lost to cancellation near the pole
    let residual = residual - a.scale(a.dot(residual));
    let n_d = residual.normalized()?;
    Ok(DirectionPair {
        mode: PairMode::General3d,
        external: a,
        n_r: a.scale(FRAC_1_SQRT_2),
        n_d: n_d.scale(FRAC_1_SQRT_2),
    })
}

/// `D(n_r, n_d, 0)` in the positively oriented basis.
pub fn detector_element(n_r: Vec3, n_d: Vec3) -> Multivector {
    Multivector::new([0.0, n_r.z, n_r.y, n_r.x, n_d.x, n_d.y, n_d.z, 0.0], Orientation::Positive)
}

/// A detector `D(n_r, n_d, 0)` for one setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detector {
    pair: DirectionPair,
    element: Multivector,
}

impl Detector {
    /// Builds the detector element of `pair`.
    pub fn new(pair: DirectionPair) -> Self {
        Self { pair, element: detector_element(pair.n_r, pair.n_d) }
    }

    /// The setting.
    pub const fn pair(&self) -> &DirectionPair {
        &self.pair
    }

    /// `D`, positively oriented.
    pub const fn element(&self) -> Multivector {
        self.element
    }

    /// `D` expressed in the basis of `orientation`.
    pub fn element_in(&self, orientation: Orientation) -> Multivector {
        self.element.reoriented(orientation)
    }
}

/// Same as [`Detector::new`].
pub fn detector(pair: DirectionPair) -> Detector {
    Detector::new(pair)
}

/// `N(n_r, n_d, 0, λ)`: the detector coefficients read in the `λ` basis.
///
/// Relabelling the orientation of `D` is exactly `N = λD` as a geometric
/// element, since every non-scalar `ζk` is `λ` times its blade.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    detector: Detector,
    element: Multivector,
}

impl SpinState {
    /// Builds `N` from `D` and `λ`.
    pub fn new(detector: Detector, orientation: Orientation) -> Self {
        Self { detector, element: detector.element.with_orientation(orientation) }
    }

    /// The underlying detector.
    pub const fn detector(&self) -> &Detector {
        &self.detector
    }

    /// `λ`.
    pub const fn orientation(&self) -> Orientation {
        self.element.orientation()
    }

    /// `N`, carried in the `λ` basis.
    pub const fn element(&self) -> Multivector {
        self.element
    }
}

/// Same as [`SpinState::new`].
pub fn spin_state(detector: Detector, orientation: Orientation) -> SpinState {
    SpinState::new(detector, orientation)
}

/// A measurement result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Outcome {
    /// `+1`.
    Plus,
    /// `-1`.
    Minus,
}

impl Outcome {
    /// `±1`.
    pub const fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    fn from_sign(s: f64) -> Self {
        if s >= 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

impl From<Outcome> for i8 {
    fn from(o: Outcome) -> i8 {
        o.value()
    }
}

impl TryFrom<i8> for Outcome {
    type Error = &'static str;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            _ => Err("outcome must be +1 or -1"),
        }
    }
}

/// Which wing of the experiment a detector sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Computes `⟨-D N⟩`, which is `+λ`.
    First,
    /// Computes `⟨N D⟩`, which is `-λ`.
    Second,
}

/// Outcome of a detector with the source state set equal to the setting.
pub fn measure(det: &Detector, orientation: Orientation, side: Side) -> Outcome {
    let d = det.element_in(orientation);
    let n = spin_state(*det, orientation).element();
    let s = match side {
        Side::First => -(d * n).scalar_part(),
        Side::Second => (n * d).scalar_part(),
    };
    Outcome::from_sign(s)
}

/// `N(s, λ) N(s, λ)` for one source pair.
pub fn conservation_product(source: &DirectionPair, orientation: Orientation) -> Multivector {
    let n = spin_state(Detector::new(*source), orientation).element();
    n * n
}

/// Bivector part of `-ξ(b) ξ(s) ξ(b)` for unit `b`, `s`.
///
/// Computed with multivector products on the `ζ1..ζ3` slots.
pub fn hopf_similarity(b: Vec3, s: Vec3) -> Result<Vec3, GeometryError> {
    check_unit(b)?;
    check_unit(s)?;
    let xb = Quaternion::bivector(b).to_multivector();
    let xs = Quaternion::bivector(s).to_multivector();
    let out = -(xb * xs * xb);
    Ok(Quaternion::from_multivector(&out).bivector)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = FRAC_1_SQRT_2;

    fn close(a: Vec3, b: Vec3) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn planar_pair_examples() {
        let p = make_pair_planar(Vec3::X).unwrap();
        assert!(close(p.n_r(), Vec3::new(S, 0.0, 0.0)));
        assert!(close(p.n_d(), Vec3::new(0.0, S, 0.0)));
        let q = make_pair_planar(Vec3::Y).unwrap();
        assert!(close(q.n_r(), Vec3::new(0.0, S, 0.0)));
        assert!(close(q.n_d(), Vec3::new(-S, 0.0, 0.0)));
    }

    #[test]
    fn planar_rejects_bad_input() {
        assert!(matches!(make_pair_planar(Vec3::ZERO), Err(GeometryError::DegenerateInput { .. })));
        assert!(matches!(make_pair_planar(Vec3::Z), Err(GeometryError::NotPlanar { .. })));
        assert!(matches!(make_pair_planar(Vec3::new(2.0, 0.0, 0.0)), Err(GeometryError::NotUnit { .. })));
    }

    #[test]
    fn ghz_role_examples() {
        let k = libm::pow(2.0, -0.25);
        let a = make_pair_ghz(Vec3::Z, GhzRole::A).unwrap();
        assert_eq!(a.n_r(), Vec3::ZERO);
        assert_eq!(a.n_d(), Vec3::new(0.0, 0.0, -k));
        let b = make_pair_ghz(Vec3::X, GhzRole::B).unwrap();
        assert_eq!(b.n_r(), Vec3::new(k, 0.0, 0.0));
        assert_eq!(b.n_d(), Vec3::ZERO);
        assert!(matches!(make_pair_ghz(Vec3::ZERO, GhzRole::C), Err(GeometryError::DegenerateInput { .. })));
    }

    #[test]
    fn general_pair_is_orthogonal_and_handles_the_pole() {
        for a in [Vec3::Z, Vec3::new(0.6, 0.0, 0.8), Vec3::new(0.0, 0.0, -1.0)] {
            let p = make_pair_general(a).unwrap();
            assert!(p.n_r().dot(p.n_d()).abs() < 1e-15);
            assert!((p.n_d().norm() - S).abs() < 1e-15);
        }
    }

    #[test]
    fn detector_placement() {
        let d = Detector::new(make_pair_planar(Vec3::X).unwrap()).element();
        assert_eq!(d.coeffs(), &[0.0, 0.0, 0.0, S, 0.0, S, 0.0, 0.0]);
        let sq = d * d;
        assert!((sq.scalar_part() + 1.0).abs() < 1e-15);
        assert!(d.is_on_s7(1e-12));
    }

    #[test]
    fn spin_state_is_orientation_times_detector() {
        let d = Detector::new(make_pair_planar(Vec3::planar(0.7)).unwrap());
        let plus = spin_state(d, Orientation::Positive);
        assert_eq!(plus.element(), d.element());
        let minus = spin_state(d, Orientation::Negative);
        assert_eq!(minus.element().reoriented(Orientation::Positive), -d.element());
        for o in Orientation::BOTH {
            let n = spin_state(d, o).element();
            assert!(((n * n).scalar_part() + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn measurement_case_table() {
        let d = Detector::new(make_pair_planar(Vec3::planar(1.1)).unwrap());
        assert_eq!(measure(&d, Orientation::Positive, Side::First), Outcome::Plus);
        assert_eq!(measure(&d, Orientation::Positive, Side::Second), Outcome::Minus);
        assert_eq!(measure(&d, Orientation::Negative, Side::First), Outcome::Minus);
        assert_eq!(measure(&d, Orientation::Negative, Side::Second), Outcome::Plus);
    }

    #[test]
    fn pair_serde_round_trip_and_tamper_detection() {
        let p = make_pair_ghz(Vec3::new(0.0, 0.6, 0.8), GhzRole::D).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains(r#""mode":"ghz-role","role":"D""#), "{s}");
        assert_eq!(serde_json::from_str::<DirectionPair>(&s).unwrap(), p);
        let tampered = s.replace(r#""role":"D""#, r#""role":"A""#);
        assert!(serde_json::from_str::<DirectionPair>(&tampered).is_err());
    }

    #[test]
    fn similarity_fixes_parallel_sources() {
        let b = Vec3::new(0.0, 0.6, 0.8);
        assert!(close(hopf_similarity(b, b).unwrap(), b));
        assert!(close(hopf_similarity(b, -b).unwrap(), -b));
    }
}
