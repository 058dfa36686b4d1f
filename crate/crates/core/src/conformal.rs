//! Euclidean vectors, the stereographic embedding of `R3` into `S3`, and
//! quaternions built from bivector products.

use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Multivector, Orientation};

/// Smallest norm accepted where a direction is required.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Invalid geometric input.
#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum GeometryError {
    /// Vector too short to define a direction.
    #[error("degenerate input: norm {norm:e} is below {DEGENERACY_TOL:e}")]
    DegenerateInput {
        /// Offending norm.
        norm: f64,
    },
    /// Vector expected to be unit length.
    #[error("expected a unit vector, got norm {norm}")]
    NotUnit {
        /// Offending norm.
        norm: f64,
    },
    /// Vector expected in the x-y plane.
    #[error("expected a vector in the x-y plane, got z = {z}")]
    NotPlanar {
        /// Offending z component.
        z: f64,
    },
    /// NaN or infinite component.
    #[error("vector has a non-finite component")]
    NonFinite,
    /// Stored internal vectors disagree with those rebuilt from the setting.
    #[error("stored pair deviates from its setting by {deviation:e}")]
    Inconsistent {
        /// Largest deviation found.
        deviation: f64,
    },
}

/// A vector in `R3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    /// x component.
    pub x: f64,
    /// y component.
    pub y: f64,
    /// z component.
    pub z: f64,
}

impl Vec3 {
    /// Zero vector.
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    /// `e_x`.
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    /// `e_y`.
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    /// `e_z`.
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    /// Builds a vector from components.
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector in the x-y plane at azimuth `phi` radians.
    pub fn planar(phi: f64) -> Self {
        Self::new(libm::cos(phi), libm::sin(phi), 0.0)
    }

    /// Dot product.
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Cross product.
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    /// Squared length.
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Length.
    pub fn norm(self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    /// Multiplies by a scalar.
    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    /// Whether every component is finite.
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector along `self`.
    pub fn normalized(self) -> Result<Vec3, GeometryError> {
        if !self.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let n = self.norm();
        if n < DEGENERACY_TOL {
            return Err(GeometryError::DegenerateInput { norm: n });
        }
        Ok(self.scale(1.0 / n))
    }

    /// Azimuth `atan2(y, x)` in radians.
    pub fn azimuth(self) -> f64 {
        libm::atan2(self.y, self.x)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        self.scale(s)
    }
}

/// A point `v + w x̂4` of `R4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct R4Point {
    /// Component in the `R3` hyperplane.
    pub v: Vec3,
    /// Component along the fourth axis.
    pub w: f64,
}

impl R4Point {
    /// Euclidean length.
    pub fn norm(self) -> f64 {
        libm::sqrt(self.v.norm_squared() + self.w * self.w)
    }
}

/// Stereographic image of `x` on the sphere of radius 1 centred at `x̂4`.
///
/// `φ(x) = 2x/(r²+1) + 2r²/(r²+1) x̂4`. The origin maps to `0` and large
/// `r` approaches the pole `2x̂4`.
pub fn stereo_phi(x: Vec3) -> R4Point {
    let r2 = x.norm_squared();
    let d = r2 + 1.0;
    if r2.is_infinite() {
        return R4Point { v: Vec3::ZERO, w: 2.0 };
    }
    R4Point { v: x.scale(2.0 / d), w: 2.0 * r2 / d }
}

/// `ψ(x) = φ(x) - x̂4`, a point of the unit `S3` centred at the origin.
pub fn stereo_psi(x: Vec3) -> R4Point {
    let p = stereo_phi(x);
    R4Point { v: p.v, w: p.w - 1.0 }
}

/// A quaternion `s + B` with `B` a bivector of `E3`.
///
/// The bivector is stored through its components on `(e_y e_z, e_z e_x, e_x e_y)`,
/// written as the vector `(x, y, z)`. Multiplication follows
/// `(p0 + p)(q0 + q) = p0 q0 - p·q + p0 q + q0 p - p×q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    /// Scalar part.
    pub scalar: f64,
    /// Bivector part.
    pub bivector: Vec3,
}

impl Quaternion {
    /// Identity quaternion.
    pub const ONE: Quaternion = Quaternion { scalar: 1.0, bivector: Vec3::ZERO };

    /// The pure bivector `ξ(u) = u_x e_y e_z + u_y e_z e_x + u_z e_x e_y`.
    pub fn bivector(u: Vec3) -> Self {
        Self { scalar: 0.0, bivector: u }
    }

    /// `√(s² + ‖B‖²)`.
    pub fn norm(self) -> f64 {
        libm::sqrt(self.scalar * self.scalar + self.bivector.norm_squared())
    }

    /// Reverse: negates the bivector.
    pub fn reverse(self) -> Self {
        Self { scalar: self.scalar, bivector: -self.bivector }
    }

    /// The same element in the positively oriented `ζ0..ζ3` slots.
    pub fn to_multivector(self) -> Multivector {
        let b = self.bivector;
        Multivector::new([self.scalar, b.z, b.y, b.x, 0.0, 0.0, 0.0, 0.0], Orientation::Positive)
    }

    /// Reads `ζ0..ζ3` of a positively oriented element.
    pub fn from_multivector(x: &Multivector) -> Self {
        let x = x.reoriented(Orientation::Positive);
        let c = x.coeffs();
        Self { scalar: c[0], bivector: Vec3::new(c[3], c[2], c[1]) }
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let (p0, p) = (self.scalar, self.bivector);
        let (q0, qv) = (q.scalar, q.bivector);
        Quaternion { scalar: p0 * q0 - p.dot(qv), bivector: qv.scale(p0) + p.scale(q0) - p.cross(qv) }
    }
}

/// `ξ(u) ξ(v) = -u·v - ξ(u×v)` for unit `u`, `v`.
pub fn quaternion_from_bivectors(u: Vec3, v: Vec3) -> Result<Quaternion, GeometryError> {
    for w in [u, v] {
        if !w.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let n = w.norm();
        if n < DEGENERACY_TOL {
            return Err(GeometryError::DegenerateInput { norm: n });
        }
        if (n - 1.0).abs() > DEGENERACY_TOL {
            return Err(GeometryError::NotUnit { norm: n });
        }
    }
    Ok(Quaternion { scalar: -u.dot(v), bivector: -u.cross(v) })
}
