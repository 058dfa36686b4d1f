use serde::{Deserialize, Serialize};

use super::{Multivector, Orientation};

/// `X = q_r + q_d ε` with `q_r = (X0, X1, X2, X3)` and `q_d = (-X7, X6, X5, X4)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualQuaternion {
    /// Real part.
    pub q_r: [f64; 4],
    /// Dual part.
    pub q_d: [f64; 4],
}

impl DualQuaternion {
    /// Reads the two quaternion parts off a multivector.
    pub fn from_multivector(x: &Multivector) -> Self {
        let c = x.coeffs();
        Self { q_r: [c[0], c[1], c[2], c[3]], q_d: [-c[7], c[6], c[5], c[4]] }
    }

    /// Inverse of [`DualQuaternion::from_multivector`].
    pub fn to_multivector(&self, orientation: Orientation) -> Multivector {
        let (r, d) = (self.q_r, self.q_d);
        Multivector::new([r[0], r[1], r[2], r[3], d[3], d[2], d[1], -d[0]], orientation)
    }

    /// `⟨q_r q_d†⟩`.
    ///
    /// The bivector slots pair up as `(1,6), (2,5), (3,4)` and pick up `λ`;
    /// the scalar slot does not.
    pub fn orthogonality(&self, orientation: Orientation) -> f64 {
        let (r, d) = (self.q_r, self.q_d);
        r[0] * d[0] + orientation.sign() * (r[1] * d[1] + r[2] * d[2] + r[3] * d[3])
    }
}
