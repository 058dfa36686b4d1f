//! The eight-dimensional algebra `K^λ` and its unit sphere.

mod dual;
pub mod table;

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dual::DualQuaternion;
use table::PRODUCT_TABLE;

/// Errors raised by algebraic operations.
#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum AlgebraError {
    /// Operands carry different orientations.
    #[error("orientation mismatch: left operand has λ = {left}, right operand has λ = {right}")]
    OrientationMismatch {
        /// Orientation sign of the left operand.
        left: i8,
        /// Orientation sign of the right operand.
        right: i8,
    },
    /// A coefficient was NaN or infinite.
    #[error("coefficient ζ{index} is not finite")]
    NonFinite {
        /// Offending basis index.
        index: u8,
    },
    /// Orientation sign other than `±1`.
    #[error("orientation must be +1 or -1, got {0}")]
    InvalidOrientation(i8),
}

/// Exact product `ζμ ζν`: a single signed basis element.
pub fn basis_product(mu: BasisIndex, nu: BasisIndex, orientation: Orientation) -> Multivector {
    let p = PRODUCT_TABLE[mu.get()][nu.get()];
    let mut coeffs = [0.0; 8];
    coeffs[p.index as usize] = f64::from(p.sign_for(orientation.as_i8()));
    Multivector::new(coeffs, orientation)
}

/// Handedness `λ` of the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Orientation {
    /// `λ = +1`.
    Positive,
    /// `λ = -1`.
    Negative,
}

impl Orientation {
    /// Both orientations, positive first.
    pub const BOTH: [Orientation; 2] = [Orientation::Positive, Orientation::Negative];

    /// `±1` as an integer.
    pub const fn as_i8(self) -> i8 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    /// `±1.0`.
    pub const fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    /// The opposite orientation.
    pub const fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    /// `λ^n`.
    pub const fn pow(self, n: usize) -> Self {
        if n.is_multiple_of(2) {
            Orientation::Positive
        } else {
            self
        }
    }
}

impl TryFrom<i8> for Orientation {
    type Error = AlgebraError;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Orientation::Positive),
            -1 => Ok(Orientation::Negative),
            other => Err(AlgebraError::InvalidOrientation(other)),
        }
    }
}

impl From<Orientation> for i8 {
    fn from(o: Orientation) -> i8 {
        o.as_i8()
    }
}

impl Mul for Orientation {
    type Output = Orientation;

    fn mul(self, rhs: Orientation) -> Orientation {
        if self == rhs {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

/// Index `0..=7` of a basis element `ζk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(u8);

impl BasisIndex {
    /// All eight indices in order.
    pub const ALL: [BasisIndex; 8] = [
        BasisIndex(0),
        BasisIndex(1),
        BasisIndex(2),
        BasisIndex(3),
        BasisIndex(4),
        BasisIndex(5),
        BasisIndex(6),
        BasisIndex(7),
    ];

    /// Returns `None` unless `k < 8`.
    pub const fn new(k: u8) -> Option<Self> {
        if k < 8 {
            Some(BasisIndex(k))
        } else {
            None
        }
    }

    /// The raw index.
    pub const fn get(self) -> usize {
        self.0 as usize
    }
}

/// An element `Σ Xk ζk` of `K^λ`.
///
/// Coefficients are always finite when built through [`Multivector::try_new`]
/// or deserialization. Serialized as `{"coeffs": [..8], "lambda": ±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMultivector")]
pub struct Multivector {
    coeffs: [f64; 8],
    #[serde(rename = "lambda")]
    orientation: Orientation,
}

#[derive(Deserialize)]
struct RawMultivector {
    coeffs: [f64; 8],
    lambda: Orientation,
}

impl TryFrom<RawMultivector> for Multivector {
    type Error = AlgebraError;

    fn try_from(raw: RawMultivector) -> Result<Self, Self::Error> {
        Multivector::try_new(raw.coeffs, raw.lambda)
    }
}

impl Multivector {
    /// Builds an element without checking finiteness.
    pub const fn new(coeffs: [f64; 8], orientation: Orientation) -> Self {
        Self { coeffs, orientation }
    }

    /// Builds an element, rejecting NaN and infinities.
    pub fn try_new(coeffs: [f64; 8], orientation: Orientation) -> Result<Self, AlgebraError> {
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(AlgebraError::NonFinite { index: index as u8 });
        }
        Ok(Self { coeffs, orientation })
    }

    /// The zero element.
    pub const fn zero(orientation: Orientation) -> Self {
        Self::new([0.0; 8], orientation)
    }

    /// The unit scalar `ζ0`.
    pub const fn one(orientation: Orientation) -> Self {
        Self::basis(BasisIndex(0), orientation)
    }

    /// A single basis element `ζk`.
    pub const fn basis(k: BasisIndex, orientation: Orientation) -> Self {
        let mut coeffs = [0.0; 8];
        coeffs[k.0 as usize] = 1.0;
        Self::new(coeffs, orientation)
    }

    /// A pure scalar.
    pub const fn scalar(s: f64, orientation: Orientation) -> Self {
        let mut coeffs = [0.0; 8];
        coeffs[0] = s;
        Self::new(coeffs, orientation)
    }

    /// All eight coefficients.
    pub const fn coeffs(&self) -> &[f64; 8] {
        &self.coeffs
    }

    /// Coefficient of `ζk`.
    pub const fn coeff(&self, k: BasisIndex) -> f64 {
        self.coeffs[k.0 as usize]
    }

    /// The orientation tag.
    pub const fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Same coefficients under a different orientation tag.
    ///
    /// This changes the geometric element: `ζk` means `λ·blade`.
    pub const fn with_orientation(self, orientation: Orientation) -> Self {
        Self::new(self.coeffs, orientation)
    }

    /// The same geometric element expressed in the basis of `orientation`.
    pub fn reoriented(self, orientation: Orientation) -> Self {
        let s = (self.orientation * orientation).sign();
        let mut coeffs = self.coeffs;
        for c in &mut coeffs[1..] {
            *c *= s;
        }
        Self::new(coeffs, orientation)
    }

    /// Scalar (grade-0) part `⟨X⟩`.
    pub const fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Geometric product, or an error if the orientations differ.
    pub fn try_mul(&self, rhs: &Multivector) -> Result<Multivector, AlgebraError> {
        self.same_orientation(rhs)?;
        let lambda = self.orientation.as_i8();
        let mut out = [0.0; 8];
        for (mu, &x) in self.coeffs.iter().enumerate() {
            for (nu, &y) in rhs.coeffs.iter().enumerate() {
                let p = PRODUCT_TABLE[mu][nu];
                out[p.index as usize] += f64::from(p.sign_for(lambda)) * x * y;
            }
        }
        Ok(Multivector::new(out, self.orientation))
    }

    /// Reverse `X†`: negates the bivector parts `ζ1..ζ6`.
    pub fn reverse(&self) -> Multivector {
        let mut coeffs = self.coeffs;
        for c in &mut coeffs[1..7] {
            *c = -*c;
        }
        Multivector::new(coeffs, self.orientation)
    }

    /// `Σ Xk²`, equal to `⟨X X†⟩`.
    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `‖X‖`.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_squared())
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: f64) -> Multivector {
        let mut coeffs = self.coeffs;
        for c in &mut coeffs {
            *c *= s;
        }
        Multivector::new(coeffs, self.orientation)
    }

    /// Half commutator `½(XY - YX)`.
    pub fn commutator(&self, rhs: &Multivector) -> Result<Multivector, AlgebraError> {
        let xy = self.try_mul(rhs)?;
        let yx = rhs.try_mul(self)?;
        Ok((xy - yx).scale(0.5))
    }

    /// Largest absolute coefficient difference. Ignores orientation.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Splits into real and dual quaternion parts.
    pub fn to_dual_quaternion(&self) -> DualQuaternion {
        DualQuaternion::from_multivector(self)
    }

    /// `⟨q_r q_d†⟩`, the scalar that vanishes on `S7`.
    pub fn s7_orthogonality(&self) -> f64 {
        self.to_dual_quaternion().orthogonality(self.orientation)
    }

    /// Membership in `S7`: unit norm and vanishing orthogonality scalar,
    /// each within `tol`.
    pub fn is_on_s7(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol && self.s7_orthogonality().abs() <= tol
    }

    fn same_orientation(&self, rhs: &Multivector) -> Result<(), AlgebraError> {
        if self.orientation == rhs.orientation {
            Ok(())
        } else {
            Err(AlgebraError::OrientationMismatch { left: self.orientation.as_i8(), right: rhs.orientation.as_i8() })
        }
    }

    fn zip_with(self, rhs: Multivector, op: &str, f: impl Fn(f64, f64) -> f64) -> Multivector {
        if let Err(e) = self.same_orientation(&rhs) {
            panic!("cannot {op} multivectors: {e}");
        }
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs) {
            *c = f(*c, r);
        }
        Multivector::new(coeffs, self.orientation)
    }
}

impl Add for Multivector {
    type Output = Multivector;

    /// # Panics
    /// If the orientations differ.
    fn add(self, rhs: Multivector) -> Multivector {
        self.zip_with(rhs, "add", |a, b| a + b)
    }
}

impl Sub for Multivector {
    type Output = Multivector;

    /// # Panics
    /// If the orientations differ.
    fn sub(self, rhs: Multivector) -> Multivector {
        self.zip_with(rhs, "subtract", |a, b| a - b)
    }
}

impl Neg for Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Mul for Multivector {
    type Output = Multivector;

    /// # Panics
    /// If the orientations differ. Use [`Multivector::try_mul`] to handle that case.
    fn mul(self, rhs: Multivector) -> Multivector {
        match self.try_mul(&rhs) {
            Ok(p) => p,
            Err(e) => panic!("cannot multiply multivectors: {e}"),
        }
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;

    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]_λ={}", self.orientation)
    }
}
