//! Orientation-tagged even subalgebra of `Cl(4,0)` and a local spin model
//! built on its unit sphere `S7`.
//!
//! The algebra has eight basis elements `ζ0..ζ7`. Every [`Multivector`]
//! carries an [`Orientation`] `λ = ±1`; the sign of every non-scalar product
//! term depends on it. Products between different orientations are rejected.
//!
//! The crate is `no_std` with `alloc`. IO, parallel drivers and the
//! command line live in the `septenary` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod algebra;
pub mod conformal;
pub mod engine;
pub mod oracle;
pub mod sampling;
pub mod spin;

pub use algebra::{AlgebraError, BasisIndex, DualQuaternion, Multivector, Orientation};
pub use conformal::{GeometryError, Quaternion, R4Point, Vec3};
pub use engine::{CorrelationSummary, EngineError, Experiment, TrialConfig, TrialRecord};
pub use spin::{Detector, DirectionPair, GhzRole, Outcome, PairMode, Side, SpinState};
