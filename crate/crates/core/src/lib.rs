//! Octonion algebra, slice regular power series on the unit ball, and
//! numerical verification of Bohr-type inequalities for them.

pub mod corpus;
pub mod error;
pub mod functionals;
pub mod octonion;
pub mod quaternion;
pub mod radii;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use functionals::{BoundMode, FunctionalValue};
pub use octonion::{Octonion, SlicePoint};
pub use quaternion::Quaternion;
pub use radii::{RadiusMethod, RadiusResult};
pub use scalar::Real;
pub use series::{SliceSeries, StemValue};

pub type QuaternionF64 = Quaternion<f64>;
pub type QuaternionF32 = Quaternion<f32>;
pub type OctonionF64 = Octonion<f64>;
pub type OctonionF32 = Octonion<f32>;
pub type SliceSeriesF64 = SliceSeries<f64>;
pub type SliceSeriesF32 = SliceSeries<f32>;
pub type RadiusResultF64 = RadiusResult<f64>;
pub type FunctionalValueF64 = FunctionalValue<f64>;
