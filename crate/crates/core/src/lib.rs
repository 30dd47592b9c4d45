//! Exact numerics for slope, tilt and Bridgeland stability on polarized
//! threefolds, with ℙ³ as the default variety.

pub mod error;
pub mod linalg;
pub mod scalar;

pub mod charges;
pub mod chern;
pub mod exceptional;
pub mod psi;
pub mod quadforms;
pub mod slopes;
pub mod walls;
pub mod witnesses;

pub use charges::{ChargeSpec, ChargeTag, GLTilde, PhaseValue};
pub use chern::{ChernVector, VarietyData};
pub use error::{Error, ParseError, Result};
pub use scalar::{parse_q, render_q, Scalar, Q};
pub use slopes::{Slope, Trichotomy};
