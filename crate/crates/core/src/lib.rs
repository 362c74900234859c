//! Exact arithmetic for tropical fans with polynomial weights.

pub mod error;
pub mod exactalg;
pub mod fan;
pub mod polytope;
pub mod cpl;
pub mod tropical;

pub use error::{Error, Result};
pub mod json;
pub mod verify;

pub use cpl::ConewisePoly;
pub use exactalg::{IntVec, MultiPoly, RatVec, Rational};
pub use fan::{Cone, Fan};
pub use polytope::Polytope;
pub use tropical::{WeightedCone, WeightedFan};
pub use verify::{ReportValue, VerificationReport};
