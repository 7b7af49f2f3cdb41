//! Strong data processing constants and their use as converse bounds for
//! distributed lossy source coding.
//!
//! The crate computes `s*(X;Y)` for finite joint distributions, solves
//! single-source rate-distortion problems with Blahut–Arimoto, and evaluates
//! lower bounds on the rates of distributed codes built from those two
//! quantities. Closed forms for the quadratic Gaussian pair live in
//! [`gaussian`].
//!
//! All rates and information quantities are in bits.

pub mod bounds;
pub mod error;
pub mod gaussian;
pub mod numfmt;
pub mod prob;
pub mod rd;
pub mod sdpi;

pub use bounds::{BoundReport, FullReport, RateDistortionTuple};
pub use error::{Error, Result};
pub use prob::{Channel, Direction, Distribution, JointDistribution};
pub use rd::{DistortionMatrix, RdCurve, RdPoint};
pub use sdpi::{SdpiConfig, SdpiResult, SearchMethod};
