//! Hyperspace and fuzzy (Zadeh) extensions of discrete dynamical systems,
//! the four fuzzy metrics, and finite-horizon chaos diagnostics.

pub mod chaos;
pub mod error;
pub mod fuzzy;
pub mod gallery;
pub mod hyper;
pub mod proxsens;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod spaces;

pub use error::{Error, Result};
pub use fuzzy::{fuzzy_distance, MetricKind, StepFuzzySet};
pub use hyper::{hausdorff, CompactSet};
pub use scalar::{rat, Rational, Scalar};
pub use spaces::{System, Universe};
