//! Secretary algorithms for matroid intersections.
//!
//! The crate is organised bottom-up:
//!
//! * [`matroid`]: independence oracles for the concrete families and for
//!   dual / restriction / direct-sum combinators;
//! * [`offline`]: greedy, brute-force optima and greedy-relevant elements;
//! * [`overlap`]: the weight reduction that makes single-matroid optima
//!   overlap, plus the coupled greedy simulation used to check it;
//! * [`msp`]: order-oblivious single-matroid secretary algorithms and their
//!   reduce-and-solve packagings;
//! * [`framework`]: combining per-matroid algorithms into one algorithm for
//!   the intersection;
//! * [`submodular`]: submodular objectives and the reduction to linear weights;
//! * [`harness`]: instances, arrival orders and Monte Carlo estimation.
//!
//! Everything numeric is generic over [`Scalar`]; the aliases below pin the
//! common choices.

pub mod arrival;
pub mod error;
pub mod framework;
pub mod harness;
pub mod matroid;
pub mod msp;
pub mod offline;
pub mod overlap;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod submodular;

pub use error::{Error, Result};
pub use matroid::{Matroid, TieBreakOrder};
pub use offline::Intersection;
pub use scalar::{Field, Rational, Scalar, Weight};

/// Instance with exact rational weights, as read from JSON files.
pub type RationalInstance = harness::SecretaryInstance<Rational>;
/// Instance with integer weights.
pub type IntInstance = harness::SecretaryInstance<i64>;
/// Instance with floating-point weights.
pub type FloatInstance = harness::SecretaryInstance<f64>;

pub type RationalLinearMatroid = matroid::LinearMatroid<Rational>;
pub type RationalReport = harness::SimulationReport;
