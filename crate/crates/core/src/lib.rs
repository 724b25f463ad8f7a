//! Quantum correlations of helicity-entangled photon states shared between
//! inertial and uniformly accelerated observers.
//!
//! The states built here dress each accelerated observer's mode into a
//! geometric Fock series ([`fock`]) while the entanglement lives entirely in
//! the helicity labels. That structure makes every correlation measure
//! computable blockwise and, notably, independent of the acceleration. This
//! crate constructs the states ([`states`]), provides the dense operator
//! algebra to check them against ([`densops`]), and computes:
//!
//! - negativity measures and the tripartite pi-tangle ([`entanglement`]),
//! - quantum discord, closed-form and by measurement-grid minimization,
//!   global multipartite discord, and geometric discord in the
//!   Hilbert-Schmidt and trace norms ([`discord`]).
//!
//! [`checks`] bundles the numerical claims into a reproducible verification
//! suite. Grid searches run in parallel when the `parallel` feature (on by
//! default) is enabled and fall back to identical sequential code otherwise.

pub mod checks;
pub mod densops;
pub mod discord;
pub mod entanglement;
mod error;
pub mod fock;
pub mod layout;
pub mod search;
pub mod states;

pub use densops::{C64, CMatrix, DensityOperator, HermitianOp, Spectrum, measured_relative_entropy};
pub use error::{Error, Result};
pub use fock::{AccelerationParam, FockWeightSeries, TruncationPolicy, fock_weight, weight_series};
pub use layout::SubsystemLayout;
pub use states::{BlockedDensity, MixingProbability, UnruhWeights};
