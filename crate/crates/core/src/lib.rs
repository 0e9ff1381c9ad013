//! Simulation and certification toolkit for the teleportation-based
//! ping-pong test: a two-node game in which a qubit is passed back and
//! forth up to `k` times under randomly sampled Clifford gates, then
//! checked by a verifier.
//!
//! The crate is organized around the stages of that workflow:
//!
//! - [`linalg`]: dense complex 2x2 / 4x4 matrices, density operators.
//! - [`channels`]: CPTP maps in Kraus form, fidelities, twirls, diamond
//!   distance machinery.
//! - [`designs`]: the six Pauli eigenstates and the 24 single-qubit
//!   Cliffords, with 2-design verifiers.
//! - [`protocol`]: the test engine itself (honest provers).
//! - [`adversary`]: dishonest-prover strategies for soundness experiments.
//! - [`stats`]: winning-rate estimators and Hoeffding confidence bounds.
//! - [`certify`]: closed-form completeness / soundness / consistency /
//!   performance bounds and verdict reports.

pub mod adversary;
pub mod certify;
pub mod channels;
pub mod designs;
pub mod linalg;
pub mod protocol;
pub mod stats;
