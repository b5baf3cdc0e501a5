//! Simulation library for heat exchange between a quantum system and a
//! finite reservoir that may carry coherence in its energy eigenbasis.
//!
//! The crate is organised around the flow of a numerical experiment:
//!
//! * [`linalg`] — dense complex matrices, Hermitian eigendecomposition,
//!   tensor products and partial traces;
//! * [`states`] — density-matrix constructors (thermal, two-level atom,
//!   dephased) and validation;
//! * [`measures`] — entropies, relative entropy, coherence measures and
//!   mutual information;
//! * [`reservoir`] — effective temperatures, heat capacities, the exact
//!   entropy balance for unitary system-reservoir evolution and its
//!   decomposition into coherence, non-equilibrium and finite-size parts;
//! * [`jc`] — exact Jaynes-Cummings dynamics in a truncated Fock space,
//!   resonant closed forms, short-time limits and repeated-interaction
//!   (micromaser) runs;
//! * [`engine`] — Carnot-style cycle calculators with reservoir-coherence
//!   contributions;
//! * [`random`] — a seeded splitmix64 generator for reproducible random
//!   states and unitaries;
//! * [`verify`] — the randomized identity-check suite used by tests and the
//!   CLI.
//!
//! Natural logarithms and `k_B = 1` throughout; entropies are in nats.

pub mod engine;
pub mod jc;
pub mod linalg;
pub mod measures;
pub mod random;
pub mod reservoir;
pub mod states;
pub mod verify;

pub use num_complex::Complex64;

pub use engine::{CycleSpec, EndToEndResult, PhotonCycleSpec};
pub use jc::{FieldMode, JCConfig, MicromaserLedger, MicromaserRun};
pub use linalg::{CMatrix, EigenDecomposition, Subsystem};
pub use measures::BipartiteState;
pub use random::SplitMix64;
pub use reservoir::{Regime, SpectrumReservoir, ThermoLedger};
pub use states::{AtomSpec, DensityMatrix};
