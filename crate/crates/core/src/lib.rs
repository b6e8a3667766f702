//! Pulse-level compiler and simulator for Rydberg wire-atom gates.
//!
//! Data qubits are encoded in the ground (|0⟩) and Rydberg (|1⟩) states of
//! individually addressed atoms. Auxiliary wire atoms sit between data atoms
//! and mediate their interaction through the Rydberg blockade. The crate
//! generates the addressing sequences for a universal gate set, checks them
//! exactly in an infinite-blockade model, and estimates their fidelity with
//! finite van der Waals or Förster-resonant couplings.
//!
//! Units: ħ = 1, angular frequencies in rad/μs, distances in μm, times in μs.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atom_model;
pub mod error;
pub mod fidelity;
pub mod gatelib;
pub mod pulse;
pub mod qops;
pub mod schedule;

pub use atom_model::{
    build_interaction_graph, builtin_layout, pair_strength, AtomArray, InteractionGraph, Layout,
    PairKind, PhysicalParams, Role, Scheme,
};
pub use error::{Error, Result};
pub use fidelity::{
    distance_sweep, error_budget, simulate_cp00_fidelity, ErrorBudget, FidelityResult, SweepTable,
};
pub use gatelib::{
    catalog, gate_by_name, verify_gate, Gate, GateParams, GateSpec, VerificationReport,
};
pub use pulse::{PropagationModel, Pulse, PulseSequence};
pub use schedule::ScheduleDocument;
