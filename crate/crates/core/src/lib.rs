//! Qubit placement and SWAP scheduling as constraint solving.
//!
//! The crate turns a logical circuit and a coupling graph into an optimizing
//! constraint model over spacetime coordinates (which physical qubit each
//! logical qubit occupies at every time slot, when and where every gate runs,
//! and where SWAP gates finish). Three synthesizers share that encoding:
//!
//! * [`encode::synthesize`]: the exact model with fine-grained time slots,
//! * [`transition::synthesize_tb`]: a coarse model whose time axis counts
//!   gate blocks separated by transitions, followed by ASAP scheduling,
//! * [`qaoa::synthesize_qaoa`]: a two-pass flow for commuting phase-separation
//!   circuits.
//!
//! Solving is delegated through the [`model::Solver`] trait, so this crate stays
//! `no_std` and carries no solver engine of its own beyond a brute-force
//! enumerator for tiny models. Every synthesized [`SynthesisResult`] can be
//! re-validated by [`verify::check_result`], which re-derives the layout rules
//! from concrete values without touching encoder code, and small instances can
//! be cross-checked against the exhaustive search in [`oracle`].
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod device;
pub mod encode;
pub mod error;
pub mod model;
pub mod oracle;
pub mod qaoa;
pub mod result;
pub mod transition;
pub mod verify;

pub use circuit::{Circuit, Gate, GateKind};
pub use device::{Device, Edge, FidelityProfile};
pub use encode::{EncodingConfig, ObjectiveKind, SynthesisOptions};
pub use error::{CircuitError, DeviceError, SynthesisError};
pub use result::{GatePlacement, SwapPlacement, SynthesisResult};
