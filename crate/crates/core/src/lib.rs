//! Simulation and verification of uniform circle formation for swarms of
//! luminous-opaque robots driven by Look-Compute-Move cycles.
//!
//! The crate is organized around the life of one run:
//!
//! - [`geometry`] — tolerance-aware planar primitives shared by everything else.
//! - [`swarm`] — robot state, occlusion-based visibility, local-frame snapshots.
//! - [`classify`] — angular sequences, symmetry classes, splitting diameters.
//! - [`protocol`] — the per-robot compute function: a pure map from a local
//!   snapshot to a move command, covering every phase of the formation
//!   state machine.
//! - [`scheduler`] — FSYNC/SSYNC/ASYNC drivers with a seeded adversary,
//!   trace recording and epoch metering.
//! - [`verify`] — collision detection, regularity verdicts, classification
//!   oracle, bounded interleaving exploration.
//! - [`generate`] — seeded configuration generators per symmetry class.

pub mod classify;
pub mod generate;
pub mod geometry;
pub mod protocol;
pub mod scheduler;
pub mod swarm;
pub mod verify;

pub use geometry::{Circle, Point, Tolerance};
pub use swarm::{Color, MoveCommand, RobotState, Snapshot};
