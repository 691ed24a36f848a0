//! Coordinate-free special-relativity kinematics: absolute velocities,
//! Lorentz boosts, Thomas rotations, Fermi–Walker transport and Thomas
//! precession seen from arbitrary inertial frames.
//!
//! Signature is (−, +, +, +) with c = 1. Vectors carry components in a fixed
//! orthonormal basis `e0..e3`, but every operation is built from the Lorentz
//! form alone.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boosts;
pub mod error;
pub mod exec;
pub mod fermi_walker;
pub mod minkowski;
pub mod precession;
pub mod scenario;
pub mod selftest;
pub mod tolerance;
pub mod worldlines;

pub use boosts::{boost, thomas_rotation_discrete, AngleAxis, Boost, SpatialRotation};
pub use error::{KinematicsError, Result};
pub use exec::Execution;
pub use fermi_walker::{
    thomas_angle_circular, thomas_rotation_circular, transport_closed_form_circular, transport_numeric, TransportConfig,
};
pub use minkowski::{exp_map, wedge, AbsoluteVelocity, FourVector, LorentzMap};
pub use precession::{omega_u, precession_series, PrecessionSample};
pub use tolerance::Tolerances;
pub use worldlines::{CircularWorldLine, InertialWorldLine, WorldLine};
