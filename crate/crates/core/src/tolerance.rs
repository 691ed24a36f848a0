//! Numerical tolerances shared across the crate.
//!
//! Every predicate that decides "equal within tolerance" reads one of these
//! values. Residuals of map identities are measured against the rounding
//! scale of the operands (see [`crate::LorentzMap::lorentz_residual`]), so the
//! same threshold holds for slow and near-lightlike velocities.

use serde::Deserialize;

/// Algebraic identities (form preservation, normalisation, orthogonality).
pub const TOL_CONSTRAINT: f64 = 1e-12;
/// Identities involving the exponential map.
pub const TOL_NUM: f64 = 1e-10;
/// Invariant drift allowed along numerical Fermi-Walker transport.
pub const TOL_DRIFT: f64 = 1e-8;
/// Two absolute velocities are treated as equal below this difference.
pub const TOL_VELOCITY_MATCH: f64 = 1e-9;
/// Relative singular-value threshold of the coplanarity rank test.
pub const TOL_RANK: f64 = 1e-10;
/// Rotations with |angle| below this carry no axis.
pub const TOL_DEGENERATE_ANGLE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub constraint: f64,
    pub numeric: f64,
    pub drift: f64,
    pub velocity_match: f64,
    pub rank: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        constraint: TOL_CONSTRAINT,
        numeric: TOL_NUM,
        drift: TOL_DRIFT,
        velocity_match: TOL_VELOCITY_MATCH,
        rank: TOL_RANK,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
