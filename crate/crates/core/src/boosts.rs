//! Lorentz boosts between absolute velocities, relative kinematics seen by an
//! inertial frame, and the discrete Thomas rotation of a boost triangle.

use nalgebra::Matrix4x3;

use crate::error::{KinematicsError, Result};
use crate::exec::Execution;
use crate::minkowski::{orthonormal_spatial_frame, AbsoluteVelocity, FourVector, LorentzMap};
use crate::tolerance::{TOL_CONSTRAINT, TOL_DEGENERATE_ANGLE, TOL_RANK};

/// Axis components below this (in frame coordinates) count as zero when
/// fixing the axis orientation.
const AXIS_ZERO: f64 = 1e-9;

/// The Lorentz boost `B(to, from)`, with `B(to, from) from = to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    map: LorentzMap,
    from: AbsoluteVelocity,
    to: AbsoluteVelocity,
}

impl Boost {
    pub fn map(&self) -> &LorentzMap {
        &self.map
    }

    pub fn from(&self) -> AbsoluteVelocity {
        self.from
    }

    pub fn to(&self) -> AbsoluteVelocity {
        self.to
    }

    pub fn apply(&self, x: &FourVector) -> FourVector {
        self.map.apply(x)
    }

    pub fn inverse(&self) -> Boost {
        boost(&self.from, &self.to)
    }
}

/// `B(u′,u) = 1 + (u′+u)⊗(u′+u)/(1 − u′·u) − 2u′⊗u`.
pub fn boost(to: &AbsoluteVelocity, from: &AbsoluteVelocity) -> Boost {
    Boost {
        map: boost_map(&to.vector(), &from.vector()),
        from: *from,
        to: *to,
    }
}

pub(crate) fn boost_map(to: &FourVector, from: &FourVector) -> LorentzMap {
    let d = 1.0 - to.dot(from);
    // future-directed pairs have u′·u ≤ −1
    debug_assert!(d >= 2.0 - 1e-9, "boost between non future-directed velocities");
    let sum = *to + *from;
    LorentzMap::identity() + LorentzMap::tensor(&(sum * (1.0 / d)), &sum) - LorentzMap::tensor(&(*to * 2.0), from)
}

/// Velocity of a world line with absolute velocity `rdot` as seen by frame `u`:
/// `ṙ/(−u·ṙ) − u`, a vector of `E_u`.
pub fn relative_velocity(u: &AbsoluteVelocity, rdot: &AbsoluteVelocity) -> FourVector {
    let g = gamma(u, rdot);
    rdot.vector() * (1.0 / g) - u.vector()
}

/// Acceleration seen by frame `u`:
/// `(r̈ + ṙ(u·r̈)/(−u·ṙ)) / (−u·ṙ)²`.
pub fn relative_acceleration(u: &AbsoluteVelocity, rdot: &AbsoluteVelocity, rddot: &FourVector) -> Result<FourVector> {
    let v = rdot.vector();
    let scale = (v.component_norm() * rddot.component_norm()).max(f64::MIN_POSITIVE);
    KinematicsError::check("ṙ·r̈ = 0", v.dot(rddot).abs() / scale.max(1.0), TOL_CONSTRAINT)?;
    let g = gamma(u, rdot);
    Ok((*rddot + v * (u.dot(rddot) / g)) * (1.0 / (g * g)))
}

/// Relativistic factor `−u·ṙ`.
pub fn gamma(u: &AbsoluteVelocity, rdot: &AbsoluteVelocity) -> f64 {
    -u.dot(&rdot.vector())
}

/// A Lorentz map fixing `u` whose restriction to `E_u` is a proper rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialRotation {
    map: LorentzMap,
    u: AbsoluteVelocity,
}

/// Angle in `(−π, π]` and unit axis in `E_u`; no axis for a (near) identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleAxis {
    pub angle: f64,
    pub axis: Option<FourVector>,
}

impl SpatialRotation {
    pub fn new(map: LorentzMap, u: AbsoluteVelocity) -> Result<Self> {
        Self::with_tolerance(map, u, TOL_CONSTRAINT)
    }

    /// Residuals are measured against `max(1, ‖R‖)·u₀²`, the rounding scale
    /// of `R` acting on a boosted rest frame.
    pub fn with_tolerance(map: LorentzMap, u: AbsoluteVelocity, tol: f64) -> Result<Self> {
        let r = SpatialRotation { map, u };
        let scale = map.max_abs().max(1.0) * u.vector()[0].powi(2);
        let fixed = map.apply(&u.vector()).max_abs_diff(&u.vector());
        KinematicsError::check("R u = u", fixed / scale, tol)?;
        let m = r.restriction();
        let mut orth: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = (0..3).map(|k| m[k][i] * m[k][j]).sum();
                let id = if i == j { 1.0 } else { 0.0 };
                orth = orth.max((g - id).abs());
            }
        }
        KinematicsError::check("restriction orthogonal", orth / scale, tol)?;
        KinematicsError::check("restriction det = +1", (det3(&m) - 1.0).abs() / scale, tol)?;
        Ok(r)
    }

    pub(crate) fn new_unchecked(map: LorentzMap, u: AbsoluteVelocity) -> Self {
        SpatialRotation { map, u }
    }

    pub fn map(&self) -> &LorentzMap {
        &self.map
    }

    pub fn velocity(&self) -> AbsoluteVelocity {
        self.u
    }

    /// 3×3 array `fᵢ·(R fⱼ)` in the frame of [`orthonormal_spatial_frame`].
    pub fn restriction(&self) -> [[f64; 3]; 3] {
        let f = orthonormal_spatial_frame(&self.u);
        let rf = f.map(|fj| self.map.apply(&fj));
        std::array::from_fn(|i| std::array::from_fn(|j| f[i].dot(&rf[j])))
    }

    pub fn angle_axis(&self) -> AngleAxis {
        rotation_angle_axis(self)
    }

    /// Angle of right-handed rotation about `axis` (which need not be
    /// normalised); the sign is flipped when the extracted axis points away.
    pub fn signed_angle_about(&self, axis: &FourVector) -> f64 {
        let aa = self.angle_axis();
        match aa.axis {
            Some(a) if a.dot(axis) < 0.0 => {
                if aa.angle >= std::f64::consts::PI {
                    aa.angle
                } else {
                    -aa.angle
                }
            }
            _ => aa.angle,
        }
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `R_u(u′,u″) = B(u,u″) B(u″,u′) B(u′,u)`.
pub fn thomas_rotation_discrete(u: &AbsoluteVelocity, u1: &AbsoluteVelocity, u2: &AbsoluteVelocity) -> SpatialRotation {
    let m = boost(u, u2)
        .map()
        .compose(boost(u2, u1).map())
        .compose(boost(u1, u).map());
    SpatialRotation::new_unchecked(m, *u)
}

/// Discrete Thomas rotations for many triples at once.
pub fn thomas_rotation_batch(triples: &[[AbsoluteVelocity; 3]], exec: Execution) -> Vec<AngleAxis> {
    exec.map(triples, |[u, u1, u2]| thomas_rotation_discrete(u, u1, u2).angle_axis())
}

/// Angle from the trace of the restriction, axis from its antisymmetric part
/// (symmetric part near π). The axis is oriented so its first nonzero frame
/// coordinate is positive and the angle sign follows the right-hand rule.
pub fn rotation_angle_axis(r: &SpatialRotation) -> AngleAxis {
    let m = r.restriction();
    let anti = [m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]];
    let anti_norm = anti.iter().map(|c| c * c).sum::<f64>().sqrt();
    let sin = 0.5 * anti_norm;
    let cos = 0.5 * (m[0][0] + m[1][1] + m[2][2] - 1.0);
    let theta = sin.atan2(cos);
    if theta < TOL_DEGENERATE_ANGLE {
        return AngleAxis {
            angle: theta,
            axis: None,
        };
    }

    let mut axis = if cos > -0.5 {
        anti.map(|c| c / anti_norm)
    } else {
        // S = cos·I + (1 − cos)·a aᵀ
        let k = (0..3).max_by(|&a, &b| m[a][a].total_cmp(&m[b][b])).unwrap_or(0);
        let col: [f64; 3] = std::array::from_fn(|i| {
            let s = 0.5 * (m[i][k] + m[k][i]) - if i == k { cos } else { 0.0 };
            s / (1.0 - cos)
        });
        let n = col.iter().map(|c| c * c).sum::<f64>().sqrt();
        let mut a = col.map(|c| c / n);
        if a.iter().zip(anti.iter()).map(|(x, y)| x * y).sum::<f64>() < 0.0 {
            a = a.map(|c| -c);
        }
        a
    };

    let mut angle = theta;
    if let Some(first) = axis.iter().find(|c| c.abs() > AXIS_ZERO) {
        if *first < 0.0 {
            axis = axis.map(|c| -c);
            angle = -angle;
        }
    }
    if angle <= -std::f64::consts::PI {
        angle = std::f64::consts::PI;
    }

    let f = orthonormal_spatial_frame(&r.u);
    let axis4 = f[0] * axis[0] + f[1] * axis[1] + f[2] * axis[2];
    AngleAxis {
        angle,
        axis: Some(axis4),
    }
}

/// Rank test on the 4×3 component array of the three velocities.
pub fn coplanar(u: &AbsoluteVelocity, u1: &AbsoluteVelocity, u2: &AbsoluteVelocity) -> bool {
    coplanar_with_tolerance(u, u1, u2, TOL_RANK)
}

pub fn coplanar_with_tolerance(u: &AbsoluteVelocity, u1: &AbsoluteVelocity, u2: &AbsoluteVelocity, tol: f64) -> bool {
    let cols = [u.vector(), u1.vector(), u2.vector()];
    let m = Matrix4x3::from_fn(|i, j| cols[j][i]);
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    min <= tol * max
}

/// Equivalent criterion: the relative velocities of `u1` and `u2` seen by `u`
/// are collinear (sine of their angle below `tol`, or either one vanishes).
pub fn relative_velocities_collinear(
    u: &AbsoluteVelocity,
    u1: &AbsoluteVelocity,
    u2: &AbsoluteVelocity,
    tol: f64,
) -> bool {
    let v1 = relative_velocity(u, u1);
    let v2 = relative_velocity(u, u2);
    let n1 = v1.dot(&v1);
    let n2 = v2.dot(&v2);
    if n1.sqrt() <= tol || n2.sqrt() <= tol {
        return true;
    }
    let rej = v2 - v1 * (v1.dot(&v2) / n1);
    (rej.dot(&rej).max(0.0) / n2).sqrt() <= tol
}
