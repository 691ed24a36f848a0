//! Thomas precession: how an inertial frame `u` sees a gyroscopic vector turn.
//!
//! The frame boosts the gyroscope into its own space, `z_u = B(u, ṙ) z`, and
//! sees it rotate with angular velocity `Ω_u = γ²/(1+γ) v_u∧a_u` built from
//! the relative velocity and acceleration.

use crate::boosts::{boost, relative_acceleration, relative_velocity};
use crate::error::{KinematicsError, Result};
use crate::exec::Execution;
use crate::fermi_walker::{GyroTrajectory, NumericGyro, TransportConfig};
use crate::minkowski::{orthonormal_spatial_frame, wedge, AbsoluteVelocity, FourVector, LorentzMap};
use crate::tolerance::TOL_NUM;
use crate::worldlines::{CircularWorldLine, WorldLine};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecessionSample {
    /// Observer time.
    pub t: f64,
    /// Proper time of the world line at observer time `t`.
    pub s: f64,
    pub z_u: FourVector,
    pub omega_u: LorentzMap,
    pub v: FourVector,
    pub a: FourVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecessionSeries {
    pub samples: Vec<PrecessionSample>,
    /// Central difference of `z_u` over the grid; `None` at the two ends.
    pub derivative: Vec<Option<FourVector>>,
}

/// `B(u, ṙ(s(t))) z(s(t))`, where `s(t)` inverts the frame time of `u`.
pub fn observe_gyroscope<W: WorldLine + ?Sized, G: GyroTrajectory + ?Sized>(
    u: &AbsoluteVelocity,
    w: &W,
    z: &G,
    t: f64,
) -> Result<FourVector> {
    let s = w.proper_time_of_frame_time(u, t)?;
    Ok(boost(u, &w.absolute_velocity(s)?).apply(&z.z_at(s)?))
}

/// `γ²/(1+γ)` with `γ = 1/sqrt(1 − |v|²)`.
pub fn precession_prefactor(v2: f64) -> f64 {
    let g = 1.0 / (1.0 - v2).sqrt();
    g * g / (1.0 + g)
}

/// `(γ − 1)/|v|²`, the same prefactor written the other way; undefined at `v = 0`.
/// `γ − 1 = expm1(−½ ln(1 − |v|²))` keeps full precision at small speed.
pub fn precession_prefactor_alt(v2: f64) -> f64 {
    (-0.5 * (-v2).ln_1p()).exp_m1() / v2
}

/// `Ω_u = γ²/(1+γ) v∧a` for `v, a ∈ E_u`, `|v| < 1`. Annihilates `u`.
pub fn omega_u(u: &AbsoluteVelocity, v: &FourVector, a: &FourVector) -> Result<LorentzMap> {
    let v2 = v.dot(v);
    if !(v2 < 1.0) {
        return Err(KinematicsError::Precondition(format!(
            "relative speed {} is not below 1",
            v2.abs().sqrt()
        )));
    }
    let scale = u.vector().component_norm();
    for (what, x) in [("u·v = 0", v), ("u·a = 0", a)] {
        let r = u.dot(x).abs() / (scale * x.component_norm()).max(1.0);
        KinematicsError::check(what, r, TOL_NUM)?;
    }
    Ok(wedge(v, a).scale(precession_prefactor(v2)))
}

/// Relative velocity, acceleration and `Ω_u` at proper time `s`.
pub fn precession_at<W: WorldLine + ?Sized>(
    u: &AbsoluteVelocity,
    w: &W,
    s: f64,
) -> Result<(FourVector, FourVector, LorentzMap)> {
    let rdot = w.absolute_velocity(s)?;
    let v = relative_velocity(u, &rdot);
    let a = relative_acceleration(u, &rdot, &w.acceleration(s))?;
    let om = omega_u(u, &v, &a)?;
    Ok((v, a, om))
}

/// Angular-velocity vector of an antisymmetric map acting on `E_u`:
/// `Σ wᵢ fᵢ` with `(w₁, w₂, w₃) = (m₃₂, m₁₃, m₂₁)`, `mᵢⱼ = fᵢ·(M fⱼ)`.
pub fn angular_velocity_vector(u: &AbsoluteVelocity, m: &LorentzMap) -> FourVector {
    let f = orthonormal_spatial_frame(u);
    let c = |i: usize, j: usize| f[i].dot(&m.apply(&f[j]));
    f[0] * c(2, 1) + f[1] * c(0, 2) + f[2] * c(1, 0)
}

/// Transports `z0` (gyroscopic at `s = 0`) numerically once, then evaluates
/// the observation and `Ω_u` at every grid time.
pub fn precession_series<W: WorldLine + ?Sized>(
    u: &AbsoluteVelocity,
    w: &W,
    z0: FourVector,
    t_grid: &[f64],
    cfg: &TransportConfig,
    exec: Execution,
) -> Result<PrecessionSeries> {
    let s_grid = exec.try_map(t_grid, |&t| w.proper_time_of_frame_time(u, t))?;
    let s_min = s_grid.iter().copied().fold(0.0, f64::min);
    let s_max = s_grid.iter().copied().fold(0.0, f64::max);
    let gyro = NumericGyro::new(w, z0, 0.0, s_min, s_max, cfg)?;
    series_at(u, w, &gyro, t_grid, &s_grid, exec)
}

/// Same as [`precession_series`] for an already known gyroscope trajectory.
pub fn precession_series_with<W: WorldLine + ?Sized, G: GyroTrajectory + ?Sized>(
    u: &AbsoluteVelocity,
    w: &W,
    gyro: &G,
    t_grid: &[f64],
    exec: Execution,
) -> Result<PrecessionSeries> {
    let s_grid = exec.try_map(t_grid, |&t| w.proper_time_of_frame_time(u, t))?;
    series_at(u, w, gyro, t_grid, &s_grid, exec)
}

fn series_at<W: WorldLine + ?Sized, G: GyroTrajectory + ?Sized>(
    u: &AbsoluteVelocity,
    w: &W,
    gyro: &G,
    t_grid: &[f64],
    s_grid: &[f64],
    exec: Execution,
) -> Result<PrecessionSeries> {
    let pairs: Vec<(f64, f64)> = t_grid.iter().copied().zip(s_grid.iter().copied()).collect();
    let samples = exec.try_map(&pairs, |&(t, s)| {
        let rdot = w.absolute_velocity(s)?;
        let z_u = boost(u, &rdot).apply(&gyro.z_at(s)?);
        let (v, a, omega_u) = precession_at(u, w, s)?;
        Ok::<_, KinematicsError>(PrecessionSample {
            t,
            s,
            z_u,
            omega_u,
            v,
            a,
        })
    })?;
    let n = samples.len();
    let derivative = (0..n)
        .map(|k| {
            (k > 0 && k + 1 < n).then(|| {
                let (lo, hi) = (&samples[k - 1], &samples[k + 1]);
                (hi.z_u - lo.z_u) * (1.0 / (hi.t - lo.t))
            })
        })
        .collect();
    Ok(PrecessionSeries { samples, derivative })
}

/// Precession seen from the centre frame: the constant `(1 − λ)Ω`.
pub fn central_frame_precession(w: &CircularWorldLine) -> LorentzMap {
    w.omega_map().scale(1.0 - w.lambda())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenInstant {
    /// Proper time with `λs = 2nπ/ω`.
    pub s: f64,
    pub v: FourVector,
    pub omega_u: LorentzMap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddInstant {
    /// Proper time with `λs = (2n − 1)π/ω`.
    pub s: f64,
    pub v: FourVector,
    pub a: FourVector,
    pub omega_u: LorentzMap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialInstants {
    pub even: EvenInstant,
    pub odd: OddInstant,
}

/// Closed-form kinematics seen from `u₀` at the instants where the gyroscope
/// is back at rest (`λs = 2nπ/ω`) and diametrically opposite (`λs = (2n−1)π/ω`).
///
/// At the odd instant `v = −2λ/(1+ω²ρ²)(ω²ρ²u_c + Ωq)` and
/// `a = (1−ω²ρ²)ω²/(1+ω²ρ²)² q`, so `Ω_u = −λω²ρ²/(1+ω²ρ²)(Ω + ω²u_c∧q)`.
pub fn u0_frame_special_instants(w: &CircularWorldLine, n: u32) -> SpecialInstants {
    let (l, om) = (w.lambda(), w.omega());
    let w2 = w.speed() * w.speed();
    let uc = w.center().vector();
    let q = w.q();
    let om_q = w.omega_map().apply(&q);
    let uc_q = wedge(&uc, &q);

    let odd_v = (uc * w2 + om_q) * (-2.0 * l / (1.0 + w2));
    let odd_a = q * ((1.0 - w2) * om * om / (1.0 + w2).powi(2));
    let odd_omega = (*w.omega_map() + uc_q.scale(om * om)).scale(-l * w2 / (1.0 + w2));

    let n = n as f64;
    SpecialInstants {
        even: EvenInstant {
            s: 2.0 * n * std::f64::consts::PI / (om * l),
            v: FourVector::ZERO,
            omega_u: LorentzMap::ZERO,
        },
        odd: OddInstant {
            s: (2.0 * n - 1.0) * std::f64::consts::PI / (om * l),
            v: odd_v,
            a: odd_a,
            omega_u: odd_omega,
        },
    }
}

/// The odd-instant angular velocity in the alternative form
/// `λ/(1+ω²ρ²)(Ω − ω²u_c∧q)`. It does not follow from the odd-instant `v` and
/// `a` above; kept only so the discrepancy stays checkable.
pub fn alternative_odd_instant_omega(w: &CircularWorldLine) -> LorentzMap {
    let w2 = w.speed() * w.speed();
    let uc_q = wedge(&w.center().vector(), &w.q());
    (*w.omega_map() - uc_q.scale(w.omega() * w.omega())).scale(w.lambda() / (1.0 + w2))
}
