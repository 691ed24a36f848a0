//! World lines parametrised by proper time, and the uniform circular world line.

use std::f64::consts::PI;

use crate::error::{KinematicsError, Result};
use crate::minkowski::{orthonormal_spatial_frame, wedge, AbsoluteVelocity, FourVector, LorentzMap};
use crate::tolerance::{TOL_CONSTRAINT, TOL_NUM};

/// Superluminal guard on the orbital speed `ωρ`.
pub const MAX_ORBITAL_SPEED: f64 = 1.0 - 1e-9;

const NEWTON_MAX_ITER: usize = 50;
const BISECTION_MAX_ITER: usize = 200;
const INVERSION_RESIDUAL: f64 = 1e-12;

/// A world line function with exact derivatives.
///
/// `position` is the displacement from a scenario origin, `velocity` must be an
/// absolute velocity and `acceleration` must be Lorentz-orthogonal to it.
pub trait WorldLine: Sync {
    fn position(&self, s: f64) -> FourVector;
    fn velocity(&self, s: f64) -> FourVector;
    fn acceleration(&self, s: f64) -> FourVector;

    fn absolute_velocity(&self, s: f64) -> Result<AbsoluteVelocity> {
        AbsoluteVelocity::with_tolerance(self.velocity(s), TOL_NUM)
    }

    /// Time of frame `u` elapsed between proper times 0 and `s`: `−u·(r(s) − r(0))`.
    fn frame_time(&self, u: &AbsoluteVelocity, s: f64) -> f64 {
        -u.dot(&(self.position(s) - self.position(0.0)))
    }

    /// Inverse of [`WorldLine::frame_time`]. The map is strictly increasing
    /// with slope `−u·ṙ ≥ 1`, so the root lies between 0 and `t`.
    fn proper_time_of_frame_time(&self, u: &AbsoluteVelocity, t: f64) -> Result<f64> {
        let (lo, hi) = if t >= 0.0 { (0.0, t) } else { (t, 0.0) };
        invert_increasing(
            |s| self.frame_time(u, s),
            |s| -u.dot(&self.velocity(s)),
            t,
            0.5 * (lo + hi),
            lo,
            hi,
        )
    }
}

/// Newton iteration safeguarded by bisection for a strictly increasing `f`
/// with `f(lo) ≤ target ≤ f(hi)`.
pub(crate) fn invert_increasing(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    target: f64,
    guess: f64,
    mut lo: f64,
    mut hi: f64,
) -> Result<f64> {
    if !target.is_finite() {
        return Err(KinematicsError::NonFinite("time"));
    }
    let tol = INVERSION_RESIDUAL.max(4.0 * f64::EPSILON * target.abs());
    let mut s = guess.clamp(lo, hi);
    for _ in 0..NEWTON_MAX_ITER {
        let r = f(s) - target;
        if r.abs() < tol {
            return Ok(s);
        }
        if r > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let next = s - r / df(s);
        s = if next.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    for _ in 0..BISECTION_MAX_ITER {
        s = 0.5 * (lo + hi);
        let r = f(s) - target;
        if r.abs() < tol || hi - lo <= f64::EPSILON * s.abs().max(1.0) {
            return Ok(s);
        }
        if r > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
    }
    Ok(s)
}

/// Straight world line `r(s) = o + s u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertialWorldLine {
    pub origin: FourVector,
    pub velocity: AbsoluteVelocity,
}

impl InertialWorldLine {
    pub fn new(origin: FourVector, velocity: AbsoluteVelocity) -> Self {
        Self { origin, velocity }
    }
}

impl WorldLine for InertialWorldLine {
    fn position(&self, s: f64) -> FourVector {
        self.origin + self.velocity.vector() * s
    }

    fn velocity(&self, _s: f64) -> FourVector {
        self.velocity.vector()
    }

    fn acceleration(&self, _s: f64) -> FourVector {
        FourVector::ZERO
    }
}

/// Uniform circular motion about a centre at rest in frame `u_c`:
/// `r(s) = o + sλu_c + e^{sλΩ}q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularWorldLine {
    origin: FourVector,
    center: AbsoluteVelocity,
    omega_map: LorentzMap,
    q: FourVector,
    omega: f64,
    rho: f64,
    lambda: f64,
}

impl CircularWorldLine {
    /// Validates every invariant; nothing is renormalised.
    pub fn new(origin: FourVector, center: AbsoluteVelocity, omega_map: LorentzMap, q: FourVector) -> Result<Self> {
        if !origin.is_finite() || !q.is_finite() {
            return Err(KinematicsError::NonFinite("circular world line"));
        }
        KinematicsError::check("Ω antisymmetric", omega_map.antisymmetry_residual(), TOL_CONSTRAINT)?;
        let gamma_c = center.vector()[0];
        let map_scale = omega_map.max_abs().max(f64::MIN_POSITIVE) * gamma_c * gamma_c;
        KinematicsError::check(
            "Ω u_c = 0",
            omega_map.apply(&center.vector()).component_norm() / map_scale,
            TOL_CONSTRAINT,
        )?;
        let omega2 = omega_map.half_trace_adjoint_square();
        if !(omega2 > 0.0) {
            return Err(KinematicsError::Precondition(
                "Ω must be a nonzero spatial rotation generator".into(),
            ));
        }
        let omega = omega2.sqrt();
        let q_scale = q.component_norm().max(f64::MIN_POSITIVE) * gamma_c;
        KinematicsError::check("q ∈ E_u_c", center.dot(&q).abs() / q_scale, TOL_CONSTRAINT)?;
        let rho = q.magnitude();
        if !(rho > 0.0) {
            return Err(KinematicsError::Precondition("radius vector must be nonzero".into()));
        }
        let om_q = omega_map.apply(&q);
        let residual = omega_map.apply(&om_q) + q * omega2;
        KinematicsError::check(
            "Ω²q = −ω²q",
            residual.component_norm() / (omega2 * q_scale * gamma_c),
            TOL_CONSTRAINT,
        )?;
        let speed = omega * rho;
        if speed >= MAX_ORBITAL_SPEED {
            return Err(KinematicsError::Precondition(format!(
                "orbital speed ωρ = {speed} must stay below 1"
            )));
        }
        Ok(Self {
            origin,
            center,
            omega_map,
            q,
            omega,
            rho,
            lambda: 1.0 / (1.0 - speed * speed).sqrt(),
        })
    }

    /// Circle in the plane of orthonormal `p1, p2 ∈ E_u_c`, starting at `ρ p1`
    /// and moving towards `p2` with angular speed `ω`.
    pub fn from_plane(
        origin: FourVector,
        center: AbsoluteVelocity,
        p1: FourVector,
        p2: FourVector,
        omega: f64,
        rho: f64,
    ) -> Result<Self> {
        let g = center.vector()[0];
        let tol = TOL_CONSTRAINT * g * g;
        for (what, r) in [
            ("p1·p1 = 1", p1.dot(&p1) - 1.0),
            ("p2·p2 = 1", p2.dot(&p2) - 1.0),
            ("p1·p2 = 0", p1.dot(&p2)),
            ("p1 ∈ E_u_c", center.dot(&p1)),
            ("p2 ∈ E_u_c", center.dot(&p2)),
        ] {
            KinematicsError::check(what, r.abs(), tol)?;
        }
        if !(omega > 0.0) || !(rho > 0.0) {
            return Err(KinematicsError::Precondition("ω and ρ must be positive".into()));
        }
        Self::new(origin, center, wedge(&p2, &p1).scale(omega), p1 * rho)
    }

    /// Centre at rest in the base frame, circle in the `e1, e2` plane starting at `ρ e1`.
    pub fn standard(omega: f64, rho: f64) -> Result<Self> {
        Self::from_plane(
            FourVector::ZERO,
            AbsoluteVelocity::rest(),
            FourVector::basis(1),
            FourVector::basis(2),
            omega,
            rho,
        )
    }

    pub fn origin(&self) -> FourVector {
        self.origin
    }

    pub fn center(&self) -> AbsoluteVelocity {
        self.center
    }

    pub fn omega_map(&self) -> &LorentzMap {
        &self.omega_map
    }

    pub fn q(&self) -> FourVector {
        self.q
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Orbital speed `ωρ` seen from the centre.
    pub fn speed(&self) -> f64 {
        self.omega * self.rho
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Initial absolute velocity `u₀ = λ(u_c + Ωq)`.
    pub fn u0(&self) -> AbsoluteVelocity {
        AbsoluteVelocity::new_unchecked((self.center.vector() + self.omega_map.apply(&self.q)) * self.lambda)
    }

    /// One revolution in centre time, `2π/ω`.
    pub fn center_period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// One revolution in proper time, `2π/(ωλ)`.
    pub fn proper_period(&self) -> f64 {
        2.0 * PI / (self.omega * self.lambda)
    }

    /// Unit vector spanning `E_u_c ∩ ker Ω`, oriented so that Ω turns right-handedly about it.
    pub fn kernel_axis(&self) -> FourVector {
        let f = orthonormal_spatial_frame(&self.center);
        let a = f.map(|fi| fi.dot(&self.q));
        let b = f.map(|fi| fi.dot(&self.omega_map.apply(&self.q)));
        let c = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        (f[0] * c[0] + f[1] * c[1] + f[2] * c[2]) * (1.0 / n)
    }

    /// `e^{tΩ}x = x + (sin ωt/ω)Ωx + ((1 − cos ωt)/ω²)Ω²x`, exact because `Ω³ = −ω²Ω`.
    pub fn rotate(&self, t: f64, x: &FourVector) -> FourVector {
        let w = self.omega;
        let ox = self.omega_map.apply(x);
        let oox = self.omega_map.apply(&ox);
        *x + ox * ((w * t).sin() / w) + oox * ((1.0 - (w * t).cos()) / (w * w))
    }

    /// Centre time at proper time `s`: `λs`.
    pub fn uc_time_of_proper_time(&self, s: f64) -> f64 {
        self.lambda * s
    }

    pub fn proper_time_of_uc_time(&self, t: f64) -> f64 {
        t / self.lambda
    }

    /// `u₀`-time at proper time `s`: `λ²s − λωρ² sin ωλs`, the integral of
    /// `−u₀·ṙ = λ²(1 − ω²ρ² cos ωλs)`.
    pub fn u0_time_of_proper_time(&self, s: f64) -> f64 {
        let l = self.lambda;
        l * l * s - l * self.omega * self.rho * self.rho * (self.omega * l * s).sin()
    }

    /// Inverse of [`Self::u0_time_of_proper_time`]: Newton from `t/λ²`, bisection fallback.
    pub fn proper_time_of_u0_time(&self, t: f64) -> Result<f64> {
        let l2 = self.lambda * self.lambda;
        let amp = self.lambda * self.omega * self.rho * self.rho;
        invert_increasing(
            |s| self.u0_time_of_proper_time(s),
            |s| l2 * (1.0 - self.speed().powi(2) * (self.omega * self.lambda * s).cos()),
            t,
            t / l2,
            (t - amp) / l2,
            (t + amp) / l2,
        )
    }
}

impl WorldLine for CircularWorldLine {
    fn position(&self, s: f64) -> FourVector {
        let t = self.lambda * s;
        self.origin + self.center.vector() * t + self.rotate(t, &self.q)
    }

    fn velocity(&self, s: f64) -> FourVector {
        let t = self.lambda * s;
        (self.center.vector() + self.rotate(t, &self.omega_map.apply(&self.q))) * self.lambda
    }

    fn acceleration(&self, s: f64) -> FourVector {
        let t = self.lambda * s;
        self.rotate(t, &self.q) * (-(self.lambda * self.omega).powi(2))
    }
}
