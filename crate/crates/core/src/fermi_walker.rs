//! Fermi-Walker transport of gyroscopic vectors.
//!
//! Two independent routes are provided: a fixed-step RK4 integrator of
//! `ż = (ṙ∧r̈)z` for any [`WorldLine`], and for the circular world line the
//! closed form `z(t) = e^{tΩ}e^{−tA}z(0)` in centre time `t = λs`. Numeric
//! APIs take proper time `s`; the circular closed-form APIs take centre time.

use std::f64::consts::PI;

use crate::boosts::SpatialRotation;
use crate::error::{KinematicsError, Result};
use crate::minkowski::{exp_map, wedge, FourVector, LorentzMap};
use crate::tolerance::{TOL_CONSTRAINT, TOL_DRIFT, TOL_NUM, TOL_VELOCITY_MATCH};
use crate::worldlines::{CircularWorldLine, WorldLine};

/// Steps per revolution used when no step is given.
pub const DEFAULT_STEPS_PER_PERIOD: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GyroState {
    pub s: f64,
    pub z: FourVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportConfig {
    /// Proper-time step of the integrator.
    pub step: f64,
    /// Largest tolerated drift of the transport invariants.
    pub drift_tol: f64,
}

impl TransportConfig {
    pub fn new(step: f64) -> Self {
        Self {
            step,
            drift_tol: TOL_DRIFT,
        }
    }

    /// `period / 10⁴` for the given circular world line.
    pub fn for_circular(w: &CircularWorldLine) -> Self {
        Self::new(w.proper_period() / DEFAULT_STEPS_PER_PERIOD)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(KinematicsError::Precondition(format!(
                "integrator step must be positive, got {}",
                self.step
            )));
        }
        Ok(())
    }
}

/// Largest observed drift of the transport invariants, relative to the
/// initial magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriftReport {
    /// Change of `ṙ·z`.
    pub velocity_dot: f64,
    /// Change of the mutual dot products `zᵢ·zⱼ` (including `|z|²`).
    pub gram: f64,
}

/// `ż = ṙ(r̈·z) − r̈(ṙ·z)`.
pub fn fw_derivative<W: WorldLine + ?Sized>(w: &W, s: f64, z: &FourVector) -> FourVector {
    let v = w.velocity(s);
    let a = w.acceleration(s);
    v * a.dot(z) - a * v.dot(z)
}

fn generator<W: WorldLine + ?Sized>(w: &W, s: f64) -> LorentzMap {
    wedge(&w.velocity(s), &w.acceleration(s))
}

/// One classical RK4 step of size `h` (negative for backward) applied to every vector.
fn rk4_step<W: WorldLine + ?Sized>(w: &W, s: f64, h: f64, zs: &mut [FourVector]) {
    let g0 = generator(w, s);
    let gh = generator(w, s + 0.5 * h);
    let g1 = generator(w, s + h);
    for z in zs.iter_mut() {
        let k1 = g0.apply(z);
        let k2 = gh.apply(&(*z + k1 * (0.5 * h)));
        let k3 = gh.apply(&(*z + k2 * (0.5 * h)));
        let k4 = g1.apply(&(*z + k3 * h));
        *z += (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    }
}

/// Tracks the conserved quantities `ṙ·zᵢ` and `zᵢ·zⱼ` of a set of transported vectors.
struct DriftMonitor {
    initial_dot: Vec<f64>,
    initial_gram: Vec<f64>,
    scale: Vec<f64>,
    tol: f64,
    report: DriftReport,
}

impl DriftMonitor {
    fn new<W: WorldLine + ?Sized>(w: &W, s: f64, zs: &[FourVector], tol: f64) -> Self {
        let v = w.velocity(s);
        let scale: Vec<f64> = zs.iter().map(|z| z.magnitude().max(1e-300)).collect();
        Self {
            initial_dot: zs.iter().map(|z| v.dot(z)).collect(),
            initial_gram: gram(zs),
            scale,
            tol,
            report: DriftReport::default(),
        }
    }

    fn observe<W: WorldLine + ?Sized>(&mut self, w: &W, s: f64, zs: &[FourVector]) -> Result<()> {
        let v = w.velocity(s);
        for (i, z) in zs.iter().enumerate() {
            let d = (v.dot(z) - self.initial_dot[i]).abs() / self.scale[i];
            self.report.velocity_dot = self.report.velocity_dot.max(d);
        }
        let n = zs.len();
        for (k, g) in gram(zs).into_iter().enumerate() {
            let (i, j) = (k / n, k % n);
            let d = (g - self.initial_gram[k]).abs() / (self.scale[i] * self.scale[j]);
            self.report.gram = self.report.gram.max(d);
        }
        if self.report.velocity_dot > self.tol {
            return Err(KinematicsError::Drift {
                quantity: "ṙ·z",
                drift: self.report.velocity_dot,
                tolerance: self.tol,
                s,
            });
        }
        if self.report.gram > self.tol {
            return Err(KinematicsError::Drift {
                quantity: "z·z",
                drift: self.report.gram,
                tolerance: self.tol,
                s,
            });
        }
        Ok(())
    }
}

fn gram(zs: &[FourVector]) -> Vec<f64> {
    zs.iter().flat_map(|a| zs.iter().map(move |b| a.dot(b))).collect()
}

/// Integrates all `zs` from `s1` to `s2` in steps of `cfg.step`, the last one
/// shortened to land on `s2`. Invariant drift is checked after every step.
fn integrate<W: WorldLine + ?Sized>(
    w: &W,
    zs: &mut [FourVector],
    s1: f64,
    s2: f64,
    cfg: &TransportConfig,
    monitor: &mut DriftMonitor,
) -> Result<()> {
    cfg.validate()?;
    let span = s2 - s1;
    if span == 0.0 {
        return Ok(());
    }
    let dir = span.signum();
    let ratio = span.abs() / cfg.step;
    let mut full = ratio.floor();
    // a remainder at rounding level is not worth an extra step
    if ratio - full < 1e-9 {
        full -= 1.0;
    }
    let full = full.max(0.0) as u64;
    let h = cfg.step * dir;
    for k in 0..full {
        let s = s1 + k as f64 * h;
        rk4_step(w, s, h, zs);
        monitor.observe(w, s + h, zs)?;
    }
    let s_last = s1 + full as f64 * h;
    let rest = s2 - s_last;
    if rest != 0.0 {
        rk4_step(w, s_last, rest, zs);
        monitor.observe(w, s2, zs)?;
    }
    Ok(())
}

fn check_gyroscopic<W: WorldLine + ?Sized>(w: &W, s: f64, z: &FourVector) -> Result<()> {
    let v = w.velocity(s);
    let scale = (v.component_norm() * z.component_norm()).max(1.0);
    KinematicsError::check("ṙ·z = 0 at start", v.dot(z).abs() / scale, TOL_CONSTRAINT)
}

/// Transports a gyroscopic vector from `s1` to `s2` with fixed-step RK4.
pub fn transport_numeric<W: WorldLine + ?Sized>(
    w: &W,
    z0: FourVector,
    s1: f64,
    s2: f64,
    cfg: &TransportConfig,
) -> Result<GyroState> {
    let (zs, _) = transport_many(w, &[z0], s1, s2, cfg)?;
    Ok(GyroState { s: s2, z: zs[0] })
}

/// Transports several gyroscopic vectors together; also returns the drift report.
pub fn transport_many<W: WorldLine + ?Sized>(
    w: &W,
    z0: &[FourVector],
    s1: f64,
    s2: f64,
    cfg: &TransportConfig,
) -> Result<(Vec<FourVector>, DriftReport)> {
    for z in z0 {
        check_gyroscopic(w, s1, z)?;
    }
    let mut zs = z0.to_vec();
    let mut monitor = DriftMonitor::new(w, s1, &zs, cfg.drift_tol);
    integrate(w, &mut zs, s1, s2, cfg, &mut monitor)?;
    Ok((zs, monitor.report))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportSample {
    pub s: f64,
    pub z: FourVector,
    /// `|ṙ(s)·z|` relative to `|z0|`.
    pub velocity_dot: f64,
    /// `| |z| − |z0| |` relative to `|z0|`.
    pub norm: f64,
}

/// Transports `z0` from `samples[0]` through every listed proper time (in order).
pub fn transport_trajectory<W: WorldLine + ?Sized>(
    w: &W,
    z0: FourVector,
    samples: &[f64],
    cfg: &TransportConfig,
) -> Result<Vec<TransportSample>> {
    let Some(&start) = samples.first() else {
        return Ok(Vec::new());
    };
    check_gyroscopic(w, start, &z0)?;
    let n0 = z0.magnitude();
    let scale = n0.max(1e-300);
    let mut zs = [z0];
    let mut monitor = DriftMonitor::new(w, start, &zs, cfg.drift_tol);
    let mut out = Vec::with_capacity(samples.len());
    let mut prev = start;
    for &s in samples {
        integrate(w, &mut zs, prev, s, cfg, &mut monitor)?;
        prev = s;
        let z = zs[0];
        out.push(TransportSample {
            s,
            z,
            velocity_dot: w.velocity(s).dot(&z).abs() / scale,
            norm: (z.magnitude() - n0).abs() / scale,
        });
    }
    Ok(out)
}

/// Linear map `F(s2, s1)` carrying every solution of the Fermi-Walker equation
/// from `s1` to `s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOperator {
    map: LorentzMap,
    s1: f64,
    s2: f64,
}

impl TransportOperator {
    pub fn new<W: WorldLine + ?Sized>(w: &W, map: LorentzMap, s1: f64, s2: f64) -> Result<Self> {
        KinematicsError::check("F preserves the Lorentz form", map.lorentz_residual(), TOL_NUM)?;
        let v1 = w.velocity(s1);
        let v2 = w.velocity(s2);
        let scale = map.max_abs().max(1.0) * v1.component_norm();
        KinematicsError::check("F ṙ(s1) = ṙ(s2)", map.apply(&v1).max_abs_diff(&v2) / scale, TOL_NUM)?;
        Ok(Self { map, s1, s2 })
    }

    pub fn map(&self) -> &LorentzMap {
        &self.map
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.s1, self.s2)
    }

    pub fn apply(&self, z: &FourVector) -> FourVector {
        self.map.apply(z)
    }
}

/// Integrates the four basis vectors and assembles `F(s2, s1)` column by column.
pub fn transport_operator_numeric<W: WorldLine + ?Sized>(
    w: &W,
    s1: f64,
    s2: f64,
    cfg: &TransportConfig,
) -> Result<TransportOperator> {
    let mut cols: [FourVector; 4] = std::array::from_fn(FourVector::basis);
    let mut monitor = DriftMonitor::new(w, s1, &cols, cfg.drift_tol);
    integrate(w, &mut cols, s1, s2, cfg, &mut monitor)?;
    let map = LorentzMap(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i])));
    TransportOperator::new(w, map, s1, s2)
}

/// `A = λ²Ω + λ²ω² u_c∧q`, the generator with `z(t) = e^{tΩ}e^{−tA}z(0)`.
pub fn operator_a(w: &CircularWorldLine) -> LorentzMap {
    let l2 = w.lambda() * w.lambda();
    w.omega_map().scale(l2) + wedge(&w.center().vector(), &w.q()).scale(l2 * w.omega() * w.omega())
}

/// `A = Ω + λ²ω²(u_c + Ωq)∧q`; equal to [`operator_a`] because `(Ωq)∧q = ρ²Ω`.
pub fn operator_a_expanded(w: &CircularWorldLine) -> LorentzMap {
    let l2 = w.lambda() * w.lambda();
    let u0_dir = w.center().vector() + w.omega_map().apply(&w.q());
    *w.omega_map() + wedge(&u0_dir, &w.q()).scale(l2 * w.omega() * w.omega())
}

/// Fermi-Walker operator of the circular line at centre time `t`: `e^{tΩ}e^{−tA}`.
pub fn fermi_walker_operator_circular(w: &CircularWorldLine, t: f64) -> Result<LorentzMap> {
    Ok(exp_map(w.omega_map(), t)?.compose(&exp_map(&operator_a(w), -t)?))
}

/// `z(t) = e^{tΩ}e^{−tA}z0`, `t` in centre time; `z0` must lie in `E_{u₀}`.
pub fn transport_closed_form_circular(w: &CircularWorldLine, z0: FourVector, t: f64) -> Result<FourVector> {
    check_gyroscopic(w, 0.0, &z0)?;
    Ok(fermi_walker_operator_circular(w, t)?.apply(&z0))
}

/// The Thomas rotation after one revolution, `e^{−(2π/ω)A}` restricted to `E_{u₀}`.
pub fn thomas_rotation_circular(w: &CircularWorldLine) -> Result<SpatialRotation> {
    let f = exp_map(&operator_a(w), -w.center_period())?;
    SpatialRotation::with_tolerance(f, w.u0(), TOL_NUM)
}

/// The closed-form Thomas angle of one revolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThomasAngle {
    /// `2π(1 − λ)`, not reduced.
    pub accumulated: f64,
    /// `1 − λ` turns per revolution.
    pub winding: f64,
    /// `accumulated` reduced to `(−π, π]`.
    pub reduced: f64,
}

pub fn thomas_angle_circular(w: &CircularWorldLine) -> ThomasAngle {
    let winding = 1.0 - w.lambda();
    let accumulated = 2.0 * PI * winding;
    ThomasAngle {
        accumulated,
        winding,
        reduced: reduce_angle(accumulated),
    }
}

/// Reduces an angle to `(−π, π]`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Thomas rotation between two proper times with equal absolute velocities,
/// from the numerically integrated transport operator.
pub fn thomas_rotation_general<W: WorldLine + ?Sized>(
    w: &W,
    s1: f64,
    s2: f64,
    cfg: &TransportConfig,
) -> Result<SpatialRotation> {
    let v1 = w.velocity(s1);
    let mismatch = v1.max_abs_diff(&w.velocity(s2));
    if !(mismatch <= TOL_VELOCITY_MATCH) {
        return Err(KinematicsError::VelocityMismatch { mismatch });
    }
    let op = transport_operator_numeric(w, s1, s2, cfg)?;
    SpatialRotation::with_tolerance(*op.map(), w.absolute_velocity(s1)?, TOL_NUM)
}

/// A gyroscopic vector known as a function of proper time.
pub trait GyroTrajectory: Sync {
    fn z_at(&self, s: f64) -> Result<FourVector>;
}

/// Closed-form gyroscope on a circular world line.
#[derive(Debug, Clone, Copy)]
pub struct CircularGyro {
    line: CircularWorldLine,
    z0: FourVector,
    a: LorentzMap,
}

impl CircularGyro {
    pub fn new(line: CircularWorldLine, z0: FourVector) -> Result<Self> {
        check_gyroscopic(&line, 0.0, &z0)?;
        Ok(Self {
            line,
            z0,
            a: operator_a(&line),
        })
    }
}

impl GyroTrajectory for CircularGyro {
    fn z_at(&self, s: f64) -> Result<FourVector> {
        let t = self.line.uc_time_of_proper_time(s);
        let inner = exp_map(&self.a, -t)?.apply(&self.z0);
        Ok(self.line.rotate(t, &inner))
    }
}

/// A gyroscope integrated once on a fixed proper-time lattice; values between
/// lattice points come from one shortened RK4 step off the nearest lower node.
pub struct NumericGyro<'a, W: WorldLine + ?Sized> {
    line: &'a W,
    s0: f64,
    step: f64,
    forward: Vec<FourVector>,
    backward: Vec<FourVector>,
    drift: DriftReport,
}

impl<'a, W: WorldLine + ?Sized> NumericGyro<'a, W> {
    /// Integrates from `s0` forward to `s_max` and backward to `s_min`.
    pub fn new(line: &'a W, z0: FourVector, s0: f64, s_min: f64, s_max: f64, cfg: &TransportConfig) -> Result<Self> {
        cfg.validate()?;
        check_gyroscopic(line, s0, &z0)?;
        if !(s_min <= s0 && s0 <= s_max) {
            return Err(KinematicsError::Precondition(format!(
                "start {s0} outside [{s_min}, {s_max}]"
            )));
        }
        let mut drift = DriftReport::default();
        let forward = Self::lattice(line, z0, s0, cfg.step, s_max - s0, cfg, &mut drift)?;
        let backward = Self::lattice(line, z0, s0, -cfg.step, s0 - s_min, cfg, &mut drift)?;
        Ok(Self {
            line,
            s0,
            step: cfg.step,
            forward,
            backward,
            drift,
        })
    }

    fn lattice(
        line: &W,
        z0: FourVector,
        s0: f64,
        h: f64,
        span: f64,
        cfg: &TransportConfig,
        drift: &mut DriftReport,
    ) -> Result<Vec<FourVector>> {
        let n = (span / h.abs()).ceil() as usize;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut zs = [z0];
        let mut monitor = DriftMonitor::new(line, s0, &zs, cfg.drift_tol);
        nodes.push(z0);
        for k in 0..n {
            let s = s0 + k as f64 * h;
            rk4_step(line, s, h, &mut zs);
            monitor.observe(line, s + h, &zs)?;
            nodes.push(zs[0]);
        }
        drift.velocity_dot = drift.velocity_dot.max(monitor.report.velocity_dot);
        drift.gram = drift.gram.max(monitor.report.gram);
        Ok(nodes)
    }

    pub fn drift(&self) -> DriftReport {
        self.drift
    }

    pub fn range(&self) -> (f64, f64) {
        let back = (self.backward.len() - 1) as f64 * self.step;
        let fwd = (self.forward.len() - 1) as f64 * self.step;
        (self.s0 - back, self.s0 + fwd)
    }
}

impl<W: WorldLine + ?Sized> GyroTrajectory for NumericGyro<'_, W> {
    fn z_at(&self, s: f64) -> Result<FourVector> {
        let (min, max) = self.range();
        if !(s >= min && s <= max) {
            return Err(KinematicsError::OutOfRange { t: s, min, max });
        }
        let offset = s - self.s0;
        let (nodes, h) = if offset >= 0.0 {
            (&self.forward, self.step)
        } else {
            (&self.backward, -self.step)
        };
        let k = ((offset / h).floor() as usize).min(nodes.len() - 1);
        let node_s = self.s0 + k as f64 * h;
        let mut zs = [nodes[k]];
        let rest = s - node_s;
        if rest != 0.0 {
            rk4_step(self.line, node_s, rest, &mut zs);
        }
        Ok(zs[0])
    }
}
