//! Minkowski vector space with signature (−,+,+,+) and c = 1.
//!
//! Components refer to a fixed positively oriented orthonormal basis
//! `e0, e1, e2, e3` with `e0` timelike. Linear maps act on component columns.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::error::{KinematicsError, Result};
use crate::tolerance::TOL_CONSTRAINT;

/// Diagonal of the Lorentz form.
pub const METRIC: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

#[derive(Clone, Copy, PartialEq, Default)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    /// Panics on non-finite input; use [`FourVector::try_new`] for untrusted data.
    pub fn new(c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        Self::try_new(c0, c1, c2, c3).expect("four-vector components must be finite")
    }

    pub fn try_new(c0: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let v = FourVector([c0, c1, c2, c3]);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(KinematicsError::NonFinite("four-vector"))
        }
    }

    /// Basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 4];
        c[i] = 1.0;
        FourVector(c)
    }

    /// Purely spatial vector `x e1 + y e2 + z e3`.
    pub fn spatial(x: f64, y: f64, z: f64) -> Self {
        FourVector::new(0.0, x, y, z)
    }

    pub fn components(&self) -> [f64; 4] {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        lorentz_dot(self, other)
    }

    /// `sqrt(|x·x|)`; for spacelike vectors this is the Euclidean length in any rest space.
    pub fn magnitude(&self) -> f64 {
        self.dot(self).abs().sqrt()
    }

    /// Euclidean norm of the component array. Used only as a rounding scale.
    pub fn component_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for FourVector {
    fn add_assign(&mut self, rhs: FourVector) {
        for i in 0..4 {
            self.0[i] += rhs.0[i];
        }
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|c| -c))
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, k: f64) -> FourVector {
        FourVector(self.0.map(|c| c * k))
    }
}

impl Mul<FourVector> for f64 {
    type Output = FourVector;
    fn mul(self, v: FourVector) -> FourVector {
        v * self
    }
}

/// `x·y = −x₀y₀ + x₁y₁ + x₂y₂ + x₃y₃`, summed in a fixed order so the result
/// is exactly symmetric.
pub fn lorentz_dot(x: &FourVector, y: &FourVector) -> f64 {
    let t = x.0[0] * y.0[0];
    let s = x.0[1] * y.0[1] + x.0[2] * y.0[2] + x.0[3] * y.0[3];
    s - t
}

/// A future-directed unit timelike vector: the four-velocity labelling an inertial frame.
#[derive(Clone, Copy, PartialEq)]
pub struct AbsoluteVelocity(FourVector);

impl AbsoluteVelocity {
    pub fn new(u: FourVector) -> Result<Self> {
        Self::with_tolerance(u, TOL_CONSTRAINT)
    }

    /// Checks `u·u = −1` relative to the squared component norm (the rounding
    /// scale of the dot product) and `u₀ > 0`.
    pub fn with_tolerance(u: FourVector, tol: f64) -> Result<Self> {
        if !u.is_finite() {
            return Err(KinematicsError::NonFinite("absolute velocity"));
        }
        let scale = u.component_norm().powi(2).max(1.0);
        KinematicsError::check("u·u = −1", (u.dot(&u) + 1.0).abs() / scale, tol)?;
        if u.0[0] <= 0.0 {
            return Err(KinematicsError::Precondition(
                "absolute velocity must be future-directed".into(),
            ));
        }
        Ok(AbsoluteVelocity(u))
    }

    /// The base frame `e0`.
    pub fn rest() -> Self {
        AbsoluteVelocity(FourVector::basis(0))
    }

    /// `γ(e0 + v)` for a relative 3-velocity `v` in the base frame.
    pub fn from_relative(v: [f64; 3]) -> Result<Self> {
        let v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if !v2.is_finite() || v2 >= 1.0 {
            return Err(KinematicsError::Precondition(format!(
                "relative speed {} is not below 1",
                v2.sqrt()
            )));
        }
        let g = 1.0 / (1.0 - v2).sqrt();
        Self::new(FourVector::new(g, g * v[0], g * v[1], g * v[2]))
    }

    /// Normalises a future-directed timelike vector.
    pub fn normalize(x: FourVector) -> Result<Self> {
        let n2 = -x.dot(&x);
        if !(n2 > 0.0) || x.0[0] <= 0.0 {
            return Err(KinematicsError::Precondition(
                "vector is not future-directed timelike".into(),
            ));
        }
        Self::new(x * (1.0 / n2.sqrt()))
    }

    pub(crate) fn new_unchecked(u: FourVector) -> Self {
        AbsoluteVelocity(u)
    }

    pub fn vector(&self) -> FourVector {
        self.0
    }

    pub fn dot(&self, x: &FourVector) -> f64 {
        self.0.dot(x)
    }
}

impl fmt::Debug for AbsoluteVelocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbsoluteVelocity{:?}", self.0)
    }
}

/// Projection onto the rest space `E_u` along `u`: `x + u(u·x)`.
pub fn project_spatial(u: &AbsoluteVelocity, x: &FourVector) -> FourVector {
    *x + u.vector() * u.dot(x)
}

/// Orthonormal basis `(f1, f2, f3)` of `E_u` with `(u, f1, f2, f3)` positively
/// oriented: Gram-Schmidt on the projections of `e1, e2, e3`.
pub fn orthonormal_spatial_frame(u: &AbsoluteVelocity) -> [FourVector; 3] {
    let mut frame = [FourVector::ZERO; 3];
    for i in 0..3 {
        let mut f = project_spatial(u, &FourVector::basis(i + 1));
        for g in &frame[..i] {
            f = f - *g * g.dot(&f);
        }
        frame[i] = f * (1.0 / f.dot(&f).sqrt());
    }
    frame
}

/// Linear map on M stored as a 4×4 array acting on component columns.
#[derive(Clone, Copy, PartialEq)]
pub struct LorentzMap(pub [[f64; 4]; 4]);

impl fmt::Debug for LorentzMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl LorentzMap {
    pub const ZERO: LorentzMap = LorentzMap([[0.0; 4]; 4]);

    pub fn identity() -> Self {
        LorentzMap(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 })
        }))
    }

    pub fn entries(&self) -> [[f64; 4]; 4] {
        self.0
    }

    /// `a⊗b : x ↦ a(b·x)`.
    pub fn tensor(a: &FourVector, b: &FourVector) -> Self {
        LorentzMap(std::array::from_fn(|i| {
            std::array::from_fn(|j| a.0[i] * b.0[j] * METRIC[j])
        }))
    }

    pub fn apply(&self, x: &FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| {
            let r = &self.0[i];
            r[0] * x.0[0] + r[1] * x.0[1] + r[2] * x.0[2] + r[3] * x.0[3]
        }))
    }

    pub fn compose(&self, rhs: &LorentzMap) -> LorentzMap {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        LorentzMap(out)
    }

    pub fn scale(&self, k: f64) -> LorentzMap {
        LorentzMap(self.0.map(|r| r.map(|c| c * k)))
    }

    /// Adjoint with respect to the Lorentz form: `(A*x)·y = x·(Ay)`.
    pub fn adjoint(&self) -> LorentzMap {
        LorentzMap(std::array::from_fn(|i| {
            std::array::from_fn(|j| METRIC[i] * self.0[j][i] * METRIC[j])
        }))
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn max_abs_diff(&self, other: &LorentzMap) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest entry of `A*A − 1` (i.e. of `(Aeᵢ)·(Aeⱼ) − eᵢ·eⱼ`) divided by
    /// `max(1, ‖A‖²)`, the rounding scale of the products involved.
    pub fn lorentz_residual(&self) -> f64 {
        let gram = self.adjoint().compose(self);
        gram.max_abs_diff(&LorentzMap::identity()) / self.max_abs().powi(2).max(1.0)
    }

    pub fn is_lorentz(&self, tol: f64) -> bool {
        self.lorentz_residual() <= tol
    }

    /// Largest entry of `A + A*` divided by `max(1, ‖A‖)`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let sum = *self + self.adjoint();
        sum.max_abs() / self.max_abs().max(1.0)
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        self.antisymmetry_residual() <= tol
    }

    /// `½ Tr(A*A)`. Positive for generators of spatial rotations, negative for
    /// pure boost generators.
    pub fn half_trace_adjoint_square(&self) -> f64 {
        0.5 * self.adjoint().compose(self).trace()
    }

    /// `|A| = sqrt(½ Tr A*A)` for a spatial rotation generator; zero when the
    /// quadratic form is not positive.
    pub fn magnitude(&self) -> f64 {
        self.half_trace_adjoint_square().max(0.0).sqrt()
    }

    /// Determinant by cofactor expansion.
    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        let minor = |r: [usize; 3], c: [usize; 3]| {
            m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
                - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
                + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
        };
        let rows = [1, 2, 3];
        let cols = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
        (0..4)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * minor(rows, cols[j])
            })
            .sum()
    }

    /// `e^{tA}` for a Lorentz-antisymmetric `A`.
    pub fn exp(&self, t: f64) -> Result<LorentzMap> {
        exp_map(self, t)
    }
}

impl Add for LorentzMap {
    type Output = LorentzMap;
    fn add(self, rhs: LorentzMap) -> LorentzMap {
        LorentzMap(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for LorentzMap {
    type Output = LorentzMap;
    fn sub(self, rhs: LorentzMap) -> LorentzMap {
        self + rhs.scale(-1.0)
    }
}

impl Mul for LorentzMap {
    type Output = LorentzMap;
    fn mul(self, rhs: LorentzMap) -> LorentzMap {
        self.compose(&rhs)
    }
}

impl Mul<FourVector> for LorentzMap {
    type Output = FourVector;
    fn mul(self, rhs: FourVector) -> FourVector {
        self.apply(&rhs)
    }
}

/// `x∧y : z ↦ x(y·z) − y(x·z)`.
pub fn wedge(x: &FourVector, y: &FourVector) -> LorentzMap {
    LorentzMap(std::array::from_fn(|i| {
        std::array::from_fn(|j| (x.0[i] * y.0[j] - y.0[i] * x.0[j]) * METRIC[j])
    }))
}

const EXP_TAYLOR_DEGREE: usize = 18;
const EXP_SCALED_NORM: f64 = 0.25;

/// `e^{tA}` by scaling and squaring with a truncated Taylor series.
///
/// Rejects maps that are not antisymmetric with respect to the Lorentz form.
pub fn exp_map(a: &LorentzMap, t: f64) -> Result<LorentzMap> {
    if !t.is_finite() || !a.0.iter().flatten().all(|c| c.is_finite()) {
        return Err(KinematicsError::NonFinite("exponent"));
    }
    KinematicsError::check("antisymmetric generator", a.antisymmetry_residual(), TOL_CONSTRAINT)?;

    let m = a.scale(t);
    let norm =
        m.0.iter()
            .map(|r| r.iter().map(|c| c.abs()).sum::<f64>())
            .fold(0.0, f64::max);
    let squarings = if norm > EXP_SCALED_NORM {
        (norm / EXP_SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let m = m.scale(0.5f64.powi(squarings));

    // Horner: 1 + m(1 + m/2(1 + m/3(...)))
    let id = LorentzMap::identity();
    let mut acc = id;
    for k in (1..=EXP_TAYLOR_DEGREE).rev() {
        acc = id + m.compose(&acc).scale(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = acc.compose(&acc);
    }
    Ok(acc)
}
