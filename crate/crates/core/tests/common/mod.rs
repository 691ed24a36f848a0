//! Oracles for the integration tests, written against plain coordinates so
//! they share no code path with the library's coordinate-free algebra.
#![allow(dead_code)]

use nalgebra::{Matrix4, Vector3, Vector4};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thomas_core::minkowski::{AbsoluteVelocity, FourVector, LorentzMap};

pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

pub fn mat(m: &LorentzMap) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m.0[i][j])
}

pub fn vec4(x: &FourVector) -> Vector4<f64> {
    Vector4::from_column_slice(&x.components())
}

pub fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::from(ETA))
}

/// Textbook pure boost with velocity `v`: maps `e0` to `γ(e0 + v)`.
pub fn textbook_boost(v: Vector3<f64>) -> Matrix4<f64> {
    let v2 = v.norm_squared();
    let g = 1.0 / (1.0 - v2).sqrt();
    let mut m = Matrix4::identity();
    m[(0, 0)] = g;
    for i in 0..3 {
        m[(0, i + 1)] = g * v[i];
        m[(i + 1, 0)] = g * v[i];
        for j in 0..3 {
            let k = if v2 > 0.0 { (g - 1.0) * v[i] * v[j] / v2 } else { 0.0 };
            m[(i + 1, j + 1)] += k;
        }
    }
    m
}

/// Velocity of `u` in the base frame.
pub fn three_velocity(u: &Vector4<f64>) -> Vector3<f64> {
    Vector3::new(u[1], u[2], u[3]) / u[0]
}

pub fn mdot(x: &Vector4<f64>, y: &Vector4<f64>) -> f64 {
    (0..4).map(|i| ETA[i] * x[i] * y[i]).sum()
}

/// Orthonormal basis of the space orthogonal to `u`, by Gram–Schmidt on `e1, e2, e3`.
pub fn rest_space_basis(u: &Vector4<f64>) -> [Vector4<f64>; 3] {
    let mut out: Vec<Vector4<f64>> = Vec::new();
    for k in 1..4 {
        let mut x = Vector4::zeros();
        x[k] = 1.0;
        x += u * mdot(u, &x);
        for f in &out {
            x -= f * mdot(f, &x);
        }
        let n = mdot(&x, &x).sqrt();
        out.push(x / n);
    }
    [out[0], out[1], out[2]]
}

/// The 3×3 matrix `fᵢ·(M fⱼ)` of `M` restricted to the rest space of `u`.
pub fn restriction(m: &Matrix4<f64>, u: &Vector4<f64>) -> nalgebra::Matrix3<f64> {
    let f = rest_space_basis(u);
    nalgebra::Matrix3::from_fn(|i, j| mdot(&f[i], &(m * f[j])))
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn random_velocity(rng: &mut ChaCha8Rng, max_speed: f64) -> AbsoluteVelocity {
    let d = random_direction(rng);
    let s = max_speed * rng.gen::<f64>();
    AbsoluteVelocity::from_relative([d[0] * s, d[1] * s, d[2] * s]).unwrap()
}

pub fn random_spatial(rng: &mut ChaCha8Rng) -> FourVector {
    FourVector::spatial(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

pub fn max_abs(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}
