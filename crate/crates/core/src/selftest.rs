//! Invariant suite behind `thomas selftest`: a fixed-seed sample of the
//! identities the library relies on, each reduced to one pass/fail line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boosts::{boost, thomas_rotation_discrete};
use crate::fermi_walker::{
    thomas_angle_circular, thomas_rotation_circular, transport_closed_form_circular, transport_numeric, TransportConfig,
};
use crate::minkowski::{AbsoluteVelocity, FourVector, LorentzMap};
use crate::precession::{angular_velocity_vector, central_frame_precession};
use crate::worldlines::CircularWorldLine;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Worst residual seen.
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn random_velocity(rng: &mut ChaCha8Rng, max_speed: f64) -> AbsoluteVelocity {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.0 && n <= 1.0 {
            let k = max_speed * rng.gen::<f64>() / n;
            return AbsoluteVelocity::from_relative([v[0] * k, v[1] * k, v[2] * k]).expect("speed below 1");
        }
    }
}

fn boost_algebra(rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (u, u1) = (random_velocity(rng, 0.95), random_velocity(rng, 0.95));
        let b = boost(&u1, &u);
        let back = boost(&u, &u1);
        worst = worst
            .max(b.map().lorentz_residual())
            .max(b.apply(&u.vector()).max_abs_diff(&u1.vector()) / u1.vector().component_norm())
            .max(back.map().compose(b.map()).max_abs_diff(&LorentzMap::identity()) / b.map().max_abs().powi(2));
    }
    Check {
        name: "boost algebra",
        residual: worst,
        tolerance: 1e-12,
    }
}

fn discrete_rotation(rng: &mut ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (u, u1, u2) = (
            random_velocity(rng, 0.9),
            random_velocity(rng, 0.9),
            random_velocity(rng, 0.9),
        );
        let r = thomas_rotation_discrete(&u, &u1, &u2);
        let fix = r.map().apply(&u.vector()).max_abs_diff(&u.vector()) / u.vector().component_norm();
        worst = worst.max(fix).max(r.map().lorentz_residual());
    }
    Check {
        name: "discrete Thomas rotation fixes u",
        residual: worst,
        tolerance: 1e-10,
    }
}

fn circular_angle() -> Check {
    let mut worst: f64 = 0.0;
    for &w in &[0.1, 0.3, 0.6, 0.9] {
        let line = CircularWorldLine::standard(w, 1.0).expect("valid circle");
        let got = thomas_rotation_circular(&line)
            .map(|r| r.signed_angle_about(&line.kernel_axis()))
            .unwrap_or(f64::NAN);
        worst = worst.max((got - thomas_angle_circular(&line).reduced).abs());
    }
    Check {
        name: "circular Thomas angle",
        residual: worst,
        tolerance: 1e-9,
    }
}

fn transport_agreement() -> Check {
    let line = CircularWorldLine::standard(0.6, 1.0).expect("valid circle");
    let cfg = TransportConfig::for_circular(&line);
    let z0 = FourVector::basis(1);
    let s = line.proper_period();
    let residual = match (
        transport_numeric(&line, z0, 0.0, s, &cfg),
        transport_closed_form_circular(&line, z0, line.lambda() * s),
    ) {
        (Ok(num), Ok(closed)) => num.z.max_abs_diff(&closed),
        _ => f64::INFINITY,
    };
    Check {
        name: "numeric vs closed-form transport",
        residual,
        tolerance: 1e-8,
    }
}

fn central_precession() -> Check {
    let line = CircularWorldLine::standard(0.6, 1.0).expect("valid circle");
    let rate = angular_velocity_vector(&line.center(), &central_frame_precession(&line)).dot(&line.kernel_axis());
    Check {
        name: "central-frame precession rate",
        residual: (rate + 0.15).abs(),
        tolerance: 1e-10,
    }
}

pub fn run_selftest(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        boost_algebra(&mut rng),
        discrete_rotation(&mut rng),
        circular_angle(),
        transport_agreement(),
        central_precession(),
    ]
}
