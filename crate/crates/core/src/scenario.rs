//! Scenario files: TOML in, deterministic report or CSV out.
//!
//! ```toml
//! kind = "precess"
//! frame = "center"        # or "u0", or a relative 3-velocity [vx, vy, vz]
//! z0 = [1.0, 0.0, 0.0]    # base-frame space vector, boosted into E_ṙ
//!
//! [circle]
//! omega = 0.6
//! rho = 1.0
//!
//! [grid]
//! t_min = 0.0
//! t_max = 10.0
//! n_points = 11
//! ```
//!
//! Velocities are relative 3-velocities in the base frame `e0`. Circle plane
//! axes are given in the rest frame of the centre and carried into `E_u_c` by
//! the boost from `e0`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::boosts::{boost, relative_velocities_collinear, thomas_rotation_discrete};
use crate::error::KinematicsError;
use crate::exec::Execution;
use crate::fermi_walker::{
    thomas_angle_circular, thomas_rotation_circular, thomas_rotation_general, transport_trajectory, TransportConfig,
};
use crate::minkowski::{AbsoluteVelocity, FourVector};
use crate::precession::precession_series;
use crate::worldlines::{CircularWorldLine, InertialWorldLine, WorldLine};

/// Environment variable overriding the output directory when `--out` is absent.
pub const OUT_DIR_ENV: &str = "THOMAS_OUT_DIR";

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

impl ScenarioError {
    /// 1 I/O, 2 parse or schema, 3 constraint violation, 4 numerical drift.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Io { .. } => 1,
            ScenarioError::Parse { .. } | ScenarioError::Invalid(_) => 2,
            ScenarioError::Kinematics(KinematicsError::Drift { .. }) => 4,
            ScenarioError::Kinematics(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ScenarioError::Io { .. } => "io",
            ScenarioError::Parse { .. } | ScenarioError::Invalid(_) => "parse",
            ScenarioError::Kinematics(KinematicsError::Drift { .. }) => "drift",
            ScenarioError::Kinematics(_) => "constraint",
        }
    }

    /// One line for stderr: `error kind=<kind> exit=<code> message="<text>"`.
    pub fn machine_line(&self) -> String {
        format!(
            "error kind={} exit={} message={:?}",
            self.kind(),
            self.exit_code(),
            self.to_string()
        )
    }
}

type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    BoostCompose(BoostCompose),
    CircularThomas(CircularThomas),
    Transport(Transport),
    Precess(Precess),
}

/// Thomas rotation `R_u(u1, u2)` of three velocities.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostCompose {
    #[serde(default)]
    pub u: [f64; 3],
    pub u1: [f64; 3],
    pub u2: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircularThomas {
    pub circle: CircleSpec,
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transport {
    pub circle: Option<CircleSpec>,
    pub inertial: Option<InertialSpec>,
    pub z0: [f64; 3],
    /// Proper-time grid.
    pub grid: GridSpec,
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Precess {
    pub circle: Option<CircleSpec>,
    pub inertial: Option<InertialSpec>,
    pub frame: FrameSpec,
    /// Gyroscope at proper time zero.
    pub z0: [f64; 3],
    /// Observer-time grid.
    pub grid: GridSpec,
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    #[serde(default)]
    pub center: [f64; 3],
    #[serde(default = "default_p1")]
    pub p1: [f64; 3],
    #[serde(default = "default_p2")]
    pub p2: [f64; 3],
    pub omega: f64,
    pub rho: f64,
}

fn default_p1() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

fn default_p2() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertialSpec {
    pub velocity: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum FrameSpec {
    Named(String),
    Velocity([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(ScenarioError::Invalid(format!(
                "n_points must be at least 2, got {}",
                self.n_points
            )));
        }
        if !(self.t_max > self.t_min) || !self.t_min.is_finite() || !self.t_max.is_finite() {
            return Err(ScenarioError::Invalid("grid needs finite t_min < t_max".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        let h = (self.t_max - self.t_min) / (n - 1) as f64;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.t_max
                } else {
                    self.t_min + h * k as f64
                }
            })
            .collect()
    }
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overrides {
    pub step: Option<f64>,
    pub drift_tol: Option<f64>,
}

pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario> {
    toml::from_str(text).map_err(|e| ScenarioError::Parse {
        path: path.to_path_buf(),
        message: e.message().to_string(),
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// A rendered result: file extension plus contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub extension: &'static str,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// `{:.16e}`: 17 significant digits, round-trips every `f64`. Negative zero
/// prints as zero.
pub fn format_number(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn render_csv(table: &Table) -> String {
    let mut out = table.header.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    write_file(path, &render_csv(table))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn velocity(v: [f64; 3]) -> Result<AbsoluteVelocity> {
    Ok(AbsoluteVelocity::from_relative(v)?)
}

fn base_vector(v: [f64; 3]) -> FourVector {
    FourVector::spatial(v[0], v[1], v[2])
}

fn step_override(scenario_step: Option<f64>, ov: &Overrides) -> Result<Option<f64>> {
    let step = ov.step.or(scenario_step);
    if let Some(h) = step {
        if !(h > 0.0) || !h.is_finite() {
            return Err(ScenarioError::Invalid(format!("step must be positive, got {h}")));
        }
    }
    Ok(step)
}

fn config(step: f64, ov: &Overrides) -> TransportConfig {
    let mut cfg = TransportConfig::new(step);
    if let Some(t) = ov.drift_tol {
        cfg.drift_tol = t;
    }
    cfg
}

impl CircleSpec {
    pub fn build(&self) -> Result<CircularWorldLine> {
        let uc = velocity(self.center)?;
        let b = boost(&uc, &AbsoluteVelocity::rest());
        let p1 = b.apply(&base_vector(self.p1));
        let p2 = b.apply(&base_vector(self.p2));
        Ok(CircularWorldLine::from_plane(
            FourVector::ZERO,
            uc,
            p1,
            p2,
            self.omega,
            self.rho,
        )?)
    }
}

enum Line {
    Circle(CircularWorldLine),
    Inertial(InertialWorldLine),
}

impl Line {
    fn from_specs(circle: &Option<CircleSpec>, inertial: &Option<InertialSpec>) -> Result<Self> {
        match (circle, inertial) {
            (Some(c), None) => Ok(Line::Circle(c.build()?)),
            (None, Some(i)) => Ok(Line::Inertial(InertialWorldLine::new(
                FourVector::ZERO,
                velocity(i.velocity)?,
            ))),
            _ => Err(ScenarioError::Invalid(
                "give exactly one of [circle] or [inertial]".into(),
            )),
        }
    }

    fn world_line(&self) -> &dyn WorldLine {
        match self {
            Line::Circle(c) => c,
            Line::Inertial(i) => i,
        }
    }

    fn default_step(&self, grid: &GridSpec) -> f64 {
        match self {
            Line::Circle(c) => TransportConfig::for_circular(c).step,
            Line::Inertial(_) => (grid.t_max - grid.t_min) / 1e4,
        }
    }
}

/// Space vector of the base frame carried into `E_ṙ(s)`.
fn gyroscope_at(w: &dyn WorldLine, s: f64, z: [f64; 3]) -> Result<FourVector> {
    let rdot = w.absolute_velocity(s)?;
    Ok(boost(&rdot, &AbsoluteVelocity::rest()).apply(&base_vector(z)))
}

pub fn run(scenario: &Scenario, ov: &Overrides, exec: Execution) -> Result<Output> {
    match scenario {
        Scenario::BoostCompose(s) => run_boost_compose(s),
        Scenario::CircularThomas(s) => run_circular_thomas(s, ov),
        Scenario::Transport(s) => Ok(Output {
            extension: "csv",
            contents: render_csv(&transport_table(s, ov)?),
        }),
        Scenario::Precess(s) => Ok(Output {
            extension: "csv",
            contents: render_csv(&precess_table(s, ov, exec)?),
        }),
    }
}

fn report_line(out: &mut String, key: &str, value: f64) {
    let _ = writeln!(out, "{key} = {}", format_number(value));
}

fn run_boost_compose(s: &BoostCompose) -> Result<Output> {
    let (u, u1, u2) = (velocity(s.u)?, velocity(s.u1)?, velocity(s.u2)?);
    let aa = thomas_rotation_discrete(&u, &u1, &u2).angle_axis();
    let mut out = String::from("kind = boost-compose\n");
    report_line(&mut out, "angle", aa.angle);
    match aa.axis {
        Some(axis) => {
            for (i, c) in axis.components().iter().enumerate() {
                report_line(&mut out, &format!("axis_{i}"), *c);
            }
        }
        None => out.push_str("axis = none\n"),
    }
    let collinear = relative_velocities_collinear(&u, &u1, &u2, 1e-10);
    let _ = writeln!(out, "collinear = {collinear}");
    Ok(Output {
        extension: "txt",
        contents: out,
    })
}

fn run_circular_thomas(s: &CircularThomas, ov: &Overrides) -> Result<Output> {
    let w = s.circle.build()?;
    let step = step_override(s.step, ov)?.unwrap_or(TransportConfig::for_circular(&w).step);
    let cfg = config(step, ov);
    let closed = thomas_angle_circular(&w);
    let axis = w.kernel_axis();
    let extracted = thomas_rotation_circular(&w)?.signed_angle_about(&axis);
    let numeric = thomas_rotation_general(&w, 0.0, w.proper_period(), &cfg)?.signed_angle_about(&axis);
    let mut out = String::from("kind = circular-thomas\n");
    report_line(&mut out, "speed", w.speed());
    report_line(&mut out, "lambda", w.lambda());
    report_line(&mut out, "accumulated_angle", closed.accumulated);
    report_line(&mut out, "closed_form_angle", closed.reduced);
    report_line(&mut out, "operator_angle", extracted);
    report_line(&mut out, "numeric_angle", numeric);
    report_line(&mut out, "difference", numeric - closed.reduced);
    Ok(Output {
        extension: "txt",
        contents: out,
    })
}

pub fn transport_table(s: &Transport, ov: &Overrides) -> Result<Table> {
    s.grid.validate()?;
    let line = Line::from_specs(&s.circle, &s.inertial)?;
    let step = step_override(s.step, ov)?.unwrap_or(line.default_step(&s.grid));
    let w = line.world_line();
    let z0 = gyroscope_at(w, s.grid.t_min, s.z0)?;
    let samples = transport_trajectory(w, z0, &s.grid.points(), &config(step, ov))?;
    Ok(Table {
        header: vec!["s", "z0", "z1", "z2", "z3", "velocity_dot", "norm_drift"],
        rows: samples
            .iter()
            .map(|p| {
                let z = p.z.components();
                vec![p.s, z[0], z[1], z[2], z[3], p.velocity_dot, p.norm]
            })
            .collect(),
    })
}

pub fn precess_table(s: &Precess, ov: &Overrides, exec: Execution) -> Result<Table> {
    s.grid.validate()?;
    let line = Line::from_specs(&s.circle, &s.inertial)?;
    let step = step_override(s.step, ov)?.unwrap_or(line.default_step(&s.grid));
    let u = match (&s.frame, &line) {
        (FrameSpec::Velocity(v), _) => velocity(*v)?,
        (FrameSpec::Named(n), Line::Circle(c)) if n == "center" => c.center(),
        (FrameSpec::Named(n), Line::Circle(c)) if n == "u0" => c.u0(),
        (FrameSpec::Named(n), _) => {
            return Err(ScenarioError::Invalid(format!(
                "frame {n:?} needs a [circle]; use \"center\", \"u0\" or a velocity"
            )))
        }
    };
    let w = line.world_line();
    let z0 = gyroscope_at(w, 0.0, s.z0)?;
    let series = precession_series(&u, w, z0, &s.grid.points(), &config(step, ov), exec)?;
    Ok(Table {
        header: vec![
            "t",
            "z0",
            "z1",
            "z2",
            "z3",
            "omega_10",
            "omega_20",
            "omega_30",
            "omega_21",
            "omega_31",
            "omega_32",
            "omega_norm",
        ],
        rows: series
            .samples
            .iter()
            .map(|p| {
                let z = p.z_u.components();
                let m = p.omega_u.entries();
                vec![
                    p.t,
                    z[0],
                    z[1],
                    z[2],
                    z[3],
                    m[1][0],
                    m[2][0],
                    m[3][0],
                    m[2][1],
                    m[3][1],
                    m[3][2],
                    p.omega_u.magnitude(),
                ]
            })
            .collect(),
    })
}

/// Output directory: `--out`, else the environment override, else `.`.
pub fn output_dir(cli: Option<&Path>) -> PathBuf {
    cli.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Runs one scenario file and writes `<out>/<stem>.<ext>`; returns the written path.
pub fn run_scenario(path: &Path, out_dir: &Path, ov: &Overrides, exec: Execution) -> Result<PathBuf> {
    let scenario = load_scenario(path)?;
    let output = run(&scenario, ov, exec)?;
    let stem = path.file_stem().unwrap_or_else(|| "scenario".as_ref());
    fs::create_dir_all(out_dir).map_err(|source| ScenarioError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let target = out_dir.join(stem).with_extension(output.extension);
    write_file(&target, &output.contents)?;
    Ok(target)
}
