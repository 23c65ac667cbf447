//! Rebuilding a trajectory from its distance and direction data.
//!
//! A moving point is split into a distance `D(t)` from a fixed center and a
//! unit direction `e(t)`. Given `D'` (or `D''` with an initial `D'`) and a
//! direction field `e' = f(t, e)` tangent to the unit circle, classical
//! fourth-order Runge–Kutta with a fixed step recovers `P = center + D e`.
//! Directions are renormalized after every step; the drift removed is
//! recorded.
//!
//! In space the direction is known only through its projections onto the
//! coordinate planes xOy, xOz and yOz. The xOy and yOz directions fix the
//! ratios `x : y : z`; the overall sign is carried by continuity, and the xOz
//! direction serves as a consistency check.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::curve::{ellipse_curve, make_catalog_curve, PlaneCurve, SpaceCurve};
use crate::ellipse::{focus_frame_profile, origin_frame_profile, EllipseParams};
use crate::error::{Error, Result};
use crate::output::Table;
use crate::plane::distance_kinematics;
use crate::space::{space_distance_kinematics, PLANE_NAMES};
use crate::vec::{Vec2, Vec3, Vector};

pub type ScalarField = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type DirectionField = Arc<dyn Fn(f64, Vec2) -> Vec2 + Send + Sync>;

/// Largest `|f(t, e)·e|` accepted for a direction field.
pub const TANGENCY_TOL: f64 = 1e-8;
/// Largest disagreement between the three projected directions in space.
pub const CONSISTENCY_TOL: f64 = 1e-6;
/// Projected direction components smaller than this count as a collapse.
pub const COLLAPSE_TOL: f64 = 1e-9;

/// Right-hand side for the distance.
#[derive(Clone)]
pub enum DistanceRhs {
    /// `D' = f(t)`.
    FirstOrder(ScalarField),
    /// `D'' = f(t)` with `D'(t₀) = initial_rate`.
    SecondOrder { accel: ScalarField, initial_rate: f64 },
}

impl std::fmt::Debug for DistanceRhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::FirstOrder(_) => f.write_str("FirstOrder"),
            Self::SecondOrder { initial_rate, .. } => write!(f, "SecondOrder {{ initial_rate: {initial_rate} }}"),
        }
    }
}

/// Sampled path with the unit-norm drift removed by renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<V> {
    pub samples: Vec<(f64, V)>,
    pub max_drift: f64,
}

impl<V: Vector> Trajectory<V> {
    /// Largest distance to `reference(t)` over the samples.
    pub fn max_error(&self, reference: impl Fn(f64) -> Result<V>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &(t, p) in &self.samples {
            worst = worst.max((p - reference(t)?).norm());
        }
        Ok(worst)
    }

    /// Columns `t,x,y` or `t,x,y,z`.
    pub fn table(&self) -> Table {
        let header: &[&str] = if V::DIM == 2 { &["t", "x", "y"] } else { &["t", "x", "y", "z"] };
        let mut table = Table::new(header);
        for &(t, p) in &self.samples {
            let mut row = vec![t];
            row.extend(p.components());
            table.push(row);
        }
        table
    }
}

fn check_domain(domain: (f64, f64), step: f64) -> Result<usize> {
    let (t0, t1) = domain;
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(Error::InvalidProblem(format!("invalid domain [{t0}, {t1}]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidProblem(format!("step must be positive, got {step}")));
    }
    let n = ((t1 - t0) / step).ceil();
    if n > 1e8 {
        return Err(Error::InvalidProblem(format!("step {step} needs too many steps")));
    }
    Ok((n as usize).max(1))
}

fn check_unit(e: Vec2, what: &str) -> Result<()> {
    if (e.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProblem(format!("{what} must be a unit vector, |e| = {}", e.norm())));
    }
    Ok(())
}

/// Sample times `t₀ + i h`, `h = (t₁ − t₀)/n`, `n = ⌈(t₁ − t₀)/step⌉`; the
/// last is exactly `t₁`.
fn grid(domain: (f64, f64), n: usize) -> Vec<f64> {
    let h = (domain.1 - domain.0) / n as f64;
    (0..=n).map(|i| if i == n { domain.1 } else { domain.0 + i as f64 * h }).collect()
}

fn probe(rhs: &DirectionField, t: f64, e: Vec2) -> Result<Vec2> {
    let f = rhs(t, e);
    let defect = f.dot(e).abs();
    if !(defect <= TANGENCY_TOL) {
        return Err(Error::NonTangentField { t, defect });
    }
    Ok(f)
}

/// One RK4 step for the direction. Returns the renormalized direction and
/// the drift `| |e| − 1 |` before renormalization.
fn direction_step(rhs: &DirectionField, t: f64, h: f64, e: Vec2) -> Result<(Vec2, f64)> {
    let k1 = probe(rhs, t, e)?;
    let k2 = rhs(t + h / 2.0, e + k1 * (h / 2.0));
    let k3 = rhs(t + h / 2.0, e + k2 * (h / 2.0));
    let k4 = rhs(t + h, e + k3 * h);
    let next = e + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    let n = next.norm();
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::NonTangentField { t, defect: f64::INFINITY });
    }
    Ok((next / n, (n - 1.0).abs()))
}

/// Integrate `e' = rhs(t, e)` from the unit vector `e0`.
pub fn integrate_unit_direction(
    rhs: &DirectionField,
    e0: Vec2,
    domain: (f64, f64),
    step: f64,
) -> Result<Trajectory<Vec2>> {
    check_unit(e0, "initial direction")?;
    let times = grid(domain, check_domain(domain, step)?);
    let mut e = e0;
    let mut samples = vec![(times[0], e)];
    let mut max_drift: f64 = 0.0;
    for w in times.windows(2) {
        let (next, drift) = direction_step(rhs, w[0], w[1] - w[0], e)?;
        probe(rhs, w[1], next)?;
        e = next;
        max_drift = max_drift.max(drift);
        samples.push((w[1], e));
    }
    Ok(Trajectory { samples, max_drift })
}

/// State of the distance integration: `D` and, for second-order data, `D'`.
struct DistanceState<'a> {
    rhs: &'a DistanceRhs,
    d: f64,
    rate: f64,
}

impl DistanceState<'_> {
    fn step(&mut self, t: f64, h: f64) {
        match self.rhs {
            DistanceRhs::FirstOrder(f) => {
                let (k1, k2, k4) = (f(t), f(t + h / 2.0), f(t + h));
                self.d += h / 6.0 * (k1 + 4.0 * k2 + k4);
            }
            DistanceRhs::SecondOrder { accel, .. } => {
                // y = (D, V), y' = (V, a(t)).
                let (a1, a2, a4) = (accel(t), accel(t + h / 2.0), accel(t + h));
                let v = self.rate;
                let (k1d, k1v) = (v, a1);
                let (k2d, k2v) = (v + h / 2.0 * k1v, a2);
                let (k3d, k3v) = (v + h / 2.0 * k2v, a2);
                let (k4d, k4v) = (v + h * k3v, a4);
                self.d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
                self.rate += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            }
        }
    }
}

/// Distance data, direction field and initial values for a plane trajectory.
#[derive(Clone)]
pub struct PlaneReconstructionProblem {
    pub center: Vec2,
    pub distance: DistanceRhs,
    pub direction: DirectionField,
    pub d0: f64,
    pub e0: Vec2,
    pub domain: (f64, f64),
    pub step: f64,
}

impl PlaneReconstructionProblem {
    /// Validates `D₀ > 0`, `|e₀| = 1` and the domain/step.
    pub fn new(
        center: Vec2,
        distance: DistanceRhs,
        direction: DirectionField,
        d0: f64,
        e0: Vec2,
        domain: (f64, f64),
        step: f64,
    ) -> Result<Self> {
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::InvalidProblem(format!("initial distance must be positive, got {d0}")));
        }
        check_unit(e0, "initial direction")?;
        check_domain(domain, step)?;
        Ok(Self { center, distance, direction, d0, e0, domain, step })
    }

    /// Data generated from a curve: `D' = d|r − c|/dt` (or `D''` with the
    /// initial `D'`), and `e' = ω(t) perp(e)` with
    /// `ω = (d ∧ d') / |d|²`, `d = r − c`.
    pub fn from_curve(curve: &PlaneCurve, center: Vec2, second_order: bool, step: f64) -> Result<Self> {
        let domain = curve.domain();
        let k0 = distance_kinematics(curve, center, domain.0)?;
        let c = curve.clone();
        let omega = move |t: f64| -> f64 {
            let d = c.position(t).map(|p| p - center);
            match (d, c.derivative(t, 1)) {
                (Ok(d), Ok(v)) => d.cross(v) / d.dot(d),
                _ => f64::NAN,
            }
        };
        let c = curve.clone();
        let kin = move |t: f64| distance_kinematics(&c, center, t);
        let distance = if second_order {
            let kin = kin.clone();
            DistanceRhs::SecondOrder { accel: Arc::new(move |t| kin(t).map_or(f64::NAN, |k| k.d2d)), initial_rate: k0.dd }
        } else {
            DistanceRhs::FirstOrder(Arc::new(move |t| kin(t).map_or(f64::NAN, |k| k.dd)))
        };
        let e0 = (curve.position(domain.0)? - center) / k0.d;
        Self::new(center, distance, rotation_field(omega), k0.d, e0, domain, step)
    }
}

/// The direction field `e' = ω(t) perp(e)`, tangent by construction.
pub fn rotation_field(omega: impl Fn(f64) -> f64 + Send + Sync + 'static) -> DirectionField {
    Arc::new(move |t, e: Vec2| e.perp() * omega(t))
}

/// Integrate distance and direction and assemble `P = center + D e`.
pub fn reconstruct_plane(problem: &PlaneReconstructionProblem) -> Result<Trajectory<Vec2>> {
    let times = grid(problem.domain, check_domain(problem.domain, problem.step)?);
    let initial_rate = match &problem.distance {
        DistanceRhs::SecondOrder { initial_rate, .. } => *initial_rate,
        DistanceRhs::FirstOrder(_) => 0.0,
    };
    let mut dist = DistanceState { rhs: &problem.distance, d: problem.d0, rate: initial_rate };
    let mut e = problem.e0;
    let mut samples = vec![(times[0], problem.center + e * dist.d)];
    let mut max_drift: f64 = 0.0;
    for (i, w) in times.windows(2).enumerate() {
        let h = w[1] - w[0];
        let (next, drift) = direction_step(&problem.direction, w[0], h, e)?;
        e = next;
        max_drift = max_drift.max(drift);
        dist.step(w[0], h);
        if !(dist.d > 0.0) {
            return Err(Error::StepTooLarge { t: w[1], step_index: i + 1, d: dist.d });
        }
        samples.push((w[1], problem.center + e * dist.d));
    }
    Ok(Trajectory { samples, max_drift })
}

/// Distance data and the three projected direction fields for a space
/// trajectory.
#[derive(Clone)]
pub struct SpaceReconstructionProblem {
    pub center: Vec3,
    pub distance: DistanceRhs,
    /// Fields for the xOy, xOz and yOz directions.
    pub directions: [DirectionField; 3],
    pub d0: f64,
    pub e0: [Vec2; 3],
    pub domain: (f64, f64),
    pub step: f64,
}

/// Unit direction in space from projected directions `e_xy = (p, q)` and
/// `e_yz = (r, s)`: `±(pr, qr, qs)` normalized, with the sign making the xOy
/// part agree with `reference` (a previous direction) or, without one, with
/// `e_xy`. Also returns the largest mismatch against all three projections.
fn triangulate(e: &[Vec2; 3], reference: Option<Vec3>) -> Option<(Vec3, f64)> {
    let (p, q, r, s) = (e[0].x, e[0].y, e[2].x, e[2].y);
    let u = Vec3::new(p * r, q * r, q * s);
    let n = u.norm();
    if !(n > 0.0) {
        return None;
    }
    let mut u = u / n;
    let flip = match reference {
        Some(prev) => u.dot(prev) < 0.0,
        None => u.xy().dot(e[0]) < 0.0,
    };
    if flip {
        u = -u;
    }
    let residual = [u.xy(), u.xz(), u.yz()]
        .iter()
        .zip(e)
        .map(|(proj, ei)| proj.unit().map_or(f64::INFINITY, |w| (w - *ei).norm()))
        .fold(0.0, f64::max);
    Some((u, residual))
}

impl SpaceReconstructionProblem {
    /// Validates the initial values, including that the three initial
    /// projected directions belong to a single direction in space.
    pub fn new(
        center: Vec3,
        distance: DistanceRhs,
        directions: [DirectionField; 3],
        d0: f64,
        e0: [Vec2; 3],
        domain: (f64, f64),
        step: f64,
    ) -> Result<Self> {
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::InvalidProblem(format!("initial distance must be positive, got {d0}")));
        }
        for (e, name) in e0.iter().zip(PLANE_NAMES) {
            check_unit(*e, &format!("initial {name} direction"))?;
        }
        check_domain(domain, step)?;
        match triangulate(&e0, None) {
            Some((_, residual)) if residual <= CONSISTENCY_TOL => {}
            Some((_, residual)) => return Err(Error::InconsistentDirections { t: domain.0, residual }),
            None => return Err(Error::InconsistentDirections { t: domain.0, residual: f64::INFINITY }),
        }
        Ok(Self { center, distance, directions, d0, e0, domain, step })
    }

    /// Data generated from a space curve, relative to `center`.
    pub fn from_curve(curve: &SpaceCurve, center: Vec3, second_order: bool, step: f64) -> Result<Self> {
        let domain = curve.domain();
        let shifted = curve.clone().affine(|v| v, -center);
        let k0 = space_distance_kinematics(&shifted, domain.0)?;
        let project = [Vec3::xy, Vec3::xz, Vec3::yz];
        let directions = project.map(|proj| {
            let c = shifted.clone();
            rotation_field(move |t| match (c.position(t), c.derivative(t, 1)) {
                (Ok(d), Ok(v)) => {
                    let (d, v) = (proj(d), proj(v));
                    d.cross(v) / d.dot(d)
                }
                _ => f64::NAN,
            })
        });
        let kin = {
            let c = shifted.clone();
            move |t: f64| space_distance_kinematics(&c, t)
        };
        let distance = if second_order {
            let kin = kin.clone();
            DistanceRhs::SecondOrder { accel: Arc::new(move |t| kin(t).map_or(f64::NAN, |k| k.d2d)), initial_rate: k0.dd }
        } else {
            DistanceRhs::FirstOrder(Arc::new(move |t| kin(t).map_or(f64::NAN, |k| k.dd)))
        };
        let r0 = shifted.position(domain.0)?;
        let e0 = project.map(|proj| proj(r0).unit()).into_iter().collect::<Result<Vec<_>>>();
        let e0 = e0.map_err(|_| Error::AxisProjectionDegenerate { t: domain.0, plane: "initial" })?;
        Self::new(center, distance, directions, k0.d, [e0[0], e0[1], e0[2]], domain, step)
    }
}

fn check_projections(e: &[Vec2; 3], prev: &[Vec2; 3], t: f64, step_index: usize) -> Result<()> {
    for k in 0..3 {
        let (a, b) = (e[k], prev[k]);
        let collapsed = a.x.abs() < COLLAPSE_TOL
            || a.y.abs() < COLLAPSE_TOL
            || a.x.signum() != b.x.signum()
            || a.y.signum() != b.y.signum();
        if collapsed {
            return Err(Error::ProjectionCollapse { t, step_index, plane: PLANE_NAMES[k] });
        }
    }
    Ok(())
}

/// Integrate distance and the three projected directions; recover
/// `P = center + D u` with `u` triangulated at every step.
pub fn reconstruct_space(problem: &SpaceReconstructionProblem) -> Result<Trajectory<Vec3>> {
    let times = grid(problem.domain, check_domain(problem.domain, problem.step)?);
    let initial_rate = match &problem.distance {
        DistanceRhs::SecondOrder { initial_rate, .. } => *initial_rate,
        DistanceRhs::FirstOrder(_) => 0.0,
    };
    let mut dist = DistanceState { rhs: &problem.distance, d: problem.d0, rate: initial_rate };
    let mut e = problem.e0;
    check_projections(&e, &e, times[0], 0)?;
    let (mut u, _) = triangulate(&e, None)
        .ok_or(Error::InconsistentDirections { t: times[0], residual: f64::INFINITY })?;
    let mut samples = vec![(times[0], problem.center + u * dist.d)];
    let mut max_drift: f64 = 0.0;
    for (i, w) in times.windows(2).enumerate() {
        let h = w[1] - w[0];
        let mut next = e;
        for k in 0..3 {
            let (ek, drift) = direction_step(&problem.directions[k], w[0], h, e[k])?;
            next[k] = ek;
            max_drift = max_drift.max(drift);
        }
        check_projections(&next, &e, w[1], i + 1)?;
        e = next;
        let (un, residual) = triangulate(&e, Some(u))
            .ok_or(Error::ProjectionCollapse { t: w[1], step_index: i + 1, plane: PLANE_NAMES[0] })?;
        if !(residual <= CONSISTENCY_TOL) {
            return Err(Error::InconsistentDirections { t: w[1], residual });
        }
        u = un;
        dist.step(w[0], h);
        if !(dist.d > 0.0) {
            return Err(Error::StepTooLarge { t: w[1], step_index: i + 1, d: dist.d });
        }
        samples.push((w[1], problem.center + u * dist.d));
    }
    Ok(Trajectory { samples, max_drift })
}

/// Built-in reconstruction scenarios.
pub const PRESETS: &[&str] = &["ellipse-origin", "ellipse-focus", "circle", "helix"];

/// A ready-to-run reconstruction with its generating curve.
#[derive(Clone)]
pub enum Preset {
    Plane { problem: PlaneReconstructionProblem, reference: PlaneCurve, tolerance: f64 },
    Space { problem: SpaceReconstructionProblem, reference: SpaceCurve, tolerance: f64 },
}

/// Knobs shared by the presets. `None` picks the default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PresetOptions {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub radius: Option<f64>,
    pub pitch: Option<f64>,
    pub domain: Option<(f64, f64)>,
    /// Defaults to the domain length over 10⁴.
    pub step: Option<f64>,
    pub second_order: bool,
}

/// Ellipse reconstruction from the closed-form origin- or focus-frame data.
fn ellipse_problem(p: EllipseParams, focus: bool, domain: (f64, f64), step: f64, second_order: bool) -> Result<PlaneReconstructionProblem> {
    let center = if focus { p.focus() } else { Vec2::zero() };
    let kin = move |t: f64| if focus { focus_frame_profile(&p, t).0 } else { origin_frame_profile(&p, t) };
    let k0 = kin(domain.0);
    let distance = if second_order {
        DistanceRhs::SecondOrder { accel: Arc::new(move |t| kin(t).d2d), initial_rate: k0.dd }
    } else {
        DistanceRhs::FirstOrder(Arc::new(move |t| kin(t).dd))
    };
    // Both frames turn counter-clockwise, so the signed rate is the speed.
    let direction = rotation_field(move |t| kin(t).rot_speed);
    let (s, c) = domain.0.sin_cos();
    let e0 = (Vec2::new(p.a * c, p.b * s) - center).unit()?;
    PlaneReconstructionProblem::new(center, distance, direction, k0.d, e0, domain, step)
}

pub fn preset(name: &str, opts: &PresetOptions) -> Result<Preset> {
    let step_for = |d: (f64, f64)| opts.step.unwrap_or((d.1 - d.0) * 1e-4);
    let params = |entries: &[(&str, Option<f64>)]| {
        entries.iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
    };
    match name {
        "ellipse-origin" | "ellipse-focus" => {
            let p = EllipseParams::new(opts.a.unwrap_or(2.0), opts.b.unwrap_or(1.0))?;
            let domain = opts.domain.unwrap_or((0.0, TAU));
            let problem = ellipse_problem(p, name == "ellipse-focus", domain, step_for(domain), opts.second_order)?;
            let reference = ellipse_curve(p.a, p.b, Vec2::zero())?.with_domain(domain)?;
            Ok(Preset::Plane { problem, reference, tolerance: 1e-6 })
        }
        "circle" => {
            let domain = opts.domain.unwrap_or((0.0, TAU));
            let map = params(&[("radius", opts.radius)]);
            let reference = make_catalog_curve("circle", &map)?.into_plane()?.with_domain(domain)?;
            // Seen from an off-center point so that D varies.
            let center = Vec2::new(0.25, -0.1) * reference.position(domain.0)?.norm();
            let problem = PlaneReconstructionProblem::from_curve(&reference, center, opts.second_order, step_for(domain))?;
            Ok(Preset::Plane { problem, reference, tolerance: 1e-6 })
        }
        "helix" => {
            let domain = opts.domain.unwrap_or((0.0, PI));
            let map = params(&[("radius", opts.radius), ("pitch", opts.pitch), ("cx", Some(2.0)), ("cy", Some(2.0)), ("cz", Some(1.0))]);
            let reference = make_catalog_curve("helix", &map)?.into_space()?.with_domain(domain)?;
            let problem = SpaceReconstructionProblem::from_curve(&reference, Vec3::zero(), opts.second_order, step_for(domain))?;
            Ok(Preset::Space { problem, reference, tolerance: 1e-5 })
        }
        other => Err(Error::InvalidProblem(format!("unknown preset {other:?}; expected one of {PRESETS:?}"))),
    }
}

/// Outcome of running a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    pub table: Table,
    pub max_error: f64,
    pub tolerance: f64,
    pub max_drift: f64,
}

impl Preset {
    pub fn run(&self) -> Result<PresetRun> {
        match self {
            Preset::Plane { problem, reference, tolerance } => {
                let traj = reconstruct_plane(problem)?;
                let max_error = traj.max_error(|t| reference.position(t))?;
                Ok(PresetRun { table: traj.table(), max_error, tolerance: *tolerance, max_drift: traj.max_drift })
            }
            Preset::Space { problem, reference, tolerance } => {
                let traj = reconstruct_space(problem)?;
                let max_error = traj.max_error(|t| reference.position(t))?;
                Ok(PresetRun { table: traj.table(), max_error, tolerance: *tolerance, max_drift: traj.max_drift })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constant_and_rotating_directions() {
        let zero: DirectionField = Arc::new(|_, _| Vec2::zero());
        let tr = integrate_unit_direction(&zero, Vec2::new(1.0, 0.0), (0.0, 1.0), 0.1).unwrap();
        assert!(tr.samples.iter().all(|(_, e)| *e == Vec2::new(1.0, 0.0)));

        let unit_rate = rotation_field(|_| 1.0);
        let tr = integrate_unit_direction(&unit_rate, Vec2::new(1.0, 0.0), (0.0, FRAC_PI_2), 1e-3).unwrap();
        let last = tr.samples.last().unwrap();
        assert_eq!(last.0, FRAC_PI_2);
        assert!((last.1 - Vec2::new(0.0, 1.0)).norm() < 1e-8);
        assert!(tr.max_drift < 1e-12);
    }

    #[test]
    fn non_tangent_field_rejected() {
        let radial: DirectionField = Arc::new(|_, e| e);
        assert!(matches!(
            integrate_unit_direction(&radial, Vec2::new(1.0, 0.0), (0.0, 1.0), 0.1),
            Err(Error::NonTangentField { .. })
        ));
        let f = rotation_field(|_| 1.0);
        assert!(matches!(
            integrate_unit_direction(&f, Vec2::new(2.0, 0.0), (0.0, 1.0), 0.1),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn ellipse_direction_field() {
        let p = EllipseParams::new(2.0, 1.0).unwrap();
        let f = rotation_field(move |t| origin_frame_profile(&p, t).rot_speed);
        let tr = integrate_unit_direction(&f, Vec2::new(1.0, 0.0), (0.0, FRAC_PI_2), FRAC_PI_2 * 1e-4).unwrap();
        assert!((tr.samples.last().unwrap().1 - Vec2::new(0.0, 1.0)).norm() < 1e-6);
    }

    #[test]
    fn circle_closes() {
        let constant = DistanceRhs::FirstOrder(Arc::new(|_| 0.0));
        let pb = PlaneReconstructionProblem::new(Vec2::zero(), constant, rotation_field(|_| 1.0), 2.0, Vec2::new(1.0, 0.0), (0.0, TAU), TAU * 1e-3).unwrap();
        let tr = reconstruct_plane(&pb).unwrap();
        assert!((tr.samples.last().unwrap().1 - tr.samples[0].1).norm() < 1e-8);
    }

    #[test]
    fn presets_round_trip() {
        for name in PRESETS {
            for second_order in [false, true] {
                let run = preset(name, &PresetOptions { second_order, ..Default::default() }).unwrap().run().unwrap();
                assert!(run.max_error < run.tolerance, "{name} {second_order}: {}", run.max_error);
            }
        }
    }

    #[test]
    fn degeneracies() {
        let shrinking = DistanceRhs::FirstOrder(Arc::new(|_| -1.0));
        let pb = PlaneReconstructionProblem::new(Vec2::zero(), shrinking, rotation_field(|_| 0.0), 0.5, Vec2::new(1.0, 0.0), (0.0, 1.0), 0.01).unwrap();
        assert!(matches!(reconstruct_plane(&pb), Err(Error::StepTooLarge { .. })));

        let opts = PresetOptions { domain: Some((0.0, 6.0)), radius: Some(3.0), ..Default::default() };
        assert!(matches!(preset("helix", &opts).unwrap().run(), Err(Error::ProjectionCollapse { .. })));

        let bad = [Vec2::new(1.0, 0.0).rotated(0.3), Vec2::new(1.0, 0.0).rotated(0.3), Vec2::new(1.0, 0.0).rotated(1.2)];
        let still = DistanceRhs::FirstOrder(Arc::new(|_| 0.0));
        let fields = [rotation_field(|_| 0.0), rotation_field(|_| 0.0), rotation_field(|_| 0.0)];
        assert!(matches!(
            SpaceReconstructionProblem::new(Vec3::zero(), still, fields, 1.0, bad, (0.0, 1.0), 0.1),
            Err(Error::InconsistentDirections { .. })
        ));
    }

    #[test]
    fn stationary_space_point() {
        let point = Vec3::new(1.0, 2.0, 3.0);
        let e0 = [point.xy().unit().unwrap(), point.xz().unit().unwrap(), point.yz().unit().unwrap()];
        let fields = [rotation_field(|_| 0.0), rotation_field(|_| 0.0), rotation_field(|_| 0.0)];
        let pb = SpaceReconstructionProblem::new(Vec3::zero(), DistanceRhs::FirstOrder(Arc::new(|_| 0.0)), fields, point.norm(), e0, (0.0, 1.0), 0.1).unwrap();
        let tr = reconstruct_space(&pb).unwrap();
        assert!(tr.samples.iter().all(|(_, p)| (*p - point).norm() < 1e-14));
    }
}
