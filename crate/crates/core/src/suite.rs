//! Self-verification suite.
//!
//! Each check measures one number (a worst-case deviation, a count, or a
//! convergence order) and compares it with a fixed bound. The `verify`
//! subcommand runs these and prints one `PASS|FAIL <id> <measured> <bound>`
//! line per check.
//!
//! Reference values come from finite differences of positions, from the
//! ladder extrapolations, and from closed forms for the ellipse. Random
//! samples use a fixed seed, so results are reproducible.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{ellipse_curve, make_catalog_curve, Curve, PlaneCurve, SpaceCurve};
use crate::ellipse::{self, EllipseParams, Frame};
use crate::error::Result;
use crate::numerics::{finite_difference, Stencil};
use crate::plane::{distance_kinematics, ladder_limits, local_limits, plane_congruent};
use crate::reconstruct::{preset, PresetOptions};
use crate::runner::{run, Command, RunConfig};
use crate::space::{
    derivative_plane_ladder, derivative_plane_limits, pair_kinematics, space_congruent, space_distance_kinematics,
};
use crate::surface::{
    chart_curve_derivatives, composed_curve, first_form_speed_sq, surface_distance_kinematics,
    surface_local_first_derivative, surface_plane_ladder, surface_plane_rot_limits, ChartCurve, Surface,
};
use crate::vec::{Vec2, Vec3};

/// How `measured` is compared with `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: &'static str,
    pub tags: &'static [&'static str],
    pub measured: f64,
    pub bound: f64,
    pub comparison: Comparison,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        match self.comparison {
            Comparison::AtMost => self.measured <= self.bound,
            Comparison::AtLeast => self.measured >= self.bound,
        }
    }

    /// `PASS|FAIL <id> <measured> <bound>`.
    pub fn line(&self) -> String {
        format!(
            "{} {} {:.6e} {:.6e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.id,
            self.measured,
            self.bound
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOptions {
    /// Run only checks carrying this tag (or with this id).
    pub filter: Option<String>,
    /// Shift every closed-form ψ limit by [`FAULT_SHIFT`] before comparing,
    /// to prove the local-limit check can fail.
    pub inject_fault: bool,
}

pub const FAULT_SHIFT: f64 = 1e-2;

struct Check {
    id: &'static str,
    tags: &'static [&'static str],
    bound: f64,
    comparison: Comparison,
    run: fn(&SuiteOptions) -> f64,
}

const CHECKS: &[Check] = &[
    Check { id: "fd-rates", tags: &["plane", "space", "surface", "rates"], bound: 1e-6, comparison: Comparison::AtMost, run: fd_rates },
    Check { id: "rot-speeds", tags: &["plane", "space", "surface", "rates"], bound: 1e-6, comparison: Comparison::AtMost, run: rot_speeds },
    Check { id: "local-limits", tags: &["plane", "space", "surface", "limits", "psi"], bound: 1e-4, comparison: Comparison::AtMost, run: local_limit_ladders },
    Check { id: "psi13-vanishes", tags: &["space", "limits"], bound: 1e-3, comparison: Comparison::AtMost, run: psi13 },
    Check { id: "line-degenerate", tags: &["plane", "limits"], bound: 0.0, comparison: Comparison::AtMost, run: line_degenerate },
    Check { id: "surface-third-derivative", tags: &["surface"], bound: 1e-4, comparison: Comparison::AtMost, run: surface_third },
    Check { id: "focal-values", tags: &["ellipse"], bound: 1e-12, comparison: Comparison::AtMost, run: focal_values_check },
    Check { id: "focal-signs", tags: &["ellipse"], bound: 0.0, comparison: Comparison::AtMost, run: focal_signs_check },
    Check { id: "average-speeds", tags: &["ellipse"], bound: 1e-8, comparison: Comparison::AtMost, run: average_speeds },
    Check { id: "accel-mean", tags: &["ellipse"], bound: 1e-8, comparison: Comparison::AtMost, run: accel_mean },
    Check { id: "zero-locations", tags: &["ellipse"], bound: 1e-10, comparison: Comparison::AtMost, run: zero_locations },
    Check { id: "reconstruct-error", tags: &["reconstruction", "ellipse", "space"], bound: 1e-5, comparison: Comparison::AtMost, run: reconstruct_error },
    Check { id: "reconstruct-order", tags: &["reconstruction", "ellipse", "space"], bound: 3.5, comparison: Comparison::AtLeast, run: reconstruct_order },
    Check { id: "congruence", tags: &["plane", "space", "congruence"], bound: 1e-9, comparison: Comparison::AtMost, run: congruence },
    Check { id: "first-form", tags: &["surface"], bound: 1e-12, comparison: Comparison::AtMost, run: first_form },
    Check { id: "cli-determinism", tags: &["cli"], bound: 0.0, comparison: Comparison::AtMost, run: determinism },
];

/// Ids and tags of all checks, in run order.
pub fn catalog() -> Vec<(&'static str, &'static [&'static str])> {
    CHECKS.iter().map(|c| (c.id, c.tags)).collect()
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .filter(|c| match &opts.filter {
            Some(f) => c.id == f || c.tags.contains(&f.as_str()),
            None => true,
        })
        .map(|c| CheckResult { id: c.id, tags: c.tags, measured: (c.run)(opts), bound: c.bound, comparison: c.comparison })
        .collect()
}

/// Failures inside a check count as an infinitely bad measurement.
fn or_inf(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn plane(name: &str, entries: &[(&str, f64)]) -> PlaneCurve {
    make_catalog_curve(name, &params(entries)).and_then(|c| c.into_plane()).expect("catalog plane curve")
}

fn space(name: &str, entries: &[(&str, f64)]) -> SpaceCurve {
    make_catalog_curve(name, &params(entries)).and_then(|c| c.into_space()).expect("catalog space curve")
}

fn surface(kind: &str, entries: &[(&str, f64)]) -> Surface {
    Surface::catalog(kind, &params(entries)).expect("catalog surface")
}

/// `u = u0 + αt + βt²`, `v = v0 + γt + δt²` on `[-1, 1]`.
fn quadratic_chart(c: [f64; 6]) -> ChartCurve {
    let [u0, a, b, v0, g, d] = c;
    Curve::analytic(
        "chart",
        (-1.0, 1.0),
        move |t| Vec2::new(u0 + a * t + b * t * t, v0 + g * t + d * t * t),
        move |t| Vec2::new(a + 2.0 * b * t, g + 2.0 * d * t),
        move |_| Vec2::new(2.0 * b, 2.0 * d),
        |_| Vec2::zero(),
    )
    .expect("valid domain")
}

fn sphere_curve() -> (Surface, ChartCurve) {
    let s = surface("sphere", &[("cx", 3.0), ("cy", 3.0), ("cz", 3.0)]);
    (s, quadratic_chart([0.2, 1.0, 0.3, 0.1, 0.6, -0.2]))
}

fn torus_curve() -> (Surface, ChartCurve) {
    let s = surface("torus", &[("cx", 5.0), ("cy", 5.0), ("cz", 5.0)]);
    (s, quadratic_chart([0.5, 1.0, -0.4, 0.3, 1.3, 0.5]))
}

/// Distance, its rates, the total speed and the three projected speeds.
type Rates = (f64, f64, f64, f64, [f64; 3]);

struct RateCase {
    domain: (f64, f64),
    /// Position relative to the frame center; plane cases use `z = 0`.
    vector: Box<dyn Fn(f64) -> Result<Vec3>>,
    rates: Box<dyn Fn(f64) -> Result<Rates>>,
    spatial: bool,
}

fn plane_case(curve: PlaneCurve, center: Vec2) -> RateCase {
    let c = curve.clone();
    RateCase {
        domain: curve.domain(),
        vector: Box::new(move |t| Ok((c.position(t)? - center).extend(0.0))),
        rates: Box::new(move |t| {
            let k = distance_kinematics(&curve, center, t)?;
            Ok((k.d, k.dd, k.d2d, k.rot_speed, [0.0; 3]))
        }),
        spatial: false,
    }
}

fn space_case(
    domain: (f64, f64),
    vector: impl Fn(f64) -> Result<Vec3> + 'static,
    kin: impl Fn(f64) -> Result<crate::space::SpaceKinematics> + 'static,
) -> RateCase {
    RateCase {
        domain,
        vector: Box::new(vector),
        rates: Box::new(move |t| {
            let k = kin(t)?;
            Ok((k.d, k.dd, k.d2d, k.rot_speed, k.speeds))
        }),
        spatial: true,
    }
}

fn rate_cases() -> Vec<RateCase> {
    let p = EllipseParams::new(2.0, 1.0).expect("valid ellipse");
    let ell = ellipse_curve(p.a, p.b, Vec2::zero()).expect("valid ellipse");
    let mut cases = vec![
        plane_case(ell.clone(), Vec2::zero()),
        plane_case(ell, p.focus()),
        plane_case(plane("circle", &[("radius", 1.5)]), Vec2::new(0.3, 0.2)),
        plane_case(plane("parabola", &[("p", 0.7)]), Vec2::new(0.5, -1.5)),
        plane_case(plane("cubic", &[("k", 1.2)]), Vec2::new(0.5, -1.5)),
        plane_case(plane("line", &[("a", 1.0), ("b", 0.5)]), Vec2::new(0.0, 1.0)),
    ];
    for c in [
        space("helix", &[("cx", 2.0), ("cy", 2.0), ("cz", 1.0), ("pitch", 0.7)]),
        space("twisted-cubic", &[("cx", 2.0), ("cy", 2.0), ("cz", 2.0)]),
    ] {
        let (c1, c2) = (c.clone(), c.clone());
        cases.push(space_case(c.domain(), move |t| c1.position(t), move |t| space_distance_kinematics(&c2, t)));
    }
    let a = space("helix", &[("cx", 2.0), ("cy", 2.0), ("cz", 1.0)]);
    let b = space("helix", &[("radius", 0.5), ("pitch", 0.3), ("cx", -1.0), ("cy", -1.0), ("cz", -1.0)]);
    let (a1, b1) = (a.clone(), b.clone());
    cases.push(space_case(
        a.domain(),
        move |t| Ok(b1.position(t)? - a1.position(t)?),
        move |t| pair_kinematics(&a, &b, t),
    ));
    for (s, c) in [sphere_curve(), torus_curve()] {
        let composed = composed_curve(&s, &c).expect("composed curve");
        cases.push(space_case(c.domain(), move |t| composed.position(t), move |t| surface_distance_kinematics(&s, &c, t)));
    }
    cases
}

const RANDOM_POINTS: usize = 1000;
const FD_STEP: f64 = 1e-5;

fn random_params(rng: &mut ChaCha8Rng, domain: (f64, f64), n: usize) -> Vec<f64> {
    // Keep clear of the ends so central stencils fit.
    let (a, b) = (domain.0 + 1e-3, domain.1 - 1e-3);
    (0..n).map(|_| rng.gen_range(a..b)).collect()
}

fn rel(a: f64, reference: f64) -> f64 {
    (a - reference).abs() / reference.abs().max(1.0)
}

fn fd1<F: Fn(f64) -> Result<f64>>(f: F, t: f64) -> Result<f64> {
    finite_difference(|s| Ok(Vec2::new(f(s)?, 0.0)), t, 1, FD_STEP, Stencil::Central).map(|v| v.x)
}

/// Analytic `D'` and `D''` against central differences of `D` and `D'`.
fn fd_rates(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut rng = rng(1);
        let mut worst: f64 = 0.0;
        for case in rate_cases() {
            for t in random_params(&mut rng, case.domain, RANDOM_POINTS) {
                let (_, dd, d2d, _, _) = (case.rates)(t)?;
                worst = worst.max(rel(dd, fd1(|s| Ok((case.rates)(s)?.0), t)?));
                worst = worst.max(rel(d2d, fd1(|s| Ok((case.rates)(s)?.1), t)?));
            }
        }
        Ok(worst)
    })())
}

fn unit_speed(f: impl Fn(f64) -> Result<Vec2>, t: f64) -> Result<f64> {
    let d = finite_difference(|s| f(s)?.unit(), t, 1, FD_STEP, Stencil::Central)?;
    Ok(d.norm())
}

/// Analytic rotational speeds against differences of the unit direction.
fn rot_speeds(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut rng = rng(2);
        let mut worst: f64 = 0.0;
        for case in rate_cases() {
            for t in random_params(&mut rng, case.domain, RANDOM_POINTS) {
                let (_, _, _, speed, speeds) = (case.rates)(t)?;
                let total = finite_difference(|s| (case.vector)(s)?.unit(), t, 1, FD_STEP, Stencil::Central)?;
                worst = worst.max(rel(speed, total.norm()));
                if case.spatial {
                    let projections: [fn(Vec3) -> Vec2; 3] = [Vec3::xy, Vec3::xz, Vec3::yz];
                    for (k, proj) in projections.iter().enumerate() {
                        worst = worst.max(rel(speeds[k], unit_speed(|s| Ok(proj((case.vector)(s)?)), t)?));
                    }
                }
            }
        }
        Ok(worst)
    })())
}

fn deviation(closed: f64, ladder: f64) -> f64 {
    (closed - ladder).abs() / closed.abs().max(1.0)
}

/// Closed-form local limits against the extrapolated finite-`Δt` ladders.
fn local_limit_ladders(opts: &SuiteOptions) -> f64 {
    let shift = if opts.inject_fault { FAULT_SHIFT } else { 0.0 };
    or_inf((|| {
        let mut worst: f64 = 0.0;
        let planes = [
            ellipse_curve(2.0, 1.0, Vec2::zero())?,
            plane("parabola", &[("p", 0.7)]),
            plane("cubic", &[("k", 1.2)]),
        ];
        for curve in &planes {
            let (t0, t1) = curve.domain();
            for i in 1..=5 {
                let t = t0 + (t1 - t0) * i as f64 / 7.0;
                let (l, lad) = (local_limits(curve, t)?, ladder_limits(curve, t)?);
                worst = worst.max(deviation(l.phi, lad.phi.value));
                worst = worst.max(deviation(l.phi_prime, lad.phi_prime.value));
                worst = worst.max(deviation(l.psi_speed + shift, lad.psi_speed.value));
            }
        }
        let spaces = [
            space("helix", &[("pitch", 0.7)]),
            space("twisted-cubic", &[]),
        ];
        for curve in &spaces {
            let (t0, t1) = curve.domain();
            for i in 1..=5 {
                let t = t0 + (t1 - t0) * i as f64 / 7.0;
                let (l, lad) = (derivative_plane_limits(curve, t)?, derivative_plane_ladder(curve, t)?);
                worst = worst.max(deviation(l.phi, lad[0].value));
                worst = worst.max(deviation(l.psi12.norm() + shift, lad[1].value));
                worst = worst.max(deviation(l.psi23.norm() + shift, lad[3].value));
            }
        }
        for (s, c) in [sphere_curve(), torus_curve()] {
            for t in [-0.6, -0.2, 0.3, 0.7] {
                let (l, lad) = (surface_plane_rot_limits(&s, &c, t)?, surface_plane_ladder(&s, &c, t)?);
                worst = worst.max(deviation(l.psi_a + shift, lad[0].value));
                for (closed, ladder) in [(l.psi_b, &lad[1]), (l.psi_c, &lad[2])] {
                    if let Some(v) = closed {
                        worst = worst.max(deviation(v + shift, ladder.value));
                    }
                }
            }
        }
        Ok(worst)
    })())
}

/// Extrapolated 1-3 plane rotation, which must vanish.
fn psi13(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut worst: f64 = 0.0;
        for curve in [space("helix", &[("pitch", 0.7)]), space("twisted-cubic", &[])] {
            let (t0, t1) = curve.domain();
            for i in 1..=5 {
                let t = t0 + (t1 - t0) * i as f64 / 7.0;
                worst = worst.max(derivative_plane_ladder(&curve, t)?[2].value.abs());
            }
        }
        Ok(worst)
    })())
}

/// Local second derivative and rotational speed of a straight line.
fn line_degenerate(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let line = plane("line", &[("x0", 0.3), ("y0", -1.0), ("a", 2.0), ("b", -0.7)]);
        let mut worst: f64 = 0.0;
        for i in 0..=20 {
            let l = local_limits(&line, -1.0 + 0.1 * i as f64)?;
            worst = worst.max(l.phi_prime.abs()).max(l.psi_speed.abs());
        }
        Ok(worst)
    })())
}

/// Natural-frame expansion of `r'''` against third differences of the
/// composed curve at random chart points.
fn surface_third(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut rng = rng(5);
        let mut worst: f64 = 0.0;
        let surfaces = [surface("sphere", &[]), surface("torus", &[])];
        for s in &surfaces {
            for _ in 0..200 {
                let mut c = [0.0; 6];
                c[0] = rng.gen_range(0.0..TAU);
                c[3] = if s.name() == "sphere" { rng.gen_range(-1.0..1.0) } else { rng.gen_range(0.0..TAU) };
                for k in [1, 2, 4, 5] {
                    c[k] = rng.gen_range(-1.0..1.0);
                }
                let chart = quadratic_chart(c);
                let expansion = chart_curve_derivatives(s, &chart, 0.0)?[3];
                let composed = composed_curve(s, &chart)?;
                let fd = finite_difference(|t| composed.position(t), 0.0, 3, 2e-3, Stencil::Central)?;
                worst = worst.max((expansion - fd).norm() / fd.norm().max(1.0));
            }
        }
        Ok(worst)
    })())
}

fn focal_values_check(_: &SuiteOptions) -> f64 {
    or_inf(EllipseParams::new(2.0, 1.0).map(|p| ellipse::verify_focal_profile(&p, 10_000).endpoint_error))
}

fn focal_signs_check(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut count = 0;
        for (a, b) in [(2.0, 1.0), (1.01, 1.0), (10.0, 1.0)] {
            count += ellipse::verify_focal_profile(&EllipseParams::new(a, b)?, 10_000).violations.len();
        }
        Ok(count as f64)
    })())
}

const RATIOS: [f64; 3] = [2.0, 1.1, 10.0];

fn average_speeds(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut worst: f64 = 0.0;
        for ratio in RATIOS {
            let p = EllipseParams::new(ratio, 1.0)?;
            let mut runs: Vec<(Frame, (f64, f64))> =
                (0..4).map(|q| (Frame::Origin, (q as f64 * FRAC_PI_2, (q + 1) as f64 * FRAC_PI_2))).collect();
            runs.extend([(Frame::Origin, (0.0, TAU)), (Frame::Focus, (0.0, PI)), (Frame::Focus, (PI, TAU))]);
            for (frame, iv) in runs {
                worst = worst.max((ellipse::average_rotational_speed(&p, frame, iv)? - 1.0).abs());
            }
        }
        Ok(worst)
    })())
}

fn accel_mean(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut worst: f64 = 0.0;
        for ratio in RATIOS {
            worst = worst.max(ellipse::integrated_accel(&EllipseParams::new(ratio, 1.0)?).abs() / TAU);
        }
        Ok(worst)
    })())
}

fn zero_locations(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut worst: f64 = 0.0;
        for ratio in RATIOS {
            let p = EllipseParams::new(ratio, 1.0)?;
            let pairs = [
                (ellipse::accel_zero_locations(&p)?, ellipse::expected_accel_zeros(&p).to_vec()),
                (ellipse::focus_accel_zero_locations(&p)?, vec![FRAC_PI_2, 3.0 * FRAC_PI_2]),
            ];
            for (found, expected) in pairs {
                for (f, e) in found.iter().zip(&expected) {
                    worst = worst.max((f - e).abs());
                }
            }
        }
        Ok(worst)
    })())
}

const RECONSTRUCTIONS: [&str; 3] = ["ellipse-origin", "ellipse-focus", "helix"];

fn reconstruction_error(name: &str, second_order: bool, step: Option<f64>) -> Result<f64> {
    Ok(preset(name, &PresetOptions { second_order, step, ..Default::default() })?.run()?.max_error)
}

/// Worst round-trip error at the default step (a ten-thousandth of the range).
fn reconstruct_error(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut worst: f64 = 0.0;
        for name in RECONSTRUCTIONS {
            for second_order in [false, true] {
                worst = worst.max(reconstruction_error(name, second_order, None)?);
            }
        }
        Ok(worst)
    })())
}

/// Smallest observed order over the step ladder 1e-2, 5e-3, 2.5e-3.
fn reconstruct_order(_: &SuiteOptions) -> f64 {
    (|| -> Result<f64> {
        let mut worst = f64::INFINITY;
        for name in RECONSTRUCTIONS {
            for second_order in [false, true] {
                let errs = [1e-2, 5e-3, 2.5e-3].map(|h| reconstruction_error(name, second_order, Some(h)));
                let [e0, e1, e2] = [errs[0].clone()?, errs[1].clone()?, errs[2].clone()?];
                worst = worst.min((e0 / e1).log2()).min((e1 / e2).log2());
            }
        }
        Ok(worst)
    })()
    .unwrap_or(f64::NEG_INFINITY)
}

/// Rotation matrix for a unit axis and angle.
pub fn rotation(axis: Vec3, angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    let Vec3 { x, y, z } = axis;
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

/// Rigid copies must match; perturbed curves and mirror images must not.
/// Measures the worst deviation over the rigid copies, or infinity if any
/// verdict is wrong.
fn congruence(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut rng = rng(10);
        let mut worst: f64 = 0.0;
        let ell = ellipse_curve(2.0, 1.0, Vec2::zero())?;
        let grid2: Vec<f64> = (0..16).map(|i| 0.1 + i as f64 * 0.38).collect();
        let helix = space("helix", &[("pitch", 0.7)]);
        let grid3: Vec<f64> = (0..12).map(|i| 0.1 + i as f64 * 0.5).collect();
        for _ in 0..20 {
            let copy = ell.clone().rigid(rng.gen_range(0.0..TAU), Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)));
            let r = plane_congruent(&ell, &copy, &grid2)?;
            if !r.congruent {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(r.max_deviation);

            let axis = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).unit()?;
            let offset = Vec3::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let copy = helix.clone().transformed(rotation(axis, rng.gen_range(0.0..TAU)), offset);
            let r = space_congruent(&helix, &copy, &grid3)?;
            if !r.congruent {
                return Ok(f64::INFINITY);
            }
            worst = worst.max(r.invariants.max_deviation);
        }
        let perturbed_plane = ellipse_curve(2.001, 1.0, Vec2::zero())?;
        let perturbed_space = space("helix", &[("pitch", 0.701)]);
        let mirror = helix.clone().transformed([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]], Vec3::zero());
        if plane_congruent(&ell, &perturbed_plane, &grid2)?.congruent
            || space_congruent(&helix, &perturbed_space, &grid3)?.congruent
            || space_congruent(&helix, &mirror, &grid3)?.congruent
        {
            return Ok(f64::INFINITY);
        }
        Ok(worst)
    })())
}

/// `φ² = g_ij u'ⁱu'ʲ` along sphere and torus chart curves.
fn first_form(_: &SuiteOptions) -> f64 {
    or_inf((|| {
        let mut rng = rng(11);
        let mut worst: f64 = 0.0;
        for (s, c) in [sphere_curve(), torus_curve()] {
            for t in random_params(&mut rng, c.domain(), 200) {
                let phi = surface_local_first_derivative(&s, &c, t)?;
                worst = worst.max((phi * phi - first_form_speed_sq(&s, &c, t)?).abs());
            }
        }
        Ok(worst)
    })())
}

/// Two identical kinematics runs must render identical bytes.
fn determinism(_: &SuiteOptions) -> f64 {
    let config = RunConfig {
        command: Some(Command::Kinematics),
        curve: Some(crate::runner::CurveRef::Name("ellipse".into())),
        a: Some(2.0),
        b: Some(1.0),
        samples: Some(257),
        ..Default::default()
    };
    let (x, y) = (run(&config), run(&config));
    if x.code == 0 && x.stdout == y.stdout && !x.stdout.is_empty() {
        0.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_by_tag() {
        let r = run_suite(&SuiteOptions { filter: Some("ellipse".into()), inject_fault: false });
        assert!(r.iter().all(|c| c.tags.contains(&"ellipse")));
        assert!(r.iter().all(CheckResult::passed), "{r:?}");
        assert!(r.iter().any(|c| c.id == "focal-signs"));
    }

    #[test]
    fn fault_injection_trips_limits() {
        let clean = run_suite(&SuiteOptions { filter: Some("local-limits".into()), inject_fault: false });
        let faulty = run_suite(&SuiteOptions { filter: Some("local-limits".into()), inject_fault: true });
        assert!(clean[0].passed(), "{clean:?}");
        assert!(!faulty[0].passed());
    }
}
