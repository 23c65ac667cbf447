//! The ellipse `(a cos θ, b sin θ)` seen from its center and from the focus
//! `(c, 0)`, `c = √(a² − b²)`.
//!
//! Everything here is closed-form; the generic plane machinery evaluated on
//! [`crate::curve::ellipse_curve`] is the independent cross-check.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, bracket_roots};
use crate::output::Table;
use crate::plane::{LocalLimits2, PlaneKinematics};
use crate::vec::Vec2;

/// Quadrature tolerance for the average speeds.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Accuracy required of located zeros.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl EllipseParams {
    /// Requires `a > b > 0`.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b > 0.0 && a > b) {
            return Err(Error::BadParameters(format!("ellipse needs a > b > 0, got a={a}, b={b}")));
        }
        Ok(Self::relaxed(a, b))
    }

    /// Also admits the circle `a = b`; used for limiting-case checks.
    pub fn relaxed(a: f64, b: f64) -> Self {
        Self { a, b, c: (a * a - b * b).max(0.0).sqrt() }
    }

    /// The focus `(c, 0)`.
    pub fn focus(&self) -> Vec2 {
        Vec2::new(self.c, 0.0)
    }
}

/// Distance kinematics from the center.
///
/// `D = √(a²cos²θ + b²sin²θ)`, `D' = −c² sinθ cosθ / D`,
/// `D'' = c²(−a²cos⁴θ + b²sin⁴θ) / D³`, speed `ab / D²`.
pub fn origin_frame_profile(p: &EllipseParams, theta: f64) -> PlaneKinematics {
    let (s, c) = theta.sin_cos();
    let (a, b, c2) = (p.a, p.b, p.c * p.c);
    let dsq = a * a * c * c + b * b * s * s;
    let d = dsq.sqrt();
    let speed = a * b / dsq;
    PlaneKinematics {
        d,
        dd: -c2 * s * c / d,
        d2d: c2 * (-a * a * c.powi(4) + b * b * s.powi(4)) / (dsq * d),
        rot_velocity: Vec2::new(-b * s, a * c) * (speed / d),
        rot_speed: speed,
    }
}

/// The focal distance `ξ₁(θ)` and its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusValues {
    pub xi1: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// `ξ₁ = √((a cosθ − c)² + b² sin²θ)` with derivatives written through
/// `N = ac sinθ − c² sinθ cosθ` (so `ξ₁' = N/ξ₁`) and
/// `N' = ac cosθ − c² cos 2θ`:
///
/// * `ξ₁'' = −N²/ξ₁³ + N'/ξ₁`
/// * `ξ₁''' = [3N³ − 3ξ₁² N N' + ξ₁⁴ (2c² sin 2θ − ac sinθ)] / ξ₁⁵`
pub fn focus_values(p: &EllipseParams, theta: f64) -> FocusValues {
    let (s, c) = theta.sin_cos();
    let (a, b, f) = (p.a, p.b, p.c);
    let xsq = (a * c - f).powi(2) + b * b * s * s;
    let xi = xsq.sqrt();
    let n = a * f * s - f * f * s * c;
    let n1 = a * f * c - f * f * (2.0 * theta).cos();
    let n2 = 2.0 * f * f * (2.0 * theta).sin() - a * f * s;
    FocusValues {
        xi1: xi,
        d1: n / xi,
        d2: -n * n / (xsq * xi) + n1 / xi,
        d3: (3.0 * n.powi(3) - 3.0 * xsq * n * n1 + xsq * xsq * n2) / (xsq * xsq * xi),
    }
}

/// Distance kinematics from the focus; speed `b(a − c cosθ) / ξ₁²`.
pub fn focus_frame_profile(p: &EllipseParams, theta: f64) -> (PlaneKinematics, FocusValues) {
    let v = focus_values(p, theta);
    let (s, c) = theta.sin_cos();
    let speed = p.b * (p.a - p.c * c) / (v.xi1 * v.xi1);
    let rot_velocity = Vec2::new(-p.b * s, p.a * c - p.c) * (speed / v.xi1);
    (PlaneKinematics { d: v.xi1, dd: v.d1, d2d: v.d2, rot_velocity, rot_speed: speed }, v)
}

/// Values of the rotating frame placed on the curve itself:
/// `φ = √(a² sin²θ + b² cos²θ)`, `φ' = c² sinθ cosθ / φ`, and rotational
/// speed `ab / (2φ²)`.
pub fn local_frame_profile(p: &EllipseParams, theta: f64) -> LocalLimits2 {
    let (s, c) = theta.sin_cos();
    let phisq = p.a * p.a * s * s + p.b * p.b * c * c;
    let phi = phisq.sqrt();
    let speed = p.a * p.b / (2.0 * phisq);
    let psi = Vec2::new(-p.b * c, -p.a * s) * (speed / phi);
    LocalLimits2 { phi, phi_prime: p.c * p.c * s * c / phi, psi, psi_speed: speed }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Origin,
    Focus,
}

/// One failed sign or value check.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub theta: f64,
    pub check: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocalProfileReport {
    pub grid_size: usize,
    /// Largest deviation from the expected values at 0, π/2, π, 3π/2.
    pub endpoint_error: f64,
    /// Sorted by `theta`.
    pub violations: Vec<Violation>,
}

impl FocalProfileReport {
    pub fn ok(&self, tol: f64) -> bool {
        self.violations.is_empty() && self.endpoint_error <= tol
    }
}

/// Check the known values of `ξ₁` and its derivatives at the quarter
/// points, and their sign pattern on a uniform grid of `grid_size` points
/// (grid points at the quarter points themselves are skipped).
pub fn verify_focal_profile(p: &EllipseParams, grid_size: usize) -> FocalProfileReport {
    let (a, c) = (p.a, p.c);
    // θ, ξ₁, ξ₁', ξ₁''
    let table = [
        (0.0, a - c, 0.0, c),
        (FRAC_PI_2, a, c, 0.0),
        (PI, a + c, 0.0, -c),
        (3.0 * FRAC_PI_2, a, -c, 0.0),
    ];
    let mut endpoint_error: f64 = 0.0;
    for (theta, xi, d1, d2) in table {
        let v = focus_values(p, theta);
        for (got, want) in [(v.xi1, xi), (v.d1, d1), (v.d2, d2)] {
            endpoint_error = endpoint_error.max((got - want).abs());
        }
    }

    let mut violations = Vec::new();
    let quarter = |theta: f64| (theta / FRAC_PI_2 - (theta / FRAC_PI_2).round()).abs() < 1e-9;
    for i in 1..grid_size {
        let theta = TAU * i as f64 / grid_size as f64;
        if quarter(theta) {
            continue;
        }
        let v = focus_values(p, theta);
        let upper = theta < PI;
        let outer = !(FRAC_PI_2..=3.0 * FRAC_PI_2).contains(&theta);
        let checks = [
            ("d1", v.d1, upper),
            ("d2", v.d2, outer),
            ("d3", v.d3, !upper),
        ];
        for (check, value, positive) in checks {
            if (positive && !(value > 0.0)) || (!positive && !(value < 0.0)) {
                violations.push(Violation { theta, check, value });
            }
        }
    }
    FocalProfileReport { grid_size, endpoint_error, violations }
}

/// Mean rotational speed over `[t0, t1] ⊆ [0, 2π]` by adaptive Simpson.
pub fn average_rotational_speed(p: &EllipseParams, frame: Frame, interval: (f64, f64)) -> Result<f64> {
    let (t0, t1) = interval;
    if !(0.0 <= t0 && t0 < t1 && t1 <= TAU) {
        return Err(Error::InvalidProblem(format!("interval [{t0}, {t1}] not inside [0, 2π]")));
    }
    let speed = |theta: f64| match frame {
        Frame::Origin => origin_frame_profile(p, theta).rot_speed,
        Frame::Focus => focus_frame_profile(p, theta).0.rot_speed,
    };
    Ok(adaptive_simpson(speed, t0, t1, QUADRATURE_TOL) / (t1 - t0))
}

/// `∫₀^{2π} D'' dθ` in the origin frame; vanishes by periodicity of `D'`.
pub fn integrated_accel(p: &EllipseParams) -> f64 {
    adaptive_simpson(|t| origin_frame_profile(p, t).d2d, 0.0, TAU, QUADRATURE_TOL)
}

/// Zeros of `D''` in the origin frame: `θ₀ = arctan √(a/b)`, `π − θ₀`,
/// `π + θ₀`, `2π − θ₀`.
pub fn expected_accel_zeros(p: &EllipseParams) -> [f64; 4] {
    let t0 = (p.a / p.b).sqrt().atan();
    [t0, PI - t0, PI + t0, TAU - t0]
}

fn located(f: impl Fn(f64) -> f64, expected: &[f64]) -> Result<Vec<f64>> {
    let roots = bracket_roots(f, 0.0, TAU, 4096, 1e-14);
    let matches = roots.len() == expected.len()
        && roots.iter().zip(expected).all(|(r, e)| (r - e).abs() <= ROOT_TOL);
    if matches {
        Ok(roots)
    } else {
        Err(Error::RootCountMismatch { expected: expected.len(), found: roots.len() })
    }
}

/// Bisection roots of `D''` on `[0, 2π]`, required to be exactly the four
/// closed-form locations (to within [`ROOT_TOL`]).
pub fn accel_zero_locations(p: &EllipseParams) -> Result<Vec<f64>> {
    located(|t| origin_frame_profile(p, t).d2d, &expected_accel_zeros(p))
}

/// Bisection roots of `ξ₁''` on `[0, 2π]`; expected at `π/2` and `3π/2`.
pub fn focus_accel_zero_locations(p: &EllipseParams) -> Result<Vec<f64>> {
    located(|t| focus_values(p, t).d2, &[FRAC_PI_2, 3.0 * FRAC_PI_2])
}

pub const PROFILE_HEADER: [&str; 7] = ["theta", "xi1", "d1", "d2", "d3", "rot_speed_origin", "rot_speed_focus"];

/// Profile table on `samples` equally spaced angles in `[0, 2π]`.
pub fn profile_table(p: &EllipseParams, samples: usize) -> Table {
    let mut table = Table::new(&PROFILE_HEADER);
    let n = samples.max(2);
    for i in 0..n {
        let theta = TAU * i as f64 / (n - 1) as f64;
        let (k, v) = focus_frame_profile(p, theta);
        table.push(vec![theta, v.xi1, v.d1, v.d2, v.d3, origin_frame_profile(p, theta).rot_speed, k.rot_speed]);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_point_values() {
        let p = EllipseParams::new(2.0, 1.0).unwrap();
        let o = origin_frame_profile(&p, 0.0);
        assert_eq!((o.d, o.dd), (2.0, 0.0));
        let v = focus_values(&p, 0.0);
        assert!((v.xi1 - (2.0 - p.c)).abs() < 1e-15 && v.d1 == 0.0 && (v.d2 - p.c).abs() < 1e-15);
        let v = focus_values(&p, PI);
        assert!((v.xi1 - (2.0 + p.c)).abs() < 1e-15 && v.d1.abs() < 1e-15 && (v.d2 + p.c).abs() < 1e-15);
        let t0 = expected_accel_zeros(&p)[0];
        assert!(origin_frame_profile(&p, t0).d2d.abs() < 1e-12);
    }

    #[test]
    fn circle_limit() {
        let p = EllipseParams::relaxed(1.5, 1.5);
        for i in 0..10 {
            let s = origin_frame_profile(&p, i as f64 * 0.6).rot_speed;
            assert!((s - 1.0 / 1.5 * 1.5).abs() < 1e-15);
        }
        assert!(EllipseParams::new(1.0, 1.0).is_err());
    }

    #[test]
    fn table_and_zeros() {
        for (a, b) in [(2.0, 1.0), (1.01, 1.0), (10.0, 1.0)] {
            let p = EllipseParams::new(a, b).unwrap();
            let r = verify_focal_profile(&p, 10_000);
            assert!(r.ok(1e-12), "{a}/{b}: {r:?}");
            accel_zero_locations(&p).unwrap();
            focus_accel_zero_locations(&p).unwrap();
        }
        let near = EllipseParams::new(1.001, 1.0).unwrap();
        let z = accel_zero_locations(&near).unwrap();
        assert!((z[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-3);
    }

    #[test]
    fn averages() {
        let p = EllipseParams::new(2.0, 1.0).unwrap();
        for iv in [(0.0, FRAC_PI_2), (FRAC_PI_2, PI), (0.0, TAU)] {
            assert!((average_rotational_speed(&p, Frame::Origin, iv).unwrap() - 1.0).abs() < 1e-8);
        }
        assert!((average_rotational_speed(&p, Frame::Focus, (0.0, PI)).unwrap() - 1.0).abs() < 1e-8);
        assert!(integrated_accel(&p).abs() < 1e-8);
        assert!(average_rotational_speed(&p, Frame::Origin, (0.0, 7.0)).is_err());
    }

    #[test]
    fn profile_rows() {
        let p = EllipseParams::new(2.0, 1.0).unwrap();
        let t = profile_table(&p, 5);
        assert_eq!(t.rows.len(), 5);
        assert!(t.to_csv().starts_with("theta,xi1,d1,d2,d3,rot_speed_origin,rot_speed_focus\n"));
    }
}
