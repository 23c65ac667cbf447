//! Rotating frames for plane curves.
//!
//! A frame centred at a fixed point `c` has its first axis along
//! `r(t) − c` and its second axis that direction turned by +90°. The tracked
//! point then has coordinates `(ξ, η) = (|r − c|, 0)`, so all of its motion is
//! split into a linear part (the distance `D = ξ` and its derivatives) and a
//! rotation of the frame.
//!
//! The local frame sits on the curve itself at `r(t)` and tracks the chord to
//! `r(t + Δt)`; its one-sided limits as `Δt → 0⁺` are [`local_limits`].
//!
//! All rates are with respect to the curve's own parameter, never arc length.

use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::numerics::{richardson, Extrapolation, LIMIT_LADDER};
use crate::vec::{Vec2, EPS_NORM};

/// Orthonormal frame at a fixed centre tracking one curve point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample2 {
    pub e1: Vec2,
    pub e2: Vec2,
    pub xi: f64,
    pub eta: f64,
}

/// Distance rates and rotation of the centre-to-point direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneKinematics {
    /// Distance from the frame centre.
    pub d: f64,
    pub dd: f64,
    pub d2d: f64,
    /// Derivative of the unit direction; perpendicular to it.
    pub rot_velocity: Vec2,
    pub rot_speed: f64,
}

/// One-sided limits of the local frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalLimits2 {
    /// Local first-order derivative, `|r'|`.
    pub phi: f64,
    /// Local second-order derivative, `r'·r''/|r'|`.
    pub phi_prime: f64,
    /// Local rotational velocity, normal to the tangent.
    pub psi: Vec2,
    pub psi_speed: f64,
}

pub fn frame_at(curve: &PlaneCurve, center: Vec2, t: f64) -> Result<FrameSample2> {
    let d = curve.position(t)? - center;
    let xi = d.norm();
    if !(xi > EPS_NORM) {
        return Err(Error::CenterOnCurve { t });
    }
    let e1 = d / xi;
    Ok(FrameSample2 { e1, e2: e1.perp(), xi, eta: 0.0 })
}

/// Kinematics of the vector `d(t)` given `d`, `d'` and `d''`.
///
/// Returns `None` when `|d| <= EPS_NORM`.
pub fn kinematics_of(d: Vec2, v: Vec2, a: Vec2) -> Option<PlaneKinematics> {
    let n = d.norm();
    if !(n > EPS_NORM) {
        return None;
    }
    let dv = d.dot(v);
    let cross = d.cross(v);
    let rot_velocity = d.perp() * (cross / (n * n * n));
    Some(PlaneKinematics {
        d: n,
        dd: dv / n,
        d2d: -(dv * dv) / (n * n * n) + (v.dot(v) + d.dot(a)) / n,
        rot_velocity,
        rot_speed: cross.abs() / (n * n),
    })
}

/// Kinematics of the point `r(t)` in the frame centred at `center`.
pub fn distance_kinematics(curve: &PlaneCurve, center: Vec2, t: f64) -> Result<PlaneKinematics> {
    let d = curve.position(t)? - center;
    if !(d.norm() > EPS_NORM) {
        return Err(Error::CenterOnCurve { t });
    }
    kinematics_of(d, curve.derivative(t, 1)?, curve.derivative(t, 2)?)
        .ok_or(Error::CenterOnCurve { t })
}

/// Kinematics of the chord `r(t + dt) − r(t)` as a function of `dt` (the
/// local frame at a finite offset). `dD` here is `d|chord|/d(dt)`.
pub fn chord_kinematics(curve: &PlaneCurve, t: f64, dt: f64) -> Result<PlaneKinematics> {
    if !(dt > 0.0) {
        return Err(Error::DegenerateChord { t, dt });
    }
    let f = curve.position(t + dt)? - curve.position(t)?;
    if !(f.norm() > EPS_NORM) {
        return Err(Error::DegenerateChord { t, dt });
    }
    kinematics_of(f, curve.derivative(t + dt, 1)?, curve.derivative(t + dt, 2)?)
        .ok_or(Error::DegenerateChord { t, dt })
}

pub fn local_limits(curve: &PlaneCurve, t: f64) -> Result<LocalLimits2> {
    let v = curve.derivative(t, 1)?;
    let a = curve.derivative(t, 2)?;
    let speed_sq = v.dot(v);
    let phi = speed_sq.sqrt();
    if !(phi > EPS_NORM) {
        return Err(Error::SingularPoint { t });
    }
    let cross = v.cross(a);
    Ok(LocalLimits2 {
        phi,
        phi_prime: v.dot(a) / phi,
        psi: v.perp() * (cross / (2.0 * speed_sq * phi)),
        psi_speed: cross.abs() / (2.0 * speed_sq),
    })
}

/// The local limits estimated independently from chord probes on the
/// `Δt` ladder and extrapolated to `Δt → 0⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderLimits2 {
    pub phi: Extrapolation,
    pub phi_prime: Extrapolation,
    pub psi_speed: Extrapolation,
}

pub fn ladder_limits(curve: &PlaneCurve, t: f64) -> Result<LadderLimits2> {
    let probe = |pick: fn(&PlaneKinematics) -> f64| {
        richardson(|dt| chord_kinematics(curve, t, dt).map(|k| pick(&k)), &LIMIT_LADDER)
    };
    Ok(LadderLimits2 {
        phi: probe(|k| k.dd)?,
        phi_prime: probe(|k| k.d2d)?,
        psi_speed: probe(|k| k.rot_speed)?,
    })
}

/// Default congruence tolerance (absolute and relative parts).
pub const CONGRUENCE_TOL: f64 = 1e-9;

/// Result of comparing invariants of two curves on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    pub congruent: bool,
    /// Largest absolute difference of any compared invariant.
    pub max_deviation: f64,
    /// Parameter value and invariant name where it occurred.
    pub argmax_t: f64,
    pub argmax_quantity: &'static str,
}

impl CongruenceReport {
    pub(crate) fn new() -> Self {
        Self { congruent: true, max_deviation: 0.0, argmax_t: f64::NAN, argmax_quantity: "" }
    }

    pub(crate) fn compare(&mut self, t: f64, what: &'static str, a: f64, b: f64) {
        let dev = (a - b).abs();
        if dev > CONGRUENCE_TOL + CONGRUENCE_TOL * a.abs().max(b.abs()) || !dev.is_finite() {
            self.congruent = false;
        }
        if dev > self.max_deviation || self.argmax_t.is_nan() {
            self.max_deviation = dev;
            self.argmax_t = t;
            self.argmax_quantity = what;
        }
    }
}

/// Compare `φ` and `|ψ|` of two curves pointwise on `grid`.
///
/// Equal `φ` and `|ψ|` force equal curvature and speed, so the curves
/// coincide up to a rigid motion. `|ψ|` is unsigned: mirror images also
/// compare equal.
pub fn plane_congruent(a: &PlaneCurve, b: &PlaneCurve, grid: &[f64]) -> Result<CongruenceReport> {
    let mut report = CongruenceReport::new();
    for &t in grid {
        let (la, lb) = (local_limits(a, t)?, local_limits(b, t)?);
        report.compare(t, "phi", la.phi, lb.phi);
        report.compare(t, "psi_speed", la.psi_speed, lb.psi_speed);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ellipse_curve, make_catalog_curve};
    use std::collections::BTreeMap;

    fn ellipse() -> PlaneCurve {
        ellipse_curve(2.0, 1.0, Vec2::zero()).unwrap()
    }

    #[test]
    fn frame_examples() {
        let circle = ellipse_curve(1.0, 1.0, Vec2::zero()).unwrap();
        let f = frame_at(&circle, Vec2::zero(), 0.0).unwrap();
        assert_eq!((f.e1, f.e2, f.xi, f.eta), (Vec2::new(1., 0.), Vec2::new(-0., 1.), 1.0, 0.0));
        assert_eq!(frame_at(&ellipse(), Vec2::zero(), 0.0).unwrap().xi, 2.0);
        let c = 3f64.sqrt();
        assert!((frame_at(&ellipse(), Vec2::new(c, 0.0), 0.0).unwrap().xi - (2.0 - c)).abs() < 1e-15);
        assert!(matches!(frame_at(&ellipse(), Vec2::new(2.0, 0.0), 0.0), Err(Error::CenterOnCurve { .. })));
    }

    #[test]
    fn distance_examples() {
        let circle = ellipse_curve(1.0, 1.0, Vec2::zero()).unwrap();
        for t in [0.0, 1.0, 2.5] {
            let k = distance_kinematics(&circle, Vec2::zero(), t).unwrap();
            assert!(k.dd.abs() < 1e-15 && k.d2d.abs() < 1e-15 && (k.rot_speed - 1.0).abs() < 1e-15);
        }
        let k = distance_kinematics(&ellipse(), Vec2::zero(), 0.0).unwrap();
        assert!((k.d2d + 1.5).abs() < 1e-15 && (k.rot_speed - 0.5).abs() < 1e-15);
        let c = 3f64.sqrt();
        let k = distance_kinematics(&ellipse(), Vec2::new(c, 0.0), 0.0).unwrap();
        assert!(k.dd.abs() < 1e-15 && (k.d2d - c).abs() < 1e-12);
        assert!((k.rot_speed - k.rot_velocity.norm()).abs() < 1e-14);
    }

    #[test]
    fn chord_examples() {
        let p: BTreeMap<String, f64> = [("x0", 1.0), ("y0", 2.0), ("a", 3.0), ("b", 4.0)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        let line = make_catalog_curve("line", &p).unwrap().into_plane().unwrap();
        assert_eq!(chord_kinematics(&line, 0.1, 0.3).unwrap().rot_speed, 0.0);
        let circle = ellipse_curve(1.0, 1.0, Vec2::zero()).unwrap();
        assert!((chord_kinematics(&circle, 0.0, 1e-3).unwrap().rot_speed - 0.5).abs() < 1e-3);
        assert!(matches!(chord_kinematics(&circle, 0.0, 0.0), Err(Error::DegenerateChord { .. })));
    }

    #[test]
    fn local_examples() {
        let p: BTreeMap<String, f64> = [("a", 3.0), ("b", 4.0)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let line = make_catalog_curve("line", &p).unwrap().into_plane().unwrap();
        let l = local_limits(&line, 0.2).unwrap();
        assert_eq!((l.phi, l.psi, l.phi_prime, l.psi_speed), (5.0, Vec2::zero(), 0.0, 0.0));
        let l = local_limits(&ellipse(), 0.0).unwrap();
        assert!((l.psi_speed - 1.0).abs() < 1e-15);
        let lad = ladder_limits(&ellipse(), 0.4).unwrap();
        let l = local_limits(&ellipse(), 0.4).unwrap();
        assert!((lad.phi.value - l.phi).abs() < 1e-4);
        assert!((lad.phi_prime.value - l.phi_prime).abs() < 1e-4);
        assert!((lad.psi_speed.value - l.psi_speed).abs() < 1e-4);
    }

    #[test]
    fn congruence_examples() {
        let grid: Vec<f64> = (0..50).map(|i| 0.1 + i as f64 * 0.12).collect();
        let e = ellipse();
        assert!(plane_congruent(&e, &e, &grid).unwrap().congruent);
        let moved = e.clone().rigid(0.7, Vec2::new(3.0, -1.0));
        let r = plane_congruent(&e, &moved, &grid).unwrap();
        assert!(r.congruent && r.max_deviation < 1e-10, "{r:?}");
        let other = ellipse_curve(2.0, 1.1, Vec2::zero()).unwrap();
        assert!(!plane_congruent(&e, &other, &grid).unwrap().congruent);
    }
}
