//! Rotating frames for space curves.
//!
//! Two families of planes are used to measure rotation:
//!
//! * the coordinate planes xOy, xOz and yOz, onto which the position vector
//!   is projected orthogonally;
//! * the planes spanned by pairs of the derivative frame `{r', r'', r'''}`.
//!   Here the chord `Δr = r(t+Δt) − r(t)` is written as
//!   `g1 r' + g2 r'' + g3 r'''` and projected *along* the omitted basis vector
//!   (for the 1-2 plane, `g1 r' + g2 r''`). This oblique projection is what
//!   makes the 1-3 plane rotation vanish in the limit.
//!
//! Limits as `Δt → 0⁺` give the five invariants `(φ, |ψ₁₂|, |ψ₁₃| = 0, |ψ₂₃|, ε)`
//! which determine a space curve up to a rigid motion.

use crate::curve::SpaceCurve;
use crate::error::{Error, Result};
use crate::numerics::{finite_difference, richardson, solve3, Extrapolation, Stencil, LIMIT_LADDER};
use crate::plane::CongruenceReport;
use crate::vec::{triple_product, Vec2, Vec3, EPS_NORM};

/// Distance rates and rotational speeds of a position vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceKinematics {
    pub d: f64,
    pub dd: f64,
    pub d2d: f64,
    /// Rotational speed of the unit direction in space.
    pub rot_speed: f64,
    /// Rotational speeds of the projections onto xOy, xOz, yOz.
    pub speeds: [f64; 3],
}

pub const PLANE_NAMES: [&str; 3] = ["xOy", "xOz", "yOz"];

pub(crate) enum Degeneracy {
    Center,
    Axis(&'static str),
}

fn planar_speed(p: Vec2, q: Vec2) -> f64 {
    p.cross(q).abs() / p.dot(p)
}

/// Kinematics of a vector `d(t)` from `d`, `d'`, `d''`.
pub(crate) fn kinematics3(d: Vec3, v: Vec3, a: Vec3) -> std::result::Result<SpaceKinematics, Degeneracy> {
    let n = d.norm();
    if !(n > EPS_NORM) {
        return Err(Degeneracy::Center);
    }
    let proj = [(d.xy(), v.xy()), (d.xz(), v.xz()), (d.yz(), v.yz())];
    let mut speeds = [0.0; 3];
    for (k, (p, q)) in proj.iter().enumerate() {
        if !(p.norm() > EPS_NORM) {
            return Err(Degeneracy::Axis(PLANE_NAMES[k]));
        }
        speeds[k] = planar_speed(*p, *q);
    }
    let dv = d.dot(v);
    Ok(SpaceKinematics {
        d: n,
        dd: dv / n,
        d2d: -(dv * dv) / (n * n * n) + (v.dot(v) + d.dot(a)) / n,
        rot_speed: d.cross(v).norm() / (n * n),
        speeds,
    })
}

/// Kinematics of `r(t)` seen from the origin.
pub fn space_distance_kinematics(curve: &SpaceCurve, t: f64) -> Result<SpaceKinematics> {
    let [r, v, a] = [curve.position(t)?, curve.derivative(t, 1)?, curve.derivative(t, 2)?];
    kinematics3(r, v, a).map_err(|e| match e {
        Degeneracy::Center => Error::CenterOnCurve { t },
        Degeneracy::Axis(plane) => Error::AxisProjectionDegenerate { t, plane },
    })
}

/// Kinematics of the vector from `a(t)` to `b(t)`.
pub fn pair_kinematics(a: &SpaceCurve, b: &SpaceCurve, t: f64) -> Result<SpaceKinematics> {
    let d = b.position(t)? - a.position(t)?;
    let v = b.derivative(t, 1)? - a.derivative(t, 1)?;
    let acc = b.derivative(t, 2)? - a.derivative(t, 2)?;
    kinematics3(d, v, acc).map_err(|e| match e {
        Degeneracy::Center => Error::CurvesIntersect { t },
        Degeneracy::Axis(which) => Error::DegenerateProjection { t, which },
    })
}

/// Coefficients of a vector in the derivative frame `{r', r'', r'''}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisCoefficients {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

/// The derivative frame at `t`, rejected when nearly coplanar
/// (`|r'∧r''·r'''| <= EPS_NORM·|r'||r''||r'''|`).
fn derivative_frame(curve: &SpaceCurve, t: f64) -> Result<[Vec3; 3]> {
    let f = [curve.derivative(t, 1)?, curve.derivative(t, 2)?, curve.derivative(t, 3)?];
    let triple = triple_product(f[0], f[1], f[2]);
    let scale = f[0].norm() * f[1].norm() * f[2].norm();
    if !(triple.abs() > EPS_NORM * scale) {
        return Err(Error::DegenerateFrame { t, triple });
    }
    Ok(f)
}

fn coefficients(frame: [Vec3; 3], w: Vec3, t: f64) -> Result<BasisCoefficients> {
    let [g1, g2, g3] = solve3(frame, w).ok_or(Error::DegenerateFrame { t, triple: 0.0 })?;
    Ok(BasisCoefficients { g1, g2, g3 })
}

/// Coefficients of the chord `r(t+dt) − r(t)` in the derivative frame at `t`.
pub fn basis_coefficients(curve: &SpaceCurve, t: f64, dt: f64) -> Result<BasisCoefficients> {
    let frame = derivative_frame(curve, t)?;
    if dt == 0.0 {
        return Ok(BasisCoefficients { g1: 0.0, g2: 0.0, g3: 0.0 });
    }
    coefficients(frame, curve.position(t + dt)? - curve.position(t)?, t)
}

/// Rotational speed of `w = α a + β b` as a function of a parameter, given
/// the coefficient derivatives `α', β'` and the Gram data of `{a, b}`:
///
/// `|αβ' − α'β| · √(|a|²|b|² − (a·b)²) / |w|²`,
///
/// with `|w|² = α²|a|² + 2αβ a·b + β²|b|²`. Returns `None` if `w` vanishes.
pub fn gram_speed(alpha: f64, beta: f64, dalpha: f64, dbeta: f64, aa: f64, ab: f64, bb: f64) -> Option<f64> {
    let ww = alpha * alpha * aa + 2.0 * alpha * beta * ab + beta * beta * bb;
    if !(ww > 0.0) {
        return None;
    }
    let gram = (aa * bb - ab * ab).max(0.0);
    Some((alpha * dbeta - dalpha * beta).abs() * gram.sqrt() / ww)
}

/// Rotational speeds (with respect to `dt`) of the chord projected onto the
/// planes 1-2, 1-3 and 2-3 of the derivative frame at `t`.
pub fn derivative_plane_speeds(curve: &SpaceCurve, t: f64, dt: f64) -> Result<[f64; 3]> {
    let frame = derivative_frame(curve, t)?;
    let chord = curve.position(t + dt)? - curve.position(t)?;
    let g = coefficients(frame, chord, t)?;
    let gp = coefficients(frame, curve.derivative(t + dt, 1)?, t)?;
    let (c, cp) = ([g.g1, g.g2, g.g3], [gp.g1, gp.g2, gp.g3]);
    let pairs = [(0, 1, "plane 1-2"), (0, 2, "plane 1-3"), (1, 2, "plane 2-3")];
    let mut out = [0.0; 3];
    for (k, (i, j, which)) in pairs.into_iter().enumerate() {
        let (a, b) = (frame[i], frame[j]);
        let w = a * c[i] + b * c[j];
        if !(w.norm() > 1e-15 * chord.norm()) {
            return Err(Error::DegenerateProjection { t, which });
        }
        out[k] = gram_speed(c[i], c[j], cp[i], cp[j], a.dot(a), a.dot(b), b.dot(b))
            .ok_or(Error::DegenerateProjection { t, which })?;
    }
    Ok(out)
}

/// `d|Δr|/d(dt)` for the chord `Δr = r(t+dt) − r(t)`.
pub fn chord_rate(curve: &SpaceCurve, t: f64, dt: f64) -> Result<f64> {
    let f = curve.position(t + dt)? - curve.position(t)?;
    let n = f.norm();
    if !(dt > 0.0) || !(n > EPS_NORM) {
        return Err(Error::DegenerateChord { t, dt });
    }
    Ok(f.dot(curve.derivative(t + dt, 1)?) / n)
}

/// Closed-form one-sided limits in the derivative frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativePlaneLimits {
    pub phi: f64,
    pub psi12: Vec3,
    /// Always the zero vector; the 1-3 rotation vanishes in the limit.
    pub psi13: Vec3,
    pub psi23: Vec3,
    /// Sign of `r'∧r''·r'''`.
    pub epsilon: i8,
}

pub fn derivative_plane_limits(curve: &SpaceCurve, t: f64) -> Result<DerivativePlaneLimits> {
    let [v, a, j] = [curve.derivative(t, 1)?, curve.derivative(t, 2)?, curve.derivative(t, 3)?];
    let (vv, aa) = (v.dot(v), a.dot(a));
    if !(vv.sqrt() > EPS_NORM && aa.sqrt() > EPS_NORM) {
        return Err(Error::SingularPoint { t });
    }
    derivative_frame(curve, t)?;
    let phi = vv.sqrt();
    let psi12 = (v * -v.dot(a) + a * vv) / (2.0 * vv * phi);
    let psi23 = (a * -a.dot(j) + j * aa) / (3.0 * aa * aa.sqrt());
    let epsilon = if triple_product(v, a, j) > 0.0 { 1 } else { -1 };
    Ok(DerivativePlaneLimits { phi, psi12, psi13: Vec3::zero(), psi23, epsilon })
}

/// The limits estimated from finite-`Δt` probes and extrapolated to
/// `Δt → 0⁺`: `φ`, then the 1-2, 1-3 and 2-3 plane speeds.
pub fn derivative_plane_ladder(curve: &SpaceCurve, t: f64) -> Result<[Extrapolation; 4]> {
    let speed = |k: usize| richardson(|dt| Ok(derivative_plane_speeds(curve, t, dt)?[k]), &LIMIT_LADDER);
    Ok([richardson(|dt| chord_rate(curve, t, dt), &LIMIT_LADDER)?, speed(0)?, speed(1)?, speed(2)?])
}

/// The five classification quantities at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantTuple {
    pub phi: f64,
    pub s12: f64,
    /// Identically zero; kept so the tuple has all five entries.
    pub s13: f64,
    pub s23: f64,
    pub epsilon: i8,
}

pub fn invariants(curve: &SpaceCurve, t: f64) -> Result<InvariantTuple> {
    let l = derivative_plane_limits(curve, t)?;
    Ok(InvariantTuple { phi: l.phi, s12: l.psi12.norm(), s13: 0.0, s23: l.psi23.norm(), epsilon: l.epsilon })
}

/// Step of the five-point differences used to differentiate invariants.
const CHAIN_STEP: f64 = 1e-3;
/// Agreement required between invariant-derived and direct values.
pub const CHAIN_TOL: f64 = 1e-8;

fn d_dt(f: &dyn Fn(f64) -> Result<f64>, t: f64) -> Result<f64> {
    // Fourth-order five-point central difference.
    let h = (t + CHAIN_STEP) - t;
    Ok((f(t - 2.0 * h)? - 8.0 * f(t - h)? + 8.0 * f(t + h)? - f(t + 2.0 * h)?) / (12.0 * h))
}

/// Frame quantities rebuilt from the invariants alone, next to their direct
/// evaluation.
///
/// Order: `|r'|², r'·r'', |r''|², r''·r''', |r'''|², r'·r''', |r'∧r''|,
/// (r'∧r''·r''')²`. Derivatives of invariants are taken numerically, so the
/// grid point must lie at least `4·10⁻³` inside the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    pub from_invariants: [f64; 8],
    pub direct: [f64; 8],
    /// Largest deviation, each scaled by its Cauchy–Schwarz bound.
    pub max_rel: f64,
    /// Curvature `|r'∧r''|/|r'|³`: (from invariants, direct).
    pub curvature: (f64, f64),
    /// Torsion `(r'∧r''·r''')/|r'∧r''|²`: (from invariants, direct).
    pub torsion: (f64, f64),
}

impl ChainCheck {
    pub fn ok(&self) -> bool {
        self.max_rel <= CHAIN_TOL
    }
}

pub fn invariant_chain(curve: &SpaceCurve, t: f64) -> Result<ChainCheck> {
    let inv = |s: f64| invariants(curve, s);
    let phi = |s: f64| Ok(inv(s)?.phi);
    let q12 = |s: f64| Ok(phi(s)? * d_dt(&phi, s)?);
    let q22 = |s: f64| {
        let (i, p12) = (inv(s)?, q12(s)?);
        Ok((4.0 * i.s12 * i.s12 * i.phi.powi(4) + p12 * p12) / (i.phi * i.phi))
    };
    let i = inv(t)?;
    let (p11, p12, p22) = (i.phi * i.phi, q12(t)?, q22(t)?);
    let p23 = 0.5 * d_dt(&q22, t)?;
    let p33 = (9.0 * i.s23 * i.s23 * p22 * p22 + p23 * p23) / p22;
    let p13 = d_dt(&q12, t)? - p22;
    let cross = 2.0 * i.s12 * p11;
    let gram = p11 * (p22 * p33 - p23 * p23) - p12 * (p12 * p33 - p23 * p13) + p13 * (p12 * p23 - p22 * p13);
    let from_invariants = [p11, p12, p22, p23, p33, p13, cross, gram];

    let [v, a, j] = [curve.derivative(t, 1)?, curve.derivative(t, 2)?, curve.derivative(t, 3)?];
    let triple = triple_product(v, a, j);
    let direct = [v.dot(v), v.dot(a), a.dot(a), a.dot(j), j.dot(j), v.dot(j), v.cross(a).norm(), triple * triple];

    let (nv, na, nj) = (v.norm(), a.norm(), j.norm());
    let scales = [nv * nv, nv * na, na * na, na * nj, nj * nj, nv * nj, nv * na, (nv * na * nj).powi(2)];
    let max_rel = from_invariants
        .iter()
        .zip(&direct)
        .zip(&scales)
        .map(|((x, y), s)| (x - y).abs() / s)
        .fold(0.0, f64::max);

    let signed = f64::from(i.epsilon) * gram.max(0.0).sqrt();
    Ok(ChainCheck {
        from_invariants,
        direct,
        max_rel,
        curvature: (cross / p11.powf(1.5), direct[6] / nv.powi(3)),
        torsion: (signed / (cross * cross), triple / direct[6].powi(2)),
    })
}

/// Outcome of [`space_congruent`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceCongruenceReport {
    pub congruent: bool,
    /// Deviations of `φ`, `|ψ₁₂|`, `|ψ₁₃|`, `|ψ₂₃|`.
    pub invariants: CongruenceReport,
    /// First grid value where the orientation signs differ.
    pub epsilon_mismatch_at: Option<f64>,
    /// Worst chain-consistency deviation on each curve.
    pub chain_max_rel: [f64; 2],
}

/// Compare the five invariants of two curves pointwise on `grid`, and check
/// that each curve's invariants reproduce its frame data.
pub fn space_congruent(a: &SpaceCurve, b: &SpaceCurve, grid: &[f64]) -> Result<SpaceCongruenceReport> {
    let mut report = CongruenceReport::new();
    let mut eps_mismatch = None;
    let mut chain = [0.0f64; 2];
    for &t in grid {
        let (ia, ib) = (invariants(a, t)?, invariants(b, t)?);
        if ia.epsilon != ib.epsilon && eps_mismatch.is_none() {
            eps_mismatch = Some(t);
        }
        report.compare(t, "phi", ia.phi, ib.phi);
        report.compare(t, "s12", ia.s12, ib.s12);
        report.compare(t, "s13", ia.s13, ib.s13);
        report.compare(t, "s23", ia.s23, ib.s23);
        chain[0] = chain[0].max(invariant_chain(a, t)?.max_rel);
        chain[1] = chain[1].max(invariant_chain(b, t)?.max_rel);
    }
    let congruent = eps_mismatch.is_none() && report.congruent && chain.iter().all(|&c| c <= CHAIN_TOL);
    Ok(SpaceCongruenceReport { congruent, invariants: report, epsilon_mismatch_at: eps_mismatch, chain_max_rel: chain })
}

/// Sample a scalar function's derivative by central differences; used by the
/// consistency checks.
pub fn fd_scalar<F: Fn(f64) -> Result<f64>>(f: F, t: f64, h: f64) -> Result<f64> {
    finite_difference(|s| Ok(Vec2::new(f(s)?, 0.0)), t, 1, h, Stencil::Central).map(|v| v.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_catalog_curve, CurveSpec};
    use std::collections::BTreeMap;

    fn helix(pitch: f64, offset: Vec3) -> SpaceCurve {
        let p: BTreeMap<String, f64> = [("pitch", pitch), ("cx", offset.x), ("cy", offset.y), ("cz", offset.z)]
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        make_catalog_curve("helix", &p).unwrap().into_space().unwrap()
    }

    #[test]
    fn distance_examples() {
        let h = helix(1.0, Vec3::new(0.0, 0.0, 1.0));
        let k = space_distance_kinematics(&h, 0.0).unwrap();
        assert!((k.speeds[0] - 1.0).abs() < 1e-15);
        let flat = CurveSpec::catalog("polynomial", &[("x1", 1.0), ("y0", 2.0), ("z0", 3.0)]).build().unwrap();
        let k = space_distance_kinematics(&flat.into_space().unwrap(), 0.5).unwrap();
        assert_eq!(k.speeds[2], 0.0);
        let through = helix(1.0, Vec3::new(-1.0, 0.0, 0.0));
        assert!(matches!(space_distance_kinematics(&through, 0.0), Err(Error::CenterOnCurve { .. })));
    }

    #[test]
    fn basis_examples() {
        let c = CurveSpec::catalog("twisted-cubic", &[]).build().unwrap().into_space().unwrap();
        let g = basis_coefficients(&c, 0.3, 0.0).unwrap();
        assert_eq!((g.g1, g.g2, g.g3), (0.0, 0.0, 0.0));
        let dt = 1e-3;
        let g = basis_coefficients(&c, 0.3, dt).unwrap();
        assert!((g.g1 / dt - 1.0).abs() < 1e-5 && (g.g2 / (dt * dt) - 0.5).abs() < 1e-5);
        assert!((g.g3 / dt.powi(3) - 1.0 / 6.0).abs() < 1e-5);
    }

    #[test]
    fn helix_limits() {
        let l = derivative_plane_limits(&helix(1.0, Vec3::zero()), 0.9).unwrap();
        assert!((l.phi - 2f64.sqrt()).abs() < 1e-15);
        assert!((l.psi12.norm() - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((l.psi23.norm() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(l.epsilon, 1);
        let circle = make_catalog_curve("circle", &BTreeMap::new()).unwrap().into_space().unwrap();
        assert!(matches!(derivative_plane_limits(&circle, 0.3), Err(Error::DegenerateFrame { .. })));
    }

    #[test]
    fn pair_examples() {
        let a = helix(1.0, Vec3::zero());
        let b = helix(1.0, Vec3::new(1.0, 1.0, 1.0));
        let k = pair_kinematics(&a, &b, 0.4).unwrap();
        assert_eq!(k.dd, 0.0);
        assert_eq!(k.speeds, [0.0; 3]);
        assert!(matches!(pair_kinematics(&a, &a, 0.4), Err(Error::CurvesIntersect { .. })));
    }

    #[test]
    fn congruence() {
        let grid: Vec<f64> = (0..20).map(|i| 0.2 + 0.25 * i as f64).collect();
        let h = helix(1.0, Vec3::zero());
        let mirror = h.clone().transformed([[1., 0., 0.], [0., 1., 0.], [0., 0., -1.]], Vec3::zero());
        let r = space_congruent(&h, &mirror, &grid).unwrap();
        assert!(!r.congruent && r.epsilon_mismatch_at.is_some());
        let r = space_congruent(&h, &helix(1.05, Vec3::zero()), &grid).unwrap();
        assert!(!r.congruent);
        let r = space_congruent(&h, &h, &grid).unwrap();
        assert!(r.congruent, "{r:?}");
    }
}
