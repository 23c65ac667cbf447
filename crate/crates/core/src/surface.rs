//! Curves on surfaces.
//!
//! A [`Surface`] is a chart `(u, v) ↦ r(u, v)` with partial derivatives up to
//! order 3. A curve on it is given in chart coordinates as a plane curve
//! `t ↦ (u(t), v(t))` (see [`ChartCurve`]). From the fundamental forms and
//! Christoffel symbols of the chart we get the space derivatives of the
//! composed curve `t ↦ r(u(t), v(t))`, and the rotation of the chord inside
//! three planes attached to the natural frame `{r₁, r₂, n}`:
//!
//! * 𝒜 = span{r₁, r₂}, the tangent plane,
//! * ℬ = span{r₁, n},
//! * 𝒞 = span{r₂, n}.
//!
//! As in the derivative-frame construction for space curves, the chord is
//! expanded in `{r₁, r₂, n}` and projected along the omitted basis vector.
//!
//! Index conventions: `gamma[k][i][j] = Γᵏ_ij`, `gamma_partials[l][k][i][j] =
//! ∂_l Γᵏ_ij`, `l_partials[k][i][j] = ∂_k L_ij`, with index 0 for `u` and 1
//! for `v`. The unit normal is `n = unit(r_u ∧ r_v)`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{expr_plane_curve, PlaneCurve, SpaceCurve};
use crate::error::{Error, Result};
use crate::numerics::{richardson, solve3, Extrapolation, LIMIT_LADDER};
use crate::space::{gram_speed, kinematics3, Degeneracy, SpaceKinematics};
use crate::vec::{Vec2, Vec3, EPS_NORM};

/// A curve in chart coordinates: `x` is `u(t)`, `y` is `v(t)`.
pub type ChartCurve = PlaneCurve;

pub type Mat2 = [[f64; 2]; 2];
pub type Sym3 = [[[f64; 2]; 2]; 2];

/// Step for differentiating Γ and L numerically when a chart has no third
/// partials.
pub const GEOMETRY_FD_STEP: f64 = 1e-4;

/// Chart value and partial derivatives at one point.
///
/// `d1[i] = r_i`, `d2[i][j] = r_ij`, `d3[i][j][k] = r_ijk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub r: Vec3,
    pub d1: [Vec3; 2],
    pub d2: [[Vec3; 2]; 2],
    pub d3: Option<[[[Vec3; 2]; 2]; 2]>,
}

pub type ChartFn = Arc<dyn Fn(f64, f64) -> Partials + Send + Sync>;

/// A parametrized surface patch.
#[derive(Clone)]
pub struct Surface {
    name: String,
    u_range: (f64, f64),
    v_range: (f64, f64),
    chart: ChartFn,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface")
            .field("name", &self.name)
            .field("u_range", &self.u_range)
            .field("v_range", &self.v_range)
            .finish()
    }
}

pub const SURFACE_CATALOG: &[&str] = &["sphere", "torus", "plane", "graph", "cylinder"];

/// Derivatives `[f, f', f'', f''']` of `cos` at `x`.
fn cos_jet(x: f64) -> [f64; 4] {
    let (s, c) = x.sin_cos();
    [c, -s, -c, s]
}

/// Derivatives of `sin` at `x`.
fn sin_jet(x: f64) -> [f64; 4] {
    let (s, c) = x.sin_cos();
    [s, c, -s, -c]
}

/// Surface of revolution `(ρ(v) cos u, ρ(v) sin u, z(v)) + center`, from the
/// jets of `ρ` and `z`.
fn revolution(u: f64, rho: [f64; 4], z: [f64; 4], center: Vec3) -> Partials {
    let (cu, su) = (cos_jet(u), sin_jet(u));
    // ∂ᵢᵤ∂ʲᵥ r for i + j ≤ 3.
    let d = |i: usize, j: usize| {
        Vec3::new(rho[j] * cu[i], rho[j] * su[i], if i == 0 { z[j] } else { 0.0 })
    };
    let idx = |ks: &[usize]| {
        let nv = ks.iter().filter(|&&k| k == 1).count();
        d(ks.len() - nv, nv)
    };
    let mut d2 = [[Vec3::zero(); 2]; 2];
    let mut d3 = [[[Vec3::zero(); 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            d2[i][j] = idx(&[i, j]);
            for k in 0..2 {
                d3[i][j][k] = idx(&[i, j, k]);
            }
        }
    }
    Partials { r: d(0, 0) + center, d1: [d(1, 0), d(0, 1)], d2, d3: Some(d3) }
}

struct Params<'a> {
    surface: &'a str,
    map: &'a BTreeMap<String, f64>,
    allowed: &'a [&'a str],
}

impl Params<'_> {
    fn get(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.map.get(key).copied().unwrap_or(default);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::BadParameters(format!("{}: {key} must be finite", self.surface)))
        }
    }

    fn check_keys(&self) -> Result<()> {
        match self.map.keys().find(|k| !self.allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::BadParameters(format!("{}: unknown parameter {k:?}", self.surface))),
            None => Ok(()),
        }
    }

    fn center(&self) -> Result<Vec3> {
        Ok(Vec3::new(self.get("cx", 0.0)?, self.get("cy", 0.0)?, self.get("cz", 0.0)?))
    }
}

/// Generous chart range for angular coordinates.
const ANGLE_RANGE: (f64, f64) = (-2.0 * PI, 4.0 * PI);
const FLAT_RANGE: (f64, f64) = (-1e3, 1e3);

impl Surface {
    pub fn new<F>(name: impl Into<String>, u_range: (f64, f64), v_range: (f64, f64), chart: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Partials + Send + Sync + 'static,
    {
        for (a, b) in [u_range, v_range] {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::BadParameters(format!("invalid chart range [{a}, {b}]")));
            }
        }
        Ok(Self { name: name.into(), u_range, v_range, chart: Arc::new(chart) })
    }

    /// Build a catalog surface. Parameters (defaults in parentheses):
    ///
    /// | kind     | parameters                                              |
    /// |----------|---------------------------------------------------------|
    /// | sphere   | `radius` (1), `cx cy cz` (0)                            |
    /// | torus    | `major` (2), `minor` (1), `cx cy cz` (0)                |
    /// | cylinder | `radius` (1), `cx cy cz` (0); axis along z              |
    /// | plane    | `cx cy cz` (0); the plane `z = cz`                      |
    /// | graph    | `c kx ky kxx kxy kyy` (0); `z = c + kx x + ky y + kxx x² + kxy xy + kyy y²` |
    ///
    /// Sphere charts use longitude `u` and latitude `v ∈ [−π/2, π/2]`; angles
    /// range over `[−2π, 4π]`, flat coordinates over `[−10³, 10³]`.
    pub fn catalog(kind: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let p = |allowed: &'static [&'static str]| Params { surface: kind, map: params, allowed };
        match kind {
            "sphere" => {
                let p = p(&["radius", "cx", "cy", "cz"]);
                p.check_keys()?;
                let (radius, center) = (p.get("radius", 1.0)?, p.center()?);
                if !(radius > 0.0) {
                    return Err(Error::BadParameters("sphere: radius must be positive".into()));
                }
                Self::new("sphere", ANGLE_RANGE, (-FRAC_PI_2, FRAC_PI_2), move |u, v| {
                    revolution(u, cos_jet(v).map(|c| radius * c), sin_jet(v).map(|s| radius * s), center)
                })
            }
            "torus" => {
                let p = p(&["major", "minor", "cx", "cy", "cz"]);
                p.check_keys()?;
                let (major, minor, center) = (p.get("major", 2.0)?, p.get("minor", 1.0)?, p.center()?);
                if !(minor > 0.0 && major > minor) {
                    return Err(Error::BadParameters("torus: need major > minor > 0".into()));
                }
                Self::new("torus", ANGLE_RANGE, ANGLE_RANGE, move |u, v| {
                    let mut rho = cos_jet(v).map(|c| minor * c);
                    rho[0] += major;
                    revolution(u, rho, sin_jet(v).map(|s| minor * s), center)
                })
            }
            "cylinder" => {
                let p = p(&["radius", "cx", "cy", "cz"]);
                p.check_keys()?;
                let (radius, center) = (p.get("radius", 1.0)?, p.center()?);
                if !(radius > 0.0) {
                    return Err(Error::BadParameters("cylinder: radius must be positive".into()));
                }
                Self::new("cylinder", ANGLE_RANGE, FLAT_RANGE, move |u, v| {
                    revolution(u, [radius, 0.0, 0.0, 0.0], [v, 1.0, 0.0, 0.0], center)
                })
            }
            "plane" => {
                let p = p(&["cx", "cy", "cz"]);
                p.check_keys()?;
                let center = p.center()?;
                Self::new("plane", FLAT_RANGE, FLAT_RANGE, move |u, v| Partials {
                    r: Vec3::new(u, v, 0.0) + center,
                    d1: [Vec3::ex(), Vec3::ey()],
                    d2: [[Vec3::zero(); 2]; 2],
                    d3: Some([[[Vec3::zero(); 2]; 2]; 2]),
                })
            }
            "graph" => {
                let p = p(&["c", "kx", "ky", "kxx", "kxy", "kyy"]);
                p.check_keys()?;
                let k = [p.get("c", 0.0)?, p.get("kx", 0.0)?, p.get("ky", 0.0)?];
                let (kxx, kxy, kyy) = (p.get("kxx", 0.0)?, p.get("kxy", 0.0)?, p.get("kyy", 0.0)?);
                Self::new("graph", FLAT_RANGE, FLAT_RANGE, move |x, y| {
                    let f = k[0] + k[1] * x + k[2] * y + kxx * x * x + kxy * x * y + kyy * y * y;
                    let (fx, fy) = (k[1] + 2.0 * kxx * x + kxy * y, k[2] + kxy * x + 2.0 * kyy * y);
                    let zc = |z: f64| Vec3::new(0.0, 0.0, z);
                    Partials {
                        r: Vec3::new(x, y, f),
                        d1: [Vec3::new(1.0, 0.0, fx), Vec3::new(0.0, 1.0, fy)],
                        d2: [[zc(2.0 * kxx), zc(kxy)], [zc(kxy), zc(2.0 * kyy)]],
                        d3: Some([[[Vec3::zero(); 2]; 2]; 2]),
                    }
                })
            }
            other => Err(Error::UnknownCurve(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        (self.u_range, self.v_range)
    }

    /// Drop the third partials so Γ and L derivatives are taken numerically.
    pub fn without_third_partials(self) -> Self {
        let chart = self.chart.clone();
        Self { chart: Arc::new(move |u, v| Partials { d3: None, ..chart(u, v) }), ..self }
    }

    pub fn partials(&self, u: f64, v: f64) -> Result<Partials> {
        for (x, (a, b)) in [(u, self.u_range), (v, self.v_range)] {
            if !(x >= a && x <= b) {
                return Err(Error::OutOfDomain { t: x, t0: a, t1: b });
            }
        }
        Ok((self.chart)(u, v))
    }

    pub fn point(&self, u: f64, v: f64) -> Result<Vec3> {
        Ok(self.partials(u, v)?.r)
    }
}

/// Intrinsic and extrinsic data of a surface at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceGeometry {
    pub point: Vec3,
    /// `[r_u, r_v]`.
    pub frame: [Vec3; 2],
    pub n: Vec3,
    pub g: Mat2,
    pub g_inv: Mat2,
    pub l: Mat2,
    pub gamma: Sym3,
    pub gamma_partials: [Sym3; 2],
    pub l_partials: Sym3,
}

/// Zeroth- and first-order pieces shared by the analytic and numeric paths.
struct Base {
    n: Vec3,
    g: Mat2,
    g_inv: Mat2,
    l: Mat2,
    /// `dg[k][i][j] = ∂_k g_ij`.
    dg: Sym3,
    /// Lowered symbols `Γ_mij`.
    gamma_low: Sym3,
    gamma: Sym3,
}

fn base(p: &Partials, u: f64, v: f64) -> Result<Base> {
    let [r1, r2] = p.d1;
    let cross = r1.cross(r2);
    // Scale-aware: a chart with one nearly vanishing partial is irregular.
    if !(cross.norm() > EPS_NORM * (r1.dot(r1) + r2.dot(r2))) || !cross.norm().is_finite() {
        return Err(Error::IrregularNet { u, v });
    }
    let n = cross / cross.norm();
    let g = [[r1.dot(r1), r1.dot(r2)], [r2.dot(r1), r2.dot(r2)]];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let g_inv = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
    let mut l = [[0.0; 2]; 2];
    let mut dg = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            l[i][j] = p.d2[i][j].dot(n);
            for k in 0..2 {
                dg[k][i][j] = p.d2[k][i].dot(p.d1[j]) + p.d1[i].dot(p.d2[k][j]);
            }
        }
    }
    let mut gamma_low = [[[0.0; 2]; 2]; 2];
    for m in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                gamma_low[m][i][j] = 0.5 * (dg[i][j][m] + dg[j][i][m] - dg[m][i][j]);
            }
        }
    }
    let gamma = raise(&g_inv, &gamma_low);
    Ok(Base { n, g, g_inv, l, dg, gamma_low, gamma })
}

fn raise(g_inv: &Mat2, low: &Sym3) -> Sym3 {
    let mut out = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                out[k][i][j] = (0..2).map(|m| g_inv[k][m] * low[m][i][j]).sum();
            }
        }
    }
    out
}

/// `∂_l Γ` and `∂_k L` from third partials.
fn analytic_partials(p: &Partials, d3: &[[[Vec3; 2]; 2]; 2], b: &Base) -> ([Sym3; 2], Sym3) {
    let (r1, r2, r3) = (&p.d1, &p.d2, d3);
    // ∂_l ∂_k g_ij = r_kli·r_j + r_ki·r_lj + r_li·r_kj + r_i·r_klj.
    let ddg = |l: usize, k: usize, i: usize, j: usize| {
        r3[k][l][i].dot(r1[j]) + r2[k][i].dot(r2[l][j]) + r2[l][i].dot(r2[k][j]) + r1[i].dot(r3[k][l][j])
    };
    let mut gamma_partials = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        let mut d_low = [[[0.0; 2]; 2]; 2];
        for m in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    d_low[m][i][j] = 0.5 * (ddg(l, i, j, m) + ddg(l, j, i, m) - ddg(l, m, i, j));
                }
            }
        }
        // ∂_l gᵏᵐ = −gᵏᵃ ∂_l g_ab gᵇᵐ.
        let mut d_inv = [[0.0; 2]; 2];
        for k in 0..2 {
            for m in 0..2 {
                for a in 0..2 {
                    for bb in 0..2 {
                        d_inv[k][m] -= b.g_inv[k][a] * b.dg[l][a][bb] * b.g_inv[bb][m];
                    }
                }
            }
        }
        let (t1, t2) = (raise(&d_inv, &b.gamma_low), raise(&b.g_inv, &d_low));
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    gamma_partials[l][k][i][j] = t1[k][i][j] + t2[k][i][j];
                }
            }
        }
    }
    // Weingarten: n_k = −L_kj gʲᵐ r_m.
    let dn = |k: usize| {
        let mut out = Vec3::zero();
        for j in 0..2 {
            for m in 0..2 {
                out -= r1[m] * (b.l[k][j] * b.g_inv[j][m]);
            }
        }
        out
    };
    let mut l_partials = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        let nk = dn(k);
        for i in 0..2 {
            for j in 0..2 {
                l_partials[k][i][j] = r3[i][j][k].dot(b.n) + r2[i][j].dot(nk);
            }
        }
    }
    (gamma_partials, l_partials)
}

/// `∂_l Γ` and `∂_k L` by central differences of the chart data.
fn numeric_partials(surface: &Surface, u: f64, v: f64) -> Result<([Sym3; 2], Sym3)> {
    let at = |du: f64, dv: f64| -> Result<Base> {
        let (x, y) = (u + du, v + dv);
        base(&surface.partials(x, y)?, x, y)
    };
    let mut gamma_partials = [[[[0.0; 2]; 2]; 2]; 2];
    let mut l_partials = [[[0.0; 2]; 2]; 2];
    for dir in 0..2 {
        let step = |s: f64| if dir == 0 { (s, 0.0) } else { (0.0, s) };
        let h = GEOMETRY_FD_STEP;
        let (hp, hm) = (step(h), step(-h));
        let (plus, minus) = (at(hp.0, hp.1)?, at(hm.0, hm.1)?);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    gamma_partials[dir][k][i][j] = (plus.gamma[k][i][j] - minus.gamma[k][i][j]) / (2.0 * h);
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                l_partials[dir][i][j] = (plus.l[i][j] - minus.l[i][j]) / (2.0 * h);
            }
        }
    }
    Ok((gamma_partials, l_partials))
}

/// First and second fundamental forms, Christoffel symbols and their
/// derivatives at `(u, v)`.
pub fn surface_geometry(surface: &Surface, u: f64, v: f64) -> Result<SurfaceGeometry> {
    let p = surface.partials(u, v)?;
    let b = base(&p, u, v)?;
    let (gamma_partials, l_partials) = match &p.d3 {
        Some(d3) => analytic_partials(&p, d3, &b),
        None => numeric_partials(surface, u, v)?,
    };
    Ok(SurfaceGeometry {
        point: p.r,
        frame: p.d1,
        n: b.n,
        g: b.g,
        g_inv: b.g_inv,
        l: b.l,
        gamma: b.gamma,
        gamma_partials,
        l_partials,
    })
}

impl SurfaceGeometry {
    /// `Σ g_ij aⁱ bʲ`.
    pub fn first_form(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        bilinear(&self.g, a, b)
    }

    /// `Σ L_ij aⁱ bʲ`.
    pub fn second_form(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        bilinear(&self.l, a, b)
    }

    /// `Σ aᵏ r_k`.
    pub fn tangent(&self, a: [f64; 2]) -> Vec3 {
        self.frame[0] * a[0] + self.frame[1] * a[1]
    }

    /// `Σ Γᵏ_ij aⁱ bʲ` for each `k`.
    pub fn gamma_contract(&self, a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
        [0, 1].map(|k| bilinear(&self.gamma[k], a, b))
    }

    /// Residual of `∂_k g_ij = Σ_m (Γᵐ_ki g_mj + Γᵐ_kj g_mi)` given the
    /// metric derivatives, relative to their size.
    pub fn compatibility_residual(&self, dg: &Sym3) -> f64 {
        let mut worst: f64 = 0.0;
        let scale = dg.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let rhs: f64 = (0..2)
                        .map(|m| self.gamma[m][k][i] * self.g[m][j] + self.gamma[m][k][j] * self.g[m][i])
                        .sum();
                    worst = worst.max((dg[k][i][j] - rhs).abs() / scale);
                }
            }
        }
        worst
    }
}

fn bilinear(m: &Mat2, a: [f64; 2], b: [f64; 2]) -> f64 {
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += m[i][j] * a[i] * b[j];
        }
    }
    s
}

fn arr(v: Vec2) -> [f64; 2] {
    [v.x, v.y]
}

fn chart_jet(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<(SurfaceGeometry, [[f64; 2]; 4])> {
    let [c, c1, c2, c3] = curve.jet(t)?;
    let geom = surface_geometry(surface, c.x, c.y)?;
    Ok((geom, [arr(c), arr(c1), arr(c2), arr(c3)]))
}

/// `r`, `r'`, `r''`, `r'''` of `t ↦ r(u(t), v(t))` from the natural-frame
/// expansion.
///
/// With `Aᵏ = u''ᵏ + Γᵏ_ij u'ⁱu'ʲ` and `B = L_ij u'ⁱu'ʲ`:
///
/// * `r'' = Aᵏ r_k + B n`
/// * `r''' = [u'''ᵏ + ∂_lΓᵏ_ij u'ⁱu'ʲu'ˡ + 3Γᵏ_ij u''ⁱu'ʲ + Γᵐ_ij Γᵏ_ml u'ⁱu'ʲu'ˡ
///   − L_ij L_lm gᵐᵏ u'ⁱu'ʲu'ˡ] r_k + [Γᵏ_ij L_kl u'ⁱu'ʲu'ˡ + ∂_k L_ij u'ⁱu'ʲu'ᵏ
///   + 3 L_ij u''ⁱu'ʲ] n`
pub fn chart_curve_derivatives(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<[Vec3; 4]> {
    let (geom, [_, u1, u2, u3]) = chart_jet(surface, curve, t)?;
    Ok(expand(&geom, u1, u2, u3))
}

fn expand(geom: &SurfaceGeometry, u1: [f64; 2], u2: [f64; 2], u3: [f64; 2]) -> [Vec3; 4] {
    let gu = geom.gamma_contract(u1, u1);
    let a = [u2[0] + gu[0], u2[1] + gu[1]];
    let b = geom.second_form(u1, u1);

    let mut tang = [0.0; 2];
    let mut normal = 3.0 * geom.second_form(u2, u1);
    // L_lj u'ˡ, lowered then raised with gʲᵏ.
    let lu = [0, 1].map(|j| (0..2).map(|l| geom.l[l][j] * u1[l]).sum::<f64>());
    for k in 0..2 {
        let mut s = u3[k] + 3.0 * bilinear(&geom.gamma[k], u2, u1);
        for l in 0..2 {
            s += bilinear(&geom.gamma_partials[l][k], u1, u1) * u1[l];
            // Γᵐ_ij u'ⁱu'ʲ Γᵏ_ml u'ˡ
            s += (0..2).map(|m| gu[m] * geom.gamma[k][m][l]).sum::<f64>() * u1[l];
        }
        s -= b * (0..2).map(|j| lu[j] * geom.g_inv[j][k]).sum::<f64>();
        tang[k] = s;
        normal += gu[k] * lu[k] + bilinear(&geom.l_partials[k], u1, u1) * u1[k];
    }
    [
        geom.point,
        geom.tangent(u1),
        geom.tangent(a) + geom.n * b,
        geom.tangent(tang) + geom.n * normal,
    ]
}

/// The composed space curve `t ↦ r(u(t), v(t))`, with derivatives from
/// [`chart_curve_derivatives`].
pub fn composed_curve(surface: &Surface, curve: &ChartCurve) -> Result<SpaceCurve> {
    let (s, c) = (surface.clone(), curve.clone());
    let jet = move |t: f64| chart_curve_derivatives(&s, &c, t);
    let (j1, j2, j3) = (jet.clone(), jet.clone(), jet.clone());
    SpaceCurve::new(format!("{} on {}", curve.name(), surface.name()), curve.domain(), move |t| Ok(jet(t)?[0]))?
        .with_derivative(1, move |t| Ok(j1(t)?[1]))?
        .with_derivative(2, move |t| Ok(j2(t)?[2]))?
        .with_derivative(3, move |t| Ok(j3(t)?[3]))
}

/// Kinematics of the position vector of a curve on a surface, seen from the
/// origin.
pub fn surface_distance_kinematics(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<SpaceKinematics> {
    let [r, v, a, _] = chart_curve_derivatives(surface, curve, t)?;
    kinematics3(r, v, a).map_err(|e| match e {
        Degeneracy::Center => Error::CenterOnCurve { t },
        Degeneracy::Axis(which) => Error::DegenerateProjection { t, which },
    })
}

/// `|r_u u' + r_v v'|`, the speed of the composed curve.
pub fn surface_local_first_derivative(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<f64> {
    let (geom, [_, u1, _, _]) = chart_jet(surface, curve, t)?;
    Ok(geom.tangent(u1).norm())
}

/// `Σ g_ij u'ⁱu'ʲ` along a chart curve.
pub fn first_form_speed_sq(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<f64> {
    let (geom, [_, u1, _, _]) = chart_jet(surface, curve, t)?;
    Ok(geom.first_form(u1, u1))
}

/// Components of a chord in the natural frame `{r₁, r₂, n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiCoefficients {
    pub chi1: f64,
    pub chi2: f64,
    pub chi3: f64,
}

fn natural_coefficients(geom: &SurfaceGeometry, w: Vec3, u: f64, v: f64) -> Result<[f64; 3]> {
    solve3([geom.frame[0], geom.frame[1], geom.n], w).ok_or(Error::IrregularNet { u, v })
}

/// `r(t+dt) − r(t) = χ₁ r₁ + χ₂ r₂ + χ₃ n`, with the frame taken at `t`.
pub fn chi_coefficients(surface: &Surface, curve: &ChartCurve, t: f64, dt: f64) -> Result<ChiCoefficients> {
    if !(dt > 0.0) {
        return Err(Error::DegenerateChord { t, dt });
    }
    let c = curve.position(t)?;
    let geom = surface_geometry(surface, c.x, c.y)?;
    let q = curve.position(t + dt)?;
    let chord = surface.point(q.x, q.y)? - geom.point;
    let [chi1, chi2, chi3] = natural_coefficients(&geom, chord, c.x, c.y)?;
    Ok(ChiCoefficients { chi1, chi2, chi3 })
}

pub const SURFACE_PLANES: [&str; 3] = ["plane A", "plane B", "plane C"];

/// Rotational speeds (with respect to `dt`) of the chord projected into the
/// planes 𝒜, ℬ, 𝒞 of the natural frame at `t`.
pub fn surface_plane_speeds(surface: &Surface, curve: &ChartCurve, t: f64, dt: f64) -> Result<[f64; 3]> {
    let chi = chi_coefficients(surface, curve, t, dt)?;
    let c = curve.position(t)?;
    let geom = surface_geometry(surface, c.x, c.y)?;
    let velocity = chart_curve_derivatives(surface, curve, t + dt)?[1];
    let dchi = natural_coefficients(&geom, velocity, c.x, c.y)?;
    let coef = [chi.chi1, chi.chi2, chi.chi3];
    let basis = [geom.frame[0], geom.frame[1], geom.n];
    let chord_norm = (basis[0] * coef[0] + basis[1] * coef[1] + basis[2] * coef[2]).norm();
    let mut out = [0.0; 3];
    for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        let which = SURFACE_PLANES[k];
        let (a, b) = (basis[i], basis[j]);
        let w = a * coef[i] + b * coef[j];
        if !(w.norm() > 1e-15 * chord_norm) {
            return Err(Error::DegenerateProjection { t, which });
        }
        out[k] = gram_speed(coef[i], coef[j], dchi[i], dchi[j], a.dot(a), a.dot(b), b.dot(b))
            .ok_or(Error::DegenerateProjection { t, which })?;
    }
    Ok(out)
}

/// One-sided limits of the plane speeds as `dt → 0⁺`.
///
/// `psi_b` needs `u' ≠ 0` and `psi_c` needs `v' ≠ 0`; otherwise the
/// corresponding projection collapses onto the normal and the limit is
/// reported as `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePlaneLimits {
    pub psi_a: f64,
    pub psi_b: Option<f64>,
    pub psi_c: Option<f64>,
}

/// Closed forms:
///
/// * `ψ_𝒜 = √(|c'|²|A|² − ⟨c', A⟩²) / (2|c'|²)`, norms and inner products in
///   the first fundamental form, `c' = (u', v')`, `Aᵏ = u''ᵏ + Γᵏ_ij u'ⁱu'ʲ`;
/// * `ψ_ℬ = |L_ij u'ⁱu'ʲ| / (2|u' r₁|)`;
/// * `ψ_𝒞 = |L_ij u'ⁱu'ʲ| / (2|v' r₂|)`.
pub fn surface_plane_rot_limits(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<SurfacePlaneLimits> {
    let (geom, [_, u1, u2, _]) = chart_jet(surface, curve, t)?;
    let vv = geom.first_form(u1, u1);
    if !(vv.sqrt() > EPS_NORM) {
        return Err(Error::SingularPoint { t });
    }
    let gu = geom.gamma_contract(u1, u1);
    let a = [u2[0] + gu[0], u2[1] + gu[1]];
    let gram = (vv * geom.first_form(a, a) - geom.first_form(u1, a).powi(2)).max(0.0);
    let psi_a = gram.sqrt() / (2.0 * vv);
    let b = geom.second_form(u1, u1).abs();
    let side = |k: usize| {
        let d = (geom.frame[k] * u1[k]).norm();
        (d > EPS_NORM).then(|| b / (2.0 * d))
    };
    Ok(SurfacePlaneLimits { psi_a, psi_b: side(0), psi_c: side(1) })
}

/// The plane speeds extrapolated from the finite-`dt` ladder.
pub fn surface_plane_ladder(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<[Extrapolation; 3]> {
    let speed = |k: usize| richardson(|dt| Ok(surface_plane_speeds(surface, curve, t, dt)?[k]), &LIMIT_LADDER);
    Ok([speed(0)?, speed(1)?, speed(2)?])
}

/// Extrapolated chord rate `|Δr|/dt → φ`.
pub fn surface_chord_ladder(surface: &Surface, curve: &ChartCurve, t: f64) -> Result<Extrapolation> {
    let composed = composed_curve(surface, curve)?;
    richardson(
        |dt| {
            let chord = composed.position(t + dt)? - composed.position(t)?;
            Ok(chord.norm() / dt)
        },
        &LIMIT_LADDER,
    )
}

/// Surface description for configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<Surface> {
        Surface::catalog(&self.kind, &self.params)
    }
}

/// A chart curve given by expressions in `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartCurveSpec {
    pub u: String,
    pub v: String,
    pub domain: [f64; 2],
}

impl ChartCurveSpec {
    pub fn build(&self) -> Result<ChartCurve> {
        Ok(expr_plane_curve(&self.u, &self.v, (self.domain[0], self.domain[1]))?.with_name("chart curve"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surf(kind: &str, params: &[(&str, f64)]) -> Surface {
        let map = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Surface::catalog(kind, &map).unwrap()
    }

    fn chart(u: &str, v: &str, d: (f64, f64)) -> ChartCurve {
        expr_plane_curve(u, v, d).unwrap()
    }

    #[test]
    fn sphere_equator() {
        let s = surf("sphere", &[]);
        let g = surface_geometry(&s, 0.3, 0.0).unwrap();
        assert!((g.g[0][0] - 1.0).abs() < 1e-15 && (g.g[1][1] - 1.0).abs() < 1e-15 && g.g[0][1].abs() < 1e-15);
        assert!((g.l[0][0] + 1.0).abs() < 1e-15);
        assert!((g.n - g.point).norm() < 1e-15, "normal points outward");

        let c = chart("t", "0", (0.0, 2.0 * PI));
        let t = 1.1;
        let [_, _, r2, _] = chart_curve_derivatives(&s, &c, t).unwrap();
        assert!((r2 + Vec3::new(t.cos(), t.sin(), 0.0)).norm() < 1e-14);
        assert!((surface_local_first_derivative(&s, &c, t).unwrap() - 1.0).abs() < 1e-15);

        let lim = surface_plane_rot_limits(&s, &c, t).unwrap();
        assert!(lim.psi_a.abs() < 1e-15);
        assert!((lim.psi_b.unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(lim.psi_c, None);

        let dt = 1e-3;
        let chi = chi_coefficients(&s, &c, t, dt).unwrap();
        assert!(chi.chi3 < 0.0 && (chi.chi3.abs() / (dt * dt / 2.0) - 1.0).abs() < 0.05);
    }

    #[test]
    fn flat_plane() {
        let s = surf("plane", &[("cz", 1.0)]);
        let g = surface_geometry(&s, 0.2, -0.4).unwrap();
        assert!(g.l.iter().flatten().all(|&x| x == 0.0));
        assert!(g.gamma.iter().flatten().flatten().all(|&x| x == 0.0));
        let line = chart("1 + 2*t", "3 - t", (0.0, 1.0));
        let [_, _, a, j] = chart_curve_derivatives(&s, &line, 0.5).unwrap();
        assert_eq!((a, j), (Vec3::zero(), Vec3::zero()));
        let curved = chart("t", "t^2", (0.0, 1.0));
        assert_eq!(chi_coefficients(&s, &curved, 0.3, 0.1).unwrap().chi3, 0.0);
        let lim = surface_plane_rot_limits(&s, &curved, 0.3).unwrap();
        assert_eq!((lim.psi_b, lim.psi_c), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn inverse_and_compatibility() {
        let s = surf("torus", &[("major", 3.0), ("minor", 1.2)]);
        for &(u, v) in &[(0.1, 0.2), (2.0, -1.0), (4.0, 3.0)] {
            let g = surface_geometry(&s, u, v).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let p: f64 = (0..2).map(|k| g.g[i][k] * g.g_inv[k][j]).sum();
                    assert!((p - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
                    assert_eq!(g.gamma[0][i][j], g.gamma[0][j][i]);
                }
            }
            // Metric derivatives straight from the chart.
            let p = s.partials(u, v).unwrap();
            let mut dg = [[[0.0; 2]; 2]; 2];
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        dg[k][i][j] = p.d2[k][i].dot(p.d1[j]) + p.d1[i].dot(p.d2[k][j]);
                    }
                }
            }
            assert!(g.compatibility_residual(&dg) < 1e-12);
        }
    }

    #[test]
    fn numeric_partials_agree() {
        let s = surf("torus", &[]);
        let a = surface_geometry(&s, 0.7, 0.4).unwrap();
        let b = surface_geometry(&s.clone().without_third_partials(), 0.7, 0.4).unwrap();
        for l in 0..2 {
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((a.gamma_partials[l][k][i][j] - b.gamma_partials[l][k][i][j]).abs() < 1e-7);
                    }
                    assert!((a.l_partials[l][k][i] - b.l_partials[l][k][i]).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let s = surf("sphere", &[]);
        assert!(matches!(surface_geometry(&s, 0.0, FRAC_PI_2), Err(Error::IrregularNet { .. })));
        assert!(matches!(s.point(0.0, 2.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(Surface::catalog("cone", &BTreeMap::new()), Err(Error::UnknownCurve(_))));
        let mut m = BTreeMap::new();
        m.insert("radius".to_string(), -1.0);
        assert!(matches!(Surface::catalog("sphere", &m), Err(Error::BadParameters(_))));
    }

    #[test]
    fn spec_records() {
        let s: SurfaceSpec = serde_json::from_str(r#"{"kind":"torus","params":{"major":3}}"#).unwrap();
        assert_eq!(s.build().unwrap().name(), "torus");
        let c: ChartCurveSpec = serde_json::from_str(r#"{"u":"t","v":"sin(t)","domain":[0,1]}"#).unwrap();
        assert_eq!(c.build().unwrap().domain(), (0.0, 1.0));
    }
}
