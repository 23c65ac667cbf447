//! Parametric curves with derivative access.
//!
//! A [`Curve`] owns a position callable and, optionally, analytic
//! derivatives of orders 1–3. Missing orders fall back to finite
//! differences: central stencils in the interior, one-sided stencils of the
//! same accuracy near the ends of the domain.
//!
//! Curves are immutable and cheap to clone (callables are shared). Callables
//! must be reentrant; every public operation is then safe to call from many
//! threads at once.
//!
//! Only smoothness is assumed, never injectivity: a self-intersecting curve
//! evaluates fine. Piecewise-smooth input is treated as smooth everywhere.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::numerics::{finite_difference, stencil_reach, Stencil};
use crate::vec::{Vec2, Vec3, Vector};

/// Environment variable overriding the default finite-difference step.
pub const FD_STEP_ENV: &str = "ROTOR_FD_STEP";

pub type PointFn<V> = Arc<dyn Fn(f64) -> Result<V> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Finite-difference steps for derivative orders 1–2 and order 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub low: f64,
    pub third: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self { low: 1e-5, third: 1e-4 }
    }
}

impl FdSteps {
    /// Defaults, or a single step for all orders taken from `ROTOR_FD_STEP`
    /// when that holds a positive finite number.
    pub fn from_env() -> Self {
        match std::env::var(FD_STEP_ENV).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            Some(h) if h.is_finite() && h > 0.0 => Self { low: h, third: h },
            _ => Self::default(),
        }
    }

    pub fn for_order(self, order: u8) -> f64 {
        if order >= 3 {
            self.third
        } else {
            self.low
        }
    }
}

/// How a given derivative order is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference(f64),
}

/// A curve `t ↦ r(t)` on a closed interval.
#[derive(Clone)]
pub struct Curve<V: Vector> {
    name: String,
    domain: (f64, f64),
    position: PointFn<V>,
    derivatives: [Option<PointFn<V>>; 3],
    fd: FdSteps,
}

pub type PlaneCurve = Curve<Vec2>;
pub type SpaceCurve = Curve<Vec3>;

impl<V: Vector> fmt::Debug for Curve<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("modes", &[1, 2, 3].map(|k| self.derivative_mode(k)))
            .finish()
    }
}

fn check_domain(t0: f64, t1: f64) -> Result<()> {
    if t0.is_finite() && t1.is_finite() && t0 < t1 {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("invalid domain [{t0}, {t1}]")))
    }
}

impl<V: Vector> Curve<V> {
    /// A curve with only a position callable; all derivatives use finite
    /// differences until analytic ones are attached.
    pub fn new<F>(name: impl Into<String>, domain: (f64, f64), position: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<V> + Send + Sync + 'static,
    {
        check_domain(domain.0, domain.1)?;
        Ok(Self {
            name: name.into(),
            domain,
            position: Arc::new(position),
            derivatives: [None, None, None],
            fd: FdSteps::from_env(),
        })
    }

    /// Convenience for infallible position and derivative callables.
    pub fn analytic<P, D1, D2, D3>(
        name: impl Into<String>,
        domain: (f64, f64),
        position: P,
        d1: D1,
        d2: D2,
        d3: D3,
    ) -> Result<Self>
    where
        P: Fn(f64) -> V + Send + Sync + 'static,
        D1: Fn(f64) -> V + Send + Sync + 'static,
        D2: Fn(f64) -> V + Send + Sync + 'static,
        D3: Fn(f64) -> V + Send + Sync + 'static,
    {
        Self::new(name, domain, move |t| Ok(position(t)))?
            .with_derivative(1, move |t| Ok(d1(t)))?
            .with_derivative(2, move |t| Ok(d2(t)))?
            .with_derivative(3, move |t| Ok(d3(t)))
    }

    pub fn with_derivative<F>(mut self, order: u8, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<V> + Send + Sync + 'static,
    {
        let slot = self
            .derivatives
            .get_mut(usize::from(order).wrapping_sub(1))
            .ok_or(Error::OrderUnsupported(order))?;
        *slot = Some(Arc::new(f));
        Ok(self)
    }

    /// Restrict or move the parameter interval.
    pub fn with_domain(mut self, domain: (f64, f64)) -> Result<Self> {
        check_domain(domain.0, domain.1)?;
        self.domain = domain;
        Ok(self)
    }

    /// Override the finite-difference steps.
    pub fn with_fd_steps(mut self, fd: FdSteps) -> Self {
        self.fd = fd;
        self
    }

    /// Drop analytic derivatives so every order uses finite differences.
    pub fn without_derivatives(mut self) -> Self {
        self.derivatives = [None, None, None];
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn fd_steps(&self) -> FdSteps {
        self.fd
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.domain.0 && t <= self.domain.1
    }

    pub fn derivative_mode(&self, order: u8) -> Option<DerivativeMode> {
        match order {
            1..=3 => Some(match self.derivatives[usize::from(order) - 1] {
                Some(_) => DerivativeMode::Analytic,
                None => DerivativeMode::FiniteDifference(self.fd.for_order(order)),
            }),
            _ => None,
        }
    }

    fn in_domain(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { t, t0: self.domain.0, t1: self.domain.1 })
        }
    }

    fn finite(&self, v: V, t: f64) -> Result<V> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::SingularPoint { t })
        }
    }

    pub fn position(&self, t: f64) -> Result<V> {
        self.in_domain(t)?;
        self.finite((self.position)(t)?, t)
    }

    /// Derivative of order 1–3 at `t`: analytic when available, otherwise a
    /// finite difference.
    pub fn derivative(&self, t: f64, order: u8) -> Result<V> {
        if !(1..=3).contains(&order) {
            return Err(Error::OrderUnsupported(order));
        }
        self.in_domain(t)?;
        match &self.derivatives[usize::from(order) - 1] {
            Some(d) => self.finite(d(t)?, t),
            None => self.fd_derivative(t, order),
        }
    }

    /// Finite-difference derivative regardless of analytic availability.
    pub fn fd_derivative(&self, t: f64, order: u8) -> Result<V> {
        self.fd_derivative_with_step(t, order, self.fd.for_order(order))
    }

    pub fn fd_derivative_with_step(&self, t: f64, order: u8, h: f64) -> Result<V> {
        if !(1..=3).contains(&order) {
            return Err(Error::OrderUnsupported(order));
        }
        self.in_domain(t)?;
        let (t0, t1) = self.domain;
        let central = stencil_reach(order, Stencil::Central) * h;
        let one_sided = stencil_reach(order, Stencil::Forward) * h;
        let stencil = if t - central >= t0 && t + central <= t1 {
            Stencil::Central
        } else if t + one_sided <= t1 {
            Stencil::Forward
        } else if t - one_sided >= t0 {
            Stencil::Backward
        } else {
            return Err(Error::BadParameters(format!(
                "domain [{t0}, {t1}] too short for a finite-difference step of {h}"
            )));
        };
        let pos = &self.position;
        let v = finite_difference(|s| pos(s), t, order, h, stencil)?;
        self.finite(v, t)
    }

    /// `[r, r', r'', r''']` at `t`.
    pub fn jet(&self, t: f64) -> Result<[V; 4]> {
        Ok([
            self.position(t)?,
            self.derivative(t, 1)?,
            self.derivative(t, 2)?,
            self.derivative(t, 3)?,
        ])
    }

    /// Largest relative mismatch between analytic derivatives and central
    /// differences on a uniform grid of `samples` interior points, per order.
    /// Orders without an analytic callable report 0.
    pub fn derivative_mismatch(&self, samples: usize) -> Result<[f64; 3]> {
        let (t0, t1) = self.domain;
        let margin = 2.0 * self.fd.third;
        let mut worst = [0.0f64; 3];
        for i in 0..samples {
            let t = t0 + margin + (t1 - t0 - 2.0 * margin) * (i as f64 + 0.5) / samples as f64;
            for order in 1..=3u8 {
                if self.derivatives[usize::from(order) - 1].is_none() {
                    continue;
                }
                let a = self.derivative(t, order)?;
                let f = self.fd_derivative(t, order)?;
                let err = (a - f).norm() / a.norm().max(1.0);
                worst[usize::from(order) - 1] = worst[usize::from(order) - 1].max(err);
            }
        }
        Ok(worst)
    }

    /// Check the analytic derivatives against finite differences on a
    /// 100-point grid (1e-5 relative for orders 1–2, 1e-3 for order 3).
    pub fn validated(self) -> Result<Self> {
        let worst = self.derivative_mismatch(100)?;
        for (k, (&w, tol)) in worst.iter().zip([1e-5, 1e-5, 1e-3]).enumerate() {
            if !(w <= tol) {
                return Err(Error::BadParameters(format!(
                    "{}: analytic derivative of order {} disagrees with finite differences (relative {w:e})",
                    self.name,
                    k + 1
                )));
            }
        }
        Ok(self)
    }

    /// Apply an affine map `x ↦ L(x) + offset` with linear part `L`.
    pub fn affine<L>(self, linear: L, offset: V) -> Self
    where
        L: Fn(V) -> V + Send + Sync + 'static,
    {
        let linear = Arc::new(linear);
        let wrap = |f: PointFn<V>, shift: Option<V>| -> PointFn<V> {
            let l = linear.clone();
            Arc::new(move |t| {
                let v = l(f(t)?);
                Ok(match shift {
                    Some(s) => v + s,
                    None => v,
                })
            })
        };
        Self {
            name: format!("{} (mapped)", self.name),
            domain: self.domain,
            position: wrap(self.position.clone(), Some(offset)),
            derivatives: self.derivatives.clone().map(|d| d.map(|f| wrap(f, None))),
            fd: self.fd,
        }
    }

    /// The same curve in a new parameter `h`, with `t = g(h)`.
    ///
    /// `g` must be strictly monotonic on `domain_h`; this is checked by
    /// sampling the sign of `g'` at 64 points. Derivatives follow the chain
    /// rule (Faà di Bruno up to order 3).
    pub fn reparametrize(&self, g: &Reparam, domain_h: (f64, f64)) -> Result<Self> {
        check_domain(domain_h.0, domain_h.1)?;
        let (h0, h1) = domain_h;
        let mut sign = 0.0;
        for i in 0..64 {
            let h = h0 + (h1 - h0) * i as f64 / 63.0;
            let d = (g.d1)(h);
            if !(d != 0.0 && d.is_finite()) || (sign != 0.0 && d.signum() != sign) {
                return Err(Error::NonMonotonic { h });
            }
            sign = d.signum();
        }
        for h in [h0, h1] {
            self.in_domain((g.g)(h))?;
        }
        let base = self.clone();
        let gg = g.clone();
        let position = move |h: f64| base.position((gg.g)(h));
        let mut out = Curve::new(format!("{} (reparametrized)", self.name), domain_h, position)?;
        out.fd = self.fd;
        for order in 1..=3u8 {
            let base = self.clone();
            let g = g.clone();
            out = out.with_derivative(order, move |h| {
                let t = (g.g)(h);
                let (g1, g2, g3) = ((g.d1)(h), (g.d2)(h), (g.d3)(h));
                let r1 = base.derivative(t, 1)?;
                Ok(match order {
                    1 => r1 * g1,
                    2 => base.derivative(t, 2)? * (g1 * g1) + r1 * g2,
                    _ => {
                        base.derivative(t, 3)? * (g1 * g1 * g1)
                            + base.derivative(t, 2)? * (3.0 * g1 * g2)
                            + r1 * g3
                    }
                })
            })?;
        }
        Ok(out)
    }
}

impl SpaceCurve {
    /// Apply `x ↦ M x + offset` for a 3×3 matrix `M` given by rows.
    pub fn transformed(self, m: [[f64; 3]; 3], offset: Vec3) -> Self {
        self.affine(move |v| apply3(&m, v), offset)
    }
}

impl PlaneCurve {
    /// Rotate by `angle` then translate.
    pub fn rigid(self, angle: f64, offset: Vec2) -> Self {
        self.affine(move |v| v.rotated(angle), offset)
    }

    /// The plane curve embedded in `z = 0`.
    pub fn lifted(&self) -> SpaceCurve {
        let lift = |f: PointFn<Vec2>| -> PointFn<Vec3> { Arc::new(move |t| Ok(f(t)?.extend(0.0))) };
        SpaceCurve {
            name: self.name.clone(),
            domain: self.domain,
            position: lift(self.position.clone()),
            derivatives: self.derivatives.clone().map(|d| d.map(lift)),
            fd: self.fd,
        }
    }
}

pub fn apply3(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    let a = v.as_array();
    Vec3::from_array(m.map(|row| row[0] * a[0] + row[1] * a[1] + row[2] * a[2]))
}

/// A parameter change `t = g(h)` with its first three derivatives.
#[derive(Clone)]
pub struct Reparam {
    pub g: ScalarFn,
    pub d1: ScalarFn,
    pub d2: ScalarFn,
    pub d3: ScalarFn,
}

impl Reparam {
    pub fn new<G, D1, D2, D3>(g: G, d1: D1, d2: D2, d3: D3) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
        D3: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self { g: Arc::new(g), d1: Arc::new(d1), d2: Arc::new(d2), d3: Arc::new(d3) }
    }

    /// `g(h) = scale·h + offset`.
    pub fn linear(scale: f64, offset: f64) -> Self {
        Self::new(move |h| scale * h + offset, move |_| scale, |_| 0.0, |_| 0.0)
    }

    /// `g` given as an expression in `t` (read as `h`); evaluation failures
    /// surface as NaN and are rejected by the monotonicity check.
    pub fn from_expr(text: &str) -> Result<Self> {
        let e0 = expr::parse(text)?;
        let e1 = e0.derivative();
        let e2 = e1.derivative();
        let e3 = e2.derivative();
        let f = |e: Expr| move |h: f64| e.eval(h).unwrap_or(f64::NAN);
        Ok(Self::new(f(e0), f(e1), f(e2), f(e3)))
    }
}

/// A curve of either dimension.
#[derive(Debug, Clone)]
pub enum AnyCurve {
    Plane(PlaneCurve),
    Space(SpaceCurve),
}

impl AnyCurve {
    pub fn domain(&self) -> (f64, f64) {
        match self {
            AnyCurve::Plane(c) => c.domain(),
            AnyCurve::Space(c) => c.domain(),
        }
    }

    pub fn with_domain(self, d: (f64, f64)) -> Result<Self> {
        Ok(match self {
            AnyCurve::Plane(c) => AnyCurve::Plane(c.with_domain(d)?),
            AnyCurve::Space(c) => AnyCurve::Space(c.with_domain(d)?),
        })
    }

    pub fn into_plane(self) -> Result<PlaneCurve> {
        match self {
            AnyCurve::Plane(c) => Ok(c),
            AnyCurve::Space(c) => Err(Error::BadParameters(format!("{} is a space curve", c.name()))),
        }
    }

    pub fn into_space(self) -> Result<SpaceCurve> {
        match self {
            AnyCurve::Space(c) => Ok(c),
            AnyCurve::Plane(c) => Ok(c.lifted()),
        }
    }
}

/// Names accepted by [`make_catalog_curve`].
pub const CATALOG: &[&str] =
    &["line", "circle", "ellipse", "parabola", "cubic", "polynomial", "helix", "twisted-cubic"];

struct Params<'a> {
    curve: &'a str,
    map: &'a BTreeMap<String, f64>,
}

impl Params<'_> {
    fn allow(&self, names: &[&str]) -> Result<()> {
        for (k, v) in self.map {
            if !names.contains(&k.as_str()) {
                return Err(Error::BadParameters(format!(
                    "unknown parameter '{k}' for {} (expected one of: {})",
                    self.curve,
                    names.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::BadParameters(format!("parameter '{k}' is not finite")));
            }
        }
        Ok(())
    }
    fn get(&self, name: &str, default: f64) -> f64 {
        self.map.get(name).copied().unwrap_or(default)
    }
    fn required(&self, name: &str) -> Result<f64> {
        self.map
            .get(name)
            .copied()
            .ok_or_else(|| Error::BadParameters(format!("{} needs parameter '{name}'", self.curve)))
    }
    fn positive(&self, name: &str, default: f64) -> Result<f64> {
        let v = self.get(name, default);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::BadParameters(format!("{} needs {name} > 0, got {v}", self.curve)))
        }
    }
}

/// Build a curve from the catalog, with analytic derivatives to order 3.
///
/// | name | shape | parameters (defaults) | domain |
/// |---|---|---|---|
/// | `line` | `(x0 + a t, y0 + b t)` | x0=0, y0=0, a=1, b=0 | [-1, 1] |
/// | `circle` | `(cx + R cos t, cy + R sin t)` | radius=1, cx=0, cy=0 | [0, 2π] |
/// | `ellipse` | `(cx + a cos t, cy + b sin t)`, `a > b > 0` | a, b required; cx=0, cy=0 | [0, 2π] |
/// | `parabola` | `(cx + t, cy + p t²)` | p=1, cx=0, cy=0 | [-1, 1] |
/// | `cubic` | `(cx + t, cy + k t³)` | k=1, cx=0, cy=0 | [-1, 1] |
/// | `polynomial` | `Σ xi tⁱ, Σ yi tⁱ[, Σ zi tⁱ]`, i ≤ 5 | all 0 | [0, 1] |
/// | `helix` | `(cx + R cos t, cy + R sin t, cz + pitch·t)` | radius=1, pitch=1, offsets 0 | [0, 2π] |
/// | `twisted-cubic` | `(cx + t, cy + t², cz + t³)` | offsets 0 | [-1, 1] |
///
/// `polynomial` is a space curve when any `z` coefficient is given.
pub fn make_catalog_curve(name: &str, params: &BTreeMap<String, f64>) -> Result<AnyCurve> {
    let p = Params { curve: name, map: params };
    let tau = 2.0 * PI;
    Ok(match name {
        "line" => {
            p.allow(&["x0", "y0", "a", "b"])?;
            let (x0, y0, a, b) = (p.get("x0", 0.0), p.get("y0", 0.0), p.get("a", 1.0), p.get("b", 0.0));
            AnyCurve::Plane(Curve::analytic(
                "line",
                (-1.0, 1.0),
                move |t| Vec2::new(x0 + a * t, y0 + b * t),
                move |_| Vec2::new(a, b),
                |_| Vec2::zero(),
                |_| Vec2::zero(),
            )?)
        }
        "circle" => {
            p.allow(&["radius", "cx", "cy"])?;
            let r = p.positive("radius", 1.0)?;
            let c = Vec2::new(p.get("cx", 0.0), p.get("cy", 0.0));
            AnyCurve::Plane(Curve::analytic(
                "circle",
                (0.0, tau),
                move |t| c + Vec2::new(r * t.cos(), r * t.sin()),
                move |t| Vec2::new(-r * t.sin(), r * t.cos()),
                move |t| Vec2::new(-r * t.cos(), -r * t.sin()),
                move |t| Vec2::new(r * t.sin(), -r * t.cos()),
            )?)
        }
        "ellipse" => {
            p.allow(&["a", "b", "cx", "cy"])?;
            let (a, b) = (p.required("a")?, p.required("b")?);
            if !(a > b && b > 0.0) {
                return Err(Error::BadParameters(format!("ellipse needs a > b > 0, got a={a}, b={b}")));
            }
            let c = Vec2::new(p.get("cx", 0.0), p.get("cy", 0.0));
            AnyCurve::Plane(ellipse_curve(a, b, c)?)
        }
        "parabola" | "cubic" => {
            let (key, power) = if name == "parabola" { ("p", 2) } else { ("k", 3) };
            p.allow(&[key, "cx", "cy"])?;
            let k = p.get(key, 1.0);
            let mut ys = [0.0; 6];
            ys[power] = k;
            let mut xs = [0.0; 6];
            xs[1] = 1.0;
            let poly = polynomial_curve(name, xs, ys, None)?;
            AnyCurve::Plane(poly.into_plane()?.affine(|v| v, Vec2::new(p.get("cx", 0.0), p.get("cy", 0.0))).with_name(name))
        }
        "polynomial" => {
            let names: Vec<String> =
                ["x", "y", "z"].iter().flat_map(|a| (0..6).map(move |i| format!("{a}{i}"))).collect();
            p.allow(&names.iter().map(String::as_str).collect::<Vec<_>>())?;
            let coeffs = |a: &str| -> [f64; 6] { std::array::from_fn(|i| p.get(&format!("{a}{i}"), 0.0)) };
            let has_z = params.keys().any(|k| k.starts_with('z'));
            polynomial_curve("polynomial", coeffs("x"), coeffs("y"), has_z.then(|| coeffs("z")))?
        }
        "helix" => {
            p.allow(&["radius", "pitch", "cx", "cy", "cz"])?;
            let r = p.positive("radius", 1.0)?;
            let k = p.get("pitch", 1.0);
            let c = Vec3::new(p.get("cx", 0.0), p.get("cy", 0.0), p.get("cz", 0.0));
            AnyCurve::Space(Curve::analytic(
                "helix",
                (0.0, tau),
                move |t| c + Vec3::new(r * t.cos(), r * t.sin(), k * t),
                move |t| Vec3::new(-r * t.sin(), r * t.cos(), k),
                move |t| Vec3::new(-r * t.cos(), -r * t.sin(), 0.0),
                move |t| Vec3::new(r * t.sin(), -r * t.cos(), 0.0),
            )?)
        }
        "twisted-cubic" => {
            p.allow(&["cx", "cy", "cz"])?;
            let c = Vec3::new(p.get("cx", 0.0), p.get("cy", 0.0), p.get("cz", 0.0));
            AnyCurve::Space(Curve::analytic(
                "twisted-cubic",
                (-1.0, 1.0),
                move |t| c + Vec3::new(t, t * t, t * t * t),
                |t| Vec3::new(1.0, 2.0 * t, 3.0 * t * t),
                |t| Vec3::new(0.0, 2.0, 6.0 * t),
                |_| Vec3::new(0.0, 0.0, 6.0),
            )?)
        }
        _ => {
            return Err(Error::UnknownCurve(format!(
                "'{name}' (known: {})",
                CATALOG.join(", ")
            )))
        }
    })
}

/// `(c.x + a cos t, c.y + b sin t)` on `[0, 2π]`, without the `a > b`
/// restriction (so the circle `a = b` is allowed).
pub fn ellipse_curve(a: f64, b: f64, center: Vec2) -> Result<PlaneCurve> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::BadParameters(format!("ellipse semi-axes must be positive, got {a}, {b}")));
    }
    Curve::analytic(
        "ellipse",
        (0.0, 2.0 * PI),
        move |t| center + Vec2::new(a * t.cos(), b * t.sin()),
        move |t| Vec2::new(-a * t.sin(), b * t.cos()),
        move |t| Vec2::new(-a * t.cos(), -b * t.sin()),
        move |t| Vec2::new(a * t.sin(), -b * t.cos()),
    )
}

fn poly_eval(c: &[f64; 6], t: f64, order: usize) -> f64 {
    // Horner on the `order`-th derivative's coefficients.
    let mut acc = 0.0;
    for i in (order..6).rev() {
        let falling: f64 = (0..order).map(|j| (i - j) as f64).product();
        acc = acc * t + c[i] * falling;
    }
    acc
}

fn polynomial_curve(name: &str, xs: [f64; 6], ys: [f64; 6], zs: Option<[f64; 6]>) -> Result<AnyCurve> {
    let dom = if name == "polynomial" { (0.0, 1.0) } else { (-1.0, 1.0) };
    let pos = |k: usize| move |t: f64| Vec2::new(poly_eval(&xs, t, k), poly_eval(&ys, t, k));
    match zs {
        None => Ok(AnyCurve::Plane(Curve::analytic(name, dom, pos(0), pos(1), pos(2), pos(3))?)),
        Some(zs) => {
            let pos = |k: usize| {
                move |t: f64| Vec3::new(poly_eval(&xs, t, k), poly_eval(&ys, t, k), poly_eval(&zs, t, k))
            };
            Ok(AnyCurve::Space(Curve::analytic(name, dom, pos(0), pos(1), pos(2), pos(3))?))
        }
    }
}

/// Coordinate expressions with their first three symbolic derivatives.
struct ExprJet([Expr; 4]);

impl ExprJet {
    fn new(text: &str) -> Result<Self> {
        let e0 = expr::parse(text)?;
        let e1 = e0.derivative();
        let e2 = e1.derivative();
        let e3 = e2.derivative();
        Ok(Self([e0, e1, e2, e3]))
    }
    fn eval(&self, k: usize, t: f64) -> Result<f64> {
        Ok(self.0[k].eval(t)?)
    }
}

/// A plane curve from coordinate expressions in `t`; derivatives are
/// obtained symbolically.
pub fn expr_plane_curve(x: &str, y: &str, domain: (f64, f64)) -> Result<PlaneCurve> {
    let j = Arc::new([ExprJet::new(x)?, ExprJet::new(y)?]);
    let at = |k: usize| {
        let j = j.clone();
        move |t: f64| Ok(Vec2::new(j[0].eval(k, t)?, j[1].eval(k, t)?))
    };
    Curve::new(format!("({x}, {y})"), domain, at(0))?
        .with_derivative(1, at(1))?
        .with_derivative(2, at(2))?
        .with_derivative(3, at(3))
}

/// A space curve from coordinate expressions in `t`.
pub fn expr_space_curve(x: &str, y: &str, z: &str, domain: (f64, f64)) -> Result<SpaceCurve> {
    let j = Arc::new([ExprJet::new(x)?, ExprJet::new(y)?, ExprJet::new(z)?]);
    let at = |k: usize| {
        let j = j.clone();
        move |t: f64| Ok(Vec3::new(j[0].eval(k, t)?, j[1].eval(k, t)?, j[2].eval(k, t)?))
    };
    Curve::new(format!("({x}, {y}, {z})"), domain, at(0))?
        .with_derivative(1, at(1))?
        .with_derivative(2, at(2))?
        .with_derivative(3, at(3))
}

/// Coordinate expressions of a user curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateExprs {
    pub x: String,
    pub y: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
}

/// Serializable curve description:
/// `{"kind": <catalog name> | "expr", "params": {...}, "expr": {"x", "y", "z"?}, "domain": [t0, t1]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<CoordinateExprs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
}

impl CurveSpec {
    pub fn catalog(kind: &str, params: &[(&str, f64)]) -> Self {
        Self {
            kind: kind.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            expr: None,
            domain: None,
        }
    }

    pub fn build(&self) -> Result<AnyCurve> {
        if self.kind == "expr" {
            let e = self
                .expr
                .as_ref()
                .ok_or_else(|| Error::BadParameters("kind \"expr\" needs an \"expr\" object".into()))?;
            let [t0, t1] = self
                .domain
                .ok_or_else(|| Error::BadParameters("kind \"expr\" needs a \"domain\"".into()))?;
            if !self.params.is_empty() {
                return Err(Error::BadParameters("kind \"expr\" takes no \"params\"".into()));
            }
            return Ok(match &e.z {
                Some(z) => AnyCurve::Space(expr_space_curve(&e.x, &e.y, z, (t0, t1))?),
                None => AnyCurve::Plane(expr_plane_curve(&e.x, &e.y, (t0, t1))?),
            });
        }
        if self.expr.is_some() {
            return Err(Error::BadParameters(format!("kind \"{}\" takes no \"expr\"", self.kind)));
        }
        let c = make_catalog_curve(&self.kind, &self.params)?;
        match self.domain {
            Some([t0, t1]) => c.with_domain((t0, t1)),
            None => Ok(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn catalog_examples() {
        let e = make_catalog_curve("ellipse", &params(&[("a", 2.0), ("b", 1.0)])).unwrap().into_plane().unwrap();
        assert_eq!(e.position(0.0).unwrap(), Vec2::new(2.0, 0.0));
        assert_eq!(e.derivative(0.0, 1).unwrap(), Vec2::new(-0.0, 1.0));
        assert!(matches!(
            make_catalog_curve("ellipse", &params(&[("a", 1.0), ("b", 2.0)])),
            Err(Error::BadParameters(_))
        ));
        let h = make_catalog_curve("helix", &params(&[("radius", 1.0), ("pitch", 1.0)])).unwrap().into_space().unwrap();
        assert_eq!(h.position(0.0).unwrap(), Vec3::new(1.0, 0.0, 0.0));
        let l = make_catalog_curve("line", &params(&[("x0", 1.0), ("y0", 2.0), ("a", 3.0), ("b", 4.0)]))
            .unwrap()
            .into_plane()
            .unwrap();
        assert_eq!(l.derivative(0.3, 2).unwrap(), Vec2::zero());
        assert!(matches!(make_catalog_curve("spiral", &BTreeMap::new()), Err(Error::UnknownCurve(_))));
        assert!(matches!(
            make_catalog_curve("circle", &params(&[("r", 1.0)])),
            Err(Error::BadParameters(_))
        ));
    }

    #[test]
    fn all_catalog_entries_validate() {
        let extra = params(&[("a", 2.0), ("b", 1.0), ("x2", 1.0), ("y3", -0.5), ("z1", 2.0)]);
        for name in CATALOG {
            let p: BTreeMap<_, _> = match *name {
                "ellipse" => params(&[("a", 2.0), ("b", 1.0)]),
                "polynomial" => extra.iter().filter(|(k, _)| k.len() == 2).map(|(k, v)| (k.clone(), *v)).collect(),
                _ => BTreeMap::new(),
            };
            match make_catalog_curve(name, &p).unwrap() {
                AnyCurve::Plane(c) => drop(c.validated().unwrap()),
                AnyCurve::Space(c) => drop(c.validated().unwrap()),
            }
        }
    }

    #[test]
    fn out_of_domain_and_order() {
        let c = ellipse_curve(2.0, 1.0, Vec2::zero()).unwrap();
        assert!(matches!(c.position(7.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(c.derivative(1.0, 4), Err(Error::OrderUnsupported(4))));
        assert!(matches!(c.derivative(1.0, 0), Err(Error::OrderUnsupported(0))));
    }

    #[test]
    fn one_sided_near_endpoints() {
        let c = ellipse_curve(2.0, 1.0, Vec2::zero()).unwrap();
        for t in [0.0, 2.0 * PI] {
            for k in 1..=3u8 {
                let a = c.derivative(t, k).unwrap();
                let f = c.fd_derivative(t, k).unwrap();
                // One-sided third differences amplify rounding about ten-fold.
                assert!((a - f).norm() < if k == 3 { 2e-2 } else { 1e-5 }, "t={t} k={k}");
            }
        }
    }

    #[test]
    fn reparametrize_checks_monotonicity() {
        let c = ellipse_curve(2.0, 1.0, Vec2::zero()).unwrap();
        let g = Reparam::new(|h| h * h, |h| 2.0 * h, |_| 2.0, |_| 0.0);
        assert!(matches!(c.reparametrize(&g, (-1.0, 1.0)), Err(Error::NonMonotonic { .. })));
        let r = c.reparametrize(&g, (0.1, 1.0)).unwrap();
        let h = 0.7;
        let expect = c.derivative(h * h, 1).unwrap() * (2.0 * h);
        assert!((r.derivative(h, 1).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn spec_records() {
        let spec: CurveSpec = serde_json::from_str(
            r#"{"kind":"expr","expr":{"x":"2*cos(t)","y":"sin(t)"},"domain":[0,6.283185307179586]}"#,
        )
        .unwrap();
        let c = spec.build().unwrap().into_plane().unwrap();
        assert_eq!(c.position(0.0).unwrap(), Vec2::new(2.0, 0.0));
        let spec: CurveSpec = serde_json::from_str(r#"{"kind":"helix","params":{"pitch":2}}"#).unwrap();
        assert!(matches!(spec.build().unwrap(), AnyCurve::Space(_)));
        let bad: Result<CurveSpec, _> = serde_json::from_str(r#"{"kind":"helix","colour":1}"#);
        assert!(bad.is_err());
    }
}
