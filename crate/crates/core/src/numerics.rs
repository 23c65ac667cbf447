//! Numerical building blocks: finite-difference stencils, Richardson
//! extrapolation, adaptive Simpson quadrature, bisection and a small
//! pivoted linear solve.

use crate::error::{Error, Result};
use crate::vec::{Vec3, Vector};

/// Which way a finite-difference stencil reaches from the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
    Backward,
}

/// Second-order-accurate finite difference of `f` of the given order
/// (1, 2 or 3) at `t`. One-sided stencils mirror each other, with the
/// backward variant picking up a factor `(-1)^order`.
pub fn finite_difference<V, F>(f: F, t: f64, order: u8, h: f64, stencil: Stencil) -> Result<V>
where
    V: Vector,
    F: Fn(f64) -> Result<V>,
{
    // Snap the step so that `t + k·h` are exactly representable nodes; this
    // removes argument rounding from the stencil (it matters for order 3).
    let h = (t + h) - t;
    let at = |k: f64| f(t + k * h);
    Ok(match (stencil, order) {
        (Stencil::Central, 1) => (at(1.0)? - at(-1.0)?) / (2.0 * h),
        (Stencil::Central, 2) => (at(1.0)? - at(0.0)? * 2.0 + at(-1.0)?) / (h * h),
        (Stencil::Central, 3) => {
            (at(2.0)? - at(1.0)? * 2.0 + at(-1.0)? * 2.0 - at(-2.0)?) / (2.0 * h * h * h)
        }
        (Stencil::Forward | Stencil::Backward, _) => {
            let s = if stencil == Stencil::Forward { 1.0 } else { -1.0 };
            let p = |k: f64| at(s * k);
            match order {
                1 => (p(0.0)? * -3.0 + p(1.0)? * 4.0 - p(2.0)?) / (2.0 * h) * s,
                2 => (p(0.0)? * 2.0 - p(1.0)? * 5.0 + p(2.0)? * 4.0 - p(3.0)?) / (h * h),
                3 => {
                    (p(0.0)? * -5.0 + p(1.0)? * 18.0 - p(2.0)? * 24.0 + p(3.0)? * 14.0
                        - p(4.0)? * 3.0)
                        / (2.0 * h * h * h)
                        * s
                }
                o => return Err(Error::OrderUnsupported(o)),
            }
        }
        (_, o) => return Err(Error::OrderUnsupported(o)),
    })
}

/// Stencil reach (in steps) needed on each side for an order.
pub fn stencil_reach(order: u8, stencil: Stencil) -> f64 {
    match (stencil, order) {
        (Stencil::Central, 3) => 2.0,
        (Stencil::Central, _) => 1.0,
        (_, 1) => 2.0,
        (_, 2) => 3.0,
        _ => 4.0,
    }
}

/// Outcome of a Richardson extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub error: f64,
    /// The raw probe values, in ladder order.
    pub samples: Vec<f64>,
}

/// The step ladder used for one-sided limit probes.
pub const LIMIT_LADDER: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Extrapolate `f(h)` to `h → 0` from samples on a geometric `ladder`
/// (largest step first, constant ratio), assuming an error expansion in
/// integer powers of `h`.
///
/// Builds the full Neville tableau and returns the entry with the smallest
/// error estimate, in the manner of Ridders' method. Fine ladder rungs that
/// are dominated by rounding therefore do not spoil the result.
pub fn richardson<F>(f: F, ladder: &[f64]) -> Result<Extrapolation>
where
    F: Fn(f64) -> Result<f64>,
{
    assert!(ladder.len() >= 2, "ladder needs at least two steps");
    let ratio = ladder[0] / ladder[1];
    let samples = ladder.iter().map(|&h| f(h)).collect::<Result<Vec<_>>>()?;
    let n = samples.len();
    let mut table = vec![vec![0.0; n]; n];
    let mut best = (samples[0], f64::INFINITY);
    for i in 0..n {
        table[i][0] = samples[i];
        if i > 0 {
            let e = (samples[i] - samples[i - 1]).abs();
            if e < best.1 {
                best = (samples[i], e);
            }
        }
        let mut fac = 1.0;
        for j in 1..=i {
            fac *= ratio;
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (fac - 1.0);
            let err = (table[i][j] - table[i][j - 1])
                .abs()
                .max((table[i][j] - table[i - 1][j - 1]).abs());
            if err <= best.1 {
                best = (table[i][j], err);
            }
        }
    }
    Ok(Extrapolation { value: best.0, error: best.1, samples })
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    // Start from a few panels so a symmetric integrand cannot fool the first
    // error estimate.
    const PANELS: usize = 8;
    let w = (b - a) / PANELS as f64;
    (0..PANELS)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * w, if k + 1 == PANELS { b } else { a + (k + 1) as f64 * w });
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            recurse(&f, lo, hi, fa, fm, fb, whole, tol / PANELS as f64, 50)
        })
        .sum()
}

/// Root of `f` in `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign
/// (or one of them vanish). Iterates until the bracket is below `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) <= tol || m <= a || m >= b {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// All sign-change roots of `f` on `[a, b]`, bracketed on a uniform grid of
/// `n` cells and refined by bisection.
pub fn bracket_roots<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize, tol: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    for i in 0..n {
        let (f0, f1) = (fs[i], fs[i + 1]);
        if f0 == 0.0 {
            if i == 0 || fs[i - 1] != 0.0 {
                roots.push(xs[i]);
            }
            continue;
        }
        if f1 != 0.0 && f0.signum() != f1.signum() {
            if let Some(r) = bisect(&f, xs[i], xs[i + 1], tol) {
                roots.push(r);
            }
        }
    }
    if fs[n] == 0.0 {
        roots.push(xs[n]);
    }
    roots
}

/// Solve `[c0 c1 c2] x = rhs` (columns given as vectors) by Gaussian
/// elimination with partial pivoting. Returns `None` for an exactly
/// singular matrix; conditioning is the caller's concern.
pub fn solve3(cols: [Vec3; 3], rhs: Vec3) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for r in 0..3 {
        for (c, col) in cols.iter().enumerate() {
            m[r][c] = col.as_array()[r];
        }
        m[r][3] = rhs.as_array()[r];
    }
    for k in 0..3 {
        let p = (k..3).max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs()))?;
        if m[p][k] == 0.0 {
            return None;
        }
        m.swap(k, p);
        for r in k + 1..3 {
            let f = m[r][k] / m[k][k];
            for c in k..4 {
                m[r][c] -= f * m[k][c];
            }
        }
    }
    let mut x = [0.0; 3];
    for k in (0..3).rev() {
        let s: f64 = (k + 1..3).map(|c| m[k][c] * x[c]).sum();
        x[k] = (m[k][3] - s) / m[k][k];
    }
    Some(x)
}

/// Rotational speed of the direction of `w(s)`: `|d/ds unit(w)|`, from
/// `w` and `w' = dw/ds`. Uses `√(|w|²|w'|² − (w·w')²) / |w|²`, which is
/// the norm of `(|w|² w' − (w·w') w) / |w|³`.
pub fn direction_speed<V: Vector>(w: V, dw: V) -> f64 {
    let ww = w.dot(w);
    let gram = (ww * dw.dot(dw) - w.dot(dw).powi(2)).max(0.0);
    gram.sqrt() / ww
}
