//! A curve drawn on a torus: surface geometry at a point, the third
//! derivative from the natural-frame expansion, and the plane limits.

use std::collections::BTreeMap;

use rotor::curve::expr_plane_curve;
use rotor::surface::{
    chart_curve_derivatives, chi_coefficients, surface_distance_kinematics, surface_geometry,
    surface_local_first_derivative, surface_plane_ladder, surface_plane_rot_limits, Surface,
};

fn main() -> rotor::Result<()> {
    let params: BTreeMap<String, f64> =
        [("major", 2.0), ("minor", 0.5), ("cx", 4.0), ("cy", 4.0), ("cz", 4.0)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let torus = Surface::catalog("torus", &params)?;
    let chart = expr_plane_curve("t", "sin(t)", (0.0, 6.0))?;
    let t = 0.7;

    let uv = chart.position(t)?;
    let geom = surface_geometry(&torus, uv.x, uv.y)?;
    println!("g = {:?}\nL = {:?}\nnormal = {:?}", geom.g, geom.l, geom.n);

    let [r, r1, r2, r3] = chart_curve_derivatives(&torus, &chart, t)?;
    println!("r = {r:?}\nr' = {r1:?}\nr'' = {r2:?}\nr''' = {r3:?}");

    let k = surface_distance_kinematics(&torus, &chart, t)?;
    println!("D={:.6} D'={:.6} D''={:.6} speed={:.6}", k.d, k.dd, k.d2d, k.rot_speed);
    println!("phi = {:.9}", surface_local_first_derivative(&torus, &chart, t)?);

    let chi = chi_coefficients(&torus, &chart, t, 1e-3)?;
    println!("chord coefficients at dt=1e-3: {:.3e} {:.3e} {:.3e}", chi.chi1, chi.chi2, chi.chi3);

    let limits = surface_plane_rot_limits(&torus, &chart, t)?;
    let ladder = surface_plane_ladder(&torus, &chart, t)?;
    println!("psi_A {:.9} (ladder {:.9})", limits.psi_a, ladder[0].value);
    println!("psi_B {:.9?} (ladder {:.9})", limits.psi_b, ladder[1].value);
    println!("psi_C {:.9?} (ladder {:.9})", limits.psi_c, ladder[2].value);
    Ok(())
}
