//! User curves from coordinate expressions, differentiated symbolically.

use rotor::curve::expr_plane_curve;
use rotor::expr::parse;
use rotor::plane::{distance_kinematics, local_limits};
use rotor::vec::Vec2;

fn main() -> rotor::Result<()> {
    let x = parse("t*exp(-t^2/4)").map_err(|e| rotor::Error::InvalidProblem(e.to_string()))?;
    let mut d = x.clone();
    for order in 1..=3 {
        d = d.derivative();
        println!("d^{order}x/dt^{order} = {d}");
    }

    let curve = expr_plane_curve("3*cos(t) + cos(3*t)", "3*sin(t) - sin(3*t)", (0.0, 6.0))?;
    for t in [0.3, 1.0, 2.0] {
        let k = distance_kinematics(&curve, Vec2::new(0.5, 0.5), t)?;
        let l = local_limits(&curve, t)?;
        println!("t={t}: D={:.6} D'={:.6} speed={:.6} phi={:.6} psi={:.6}", k.d, k.dd, k.rot_speed, l.phi, l.psi_speed);
    }
    Ok(())
}
