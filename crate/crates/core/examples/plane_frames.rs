//! Distance and rotation of an ellipse seen from its center, its focus and
//! an arbitrary point, plus the limits of the frame riding on the curve.

use std::f64::consts::PI;

use rotor::curve::ellipse_curve;
use rotor::plane::{distance_kinematics, local_limits};
use rotor::vec::Vec2;

fn main() -> rotor::Result<()> {
    let (a, b) = (2.0, 1.0);
    let curve = ellipse_curve(a, b, Vec2::zero())?;
    let focus = Vec2::new((a * a - b * b).sqrt(), 0.0);
    let centers = [("center", Vec2::zero()), ("focus", focus), ("point (0,3)", Vec2::new(0.0, 3.0))];

    println!("{:>12} {:>6} {:>10} {:>10} {:>10} {:>10}", "frame", "t", "D", "D'", "D''", "speed");
    for (label, center) in centers {
        for i in 0..4 {
            let t = i as f64 * PI / 4.0;
            let k = distance_kinematics(&curve, center, t)?;
            println!("{label:>12} {t:>6.3} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", k.d, k.dd, k.d2d, k.rot_speed);
        }
    }

    println!("\nlocal frame: phi = |r'|, phi' and the rotation of the chord direction");
    for i in 0..4 {
        let t = i as f64 * PI / 4.0;
        let l = local_limits(&curve, t)?;
        println!("t={t:.3}  phi={:.6}  phi'={:.6}  psi={:.6}", l.phi, l.phi_prime, l.psi_speed);
    }
    Ok(())
}
