//! Closed-form ellipse profiles: focal distance table, sign pattern,
//! average rotational speeds and zeros of the radial acceleration.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rotor::ellipse::{
    accel_zero_locations, average_rotational_speed, focus_accel_zero_locations, focus_values, profile_table,
    verify_focal_profile, EllipseParams, Frame,
};
use rotor::output::Format;

fn main() -> rotor::Result<()> {
    let p = EllipseParams::new(2.0, 1.0)?;
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "theta", "xi1", "xi1'", "xi1''", "xi1'''");
    for theta in [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2] {
        let v = focus_values(&p, theta);
        println!("{theta:>8.4} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", v.xi1, v.d1, v.d2, v.d3);
    }
    let report = verify_focal_profile(&p, 10_000);
    println!("quarter-point error {:.1e}, sign violations {}", report.endpoint_error, report.violations.len());

    for q in 0..4 {
        let t0 = q as f64 * FRAC_PI_2;
        println!("origin-frame mean speed on quadrant {q}: {:.12}", average_rotational_speed(&p, Frame::Origin, (t0, t0 + FRAC_PI_2))?);
    }
    println!("focus-frame mean speed on [0, pi]: {:.12}", average_rotational_speed(&p, Frame::Focus, (0.0, PI))?);
    println!("focus-frame mean speed on [pi, 2pi]: {:.12}", average_rotational_speed(&p, Frame::Focus, (PI, TAU))?);
    println!("zeros of D'': {:?}", accel_zero_locations(&p)?);
    println!("zeros of xi1'': {:?}", focus_accel_zero_locations(&p)?);

    print!("\n{}", profile_table(&p, 5).render(Format::Csv));
    Ok(())
}
