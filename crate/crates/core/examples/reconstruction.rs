//! Rebuild curves from distance and direction data: the bundled presets, and
//! a hand-made plane problem with a constant turning rate (a circle).

use std::sync::Arc;

use rotor::reconstruct::{
    preset, reconstruct_plane, rotation_field, DistanceRhs, PlaneReconstructionProblem, PresetOptions, PRESETS,
};
use rotor::vec::Vec2;

fn main() -> rotor::Result<()> {
    for name in PRESETS {
        for second_order in [false, true] {
            let run = preset(name, &PresetOptions { second_order, ..Default::default() })?.run()?;
            println!("{name:>15} second_order={second_order:<5} max_error={:.3e} drift={:.1e}", run.max_error, run.max_drift);
        }
    }

    // Constant distance 2 and unit turning rate from the origin: a circle.
    let problem = PlaneReconstructionProblem::new(
        Vec2::zero(),
        DistanceRhs::FirstOrder(Arc::new(|_| 0.0)),
        rotation_field(|_| 1.0),
        2.0,
        Vec2::new(1.0, 0.0),
        (0.0, std::f64::consts::PI),
        1e-3,
    )?;
    let traj = reconstruct_plane(&problem)?;
    let (t, end) = traj.samples.last().copied().unwrap();
    println!("\ncircle: point at t={t:.4} is ({:.9}, {:.9})", end.x, end.y);
    Ok(())
}
