//! Recognize rigid copies from invariants alone, and reject reshaped curves
//! and mirror images.

use std::collections::BTreeMap;

use rotor::curve::{ellipse_curve, make_catalog_curve};
use rotor::plane::plane_congruent;
use rotor::space::space_congruent;
use rotor::suite::rotation;
use rotor::vec::{Vec2, Vec3};

fn main() -> rotor::Result<()> {
    let grid: Vec<f64> = (0..12).map(|i| 0.2 + 0.5 * i as f64).collect();

    let ellipse = ellipse_curve(2.0, 1.0, Vec2::zero())?;
    let moved = ellipse.clone().rigid(1.2, Vec2::new(3.0, -1.0));
    let wider = ellipse_curve(2.01, 1.0, Vec2::zero())?;
    println!("ellipse vs rigid copy: {:?}", plane_congruent(&ellipse, &moved, &grid)?);
    println!("ellipse vs wider ellipse: congruent={}", plane_congruent(&ellipse, &wider, &grid)?.congruent);

    let params: BTreeMap<String, f64> = [("pitch".to_string(), 0.7)].into_iter().collect();
    let helix = make_catalog_curve("helix", &params)?.into_space()?;
    let copy = helix.clone().transformed(rotation(Vec3::new(0.0, 0.6, 0.8), 2.0), Vec3::new(1.0, 2.0, 3.0));
    let mirror = helix.clone().transformed([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]], Vec3::zero());
    let r = space_congruent(&helix, &copy, &grid)?;
    println!("helix vs rotated copy: congruent={} max deviation {:.2e}", r.congruent, r.invariants.max_deviation);
    let r = space_congruent(&helix, &mirror, &grid)?;
    println!("helix vs mirror image: congruent={} (orientation differs at t={:?})", r.congruent, r.epsilon_mismatch_at);
    Ok(())
}
