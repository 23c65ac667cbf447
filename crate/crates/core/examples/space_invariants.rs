//! The invariant tuple of a helix, and curvature and torsion rebuilt from it.

use std::collections::BTreeMap;

use rotor::curve::make_catalog_curve;
use rotor::space::{invariant_chain, invariants, space_distance_kinematics};

fn main() -> rotor::Result<()> {
    let params: BTreeMap<String, f64> =
        [("radius", 1.5), ("pitch", 0.4), ("cx", 3.0), ("cy", 3.0), ("cz", 1.0)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let helix = make_catalog_curve("helix", &params)?.into_space()?;

    for t in [0.5, 1.5, 2.5] {
        let k = space_distance_kinematics(&helix, t)?;
        let i = invariants(&helix, t)?;
        let chain = invariant_chain(&helix, t)?;
        println!("t={t}");
        println!("  D={:.6} D'={:.6} D''={:.6} speed={:.6}", k.d, k.dd, k.d2d, k.rot_speed);
        println!("  projected speeds xOy/xOz/yOz = {:.6} {:.6} {:.6}", k.speeds[0], k.speeds[1], k.speeds[2]);
        println!("  phi={:.6} |psi12|={:.6} |psi23|={:.6} epsilon={}", i.phi, i.s12, i.s23, i.epsilon);
        println!("  curvature {:.9} (direct {:.9}), torsion {:.9} (direct {:.9})",
            chain.curvature.0, chain.curvature.1, chain.torsion.0, chain.torsion.1);
    }
    Ok(())
}
