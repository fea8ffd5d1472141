//! Homogeneous Hopf hypersurfaces: principal curvatures, *-scalar curvature
//! and whether each is *-Einstein, together with a check that every local
//! shape operator satisfies the Hopf identity.
//!
//! cargo run --example takagi_montiel_catalog

use hyplab::catalog::{exceptional_status, make_entry, ExceptionalKind, HomogeneousKind};
use hyplab::geometry::{hopf_residual, SpaceForm};

fn main() -> hyplab::error::Result<()> {
    for (sf, label) in [(SpaceForm::projective(3, 1.0)?, "c = 1"), (SpaceForm::hyperbolic(3, 1.0)?, "c = -1")] {
        println!("n = 3, {label}");
        for kind in [HomogeneousKind::A0, HomogeneousKind::A1, HomogeneousKind::A2, HomogeneousKind::B] {
            for alpha in [0.0, 1.0, 2.5] {
                match make_entry(kind, alpha, &sf, 3) {
                    Ok(e) => {
                        let worst = e
                            .local_shape_operators()
                            .iter()
                            .map(|a| hopf_residual(a, &sf).residual)
                            .fold(0.0, f64::max);
                        let curvatures: Vec<String> =
                            e.wperp_curvatures.iter().map(|p| format!("{:.4}", p.value)).collect();
                        println!(
                            "  {kind:?} alpha = {alpha}: curvatures [{}], rho* = {:?}, *-Einstein {}, Hopf residual {worst:.1e}",
                            curvatures.join(", "),
                            e.rho_star,
                            e.star_einstein
                        );
                    }
                    Err(err) => println!("  {kind:?} alpha = {alpha}: {err}"),
                }
            }
        }
    }
    for kind in [ExceptionalKind::C, ExceptionalKind::D, ExceptionalKind::E] {
        let s = exceptional_status(kind);
        println!("{kind:?}: *-Einstein {} ({})", s.star_einstein, s.reason);
    }
    Ok(())
}
