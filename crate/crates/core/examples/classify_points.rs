//! Every pointwise predicate at a few shape operators: Hopf, ruled,
//! pseudo-Ryan (raw, refined and oracle forms) and the two non-Hopf
//! *-Einstein relations.
//!
//! cargo run --example classify_points

use hyplab::conditions::classify_point;
use hyplab::geometry::{ShapeOperator, SpaceForm};

fn main() -> hyplab::error::Result<()> {
    let sf = SpaceForm::projective(2, 1.0)?;
    let points = [
        ShapeOperator::hopf(0.0, 1.0, 1.0),
        ShapeOperator::new(0.5, 1.0, 0.0, 0.0, 0.0),
        ShapeOperator::new(0.3, 0.8, 1.2, 0.4, -0.7),
    ];
    for a in points {
        let r = classify_point(&a, &sf, 1e-9);
        println!(
            "{:?}\n  hopf {} ruled {} pseudo-Ryan raw {} refined {} oracle {} (residual {:.2e})  rho*/2 = {:.4}",
            a,
            r.hopf,
            r.ruled,
            r.pseudo_ryan.raw.holds,
            r.pseudo_ryan.refined.holds,
            r.pseudo_ryan.oracle.holds,
            r.pseudo_ryan.oracle.residual,
            r.star_scalar_half,
        );
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
    let a = ShapeOperator::new(0.3, 0.8, 1.2, 0.4, -0.7);
    println!("\nfull report as JSON:\n{}", serde_json::to_string_pretty(&classify_point(&a, &sf, 1e-9)).unwrap());
    Ok(())
}
