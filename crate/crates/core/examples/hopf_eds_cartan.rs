//! The Hopf exterior differential system: tableau checks, Cartan characters
//! along 50 random flags, and the characteristic-variety dichotomy.
//!
//! cargo run --example hopf_eds_cartan

use hyplab::eds::cartan::{cartan_test_hopf, dichotomy_grid, dichotomy_mismatches};
use hyplab::eds::systems::{verify_hopf, HopfState};
use hyplab::geometry::SpaceForm;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyplab::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sf = SpaceForm::projective(2, 1.0)?;
    let rep = verify_hopf(&HopfState { sf, alpha: 0.0 })?;
    for check in &rep.checks {
        println!("{:<40} {:.1e}", check.name, check.residual);
    }

    for (alpha, c) in [(0.0, 1.0), (1.3, -1.0)] {
        let r = cartan_test_hopf(alpha, &SpaceForm::new(2, c)?, 50, &mut rng)?;
        println!(
            "alpha = {alpha}, c = {c}: characters {:?} (sum {}), variety codimension {}, consistent over {} flags: {}",
            r.characters, r.sum, r.variety_codim, r.trials, r.consistent
        );
    }

    let values = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let grid = dichotomy_grid(&values, 0.0, 1.0);
    println!("dichotomy: {} mismatches over {} covectors", dichotomy_mismatches(&grid, 0.0, &sf), grid.len());
    Ok(())
}
