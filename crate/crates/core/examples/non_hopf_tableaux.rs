//! The non-Hopf systems: tableau residuals, integral-element dimension and
//! Cartan characters at random admissible states.
//!
//! cargo run --example non_hopf_tableaux

use hyplab::eds::systems::{verify_random, SystemId};
use hyplab::geometry::SpaceForm;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyplab::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for id in [SystemId::CaseI, SystemId::CaseIi, SystemId::Construction] {
        for c in [1.0, -1.0] {
            let rep = verify_random(id, SpaceForm::new(2, c)?, &mut rng)?;
            let a = rep.analysis.as_ref().expect("non-Hopf systems carry a tableau");
            println!(
                "{id} c = {c:+}: max residual {:.1e}, integral elements of dimension {}, characters {:?}, involutive {}",
                rep.max_residual(),
                a.integral_element_dim,
                a.characters,
                a.involutive
            );
        }
        let rep = verify_random(id, SpaceForm::new(2, 1.0)?, &mut rng)?;
        for (name, value) in &rep.state {
            print!("{name} = {value:.4}  ");
        }
        println!();
        for check in &rep.checks {
            println!("  {:<44} {:.1e}", check.name, check.residual);
        }
    }
    Ok(())
}
