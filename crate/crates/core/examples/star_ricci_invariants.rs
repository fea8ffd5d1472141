//! Ricci and *-Ricci tensors of a shape operator in canonical form, checked
//! against the trace formulas built from the Gauss equation.
//!
//! cargo run --example star_ricci_invariants

use hyplab::geometry::{ricci, star_ricci, star_scalar, star_scalar_half, Mode, ShapeOperator, SpaceForm};

fn main() -> hyplab::error::Result<()> {
    let sf = SpaceForm::hyperbolic(2, 1.0)?;
    let shapes = [
        ("horosphere", ShapeOperator::hopf(2.0, 1.0, 1.0)),
        ("ruled", ShapeOperator::new(0.8, 1.3, 0.0, 0.0, 0.0)),
        ("generic", ShapeOperator::new(0.4, -1.1, 0.9, 0.3, -0.6)),
    ];
    for (name, a) in shapes {
        let closed = star_ricci(&a, &sf, Mode::ClosedForm);
        let oracle = star_ricci(&a, &sf, Mode::TraceOracle);
        let ricci_gap = (ricci(&a, &sf, Mode::ClosedForm) - ricci(&a, &sf, Mode::TraceOracle)).amax();
        println!("{name}: {a:?}");
        for i in 0..3 {
            let row: Vec<String> = (0..3).map(|j| format!("{:9.4}", closed[(i, j)] + 0.0)).collect();
            println!("  {} [{}]", if i == 0 { "S* =" } else { "    " }, row.join(" "));
        }
        println!("  rho* = {:.6}, rho*/2 = {:.6}", star_scalar(&a, &sf), star_scalar_half(&a, &sf));
        println!("  |S - oracle| = {ricci_gap:.1e}, |S* - oracle| = {:.1e}", (closed - oracle).amax());
    }
    Ok(())
}
