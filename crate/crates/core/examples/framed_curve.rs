//! A framed curve integrated in the unitary group preserving the ambient
//! Hermitian form, and its Frenet data recovered from the frames.
//!
//! cargo run --example framed_curve

use hyplab::curves::{coframe_pullback, extract_frenet, integrate_frame, FramedCurveSpec, GroupFrame, Lift};
use hyplab::geometry::SpaceForm;
use hyplab::ode::uniform_grid;

fn main() -> hyplab::error::Result<()> {
    for sf in [SpaceForm::projective(2, 1.0)?, SpaceForm::hyperbolic(2, 1.0)?] {
        let grid = uniform_grid(0.0, 5.0, 1e-3)?;
        let spec = FramedCurveSpec::new(|_| 0.0, f64::sin, |_| 0.0, sf);
        let frames = integrate_frame(&GroupFrame::identity(&sf), &spec, &grid)?;
        let unitarity = frames.iter().map(|f| f.pseudo_unitarity_residual()).fold(0.0, f64::max);
        let frenet = extract_frenet(&frames, &grid, &sf)?;
        let trip = grid.iter().enumerate().map(|(i, s)| (frenet.k1[i] - s.sin()).abs()).fold(0.0, f64::max);
        println!("c = {:+}: unitarity residual {unitarity:.1e}, |k1 - sin s| {trip:.1e}", sf.c);
        let z: Vec<String> = frames.last().unwrap().position().iter().map(|w| format!("{:.4}", w)).collect();
        println!("  end position ({})", z.join(", "));
    }
    for lift in [Lift::Hopf, Lift::Construction] {
        println!("{lift:?} lift of (k0, k1, tau) = (0.5, 1, 0.2): {:?}", coframe_pullback(0.5, 1.0, 0.2, lift));
    }
    Ok(())
}
