//! Constant solutions of the shape-operator ODE in the hyperbolic plane and
//! the fourth-order convergence of RK4 near them.
//!
//! cargo run --example berndt_orbits

use hyplab::geometry::SpaceForm;
use hyplab::ode::{berndt_constant_solution, integrate_ode, ode_rhs, richardson_ratio, uniform_grid};
use hyplab::verify::berndt_details;

fn main() -> hyplab::error::Result<()> {
    let sf = SpaceForm::hyperbolic(2, 1.0)?;
    for nu in [-0.9, -0.5, 0.5, 0.9] {
        let s = berndt_constant_solution(nu, &sf)?;
        let rhs = ode_rhs(&s, nu)?;
        println!(
            "nu = {nu:5.2}: alpha = {:.6}, beta = {:.6}, lambda = {:.6}, |rhs| = {:.1e}",
            s.alpha,
            s.beta,
            s.lambda,
            rhs.iter().map(|x| x.abs()).fold(0.0, f64::max)
        );
    }

    let s = berndt_constant_solution(0.5, &sf)?;
    let traj = integrate_ode(&s, |_| 0.5, &uniform_grid(0.0, 5.0, 0.01)?)?;
    let drift = (traj.last().state.alpha - s.alpha).abs().max((traj.last().state.beta - s.beta).abs());
    println!("drift after t = 5: {drift:.1e}");

    let mut perturbed = s;
    perturbed.alpha += 1e-3;
    let ratio = richardson_ratio(&perturbed, 0.5, 1.0, 0.1)?;
    println!("step-halving error ratio {ratio:.3} (order {:.2})", ratio.log2());

    let d = berndt_details(1.0, 50)?;
    println!("{} nu values: max rhs {:.1e}, max curvature error {:.1e}", d.nu_values, d.max_rhs, d.max_curvature_error);
    Ok(())
}
