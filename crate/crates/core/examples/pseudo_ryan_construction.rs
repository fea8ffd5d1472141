//! Non-Hopf pseudo-Ryan hypersurfaces from the constrained ODE: `ν` is solved
//! from the pseudo-Ryan relation at every stage. From this seed the solution
//! blows up in finite time, and the integrator stops and keeps the prefix.
//!
//! cargo run --example pseudo_ryan_construction

use hyplab::conditions::pseudo_ryan;
use hyplab::geometry::SpaceForm;
use hyplab::ode::{berndt_constant_solution, integrate_ode, integrate_pseudo_ryan_partial, uniform_grid, ODEState};
use hyplab::profile::Profile;

fn main() -> hyplab::error::Result<()> {
    let sf = SpaceForm::hyperbolic(2, 1.0)?;
    let seed = ODEState::new(1.5, 1.0, 2.0, 1.0, sf);
    let (traj, stop) = integrate_pseudo_ryan_partial(&seed, &uniform_grid(0.0, 2.0, 1e-3)?)?;
    for s in traj.samples.iter().step_by(40) {
        let oracle = pseudo_ryan(&s.state.shape(), &sf, 1e-9).oracle;
        println!(
            "t = {:.3}  nu = {:9.4}  constraint {:.1e}  oracle residual {:.1e}  rho*/2 = {:9.4}",
            s.t, s.state.nu, s.constraint_residual, oracle.residual, s.rho_star_half
        );
    }
    println!("spread of rho*/2 along the prefix: {:.4}", traj.rho_star_half_spread());
    if let Some(e) = stop {
        println!("stopped at t = {:.3}: {e}", traj.last().t);
    }

    let nu: Profile = "sin:0.05,2,0,0.5".parse()?;
    let start = berndt_constant_solution(0.5, &sf)?;
    let traj = integrate_ode(&start, |t| nu.eval(t), &uniform_grid(0.0, 1.0, 1e-2)?)?;
    let end = traj.last();
    println!("\nprescribed nu = {nu}: state at t = 1 is {:?}", end.state.shape());
    println!("rho*/2 moves from {:.4} to {:.4}", traj.samples[0].rho_star_half, end.rho_star_half);
    Ok(())
}
