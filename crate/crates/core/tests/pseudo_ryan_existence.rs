//! Integrating the pseudo-Ryan DAE from `(c, α, β, λ, ν) = (−1, 1.5, 1, 2, 1)`
//! over `[0, 2]`. The solution leaves every bounded set near `t = 0.236`, so
//! the full-interval statement is ignored by default; the prefix up to the
//! blow-up is checked separately.

use hyplab::conditions::pseudo_ryan;
use hyplab::geometry::SpaceForm;
use hyplab::ode::{integrate_pseudo_ryan, integrate_pseudo_ryan_partial, uniform_grid, ODEState};

fn seed() -> ODEState {
    ODEState::new(1.5, 1.0, 2.0, 1.0, SpaceForm::hyperbolic(2, 1.0).unwrap())
}

#[test]
#[ignore = "the solution blows up near t = 0.236"]
fn exists_on_zero_to_two() {
    let traj = integrate_pseudo_ryan(&seed(), &uniform_grid(0.0, 2.0, 1e-3).unwrap()).unwrap();
    assert!(traj.samples.iter().all(|s| s.constraint_residual.abs() <= 1e-8));
    assert!(traj.rho_star_half_spread() > 5e-4);
}

#[test]
fn prefix_before_blow_up_is_pseudo_ryan_and_not_star_einstein() {
    let sf = seed().sf;
    let (traj, stop) = integrate_pseudo_ryan_partial(&seed(), &uniform_grid(0.0, 2.0, 1e-3).unwrap()).unwrap();
    assert!(stop.is_some());
    assert!((0.23..0.24).contains(&traj.last().t));
    for s in &traj.samples {
        assert!(s.constraint_residual.abs() <= 1e-8);
        assert!(pseudo_ryan(&s.state.shape(), &sf, 1e-9).oracle.holds, "t = {}", s.t);
    }
    assert!(traj.rho_star_half_spread() > 5e-4);
}
