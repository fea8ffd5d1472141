//! The underdetermined ODE system for non-Hopf hypersurfaces with shape
//! operator `[[α, β, 0], [β, λ, 0], [0, 0, ν]]`, its constant solutions in
//! `CH²`, and a constraint-closed integrator producing pseudo-Ryan examples.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ShapeOperator, SpaceForm};

pub const DEFAULT_BETA_FLOOR: f64 = 1e-6;
pub const DEFAULT_DT: f64 = 1e-3;
pub const NEWTON_MAX_ITER: usize = 25;
pub const NEWTON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ODEState {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub nu: f64,
    pub sf: SpaceForm,
}

impl ODEState {
    pub fn new(alpha: f64, beta: f64, lambda: f64, nu: f64, sf: SpaceForm) -> Self {
        ODEState { alpha, beta, lambda, nu, sf }
    }

    /// The shape operator of this state; `μ` vanishes throughout the family.
    pub fn shape(&self) -> ShapeOperator {
        ShapeOperator::new(self.alpha, self.beta, self.lambda, 0.0, self.nu)
    }

    /// `ρ*/2 = 4c + λν`.
    pub fn rho_star_half(&self) -> f64 {
        4.0 * self.sf.c + self.lambda * self.nu
    }

    fn with_block(&self, y: [f64; 3], nu: f64) -> Self {
        ODEState { alpha: y[0], beta: y[1], lambda: y[2], nu, sf: self.sf }
    }

    fn block(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.lambda]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: ODEState,
    pub constraint_residual: f64,
    pub rho_star_half: f64,
}

impl Sample {
    fn new(t: f64, state: ODEState) -> Self {
        Sample {
            t,
            state,
            constraint_residual: pr_constraint_residual(&state),
            rho_star_half: state.rho_star_half(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectories are never empty")
    }

    /// `max − min` of `ρ*/2` over the samples.
    pub fn rho_star_half_spread(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.rho_star_half), hi.max(s.rho_star_half))
            });
        hi - lo
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "t,alpha,beta,lambda,nu,constraint_residual,rho_star_half")?;
        for s in &self.samples {
            let st = &s.state;
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                s.t, st.alpha, st.beta, st.lambda, st.nu, s.constraint_residual, s.rho_star_half
            )?;
        }
        Ok(())
    }
}

/// Right-hand sides `(α′, β′, λ′)` with `ν` supplied separately.
pub fn ode_rhs(s: &ODEState, nu: f64) -> Result<[f64; 3]> {
    let ODEState { alpha, beta, lambda, sf, .. } = *s;
    if beta == 0.0 {
        return Err(Error::Inadmissible("beta = 0 in the ODE right-hand side".into()));
    }
    let c = sf.c;
    let b2 = beta * beta;
    Ok([
        beta * (alpha + lambda - 3.0 * nu),
        b2 + lambda * lambda - 2.0 * lambda * nu + alpha * nu + c,
        ((2.0 * lambda + nu) * b2 + (nu - lambda) * (alpha * lambda - lambda * lambda + c)) / beta,
    ])
}

/// `n + 1` equally spaced points from `t0` to `t1`, with `n` chosen so the
/// spacing does not exceed `dt`.
pub fn uniform_grid(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0 && t1 > t0) {
        return Err(Error::BadGrid { min: 2 });
    }
    let n = ((t1 - t0) / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect())
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::BadGrid { min: 2 });
    }
    Ok(())
}

fn axpy(y: &[f64; 3], h: f64, k: &[f64; 3]) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

fn check_state(s: &ODEState, t: f64, beta_floor: f64) -> Result<()> {
    if ![s.alpha, s.beta, s.lambda, s.nu].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    if s.beta.abs() < beta_floor {
        return Err(Error::BetaFloor { t, floor: beta_floor });
    }
    Ok(())
}

/// One RK4 step of the block `(α, β, λ)`, with `nu_at(t, y)` closing the
/// system at each stage.
fn rk4_step<F>(s: &ODEState, t: f64, h: f64, nu_at: &mut F) -> Result<[f64; 3]>
where
    F: FnMut(f64, &[f64; 3]) -> Result<f64>,
{
    let y = s.block();
    let mut eval = |tt: f64, yy: [f64; 3]| -> Result<[f64; 3]> {
        let nu = nu_at(tt, &yy)?;
        ode_rhs(&s.with_block(yy, nu), nu)
    };
    let k1 = eval(t, y)?;
    let k2 = eval(t + h / 2.0, axpy(&y, h / 2.0, &k1))?;
    let k3 = eval(t + h / 2.0, axpy(&y, h / 2.0, &k2))?;
    let k4 = eval(t + h, axpy(&y, h, &k3))?;
    Ok(std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

/// Classical RK4 with one step per grid interval and `ν = nu_of_t(t)`. The
/// `nu` field of `init` is replaced by `nu_of_t(t_grid[0])`.
pub fn integrate_ode<F>(init: &ODEState, nu_of_t: F, t_grid: &[f64]) -> Result<Trajectory>
where
    F: Fn(f64) -> f64,
{
    integrate_ode_with_floor(init, nu_of_t, t_grid, DEFAULT_BETA_FLOOR)
}

pub fn integrate_ode_with_floor<F>(
    init: &ODEState,
    nu_of_t: F,
    t_grid: &[f64],
    beta_floor: f64,
) -> Result<Trajectory>
where
    F: Fn(f64) -> f64,
{
    check_grid(t_grid)?;
    if init.beta == 0.0 {
        return Err(Error::Inadmissible("initial beta must be nonzero".into()));
    }
    let mut state = ODEState { nu: nu_of_t(t_grid[0]), ..*init };
    check_state(&state, t_grid[0], beta_floor)?;
    let mut samples = vec![Sample::new(t_grid[0], state)];
    let mut nu_at = |t: f64, _: &[f64; 3]| Ok(nu_of_t(t));
    for w in t_grid.windows(2) {
        let y = rk4_step(&state, w[0], w[1] - w[0], &mut nu_at)?;
        state = state.with_block(y, nu_of_t(w[1]));
        check_state(&state, w[1], beta_floor)?;
        samples.push(Sample::new(w[1], state));
    }
    Ok(Trajectory { samples })
}

/// The constant solution with `u = rν`: `α = (3u−u³)/r`, `β = (1−u²)^{3/2}/r`,
/// `λ = u³/r`. Exists only in `CH²` with `|u| < 1`.
pub fn berndt_constant_solution(nu: f64, sf: &SpaceForm) -> Result<ODEState> {
    if sf.c >= 0.0 {
        return Err(Error::InvalidParameter("constant solutions require c < 0".into()));
    }
    let r = sf.r;
    let u = r * nu;
    if !(u.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("|r nu| = {} must be below 1", u.abs())));
    }
    let v = (1.0 - u * u).powf(1.5);
    Ok(ODEState::new((3.0 * u - u * u * u) / r, v / r, u * u * u / r, nu, *sf))
}

/// Step-halving ratio `|y(h) − y(h/2)| / |y(h/2) − y(h/4)|` at `t1` for RK4
/// with `ν` held at `nu`, started from `init`. Close to 16 for a fourth-order
/// method.
pub fn richardson_ratio(init: &ODEState, nu: f64, t1: f64, h: f64) -> Result<f64> {
    let end = |dt: f64| -> Result<[f64; 3]> {
        let g = uniform_grid(0.0, t1, dt)?;
        Ok(integrate_ode(init, |_| nu, &g)?.last().state.block())
    };
    let (a, b, c) = (end(h)?, end(h / 2.0)?, end(h / 4.0)?);
    let dist = |x: [f64; 3], y: [f64; 3]| (0..3).map(|i| (x[i] - y[i]).abs()).fold(0.0, f64::max);
    Ok(dist(a, b) / dist(b, c))
}

/// Eigenvalues `(k₊, k₋)` of `[[α, β], [β, λ]]`, and `ν`.
pub fn block_principal_curvatures(s: &ODEState) -> (f64, f64, f64) {
    let mean = (s.alpha + s.lambda) / 2.0;
    let half_gap = ((s.alpha - s.lambda) / 2.0).hypot(s.beta);
    (mean + half_gap, mean - half_gap, s.nu)
}

/// `β²ν² + (4c+λν)(α(λ−ν)−β²)`.
pub fn pr_constraint_residual(s: &ODEState) -> f64 {
    let b2 = s.beta * s.beta;
    b2 * s.nu * s.nu + s.rho_star_half() * (s.alpha * (s.lambda - s.nu) - b2)
}

/// `∂/∂ν` of [`pr_constraint_residual`].
pub fn pr_constraint_derivative(s: &ODEState) -> f64 {
    let b2 = s.beta * s.beta;
    2.0 * b2 * s.nu + s.lambda * (s.alpha * (s.lambda - s.nu) - b2) - s.alpha * s.rho_star_half()
}

/// Newton's method for `ν` on the constraint, started from `s.nu`.
pub fn solve_constraint_nu(s: &ODEState, t: f64) -> Result<f64> {
    let mut st = *s;
    let mut g = pr_constraint_residual(&st);
    for _ in 0..NEWTON_MAX_ITER {
        let dg = pr_constraint_derivative(&st);
        let scale = 1.0 + st.beta * st.beta + st.alpha.abs() + st.lambda.abs();
        if g.abs() <= NEWTON_TOL * scale {
            return Ok(st.nu);
        }
        if dg.abs() <= 1e-10 * scale {
            return Err(Error::FoldPoint { t, derivative: dg });
        }
        st.nu -= g / dg;
        if !st.nu.is_finite() {
            return Err(Error::NonFinite { t });
        }
        g = pr_constraint_residual(&st);
    }
    let scale = 1.0 + st.beta * st.beta + st.alpha.abs() + st.lambda.abs();
    if g.abs() <= NEWTON_TOL * scale {
        Ok(st.nu)
    } else {
        Err(Error::NewtonDivergence { t, residual: g })
    }
}

/// RK4 on `(α, β, λ)` with `ν` recovered from the pseudo-Ryan constraint by
/// Newton's method at every stage.
pub fn integrate_pseudo_ryan(init: &ODEState, t_grid: &[f64]) -> Result<Trajectory> {
    let (traj, stop) = integrate_pseudo_ryan_partial(init, t_grid)?;
    match stop {
        Some(e) => Err(e),
        None => Ok(traj),
    }
}

/// Like [`integrate_pseudo_ryan`], but a failure after the first step keeps
/// the samples computed so far and reports the error alongside them.
pub fn integrate_pseudo_ryan_partial(init: &ODEState, t_grid: &[f64]) -> Result<(Trajectory, Option<Error>)> {
    check_grid(t_grid)?;
    if init.beta == 0.0 {
        return Err(Error::Inadmissible("initial beta must be nonzero".into()));
    }
    let g0 = pr_constraint_residual(init);
    if g0.abs() > 1e-10 {
        return Err(Error::Inadmissible(format!(
            "initial state violates the pseudo-Ryan constraint (residual {g0:e})"
        )));
    }
    let mut state = ODEState { nu: solve_constraint_nu(init, t_grid[0])?, ..*init };
    check_state(&state, t_grid[0], DEFAULT_BETA_FLOOR)?;
    let mut samples = vec![Sample::new(t_grid[0], state)];
    for w in t_grid.windows(2) {
        let guess = state;
        let mut nu_at = |t: f64, y: &[f64; 3]| solve_constraint_nu(&guess.with_block(*y, guess.nu), t);
        let step = rk4_step(&state, w[0], w[1] - w[0], &mut nu_at).and_then(|y| {
            let next = state.with_block(y, solve_constraint_nu(&state.with_block(y, state.nu), w[1])?);
            check_state(&next, w[1], DEFAULT_BETA_FLOOR)?;
            Ok(next)
        });
        match step {
            Ok(next) => {
                state = next;
                samples.push(Sample::new(w[1], state));
            }
            Err(e) => return Ok((Trajectory { samples }, Some(e))),
        }
    }
    Ok((Trajectory { samples }, None))
}
