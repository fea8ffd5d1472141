//! Command-line front end for the `hyplab` binary.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catalog::{exceptional_status, make_entry, ExceptionalKind, HomogeneousKind};
use crate::conditions::classify_point;
use crate::curves::{integrate_frame, write_frames_csv, FramedCurveSpec, GroupFrame};
use crate::error::{Error, Result};
use crate::geometry::{ricci, star_ricci, star_scalar, star_scalar_half, Mode, ShapeOperator, SpaceForm};
use crate::ode::{integrate_ode_with_floor, integrate_pseudo_ryan_partial, uniform_grid, ODEState, DEFAULT_BETA_FLOOR};
use crate::profile::Profile;
use crate::verify::{run, RunConfig, Suite};

/// Exit code for a verification run with residuals out of tolerance.
pub const EXIT_FAILED: i32 = 1;
/// Exit code for invalid input or a failed computation.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hyplab", version, about = "Hypersurfaces in CP2 and CH2: invariants, classification, constructions and checks")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ricci and *-Ricci tensors and the *-scalar curvature as JSON.
    #[command(allow_negative_numbers = true)]
    Invariants(PointArgs),
    /// Every classification predicate at a point as JSON.
    #[command(allow_negative_numbers = true)]
    Classify {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// A homogeneous (A0, A1, A2, B) or exceptional (C, D, E) entry as JSON.
    #[command(allow_negative_numbers = true)]
    Catalog {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Integrate the shape-operator ODE as CSV.
    #[command(subcommand)]
    Construct(Construct),
    /// Integrate a framed curve and write its group frames as CSV.
    #[command(allow_negative_numbers = true)]
    Curve {
        #[command(flatten)]
        space: SpaceArgs,
        /// Holomorphic curvature profile.
        #[arg(long, default_value = "const:0")]
        k0: Profile,
        /// Transverse curvature profile.
        #[arg(long, default_value = "const:0")]
        k1: Profile,
        /// Torsion profile.
        #[arg(long, default_value = "const:0")]
        tau: Profile,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run verification suites and write a JSON report; exit 1 on failure.
    #[command(allow_negative_numbers = true)]
    Verify {
        /// Comma-separated: oracles, pseudo-ryan-equiv, berndt, eds-hopf, eds-case-i,
        /// eds-case-ii, eds-construction, cartan, all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Falls back to HYPLAB_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Overrides each suite's residual bound.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// RK4 for (alpha, beta, lambda) with a prescribed nu(t).
    #[command(allow_negative_numbers = true)]
    Ode {
        #[command(flatten)]
        init: BlockArgs,
        /// const:V, poly:a0,a1,... or sin:amp,freq,phase,offset
        #[arg(long)]
        nu: Profile,
        #[arg(long, default_value_t = DEFAULT_BETA_FLOOR)]
        beta_floor: f64,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// RK4 with nu solved from the pseudo-Ryan constraint at every stage.
    #[command(allow_negative_numbers = true)]
    PseudoRyan {
        #[command(flatten)]
        init: BlockArgs,
        #[arg(long)]
        nu: f64,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SpaceArgs {
    /// Holomorphic curvature parameter, 1/r^2 or -1/r^2.
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

impl SpaceArgs {
    fn space_form(&self) -> Result<SpaceForm> {
        SpaceForm::new(self.n, self.c)
    }
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

impl PointArgs {
    fn shape(&self) -> ShapeOperator {
        ShapeOperator::new(self.alpha, self.beta, self.lambda, self.mu, self.nu)
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BlockArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub lambda: f64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct TimeArgs {
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long)]
    pub t1: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutArgs {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Invariants {
    shape: ShapeOperator,
    c: f64,
    n: usize,
    ricci: [[f64; 3]; 3],
    star_ricci: [[f64; 3]; 3],
    rho_star: f64,
    star_scalar_half: f64,
}

fn rows(m: &nalgebra::Matrix3<f64>) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var("HYPLAB_SEED") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| Error::Parse(format!("HYPLAB_SEED={s:?} is not an integer"))),
        Err(_) => Ok(None),
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Invariants(p) => {
            let (a, sf) = (p.shape(), p.space.space_form()?);
            p.out.json(&Invariants {
                shape: a,
                c: sf.c,
                n: sf.n,
                ricci: rows(&ricci(&a, &sf, Mode::ClosedForm)),
                star_ricci: rows(&star_ricci(&a, &sf, Mode::ClosedForm)),
                rho_star: star_scalar(&a, &sf),
                star_scalar_half: star_scalar_half(&a, &sf),
            })?;
        }
        Command::Classify { point, tol } => {
            let sf = point.space.space_form()?;
            point.out.json(&classify_point(&point.shape(), &sf, tol))?;
        }
        Command::Catalog { kind, alpha, space, out } => {
            let sf = space.space_form()?;
            match kind.as_str() {
                "C" => out.json(&exceptional_status(ExceptionalKind::C))?,
                "D" => out.json(&exceptional_status(ExceptionalKind::D))?,
                "E" => out.json(&exceptional_status(ExceptionalKind::E))?,
                k => out.json(&make_entry(k.parse::<HomogeneousKind>()?, alpha, &sf, space.n)?)?,
            }
        }
        Command::Construct(Construct::Ode { init, nu, beta_floor, time, out }) => {
            let sf = init.space.space_form()?;
            let grid = uniform_grid(time.t0, time.t1, time.dt)?;
            let s0 = ODEState::new(init.alpha, init.beta, init.lambda, nu.eval(time.t0), sf);
            let traj = integrate_ode_with_floor(&s0, |t| nu.eval(t), &grid, beta_floor)?;
            let mut w = out.writer()?;
            traj.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Construct(Construct::PseudoRyan { init, nu, time, out }) => {
            let sf = init.space.space_form()?;
            let grid = uniform_grid(time.t0, time.t1, time.dt)?;
            let s0 = ODEState::new(init.alpha, init.beta, init.lambda, nu, sf);
            let (traj, stop) = integrate_pseudo_ryan_partial(&s0, &grid)?;
            let mut w = out.writer()?;
            traj.write_csv(&mut w)?;
            w.flush()?;
            if let Some(e) = stop {
                eprintln!("error: {e}; wrote samples up to t = {}", traj.last().t);
                return Ok(EXIT_ERROR);
            }
        }
        Command::Curve { space, k0, k1, tau, t0, t1, dt, out } => {
            let sf = space.space_form()?;
            let grid = uniform_grid(t0, t1, dt)?;
            let spec = FramedCurveSpec::new(|s| k0.eval(s), |s| k1.eval(s), |s| tau.eval(s), sf);
            let frames = integrate_frame(&GroupFrame::identity(&sf), &spec, &grid)?;
            let mut w = out.writer()?;
            write_frames_csv(&frames, &grid, &mut w)?;
            w.flush()?;
        }
        Command::Verify { suite, seed, samples, tol, out } => {
            let seed = match seed {
                Some(s) => s,
                None => seed_from_env()?.unwrap_or(42),
            };
            let report = run(&Suite::parse_list(&suite)?, &RunConfig { seed, samples, tol })?;
            out.json(&report)?;
            if !report.passed {
                return Ok(EXIT_FAILED);
            }
        }
    }
    Ok(0)
}

/// Parses `args`, runs the command, reports errors on standard error and
/// returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
