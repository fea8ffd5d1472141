//! Seeded verification suites with JSON-serializable reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conditions::{pseudo_ryan, pseudo_ryan_raw_residuals};
use crate::eds::cartan::{cartan_test_hopf, dichotomy_grid, dichotomy_mismatches};
use crate::eds::coframe::Coframe;
use crate::eds::systems::{verify_random, SystemId, CONSTRUCTION_COORDS};
use crate::eds::{DifferentialForm, Jet};
use crate::error::{Error, Result};
use crate::geometry::{star_ricci, star_scalar, ricci, Mode, ShapeOperator, SpaceForm, W};
use crate::ode::{
    berndt_constant_solution, block_principal_curvatures, ode_rhs, richardson_ratio,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracles,
    PseudoRyanEquiv,
    Berndt,
    EdsHopf,
    EdsCaseI,
    EdsCaseIi,
    EdsConstruction,
    Cartan,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Oracles,
        Suite::PseudoRyanEquiv,
        Suite::Berndt,
        Suite::EdsHopf,
        Suite::EdsCaseI,
        Suite::EdsCaseIi,
        Suite::EdsConstruction,
        Suite::Cartan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracles => "oracles",
            Suite::PseudoRyanEquiv => "pseudo-ryan-equiv",
            Suite::Berndt => "berndt",
            Suite::EdsHopf => "eds-hopf",
            Suite::EdsCaseI => "eds-case-i",
            Suite::EdsCaseIi => "eds-case-ii",
            Suite::EdsConstruction => "eds-construction",
            Suite::Cartan => "cartan",
        }
    }

    /// Residual bound used when the run does not override it.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Oracles | Suite::PseudoRyanEquiv => 1e-9,
            Suite::Berndt => 1e-12,
            _ => 1e-8,
        }
    }

    fn salt(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap() as u64 + 1
    }

    /// A comma-separated list of suite names; `"all"` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s.trim() == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',').map(|name| name.trim().parse()).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    /// Overrides each suite's default residual bound.
    pub tol: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: 42, samples: 1000, tol: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub max_residual: f64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub details: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

pub fn run(suites: &[Suite], cfg: &RunConfig) -> Result<VerifyReport> {
    let reports = suites.iter().map(|s| run_suite(*s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport {
        seed: cfg.seed,
        samples: cfg.samples,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    let tol = cfg.tol.unwrap_or(suite.default_tol());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite.salt());
    let mut out = Outcome::default();
    let (trials, details) = match suite {
        Suite::Oracles => oracles(cfg.samples, tol, &mut rng, &mut out),
        Suite::PseudoRyanEquiv => pseudo_ryan_equiv(cfg.samples, tol, 20, &mut rng, &mut out),
        Suite::Berndt => berndt(tol, &mut rng, &mut out)?,
        Suite::EdsHopf => {
            let (n, mut d) = eds(SystemId::Hopf, cfg.samples, tol, &mut rng, &mut out)?;
            let dd = d_squared(100, 100, &mut rng);
            out.observe(dd, 1e-9, "d(d f) exceeds 1e-9");
            d["d_squared_max"] = serde_json::json!(dd);
            d["d_squared_trials"] = serde_json::json!(100 * 100);
            (n, d)
        }
        Suite::EdsCaseI => eds(SystemId::CaseI, cfg.samples, tol, &mut rng, &mut out)?,
        Suite::EdsCaseIi => eds(SystemId::CaseIi, cfg.samples, tol, &mut rng, &mut out)?,
        Suite::EdsConstruction => eds(SystemId::Construction, cfg.samples, tol, &mut rng, &mut out)?,
        Suite::Cartan => cartan(50, &mut rng, &mut out)?,
    };
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        trials,
        tol,
        max_residual: out.max_residual,
        passed: out.failures.is_empty(),
        failures: out.failures,
        details,
    })
}

#[derive(Debug, Default)]
struct Outcome {
    max_residual: f64,
    failures: Vec<String>,
}

impl Outcome {
    fn observe(&mut self, residual: f64, tol: f64, what: &str) {
        self.max_residual = self.max_residual.max(residual);
        if !(residual <= tol) {
            self.fail(format!("{what}: {residual:e}"));
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }
}

/// `c = ±1/r²` with `r ∈ [0.5, 2]`.
pub fn random_space_form<R: Rng>(rng: &mut R) -> SpaceForm {
    let r = rng.gen_range(0.5..2.0);
    let sf = if rng.gen_bool(0.5) { SpaceForm::projective(2, r) } else { SpaceForm::hyperbolic(2, r) };
    sf.expect("radius in range")
}

pub fn random_shape<R: Rng>(rng: &mut R) -> ShapeOperator {
    let mut g = || rng.gen_range(-2.0..2.0);
    ShapeOperator::new(g(), g(), g(), g(), g())
}

// ---------------------------------------------------------------- oracles

#[derive(Serialize)]
struct OracleDetails {
    ricci_max_diff: f64,
    star_ricci_max_diff: f64,
    hopf_alpha_zero_trials: usize,
    hopf_alpha_zero_max_diff: f64,
}

fn oracles<R: Rng>(samples: usize, tol: f64, rng: &mut R, out: &mut Outcome) -> (usize, serde_json::Value) {
    let (mut rd, mut sd) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let (a, sf) = (random_shape(rng), random_space_form(rng));
        rd = rd.max((ricci(&a, &sf, Mode::ClosedForm) - ricci(&a, &sf, Mode::TraceOracle)).amax());
        sd = sd.max((star_ricci(&a, &sf, Mode::ClosedForm) - star_ricci(&a, &sf, Mode::TraceOracle)).amax());
    }
    out.observe(rd, tol, "ricci closed form vs trace");
    out.observe(sd, tol, "star-ricci closed form vs trace");
    let hopf_trials = 100;
    let hd = (0..hopf_trials).map(|_| hopf_alpha_zero_deviation(rng)).fold(0.0, f64::max);
    out.observe(hd, 1e-12, "Hopf alpha = 0 star-Ricci law");
    let details = OracleDetails {
        ricci_max_diff: rd,
        star_ricci_max_diff: sd,
        hopf_alpha_zero_trials: hopf_trials,
        hopf_alpha_zero_max_diff: hd,
    };
    (samples, serde_json::to_value(details).unwrap())
}

/// Largest deviation from `S*|W⊥ = 5c·I` and `ρ* = 10c` for a random Hopf
/// operator with `α = 0` and `λν = c`.
pub fn hopf_alpha_zero_deviation<R: Rng>(rng: &mut R) -> f64 {
    let sf = random_space_form(rng);
    let lambda = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let a = ShapeOperator::hopf(0.0, lambda, sf.c / lambda);
    let s = star_ricci(&a, &sf, Mode::ClosedForm);
    let mut worst = (star_scalar(&a, &sf) - 10.0 * sf.c).abs();
    for i in 0..3 {
        for j in 0..3 {
            if i == W || j == W {
                continue;
            }
            let expect = if i == j { 5.0 * sf.c } else { 0.0 };
            worst = worst.max((s[(i, j)] - expect).abs());
        }
    }
    worst
}

// ---------------------------------------------------------------- pseudo-Ryan

#[derive(Serialize)]
pub struct EquivalenceDetails {
    pub samples: usize,
    pub mu_large_samples: usize,
    pub pseudo_ryan_samples: usize,
    pub mismatches: usize,
    pub grid_points: usize,
    pub grid_counterexamples: usize,
}

/// One sample from a mixture of generic operators, operators with `|μ| > 0.1`,
/// and operators on the pseudo-Ryan locus.
pub fn equivalence_sample<R: Rng>(rng: &mut R, kind: usize) -> (ShapeOperator, SpaceForm) {
    let sf = random_space_form(rng);
    loop {
        let mut a = random_shape(rng);
        match kind % 4 {
            0 => {}
            1 => a.mu = rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            2 => {
                // μ = 0 and α solved from β²ν² + k(α(λ−ν) − β²) = 0, k = 4c + λν
                a.mu = 0.0;
                let k = 4.0 * sf.c + a.lambda * a.nu;
                let den = k * (a.lambda - a.nu);
                if den.abs() < 0.05 {
                    continue;
                }
                let b2 = a.beta * a.beta;
                a.alpha = (k * b2 - b2 * a.nu * a.nu) / den;
                if a.alpha.abs() > 10.0 {
                    continue;
                }
            }
            _ => {
                a.beta = 0.0;
                a.mu = 0.0;
                a.nu = a.lambda;
            }
        }
        return (a, sf);
    }
}

/// Grid points of `linspace(−2, 2, n)⁵ × {c = ±1}` with `|μ| > 0.01` and both
/// raw residuals within `1e-12`.
pub fn refinement_counterexamples(n: usize) -> (usize, usize) {
    let vals: Vec<f64> = (0..n).map(|i| -2.0 + 4.0 * i as f64 / (n - 1) as f64).collect();
    let mut found = 0;
    let mut points = 0;
    for c in [1.0, -1.0] {
        let sf = SpaceForm::new(2, c).unwrap();
        for &alpha in &vals {
            for &beta in &vals {
                for &lambda in &vals {
                    for &mu in &vals {
                        for &nu in &vals {
                            points += 1;
                            if mu.abs() <= 0.01 {
                                continue;
                            }
                            let a = ShapeOperator::new(alpha, beta, lambda, mu, nu);
                            let [r1, r2] = pseudo_ryan_raw_residuals(&a, &sf);
                            if r1.abs() <= 1e-12 && r2.abs() <= 1e-12 {
                                found += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    (points, found)
}

pub fn equivalence_details<R: Rng>(samples: usize, tol: f64, grid: usize, rng: &mut R) -> EquivalenceDetails {
    let (mut mismatches, mut mu_large, mut positive) = (0, 0, 0);
    for i in 0..samples {
        let (a, sf) = equivalence_sample(rng, i);
        let rep = pseudo_ryan(&a, &sf, tol);
        if a.mu.abs() > 0.1 {
            mu_large += 1;
        }
        if rep.oracle.holds {
            positive += 1;
        }
        if rep.raw.holds != rep.oracle.holds {
            mismatches += 1;
        }
    }
    let (grid_points, grid_counterexamples) = refinement_counterexamples(grid);
    EquivalenceDetails {
        samples,
        mu_large_samples: mu_large,
        pseudo_ryan_samples: positive,
        mismatches,
        grid_points,
        grid_counterexamples,
    }
}

fn pseudo_ryan_equiv<R: Rng>(
    samples: usize,
    tol: f64,
    grid: usize,
    rng: &mut R,
    out: &mut Outcome,
) -> (usize, serde_json::Value) {
    let d = equivalence_details(samples, tol, grid, rng);
    if d.mismatches > 0 {
        out.fail(format!("{} samples where raw and oracle verdicts differ", d.mismatches));
    }
    if d.grid_counterexamples > 0 {
        out.fail(format!("{} grid points with mu != 0 satisfy both raw identities", d.grid_counterexamples));
    }
    (samples, serde_json::to_value(d).unwrap())
}

// ---------------------------------------------------------------- Berndt

#[derive(Serialize)]
pub struct BerndtDetails {
    pub radius: f64,
    pub nu_values: usize,
    pub max_rhs: f64,
    pub max_curvature_error: f64,
    pub richardson_ratio: f64,
}

pub fn berndt_details(r: f64, count: usize) -> Result<BerndtDetails> {
    let sf = SpaceForm::hyperbolic(2, r)?;
    let (mut rhs_max, mut curv_max) = (0.0f64, 0.0f64);
    for k in 0..count {
        let nu = (-1.0 + 2.0 * (k as f64 + 0.5) / count as f64) / r;
        let s = berndt_constant_solution(nu, &sf)?;
        let rhs = ode_rhs(&s, nu)?;
        rhs_max = rhs.iter().fold(rhs_max, |m, v| m.max(v.abs()));
        let (kp, km, _) = block_principal_curvatures(&s);
        let root = (1.0 - 0.75 * r * r * nu * nu).sqrt() / r;
        curv_max = curv_max.max((kp - (1.5 * nu + root)).abs()).max((km - (1.5 * nu - root)).abs());
    }
    let mut start = berndt_constant_solution(0.5 / r, &sf)?;
    start.alpha += 1e-3;
    let ratio = richardson_ratio(&start, 0.5 / r, 1.0, 0.1)?;
    Ok(BerndtDetails { radius: r, nu_values: count, max_rhs: rhs_max, max_curvature_error: curv_max, richardson_ratio: ratio })
}

fn berndt<R: Rng>(tol: f64, rng: &mut R, out: &mut Outcome) -> Result<(usize, serde_json::Value)> {
    let r = rng.gen_range(0.5..2.0);
    let d = berndt_details(r, 50)?;
    out.observe(d.max_rhs, 1e-13, "constant solution right-hand side");
    out.observe(d.max_curvature_error, tol, "block principal curvatures");
    if !(14.0..=18.0).contains(&d.richardson_ratio) {
        out.fail(format!("Richardson ratio {} outside [14, 18]", d.richardson_ratio));
    }
    Ok((d.nu_values, serde_json::to_value(d).unwrap()))
}

// ---------------------------------------------------------------- EDS

#[derive(Serialize)]
struct EdsDetails {
    system: SystemId,
    checks: BTreeMap<String, f64>,
    integral_element_dims: BTreeMap<usize, usize>,
    characters: BTreeMap<String, usize>,
    worst_state: Vec<(String, f64)>,
}

fn expected_dim(id: SystemId) -> Option<usize> {
    match id {
        SystemId::Hopf => None,
        SystemId::CaseI => Some(1),
        SystemId::CaseIi => Some(4),
        SystemId::Construction => Some(1),
    }
}

fn eds<R: Rng>(id: SystemId, samples: usize, tol: f64, rng: &mut R, out: &mut Outcome) -> Result<(usize, serde_json::Value)> {
    let mut checks: BTreeMap<String, f64> = BTreeMap::new();
    let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
    let mut chars: BTreeMap<String, usize> = BTreeMap::new();
    let mut worst = (0.0, vec![]);
    for _ in 0..samples {
        let rep = verify_random(id, random_space_form(rng), rng)?;
        for ch in &rep.checks {
            let e = checks.entry(ch.name.clone()).or_insert(0.0);
            *e = e.max(ch.residual);
        }
        let m = rep.max_residual();
        if m >= worst.0 {
            worst = (m, rep.state.clone());
        }
        out.observe(m, tol, &format!("{id} tableau residual"));
        if let Some(a) = &rep.analysis {
            *dims.entry(a.integral_element_dim).or_default() += 1;
            *chars.entry(format!("{:?}", a.characters)).or_default() += 1;
            if Some(a.integral_element_dim) != expected_dim(id) {
                out.fail(format!("{id}: integral elements of dimension {}", a.integral_element_dim));
            }
            if id == SystemId::Construction && a.characters != [1, 0, 0] {
                out.fail(format!("construction characters {:?}", a.characters));
            }
        }
    }
    let d = EdsDetails { system: id, checks, integral_element_dims: dims, characters: chars, worst_state: worst.1 };
    Ok((samples, serde_json::to_value(d).unwrap()))
}

/// A 1-form over `cf` whose coefficients are random quadratic polynomials in
/// the fiber coordinates, evaluated at `point`.
pub fn random_polynomial_form<R: Rng>(cf: &Coframe, point: &[f64], rng: &mut R) -> DifferentialForm {
    let x: Vec<Jet> = point.iter().enumerate().map(|(i, v)| Jet::variable(i, *v)).collect();
    let mut form = DifferentialForm::zero(1);
    for k in 0..cf.dim() {
        let mut coef = Jet::constant(rng.gen_range(-1.0..1.0));
        for i in 0..x.len() {
            coef = coef + rng.gen_range(-1.0..1.0) * x[i];
            for j in i..x.len() {
                coef = coef + rng.gen_range(-1.0..1.0) * x[i] * x[j];
            }
        }
        form = form.with_term(vec![k as u8], coef);
    }
    form
}

/// Largest coefficient of `d(d f)` over `forms × states` random polynomial
/// 1-forms and random points.
pub fn d_squared<R: Rng>(forms: usize, states: usize, rng: &mut R) -> f64 {
    let mut worst: f64 = 0.0;
    let seeds: Vec<u64> = (0..forms).map(|_| rng.gen()).collect();
    for _ in 0..states {
        let cf = Coframe::new(random_space_form(rng), &CONSTRUCTION_COORDS);
        let point: Vec<f64> = (0..CONSTRUCTION_COORDS.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        for s in &seeds {
            // the same seed gives the same polynomial at every point
            let f = random_polynomial_form(&cf, &point, &mut ChaCha8Rng::seed_from_u64(*s));
            let dd = cf.exterior_derivative(&f).and_then(|df| cf.exterior_derivative(&df));
            worst = worst.max(dd.map_or(f64::INFINITY, |g| g.max_abs()));
        }
    }
    worst
}

// ---------------------------------------------------------------- Cartan

#[derive(Serialize)]
struct CartanDetails {
    reports: Vec<crate::eds::CartanReport>,
    dichotomy_points: usize,
    dichotomy_mismatches: usize,
}

fn cartan<R: Rng>(flags: usize, rng: &mut R, out: &mut Outcome) -> Result<(usize, serde_json::Value)> {
    let mut points = vec![(0.0, SpaceForm::new(2, 1.0)?)];
    while points.len() < 4 {
        let sf = random_space_form(rng);
        let alpha: f64 = rng.gen_range(-3.0..3.0);
        if (alpha * alpha + 4.0 * sf.c).abs() >= 0.05 {
            points.push((alpha, sf));
        }
    }
    let mut reports = Vec::new();
    for (alpha, sf) in &points {
        let rep = cartan_test_hopf(*alpha, sf, flags, rng)?;
        out.observe(rep.integral_residual, 1e-9, "generators on H(v)");
        if !rep.passes() {
            out.fail(format!(
                "alpha {alpha}, c {}: characters {:?}, codim {} / {}",
                sf.c, rep.characters, rep.variety_codim, rep.parameterized_codim
            ));
        }
        reports.push(rep);
    }
    let values = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let (mut n, mut bad) = (0, 0);
    for (alpha, c) in [(0.0, 1.0), (1.0, 1.0), (0.0, -1.0), (1.2, -1.0), (3.0, -1.0)] {
        let sf = SpaceForm::new(2, c)?;
        let pts = dichotomy_grid(&values, alpha, c);
        n += pts.len();
        bad += dichotomy_mismatches(&pts, alpha, &sf);
    }
    if bad > 0 {
        out.fail(format!("{bad} grid points break the characteristic dichotomy"));
    }
    let trials = flags * points.len();
    let d = CartanDetails { reports, dichotomy_points: n, dichotomy_mismatches: bad };
    Ok((trials, serde_json::to_value(d).unwrap()))
}
