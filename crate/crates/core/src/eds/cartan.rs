//! Cartan's test for the Hopf system: characteristic vectors, polar spaces
//! along a flag, and the codimension of the variety of integral 4-planes.

use nalgebra::{DMatrix, DVector, SMatrix};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::coframe::{BUNDLE_DIM, W1, W2, W21, W3, W4, W41, W42, W43};
use super::form::DifferentialForm;
use super::systems::{hopf_system, HopfState};
use crate::error::{Error, Result};
use crate::geometry::SpaceForm;

/// Relative singular-value cutoff for the ranks computed here.
pub const RANK_TOL: f64 = 1e-9;

/// Codimension of the integral 4-planes in the Grassmannian of 4-planes in
/// the 8-dimensional tangent space.
pub const TARGET_CODIM: usize = 14;

/// Values of `ω⁴₁, ω⁴₂, ω¹, ω²` on a vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarData {
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
}

impl PolarData {
    /// The integral vector with these values and the given `ω³`, `ω²₁`
    /// values, in coframe components.
    pub fn vector(&self, alpha: f64, w3: f64, w21: f64) -> DVector<f64> {
        let mut v = DVector::zeros(BUNDLE_DIM);
        v[W1] = self.a;
        v[W2] = self.b;
        v[W3] = w3;
        v[W4] = 0.0;
        v[W21] = w21;
        v[W41] = self.p;
        v[W42] = self.q;
        v[W43] = alpha * w3;
        v
    }
}

/// Rows `v ⌟ Ω₁`, `v ⌟ Ω₂` in the basis `ω⁴₁, ω⁴₂, ω¹, ω²`.
pub fn characteristic_matrix(pd: &PolarData, alpha: f64, c: f64) -> SMatrix<f64, 2, 4> {
    let PolarData { p, q, a, b } = *pd;
    SMatrix::<f64, 2, 4>::new(
        a,
        b,
        -p,
        -q,
        -2.0 * q + alpha * b,
        2.0 * p - alpha * a,
        2.0 * c * b + alpha * q,
        -(2.0 * c * a + alpha * p),
    )
}

/// The pair of quadratics whose common zeros are the characteristic vectors.
pub fn cv_pair(pd: &PolarData, alpha: f64, c: f64) -> (f64, f64) {
    let PolarData { p, q, a, b } = *pd;
    (2.0 * (a * p + b * q) - alpha * (a * a + b * b), p * p + q * q + c * (a * a + b * b))
}

fn rank(m: &DMatrix<f64>, floor: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > RANK_TOL * top.max(floor)).count()
}

/// `(rank R, dim H(v))` with `dim H(v) = 8 − (2 + rank)`.
pub fn characteristic_test(pd: &PolarData, alpha: f64, sf: &SpaceForm) -> (usize, usize) {
    let m = characteristic_matrix(pd, alpha, sf.c);
    let scale = 1.0 + alpha.abs() + sf.c.abs();
    let r = rank(&DMatrix::from_iterator(2, 4, m.iter().copied()), scale * 1e-3);
    (r, BUNDLE_DIM - 2 - r)
}

/// The characteristic vectors off the origin plane when `c < 0` and
/// `α² + 4c ≤ 0`: `p = αa/2 − s·bw`, `q = αb/2 + s·aw` with
/// `w = √(−c − α²/4)` and `s = ±1`.
pub fn characteristic_family(a: f64, b: f64, alpha: f64, c: f64, sign: f64) -> Option<PolarData> {
    let w2 = -c - alpha * alpha / 4.0;
    if w2 < 0.0 {
        return None;
    }
    let w = w2.sqrt();
    Some(PolarData { p: alpha * a / 2.0 - sign * b * w, q: alpha * b / 2.0 + sign * a * w, a, b })
}

/// Whether both quadratics vanish, with a tolerance scaled to the data.
pub fn cv_vanishes(pd: &PolarData, alpha: f64, c: f64) -> bool {
    let (e1, e2) = cv_pair(pd, alpha, c);
    let n = 1.0 + pd.p * pd.p + pd.q * pd.q + pd.a * pd.a + pd.b * pd.b;
    e1.abs().max(e2.abs()) <= 1e-10 * n * (1.0 + alpha.abs() + c.abs())
}

/// Number of grid points where `rank R < 2` disagrees with the vanishing of
/// both quadratics.
pub fn dichotomy_mismatches(points: &[PolarData], alpha: f64, sf: &SpaceForm) -> usize {
    points
        .iter()
        .filter(|pd| {
            let (r, h) = characteristic_test(pd, alpha, sf);
            let characteristic = r < 2;
            debug_assert_eq!(h, 6 - r);
            characteristic != cv_vanishes(pd, alpha, sf.c)
        })
        .count()
}

/// The Hopf system at a point together with its generator derivatives.
#[derive(Debug, Clone)]
pub struct HopfPoint {
    pub state: HopfState,
    pub thetas: Vec<DifferentialForm>,
    pub d_thetas: Vec<DifferentialForm>,
}

impl HopfPoint {
    pub fn new(state: HopfState) -> Result<Self> {
        state.admissible()?;
        let sys = hopf_system(&state);
        let d_thetas = sys.generators.iter().map(|g| sys.d(g)).collect::<Result<Vec<_>>>()?;
        Ok(HopfPoint { state, thetas: sys.generators, d_thetas })
    }

    /// Basis (as columns) of the polar space of the span of `vectors`.
    pub fn polar_space(&self, vectors: &[DVector<f64>]) -> DMatrix<f64> {
        let mut rows: Vec<DVector<f64>> = self.thetas.iter().map(|t| t.to_dense(BUNDLE_DIM)).collect();
        for dt in &self.d_thetas {
            for v in vectors {
                rows.push(dt.interior(v).to_dense(BUNDLE_DIM));
            }
        }
        let m = DMatrix::from_fn(rows.len(), BUNDLE_DIM, |r, c| rows[r][c]);
        null_space(&m)
    }

    /// Largest value of a generator or generator derivative on `vectors`.
    pub fn integral_residual(&self, vectors: &[DVector<f64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for v in vectors {
            for t in &self.thetas {
                worst = worst.max(t.evaluate(std::slice::from_ref(v)).abs());
            }
        }
        for (i, u) in vectors.iter().enumerate() {
            for v in &vectors[i + 1..] {
                for dt in &self.d_thetas {
                    worst = worst.max(dt.evaluate(&[u.clone(), v.clone()]).abs());
                }
            }
        }
        worst
    }
}

fn null_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    // the SVD of m^T m covers wide and tall m alike
    let gram = m.transpose() * m;
    let svd = gram.svd(false, true);
    let v_t = svd.v_t.expect("svd with v");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&i| svd.singular_values[i] <= RANK_TOL * top)
        .map(|i| v_t.row(i).transpose())
        .collect();
    if cols.is_empty() { DMatrix::zeros(n, 0) } else { DMatrix::from_columns(&cols) }
}

/// Graph coordinates of 4-planes: each plane is spanned by the vectors with
/// `(ω¹, ω², ω³, ω²₁)` equal to a unit vector and `(ω⁴, ω⁴₁, ω⁴₂, ω⁴₃)` equal
/// to the matching column of `L`.
const INDEP: [usize; 4] = [W1, W2, W3, W21];
const DEP: [usize; 4] = [W4, W41, W42, W43];

fn plane_from_graph(l: &[f64; 16]) -> Vec<DVector<f64>> {
    (0..4)
        .map(|k| {
            let mut v = DVector::zeros(BUNDLE_DIM);
            v[INDEP[k]] = 1.0;
            for (r, &d) in DEP.iter().enumerate() {
                v[d] = l[r * 4 + k];
            }
            v
        })
        .collect()
}

/// Graph coordinates of the span of `basis`, if it satisfies the independence
/// condition.
pub fn graph_of(basis: &DMatrix<f64>) -> Option<[f64; 16]> {
    let ind = DMatrix::from_fn(4, basis.ncols(), |r, c| basis[(INDEP[r], c)]);
    let dep = DMatrix::from_fn(4, basis.ncols(), |r, c| basis[(DEP[r], c)]);
    let inv = ind.try_inverse()?;
    let l = dep * inv;
    let mut out = [0.0; 16];
    for r in 0..4 {
        for k in 0..4 {
            out[r * 4 + k] = l[(r, k)];
        }
    }
    Some(out)
}

/// Integral 4-plane from the values `ω⁴₁ = λω¹ + μω²`, `ω⁴₂ = μω¹ + νω²`,
/// `ω⁴₃ = αω³`, `ω⁴ = 0`, with `ν` fixed by the quadratic constraint.
pub fn integral_plane(alpha: f64, c: f64, lambda: f64, mu: f64) -> Option<([f64; 16], f64)> {
    let den = 2.0 * lambda - alpha;
    if den.abs() < 1e-3 {
        return None;
    }
    let nu = (2.0 * mu * mu + 2.0 * c + alpha * lambda) / den;
    let mut l = [0.0; 16];
    // rows: ω⁴, ω⁴₁, ω⁴₂, ω⁴₃; columns: ω¹, ω², ω³, ω²₁
    l[4] = lambda;
    l[5] = mu;
    l[8] = mu;
    l[9] = nu;
    l[12 + 2] = alpha;
    Some((l, nu))
}

/// `2(λν − μ² − c) − α(λ + ν)`.
pub fn integral_constraint(alpha: f64, c: f64, lambda: f64, mu: f64, nu: f64) -> f64 {
    2.0 * (lambda * nu - mu * mu - c) - alpha * (lambda + nu)
}

impl HopfPoint {
    /// The 8 values `θ_i(e_k)` and 12 values `dθ_i(e_k, e_l)` on a graph plane.
    pub fn plane_equations(&self, l: &[f64; 16]) -> DVector<f64> {
        let e = plane_from_graph(l);
        let mut out = Vec::with_capacity(20);
        for t in &self.thetas {
            for v in &e {
                out.push(t.evaluate(std::slice::from_ref(v)));
            }
        }
        for dt in &self.d_thetas {
            for k in 0..4 {
                for m in (k + 1)..4 {
                    out.push(dt.evaluate(&[e[k].clone(), e[m].clone()]));
                }
            }
        }
        DVector::from_vec(out)
    }

    /// Rank of the central-difference Jacobian of the plane equations at `l`,
    /// that is, the codimension of the integral-plane variety there.
    pub fn variety_codimension(&self, l: &[f64; 16]) -> usize {
        let h = 1e-5;
        let cols: Vec<DVector<f64>> = (0..16)
            .map(|j| {
                let (mut lp, mut lm) = (*l, *l);
                lp[j] += h;
                lm[j] -= h;
                (self.plane_equations(&lp) - self.plane_equations(&lm)) / (2.0 * h)
            })
            .collect();
        rank(&DMatrix::from_columns(&cols), 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanReport {
    pub alpha: f64,
    pub c: f64,
    pub trials: usize,
    /// Codimensions of `H(E₀)…H(E₃)` along the first flag.
    pub characters: [usize; 4],
    pub sum: usize,
    pub target_codim: usize,
    /// Jacobian rank of the plane equations at `H(v)` for the first flag.
    pub variety_codim: usize,
    /// Jacobian rank at a plane built from `λ, μ` and the quadratic constraint.
    pub parameterized_codim: usize,
    /// Whether every flag gave the same characters and both codimensions.
    pub consistent: bool,
    /// Largest generator value on any `H(v)`.
    pub integral_residual: f64,
    pub resampled: usize,
}

impl CartanReport {
    pub fn passes(&self) -> bool {
        self.consistent
            && self.characters == [2, 4, 4, 4]
            && self.sum == self.target_codim
            && self.variety_codim == self.target_codim
            && self.parameterized_codim == self.target_codim
            && self.integral_residual < 1e-9
    }
}

struct FlagOutcome {
    characters: [usize; 4],
    variety_codim: usize,
    parameterized_codim: usize,
    integral_residual: f64,
}

fn random_combination<R: Rng>(rng: &mut R, basis: &DMatrix<f64>) -> DVector<f64> {
    let coeffs = DVector::from_fn(basis.ncols(), |_, _| rng.gen_range(-1.0..1.0));
    basis * coeffs
}

fn one_flag<R: Rng>(pt: &HopfPoint, rng: &mut R) -> Option<FlagOutcome> {
    let (alpha, sf) = (pt.state.alpha, pt.state.sf);
    let mut g = || rng.gen_range(-2.0..2.0);
    let pd = PolarData { p: g(), q: g(), a: g(), b: g() };
    let v = pd.vector(alpha, g(), g());
    let (r, _) = characteristic_test(&pd, alpha, &sf);
    if r < 2 {
        return None;
    }
    let e = pt.polar_space(std::slice::from_ref(&v));
    if e.ncols() != 4 {
        return None;
    }
    let graph = graph_of(&e)?;
    let w2 = random_combination(rng, &e);
    let w3 = random_combination(rng, &e);
    let flags: [Vec<DVector<f64>>; 4] = [vec![], vec![v.clone()], vec![v.clone(), w2.clone()], vec![v, w2, w3]];
    let mut characters = [0; 4];
    for (k, f) in flags.iter().enumerate() {
        characters[k] = BUNDLE_DIM - pt.polar_space(f).ncols();
    }
    let cols: Vec<DVector<f64>> = e.column_iter().map(|c| c.into_owned()).collect();
    let integral_residual = pt.integral_residual(&cols);
    let (lambda, mu) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let (plane, _) = integral_plane(alpha, sf.c, lambda, mu)?;
    Some(FlagOutcome {
        characters,
        variety_codim: pt.variety_codimension(&graph),
        parameterized_codim: pt.variety_codimension(&plane),
        integral_residual,
    })
}

/// Cartan's test at `trials` random non-characteristic flags.
pub fn cartan_test_hopf<R: Rng>(alpha: f64, sf: &SpaceForm, trials: usize, rng: &mut R) -> Result<CartanReport> {
    let pt = HopfPoint::new(HopfState { sf: *sf, alpha })?;
    let mut outcomes = Vec::with_capacity(trials);
    let mut resampled = 0;
    while outcomes.len() < trials {
        match one_flag(&pt, rng) {
            Some(o) => outcomes.push(o),
            None => {
                resampled += 1;
                if resampled > 100 * trials.max(1) {
                    return Err(Error::Characteristic("no non-characteristic flag found".into()));
                }
            }
        }
    }
    let first = outcomes.first().ok_or(Error::InvalidParameter("trials must be positive".into()))?;
    let consistent = outcomes.iter().all(|o| {
        o.characters == first.characters
            && o.variety_codim == first.variety_codim
            && o.parameterized_codim == first.parameterized_codim
    });
    Ok(CartanReport {
        alpha,
        c: sf.c,
        trials,
        characters: first.characters,
        sum: first.characters.iter().sum(),
        target_codim: TARGET_CODIM,
        variety_codim: first.variety_codim,
        parameterized_codim: first.parameterized_codim,
        consistent,
        integral_residual: outcomes.iter().map(|o| o.integral_residual).fold(0.0, f64::max),
        resampled,
    })
}

/// Grid of polar data with entries in `values`, plus both characteristic
/// families when they exist.
pub fn dichotomy_grid(values: &[f64], alpha: f64, c: f64) -> Vec<PolarData> {
    let mut pts = Vec::new();
    for &p in values {
        for &q in values {
            for &a in values {
                for &b in values {
                    pts.push(PolarData { p, q, a, b });
                }
            }
        }
    }
    for &a in values {
        for &b in values {
            for sign in [1.0, -1.0] {
                if let Some(pd) = characteristic_family(a, b, alpha, c, sign) {
                    pts.push(pd);
                }
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sf(c: f64) -> SpaceForm {
        SpaceForm::new(2, c).unwrap()
    }

    #[test]
    fn origin_plane_is_characteristic() {
        let pd = PolarData { p: 0.0, q: 0.0, a: 0.0, b: 0.0 };
        assert_eq!(characteristic_test(&pd, 0.7, &sf(1.0)), (0, 6));
    }

    #[test]
    fn borderline_alpha_gives_characteristic_direction() {
        // c = −1, α = 2: κ = 1 solves 2κ − α = κ² + c = 0
        let pd = PolarData { p: 1.0, q: 0.0, a: 1.0, b: 0.0 };
        let (r, h) = characteristic_test(&pd, 2.0, &sf(-1.0));
        assert!(r < 2 && h > 4);
    }

    #[test]
    fn generic_vectors_have_four_dimensional_polar_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let pd = PolarData {
                p: rng.gen_range(-2.0..2.0),
                q: rng.gen_range(-2.0..2.0),
                a: rng.gen_range(-2.0..2.0),
                b: rng.gen_range(-2.0..2.0),
            };
            assert_eq!(characteristic_test(&pd, rng.gen_range(-2.0..2.0), &sf(1.0)), (2, 4));
        }
    }

    #[test]
    fn dichotomy_on_grid() {
        let values = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
        for (alpha, c) in [(0.0, 1.0), (1.0, 1.0), (0.0, -1.0), (1.2, -1.0), (3.0, -1.0)] {
            let pts = dichotomy_grid(&values, alpha, c);
            assert_eq!(dichotomy_mismatches(&pts, alpha, &sf(c)), 0, "alpha {alpha}, c {c}");
        }
        // the family really is characteristic
        let pd = characteristic_family(0.8, -1.3, 1.2, -1.0, 1.0).unwrap();
        assert!(characteristic_test(&pd, 1.2, &sf(-1.0)).0 < 2);
        assert!(characteristic_family(1.0, 1.0, 3.0, -1.0, 1.0).is_none());
    }

    #[test]
    fn polar_space_matches_lemma() {
        let pt = HopfPoint::new(HopfState { sf: sf(1.0), alpha: 0.4 }).unwrap();
        let pd = PolarData { p: 0.3, q: -1.1, a: 0.9, b: 0.2 };
        let v = pd.vector(0.4, 0.5, -0.7);
        assert_eq!(pt.polar_space(&[]).ncols(), 6);
        let h = pt.polar_space(std::slice::from_ref(&v));
        assert_eq!(h.ncols(), 4);
        let cols: Vec<_> = h.column_iter().map(|c| c.into_owned()).collect();
        assert!(pt.integral_residual(&cols) < 1e-12);
    }

    #[test]
    fn integral_plane_sample() {
        assert_eq!(integral_constraint(0.0, 1.0, 1.0, 0.0, 1.0), 0.0);
        let (l, nu) = integral_plane(0.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(nu, 1.0);
        let pt = HopfPoint::new(HopfState { sf: sf(1.0), alpha: 0.0 }).unwrap();
        assert!(pt.plane_equations(&l).amax() < 1e-14);
    }

    #[test]
    fn cartan_characters() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (alpha, c) in [(0.0, 1.0), (0.9, 1.0), (0.5, -1.0), (2.6, -1.0)] {
            let rep = cartan_test_hopf(alpha, &sf(c), 10, &mut rng).unwrap();
            assert!(rep.passes(), "{rep:?}");
        }
    }

    #[test]
    fn borderline_alpha_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(cartan_test_hopf(2.0, &sf(-1.0), 1, &mut rng).is_err());
    }
}
