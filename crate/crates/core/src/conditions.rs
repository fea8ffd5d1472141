//! Pointwise classification predicates for shape operators in canonical form.
//!
//! Every predicate reports a residual alongside its verdict. Residuals of the
//! two raw pseudo-Ryan identities and of the curvature-action oracle are
//! normalized by `1 + ‖A‖²` before being compared with the tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    frame_vector, gauss_curvature, ricci, star_scalar_half, wperp_principal_curvatures, Mode,
    ShapeOperator, SpaceForm, X, Y,
};

/// A predicate value together with the residual it was judged on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub residual: f64,
}

impl Verdict {
    fn within(residual: f64, tol: f64) -> Self {
        Verdict { holds: residual <= tol, residual }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoRyanReport {
    /// Left-minus-right of `μ(β²ν − α(4c+λν−μ²)) = 0` and of
    /// `β²(μ²−ν²) = (4c+λν−μ²)(α(λ−ν)−β²)`.
    pub raw_residuals: [f64; 2],
    /// Both raw identities hold after normalization.
    pub raw: Verdict,
    /// `μ = 0` and `β²ν² + (4c+λν)(α(λ−ν)−β²) = 0`, judged without normalization.
    pub refined: Verdict,
    /// `W⊥`-components of `(R(X,Y)·S)X` and `(R(X,Y)·S)Y` vanish.
    pub oracle: Verdict,
}

/// `1 + ‖A‖²`, the scale applied to raw and oracle residuals.
pub fn residual_scale(a: &ShapeOperator) -> f64 {
    1.0 + a.norm_squared()
}

pub fn pseudo_ryan_raw_residuals(a: &ShapeOperator, sf: &SpaceForm) -> [f64; 2] {
    let ShapeOperator { alpha, beta, lambda, mu, nu } = *a;
    let k = 4.0 * sf.c + lambda * nu - mu * mu;
    let b2 = beta * beta;
    let first = mu * (b2 * nu - alpha * k);
    let second = b2 * (mu * mu - nu * nu) - k * (alpha * (lambda - nu) - b2);
    [first, second]
}

/// `β²ν² + (4c+λν)(α(λ−ν)−β²)`; its vanishing together with `μ = 0` is the
/// refined pseudo-Ryan condition.
pub fn pseudo_ryan_refined_identity(a: &ShapeOperator, sf: &SpaceForm) -> f64 {
    let ShapeOperator { alpha, beta, lambda, nu, .. } = *a;
    let b2 = beta * beta;
    b2 * nu * nu + (4.0 * sf.c + lambda * nu) * (alpha * (lambda - nu) - b2)
}

/// Max absolute `W⊥`-component of `(R(X,Y)·S)X` and `(R(X,Y)·S)Y`, where
/// `R(X,Y)·S = R∘S − S∘R`, built from [`gauss_curvature`] and the closed-form
/// [`ricci`] matrix.
pub fn pseudo_ryan_oracle_residual(a: &ShapeOperator, sf: &SpaceForm) -> f64 {
    let r = gauss_curvature(a, sf, &frame_vector(X), &frame_vector(Y));
    let s = ricci(a, sf, Mode::ClosedForm);
    let action = r * s - s * r;
    [(X, X), (Y, X), (X, Y), (Y, Y)]
        .iter()
        .map(|&(i, j)| action[(i, j)].abs())
        .fold(0.0, f64::max)
}

pub fn pseudo_ryan(a: &ShapeOperator, sf: &SpaceForm, tol: f64) -> PseudoRyanReport {
    let scale = residual_scale(a);
    let raw_residuals = pseudo_ryan_raw_residuals(a, sf);
    let raw = raw_residuals[0].abs().max(raw_residuals[1].abs()) / scale;
    let refined = a.mu.abs().max(pseudo_ryan_refined_identity(a, sf).abs());
    let oracle = pseudo_ryan_oracle_residual(a, sf) / scale;
    PseudoRyanReport {
        raw_residuals,
        raw: Verdict::within(raw, tol),
        refined: Verdict::within(refined, tol),
        oracle: Verdict::within(oracle, tol),
    }
}

/// Outcome of scanning `ρ*` over sampled points of one hypersurface. The
/// verdict only certifies constancy along the supplied samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarEinsteinScan {
    pub constant_along_samples: bool,
    pub spread: f64,
    pub min_rho_star: f64,
    pub max_rho_star: f64,
}

/// At `n = 2` the `W⊥`-proportionality of `S*` holds at every point, so the
/// *-Einstein condition reduces to constancy of `ρ*`.
pub fn star_einstein_scan(
    samples: &[ShapeOperator],
    sf: &SpaceForm,
    tol: f64,
) -> Result<StarEinsteinScan> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let (lo, hi) = samples
        .iter()
        .map(|a| 2.0 * star_scalar_half(a, sf))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let spread = hi - lo;
    Ok(StarEinsteinScan {
        constant_along_samples: spread <= tol,
        spread,
        min_rho_star: lo,
        max_rho_star: hi,
    })
}

/// Pointwise pseudo-Einstein criterion for a Hopf point: `α = 0`, or the two
/// principal curvatures on `W⊥` coincide.
pub fn pseudo_einstein_hopf(a: &ShapeOperator, _sf: &SpaceForm, tol: f64) -> Result<bool> {
    if a.beta.abs() > tol {
        return Err(Error::NotHopf { beta: a.beta });
    }
    let (k1, k2) = wperp_principal_curvatures(a);
    Ok(a.alpha.abs() <= tol || (k1 - k2).abs() <= tol)
}

/// `A W⊥ ⊆ span W` with `β` bounded away from zero.
pub fn is_ruled(a: &ShapeOperator, tol: f64) -> bool {
    a.lambda.abs() <= tol && a.mu.abs() <= tol && a.nu.abs() <= tol && a.beta.abs() > tol
}

/// Residual of `β²(ν²−4c) = 4cαν` (case `μ = λ = 0`).
pub fn case_i_residual(a: &ShapeOperator, sf: &SpaceForm) -> f64 {
    let c = sf.c;
    a.beta * a.beta * (a.nu * a.nu - 4.0 * c) - 4.0 * c * a.alpha * a.nu
}

/// Residual of `β²ν² = (4c−σ)(α(ν + σ/ν) + β²)` (case `μ = 0`, `σ = −λν ≠ 0`).
pub fn case_ii_residual(a: &ShapeOperator, sf: &SpaceForm, sigma: f64) -> Result<f64> {
    if a.nu == 0.0 {
        return Err(Error::Inadmissible("case (ii) requires nu != 0".into()));
    }
    if sigma == 4.0 * sf.c {
        return Err(Error::Inadmissible("sigma = 4c forces nu = 0 in case (ii)".into()));
    }
    let b2 = a.beta * a.beta;
    let rhs = (4.0 * sf.c - sigma) * (a.alpha * (a.nu + sigma / a.nu) + b2);
    Ok(b2 * a.nu * a.nu - rhs)
}

/// Both case residuals; fails when case (ii) is inadmissible.
pub fn case_conditions(a: &ShapeOperator, sf: &SpaceForm, sigma: f64) -> Result<(f64, f64)> {
    Ok((case_i_residual(a, sf), case_ii_residual(a, sf, sigma)?))
}

/// Every predicate at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub shape: ShapeOperator,
    pub c: f64,
    pub tol: f64,
    pub hopf: bool,
    pub ruled: bool,
    pub pseudo_ryan: PseudoRyanReport,
    /// Only evaluated at Hopf points.
    pub pseudo_einstein: Option<bool>,
    pub star_scalar_half: f64,
    pub case_i_residual: f64,
    /// `σ = −λν` is used; `None` when case (ii) is inadmissible at this point.
    pub sigma: f64,
    pub case_ii_residual: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn classify_point(a: &ShapeOperator, sf: &SpaceForm, tol: f64) -> ConditionReport {
    let hopf = a.beta.abs() <= tol;
    let mut warnings = Vec::new();
    if a.rank(tol) <= 1 {
        warnings.push("rank A <= 1: not the shape operator of a hypersurface".to_string());
    }
    let sigma = -a.lambda * a.nu;
    ConditionReport {
        shape: *a,
        c: sf.c,
        tol,
        hopf,
        ruled: is_ruled(a, tol),
        pseudo_ryan: pseudo_ryan(a, sf, tol),
        pseudo_einstein: if hopf { pseudo_einstein_hopf(a, sf, tol).ok() } else { None },
        star_scalar_half: star_scalar_half(a, sf),
        case_i_residual: case_i_residual(a, sf),
        sigma,
        case_ii_residual: case_ii_residual(a, sf, sigma).ok(),
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{partner_curvature, DEFAULT_TOL};

    fn sf(c: f64) -> SpaceForm {
        SpaceForm::new(2, c).unwrap()
    }

    #[test]
    fn hopf_equal_curvatures_is_pseudo_ryan() {
        let a = ShapeOperator::hopf(0.8, 1.3, 1.3);
        let r = pseudo_ryan(&a, &sf(1.0), DEFAULT_TOL);
        assert_eq!(r.raw_residuals, [0.0, 0.0]);
        assert!(r.raw.holds && r.refined.holds && r.oracle.holds);
    }

    #[test]
    fn ruled_is_never_pseudo_ryan() {
        for alpha in [-1.0, 0.0, 2.5] {
            let r = pseudo_ryan(&ShapeOperator::new(alpha, 1.0, 0.0, 0.0, 0.0), &sf(1.0), DEFAULT_TOL);
            assert!(!r.refined.holds);
            assert_eq!(r.refined.residual, 4.0);
            assert!(!r.oracle.holds);
        }
    }

    #[test]
    fn non_hopf_seed_point_is_pseudo_ryan() {
        let a = ShapeOperator::new(1.5, 1.0, 2.0, 0.0, 1.0);
        let s = sf(-1.0);
        // both sides of the second identity equal -1
        let k = 4.0 * s.c + a.lambda * a.nu;
        assert_eq!(a.beta.powi(2) * (a.mu.powi(2) - a.nu.powi(2)), -1.0);
        assert_eq!(k * (a.alpha * (a.lambda - a.nu) - a.beta.powi(2)), -1.0);
        let r = pseudo_ryan(&a, &s, DEFAULT_TOL);
        assert_eq!(r.raw_residuals, [0.0, 0.0]);
        assert!(r.refined.holds && r.oracle.holds);
    }

    #[test]
    fn oracle_entries_are_multiples_of_raw_residuals() {
        let s = sf(-0.7);
        let a = ShapeOperator::new(0.3, -1.1, 0.8, 0.45, -1.6);
        let [r1, r2] = pseudo_ryan_raw_residuals(&a, &s);
        let o = pseudo_ryan_oracle_residual(&a, &s);
        assert!((o - (2.0 * r1.abs()).max(r2.abs())).abs() < 1e-13);
    }

    #[test]
    fn star_einstein_scan_cases() {
        let s = sf(1.0);
        let a = ShapeOperator::new(0.2, 0.7, 0.1, 0.0, 0.4);
        let scan = star_einstein_scan(&[a, a, a], &s, DEFAULT_TOL).unwrap();
        assert!(scan.constant_along_samples && scan.spread == 0.0);
        let ruled: Vec<_> = (1..6).map(|k| ShapeOperator::new(0.3, k as f64, 0.0, 0.0, 0.0)).collect();
        let scan = star_einstein_scan(&ruled, &s, DEFAULT_TOL).unwrap();
        assert!(scan.constant_along_samples && scan.min_rho_star == 8.0);
        let varying = [ShapeOperator::new(0.0, 1.0, 1.0, 0.0, 1.0), ShapeOperator::new(0.0, 1.0, 2.0, 0.0, 1.0)];
        assert!(!star_einstein_scan(&varying, &s, DEFAULT_TOL).unwrap().constant_along_samples);
        assert_eq!(star_einstein_scan(&[], &s, DEFAULT_TOL), Err(Error::EmptySamples));
    }

    #[test]
    fn pseudo_einstein_hopf_cases() {
        let s = sf(1.0);
        assert!(pseudo_einstein_hopf(&ShapeOperator::hopf(0.0, 1.0, 1.0), &s, DEFAULT_TOL).unwrap());
        let root = 1.0 + 2f64.sqrt();
        assert!((root * root - 2.0 * root - 1.0).abs() < 1e-14);
        assert!(pseudo_einstein_hopf(&ShapeOperator::hopf(2.0, root, root), &s, DEFAULT_TOL).unwrap());
        let nu = partner_curvature(2.0, 2.0, &s).unwrap();
        assert_eq!(nu, 3.0);
        assert!(!pseudo_einstein_hopf(&ShapeOperator::hopf(2.0, 2.0, nu), &s, DEFAULT_TOL).unwrap());
        let off = ShapeOperator::new(2.0, 0.0, 1.0, 0.5, 3.0);
        assert!(!pseudo_einstein_hopf(&off, &s, DEFAULT_TOL).unwrap());
        assert!(matches!(
            pseudo_einstein_hopf(&ShapeOperator::new(1.0, 0.5, 1.0, 0.0, 1.0), &s, DEFAULT_TOL),
            Err(Error::NotHopf { .. })
        ));
    }

    #[test]
    fn ruled_predicate() {
        assert!(is_ruled(&ShapeOperator::new(0.4, 1.0, 0.0, 0.0, 0.0), DEFAULT_TOL));
        assert!(!is_ruled(&ShapeOperator::hopf(0.4, 0.0, 0.0), DEFAULT_TOL));
        assert!(is_ruled(&ShapeOperator::new(0.4, 1.0, 0.0, 1e-12, 0.0), 1e-9));
    }

    #[test]
    fn case_residuals() {
        let s = sf(1.0);
        for beta in [0.3, 1.0, 1.7] {
            let a = ShapeOperator::new(0.0, beta, 0.0, 0.0, 2.0);
            assert_eq!(case_i_residual(&a, &s), 0.0);
        }
        let a = ShapeOperator::new(0.5, 1.0, 0.2, 0.0, 1.0);
        assert!(case_ii_residual(&a, &s, 4.0).is_err());
        assert!(case_ii_residual(&ShapeOperator::new(0.5, 1.0, 0.2, 0.0, 0.0), &s, 1.0).is_err());
        let s = sf(-1.0);
        let a = ShapeOperator::new(0.9, 1.3, 2.0, 0.0, 1.0);
        let sigma = -a.lambda * a.nu;
        let (_, ii) = case_conditions(&a, &s, sigma).unwrap();
        assert!((ii - pseudo_ryan_refined_identity(&a, &s)).abs() < 1e-13);
    }

    #[test]
    fn classify_examples() {
        let horo = classify_point(&ShapeOperator::hopf(2.0, 1.0, 1.0), &sf(-1.0), DEFAULT_TOL);
        assert!(horo.hopf && horo.pseudo_ryan.oracle.holds && !horo.ruled);
        assert_eq!(horo.pseudo_einstein, Some(true));
        assert!(horo.warnings.is_empty());
        let ruled = classify_point(&ShapeOperator::new(0.1, 0.9, 0.0, 0.0, 0.0), &sf(1.0), DEFAULT_TOL);
        assert!(ruled.ruled && !ruled.pseudo_ryan.refined.holds);
        assert_eq!(ruled.star_scalar_half, 4.0);
        assert_eq!(ruled.case_ii_residual, None);
        let zero = classify_point(&ShapeOperator::default(), &sf(1.0), DEFAULT_TOL);
        assert_eq!(zero.warnings.len(), 1);
        assert!(zero.hopf);
    }
}
