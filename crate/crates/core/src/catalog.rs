//! Scalar models of the homogeneous Hopf hypersurfaces of types A0, A1, A2
//! and B, parameterized by the Hopf principal curvature rather than by tube
//! radius.
//!
//! Principal curvatures on `W⊥` come in φ-pairs `(λ, ν)` with
//! `λν = ((λ+ν)/2)α + c`. Type A spaces are φ-invariant, so each curvature is
//! paired with itself and solves `λ² = αλ + c`; type B pairs two distinct
//! curvatures with `λν = −c`. On a φ-pair, `S*` acts as `2nc + λν`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ShapeOperator, SpaceForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomogeneousKind {
    A0,
    A1,
    A2,
    B,
}

impl std::str::FromStr for HomogeneousKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A0" => Ok(Self::A0),
            "A1" => Ok(Self::A1),
            "A2" => Ok(Self::A2),
            "B" => Ok(Self::B),
            other => Err(Error::Parse(format!("unknown homogeneous type {other:?}"))),
        }
    }
}

/// Multiplicity of a principal curvature on `W⊥`. Type A2 splits `W⊥` as
/// `2k + 2(n−1−k)` with `k` not fixed by the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Exact(usize),
    Symbolic(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvature {
    pub value: f64,
    pub multiplicity: Multiplicity,
    /// The curvature carried by φ of this principal space.
    pub phi_partner: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousEntry {
    pub kind: HomogeneousKind,
    pub sf: SpaceForm,
    pub alpha: f64,
    pub wperp_curvatures: Vec<PrincipalCurvature>,
    pub star_einstein: bool,
    /// `None` for A2 with `α ≠ 0`, where `ρ*` depends on the split `k`.
    pub rho_star: Option<f64>,
}

impl HomogeneousEntry {
    /// One `n = 2` shape operator per φ-pair: `diag(α, λ, ν)` restricted to
    /// `span{W, V, φV}`.
    pub fn local_shape_operators(&self) -> Vec<ShapeOperator> {
        self.wperp_curvatures
            .iter()
            .map(|k| ShapeOperator::hopf(self.alpha, k.value, k.phi_partner))
            .collect()
    }
}

const ALPHA_ZERO_TOL: f64 = 1e-12;

/// Roots of `λ² − αλ − c = 0`, larger first.
fn type_a_roots(alpha: f64, c: f64) -> Result<(f64, f64)> {
    let disc = alpha * alpha + 4.0 * c;
    if disc <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda^2 = alpha lambda + c has no distinct real roots (alpha^2 + 4c = {disc})"
        )));
    }
    let s = disc.sqrt();
    Ok(((alpha + s) / 2.0, (alpha - s) / 2.0))
}

pub fn make_entry(kind: HomogeneousKind, alpha: f64, sf: &SpaceForm, n: usize) -> Result<HomogeneousEntry> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 2")));
    }
    let sf = SpaceForm { n, ..*sf };
    let c = sf.c;
    let nc = n as f64;
    let wperp = 2 * (n - 1);
    let pair_rho = |product: f64| 2.0 * (nc - 1.0) * (2.0 * nc * c + product);

    let (curvatures, star_einstein, rho_star) = match kind {
        HomogeneousKind::A0 => {
            let defect = alpha * alpha + 4.0 * c;
            if defect.abs() > 1e-12 * (1.0 + alpha * alpha) {
                return Err(Error::InvalidParameter(format!(
                    "type A0 requires alpha^2 + 4c = 0 (got {defect})"
                )));
            }
            let k = alpha / 2.0;
            let pc = PrincipalCurvature { value: k, multiplicity: Multiplicity::Exact(wperp), phi_partner: k };
            (vec![pc], true, Some(pair_rho(k * k)))
        }
        HomogeneousKind::A1 => {
            // the larger root is used; the smaller root with -alpha describes
            // the same hypersurface with the opposite normal
            let (k, _) = type_a_roots(alpha, c)?;
            let pc = PrincipalCurvature { value: k, multiplicity: Multiplicity::Exact(wperp), phi_partner: k };
            (vec![pc], true, Some(pair_rho(k * k)))
        }
        HomogeneousKind::A2 => {
            if n < 3 {
                return Err(Error::InvalidParameter("type A2 requires n >= 3".into()));
            }
            let (k1, k2) = type_a_roots(alpha, c)?;
            let curv = vec![
                PrincipalCurvature { value: k1, multiplicity: Multiplicity::Symbolic("2k".into()), phi_partner: k1 },
                PrincipalCurvature {
                    value: k2,
                    multiplicity: Multiplicity::Symbolic("2(n-1-k)".into()),
                    phi_partner: k2,
                },
            ];
            // *-Einstein needs k1² = k2², i.e. alpha = 0
            let einstein = alpha.abs() <= ALPHA_ZERO_TOL;
            (curv, einstein, if einstein { Some(pair_rho(k1 * k1)) } else { None })
        }
        HomogeneousKind::B => {
            if alpha == 0.0 {
                return Err(Error::InvalidParameter("type B requires alpha != 0".into()));
            }
            // λν = −c and λ + ν = −4c/α
            let sum = -4.0 * c / alpha;
            let disc = sum * sum + 4.0 * c;
            if disc <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "type B curvatures are not real for alpha = {alpha}, c = {c}"
                )));
            }
            let s = disc.sqrt();
            let (k1, k2) = ((sum + s) / 2.0, (sum - s) / 2.0);
            let curv = vec![
                PrincipalCurvature { value: k1, multiplicity: Multiplicity::Exact(n - 1), phi_partner: k2 },
                PrincipalCurvature { value: k2, multiplicity: Multiplicity::Exact(n - 1), phi_partner: k1 },
            ];
            (curv, true, Some(pair_rho(-c)))
        }
    };

    Ok(HomogeneousEntry { kind, sf, alpha, wperp_curvatures: curvatures, star_einstein, rho_star })
}

/// Types C, D and E are never *-Einstein.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExceptionalKind {
    C,
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExceptionalStatus {
    pub kind: ExceptionalKind,
    pub star_einstein: bool,
    pub reason: &'static str,
}

pub fn exceptional_status(kind: ExceptionalKind) -> ExceptionalStatus {
    ExceptionalStatus {
        kind,
        star_einstein: false,
        reason: "alpha = 0 would leave a principal curvature undefined; with alpha != 0 the \
                 phi-invariant curvatures l1, l3 solve l^2 = alpha l + c, so l1^2 != l3^2",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hopf_residual, star_scalar};

    #[test]
    fn horosphere() {
        let r = 1.5;
        let sf = SpaceForm::hyperbolic(2, r).unwrap();
        let e = make_entry(HomogeneousKind::A0, 2.0 / r, &sf, 2).unwrap();
        assert_eq!(e.wperp_curvatures.len(), 1);
        assert!((e.wperp_curvatures[0].value - 1.0 / r).abs() < 1e-15);
        assert!(e.star_einstein);
        assert!((e.rho_star.unwrap() + 6.0 / (r * r)).abs() < 1e-12);
        assert!(make_entry(HomogeneousKind::A0, 1.0, &sf, 2).is_err());
    }

    #[test]
    fn type_b_example() {
        let sf = SpaceForm::new(2, 1.0).unwrap();
        let e = make_entry(HomogeneousKind::B, -4.0, &sf, 2).unwrap();
        let (l1, l2) = (e.wperp_curvatures[0].value, e.wperp_curvatures[1].value);
        assert!((l1 * l2 + 1.0).abs() < 1e-14);
        assert!((l1 - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert_eq!(e.rho_star, Some(6.0));
        let a = e.local_shape_operators()[0];
        assert!(hopf_residual(&a, &sf).residual < 1e-13);
        assert!((star_scalar(&a, &sf) - 6.0).abs() < 1e-13);
    }

    #[test]
    fn a2_star_einstein_iff_alpha_zero() {
        let cp = SpaceForm::new(3, 1.0).unwrap();
        assert!(!make_entry(HomogeneousKind::A2, 0.7, &cp, 3).unwrap().star_einstein);
        let e = make_entry(HomogeneousKind::A2, 0.0, &cp, 3).unwrap();
        assert!(e.star_einstein);
        assert_eq!(e.rho_star, Some(2.0 * 2.0 * 7.0));
        // alpha = 0 in CH^n has no real curvatures
        let ch = SpaceForm::new(3, -1.0).unwrap();
        assert!(make_entry(HomogeneousKind::A2, 0.0, &ch, 3).is_err());
        assert!(make_entry(HomogeneousKind::A2, 0.0, &cp, 2).is_err());
    }

    #[test]
    fn exceptional_types() {
        for k in [ExceptionalKind::C, ExceptionalKind::D, ExceptionalKind::E] {
            assert!(!exceptional_status(k).star_einstein);
        }
    }
}
