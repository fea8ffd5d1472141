//! Frame conventions and pointwise curvature of a real hypersurface in a
//! complex space form of complex dimension two.
//!
//! Tangent operators are 3×3 matrices in the orthonormal frame `(W, X, Y)`
//! with `Y = φX`, where `W` is the structure vector. Column `j` of a matrix is
//! the image of the `j`-th frame vector. The exterior-system code in
//! [`crate::eds`] uses the ordering `(e₁, e₂, e₃) = (X, Y, W)` instead; the
//! permutation is applied once, in [`crate::eds::coframe`].
//!
//! Every routine that works with frame matrices assumes `n = 2`.

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for oracle comparisons and predicate evaluation.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A 3×3 operator on the tangent space in the `(W, X, Y)` basis.
pub type TangentOperator = Matrix3<f64>;

/// A tangent vector of the ambient space in a unitary frame `(e₁, e₂, e₃, e₄)`
/// with `e₂ = Je₁` and `e₄ = Je₃`.
pub type AmbientVector = Vector4<f64>;

/// Index of `W` in the tangent frame.
pub const W: usize = 0;
/// Index of `X` in the tangent frame.
pub const X: usize = 1;
/// Index of `Y = φX` in the tangent frame.
pub const Y: usize = 2;

/// Ambient constants: complex dimension `n`, holomorphic sectional curvature
/// `4c`, and the scale `r` with `c = ±1/r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    pub n: usize,
    pub c: f64,
    pub r: f64,
}

impl SpaceForm {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpaceForm(format!("n = {n} must be at least 2")));
        }
        if !c.is_finite() || c == 0.0 {
            return Err(Error::InvalidSpaceForm(format!("c = {c} must be finite and nonzero")));
        }
        Ok(SpaceForm { n, c, r: 1.0 / c.abs().sqrt() })
    }

    /// `CPⁿ` with `c = 1/r²`.
    pub fn projective(n: usize, r: f64) -> Result<Self> {
        Self::from_radius(n, r, 1.0)
    }

    /// `CHⁿ` with `c = −1/r²`.
    pub fn hyperbolic(n: usize, r: f64) -> Result<Self> {
        Self::from_radius(n, r, -1.0)
    }

    fn from_radius(n: usize, r: f64, sign: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidSpaceForm(format!("r = {r} must be positive")));
        }
        let mut sf = Self::new(n, sign / (r * r))?;
        sf.r = r;
        Ok(sf)
    }

    pub fn is_projective(&self) -> bool {
        self.c > 0.0
    }

    pub fn sign(&self) -> f64 {
        self.c.signum()
    }
}

/// The structure tensor φ in the `(W, X, Y)` basis: `φW = 0, φX = Y, φY = −X`.
pub fn phi() -> Matrix3<f64> {
    Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0)
}

pub fn frame_vector(i: usize) -> Vector3<f64> {
    let mut v = Vector3::zeros();
    v[i] = 1.0;
    v
}

/// The complex structure on a unitary frame: `Je₁ = e₂, Je₂ = −e₁, Je₃ = e₄, Je₄ = −e₃`.
pub fn ambient_j() -> Matrix4<f64> {
    Matrix4::new(
        0.0, -1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0,
    )
}

/// The skew operator `(u ∧ v)z = ⟨v,z⟩u − ⟨u,z⟩v`, as the matrix `u vᵀ − v uᵀ`.
pub fn wedge3(u: &Vector3<f64>, v: &Vector3<f64>) -> Matrix3<f64> {
    u * v.transpose() - v * u.transpose()
}

fn wedge4(u: &Vector4<f64>, v: &Vector4<f64>) -> Matrix4<f64> {
    u * v.transpose() - v * u.transpose()
}

/// Ambient curvature `R̃(X,Y)Z = c(X∧Y + JX∧JY + 2⟨X,JY⟩J)Z`.
pub fn ambient_curvature(
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    sf: &SpaceForm,
) -> AmbientVector {
    let j = ambient_j();
    let jx = j * x;
    let jy = j * y;
    let op = wedge4(x, y) + wedge4(&jx, &jy) + j * (2.0 * x.dot(&jy));
    (op * z) * sf.c
}

/// Shape operator components in the `(W, X, Y)` frame:
///
/// ```text
/// A = | α β 0 |
///     | β λ μ |
///     | 0 μ ν |
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ShapeOperator {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
}

impl ShapeOperator {
    pub fn new(alpha: f64, beta: f64, lambda: f64, mu: f64, nu: f64) -> Self {
        ShapeOperator { alpha, beta, lambda, mu, nu }
    }

    /// Hopf operator `diag(α, λ, ν)` with principal `X` and `Y`.
    pub fn hopf(alpha: f64, lambda: f64, nu: f64) -> Self {
        Self::new(alpha, 0.0, lambda, 0.0, nu)
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.alpha, self.beta, 0.0, //
            self.beta, self.lambda, self.mu, //
            0.0, self.mu, self.nu,
        )
    }

    /// `m = trace A`.
    pub fn trace(&self) -> f64 {
        self.alpha + self.lambda + self.nu
    }

    /// Squared Frobenius norm of the matrix.
    pub fn norm_squared(&self) -> f64 {
        self.matrix().norm_squared()
    }

    pub fn components(&self) -> [f64; 5] {
        [self.alpha, self.beta, self.lambda, self.mu, self.nu]
    }

    /// Numerical rank of `A` using singular values relative to `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let sv = self.matrix().singular_values();
        let scale = sv.max().max(1.0);
        sv.iter().filter(|s| **s > tol * scale).count()
    }
}

/// Which route a dual-route computation takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// The closed-form matrix expression.
    ClosedForm,
    /// Brute-force trace over the orthonormal frame using [`gauss_curvature`].
    TraceOracle,
}

/// Intrinsic curvature operator `R(X,Y) = AX∧AY + c(X∧Y + φX∧φY + 2⟨X,φY⟩φ)`.
pub fn gauss_curvature(
    a: &ShapeOperator,
    sf: &SpaceForm,
    x: &Vector3<f64>,
    y: &Vector3<f64>,
) -> TangentOperator {
    let am = a.matrix();
    let p = phi();
    let ambient = wedge3(x, y) + wedge3(&(p * x), &(p * y)) + p * (2.0 * x.dot(&(p * y)));
    wedge3(&(am * x), &(am * y)) + ambient * sf.c
}

/// Ricci tensor. The closed form is `SX = 5cX − 3c⟨X,W⟩W + mAX − A²X`; the
/// oracle evaluates `⟨SX, Y⟩ = trace{Z ↦ R(Z,X)Y}` entry by entry.
pub fn ricci(a: &ShapeOperator, sf: &SpaceForm, mode: Mode) -> TangentOperator {
    match mode {
        Mode::ClosedForm => {
            let am = a.matrix();
            let w = frame_vector(W);
            Matrix3::identity() * (5.0 * sf.c) - (w * w.transpose()) * (3.0 * sf.c) + am * a.trace()
                - am * am
        }
        Mode::TraceOracle => Matrix3::from_fn(|row, col| {
            let xc = frame_vector(col);
            let yr = frame_vector(row);
            (0..3)
                .map(|k| {
                    let ek = frame_vector(k);
                    (gauss_curvature(a, sf, &ek, &xc) * yr).dot(&ek)
                })
                .sum()
        }),
    }
}

/// `(φA)²`.
pub fn phi_a_squared(a: &ShapeOperator) -> Matrix3<f64> {
    let pa = phi() * a.matrix();
    pa * pa
}

/// *-Ricci tensor. The closed form is `S* = −(4cφ² + (φA)²)`; the oracle
/// evaluates `⟨S*X, Y⟩ = ½ trace(φ ∘ R(X, φY))`.
pub fn star_ricci(a: &ShapeOperator, sf: &SpaceForm, mode: Mode) -> TangentOperator {
    let p = phi();
    match mode {
        Mode::ClosedForm => -((p * p) * (4.0 * sf.c) + phi_a_squared(a)),
        Mode::TraceOracle => Matrix3::from_fn(|row, col| {
            let xc = frame_vector(col);
            let yr = frame_vector(row);
            0.5 * (p * gauss_curvature(a, sf, &xc, &(p * yr))).trace()
        }),
    }
}

/// *-scalar curvature `ρ* = 2(4c + λν − μ²)`.
pub fn star_scalar(a: &ShapeOperator, sf: &SpaceForm) -> f64 {
    2.0 * star_scalar_half(a, sf)
}

/// `ρ*/2 = 4c + λν − μ²`, the common eigenvalue of `S*` on `W⊥`.
pub fn star_scalar_half(a: &ShapeOperator, sf: &SpaceForm) -> f64 {
    4.0 * sf.c + a.lambda * a.nu - a.mu * a.mu
}

/// Result of [`hopf_residual`]. The residual only carries meaning when the
/// operator is Hopf (`β = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfResidual {
    pub residual: f64,
    pub hopf: bool,
}

/// Frobenius norm of `AφA − (α/2)(Aφ + φA) − cφ`.
pub fn hopf_residual(a: &ShapeOperator, sf: &SpaceForm) -> HopfResidual {
    let am = a.matrix();
    let p = phi();
    let m = am * p * am - (am * p + p * am) * (a.alpha / 2.0) - p * sf.c;
    HopfResidual { residual: m.norm(), hopf: a.beta == 0.0 }
}

/// The principal curvature `ν = (λα/2 + c)/(λ − α/2)` carried by `φX` when `X`
/// is principal with curvature `λ` on a Hopf hypersurface.
pub fn partner_curvature(lambda: f64, alpha: f64, sf: &SpaceForm) -> Result<f64> {
    let den = lambda - alpha / 2.0;
    if den.abs() <= 1e-12 * (1.0 + lambda.abs()) {
        return Err(Error::NoPartnerCurvature);
    }
    Ok((lambda * alpha / 2.0 + sf.c) / den)
}

/// `∇_X W = φAX` in frame coordinates.
pub fn nabla_w(a: &ShapeOperator, x: &Vector3<f64>) -> Vector3<f64> {
    phi() * (a.matrix() * x)
}

/// Output of [`canonical_frame`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalFrame {
    pub shape: ShapeOperator,
    /// Rotation angle of the `(X, Y)` plane.
    pub psi: f64,
    /// Set when `AW` has no component in `W⊥`; the frame is then only defined
    /// up to rotation and `ψ = 0` is used.
    pub hopf: bool,
    /// Columns are the new `(W, X, Y)` expressed in the old frame.
    pub rotation: Matrix3<f64>,
}

/// Rotation of the `(X, Y)` plane by `ψ`, keeping `Y = φX`.
pub fn plane_rotation(psi: f64) -> Matrix3<f64> {
    let (s, c) = psi.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Rotates the `(X, Y)` plane so that `AW = αW + βX` with `β ≥ 0`.
///
/// The input must be symmetric with `W` as its first axis. A Hopf input
/// (`|AW − αW| ≤ tol`) is flagged rather than rejected.
pub fn canonical_frame(a_full: &Matrix3<f64>, tol: f64) -> CanonicalFrame {
    let (b1, b2) = (a_full[(X, W)], a_full[(Y, W)]);
    let beta = b1.hypot(b2);
    let hopf = beta <= tol;
    let psi = if hopf { 0.0 } else { b2.atan2(b1) };
    let rot = plane_rotation(psi);
    let m = rot.transpose() * a_full * rot;
    let shape = ShapeOperator {
        alpha: m[(W, W)],
        beta: if hopf { 0.0 } else { beta },
        lambda: m[(X, X)],
        mu: 0.5 * (m[(X, Y)] + m[(Y, X)]),
        nu: m[(Y, Y)],
    };
    CanonicalFrame { shape, psi, hopf, rotation: rot }
}

/// Eigenvalues of the `W⊥` block `[[λ, μ], [μ, ν]]`, in ascending order.
pub fn wperp_principal_curvatures(a: &ShapeOperator) -> (f64, f64) {
    let e = SymmetricEigen::new(Matrix2::new(a.lambda, a.mu, a.mu, a.nu)).eigenvalues;
    (e[0].min(e[1]), e[0].max(e[1]))
}
