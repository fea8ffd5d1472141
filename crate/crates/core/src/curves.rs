//! Framed curves in `CP²` and `CH²` as trajectories in the group of 3×3
//! complex matrices preserving `J = diag(1, 1, ±1)`.
//!
//! Column convention for a frame `g`: column 0 is the unit tangent `T`,
//! column 1 the unit normal `N`, and column 2 the position lift (timelike
//! when `J = diag(1, 1, −1)`). Multiplication by `i` on columns 0 and 1 is
//! the complex structure, so `JT` and `JN` are `iT` and `iN`.

use std::io::Write;

use nalgebra::{Complex, Matrix2, Matrix3, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SpaceForm;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = Matrix3<C64>;

const I: C64 = C64::new(0.0, 1.0);

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The diagonal of the invariant Hermitian form: `(1, 1, 1)` for `CP²`,
/// `(1, 1, −1)` for `CH²`.
pub fn signature(sf: &SpaceForm) -> [f64; 3] {
    if sf.is_projective() { [1.0, 1.0, 1.0] } else { [1.0, 1.0, -1.0] }
}

fn signature_matrix(sig: &[f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::Vector3::new(re(sig[0]), re(sig[1]), re(sig[2])))
}

/// Holomorphic curvature `k0`, transverse curvature `k1` and torsion `tau`
/// as functions of arclength.
pub struct FramedCurveSpec<'a> {
    pub k0: Box<dyn Fn(f64) -> f64 + 'a>,
    pub k1: Box<dyn Fn(f64) -> f64 + 'a>,
    pub tau: Box<dyn Fn(f64) -> f64 + 'a>,
    pub sf: SpaceForm,
}

impl<'a> FramedCurveSpec<'a> {
    pub fn new(
        k0: impl Fn(f64) -> f64 + 'a,
        k1: impl Fn(f64) -> f64 + 'a,
        tau: impl Fn(f64) -> f64 + 'a,
        sf: SpaceForm,
    ) -> Self {
        FramedCurveSpec { k0: Box::new(k0), k1: Box::new(k1), tau: Box::new(tau), sf }
    }

    pub fn constant(k0: f64, k1: f64, tau: f64, sf: SpaceForm) -> Self {
        Self::new(move |_| k0, move |_| k1, move |_| tau, sf)
    }

    pub fn geodesic(sf: SpaceForm) -> Self {
        Self::constant(0.0, 0.0, 0.0, sf)
    }

    pub fn generator_at(&self, s: f64) -> ComplexMatrix {
        frenet_generator((self.k0)(s), (self.k1)(s), (self.tau)(s), &self.sf)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupFrame {
    pub g: ComplexMatrix,
    pub signature: [f64; 3],
}

impl GroupFrame {
    pub fn identity(sf: &SpaceForm) -> Self {
        GroupFrame { g: ComplexMatrix::identity(), signature: signature(sf) }
    }

    pub fn tangent(&self) -> nalgebra::Vector3<C64> {
        self.g.column(0).into()
    }

    pub fn normal(&self) -> nalgebra::Vector3<C64> {
        self.g.column(1).into()
    }

    pub fn position(&self) -> nalgebra::Vector3<C64> {
        self.g.column(2).into()
    }

    /// `max |(g*Jg − J)_ij|`.
    pub fn pseudo_unitarity_residual(&self) -> f64 {
        let j = signature_matrix(&self.signature);
        (self.g.adjoint() * j * self.g - j).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `g⁻¹ = J g* J` on the group.
    fn inverse(&self) -> ComplexMatrix {
        let j = signature_matrix(&self.signature);
        j * self.g.adjoint() * j
    }

    /// Newton–Schulz iteration for the `J`-polar factor, which fixes the
    /// group and converges quadratically near it.
    fn project(&mut self) {
        let three = ComplexMatrix::identity() * re(3.0);
        for _ in 0..8 {
            if self.pseudo_unitarity_residual() < 1e-15 {
                break;
            }
            let k = self.inverse() * self.g;
            self.g = self.g * (three - k) * re(0.5);
        }
    }
}

/// Lie-algebra element for unit speed along `T` with `T′ = k0 JT + k1 N`,
/// `N′ = −k1 T + tau JN`.
pub fn frenet_generator(k0: f64, k1: f64, tau: f64, sf: &SpaceForm) -> ComplexMatrix {
    let sig = signature(sf);
    let inv_r = 1.0 / sf.r;
    let zero = re(0.0);
    ComplexMatrix::new(
        I * k0,
        re(-k1),
        re(inv_r),
        re(k1),
        I * tau,
        zero,
        re(-sig[2] * inv_r),
        zero,
        zero,
    )
}

/// `max |(M*J + JM)_ij|`; zero on the algebra.
pub fn algebra_residual(m: &ComplexMatrix, sf: &SpaceForm) -> f64 {
    let j = signature_matrix(&signature(sf));
    (m.adjoint() * j + j * m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// RK4 for `g′ = g M(s)` with re-projection onto the group after every step.
pub fn integrate_frame(g0: &GroupFrame, spec: &FramedCurveSpec, t_grid: &[f64]) -> Result<Vec<GroupFrame>> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::BadGrid { min: 2 });
    }
    if g0.pseudo_unitarity_residual() > 1e-9 {
        return Err(Error::InvalidParameter("initial frame is not in the isometry group".into()));
    }
    let mut frames = Vec::with_capacity(t_grid.len());
    let mut cur = *g0;
    frames.push(cur);
    for w in t_grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let hc = re(h);
        let g = cur.g;
        let m1 = spec.generator_at(t);
        let m2 = spec.generator_at(t + h / 2.0);
        let m3 = spec.generator_at(t + h);
        let k1 = g * m1;
        let k2 = (g + k1 * hc * re(0.5)) * m2;
        let k3 = (g + k2 * hc * re(0.5)) * m2;
        let k4 = (g + k3 * hc) * m3;
        cur.g = g + (k1 + k2 * re(2.0) + k3 * re(2.0) + k4) * (hc / re(6.0));
        if cur.g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { t: w[1] });
        }
        cur.project();
        frames.push(cur);
    }
    Ok(frames)
}

/// Frenet invariants read back from sampled frames, with the largest
/// deviation of `g⁻¹g′` from the Frenet form at each sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrenetSamples {
    pub k0: Vec<f64>,
    pub k1: Vec<f64>,
    pub tau: Vec<f64>,
    pub residual: Vec<f64>,
}

impl FrenetSamples {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }
}

/// Fourth-order finite differences on a uniform grid, second order when fewer
/// than five samples are available.
fn derivative(vals: &[ComplexMatrix], h: f64) -> Vec<ComplexMatrix> {
    let n = vals.len();
    let f = |i: usize| vals[i];
    let lin = |terms: &[(f64, usize)], denom: f64| {
        terms.iter().fold(ComplexMatrix::zeros(), |acc, &(w, i)| acc + f(i) * re(w)) * re(1.0 / (denom * h))
    };
    (0..n)
        .map(|i| {
            if n < 5 {
                if i == 0 {
                    lin(&[(-3.0, 0), (4.0, 1), (-1.0, 2)], 2.0)
                } else if i == n - 1 {
                    lin(&[(3.0, n - 1), (-4.0, n - 2), (1.0, n - 3)], 2.0)
                } else {
                    lin(&[(1.0, i + 1), (-1.0, i - 1)], 2.0)
                }
            } else if i == 0 {
                lin(&[(-25.0, 0), (48.0, 1), (-36.0, 2), (16.0, 3), (-3.0, 4)], 12.0)
            } else if i == 1 {
                lin(&[(-3.0, 0), (-10.0, 1), (18.0, 2), (-6.0, 3), (1.0, 4)], 12.0)
            } else if i == n - 2 {
                lin(&[(3.0, n - 1), (10.0, n - 2), (-18.0, n - 3), (6.0, n - 4), (-1.0, n - 5)], 12.0)
            } else if i == n - 1 {
                lin(&[(25.0, n - 1), (-48.0, n - 2), (36.0, n - 3), (-16.0, n - 4), (3.0, n - 5)], 12.0)
            } else {
                lin(&[(-1.0, i + 2), (8.0, i + 1), (-8.0, i - 1), (1.0, i - 2)], 12.0)
            }
        })
        .collect()
}

pub fn extract_frenet(frames: &[GroupFrame], t_grid: &[f64], sf: &SpaceForm) -> Result<FrenetSamples> {
    if frames.len() < 3 || frames.len() != t_grid.len() {
        return Err(Error::BadGrid { min: 3 });
    }
    let h = (t_grid[t_grid.len() - 1] - t_grid[0]) / (t_grid.len() - 1) as f64;
    let uniform = t_grid.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1.0));
    if !(h > 0.0) || !uniform {
        return Err(Error::BadGrid { min: 3 });
    }
    let gs: Vec<_> = frames.iter().map(|f| f.g).collect();
    let dg = derivative(&gs, h);
    let mut out = FrenetSamples { k0: vec![], k1: vec![], tau: vec![], residual: vec![] };
    for (fr, d) in frames.iter().zip(&dg) {
        let m = fr.inverse() * d;
        let (k0, k1, tau) = (m[(0, 0)].im, m[(1, 0)].re, m[(1, 1)].im);
        let expected = frenet_generator(k0, k1, tau, sf);
        out.residual.push((m - expected).iter().map(|z| z.norm()).fold(0.0, f64::max));
        out.k0.push(k0);
        out.k1.push(k1);
        out.tau.push(tau);
    }
    Ok(out)
}

/// How the unitary frame `(T, JT, N, JN)` of a curve is placed in the frame
/// bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lift {
    /// `e1 = T`, `e2 = JT`, `e4 = N`, `e3 = −JN`.
    Hopf,
    /// `e2 = T`, `e1 = −JT`, `e4 = N`, `e3 = −JN`.
    Construction,
}

impl Lift {
    /// Change of holomorphic basis from `(T, N)` to `(e1, e4)`.
    fn basis_change(self) -> Matrix2<C64> {
        match self {
            Lift::Hopf => Matrix2::new(re(1.0), re(0.0), re(0.0), -I),
            Lift::Construction => Matrix2::new(-I, re(0.0), re(0.0), -I),
        }
    }
}

/// Pullbacks per unit arclength of `(ω¹, ω², ω³, ω⁴, ω²₁, ω⁴₁, ω⁴₂, ω⁴₃)`
/// along the lifted curve.
pub fn coframe_pullback(k0: f64, k1: f64, tau: f64, lift: Lift) -> [f64; 8] {
    let d = lift.basis_change();
    let d_inv = d.try_inverse().expect("basis change is unitary");
    let conn = Matrix2::new(I * k0, re(-k1), re(k1), I * tau);
    let c = d_inv * conn * d;
    let vel = d_inv * Vector2::new(re(1.0), re(0.0));
    [
        vel[0].re,
        vel[0].im,
        vel[1].re,
        vel[1].im,
        c[(0, 0)].im,
        c[(1, 0)].im,
        c[(1, 0)].re,
        c[(1, 1)].im,
    ]
}

/// Writes `t` and the real and imaginary parts of every entry of `g`.
pub fn write_frames_csv<W: Write>(frames: &[GroupFrame], t_grid: &[f64], mut out: W) -> Result<()> {
    let mut header = vec!["t".to_string()];
    for i in 0..3 {
        for j in 0..3 {
            header.push(format!("g{i}{j}_re"));
            header.push(format!("g{i}{j}_im"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for (t, f) in t_grid.iter().zip(frames) {
        let mut row = vec![format!("{t:.16e}")];
        for i in 0..3 {
            for j in 0..3 {
                let z = f.g[(i, j)];
                row.push(format!("{:.16e}", z.re));
                row.push(format!("{:.16e}", z.im));
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::uniform_grid;

    fn forms() -> [SpaceForm; 2] {
        [SpaceForm::projective(2, 1.3).unwrap(), SpaceForm::hyperbolic(2, 0.8).unwrap()]
    }

    #[test]
    fn generator_in_algebra() {
        for sf in forms() {
            for (k0, k1, tau) in [(0.0, 0.0, 0.0), (0.3, -1.2, 2.5), (-4.0, 0.1, 0.0)] {
                assert_eq!(algebra_residual(&frenet_generator(k0, k1, tau, &sf), &sf), 0.0);
            }
        }
    }

    #[test]
    fn geodesic_closed_form() {
        let sf = SpaceForm::new(2, 1.0).unwrap();
        let spec = FramedCurveSpec::geodesic(sf);
        let grid = uniform_grid(0.0, 1.0, 0.01).unwrap();
        let frames = integrate_frame(&GroupFrame::identity(&sf), &spec, &grid).unwrap();
        let last = frames.last().unwrap();
        // in CP² with r = 1 the geodesic position is cos s e2 + sin s e0
        assert!((last.position()[2].re - 1f64.cos()).abs() < 1e-9);
        assert!((last.position()[0].re - 1f64.sin()).abs() < 1e-9);
        assert!((last.normal()[1] - re(1.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_k1_round_trip() {
        for sf in forms() {
            let spec = FramedCurveSpec::constant(0.0, 0.7, 0.0, sf);
            let grid = uniform_grid(0.0, 1.0, 1e-3).unwrap();
            let frames = integrate_frame(&GroupFrame::identity(&sf), &spec, &grid).unwrap();
            let fr = extract_frenet(&frames, &grid, &sf).unwrap();
            assert!(fr.k1.iter().all(|k| (k - 0.7).abs() < 1e-6));
            assert!(fr.k0.iter().chain(&fr.tau).all(|k| k.abs() < 1e-6));
            assert!(fr.max_residual() < 1e-6);
        }
    }

    #[test]
    fn few_samples_use_low_order() {
        let sf = SpaceForm::new(2, -1.0).unwrap();
        let spec = FramedCurveSpec::constant(0.2, 0.0, 0.0, sf);
        let grid = [0.0, 1e-3, 2e-3];
        let frames = integrate_frame(&GroupFrame::identity(&sf), &spec, &grid).unwrap();
        let fr = extract_frenet(&frames, &grid, &sf).unwrap();
        assert!(fr.k0.iter().all(|k| (k - 0.2).abs() < 1e-5));
        assert!(extract_frenet(&frames[..2], &grid[..2], &sf).is_err());
    }

    #[test]
    fn lifts() {
        let hopf = coframe_pullback(0.0, 1.4, 0.0, Lift::Hopf);
        assert_eq!(hopf, [1.0, 0.0, 0.0, 0.0, 0.0, 1.4, 0.0, 0.0]);
        let cons = coframe_pullback(0.0, 0.9, 0.0, Lift::Construction);
        assert_eq!(cons[..4], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(cons[4..], [0.0, 0.0, 0.9, 0.0]);
        let with_k0 = coframe_pullback(0.5, 0.0, 0.3, Lift::Construction);
        assert_eq!((with_k0[4], with_k0[7]), (0.5, 0.3));
    }

    #[test]
    fn csv_layout() {
        let sf = SpaceForm::new(2, 1.0).unwrap();
        let frames = vec![GroupFrame::identity(&sf); 2];
        let mut buf = Vec::new();
        write_frames_csv(&frames, &[0.0, 1.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(first.split(',').count(), 19);
        assert_eq!(text.lines().count(), 3);
    }
}
