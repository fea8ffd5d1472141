//! The coframe of the unitary frame bundle, extended by the differentials of
//! fiber coordinates, and exterior differentiation over it.
//!
//! Basis order: `ω¹, ω², ω³, ω⁴, ω²₁, ω⁴₁, ω⁴₂, ω⁴₃`, then `dx₀, dx₁, …`.
//! The remaining connection forms follow from skew-symmetry and
//! `ω³₁ = ω⁴₂`, `ω³₂ = −ω⁴₁`.

use nalgebra::Vector4;

use super::form::DifferentialForm;
use super::jet::{Jet, MAX_COORDS};
use crate::error::Result;
use crate::geometry::{ambient_curvature, SpaceForm};

pub const W1: usize = 0;
pub const W2: usize = 1;
pub const W3: usize = 2;
pub const W4: usize = 3;
pub const W21: usize = 4;
pub const W41: usize = 5;
pub const W42: usize = 6;
pub const W43: usize = 7;
pub const BUNDLE_DIM: usize = 8;

pub const BUNDLE_LABELS: [&str; BUNDLE_DIM] = ["w1", "w2", "w3", "w4", "w21", "w41", "w42", "w43"];

/// `ω^i` for `i` in `1..=4`.
pub fn omega(i: usize) -> DifferentialForm {
    DifferentialForm::basis(i - 1)
}

/// `ω^i_j` for `i, j` in `1..=4`, expressed in the coframe.
pub fn connection(i: usize, j: usize) -> DifferentialForm {
    let b = |k: usize, s: f64| s * DifferentialForm::basis(k);
    match (i, j) {
        (2, 1) => b(W21, 1.0),
        (4, 1) => b(W41, 1.0),
        (4, 2) => b(W42, 1.0),
        (4, 3) => b(W43, 1.0),
        (3, 1) => b(W42, 1.0),
        (3, 2) => b(W41, -1.0),
        _ if i == j => DifferentialForm::zero(1),
        _ => -connection(j, i),
    }
}

fn frame_vector4(i: usize) -> Vector4<f64> {
    let mut v = Vector4::zeros();
    v[i - 1] = 1.0;
    v
}

/// `Φ^i_j = Σ_{k<l} ⟨R̃(e_k, e_l)e_j, e_i⟩ ω^k∧ω^l`.
pub fn curvature_form(i: usize, j: usize, sf: &SpaceForm) -> DifferentialForm {
    let mut out = DifferentialForm::zero(2);
    for k in 1..=4 {
        for l in (k + 1)..=4 {
            let r = ambient_curvature(&frame_vector4(k), &frame_vector4(l), &frame_vector4(j), sf);
            let v = r.dot(&frame_vector4(i));
            if v != 0.0 {
                out = out.with_term(vec![(k - 1) as u8, (l - 1) as u8], Jet::constant(v));
            }
        }
    }
    out
}

/// Coframe with named fiber coordinates and the table of `d` on basis forms.
#[derive(Debug, Clone)]
pub struct Coframe {
    pub sf: SpaceForm,
    pub coords: Vec<&'static str>,
    d_table: Vec<DifferentialForm>,
}

impl Coframe {
    pub fn new(sf: SpaceForm, coords: &[&'static str]) -> Self {
        assert!(coords.len() <= MAX_COORDS, "too many fiber coordinates");
        let mut d_table = Vec::with_capacity(BUNDLE_DIM + coords.len());
        for i in 1..=4 {
            let mut d = DifferentialForm::zero(2);
            for j in 1..=4 {
                d = d - connection(i, j).wedge(&omega(j));
            }
            d_table.push(d);
        }
        for (i, j) in [(2, 1), (4, 1), (4, 2), (4, 3)] {
            let mut d = curvature_form(i, j, &sf);
            for k in 1..=4 {
                d = d - connection(i, k).wedge(&connection(k, j));
            }
            d_table.push(d);
        }
        d_table.extend(coords.iter().map(|_| DifferentialForm::zero(2)));
        Coframe { sf, coords: coords.to_vec(), d_table }
    }

    pub fn dim(&self) -> usize {
        BUNDLE_DIM + self.coords.len()
    }

    pub fn c(&self) -> f64 {
        self.sf.c
    }

    pub fn coord_index(&self, name: &str) -> usize {
        self.coords.iter().position(|c| *c == name).unwrap_or_else(|| panic!("unknown coordinate {name}"))
    }

    /// `d(name)` as a basis 1-form.
    pub fn dcoord(&self, name: &str) -> DifferentialForm {
        DifferentialForm::basis(BUNDLE_DIM + self.coord_index(name))
    }

    pub fn label(&self, i: usize) -> String {
        if i < BUNDLE_DIM { BUNDLE_LABELS[i].to_string() } else { format!("d{}", self.coords[i - BUNDLE_DIM]) }
    }

    /// `d` of the `i`-th basis 1-form.
    pub fn d_basis(&self, i: usize) -> &DifferentialForm {
        &self.d_table[i]
    }

    fn d_function(&self, f: &Jet) -> Result<DifferentialForm> {
        let mut out = DifferentialForm::zero(1);
        if f.order == u8::MAX && f.grad.iter().all(|g| *g == 0.0) {
            return Ok(out);
        }
        for j in 0..self.coords.len() {
            let p = f.partial(j)?;
            if !p.is_zero() {
                out = out.with_term(vec![(BUNDLE_DIM + j) as u8], p);
            }
        }
        Ok(out)
    }

    /// Leibniz rule with coefficient partials taken from the jets.
    pub fn exterior_derivative(&self, form: &DifferentialForm) -> Result<DifferentialForm> {
        let mut out = DifferentialForm::zero(form.degree + 1);
        for (idx, f) in &form.terms {
            let mut basis = DifferentialForm::function(Jet::constant(1.0));
            for &i in idx {
                basis = basis.wedge(&DifferentialForm::basis(i as usize));
            }
            out = out + self.d_function(f)?.wedge(&basis);
            for (pos, &i) in idx.iter().enumerate() {
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let mut piece = DifferentialForm::function(*f * sign);
                for (q, &k) in idx.iter().enumerate() {
                    piece = if q == pos {
                        piece.wedge(self.d_basis(i as usize))
                    } else {
                        piece.wedge(&DifferentialForm::basis(k as usize))
                    };
                }
                out = out + piece;
            }
        }
        Ok(out)
    }
}
