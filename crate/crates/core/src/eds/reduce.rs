//! Reduction of forms modulo a Pfaffian ideal at a point.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::form::DifferentialForm;
use super::jet::Jet;
use crate::error::{Error, Result};

/// Algebraic generators of an ideal at a point: 1-forms, plus optional
/// 2-forms, with the independence forms that may not be solved for.
#[derive(Debug, Clone)]
pub struct Ideal {
    pub dim: usize,
    pub one_forms: Vec<DVector<f64>>,
    pub two_forms: Vec<DifferentialForm>,
    pub protected: Vec<usize>,
}

/// Solves the 1-form generators for pivot basis forms and records the
/// substitution `e_p ≡ Σ_n S_pn e_n`.
#[derive(Debug, Clone)]
pub struct Reducer {
    dim: usize,
    images: Vec<DifferentialForm>,
    pivots: Vec<usize>,
    two_forms: Vec<DifferentialForm>,
}

const PIVOT_TOL: f64 = 1e-10;

impl Ideal {
    pub fn new(dim: usize, one_forms: Vec<DVector<f64>>, protected: &[usize]) -> Self {
        Ideal { dim, one_forms, two_forms: vec![], protected: protected.to_vec() }
    }

    pub fn from_forms(dim: usize, one_forms: &[DifferentialForm], protected: &[usize]) -> Self {
        Self::new(dim, one_forms.iter().map(|f| f.to_dense(dim)).collect(), protected)
    }

    pub fn with_two_forms(mut self, two_forms: Vec<DifferentialForm>) -> Self {
        self.two_forms = two_forms;
        self
    }

    pub fn reducer(&self) -> Result<Reducer> {
        let m = self.one_forms.len();
        let n = self.dim;
        let mut g = DMatrix::from_fn(m, n, |r, c| self.one_forms[r][c]);
        let scale = g.amax().max(1.0);
        let mut pivots = Vec::with_capacity(m);
        // Gauss-Jordan with full pivoting over rows and unprotected columns.
        for step in 0..m {
            let mut best = (0.0, 0, 0);
            for r in step..m {
                for c in (0..n).filter(|c| !self.protected.contains(c) && !pivots.contains(c)) {
                    if g[(r, c)].abs() > best.0 {
                        best = (g[(r, c)].abs(), r, c);
                    }
                }
            }
            if best.0 <= PIVOT_TOL * scale {
                return Err(Error::DependentGenerators);
            }
            let (_, r, c) = best;
            g.swap_rows(step, r);
            let p = g[(step, c)];
            for k in 0..n {
                g[(step, k)] /= p;
            }
            for r2 in 0..m {
                if r2 != step {
                    let f = g[(r2, c)];
                    if f != 0.0 {
                        for k in 0..n {
                            g[(r2, k)] -= f * g[(step, k)];
                        }
                    }
                }
            }
            pivots.push(c);
        }
        let mut images: Vec<DifferentialForm> = (0..n).map(DifferentialForm::basis).collect();
        for (row, &p) in pivots.iter().enumerate() {
            let mut img = DifferentialForm::zero(1);
            for k in (0..n).filter(|k| !pivots.contains(k)) {
                let v = g[(row, k)];
                if v != 0.0 {
                    img = img.with_term(vec![k as u8], Jet::value_only(-v));
                }
            }
            images[p] = img;
        }
        let mut reducer = Reducer { dim: n, images, pivots, two_forms: vec![] };
        reducer.two_forms = self.two_forms.iter().map(|f| reducer.substitute(f)).collect();
        Ok(reducer)
    }
}

impl Reducer {
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn substitute(&self, form: &DifferentialForm) -> DifferentialForm {
        let mut out = DifferentialForm::zero(form.degree);
        for (idx, f) in &form.terms {
            let mut piece = DifferentialForm::function(Jet::value_only(f.value));
            for &i in idx {
                piece = piece.wedge(&self.images[i as usize]);
            }
            out = out + piece;
        }
        out.values()
    }

    /// Representative of `form` with every generator eliminated; idempotent.
    pub fn reduce(&self, form: &DifferentialForm) -> DifferentialForm {
        let sub = self.substitute(form);
        if self.two_forms.is_empty() || form.degree < 2 {
            return sub;
        }
        self.project_out_two_forms(&sub)
    }

    /// Least-squares removal of the span of `g ∧ e^J` over 2-form generators
    /// `g` and monomials `e^J` in the non-pivot basis.
    fn project_out_two_forms(&self, form: &DifferentialForm) -> DifferentialForm {
        let free: Vec<usize> = (0..self.dim).filter(|k| !self.pivots.contains(k)).collect();
        let mut monomials: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..form.degree - 2 {
            monomials = monomials
                .into_iter()
                .flat_map(|m| {
                    let start = m.last().map_or(0, |l| l + 1);
                    free.iter()
                        .filter(move |&&k| k >= start)
                        .map(move |&k| {
                            let mut n = m.clone();
                            n.push(k);
                            n
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        let mut spanning = Vec::new();
        for g in &self.two_forms {
            for mono in &monomials {
                let e = mono.iter().fold(DifferentialForm::function(1.0), |acc, &k| {
                    acc.wedge(&DifferentialForm::basis(k))
                });
                let w = g.wedge(&e);
                if w.max_abs() > 0.0 {
                    spanning.push(w);
                }
            }
        }
        if spanning.is_empty() {
            return form.clone();
        }
        let mut keys: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
        for f in spanning.iter().chain(std::iter::once(form)) {
            for k in f.terms.keys() {
                let len = keys.len();
                keys.entry(k.clone()).or_insert(len);
            }
        }
        let rows = keys.len();
        let to_vec = |f: &DifferentialForm| {
            let mut v = DVector::zeros(rows);
            for (k, j) in &f.terms {
                v[keys[k]] = j.value;
            }
            v
        };
        let a = DMatrix::from_columns(&spanning.iter().map(to_vec).collect::<Vec<_>>());
        let b = to_vec(form);
        let svd = a.clone().svd(true, true);
        let t = svd.solve(&b, 1e-12).expect("svd with vectors");
        let resid = b - a * t;
        let mut out = DifferentialForm::zero(form.degree);
        for (k, &i) in &keys {
            if resid[i] != 0.0 {
                out = out.with_term(k.clone(), Jet::value_only(resid[i]));
            }
        }
        out
    }
}

/// `reduce(form)` under the ideal.
pub fn reduce_mod_ideal(form: &DifferentialForm, ideal: &Ideal) -> Result<DifferentialForm> {
    Ok(ideal.reducer()?.reduce(form))
}
