//! Differential forms as sparse coefficient tables over a numbered coframe.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use super::jet::Jet;

/// A `degree`-form `Σ f_I e^I` with strictly increasing index lists `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialForm {
    pub degree: usize,
    pub terms: BTreeMap<Vec<u8>, Jet>,
}

/// Sorts `idx` in place, returning the permutation sign, or `None` on a
/// repeated index.
fn sort_with_sign(idx: &mut [u8]) -> Option<f64> {
    let mut sign = 1.0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) { None } else { Some(sign) }
}

impl DifferentialForm {
    pub fn zero(degree: usize) -> Self {
        DifferentialForm { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: impl Into<Jet>) -> Self {
        Self::zero(0).with_term(vec![], f.into())
    }

    pub fn basis(i: usize) -> Self {
        Self::zero(1).with_term(vec![i as u8], Jet::constant(1.0))
    }

    /// Adds `coef · e^{idx}` for an arbitrary ordering of `idx`.
    pub fn with_term(mut self, mut idx: Vec<u8>, coef: Jet) -> Self {
        assert_eq!(idx.len(), self.degree, "term degree mismatch");
        if let Some(sign) = sort_with_sign(&mut idx) {
            let c = if sign < 0.0 { -coef } else { coef };
            let entry = self.terms.entry(idx).or_insert(Jet::constant(0.0));
            *entry = *entry + c;
        }
        self
    }

    /// `Σ coefs[i] e^i`.
    pub fn from_coefficients(coefs: &[(usize, Jet)]) -> Self {
        coefs.iter().fold(Self::zero(1), |f, &(i, c)| f.with_term(vec![i as u8], c))
    }

    pub fn coefficient(&self, idx: &[u8]) -> f64 {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            Some(sign) => sign * self.terms.get(&sorted).map_or(0.0, |j| j.value),
            None => 0.0,
        }
    }

    pub fn scale(&self, f: impl Into<Jet>) -> Self {
        let f = f.into();
        DifferentialForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), *v * f)).collect(),
        }
    }

    pub fn wedge(&self, other: &DifferentialForm) -> DifferentialForm {
        let mut out = Self::zero(self.degree + other.degree);
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out = out.with_term(idx, *fa * *fb);
            }
        }
        out
    }

    /// Drops partial-derivative data, keeping values only.
    pub fn values(&self) -> Self {
        DifferentialForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), Jet::value_only(v.value))).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|j| j.value.abs()).fold(0.0, f64::max)
    }

    /// Value on `degree` vectors whose entries are the basis 1-forms applied
    /// to them.
    pub fn evaluate(&self, vectors: &[DVector<f64>]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let k = self.degree;
        self.terms
            .iter()
            .map(|(idx, f)| {
                let m = DMatrix::from_fn(k, k, |r, col| vectors[col][idx[r] as usize]);
                f.value * if k == 0 { 1.0 } else { m.determinant() }
            })
            .sum()
    }

    /// `v ⌟ self`, values only.
    pub fn interior(&self, v: &DVector<f64>) -> DifferentialForm {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (idx, f) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let mut rest = idx.clone();
                rest.remove(pos);
                out = out.with_term(rest, Jet::value_only(sign * f.value * v[i as usize]));
            }
        }
        out
    }

    /// Coefficient vector of a 1-form in a basis of size `dim`.
    pub fn to_dense(&self, dim: usize) -> DVector<f64> {
        assert_eq!(self.degree, 1);
        let mut v = DVector::zeros(dim);
        for (idx, f) in &self.terms {
            v[idx[0] as usize] += f.value;
        }
        v
    }

    pub fn from_dense(v: &DVector<f64>) -> Self {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, x)| **x != 0.0)
            .map(|(i, x)| (vec![i as u8], Jet::value_only(*x)))
            .collect();
        DifferentialForm { degree: 1, terms }
    }
}

impl Add for DifferentialForm {
    type Output = DifferentialForm;
    fn add(self, o: DifferentialForm) -> DifferentialForm {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        o.terms.into_iter().fold(self, |f, (k, v)| f.with_term(k, v))
    }
}

impl Neg for DifferentialForm {
    type Output = DifferentialForm;
    fn neg(self) -> DifferentialForm {
        self.scale(-1.0)
    }
}

impl Sub for DifferentialForm {
    type Output = DifferentialForm;
    fn sub(self, o: DifferentialForm) -> DifferentialForm {
        self + (-o)
    }
}

impl Mul<DifferentialForm> for Jet {
    type Output = DifferentialForm;
    fn mul(self, f: DifferentialForm) -> DifferentialForm {
        f.scale(self)
    }
}

impl Mul<DifferentialForm> for f64 {
    type Output = DifferentialForm;
    fn mul(self, f: DifferentialForm) -> DifferentialForm {
        f.scale(self)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, v)| v.value != 0.0)
            .map(|(k, v)| {
                let idx: Vec<String> = k.iter().map(|i| format!("e{i}")).collect();
                format!("{:+.6} {}", v.value, idx.join("^"))
            })
            .collect();
        if parts.is_empty() { write!(f, "0") } else { write!(f, "{}", parts.join(" ")) }
    }
}
