//! Integral elements and Cartan characters of quasi-linear Pfaffian systems.

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};

use super::form::DifferentialForm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableauAnalysis {
    /// Number of free non-independence forms `π_a`.
    pub free_forms: usize,
    /// Largest `π∧π` coefficient; zero for a quasi-linear system.
    pub quadratic_residual: f64,
    /// Least-squares residual of absorbing the torsion.
    pub torsion_residual: f64,
    /// Dimension of the affine space of integral elements at the point.
    pub integral_element_dim: usize,
    pub characters: [usize; 3],
    pub involutive: bool,
}

fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * top).count()
}

/// Analyses reduced `dθ` 2-forms over independence forms `omega` (three of
/// them) and free forms `pi`. `flag` is the change of independence basis used
/// for the characters; a generic matrix gives the generic characters.
pub fn analyse(
    reduced: &[DifferentialForm],
    omega: &[usize; 3],
    pi: &[usize],
    flag: &Matrix3<f64>,
    rel_tol: f64,
) -> TableauAnalysis {
    let np = pi.len();
    let pos_w = |k: u8| omega.iter().position(|&o| o == k as usize);
    let pos_p = |k: u8| pi.iter().position(|&o| o == k as usize);
    let r = reduced.len();
    // tableau[ρ][(a, i)] and torsion[ρ][(i, j)], i < j
    let mut tab = vec![DMatrix::<f64>::zeros(np, 3); r];
    let mut tor = vec![Matrix3::<f64>::zeros(); r];
    let mut quadratic: f64 = 0.0;
    for (rho, f) in reduced.iter().enumerate() {
        for (idx, c) in &f.terms {
            let (a, b) = (idx[0], idx[1]);
            match (pos_w(a), pos_w(b), pos_p(a), pos_p(b)) {
                (Some(i), Some(j), _, _) => tor[rho][(i, j)] += c.value,
                (None, Some(i), Some(p), _) => tab[rho][(p, i)] += c.value,
                // ω^i∧π_a = −π_a∧ω^i
                (Some(i), None, _, Some(p)) => tab[rho][(p, i)] -= c.value,
                _ => quadratic = quadratic.max(c.value.abs()),
            }
        }
    }

    // π_a = Σ_k x_ak ω^k; equations are coefficients of ω^i∧ω^j, i < j
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let nx = np * 3;
    let mut b = DMatrix::<f64>::zeros(r * 3, nx);
    let mut rhs = DVector::<f64>::zeros(r * 3);
    for rho in 0..r {
        for (e, &(i, j)) in pairs.iter().enumerate() {
            let row = rho * 3 + e;
            rhs[row] = -tor[rho][(i, j)];
            for a in 0..np {
                // x_ai ω^i∧ω^j inside π_a∧ω^j, and −x_aj ω^i∧ω^j inside π_a∧ω^i
                b[(row, a * 3 + i)] += tab[rho][(a, j)];
                b[(row, a * 3 + j)] -= tab[rho][(a, i)];
            }
        }
    }
    let rank_b = numerical_rank(&b, rel_tol);
    let torsion_residual = if nx == 0 {
        rhs.amax()
    } else {
        let svd = b.clone().svd(true, true);
        let x = svd.solve(&rhs, rel_tol).expect("svd with vectors");
        (&b * x - &rhs).amax()
    };

    let mut sums = [0usize; 3];
    for k in 0..3 {
        let mut rows = Vec::new();
        for t in &tab {
            let tg = t * flag;
            for col in 0..=k {
                rows.push(tg.column(col).transpose());
            }
        }
        sums[k] = if rows.is_empty() { 0 } else { numerical_rank(&DMatrix::from_rows(&rows), rel_tol) };
    }
    let characters = [sums[0], sums[1] - sums[0], sums[2] - sums[1]];
    let dim = nx - rank_b;
    let scale = 1.0 + tab.iter().map(|t| t.amax()).fold(0.0, f64::max);
    let quasi_linear = quadratic <= rel_tol * scale;
    let absorbable = torsion_residual <= rel_tol * (scale + rhs.amax());
    TableauAnalysis {
        free_forms: np,
        quadratic_residual: quadratic,
        torsion_residual,
        integral_element_dim: dim,
        characters,
        involutive: quasi_linear && absorbable && dim == characters[0] + 2 * characters[1] + 3 * characters[2],
    }
}
