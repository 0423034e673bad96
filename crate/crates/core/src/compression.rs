//! Finite sections of multiplication operators on `H²_d`.
//!
//! In the orthonormal basis `e_α = z^α/‖z^α‖`, `M_φ e_α = Σ_γ φ_γ (‖z^{α+γ}‖/‖z^α‖) e_{α+γ}`.
//! Columns run over `|α| ≤ N` and rows over `|β| ≤ N + deg φ`, so the section is the
//! full image of the degree-`N` polynomials and its norm bounds `‖φ‖_{ℳ_d}` from below.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{monomial_norm_sq, multi_indices_up_to, r_power_norm_sq, MultiIndex, Polynomial};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultMatrix {
    pub phi: Polynomial,
    pub d: usize,
    #[serde(rename = "N")]
    pub n_max: u32,
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    /// Row-major, `rows.len() × cols.len()`.
    pub entries: Vec<Complex64>,
}

impl MultMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.ncols() + col]
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.ncols());
        self.entries
            .par_chunks(self.ncols())
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn apply_adjoint(&self, w: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(w.len(), self.nrows());
        let nc = self.ncols();
        (0..nc)
            .into_par_iter()
            .map(|j| (0..self.nrows()).map(|i| self.entries[i * nc + j].conj() * w[i]).sum())
            .collect()
    }

    /// `⟨M v, w⟩` in the section coordinates.
    pub fn bilinear(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.apply(v).iter().zip(w).map(|(a, b)| a * b.conj()).sum()
    }
}

/// Matrix of the compression of `M_φ` to polynomials of degree `≤ N`.
pub fn mult_matrix(phi: &Polynomial, n_max: u32) -> MultMatrix {
    let d = phi.dimension();
    let deg = phi.degree().unwrap_or(0) as u32;
    let cols = multi_indices_up_to(d, n_max);
    let rows = multi_indices_up_to(d, n_max + deg);
    let row_of: HashMap<&MultiIndex, usize> = rows.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let terms: Vec<(&MultiIndex, Complex64)> = phi.terms().map(|(g, c)| (g, c.to_complex64())).collect();

    let column_entries: Vec<Vec<(usize, Complex64)>> = cols
        .par_iter()
        .map(|alpha| {
            let norm_alpha = monomial_norm_sq(alpha);
            terms
                .iter()
                .map(|(gamma, c)| {
                    let beta = alpha.add(gamma);
                    let weight = (monomial_norm_sq(&beta) / &norm_alpha).to_f64().sqrt();
                    (row_of[&beta], c * weight)
                })
                .collect()
        })
        .collect();

    let nc = cols.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); rows.len() * nc];
    for (j, col) in column_entries.into_iter().enumerate() {
        for (i, v) in col {
            entries[i * nc + j] += v;
        }
    }
    MultMatrix { phi: phi.clone(), d, n_max, rows, cols, entries }
}

pub const POWER_REL_TOL: f64 = 1e-12;
pub const POWER_MAX_ITERS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerIteration {
    /// `‖A v‖` for the final unit vector `v`, hence never above the true top singular value.
    pub sigma_max: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Power iteration on `AᴴA` from the normalized all-ones vector.
pub fn top_singular_value(m: &MultMatrix) -> PowerIteration {
    let nc = m.ncols();
    if nc == 0 || m.entries.iter().all(|c| c.norm_sqr() == 0.0) {
        return PowerIteration { sigma_max: 0.0, iterations: 0, converged: true };
    }
    let mut v = vec![Complex64::new(1.0 / (nc as f64).sqrt(), 0.0); nc];
    let mut lambda_prev = 0.0;
    for it in 1..=POWER_MAX_ITERS {
        let av = m.apply(&v);
        let lambda = av.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if it > 1 && (lambda - lambda_prev).abs() <= POWER_REL_TOL * lambda {
            return PowerIteration { sigma_max: lambda.sqrt(), iterations: it, converged: true };
        }
        lambda_prev = lambda;
        let next = m.apply_adjoint(&av);
        let n = norm(&next);
        if n == 0.0 {
            return PowerIteration { sigma_max: lambda.sqrt(), iterations: it, converged: true };
        }
        v = next.into_iter().map(|c| c / n).collect();
    }
    PowerIteration { sigma_max: lambda_prev.sqrt(), iterations: POWER_MAX_ITERS, converged: false }
}

/// Largest singular value of [`mult_matrix`]`(φ, N)`: a lower bound for `‖φ‖_{ℳ_d}`.
pub fn compression_norm(phi: &Polynomial, n_max: u32) -> f64 {
    top_singular_value(&mult_matrix(phi, n_max)).sigma_max
}

/// Weights `wₙ = ‖rⁿ⁺¹‖/‖rⁿ‖ = (aₙ/aₙ₊₁)^{1/2}` of `M_r` on the span of `{rⁿ}`.
pub fn diagonal_shift_weights(d: usize, n_max: u32) -> Vec<f64> {
    (0..=n_max)
        .map(|n| (r_power_norm_sq(d, n + 1) / r_power_norm_sq(d, n)).to_f64().sqrt())
        .collect()
}
