//! The circular middle-thirds Cantor measure `σ`.
//!
//! `σ` is the image under `t ↦ e^{2πit}` of the self-similar measure `ν` on
//! `[0,1)` fixed by the maps `t ↦ t/3` and `t ↦ t/3 + 2/3` with weights ½.
//! Its Fourier coefficients satisfy
//!
//! ```text
//! σ̂(ξ) = ½(1 + e^{-4πiξ/3}) · σ̂(ξ/3),
//! ```
//!
//! which [`fourier_coeff`] unrolls until the residual frequency is negligible.
//! The level-`L` atomic approximations with `2^L` equal atoms serve as the
//! independent oracle and as the quadrature for the Riesz ½-energy.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Riesz exponent of the verified energy, `k(t) = t^{-1/2}`.
pub const RIESZ_EXPONENT: f64 = 0.5;
/// Default accuracy of recursion-based coefficients.
pub const DEFAULT_EPS: f64 = 1e-12;
/// Largest level accepted by the O(4^L) energy quadrature.
pub const MAX_ENERGY_LEVEL: u32 = 16;
/// Largest level accepted for atom sets (`3^L` must fit comfortably in `u64`).
pub const MAX_ATOM_LEVEL: u32 = 30;

/// The two-map iterated function system behind `σ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CantorMeasure;

impl CantorMeasure {
    pub const RATIO: f64 = 1.0 / 3.0;
    pub const OFFSETS: [f64; 2] = [0.0, 2.0 / 3.0];
    pub const WEIGHTS: [f64; 2] = [0.5, 0.5];

    /// Point of the unit circle at parameter `t`.
    pub fn embed(t: f64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * t)
    }

    /// Draws a line parameter distributed as `ν` from 64 random ternary digits in `{0, 2}`.
    pub fn sample_line<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
        let bits = rng.next_u64();
        let mut t = 0.0;
        for k in (0..64).rev() {
            let digit = if (bits >> k) & 1 == 1 { 2.0 } else { 0.0 };
            t = (digit + t) / 3.0;
        }
        t
    }

    pub fn sample<R: RngCore + ?Sized>(rng: &mut R) -> Complex64 {
        Self::embed(Self::sample_line(rng))
    }
}

/// Characteristic function `∫ e^{-2πiξt} dν(t)` of the line measure, within `eps`.
///
/// Each factor has modulus at most one and `|ν̂(η) − 1| ≤ 2π|η|`, so stopping once
/// `2π|η| ≤ eps` leaves an absolute error of at most `eps`.
pub fn line_characteristic(xi: f64, eps: f64) -> Complex64 {
    assert!(eps > 0.0, "eps must be positive");
    let mut acc = Complex64::new(1.0, 0.0);
    let mut x = xi;
    while TAU * x.abs() > eps {
        let phase = Complex64::from_polar(1.0, -4.0 * PI * x / 3.0);
        acc *= (Complex64::new(1.0, 0.0) + phase) * 0.5;
        x /= 3.0;
    }
    acc
}

/// `σ̂(n) = ∫ z^{-n} dσ(z)` with absolute error at most `eps`.
pub fn fourier_coeff(n: i64, eps: f64) -> Complex64 {
    line_characteristic(n as f64, eps)
}

/// Where each level-`L` cell puts its atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomPlacement {
    LeftEndpoint,
    /// Cell centre, which is also the barycentre of `ν` restricted to the cell.
    #[default]
    Midpoint,
}

/// Left endpoints of the `2^L` level-`L` cells as integer numerators over `3^L`, sorted,
/// built by appending one ternary digit per level.
pub fn atom_numerators(level: u32) -> Result<Vec<u64>> {
    check_atom_level(level)?;
    let mut cells = vec![0u64];
    for _ in 0..level {
        cells = cells.iter().flat_map(|&m| [3 * m, 3 * m + 2]).collect();
    }
    Ok(cells)
}

/// Pushes a level-`(L−1)` atom set through both contractions, producing level-`L` numerators.
pub fn push_through_maps(prev: &[u64], prev_level: u32) -> Vec<u64> {
    let shift = 2 * 3u64.pow(prev_level);
    let mut out: Vec<u64> = prev.iter().copied().chain(prev.iter().map(|&m| m + shift)).collect();
    out.sort_unstable();
    out
}

fn check_atom_level(level: u32) -> Result<()> {
    if level > MAX_ATOM_LEVEL {
        return Err(Error::InvalidParameter(format!("atom level {level} exceeds {MAX_ATOM_LEVEL}")));
    }
    Ok(())
}

/// Oracle value `2^{-L} Σ_cells e^{-2πin t_cell}`; phases are reduced exactly in integers.
pub fn atomic_fourier_coeff(n: i64, level: u32, placement: AtomPlacement) -> Result<Complex64> {
    let atoms = atom_numerators(level)?;
    Ok(atomic_sum(&atoms, n, level, placement))
}

fn atomic_sum(atoms: &[u64], n: i64, level: u32, placement: AtomPlacement) -> Complex64 {
    // t = num / den with den = 3^L (left) or 2·3^L (midpoint)
    let den: i128 = match placement {
        AtomPlacement::LeftEndpoint => 3i128.pow(level),
        AtomPlacement::Midpoint => 2 * 3i128.pow(level),
    };
    let sum: Complex64 = atoms
        .iter()
        .map(|&m| {
            let num = match placement {
                AtomPlacement::LeftEndpoint => m as i128,
                AtomPlacement::Midpoint => 2 * m as i128 + 1,
            };
            let r = (n as i128 * num).rem_euclid(den);
            Complex64::from_polar(1.0, -TAU * (r as f64 / den as f64))
        })
        .sum();
    sum / atoms.len() as f64
}

/// Worst-case distance between `σ̂(n)` and its level-`L` atomic approximation, `|n| ≤ max_n`.
pub fn atomic_error_bound(max_n: usize, level: u32, placement: AtomPlacement) -> f64 {
    let cell = 3f64.powi(-(level as i32));
    let n = max_n as f64;
    match placement {
        AtomPlacement::LeftEndpoint => TAU * n * cell,
        AtomPlacement::Midpoint => (PI * n * cell).powi(2) / 2.0,
    }
}

/// How a [`FourierTable`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum FourierSource {
    Recursion { eps: f64 },
    Atomic { level: u32, placement: AtomPlacement },
}

/// `σ̂(n)` for `|n| ≤ max_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierTable {
    max_n: usize,
    /// Absolute accuracy of every entry.
    tolerance: f64,
    source: FourierSource,
    /// Entry `k` holds `σ̂(k − max_n)`.
    coeffs: Vec<Complex64>,
}

impl FourierTable {
    pub fn from_recursion(max_n: usize, eps: f64) -> Self {
        let m = max_n as i64;
        let coeffs = (-m..=m).into_par_iter().map(|n| fourier_coeff(n, eps)).collect();
        FourierTable { max_n, tolerance: eps, source: FourierSource::Recursion { eps }, coeffs }
    }

    pub fn from_atoms(max_n: usize, level: u32, placement: AtomPlacement) -> Result<Self> {
        let atoms = atom_numerators(level)?;
        let m = max_n as i64;
        let coeffs = (-m..=m)
            .into_par_iter()
            .map(|n| atomic_sum(&atoms, n, level, placement))
            .collect();
        // rounding in the 2^L-term sum stays far below this floor
        let tolerance = atomic_error_bound(max_n, level, placement) + 1e-12;
        Ok(FourierTable { max_n, tolerance, source: FourierSource::Atomic { level, placement }, coeffs })
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn source(&self) -> FourierSource {
        self.source
    }

    pub fn get(&self, n: i64) -> Result<Complex64> {
        if n.unsigned_abs() as usize > self.max_n {
            return Err(Error::TableTooShort { requested: n, available: self.max_n });
        }
        Ok(self.coeffs[(n + self.max_n as i64) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.max_n as i64;
        (-m..=m).zip(self.coeffs.iter().copied())
    }

    /// Largest `|σ̂(−n) − conj(σ̂(n))|` over the table.
    pub fn symmetry_defect(&self) -> f64 {
        (0..=self.max_n as i64)
            .map(|n| (self.get(-n).unwrap() - self.get(n).unwrap().conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|self(n) − other(n)|` over the common range.
    pub fn max_difference(&self, other: &FourierTable) -> f64 {
        let m = self.max_n.min(other.max_n) as i64;
        (-m..=m)
            .map(|n| (self.get(n).unwrap() - other.get(n).unwrap()).norm())
            .fold(0.0, f64::max)
    }

    /// Columns `n, re, im, abs`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["n", "re", "im", "abs"])?;
        for (n, c) in self.iter() {
            wtr.write_record([n.to_string(), format!("{:e}", c.re), format!("{:e}", c.im), format!("{:e}", c.norm())])?;
        }
        wtr.flush()
    }
}

fn weighted_terms(n_max: usize, eps: f64) -> Vec<f64> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| fourier_coeff(n as i64, eps).norm_sqr() / ((n + 1) as f64).sqrt())
        .collect()
}

/// `Σ_{n=0}^{N} |σ̂(n)|² / (n+1)^{1/2}`.
pub fn weighted_fourier_sum(n_max: usize) -> f64 {
    weighted_terms(n_max, DEFAULT_EPS).iter().sum()
}

/// Partial sums of [`weighted_fourier_sum`] at each `N` in `checkpoints` (ascending).
pub fn weighted_fourier_sweep(checkpoints: &[usize]) -> Vec<(usize, f64)> {
    let Some(&last) = checkpoints.last() else { return Vec::new() };
    let terms = weighted_terms(last, DEFAULT_EPS);
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = 0.0;
    let mut next = 0;
    for &cp in checkpoints {
        while next <= cp {
            acc += terms[next];
            next += 1;
        }
        out.push((cp, acc));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEstimate {
    pub level: u32,
    pub lower: f64,
    pub upper: f64,
}

/// Ratio by which the same-cell part of the energy shrinks per level: `3^s / 2`.
pub fn self_similar_ratio() -> f64 {
    3f64.powf(RIESZ_EXPONENT) / 2.0
}

/// Two-sided estimate of `I(σ) = ∬ |x−y|^{-1/2} dσ dσ` from the level-`L` atoms.
///
/// `lower` is the atomic pair sum over distinct cells with chordal distances.
/// Same-cell pairs are a scaled copy of the whole energy with factor `q^L`,
/// `q = √3/2`, so `upper = lower / (1 − q^L)` adds that geometric remainder.
pub fn riesz_energy(level: u32) -> Result<EnergyEstimate> {
    if !(2..=MAX_ENERGY_LEVEL).contains(&level) {
        return Err(Error::InvalidParameter(format!(
            "energy level must lie in 2..={MAX_ENERGY_LEVEL}, got {level}"
        )));
    }
    let atoms = atom_numerators(level)?;
    let den = 3f64.powi(level as i32);
    let rows: Vec<f64> = (0..atoms.len())
        .into_par_iter()
        .map(|i| {
            atoms[i + 1..]
                .iter()
                .map(|&mj| {
                    let delta = (mj - atoms[i]) as f64 / den;
                    (2.0 * (PI * delta).sin()).powf(-RIESZ_EXPONENT)
                })
                .sum::<f64>()
        })
        .collect();
    let count = atoms.len() as f64;
    let lower = 2.0 * rows.iter().sum::<f64>() / (count * count);
    let remainder_factor = self_similar_ratio().powi(level as i32);
    let upper = lower / (1.0 - remainder_factor);
    Ok(EnergyEstimate { level, lower, upper })
}

/// Total length fraction `(2/3)^L` of the level-`L` cover of the support.
pub fn support_measure_zero(level: u32) -> f64 {
    (2.0f64 / 3.0).powi(level as i32)
}
