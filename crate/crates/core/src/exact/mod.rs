//! Exact arithmetic on the Drury-Arveson space `H²_d`.
//!
//! Monomials `z^α` are orthogonal in `H²_d` with `‖z^α‖² = α!/|α|!`, so every
//! inner product between polynomials reduces to a finite sum of rationals.
//! All quantities here are computed without rounding.

mod multi_index;
mod polynomial;
mod rational;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use multi_index::{factorial, multi_indices_of_degree, multi_indices_up_to, MultiIndex};
pub use polynomial::Polynomial;
pub use rational::{ExactComplex, ExactRational};

use crate::disc_kernel::KernelSequence;
use crate::error::{Error, Result};

/// `‖z^α‖²_{H²_d} = α!/|α|!`.
pub fn monomial_norm_sq(alpha: &MultiIndex) -> ExactRational {
    ExactRational::new(alpha.factorial(), factorial(alpha.degree()))
}

/// `⟨p, q⟩_{H²_d} = Σ_α p_α · conj(q_α) · ‖z^α‖²`.
pub fn da_inner(p: &Polynomial, q: &Polynomial) -> Result<ExactComplex> {
    if p.dimension() != q.dimension() {
        return Err(Error::DimensionMismatch { left: p.dimension(), right: q.dimension() });
    }
    let mut acc = ExactComplex::zero();
    for (alpha, pa) in p.terms() {
        if let Some(qa) = q.coefficient(alpha) {
            acc += &(pa * &qa.conj()).scale(&monomial_norm_sq(alpha));
        }
    }
    Ok(acc)
}

pub fn da_norm_sq(p: &Polynomial) -> ExactRational {
    p.terms().map(|(alpha, c)| c.norm_sq() * monomial_norm_sq(alpha)).sum()
}

/// Square of the scaling constant of the disc map `r(z) = c·z₁⋯z_d`, i.e. `c² = d^d`.
pub fn r_scale_sq(d: usize) -> BigInt {
    num_traits::pow(BigInt::from(d), d)
}

/// Integer scaling constant `c = d^{d/2}` of `r`; defined for the two embedded dimensions.
pub fn r_scale(d: usize) -> Result<BigInt> {
    match d {
        2 => Ok(BigInt::from(2)),
        4 => Ok(BigInt::from(16)),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// `‖r(z)ⁿ‖²_{H²_d} = d^{dn}·(n!)^d/(dn)!`.
pub fn r_power_norm_sq(d: usize, n: u32) -> ExactRational {
    assert!(d >= 1, "dimension must be positive");
    let scale = num_traits::pow(r_scale_sq(d), n as usize);
    ExactRational::from_integer(scale) * monomial_norm_sq(&MultiIndex::diagonal(d, n))
}

/// Same quantity as [`r_power_norm_sq`] for `n = 0..=n_max`, in binary64, by the
/// multiplicative recurrence `x_{n+1}/x_n = Π_{j=1}^{d} d(n+1)/(dn+j)`.
pub fn r_power_norm_sq_f64_table(d: usize, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut x = 1.0f64;
    out.push(x);
    let df = d as f64;
    for n in 0..n_max {
        let nf = n as f64;
        for j in 1..=d {
            x *= df * (nf + 1.0) / (df * nf + j as f64);
        }
        out.push(x);
    }
    out
}

/// `d^{dn}·‖(z₁⋯z_d)ⁿ‖² / (n+1)^{(d-1)/2}`, which stays within fixed positive bounds in `n`.
pub fn stirling_ratio(d: usize, n: u32) -> f64 {
    r_power_norm_sq(d, n).to_f64() / stirling_envelope(d, n as f64)
}

/// `(n+1)^{(d-1)/2}`.
pub fn stirling_envelope(d: usize, n: f64) -> f64 {
    (n + 1.0).powf((d as f64 - 1.0) / 2.0)
}

/// `f ↦ f∘r`: sends `Σ fₙ zⁿ` to `Σ fₙ cⁿ (z₁⋯z_d)ⁿ`.
pub fn compose_with_r(f_coeffs: &[ExactComplex], d: usize) -> Result<Polynomial> {
    let c = ExactRational::from_integer(r_scale(d)?);
    let mut p = Polynomial::zero(d);
    let mut cn = ExactRational::one();
    for (n, fn_) in f_coeffs.iter().enumerate() {
        p.add_term(MultiIndex::diagonal(d, n as u32), fn_.scale(&cn));
        cn *= &c;
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryReport {
    /// `Σ |fₙ|²/aₙ`, the norm in the disc space.
    pub lhs: ExactRational,
    /// `‖f∘r‖²_{H²_d}`.
    pub rhs: ExactRational,
    pub equal: bool,
}

/// Compares `‖f‖²` in the disc space with `‖f∘r‖²` in `H²_d`, exactly.
pub fn isometry_check(f_coeffs: &[ExactComplex], seq: &KernelSequence) -> Result<IsometryReport> {
    let a = seq.a_exact().ok_or(Error::MissingExactCoefficients)?;
    if f_coeffs.len() > a.len() {
        return Err(Error::TruncationTooSmall { have: a.len().saturating_sub(1), need: f_coeffs.len() - 1 });
    }
    let lhs: ExactRational = f_coeffs.iter().zip(a).map(|(f, an)| f.norm_sq() / an).sum();
    let p = compose_with_r(f_coeffs, seq.d())?;
    let inner = da_inner(&p, &p)?;
    let equal = inner.im.is_zero() && inner.re == lhs;
    Ok(IsometryReport { lhs, rhs: inner.re, equal })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryBatch {
    pub d: usize,
    pub max_deg: usize,
    pub trials: usize,
    pub seed: u64,
    /// Indices of the lists where the two norms differed.
    pub failures: Vec<usize>,
}

/// [`isometry_check`] on `trials` seeded lists of random Gaussian rationals, each of
/// random length `1..=max_deg + 1`.
pub fn isometry_batch(d: usize, max_deg: usize, trials: usize, seed: u64) -> Result<IsometryBatch> {
    use rand::{Rng, SeedableRng};
    let seq = KernelSequence::exact(d, max_deg)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let part = |rng: &mut rand_chacha::ChaCha8Rng| {
        ExactRational::new(rng.random_range(-50i64..=50), rng.random_range(1i64..=12))
    };
    let lists: Vec<Vec<ExactComplex>> = (0..trials)
        .map(|_| {
            let len = rng.random_range(1..=max_deg + 1);
            (0..len).map(|_| ExactComplex::new(part(&mut rng), part(&mut rng))).collect()
        })
        .collect();
    let mut failures = Vec::new();
    for (i, coeffs) in lists.iter().enumerate() {
        if !isometry_check(coeffs, &seq)?.equal {
            failures.push(i);
        }
    }
    Ok(IsometryBatch { d, max_deg, trials, seed, failures })
}

/// The trivial extension `f ↦ f∘P` keeps `‖z^α‖²` when `α` is padded with zeros.
pub fn extension_norm_check(alpha: &MultiIndex, d_prime: usize) -> Result<bool> {
    if d_prime < alpha.dim() {
        return Err(Error::ExtensionTooShort { len: alpha.dim(), target: d_prime });
    }
    Ok(monomial_norm_sq(alpha) == monomial_norm_sq(&alpha.padded(d_prime)))
}
