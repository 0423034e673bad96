//! The d = 4 peak function `f = (1 + r)/2` and the sequence `fₙ = fⁿ`.
//!
//! `f` equals one on `X = r⁻¹(1) ⊇ h(𝕋³)` and has modulus below one elsewhere on
//! the closed ball. The powers `fₙ` stay in the unit ball of the ball algebra and
//! tend to zero pointwise inside, yet `∫ fₙ dμ = 1` for every `n`; a classical
//! Henkin measure would force these integrals to zero.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::measure::{h_d4, r_eval, MomentValue, PushforwardMeasure};
use crate::error::{Error, Result};
use crate::exact::{compose_with_r, ExactComplex, ExactRational};

pub const DEFAULT_DELTA: f64 = 1e-2;
pub const PEAK_TOL: f64 = 1e-12;
pub const GRID_SIZE: usize = 1_000;

pub fn peak_function(z: &[Complex64]) -> Complex64 {
    (Complex64::new(1.0, 0.0) + r_eval(z)) * 0.5
}

/// Binomial coefficients of `((1 + w)/2)ⁿ` as exact rationals.
pub fn peak_power_coeffs(n: u32) -> Vec<ExactComplex> {
    let denom = num_traits::pow(BigInt::from(2), n as usize);
    let mut binom = BigInt::from(1);
    let mut out = Vec::with_capacity(n as usize + 1);
    for j in 0..=n {
        out.push(ExactComplex::real(ExactRational::new(binom.clone(), denom.clone())));
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    out
}

/// `∫ fₙ dμ`, expanding `fₙ = ((1+r)/2)ⁿ` as a polynomial and integrating monomials exactly.
pub fn peak_power_integral(n: u32) -> Result<ExactComplex> {
    let p = compose_with_r(&peak_power_coeffs(n), 4)?;
    match PushforwardMeasure::d4().integrate(&p)? {
        MomentValue::Exact(v) => Ok(v),
        MomentValue::Float(_) => unreachable!("d = 4 integrals are exact"),
    }
}

fn unit_sphere_point(rng: &mut ChaCha8Rng) -> [Complex64; 4] {
    loop {
        let mut v = [Complex64::new(0.0, 0.0); 4];
        for c in v.iter_mut() {
            *c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.map(|c| c / norm);
        }
    }
}

fn torus_point(rng: &mut ChaCha8Rng) -> [Complex64; 3] {
    [(); 3].map(|_| Complex64::from_polar(1.0, TAU * rng.random::<f64>()))
}

/// Fixed grid of [`GRID_SIZE`] interior points: ten radii `0.05, 0.15, …, 0.95` times
/// one hundred directions, half of them on `h(𝕋³)` where `|r|` is largest.
pub fn interior_grid() -> Vec<[Complex64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f9a_1d00);
    let mut dirs = Vec::with_capacity(100);
    for j in 0..50 {
        let a = TAU * j as f64 / 50.0;
        let zeta = [Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, 2.0 * a), Complex64::from_polar(1.0, 7.0 * a)];
        dirs.push(h_d4(zeta));
    }
    for _ in 0..50 {
        dirs.push(unit_sphere_point(&mut rng));
    }
    let mut grid = Vec::with_capacity(GRID_SIZE);
    for i in 0..10 {
        let rho = (i as f64 + 0.5) / 10.0;
        for d in &dirs {
            grid.push(d.map(|c| c * rho));
        }
    }
    grid
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonHenkinEntry {
    pub n: u32,
    pub integral: ExactComplex,
    pub equals_one: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonHenkinReport {
    pub exact_max: u32,
    pub decay_max: u32,
    pub integrals: Vec<NonHenkinEntry>,
    /// `max_grid |fₙ|` for `n = 1..=decay_max`.
    pub grid_max: Vec<f64>,
    pub grid_max_monotone: bool,
    /// First `n` with `max_grid |fₙ| < 10⁻⁶`.
    pub first_below_1e6: Option<u32>,
    /// `fₙ(0) = 2^{-n}` held exactly in binary64 for every `n ≤ decay_max`.
    pub origin_exact: bool,
    /// `max |f|` over the closed-ball sample used for the sup-norm certificate.
    pub sup_sample_max: f64,
    pub pass: bool,
}

/// Certifies that `μ` is not classically Henkin: `∫ fₙ dμ = 1` exactly for `n ≤ exact_max`,
/// while `fₙ → 0` on the interior grid and `|f| ≤ 1` on the sampled closed ball.
pub fn non_henkin_witness(exact_max: u32, decay_max: u32, seed: u64) -> Result<NonHenkinReport> {
    if exact_max == 0 || decay_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let integrals = (1..=exact_max)
        .map(|n| {
            let integral = peak_power_integral(n)?;
            let equals_one = integral == ExactComplex::one();
            Ok(NonHenkinEntry { n, integral, equals_one })
        })
        .collect::<Result<Vec<_>>>()?;

    let grid = interior_grid();
    let f_vals: Vec<Complex64> = grid.iter().map(|z| peak_function(z)).collect();
    let mut powers = f_vals.clone();
    let mut grid_max = Vec::with_capacity(decay_max as usize);
    for n in 1..=decay_max {
        if n > 1 {
            for (p, f) in powers.iter_mut().zip(&f_vals) {
                *p *= f;
            }
        }
        grid_max.push(powers.iter().map(|p| p.norm()).fold(0.0, f64::max));
    }
    let grid_max_monotone = grid_max.windows(2).all(|w| w[1] < w[0]);
    let first_below_1e6 = grid_max.iter().position(|&m| m < 1e-6).map(|i| i as u32 + 1);

    let origin = [Complex64::new(0.0, 0.0); 4];
    let f0 = peak_function(&origin);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut origin_exact = true;
    for n in 1..=decay_max {
        acc *= f0;
        origin_exact &= acc == Complex64::new(0.5f64.powi(n as i32), 0.0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sup_sample_max = (0..10_000)
        .map(|i| {
            let dir = unit_sphere_point(&mut rng);
            let rho = if i % 2 == 0 { 1.0 } else { rng.random::<f64>().powf(1.0 / 8.0) };
            peak_function(&dir.map(|c| c * rho)).norm()
        })
        .fold(0.0, f64::max);

    let pass = integrals.iter().all(|e| e.equals_one)
        && grid_max_monotone
        && grid_max.last().is_some_and(|&m| m < 1e-6)
        && origin_exact
        && sup_sample_max <= 1.0 + 1e-15;
    Ok(NonHenkinReport {
        exact_max,
        decay_max,
        integrals,
        grid_max,
        grid_max_monotone,
        first_below_1e6,
        origin_exact,
        sup_sample_max,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakReport {
    pub samples: usize,
    pub seed: u64,
    pub delta: f64,
    /// `max |f(h(ζ)) − 1|` over the torus samples.
    pub max_peak_deviation: f64,
    pub peak_pass: bool,
    /// Smallest `1 − |f(z)|` over accepted off-peak samples.
    pub min_margin: f64,
    pub off_peak_accepted: usize,
    pub off_peak_rejected: usize,
    pub off_peak_pass: bool,
    pub pass: bool,
}

/// `f = 1` on sampled points of `h(𝕋³)` and `|f| < 1` on samples with `|r(z) − 1| > δ`.
///
/// Off-peak samples mix the sphere, the solid ball and perturbations of `h(𝕋³)`.
pub fn peak_check(samples: usize, seed: u64, delta: f64) -> Result<PeakReport> {
    if samples < 1_000 {
        return Err(Error::InvalidParameter(format!("need at least 1000 samples, got {samples}")));
    }
    if delta <= 0.0 {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = Complex64::new(1.0, 0.0);
    let mut max_peak_deviation: f64 = (peak_function(&h_d4([one; 3])) - one).norm();
    for _ in 1..samples {
        let z = h_d4(torus_point(&mut rng));
        max_peak_deviation = max_peak_deviation.max((peak_function(&z) - one).norm());
    }

    let mut accepted = 0;
    let mut rejected = 0;
    let mut min_margin = f64::INFINITY;
    let mut strict = true;
    while accepted < samples {
        let z = match (accepted + rejected) % 3 {
            0 => unit_sphere_point(&mut rng),
            1 => {
                let rho = rng.random::<f64>().powf(1.0 / 8.0);
                unit_sphere_point(&mut rng).map(|c| c * rho)
            }
            _ => {
                let base = h_d4(torus_point(&mut rng));
                let noise = unit_sphere_point(&mut rng);
                let eps = 0.2 * rng.random::<f64>();
                let v: Vec<Complex64> = base.iter().zip(&noise).map(|(b, n)| b + n * eps).collect();
                let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
                [v[0] * scale, v[1] * scale, v[2] * scale, v[3] * scale]
            }
        };
        if (r_eval(&z) - one).norm() <= delta {
            rejected += 1;
            continue;
        }
        accepted += 1;
        let m = peak_function(&z).norm();
        strict &= m < 1.0;
        min_margin = min_margin.min(1.0 - m);
    }
    let peak_pass = max_peak_deviation <= PEAK_TOL;
    Ok(PeakReport {
        samples,
        seed,
        delta,
        max_peak_deviation,
        peak_pass,
        min_margin,
        off_peak_accepted: accepted,
        off_peak_rejected: rejected,
        off_peak_pass: strict,
        pass: peak_pass && strict,
    })
}
