//! Monte Carlo moments sampled directly through the parametrization `h`.
//!
//! Samples are drawn in fixed-size chunks; chunk `c` uses the ChaCha stream `c`
//! of the run seed, and chunk sums are merged in chunk order, so estimates do
//! not depend on the rayon pool size.

use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measure::{closed_form_moment, h_d2, h_d4, MomentValue, Variant};
use crate::cantor::CantorMeasure;
use crate::error::{Error, Result};
use crate::exact::MultiIndex;

pub const MIN_SAMPLES: usize = 1_000;
const CHUNK: usize = 4_096;
/// Number of standard errors allowed between estimate and closed form.
pub const MC_SIGMAS: f64 = 4.0;
/// Slack for moments whose integrand is constant, where the standard error is zero.
pub const MC_ROUNDING_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub variant: Variant,
    pub alpha: MultiIndex,
    pub closed_form: MomentValue,
    pub mc_estimate: Complex64,
    pub mc_stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MomentReport {
    pub fn deviation(&self) -> f64 {
        (self.closed_form.to_complex64() - self.mc_estimate).norm()
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.deviation() <= sigmas * self.mc_stderr + MC_ROUNDING_SLACK
    }
}

fn powi(z: Complex64, k: u32) -> Complex64 {
    z.powu(k)
}

fn sample_monomial(variant: Variant, alpha: &[u32], rng: &mut ChaCha8Rng) -> Complex64 {
    let unit = |rng: &mut ChaCha8Rng| Complex64::from_polar(1.0, TAU * rng.random::<f64>());
    match variant {
        Variant::D4 => {
            let z = h_d4([unit(rng), unit(rng), unit(rng)]);
            z.iter().zip(alpha).map(|(&zi, &a)| powi(zi, a)).product()
        }
        Variant::D2 => {
            let zeta1 = unit(rng);
            let zeta2 = CantorMeasure::sample(rng);
            let z = h_d2([zeta1, zeta2]);
            z.iter().zip(alpha).map(|(&zi, &a)| powi(zi, a)).product()
        }
    }
}

/// Monte Carlo estimate of `∫ z^α dμ` with its standard error.
pub fn mc_moment(variant: Variant, alpha: &MultiIndex, samples: usize, seed: u64) -> Result<MomentReport> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if alpha.dim() != variant.dim() {
        return Err(Error::DimensionMismatch { left: variant.dim(), right: alpha.dim() });
    }
    let closed_form = closed_form_moment(variant, alpha)?;
    let chunks = samples.div_ceil(CHUNK);
    let partials: Vec<(Complex64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut sum_sq = 0.0;
            for _ in 0..len {
                let x = sample_monomial(variant, alpha.entries(), &mut rng);
                sum += x;
                sum_sq += x.norm_sqr();
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(s, q), (ps, pq)| (s + ps, q + pq));
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean.norm_sqr()) * n / (n - 1.0)).max(0.0);
    Ok(MomentReport {
        variant,
        alpha: alpha.clone(),
        closed_form,
        mc_estimate: mean,
        mc_stderr: (var / n).sqrt(),
        samples,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentBatch {
    pub variant: Variant,
    pub seed: u64,
    pub samples: usize,
    pub within: usize,
    pub total: usize,
    pub reports: Vec<MomentReport>,
}

impl MomentBatch {
    pub fn fraction_within(&self) -> f64 {
        self.within as f64 / self.total as f64
    }

    /// Columns `alpha, closed_form, mc_estimate, mc_stderr`.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["alpha", "closed_form", "mc_estimate", "mc_stderr"])?;
        for r in &self.reports {
            wtr.write_record([
                r.alpha.to_string(),
                r.closed_form.to_string(),
                MomentValue::Float(r.mc_estimate).to_string(),
                format!("{:e}", r.mc_stderr),
            ])?;
        }
        wtr.flush()
    }
}

/// Random multi-indices for a batch: half diagonal (nonzero moments), half unrestricted.
pub fn random_alphas(variant: Variant, count: usize, seed: u64) -> Vec<MultiIndex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let d = variant.dim();
    let max_entry = match variant {
        Variant::D4 => 3,
        Variant::D2 => 6,
    };
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                MultiIndex::diagonal(d, rng.random_range(0..=max_entry))
            } else {
                MultiIndex::new((0..d).map(|_| rng.random_range(0..=max_entry)).collect())
            }
        })
        .collect()
}

/// Runs [`mc_moment`] on `count` seeded random moments; moment `i` uses seed `seed + i`.
pub fn mc_batch(variant: Variant, count: usize, samples: usize, seed: u64) -> Result<MomentBatch> {
    let alphas = random_alphas(variant, count, seed);
    let reports = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| mc_moment(variant, a, samples, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let within = reports.iter().filter(|r| r.within(MC_SIGMAS)).count();
    Ok(MomentBatch { variant, seed, samples, within, total: reports.len(), reports })
}
