//! The vector `g ∈ H²_d` with `∫ φ dμ = ⟨M_φ 1, g⟩` for every polynomial `φ`.
//!
//! d = 4: `g = K(·,1)∘r = Σ aₖ 16ᵏ (z₁z₂z₃z₄)ᵏ`, all rational.
//! d = 2: `g = f∘r` where `f = Σ aₙ conj(σ̂(−n)) zⁿ` represents integration against `σ`
//! in the disc space, giving coefficients `aₙ 2ⁿ conj(σ̂(−n))` on `(z₁z₂)ⁿ`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::measure::{MomentValue, PushforwardMeasure, Variant};
use crate::cantor::FourierTable;
use crate::disc_kernel::KernelSequence;
use crate::error::{Error, Result};
use crate::exact::{
    da_inner, da_norm_sq, monomial_norm_sq, multi_indices_up_to, r_scale, ExactComplex, ExactRational,
    MultiIndex, Polynomial,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum WitnessCoeffs {
    Exact(Vec<ExactComplex>),
    Float(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormSq {
    Exact(ExactRational),
    Float(f64),
}

impl NormSq {
    pub fn to_f64(&self) -> f64 {
        match self {
            NormSq::Exact(q) => q.to_f64(),
            NormSq::Float(x) => *x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenkinWitness {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub n_max: usize,
    /// Coefficient of `(z₁⋯z_d)ⁿ` for `n = 0..=N`.
    pub diag_coeffs: WitnessCoeffs,
    /// `‖g‖²_{H²_d}`, computed from the coefficients.
    pub norm_sq: NormSq,
}

impl HenkinWitness {
    pub fn dim(&self) -> usize {
        self.variant.dim()
    }

    /// The exact polynomial `g` (d = 4 only).
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        let WitnessCoeffs::Exact(c) = &self.diag_coeffs else { return None };
        let mut p = Polynomial::zero(self.dim());
        for (k, ck) in c.iter().enumerate() {
            p.add_term(MultiIndex::diagonal(self.dim(), k as u32), ck.clone());
        }
        Some(p)
    }

    /// `⟨z^α, g⟩_{H²_d} = conj(g_α)·‖z^α‖²`.
    pub fn inner_with_monomial(&self, alpha: &MultiIndex) -> Result<MomentValue> {
        if alpha.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: alpha.dim() });
        }
        let k = alpha.diagonal_value().map(|k| k as usize).filter(|&k| k <= self.n_max);
        Ok(match (&self.diag_coeffs, k) {
            (WitnessCoeffs::Exact(_), _) => {
                let g = self.as_polynomial().expect("exact coefficients");
                MomentValue::Exact(da_inner(&Polynomial::monomial(alpha.clone(), ExactComplex::one()), &g)?)
            }
            (WitnessCoeffs::Float(c), Some(k)) => {
                MomentValue::Float(c[k].conj() * monomial_norm_sq(alpha).to_f64())
            }
            (WitnessCoeffs::Float(_), None) => MomentValue::Float(Complex64::new(0.0, 0.0)),
        })
    }

    /// `⟨φ, g⟩` by linearity.
    pub fn inner_with(&self, phi: &Polynomial) -> Result<MomentValue> {
        if phi.dimension() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: phi.dimension() });
        }
        match &self.diag_coeffs {
            WitnessCoeffs::Exact(_) => {
                Ok(MomentValue::Exact(da_inner(phi, &self.as_polynomial().expect("exact"))?))
            }
            WitnessCoeffs::Float(_) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (alpha, c) in phi.terms() {
                    acc += c.to_complex64() * self.inner_with_monomial(alpha)?.to_complex64();
                }
                Ok(MomentValue::Float(acc))
            }
        }
    }
}

/// Builds `g` truncated at `(z₁⋯z_d)^N`. The d = 2 variant reads `σ̂` from `table`.
pub fn build_witness(variant: Variant, n_max: usize, table: Option<&FourierTable>) -> Result<HenkinWitness> {
    let d = variant.dim();
    let seq = KernelSequence::exact(d, n_max)?;
    let a = seq.a_exact().expect("exact sequence");
    let c = ExactRational::from_integer(r_scale(d)?);
    match variant {
        Variant::D4 => {
            let mut coeffs = Vec::with_capacity(n_max + 1);
            let mut ck = ExactRational::one();
            for ak in a {
                coeffs.push(ExactComplex::real(ak * &ck));
                ck *= &c;
            }
            let mut w = HenkinWitness {
                variant,
                n_max,
                diag_coeffs: WitnessCoeffs::Exact(coeffs),
                norm_sq: NormSq::Exact(ExactRational::zero()),
            };
            w.norm_sq = NormSq::Exact(da_norm_sq(&w.as_polynomial().expect("exact")));
            Ok(w)
        }
        Variant::D2 => {
            let table = table.ok_or_else(|| Error::InvalidParameter("d = 2 witness needs a Fourier table".into()))?;
            if table.max_n() < n_max {
                return Err(Error::TableTooShort { requested: n_max as i64, available: table.max_n() });
            }
            let mut coeffs = Vec::with_capacity(n_max + 1);
            let mut norm_sq = 0.0;
            for (n, an) in seq.a_float().iter().enumerate() {
                let s = table.get(-(n as i64))?;
                let gn = s.conj() * (an * 2f64.powi(n as i32));
                norm_sq += gn.norm_sqr() * monomial_norm_sq(&MultiIndex::diagonal(2, n as u32)).to_f64();
                coeffs.push(gn);
            }
            Ok(HenkinWitness { variant, n_max, diag_coeffs: WitnessCoeffs::Float(coeffs), norm_sq: NormSq::Float(norm_sq) })
        }
    }
}

/// Tolerance of the d = 2 identity on the diagonal.
pub const D2_IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenkinEntry {
    pub alpha: MultiIndex,
    pub moment: MomentValue,
    pub inner: MomentValue,
    pub abs_diff: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenkinReport {
    pub variant: Variant,
    pub maxdeg: u32,
    pub monomials_checked: usize,
    pub off_diagonal_checked: usize,
    /// Every off-diagonal pair had moment and inner product both exactly zero.
    pub off_diagonal_exact_zero: bool,
    pub max_abs_diff: f64,
    pub diagonal: Vec<HenkinEntry>,
    /// Non-diagonal monomials where the identity failed.
    pub failures: Vec<HenkinEntry>,
    pub pass: bool,
}

/// Checks `∫ z^α dμ = ⟨z^α, g⟩` for every `|α| ≤ maxdeg`: exact equality for d = 4,
/// within [`D2_IDENTITY_TOL`] on the diagonal and exactly zero off-diagonal for d = 2.
pub fn henkin_identity_check(measure: &PushforwardMeasure, maxdeg: u32, witness: &HenkinWitness) -> Result<HenkinReport> {
    if measure.variant() != witness.variant {
        return Err(Error::InvalidParameter("measure and witness variants differ".into()));
    }
    if witness.n_max < maxdeg as usize {
        return Err(Error::TruncationTooSmall { have: witness.n_max, need: maxdeg as usize });
    }
    let exact = measure.variant() == Variant::D4;
    let g_poly = witness.as_polynomial();
    let mut report = HenkinReport {
        variant: measure.variant(),
        maxdeg,
        monomials_checked: 0,
        off_diagonal_checked: 0,
        off_diagonal_exact_zero: true,
        max_abs_diff: 0.0,
        diagonal: Vec::new(),
        failures: Vec::new(),
        pass: true,
    };
    for alpha in multi_indices_up_to(measure.dim(), maxdeg) {
        let moment = measure.moment(&alpha)?;
        let inner = match &g_poly {
            Some(g) => MomentValue::Exact(da_inner(&Polynomial::monomial(alpha.clone(), ExactComplex::one()), g)?),
            None => witness.inner_with_monomial(&alpha)?,
        };
        let abs_diff = (moment.to_complex64() - inner.to_complex64()).norm();
        let diagonal = alpha.diagonal_value().is_some();
        let pass = if exact {
            moment == inner
        } else if diagonal {
            abs_diff <= D2_IDENTITY_TOL
        } else {
            moment.is_exact_zero() && inner.is_exact_zero()
        };
        report.monomials_checked += 1;
        report.max_abs_diff = report.max_abs_diff.max(abs_diff);
        if !diagonal {
            report.off_diagonal_checked += 1;
            report.off_diagonal_exact_zero &= moment.is_exact_zero() && inner.is_exact_zero();
        }
        report.pass &= pass;
        let entry = HenkinEntry { alpha, moment, inner, abs_diff, pass };
        if diagonal {
            report.diagonal.push(entry);
        } else if !pass {
            report.failures.push(entry);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalBoundReport {
    pub variant: Variant,
    pub trials: usize,
    pub seed: u64,
    pub witness_norm: f64,
    /// Largest `|∫φ dμ| / (‖φ‖·‖g‖)` observed.
    pub max_ratio: f64,
    pub failures: usize,
    pub pass: bool,
}

/// Absolute slack on the d = 2 Cauchy-Schwarz comparison.
pub const BOUND_SLACK: f64 = 1e-9;

fn random_gaussian_rational(rng: &mut ChaCha8Rng) -> ExactComplex {
    let part = |rng: &mut ChaCha8Rng| ExactRational::new(rng.random_range(-20i64..=20), rng.random_range(1i64..=9));
    ExactComplex::new(part(rng), part(rng))
}

/// Random sparse polynomial of degree `≤ max_deg`; about half of the terms sit on the
/// diagonal, where the moments are nonzero.
pub fn random_polynomial(dim: usize, max_deg: u32, terms: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    for t in 0..terms {
        let alpha = if t % 2 == 0 {
            MultiIndex::diagonal(dim, rng.random_range(0..=max_deg / dim as u32))
        } else {
            let mut left = rng.random_range(0..=max_deg);
            let mut v = vec![0u32; dim];
            for slot in v.iter_mut() {
                let take = rng.random_range(0..=left);
                *slot = take;
                left -= take;
            }
            MultiIndex::new(v)
        };
        p.add_term(alpha, random_gaussian_rational(rng));
    }
    p
}

/// Checks `|∫φ dμ| ≤ ‖φ‖_{H²_d}·‖g‖` on random polynomials of degree `≤ N`.
/// For d = 4 the squared comparison is done in exact arithmetic.
pub fn functional_bound_check(
    measure: &PushforwardMeasure,
    witness: &HenkinWitness,
    trials: usize,
    seed: u64,
) -> Result<FunctionalBoundReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = witness.dim();
    let g_norm = witness.norm_sq.to_f64().sqrt();
    let mut failures = 0;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..trials {
        let terms = rng.random_range(1..=12);
        let phi = random_polynomial(d, witness.n_max as u32, terms, &mut rng);
        if phi.is_zero() {
            continue;
        }
        let integral = measure.integrate(&phi)?;
        let phi_norm_sq = da_norm_sq(&phi);
        let ok = match (&integral, &witness.norm_sq) {
            (MomentValue::Exact(i), NormSq::Exact(g)) => i.norm_sq() <= &phi_norm_sq * g,
            _ => integral.to_complex64().norm() <= phi_norm_sq.to_f64().sqrt() * g_norm + BOUND_SLACK,
        };
        let ratio = integral.to_complex64().norm() / (phi_norm_sq.to_f64().sqrt() * g_norm);
        max_ratio = max_ratio.max(ratio);
        if !ok {
            failures += 1;
        }
    }
    Ok(FunctionalBoundReport {
        variant: witness.variant,
        trials,
        seed,
        witness_norm: g_norm,
        max_ratio,
        failures,
        pass: failures == 0,
    })
}

/// `Σ_{n≤N} aₙ`, the d = 4 value of `‖g‖²` as an independent exact sum.
pub fn d4_norm_sq_from_sequence(n_max: usize) -> ExactRational {
    let seq = KernelSequence::exact(4, n_max).expect("d = 4");
    seq.a_exact().expect("exact").iter().cloned().sum()
}
