//! One-variable kernels `K(z,w) = Σ aₙ (z w̄)ⁿ` induced on the disc by `r`.
//!
//! `aₙ = ‖r(z)ⁿ‖⁻²` in `H²_d`. For `d = 2` this is the Dirichlet-type kernel
//! `(1 − z w̄)^{-1/2}` with `aₙ ≍ (n+1)^{-1/2}`; for `d = 4`, `aₙ ≍ (n+1)^{-3/2}`
//! and `Σ aₙ < ∞`, so the kernel is continuous up to the boundary.

use std::io::Write;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{factorial, r_power_norm_sq, r_power_norm_sq_f64_table, stirling_envelope, ExactRational};

/// Default truncation for floating sums.
pub const DEFAULT_FLOAT_N: usize = 10_000;
/// Default truncation for exact tables.
pub const DEFAULT_EXACT_N: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSequence {
    d: usize,
    #[serde(rename = "N")]
    n_max: usize,
    a_exact: Option<Vec<ExactRational>>,
    a_float: Vec<f64>,
}

fn check_dim(d: usize) -> Result<()> {
    match d {
        2 | 4 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

impl KernelSequence {
    /// Exact coefficients `a₀ … a_N` together with their nearest floats.
    pub fn exact(d: usize, n_max: usize) -> Result<Self> {
        check_dim(d)?;
        let a_exact: Vec<ExactRational> = (0..=n_max)
            .into_par_iter()
            .map(|n| r_power_norm_sq(d, n as u32).recip())
            .collect();
        let a_float = a_exact.iter().map(ExactRational::to_f64).collect();
        Ok(KernelSequence { d, n_max, a_exact: Some(a_exact), a_float })
    }

    /// Floating coefficients only, for truncations where exact rationals are too slow.
    pub fn float(d: usize, n_max: usize) -> Result<Self> {
        check_dim(d)?;
        let a_float = r_power_norm_sq_f64_table(d, n_max).into_iter().map(f64::recip).collect();
        Ok(KernelSequence { d, n_max, a_exact: None, a_float })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn a_exact(&self) -> Option<&[ExactRational]> {
        self.a_exact.as_deref()
    }

    pub fn a_float(&self) -> &[f64] {
        &self.a_float
    }

    /// `aₙ·(n+1)^{(d-1)/2}`.
    pub fn a_times_power(&self, n: usize) -> f64 {
        self.a_float[n] * stirling_envelope(self.d, n as f64)
    }

    /// Columns `n, a_exact, a_float, a_times_power`; `a_exact` is empty for float-only sequences.
    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["n", "a_exact", "a_float", "a_times_power"])?;
        for n in 0..=self.n_max {
            let exact = self.a_exact.as_ref().map(|a| a[n].to_string()).unwrap_or_default();
            wtr.write_record([
                n.to_string(),
                exact,
                format!("{:e}", self.a_float[n]),
                format!("{:e}", self.a_times_power(n)),
            ])?;
        }
        wtr.flush()
    }
}

/// Checks `aₙ = (2n)!/(4ⁿ (n!)²)` for the `d = 2` sequence.
pub fn dirichlet_coeff_check(n: u32) -> bool {
    let a_n = r_power_norm_sq(2, n).recip();
    let nf = factorial(n as u64);
    let denom = num_traits::pow(num_bigint::BigInt::from(4), n as usize) * &nf * &nf;
    a_n == ExactRational::new(factorial(2 * n as u64), denom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    /// Provable upper bound on the omitted terms.
    Bound,
    /// Integral comparison with the fitted envelope; not certified.
    Estimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub tail: f64,
    pub tail_kind: TailKind,
}

/// `Σ_{n>N} (n+1)^{-3/2} ≈ 2/(N+3/2)^{1/2}`, by the midpoint integral rule.
fn d4_tail_sum(n_max: usize) -> f64 {
    2.0 / (n_max as f64 + 1.5).sqrt()
}

/// Partial sum of `K(z, w)` with a bound or estimate for the truncated tail.
pub fn kernel_eval(seq: &KernelSequence, z: Complex64, w: Complex64) -> Result<KernelValue> {
    const SLACK: f64 = 1e-12;
    for p in [z, w] {
        if p.norm() > 1.0 + SLACK {
            return Err(Error::OutsideDisc(p.norm()));
        }
    }
    let x = z * w.conj();
    let rho = x.norm();
    if seq.d == 2 && rho >= 1.0 - SLACK {
        return Err(Error::DivergenceRisk(rho));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for &a in &seq.a_float {
        value += pow * a;
        pow *= x;
    }
    let n = seq.n_max;
    let a_last = seq.a_float[n];
    // aₙ is decreasing, so a_N ρ^{N+1}/(1−ρ) dominates the tail whenever ρ < 1.
    let geometric = (rho < 1.0).then(|| a_last * rho.powi(n as i32 + 1) / (1.0 - rho));
    let (tail, tail_kind) = if seq.d == 4 {
        let envelope = a_last * stirling_envelope(4, n as f64) * d4_tail_sum(n);
        match geometric {
            Some(g) if g <= envelope => (g, TailKind::Bound),
            _ => (envelope, TailKind::Estimate),
        }
    } else {
        (geometric.expect("rho < 1 checked above"), TailKind::Bound)
    };
    Ok(KernelValue { value, tail, tail_kind })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSum {
    pub d: usize,
    #[serde(rename = "N")]
    pub n_max: usize,
    pub partial: f64,
    /// `None` when the series diverges (`d = 2`).
    pub tail_estimate: Option<f64>,
}

/// `Σ_{n≤N} aₙ`, with the `(n+1)^{-3/2}` envelope tail for `d = 4`.
pub fn sum_a_partial(d: usize, n_max: usize) -> Result<PartialSum> {
    let seq = KernelSequence::float(d, n_max)?;
    let partial = seq.a_float.iter().sum();
    let tail_estimate = (d == 4).then(|| seq.a_times_power(n_max) * d4_tail_sum(n_max));
    Ok(PartialSum { d, n_max, partial, tail_estimate })
}

/// Observed range of `aₙ·(n+1)^{(d-1)/2}` over `n_lo ≤ n ≤ n_hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub d: usize,
    pub n_lo: usize,
    pub n_hi: usize,
    pub min: f64,
    pub max: f64,
    pub argmin: usize,
    pub argmax: usize,
}

impl Envelope {
    pub fn relative_spread(&self) -> f64 {
        self.max / self.min - 1.0
    }
}

pub fn envelope(d: usize, n_lo: usize, n_hi: usize) -> Result<Envelope> {
    if n_lo > n_hi {
        return Err(Error::InvalidParameter(format!("empty range {n_lo}..={n_hi}")));
    }
    let seq = KernelSequence::float(d, n_hi)?;
    let mut env = Envelope { d, n_lo, n_hi, min: f64::INFINITY, max: 0.0, argmin: n_lo, argmax: n_lo };
    for n in n_lo..=n_hi {
        let v = seq.a_times_power(n);
        if v < env.min {
            env.min = v;
            env.argmin = n;
        }
        if v > env.max {
            env.max = v;
            env.argmax = n;
        }
    }
    Ok(env)
}

/// `(2n)!/(4ⁿ(n!)²)` recomputed as a product of ratios `(2k−1)/(2k)`, for float cross-checks.
pub fn dirichlet_coeff_f64(n: usize) -> f64 {
    (1..=n).map(|k| (2 * k - 1) as f64 / (2 * k) as f64).product()
}

/// For `d = 2` every `aₙ = binom(2n, n)/4ⁿ` reduces to an odd numerator over a power of two.
pub fn denominators_are_powers_of_two(seq: &KernelSequence) -> Option<bool> {
    let a = seq.a_exact()?;
    Some(a.iter().all(|q| {
        let d = q.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        (d >> tz as usize).to_u64() == Some(1) && q.numer().is_odd()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactRational {
        ExactRational::new(p, d)
    }

    #[test]
    fn build_examples() {
        let s = KernelSequence::exact(2, 0).unwrap();
        assert_eq!(s.a_exact().unwrap(), &[q(1, 1)]);
        let s = KernelSequence::exact(2, 2).unwrap();
        assert_eq!(s.a_exact().unwrap(), &[q(1, 1), q(1, 2), q(3, 8)]);
        let s = KernelSequence::exact(4, 1).unwrap();
        assert_eq!(s.a_exact().unwrap(), &[q(1, 1), q(3, 32)]);
        assert_eq!(KernelSequence::exact(3, 1), Err(Error::UnsupportedDimension(3)));
    }

    #[test]
    fn sequence_inverts_r_powers() {
        for d in [2usize, 4] {
            let s = KernelSequence::exact(d, 40).unwrap();
            for (n, a) in s.a_exact().unwrap().iter().enumerate() {
                assert_eq!(a * &r_power_norm_sq(d, n as u32), q(1, 1));
                assert!(a.is_positive());
            }
        }
    }

    #[test]
    fn d2_denominators_are_dyadic() {
        let s = KernelSequence::exact(2, 60).unwrap();
        assert_eq!(denominators_are_powers_of_two(&s), Some(true));
    }

    #[test]
    fn dirichlet_examples() {
        assert!(dirichlet_coeff_check(0));
        assert!(dirichlet_coeff_check(1));
        assert!(dirichlet_coeff_check(50));
        let s = KernelSequence::float(2, 300).unwrap();
        for n in [0usize, 1, 10, 300] {
            assert!((s.a_float()[n] / dirichlet_coeff_f64(n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_at_origin_is_one() {
        let s = KernelSequence::float(2, 50).unwrap();
        let v = kernel_eval(&s, Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.4)).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        assert_eq!(v.tail, 0.0);
    }

    #[test]
    fn d2_kernel_closed_form() {
        let s = KernelSequence::float(2, 200).unwrap();
        for k in 1..=9 {
            let rho = k as f64 / 10.0;
            let z = Complex64::new(rho, 0.0);
            let v = kernel_eval(&s, z, z).unwrap();
            let exact = (1.0 - rho * rho).powf(-0.5);
            assert_eq!(v.tail_kind, TailKind::Bound);
            assert!((v.value.re - exact).abs() <= v.tail + 1e-13, "rho={rho}");
        }
    }

    #[test]
    fn d2_boundary_is_rejected() {
        let s = KernelSequence::float(2, 10).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(matches!(kernel_eval(&s, one, one), Err(Error::DivergenceRisk(_))));
        let out = Complex64::new(1.5, 0.0);
        assert!(matches!(kernel_eval(&s, out, Complex64::new(0.0, 0.0)), Err(Error::OutsideDisc(_))));
    }

    #[test]
    fn d4_kernel_at_one_converges() {
        let one = Complex64::new(1.0, 0.0);
        let small = kernel_eval(&KernelSequence::float(4, 1_000).unwrap(), one, one).unwrap();
        let big = kernel_eval(&KernelSequence::float(4, 10_000).unwrap(), one, one).unwrap();
        assert_eq!(big.tail_kind, TailKind::Estimate);
        assert!((big.value.re - small.value.re).abs() < 2e-2);
        // envelope tail estimate should account for most of the gap
        let gap = big.value.re - small.value.re;
        assert!((small.tail - big.tail - gap).abs() < 0.1 * gap);
    }

    #[test]
    fn partial_sums() {
        let p = sum_a_partial(4, 0).unwrap();
        assert_eq!(p.partial, 1.0);
        assert!(sum_a_partial(2, 100).unwrap().tail_estimate.is_none());
    }

    #[test]
    fn d4_increments_shrink_like_inverse_sqrt() {
        // S(2N) − S(N) ≈ C·2(1 − 2^{-1/2})/√N for aₙ ≈ C n^{-3/2}
        let s = |n| sum_a_partial(4, n).unwrap().partial;
        let inc1 = s(5_000) - s(2_500);
        let inc2 = s(10_000) - s(5_000);
        assert!((inc1 / inc2 - 2f64.sqrt()).abs() < 0.01);
    }

    #[test]
    fn d2_partial_sums_grow_like_sqrt() {
        let s = |n| sum_a_partial(2, n).unwrap().partial;
        let inc1 = s(5_000) - s(2_500);
        let inc2 = s(10_000) - s(5_000);
        assert!((inc2 / inc1 - 2f64.sqrt()).abs() < 0.01);
    }

    #[test]
    fn coefficients_decrease() {
        for d in [2usize, 4] {
            let s = KernelSequence::float(d, 1_000).unwrap();
            assert!(s.a_float().windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let s = KernelSequence::exact(2, 2).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,a_exact,a_float,a_times_power");
        assert!(lines[3].starts_with("2,3/8,3.75e-1,"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn json_shape() {
        let s = KernelSequence::exact(2, 1).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["N"], 1);
        assert_eq!(v["a_exact"][1], "1/2");
    }
}
