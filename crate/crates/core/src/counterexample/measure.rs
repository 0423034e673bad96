use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cantor::{fourier_coeff, FourierTable, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::exact::{ExactComplex, ExactRational, MultiIndex, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    D4,
    D2,
}

impl Variant {
    pub fn dim(self) -> usize {
        match self {
            Variant::D4 => 4,
            Variant::D2 => 2,
        }
    }

    pub fn from_dim(d: usize) -> Result<Self> {
        match d {
            4 => Ok(Variant::D4),
            2 => Ok(Variant::D2),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::D4 => "D4",
            Variant::D2 => "D2",
        })
    }
}

/// A moment or inner product, exact whenever the construction is rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MomentValue {
    Exact(ExactComplex),
    Float(Complex64),
}

impl MomentValue {
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            MomentValue::Exact(c) => c.to_complex64(),
            MomentValue::Float(c) => *c,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        match self {
            MomentValue::Exact(c) => c.is_zero(),
            MomentValue::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }
}

impl fmt::Display for MomentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentValue::Exact(c) if c.im.is_zero() => write!(f, "{}", c.re),
            MomentValue::Exact(c) => write!(f, "{}+{}i", c.re, c.im),
            MomentValue::Float(c) => write!(f, "{:e}{:+e}i", c.re, c.im),
        }
    }
}

/// `r(z) = 16 z₁z₂z₃z₄` (d = 4) or `2 z₁z₂` (d = 2).
pub fn r_eval(z: &[Complex64]) -> Complex64 {
    let c = match z.len() {
        4 => 16.0,
        2 => 2.0,
        other => panic!("r is defined for d = 2 or 4, got {other}"),
    };
    z.iter().product::<Complex64>() * c
}

/// `h(ζ₁,ζ₂,ζ₃) = ½(ζ₁, ζ₂, ζ₃, conj(ζ₁ζ₂ζ₃))`, mapping the 3-torus into `r⁻¹(1)`.
pub fn h_d4(zeta: [Complex64; 3]) -> [Complex64; 4] {
    let last = (zeta[0] * zeta[1] * zeta[2]).conj();
    [zeta[0] * 0.5, zeta[1] * 0.5, zeta[2] * 0.5, last * 0.5]
}

/// `h(ζ₁,ζ₂) = 2^{-1/2}(ζ₁, conj(ζ₁)ζ₂)`, mapping `𝕋 × E` into `r⁻¹(E)`.
pub fn h_d2(zeta: [Complex64; 2]) -> [Complex64; 2] {
    [zeta[0] * FRAC_1_SQRT_2, zeta[0].conj() * zeta[1] * FRAC_1_SQRT_2]
}

/// `∫ z^α dμ` for the d = 4 measure: `2^{-4k}` when `α = (k,k,k,k)`, else zero.
pub fn moment_d4(alpha: &MultiIndex) -> Result<ExactRational> {
    if alpha.dim() != 4 {
        return Err(Error::DimensionMismatch { left: 4, right: alpha.dim() });
    }
    Ok(match alpha.diagonal_value() {
        Some(k) => ExactRational::new(1, num_traits::pow(num_bigint::BigInt::from(2), 4 * k as usize)),
        None => ExactRational::zero(),
    })
}

/// `∫ z₁^m z₂^n dμ` for the d = 2 measure: `2^{-n} σ̂(−n)` when `m = n`, else zero.
pub fn moment_d2(m: u32, n: u32, table: &FourierTable) -> Result<Complex64> {
    let s = table.get(-(n as i64))?;
    if m != n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(s * 0.5f64.powi(n as i32))
}

/// The pushforward measure `μ = h_*(m)` (d = 4) or `h_*(m × σ)` (d = 2).
#[derive(Clone, Debug, PartialEq)]
pub enum PushforwardMeasure {
    D4,
    D2 { table: FourierTable },
}

impl PushforwardMeasure {
    pub fn d4() -> Self {
        PushforwardMeasure::D4
    }

    pub fn d2(table: FourierTable) -> Self {
        PushforwardMeasure::D2 { table }
    }

    pub fn variant(&self) -> Variant {
        match self {
            PushforwardMeasure::D4 => Variant::D4,
            PushforwardMeasure::D2 { .. } => Variant::D2,
        }
    }

    pub fn dim(&self) -> usize {
        self.variant().dim()
    }

    pub fn moment(&self, alpha: &MultiIndex) -> Result<MomentValue> {
        match self {
            PushforwardMeasure::D4 => Ok(MomentValue::Exact(moment_d4(alpha)?.into())),
            PushforwardMeasure::D2 { table } => {
                if alpha.dim() != 2 {
                    return Err(Error::DimensionMismatch { left: 2, right: alpha.dim() });
                }
                let e = alpha.entries();
                Ok(MomentValue::Float(moment_d2(e[0], e[1], table)?))
            }
        }
    }

    /// `∫ φ dμ` by linearity over the monomial moments.
    pub fn integrate(&self, phi: &Polynomial) -> Result<MomentValue> {
        if phi.dimension() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: phi.dimension() });
        }
        match self {
            PushforwardMeasure::D4 => {
                let mut acc = ExactComplex::zero();
                for (alpha, c) in phi.terms() {
                    let m = moment_d4(alpha)?;
                    if !m.is_zero() {
                        acc += &c.scale(&m);
                    }
                }
                Ok(MomentValue::Exact(acc))
            }
            PushforwardMeasure::D2 { .. } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (alpha, c) in phi.terms() {
                    acc += c.to_complex64() * self.moment(alpha)?.to_complex64();
                }
                Ok(MomentValue::Float(acc))
            }
        }
    }
}

/// Closed-form moment used by Monte Carlo comparisons; d = 2 uses the recursion directly.
pub fn closed_form_moment(variant: Variant, alpha: &MultiIndex) -> Result<MomentValue> {
    match variant {
        Variant::D4 => Ok(MomentValue::Exact(moment_d4(alpha)?.into())),
        Variant::D2 => {
            if alpha.dim() != 2 {
                return Err(Error::DimensionMismatch { left: 2, right: alpha.dim() });
            }
            let (m, n) = (alpha.entries()[0], alpha.entries()[1]);
            if m != n {
                return Ok(MomentValue::Float(Complex64::new(0.0, 0.0)));
            }
            let s = fourier_coeff(-(n as i64), DEFAULT_EPS);
            Ok(MomentValue::Float(s * 0.5f64.powi(n as i32)))
        }
    }
}
