//! Exact and numerical checks for two pushforward measures, on `S₄` and `S₂`,
//! whose moments are inner products `⟨φ, g⟩` in `H²_d` for a fixed `g`, while
//! powers of a peak function tend to zero inside the ball and integrate to one.
//!
//! * [`exact`]: multi-indices, exact rationals, `H²_d` norms and inner products.
//! * [`disc_kernel`]: the disc kernels `Σ aₙ (z w̄)ⁿ` with `aₙ = ‖rⁿ‖⁻²`.
//! * [`cantor`]: Fourier coefficients and Riesz ½-energy of the Cantor measure.
//! * [`counterexample`]: the measures `μ`, their moments, and the witness `g`.
//! * [`compression`]: finite-section lower bounds for multiplier norms.

pub mod cantor;
pub mod compression;
pub mod counterexample;
pub mod disc_kernel;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod report;

pub use cantor::{CantorMeasure, EnergyEstimate, FourierTable};
pub use counterexample::{HenkinWitness, MomentReport, PushforwardMeasure, Variant};
pub use disc_kernel::KernelSequence;
pub use error::{Error, Result};
pub use exact::{ExactComplex, ExactRational, MultiIndex, Polynomial};
pub use report::{report_schema_version, CheckResult, Report};
