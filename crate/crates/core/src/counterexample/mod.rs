//! The counterexample measures `μ` on the spheres `S₄` and `S₂`.
//!
//! Both are pushforwards through a map `h` whose image lies in `r⁻¹(1)` (d = 4)
//! or `r⁻¹(E)` (d = 2, `E` the circular Cantor set). Moments have closed forms,
//! there is an explicit `g ∈ H²_d` with `∫ φ dμ = ⟨M_φ 1, g⟩`, and for d = 4 the
//! peak function `(1 + r)/2` witnesses that the support is totally null.

mod measure;
mod montecarlo;
mod peak;
mod witness;

pub use measure::{
    closed_form_moment, h_d2, h_d4, moment_d2, moment_d4, r_eval, MomentValue, PushforwardMeasure, Variant,
};
pub use montecarlo::{
    mc_batch, mc_moment, random_alphas, MomentBatch, MomentReport, MC_ROUNDING_SLACK, MC_SIGMAS, MIN_SAMPLES,
};
pub use peak::{
    interior_grid, non_henkin_witness, peak_check, peak_function, peak_power_coeffs, peak_power_integral,
    NonHenkinEntry, NonHenkinReport, PeakReport, DEFAULT_DELTA, GRID_SIZE, PEAK_TOL,
};
pub use witness::{
    build_witness, d4_norm_sq_from_sequence, functional_bound_check, henkin_identity_check, random_polynomial,
    FunctionalBoundReport, HenkinEntry, HenkinReport, HenkinWitness, NormSq, WitnessCoeffs, BOUND_SLACK,
    D2_IDENTITY_TOL,
};
