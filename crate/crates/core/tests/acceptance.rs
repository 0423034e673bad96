//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and asserts the same verdict.
//!
//! Run with `cargo test -p henkin-core --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order and keep the wall-clock budgets meaningful.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use henkin_core::cantor::{
    riesz_energy, weighted_fourier_sweep, AtomPlacement, FourierTable, DEFAULT_EPS,
};
use henkin_core::compression::{compression_norm, diagonal_shift_weights};
use henkin_core::counterexample::{
    build_witness, henkin_identity_check, mc_batch, non_henkin_witness, peak_check, peak_power_integral,
    MomentValue, PushforwardMeasure, Variant, DEFAULT_DELTA, MC_SIGMAS,
};
use henkin_core::disc_kernel::{dirichlet_coeff_check, envelope, KernelSequence};
use henkin_core::exact::{
    compose_with_r, isometry_check, monomial_norm_sq, multi_indices_up_to, ExactComplex, ExactRational,
};

const SEED: u64 = 20_240_917;

fn verdict(id: u32, title: &str, pass: bool, elapsed: Duration, budget: Duration, detail: String) {
    let ok = pass && elapsed <= budget;
    println!(
        "{} criterion {id:02} {title}: {detail} [{:.2}s / budget {}s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(pass, "criterion {id} ({title}) failed: {detail}");
    assert!(elapsed <= budget, "criterion {id} ({title}) exceeded {budget:?}: {elapsed:?}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn big_factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Counts words of length `k` over `d` letters by letter content: the coefficient of
/// `z^α w̄^α` in `⟨z,w⟩^k`. Pure enumeration, no multinomial formula.
fn word_count_oracle(d: usize, max_deg: u32) -> BTreeMap<Vec<u32>, u64> {
    let mut counts = BTreeMap::new();
    for k in 0..=max_deg {
        let total = (d as u64).pow(k);
        for word in 0..total {
            let mut alpha = vec![0u32; d];
            let mut w = word;
            for _ in 0..k {
                alpha[(w % d as u64) as usize] += 1;
                w /= d as u64;
            }
            *counts.entry(alpha).or_insert(0) += 1;
        }
    }
    counts
}

/// `σ̂(n) = (−1)ⁿ ∏_{k≥1} cos(2πn/3ᵏ)`, the infinite product form.
fn cantor_product_oracle(n: i64) -> f64 {
    let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let mut p = sign;
    let mut scale = 3.0f64;
    for _ in 0..60 {
        p *= (std::f64::consts::TAU * n as f64 / scale).cos();
        scale *= 3.0;
    }
    p
}

#[test]
fn criterion_01_exact_norm_suite() {
    let mut oracle = BTreeMap::new();
    for d in 1..=4 {
        oracle.insert(d, word_count_oracle(d, 8));
    }
    let t = Instant::now();
    let mut checked = 0;
    let mut mismatches = 0;
    for d in 1..=4usize {
        for alpha in multi_indices_up_to(d, 8) {
            let count = oracle[&d][alpha.entries()];
            if monomial_norm_sq(&alpha) != ExactRational::new(1, count) {
                mismatches += 1;
            }
            checked += 1;
        }
    }
    let elapsed = t.elapsed();
    verdict(
        1,
        "monomial norms vs kernel expansion",
        mismatches == 0 && checked == 9 + 45 + 165 + 495,
        elapsed,
        secs(1),
        format!("{checked} indices, {mismatches} mismatches"),
    );
}

#[test]
fn criterion_02_dirichlet_coefficients() {
    let t = Instant::now();
    let seq = KernelSequence::exact(2, 200).unwrap();
    let flags: Vec<bool> = (0..=200).map(dirichlet_coeff_check).collect();
    let elapsed = t.elapsed();
    let a = seq.a_exact().unwrap();
    let mismatches = (0..=200u64)
        .filter(|&n| {
            let expect = ExactRational::new(
                big_factorial(2 * n),
                num_traits::pow(BigInt::from(4), n as usize) * big_factorial(n).pow(2),
            );
            a[n as usize] != expect
        })
        .count();
    let check_fail = flags.iter().filter(|ok| !**ok).count();
    verdict(
        2,
        "a_n = (2n)!/(4^n (n!)^2), n <= 200",
        mismatches == 0 && check_fail == 0,
        elapsed,
        secs(1),
        format!("201 coefficients, {mismatches} mismatches, {check_fail} self-check failures"),
    );
}

#[test]
fn criterion_03_stirling_asymptotics() {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for d in [2usize, 4] {
        let seq = KernelSequence::float(d, 10_000).unwrap();
        let v200 = seq.a_times_power(200);
        let v400 = seq.a_times_power(400);
        let drift = (v400 / v200 - 1.0).abs();
        let env = envelope(d, 0, 10_000).unwrap();
        let tail = envelope(d, 200, 10_000).unwrap();
        // Stirling: a_n (n+1)^{(d-1)/2} -> √d / (2π)^{(d-1)/2}
        let limit = (d as f64).sqrt() / std::f64::consts::TAU.powf((d as f64 - 1.0) / 2.0);
        let limit_gap = (seq.a_times_power(10_000) / limit - 1.0).abs();
        pass &= drift < 0.01 && limit_gap < 0.01;
        parts.push(format!(
            "d={d}: drift(200,400)={drift:.3e}, envelope n<=1e4 [{:.6}, {:.6}], n in [200,1e4] spread {:.3e}, gap to limit {limit:.6} at 1e4 {limit_gap:.2e}",
            env.min, env.max, tail.relative_spread()
        ));
    }
    verdict(3, "Stirling envelope", pass, t.elapsed(), secs(10), parts.join("; "));
}

#[test]
fn criterion_04_isometry() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let seqs: Vec<(usize, KernelSequence)> =
        [2usize, 4].into_iter().map(|d| (d, KernelSequence::exact(d, 30).unwrap())).collect();
    let mut failures = 0;
    let mut total = 0;
    for (_, seq) in &seqs {
        for _ in 0..100 {
            let deg = rng.random_range(0..=30usize);
            let coeffs: Vec<ExactComplex> = (0..=deg)
                .map(|_| {
                    ExactComplex::new(
                        ExactRational::new(rng.random_range(-50i64..=50), rng.random_range(1i64..=12)),
                        ExactRational::new(rng.random_range(-50i64..=50), rng.random_range(1i64..=12)),
                    )
                })
                .collect();
            let rep = isometry_check(&coeffs, seq).unwrap();
            if !rep.equal || rep.lhs != rep.rhs {
                failures += 1;
            }
            total += 1;
        }
    }
    verdict(
        4,
        "disc-to-ball isometry, exact",
        failures == 0,
        t.elapsed(),
        secs(30),
        format!("{total} lists (100 per d in {{2,4}}), {failures} inequalities"),
    );
}

#[test]
fn criterion_05_d4_henkin_identity() {
    let t = Instant::now();
    let w = build_witness(Variant::D4, 24, None).unwrap();
    let rep = henkin_identity_check(&PushforwardMeasure::d4(), 24, &w).unwrap();
    let elapsed = t.elapsed();
    // independent diagonal values 2^{-4k}
    let oracle_ok = rep.diagonal.iter().all(|e| {
        let k = e.alpha.diagonal_value().unwrap();
        let expect = ExactComplex::real(ExactRational::new(1, num_traits::pow(BigInt::from(2), 4 * k as usize)));
        e.moment == MomentValue::Exact(expect.clone()) && e.inner == MomentValue::Exact(expect)
    });
    verdict(
        5,
        "d=4 Henkin identity, |alpha| <= 24",
        rep.pass && oracle_ok && rep.monomials_checked == 20_475 && rep.diagonal.len() == 7,
        elapsed,
        secs(30),
        format!(
            "{} monomials, {} off-diagonal all exact zero: {}, diagonal matches 2^-4k: {oracle_ok}",
            rep.monomials_checked, rep.off_diagonal_checked, rep.off_diagonal_exact_zero
        ),
    );
}

#[test]
fn criterion_06_d4_non_henkin_witness() {
    let t = Instant::now();
    let rep = non_henkin_witness(50, 1_000, SEED).unwrap();
    let elapsed = t.elapsed();
    // ∫ rᵏ dμ = 1 since μ lives on r = 1, so the binomial sum is Σ C(n,k)/2ⁿ = 1
    let oracle_ok = (1..=50).all(|n| peak_power_integral(n).unwrap() == ExactComplex::one());
    let below = rep.first_below_1e6;
    verdict(
        6,
        "d=4 non-Henkin sequence",
        rep.pass && oracle_ok && below.is_some_and(|n| n <= 1_000),
        elapsed,
        secs(10),
        format!(
            "integrals == 1 for n <= 50: {}, grid max monotone: {}, first n below 1e-6: {below:?}, grid max at n=1000: {:.3e}",
            rep.integrals.iter().all(|e| e.equals_one),
            rep.grid_max_monotone,
            rep.grid_max.last().unwrap()
        ),
    );
}

#[test]
fn criterion_07_cantor_fourier_oracles() {
    let t = Instant::now();
    let rec = FourierTable::from_recursion(256, DEFAULT_EPS);
    let atoms = FourierTable::from_atoms(256, 14, AtomPlacement::Midpoint).unwrap();
    let elapsed = t.elapsed();
    let diff = rec.max_difference(&atoms);
    let sym = rec.symmetry_defect();
    let product_gap = rec
        .iter()
        .map(|(n, s)| (s - Complex64::new(cantor_product_oracle(n), 0.0)).norm())
        .fold(0.0, f64::max);
    let left = FourierTable::from_atoms(256, 14, AtomPlacement::LeftEndpoint).unwrap();
    verdict(
        7,
        "recursion vs level-14 atoms, |n| <= 256",
        diff <= 1e-6 && sym <= 2.0 * DEFAULT_EPS && product_gap <= 1e-9,
        elapsed,
        secs(10),
        format!(
            "midpoint atoms max diff {diff:.3e}, symmetry defect {sym:.3e}, product form gap {product_gap:.3e} (left-endpoint atoms: {:.3e})",
            rec.max_difference(&left)
        ),
    );
}

#[test]
fn criterion_08_weighted_fourier_sum() {
    let t = Instant::now();
    let checkpoints: Vec<usize> = (10..=17).map(|k| 1usize << k).collect();
    let sweep = weighted_fourier_sweep(&checkpoints);
    let elapsed = t.elapsed();
    let nondecreasing = sweep.windows(2).all(|w| w[1].1 >= w[0].1);
    let increases: Vec<(usize, f64)> = sweep.windows(2).map(|w| (w[0].0, w[1].1 / w[0].1 - 1.0)).collect();
    let slow = increases.iter().filter(|(n, _)| *n >= 1 << 14).all(|(_, inc)| *inc < 0.01);
    let sums: Vec<String> = sweep.iter().map(|(n, s)| format!("2^{}={s:.5}", n.trailing_zeros())).collect();
    let incs: Vec<String> = increases
        .iter()
        .map(|(n, inc)| format!("2^{}→+{:.2}%", n.trailing_zeros(), 100.0 * inc))
        .collect();
    verdict(
        8,
        "weighted Fourier sum growth",
        nondecreasing && slow,
        elapsed,
        secs(60),
        format!("sums [{}], doublings [{}], nondecreasing: {nondecreasing}", sums.join(", "), incs.join(", ")),
    );
}

#[test]
fn criterion_09_riesz_energy() {
    let t = Instant::now();
    let e10 = riesz_energy(10).unwrap();
    let e12 = riesz_energy(12).unwrap();
    let elapsed = t.elapsed();
    let rel = (e10.lower - e12.lower).abs() / e12.lower;
    let upper_rel = (e10.upper - e12.upper).abs() / e12.upper;
    verdict(
        9,
        "Riesz 1/2-energy levels 10 and 12",
        rel < 0.01 && e10.upper.is_finite() && e12.upper.is_finite(),
        elapsed,
        secs(60),
        format!(
            "lower L10={:.5} L12={:.5} (rel {rel:.3e}), upper L10={:.5} L12={:.5} (rel {upper_rel:.3e})",
            e10.lower, e12.lower, e10.upper, e12.upper
        ),
    );
}

#[test]
fn criterion_10_d2_henkin_identity() {
    let t = Instant::now();
    let maxdeg = 200;
    let moment_side = FourierTable::from_recursion(maxdeg as usize, DEFAULT_EPS);
    let witness_side = FourierTable::from_atoms(maxdeg as usize, 14, AtomPlacement::Midpoint).unwrap();
    let w = build_witness(Variant::D2, maxdeg as usize, Some(&witness_side)).unwrap();
    let rep = henkin_identity_check(&PushforwardMeasure::d2(moment_side), maxdeg, &w).unwrap();
    let elapsed = t.elapsed();
    let diag: Vec<_> = rep.diagonal.iter().filter(|e| e.alpha.degree() <= 200).collect();
    let diag_max = diag.iter().map(|e| e.abs_diff).fold(0.0, f64::max);
    let oracle_gap = diag
        .iter()
        .map(|e| {
            let n = e.alpha.entries()[0];
            let expect = cantor_product_oracle(-(n as i64)) * 0.5f64.powi(n as i32);
            (e.moment.to_complex64() - expect).norm()
        })
        .fold(0.0, f64::max);
    verdict(
        10,
        "d=2 Henkin identity, n <= 100",
        rep.pass && diag.len() == 101 && diag_max <= 1e-10 && oracle_gap <= 1e-10 && rep.off_diagonal_exact_zero,
        elapsed,
        secs(30),
        format!(
            "diagonal max |diff| {diag_max:.3e}, moment vs product form {oracle_gap:.3e}, {} off-diagonal exact zero: {}",
            rep.off_diagonal_checked, rep.off_diagonal_exact_zero
        ),
    );
}

#[test]
fn criterion_11_monte_carlo_moments() {
    let t = Instant::now();
    let d4 = mc_batch(Variant::D4, 100, 100_000, SEED).unwrap();
    let d2 = mc_batch(Variant::D2, 100, 100_000, SEED).unwrap();
    let elapsed = t.elapsed();
    verdict(
        11,
        "Monte Carlo moments within 4 standard errors",
        d4.within >= 95 && d2.within >= 95,
        elapsed,
        secs(60),
        format!("D4 {}/100, D2 {}/100 within {MC_SIGMAS} sigma at 1e5 samples", d4.within, d2.within),
    );
}

#[test]
fn criterion_12_compression() {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for d in [2usize, 4] {
        let r = compose_with_r(&[ExactComplex::zero(), ExactComplex::one()], d).unwrap();
        let norms: Vec<f64> = [1u32, 2, 4, 8].iter().map(|&n| compression_norm(&r, n)).collect();
        // rounding slack of the power iteration on equal sections
        let monotone = norms.windows(2).all(|w| w[1] >= w[0] - 1e-9);
        let w_max = diagonal_shift_weights(d, 8).into_iter().fold(0.0, f64::max);
        // ‖r‖² = dᵈ·(1!)ᵈ/d!
        let oracle = ((d as f64).powi(d as i32) / (1..=d).product::<usize>() as f64).sqrt();
        let matches = norms.iter().all(|s| (s - w_max).abs() <= 1e-9 && (s - oracle).abs() <= 1e-9);
        pass &= monotone && matches;
        if d == 2 {
            pass &= norms.iter().all(|&s| s >= 2f64.sqrt() - 1e-9);
        }
        parts.push(format!("d={d}: N=1,2,4,8 -> {norms:.12?}, monotone {monotone}, ||r|| = {oracle:.12}"));
    }
    verdict(12, "compression of M_r", pass, t.elapsed(), secs(30), parts.join("; "));
}

#[test]
fn criterion_13_peak_check() {
    let t = Instant::now();
    let rep = peak_check(10_000, SEED, DEFAULT_DELTA).unwrap();
    let elapsed = t.elapsed();
    verdict(
        13,
        "peak function (1+r)/2",
        rep.pass && rep.max_peak_deviation <= 1e-12 && rep.off_peak_accepted >= 10_000,
        elapsed,
        secs(10),
        format!(
            "max |f-1| on h(T^3) {:.3e}, min 1-|f| off peak {:.3e} over {} samples ({} rejected)",
            rep.max_peak_deviation, rep.min_margin, rep.off_peak_accepted, rep.off_peak_rejected
        ),
    );
}
