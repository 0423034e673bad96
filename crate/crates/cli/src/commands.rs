use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use henkin_core::cantor::{
    riesz_energy, weighted_fourier_sum, weighted_fourier_sweep, AtomPlacement, FourierTable, DEFAULT_EPS,
    MAX_ENERGY_LEVEL,
};
use henkin_core::compression::{diagonal_shift_weights, mult_matrix, top_singular_value};
use henkin_core::counterexample::{
    build_witness, d4_norm_sq_from_sequence, functional_bound_check, henkin_identity_check, mc_batch, mc_moment,
    non_henkin_witness, peak_check, MomentBatch, MomentValue, NormSq, PushforwardMeasure, Variant, WitnessCoeffs,
    DEFAULT_DELTA, MC_SIGMAS,
};
use henkin_core::disc_kernel::{
    denominators_are_powers_of_two, dirichlet_coeff_check, envelope, KernelSequence, DEFAULT_EXACT_N,
    DEFAULT_FLOAT_N,
};
use henkin_core::exact::{
    compose_with_r, extension_norm_check, isometry_batch, monomial_norm_sq, multi_indices_up_to, ExactComplex,
    ExactRational, MultiIndex,
};
use henkin_core::oracle::kernel_expansion_norms;
use henkin_core::{CheckResult, Report};

use crate::{Cli, Command, ConfigError, Outcome};

const DEFAULT_SEED: u64 = 0;
const DEFAULT_LEVEL: u32 = 14;
const DEFAULT_FOURIER_TOL: f64 = 1e-6;
const STIRLING_TOL: f64 = 0.01;
const ENERGY_TOL: f64 = 0.01;
const DOUBLING_TOL: f64 = 0.01;
const COMPRESSION_TOL: f64 = 1e-9;
/// Wall-clock budget reported by `all`, in seconds.
pub const ALL_BUDGET_SECS: f64 = 300.0;

type Run = Result<Outcome, ConfigError>;

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

fn validate(cli: &Cli) -> Result<(), ConfigError> {
    if let Some(d) = cli.dim {
        if d != 2 && d != 4 {
            return Err(invalid(format!("--dim must be 2 or 4, got {d}")));
        }
    }
    let positive_ints = [
        ("--maxdeg", cli.maxdeg.map(u64::from)),
        ("--n", cli.n.map(|v| v as u64)),
        ("--level", cli.level.map(u64::from)),
        ("--samples", cli.samples.map(|v| v as u64)),
        ("--trials", cli.trials.map(|v| v as u64)),
        ("--max-n", cli.max_n.map(|v| v as u64)),
    ];
    for (flag, v) in positive_ints {
        if v == Some(0) {
            return Err(invalid(format!("{flag} must be positive")));
        }
    }
    for (flag, v) in [("--eps", cli.eps), ("--tol", cli.tol)] {
        if let Some(x) = v {
            if !(x.is_finite() && x > 0.0) {
                return Err(invalid(format!("{flag} must be a positive finite number, got {x}")));
            }
        }
    }
    Ok(())
}

fn variant(d: usize) -> Option<String> {
    Some(Variant::from_dim(d).map(|v| v.to_string()).unwrap_or_default())
}

fn finish(cli: &Cli, dim: Option<usize>, params: Value, seed: Option<u64>, results: Vec<CheckResult>, csv: Option<String>) -> Outcome {
    let report = Report::new(cli.command.name(), dim.and_then(variant), params, seed, results);
    Outcome { report, csv }
}

fn csv_string(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Option<String> {
    let mut buf = Vec::new();
    write(&mut buf).expect("in-memory csv");
    Some(String::from_utf8(buf).expect("csv is utf-8"))
}

fn check(name: &str, pass: bool, details: impl Serialize) -> CheckResult {
    CheckResult::new(name, pass, details)
}

/// Dispatches one parsed command after validating its configuration.
pub fn run_command(cli: &Cli) -> Run {
    validate(cli)?;
    match cli.command {
        Command::VerifyNorms => verify_norms(cli),
        Command::VerifyIsometry => verify_isometry(cli),
        Command::KernelTable => kernel_table(cli),
        Command::CantorFourier => cantor_fourier(cli),
        Command::CantorEnergy => cantor_energy(cli),
        Command::Moments => moments(cli),
        Command::HenkinCheck => henkin_check(cli),
        Command::Witness => witness(cli),
        Command::PeakCheck => peak(cli),
        Command::Compression => compression(cli),
        Command::All => all(cli),
    }
}

fn verify_norms(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(4);
    let maxdeg = cli.maxdeg.unwrap_or(8);
    let oracle = kernel_expansion_norms(d, maxdeg);
    let indices = multi_indices_up_to(d, maxdeg);
    let mut mismatches = Vec::new();
    let mut unit_violations = Vec::new();
    let mut padding_violations = Vec::new();
    for alpha in &indices {
        let n = monomial_norm_sq(alpha);
        if oracle.get(alpha) != Some(&n) {
            mismatches.push(alpha.to_string());
        }
        let support = alpha.entries().iter().filter(|&&a| a > 0).count();
        if (n == ExactRational::one()) != (support <= 1) {
            unit_violations.push(alpha.to_string());
        }
        if !extension_norm_check(alpha, d + 1)? {
            padding_violations.push(alpha.to_string());
        }
    }
    let results = vec![
        check(
            "kernel_expansion_oracle",
            mismatches.is_empty(),
            json!({"indices": indices.len(), "mismatches": mismatches}),
        ),
        check("unit_norm_iff_single_variable", unit_violations.is_empty(), json!({"violations": unit_violations})),
        check(
            "padding_preserves_norm",
            padding_violations.is_empty(),
            json!({"target_dim": d + 1, "violations": padding_violations}),
        ),
    ];
    Ok(finish(cli, Some(d), json!({"dim": d, "maxdeg": maxdeg}), None, results, None))
}

fn verify_isometry(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(4);
    let maxdeg = cli.maxdeg.unwrap_or(30) as usize;
    let trials = cli.trials.unwrap_or(100);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let batch = isometry_batch(d, maxdeg, trials, seed)?;
    let results = vec![check("isometry_exact", batch.failures.is_empty(), &batch)];
    Ok(finish(cli, Some(d), json!({"dim": d, "maxdeg": maxdeg, "trials": trials, "seed": seed}), Some(seed), results, None))
}

fn kernel_table(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(2);
    let n = cli.n.unwrap_or(DEFAULT_EXACT_N);
    let max_n = cli.max_n.unwrap_or(DEFAULT_FLOAT_N);
    if max_n < 400 {
        return Err(invalid("--max-n must be at least 400 for the asymptotic check"));
    }
    let seq = KernelSequence::exact(d, n)?;
    let float = KernelSequence::float(d, max_n)?;
    let mut results = Vec::new();
    if d == 2 {
        let bad: Vec<u32> = (0..=n as u32).filter(|&k| !dirichlet_coeff_check(k)).collect();
        results.push(check("dirichlet_closed_form", bad.is_empty(), json!({"n_max": n, "mismatches": bad})));
        let pow2 = denominators_are_powers_of_two(&seq).unwrap_or(false);
        results.push(check("power_of_two_denominators", pow2, json!({"n_max": n})));
    }
    let (v200, v400) = (float.a_times_power(200), float.a_times_power(400));
    let drift = (v400 / v200 - 1.0).abs();
    results.push(check(
        "stirling_drift_200_400",
        drift < STIRLING_TOL,
        json!({"at_200": v200, "at_400": v400, "relative_drift": drift, "tolerance": STIRLING_TOL}),
    ));
    let full = envelope(d, 0, max_n)?;
    let tail = envelope(d, 200, max_n)?;
    results.push(check(
        "observed_envelope",
        full.min > 0.0 && full.max.is_finite(),
        json!({"full": full, "from_200": tail, "last_value": float.a_times_power(max_n)}),
    ));
    let csv = csv_string(|buf| seq.write_csv(buf));
    Ok(finish(cli, Some(d), json!({"dim": d, "n": n, "max_n": max_n}), None, results, csv))
}

fn cantor_fourier(cli: &Cli) -> Run {
    let max_n = cli.max_n.unwrap_or(256);
    let eps = cli.eps.unwrap_or(DEFAULT_EPS);
    let level = cli.level.unwrap_or(DEFAULT_LEVEL);
    let tol = cli.tol.unwrap_or(DEFAULT_FOURIER_TOL);
    let rec = FourierTable::from_recursion(max_n, eps);
    let atoms = FourierTable::from_atoms(max_n, level, AtomPlacement::Midpoint)?;
    let sym = rec.symmetry_defect();
    let diff = rec.max_difference(&atoms);
    let max_abs = rec.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    let results = vec![
        check("conjugate_symmetry", sym <= 2.0 * eps, json!({"defect": sym, "tolerance": 2.0 * eps})),
        check(
            "atomic_oracle",
            diff <= tol,
            json!({"max_difference": diff, "tolerance": tol, "atom_error_bound": atoms.tolerance()}),
        ),
        check("modulus_at_most_one", max_abs <= 1.0 + eps, json!({"max_modulus": max_abs})),
    ];
    let csv = csv_string(|buf| rec.write_csv(buf));
    let params = json!({"max_n": max_n, "eps": eps, "level": level, "tol": tol, "placement": "midpoint"});
    Ok(finish(cli, None, params, None, results, csv))
}

fn cantor_energy(cli: &Cli) -> Run {
    let level = cli.level.unwrap_or(12);
    let max_n = cli.max_n.unwrap_or(1 << 17);
    let tol = cli.tol.unwrap_or(ENERGY_TOL);
    if !(4..=MAX_ENERGY_LEVEL).contains(&level) {
        return Err(invalid(format!("--level must lie in 4..={MAX_ENERGY_LEVEL}")));
    }
    if !max_n.is_power_of_two() || max_n < 1 << 15 {
        return Err(invalid("--max-n must be a power of two, at least 2^15"));
    }
    let coarse = riesz_energy(level - 2)?;
    let fine = riesz_energy(level)?;
    let rel = (coarse.lower - fine.lower).abs() / fine.lower;
    let checkpoints: Vec<usize> = (10..=max_n.trailing_zeros()).map(|k| 1usize << k).collect();
    let sweep = weighted_fourier_sweep(&checkpoints);
    let nondecreasing = sweep.windows(2).all(|w| w[1].1 >= w[0].1);
    let doublings: Vec<Value> = sweep
        .windows(2)
        .map(|w| json!({"from": w[0].0, "to": w[1].0, "relative_increase": w[1].1 / w[0].1 - 1.0}))
        .collect();
    let slow = sweep.windows(2).filter(|w| w[0].0 >= 1 << 14).all(|w| w[1].1 / w[0].1 - 1.0 < DOUBLING_TOL);
    let sums: Vec<Value> = sweep.iter().map(|(n, s)| json!({"N": n, "sum": s})).collect();
    let results = vec![
        check(
            "energy_lower_bounds_agree",
            rel < tol,
            json!({"coarse": coarse, "fine": fine, "relative_difference": rel, "tolerance": tol}),
        ),
        check(
            "energy_upper_bound_finite",
            coarse.upper.is_finite() && fine.upper.is_finite(),
            json!({"coarse": coarse.upper, "fine": fine.upper}),
        ),
        check("weighted_sum_nondecreasing", nondecreasing, json!({"sums": sums})),
        check(
            "weighted_sum_doubling_increase",
            slow,
            json!({"from_N": 1 << 14, "tolerance": DOUBLING_TOL, "doublings": doublings}),
        ),
    ];
    let params = json!({"level": level, "coarse_level": level - 2, "max_n": max_n, "tol": tol});
    Ok(finish(cli, None, params, None, results, None))
}

fn moment_row(r: &henkin_core::MomentReport) -> Value {
    json!({
        "alpha": r.alpha,
        "closed_form": r.closed_form.to_string(),
        "mc_estimate": {"re": r.mc_estimate.re, "im": r.mc_estimate.im},
        "mc_stderr": r.mc_stderr,
        "deviation": r.deviation(),
        "seed": r.seed,
    })
}

fn moments(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(4);
    let v = Variant::from_dim(d)?;
    let samples = cli.samples.unwrap_or(100_000);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    if let Some(alpha) = &cli.alpha {
        let alpha = MultiIndex::new(alpha.clone());
        let r = mc_moment(v, &alpha, samples, seed)?;
        let within = r.within(MC_SIGMAS);
        let mut details = moment_row(&r);
        details["sigmas"] = json!(MC_SIGMAS);
        let results = vec![check("mc_within_4_sigma", within, details)];
        let batch = MomentBatch { variant: v, seed, samples, within: within as usize, total: 1, reports: vec![r] };
        let csv = csv_string(|buf| batch.write_csv(buf));
        let params = json!({"dim": d, "alpha": alpha, "samples": samples, "seed": seed});
        return Ok(finish(cli, Some(d), params, Some(seed), results, csv));
    }
    let count = cli.trials.unwrap_or(100);
    let batch = mc_batch(v, count, samples, seed)?;
    let needed = (count * 95).div_ceil(100);
    let rows: Vec<Value> = batch.reports.iter().map(moment_row).collect();
    let results = vec![check(
        "batch_within_4_sigma",
        batch.within >= needed,
        json!({"within": batch.within, "total": batch.total, "required": needed, "sigmas": MC_SIGMAS, "moments": rows}),
    )];
    let csv = csv_string(|buf| batch.write_csv(buf));
    let params = json!({"dim": d, "trials": count, "samples": samples, "seed": seed});
    Ok(finish(cli, Some(d), params, Some(seed), results, csv))
}

fn henkin_check(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(4);
    let v = Variant::from_dim(d)?;
    let maxdeg = cli.maxdeg.unwrap_or(if v == Variant::D4 { 24 } else { 200 });
    let trials = cli.trials.unwrap_or(200);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let eps = cli.eps.unwrap_or(DEFAULT_EPS);
    let level = cli.level.unwrap_or(DEFAULT_LEVEL);
    let (measure, witness, params) = match v {
        Variant::D4 => (
            PushforwardMeasure::d4(),
            build_witness(v, maxdeg as usize, None)?,
            json!({"dim": d, "maxdeg": maxdeg, "trials": trials, "seed": seed}),
        ),
        Variant::D2 => {
            let moments = FourierTable::from_recursion(maxdeg as usize, eps);
            let atoms = FourierTable::from_atoms(maxdeg as usize, level, AtomPlacement::Midpoint)?;
            (
                PushforwardMeasure::d2(moments),
                build_witness(v, maxdeg as usize, Some(&atoms))?,
                json!({
                    "dim": d, "maxdeg": maxdeg, "trials": trials, "seed": seed,
                    "moment_fourier": {"method": "recursion", "eps": eps},
                    "witness_fourier": {"method": "atomic", "level": level, "placement": "midpoint"},
                }),
            )
        }
    };
    let rep = henkin_identity_check(&measure, maxdeg, &witness)?;
    let bound = functional_bound_check(&measure, &witness, trials, seed)?;
    let diagonal: Vec<Value> = rep
        .diagonal
        .iter()
        .map(|e| json!({"alpha": e.alpha, "moment": e.moment.to_string(), "inner": e.inner.to_string(), "abs_diff": e.abs_diff, "pass": e.pass}))
        .collect();
    let results = vec![
        check(
            "henkin_identity",
            rep.pass,
            json!({
                "exact": v == Variant::D4,
                "monomials_checked": rep.monomials_checked,
                "max_abs_diff": rep.max_abs_diff,
                "diagonal": diagonal,
                "failures": rep.failures.len(),
            }),
        ),
        check(
            "off_diagonal_exact_zero",
            rep.off_diagonal_exact_zero,
            json!({"off_diagonal_checked": rep.off_diagonal_checked}),
        ),
        check("functional_bound", bound.pass, &bound),
    ];
    Ok(finish(cli, Some(d), params, Some(seed), results, None))
}

fn witness(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(4);
    let v = Variant::from_dim(d)?;
    let n = cli.n.unwrap_or(if v == Variant::D4 { 24 } else { 100 });
    let level = cli.level.unwrap_or(DEFAULT_LEVEL);
    let mut results = Vec::new();
    let (w, params) = match v {
        Variant::D4 => {
            let w = build_witness(v, n, None)?;
            let from_seq = d4_norm_sq_from_sequence(n);
            let ok = w.norm_sq == NormSq::Exact(from_seq.clone());
            results.push(check(
                "norm_equals_kernel_sum",
                ok,
                json!({"norm_sq": w.norm_sq, "sum_a": from_seq.to_string()}),
            ));
            (w, json!({"dim": d, "n": n}))
        }
        Variant::D2 => {
            let table = FourierTable::from_atoms(n, level, AtomPlacement::Midpoint)?;
            let w = build_witness(v, n, Some(&table))?;
            let seq = KernelSequence::float(2, n)?;
            let direct: f64 = (0..=n)
                .map(|k| seq.a_float()[k] * table.get(k as i64).map(|s| s.norm_sqr()).unwrap_or(f64::NAN))
                .sum();
            let norm = w.norm_sq.to_f64();
            let gap = (norm - direct).abs();
            results.push(check(
                "norm_equals_weighted_coefficients",
                gap <= 1e-10,
                json!({"norm_sq": norm, "sum_a_sigma_sq": direct, "abs_diff": gap, "tolerance": 1e-10}),
            ));
            let sup = (0..=n).map(|k| seq.a_times_power(k)).fold(0.0, f64::max);
            let weighted = weighted_fourier_sum(n);
            // the weighted sum uses recursion coefficients, the witness uses atoms
            let slack = 2.0 * table.tolerance() * (n as f64 + 1.0);
            let bound = sup * weighted;
            results.push(check(
                "norm_bounded_by_weighted_sum",
                norm <= bound + slack,
                json!({"norm_sq": norm, "sup_a_sqrt_n1": sup, "weighted_fourier_sum": weighted, "bound": bound, "slack": slack}),
            ));
            (w, json!({"dim": d, "n": n, "witness_fourier": {"method": "atomic", "level": level, "placement": "midpoint"}}))
        }
    };
    let coeffs: Vec<Value> = match &w.diag_coeffs {
        WitnessCoeffs::Exact(c) => c.iter().map(|x| json!(MomentValue::Exact(x.clone()).to_string())).collect(),
        WitnessCoeffs::Float(c) => c.iter().map(|x| json!({"re": x.re, "im": x.im})).collect(),
    };
    results.push(check("coefficients", true, json!({"N": w.n_max, "diag_coeffs": coeffs})));
    Ok(finish(cli, Some(d), params, None, results, None))
}

fn peak(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(4);
    if d != 4 {
        return Err(invalid("peak-check is defined for --dim 4 only"));
    }
    let samples = cli.samples.unwrap_or(10_000);
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let exact_max = cli.maxdeg.unwrap_or(50);
    let decay_max = cli.n.unwrap_or(1_000) as u32;
    let p = peak_check(samples, seed, DEFAULT_DELTA)?;
    let nh = non_henkin_witness(exact_max, decay_max, seed)?;
    let nh_ones = nh.integrals.iter().all(|e| e.equals_one);
    let last = nh.grid_max.last().copied().unwrap_or(f64::NAN);
    let results = vec![
        check("peak_set", p.peak_pass, json!({"samples": p.samples, "max_deviation": p.max_peak_deviation})),
        check(
            "strictly_below_one_off_peak",
            p.off_peak_pass,
            json!({"delta": p.delta, "accepted": p.off_peak_accepted, "rejected": p.off_peak_rejected, "min_margin": p.min_margin}),
        ),
        check(
            "non_henkin_integrals",
            nh_ones,
            json!({"n_max": exact_max, "integrals": nh.integrals.iter().map(|e| e.integral.re.to_string()).collect::<Vec<_>>()}),
        ),
        check(
            "non_henkin_grid_decay",
            nh.grid_max_monotone && last < 1e-6,
            json!({"n_max": decay_max, "monotone": nh.grid_max_monotone, "first_below_1e-6": nh.first_below_1e6, "last": last}),
        ),
        check(
            "sup_norm_ball",
            nh.origin_exact && nh.sup_sample_max <= 1.0 + 1e-15,
            json!({"origin_exact": nh.origin_exact, "sample_max": nh.sup_sample_max}),
        ),
    ];
    let params = json!({"dim": d, "samples": samples, "seed": seed, "delta": DEFAULT_DELTA, "maxdeg": exact_max, "n": decay_max});
    Ok(finish(cli, Some(d), params, Some(seed), results, None))
}

fn compression(cli: &Cli) -> Run {
    let d = cli.dim.unwrap_or(2);
    let n = cli.n.unwrap_or(8) as u32;
    let phi = compose_with_r(&[ExactComplex::zero(), ExactComplex::one()], d)?;
    let sections: Vec<u32> = (0..).map(|k| 1u32 << k).take_while(|&s| s <= n).collect();
    let weights = diagonal_shift_weights(d, n);
    let w_max = weights.iter().copied().fold(0.0, f64::max);
    let runs: Vec<_> = sections
        .iter()
        .map(|&s| {
            let m = mult_matrix(&phi, s);
            (s, m.nrows(), m.ncols(), top_singular_value(&m))
        })
        .collect();
    let sigmas: Vec<f64> = runs.iter().map(|r| r.3.sigma_max).collect();
    let nondecreasing = sigmas.windows(2).all(|w| w[1] >= w[0] - COMPRESSION_TOL);
    let converged = runs.iter().all(|r| r.3.converged);
    let section_weight_max = |s: u32| weights[..=s as usize].iter().copied().fold(0.0, f64::max);
    let matches = runs.iter().all(|r| (r.3.sigma_max - section_weight_max(r.0)).abs() <= COMPRESSION_TOL);
    let floor = if d == 2 { 2f64.sqrt() - COMPRESSION_TOL } else { 1.0 };
    let exceeds = sigmas.iter().all(|&s| s >= floor);
    let table: Vec<Value> = runs
        .iter()
        .map(|(s, rows, cols, p)| json!({"N": s, "rows": rows, "cols": cols, "sigma_max": p.sigma_max, "iterations": p.iterations}))
        .collect();
    let results = vec![
        check("power_iteration_converged", converged, json!({"sections": table})),
        check("nondecreasing_in_N", nondecreasing, json!({"sigma_max": sigmas, "slack": COMPRESSION_TOL})),
        check(
            "matches_shift_weights",
            matches,
            json!({"max_weight": w_max, "weights": weights, "tolerance": COMPRESSION_TOL}),
        ),
        check("exceeds_sup_norm", exceeds, json!({"sup_norm": 1.0, "floor": floor})),
    ];
    Ok(finish(cli, Some(d), json!({"phi": phi, "dim": d, "n": n, "sections": sections}), None, results, None))
}

fn all(cli: &Cli) -> Run {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let plan: Vec<(Command, Option<usize>)> = vec![
        (Command::VerifyNorms, Some(4)),
        (Command::VerifyIsometry, Some(2)),
        (Command::VerifyIsometry, Some(4)),
        (Command::KernelTable, Some(2)),
        (Command::KernelTable, Some(4)),
        (Command::CantorFourier, None),
        (Command::CantorEnergy, None),
        (Command::Moments, Some(2)),
        (Command::Moments, Some(4)),
        (Command::HenkinCheck, Some(2)),
        (Command::HenkinCheck, Some(4)),
        (Command::Witness, Some(2)),
        (Command::Witness, Some(4)),
        (Command::PeakCheck, Some(4)),
        (Command::Compression, Some(2)),
        (Command::Compression, Some(4)),
    ];
    let start = Instant::now();
    let runs: Vec<(String, Outcome, f64)> = plan
        .par_iter()
        .map(|&(command, dim)| {
            let sub = Cli {
                command,
                dim,
                maxdeg: None,
                n: None,
                level: None,
                eps: None,
                tol: None,
                seed: Some(seed),
                samples: None,
                trials: None,
                max_n: None,
                alpha: None,
                output: None,
                format: None,
            };
            let label = match dim {
                Some(d) => format!("{}[d={d}]", command.name()),
                None => command.name().to_string(),
            };
            let t = Instant::now();
            run_command(&sub).map(|o| (label, o, t.elapsed().as_secs_f64()))
        })
        .collect::<Result<_, _>>()?;
    let total = start.elapsed().as_secs_f64();

    let mut results = Vec::new();
    let mut sub_params = Map::new();
    for (label, outcome, secs) in &runs {
        eprintln!("{label}: {secs:.2}s");
        sub_params.insert(label.clone(), outcome.report.params.clone());
        for r in &outcome.report.results {
            results.push(CheckResult { name: format!("{label}/{}", r.name), ..r.clone() });
        }
    }
    eprintln!("all: {total:.2}s of {ALL_BUDGET_SECS}s budget");
    let params = json!({"seed": seed, "budget_secs": ALL_BUDGET_SECS, "suites": sub_params});
    Ok(finish(cli, None, params, Some(seed), results, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("henkin-verify").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn rejects_bad_dimension_and_nonpositive_values() {
        assert!(run_command(&parse(&["moments", "--dim", "3"])).is_err());
        assert!(run_command(&parse(&["cantor-fourier", "--eps", "0"])).is_err());
        assert!(run_command(&parse(&["witness", "--n", "0"])).is_err());
        assert!(run_command(&parse(&["peak-check", "--dim", "2"])).is_err());
    }

    #[test]
    fn defaults_are_echoed() {
        let o = run_command(&parse(&["verify-norms"])).unwrap();
        assert_eq!(o.report.params, json!({"dim": 4, "maxdeg": 8}));
        assert!(o.report.pass);
    }

    #[test]
    fn single_moment_closed_form() {
        let o = run_command(&parse(&["moments", "--dim", "4", "--alpha", "1,1,1,1", "--samples", "2000"])).unwrap();
        assert_eq!(o.report.results[0].details["closed_form"], "1/16");
    }
}
