//! Acceptance suite. Each test prints one `PASS` or `FAIL` line to stdout
//! (bypassing the harness capture) and then asserts.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fekete::arith::{
    gauss_sum, gauss_sum_closed_form, is_prime, quadratic_correlation, root_of_unity, unit, LegendreTable,
};
use fekete::eval::{fekete_horner, ArcBank, FeketeEvaluator};
use fekete::par::with_threads;
use fekete::process::{fourth_moment_integral, k0_estimate, kq_estimate, second_moment_integral};
use fekete::quad::{circle_zero_count_bank, lq_norm_fekete, mahler_bank, QuadConfig};
use fekete::verify::{
    approximation_gap, default_rectangles, deriv_gap, distribution_compare, log_truncation_check,
    moment_convergence_report, moment_enumeration, moment_rhs_exact, tightness_ratio, LogTarget,
    MomentSpec,
};
use fekete::EstimateMode;

const K0: f64 = 0.74083;

fn report(n: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n:>2} [{verdict}] {name}: {detail}");
    let _ = out.flush();
    assert!(pass, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_01_k0_from_the_process() {
    let r = k0_estimate(2000, 200_000, EstimateMode::MonteCarlo, 1, &QuadConfig::default()).unwrap();
    let pass = (r.k0.value - K0).abs() < 0.005 && (r.a.value - 1.5380).abs() < 0.01;
    let detail = format!(
        "J=2000 n=2e5: A = {:.5} ± {:.5}, k0 = {:.5} ± {:.5}, resampled {}",
        r.a.value, r.a.std_error, r.k0.value, r.k0.std_error, r.resampled
    );
    report(1, "k0 Monte Carlo", pass, detail);
}

/// Mahler gaps at 1009, 5003, 20011 and the zero ratio at 20011, from one
/// bank per prime.
#[test]
fn criteria_02_and_12_fekete_mahler_trend_and_zero_ratio() {
    let cfg = QuadConfig::default();
    let mut gaps = Vec::new();
    let mut ratio = f64::NAN;
    for p in [1009, 5003, 20011] {
        let bank = ArcBank::build(&LegendreTable::new(p).unwrap(), cfg.cheb_nodes);
        gaps.push((mahler_bank(&bank, &cfg).unwrap().value - K0).abs());
        if p == 20011 {
            ratio = circle_zero_count_bank(&bank, &cfg).unwrap().ratio;
        }
    }
    let trend = gaps.windows(2).all(|w| w[1] < w[0]) && gaps[2] < 0.03;
    let zeros = ratio > 0.47 && ratio < 0.53;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "criterion  2 [{}] Mahler trend: |M0/sqrt(p) - k0| = {:.3e}, {:.3e}, {:.3e}",
        if trend { "PASS" } else { "FAIL" },
        gaps[0],
        gaps[1],
        gaps[2]
    );
    let _ = writeln!(
        out,
        "criterion 12 [{}] zero proportion: ratio at p=20011 = {ratio:.5}",
        if zeros { "PASS" } else { "FAIL" }
    );
    drop(out);
    assert!(trend && zeros, "gaps {gaps:?}, ratio {ratio}");
}

#[test]
fn criterion_03_k2_is_one() {
    let cfg = QuadConfig::default();
    let mut worst: f64 = 0.0;
    for p in [101, 1009, 10007] {
        let v = lq_norm_fekete(&LegendreTable::new(p).unwrap(), 2.0, &cfg).unwrap().value;
        worst = worst.max((v - ((p - 1) as f64 / p as f64).sqrt()).abs());
    }
    let mc = kq_estimate(2.0, 1000, 20_000, 1).unwrap();
    let exact = second_moment_integral(1000).unwrap().sqrt();
    let z = (mc.value - exact).abs() / mc.std_error;
    let pass = worst < 1e-8 && z <= 3.0;
    let detail = format!(
        "Parseval max error {worst:.2e}; kq(2, J=1000) = {:.6} ± {:.6} vs exact {exact:.6} (z = {z:.2})",
        mc.value, mc.std_error
    );
    report(3, "k2 = 1", pass, detail);
}

#[test]
fn criterion_04_k4_cross_validation() {
    let process = fourth_moment_integral(2000).unwrap().powf(0.25);
    let fekete = lq_norm_fekete(&LegendreTable::new(10007).unwrap(), 4.0, &QuadConfig::default())
        .unwrap()
        .value;
    let gap = (process - fekete).abs();
    report(
        4,
        "k4 cross-check",
        gap < 0.01,
        format!("process {process:.6}, M4(F_10007)/sqrt(p) {fekete:.6}, gap {gap:.2e}"),
    );
}

#[test]
fn criterion_05_exact_identities() {
    let odd_primes = |bound: u64| (3..bound).filter(|&n| is_prime(n).unwrap()).collect::<Vec<_>>();
    let mut gauss_worst: f64 = 0.0;
    for p in odd_primes(200) {
        let t = LegendreTable::new(p).unwrap();
        let err = (gauss_sum(&t) - gauss_sum_closed_form(p)).norm() / (p as f64).sqrt();
        gauss_worst = gauss_worst.max(err);
    }
    let mut corr_bad = 0;
    let mut at_one: f64 = 0.0;
    let primes = odd_primes(500);
    for &p in &primes {
        let t = LegendreTable::new(p).unwrap();
        let pi = p as i64;
        for n in -pi..2 * pi {
            let want = if n.rem_euclid(pi) == 0 { pi - 1 } else { -1 };
            if quadratic_correlation(&t, n) != want {
                corr_bad += 1;
            }
        }
        at_one = at_one.max(fekete_horner(&t, Complex64::new(1.0, 0.0)).unwrap().norm());
    }
    let pass = gauss_worst <= 1e-9 && corr_bad == 0 && at_one == 0.0;
    let detail = format!(
        "Gauss sum error/sqrt(p) {gauss_worst:.2e} (p < 200); correlation mismatches {corr_bad} over {} primes ≤ 499; max |F_p(1)| {at_one}",
        primes.len()
    );
    report(5, "exact identities", pass, detail);
}

#[test]
fn criterion_06_moment_decay() {
    let spec = MomentSpec::second(0.37).unwrap();
    let r = moment_convergence_report(&[101, 1009, 10007], 2000, &spec).unwrap();
    let specs = [
        MomentSpec::second(0.37).unwrap(),
        MomentSpec::new(vec![0.2], vec![2], vec![0]).unwrap(),
        MomentSpec::new(vec![0.2, 0.7], vec![1, 1], vec![1, 1]).unwrap(),
        MomentSpec::new(vec![0.1, 0.5], vec![2, 0], vec![1, 1]).unwrap(),
        MomentSpec::new(vec![0.6], vec![3], vec![1]).unwrap(),
        MomentSpec::new(vec![0.3, 0.4, 0.9], vec![1, 0, 1], vec![0, 2, 0]).unwrap(),
    ];
    let enum_gap = specs
        .iter()
        .map(|s| (moment_rhs_exact(3, s).unwrap() - moment_enumeration(3, s).unwrap()).norm())
        .fold(0.0, f64::max);
    let beta = r.beta.unwrap_or(f64::NAN);
    let deltas: Vec<String> = r.rows.iter().map(|row| format!("{:.2e}", row.delta)).collect();
    let pass = r.pass && beta >= 0.4 && enum_gap <= 1e-12;
    report(
        6,
        "moment decay",
        pass,
        format!("delta = [{}], beta = {beta:.3}; J=3 enumeration gap {enum_gap:.1e}", deltas.join(", ")),
    );
}

#[test]
fn criterion_07_approximation_gap() {
    let ts: Vec<f64> = (0..=32).map(|j| j as f64 / 32.0).collect();
    let scaled: Vec<f64> = [101, 1009, 10007]
        .iter()
        .map(|&p| approximation_gap(p, &ts).unwrap().scaled_max)
        .collect();
    let hi = scaled.iter().copied().fold(0.0, f64::max);
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    report(
        7,
        "approximation gap",
        hi / lo <= 4.0,
        format!("p * gap = {scaled:.4?}, max/min = {:.4}", hi / lo),
    );
}

#[test]
fn criterion_08_tightness() {
    let r: Vec<f64> = [101, 1009]
        .iter()
        .map(|&p| tightness_ratio(&LegendreTable::new(p).unwrap(), 500, 1).unwrap().max_ratio)
        .collect();
    let spread = r[0].max(r[1]) / r[0].min(r[1]);
    report(
        8,
        "tightness",
        spread <= 2.0,
        format!("max ratio {:.4} (p=101), {:.4} (p=1009), spread {spread:.3}", r[0], r[1]),
    );
}

#[test]
fn criterion_09_derivative_gaps() {
    let tables: Vec<LegendreTable> = [101, 1009, 10007].iter().map(|&p| LegendreTable::new(p).unwrap()).collect();
    let d1: Vec<f64> = tables.iter().map(|t| deriv_gap(t, 1).unwrap()).collect();
    let d2: Vec<f64> = tables.iter().map(|t| deriv_gap(t, 2).unwrap()).collect();
    let non_increasing = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0]);
    report(
        9,
        "derivative gaps",
        non_increasing(&d1) && non_increasing(&d2),
        format!("p*gap1 = {d1:.4?}, p^2*gap2 = {d2:.4?}"),
    );
}

#[test]
fn criterion_10_log_truncation() {
    let eps = [0.1, 0.01, 0.001];
    let cfg = QuadConfig::default();
    let f = log_truncation_check(LogTarget::Fekete { p: 1009 }, &eps, &cfg).unwrap();
    let x = log_truncation_check(LogTarget::Process { j: 500, n_samples: 1000, seed: 1 }, &eps, &cfg).unwrap();
    let detail = format!(
        "p=1009: exponent {:.3}, C spread {:.3}; J=500: exponent {:.3}, C spread {:.3}",
        f.interior_exponent, f.boundary_spread, x.interior_exponent, x.boundary_spread
    );
    report(10, "log truncation", f.pass && x.pass, detail);
}

#[test]
fn criterion_11_distribution() {
    let table = LegendreTable::new(10007).unwrap();
    let r = distribution_compare(&table, &default_rectangles(), 1000, 1_000_000, 16, 1).unwrap();
    let worst = r.gaps.iter().position(|&g| g == r.max_gap).unwrap();
    report(
        11,
        "distribution",
        r.max_gap <= 0.02,
        format!("12 rectangles, max gap {:.5} (rectangle {worst})", r.max_gap),
    );
}

#[test]
fn criterion_13_determinism_and_chirp_accuracy() {
    let cfg = QuadConfig::default();
    let table = LegendreTable::new(1009).unwrap();
    let runs = |threads: usize| {
        with_threads(threads, || {
            let k0 = k0_estimate(2000, 2_000, EstimateMode::MonteCarlo, 1, &cfg).unwrap();
            let kq = kq_estimate(2.0, 1000, 2_000, 1).unwrap();
            let dist = distribution_compare(&table, &default_rectangles(), 1000, 100_000, 4, 1).unwrap();
            let log = log_truncation_check(LogTarget::Process { j: 500, n_samples: 50, seed: 1 }, &[0.1, 0.01], &cfg)
                .unwrap();
            let tight = tightness_ratio(&table, 100, 1).unwrap();
            serde_json::to_string(&(k0, kq, dist, log, tight)).unwrap()
        })
    };
    let base = runs(1);
    let identical = [4, 8].iter().all(|&n| runs(n) == base);

    let p = 100_003u64;
    let big = LegendreTable::new(p).unwrap();
    let ev = FeketeEvaluator::new(&big);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..64 {
        let k = rng.random_range(0..p);
        let t: f64 = rng.random();
        let fast = ev.at_offset(t)[k as usize];
        let z = root_of_unity(k as i64, p) * unit(t / p as f64);
        worst = worst.max((fast - fekete_horner(&big, z).unwrap()).norm());
    }
    let tol = 1e-8 * (p as f64).sqrt() * (p as f64).ln();
    report(
        13,
        "determinism and chirp-Z",
        identical && worst <= tol,
        format!("threads 1/4/8 bit-identical: {identical}; chirp-Z vs Horner at p=100003: {worst:.2e} (tol {tol:.2e})"),
    );
}
