//! Monte-Carlo estimate of k₀ from the truncated random process, with the
//! truncation schedule and its extrapolation.
//!
//! `cargo run --release --example k0_constant -- <samples> <seed>`

use std::time::Instant;

use fekete::process::{k0_estimate, k0_schedule};
use fekete::quad::QuadConfig;
use fekete::EstimateMode;

pub fn run_example(samples: u64, seed: u64) -> fekete::Result<()> {
    let cfg = QuadConfig::default();

    let exact = k0_estimate(3, 0, EstimateMode::Exact, 0, &cfg)?;
    let mc = k0_estimate(3, samples, EstimateMode::MonteCarlo, seed, &cfg)?;
    println!(
        "J=3 exact k0 = {:.6}, Monte-Carlo k0 = {:.6} ± {:.6}",
        exact.k0.value, mc.k0.value, mc.k0.std_error
    );

    let start = Instant::now();
    let schedule = k0_schedule(&[250, 500, 1000, 2000], samples, seed, &cfg)?;
    for r in &schedule.reports {
        println!(
            "J={:>5}  A = {:.5} ± {:.5}  k0 = {:.5} ± {:.5}  resampled {}",
            r.j, r.a.value, r.a.std_error, r.k0.value, r.k0.std_error, r.resampled
        );
    }
    if let Some(k0) = &schedule.extrapolated_k0 {
        println!("extrapolated k0 = {:.5} ± {:.5}", k0.value, k0.std_error);
    }
    println!("{:.1} s for the schedule", start.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> fekete::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().ok());
    let samples = args.next().flatten().unwrap_or(2_000);
    let seed = args.next().flatten().unwrap_or(1);
    run_example(samples, seed)
}
