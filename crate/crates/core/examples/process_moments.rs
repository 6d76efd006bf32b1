//! Exact moments of the truncated process and the L_q constants k_q,
//! including the k_4 cross-check against F_p.
//!
//! `cargo run --release --example process_moments -- 2000`

use fekete::arith::LegendreTable;
use fekete::process::{
    fourth_moment_exact, fourth_moment_integral, kq_estimate, second_moment_exact,
    second_moment_integral, Truncation,
};
use fekete::quad::{lq_norm_fekete, QuadConfig};

pub fn run_example(j: usize, samples: u64, p: u64) -> fekete::Result<()> {
    for t in [0.1, 0.37, 0.5] {
        println!(
            "t = {t}: E|G|^2 = {:.8} (J = {j}), {:.8} (J = inf), E|G|^4 = {:.6}",
            second_moment_exact(t, Truncation::Finite(j))?,
            second_moment_exact(t, Truncation::Infinite)?,
            fourth_moment_exact(t, j)?
        );
    }
    let k2 = kq_estimate(2.0, j, samples, 1)?;
    let exact2 = second_moment_integral(j)?.sqrt();
    println!("k_2: MC {:.6} +- {:.6}, exact {:.6}", k2.value, k2.std_error, exact2);

    let k4 = fourth_moment_integral(j)?.powf(0.25);
    let m4 = lq_norm_fekete(&LegendreTable::new(p)?, 4.0, &QuadConfig::default())?;
    println!("k_4: process {k4:.6}, M_4(F_{p})/sqrt(p) {:.6}", m4.value);
    Ok(())
}

fn main() -> fekete::Result<()> {
    let j = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    run_example(j, 20_000, 10007)
}
