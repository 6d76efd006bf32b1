//! Mahler measure, L_q norms and circle zeros of F_p for a few primes.
//!
//! `cargo run --release --example mahler_measure -- 1009 5003`

use std::time::Instant;

use fekete::arith::LegendreTable;
use fekete::eval::ArcBank;
use fekete::quad::{circle_zero_count_bank, lq_norm_bank, mahler_bank, QuadConfig};

const K0: f64 = 0.74083;

pub fn run_example(primes: &[u64]) -> fekete::Result<()> {
    let cfg = QuadConfig::default();
    println!("{:>7} {:>12} {:>10} {:>10} {:>10} {:>8} {:>7}", "p", "M0/sqrt(p)", "gap", "M2", "M4", "zeros", "secs");
    for &p in primes {
        let start = Instant::now();
        let table = LegendreTable::new(p)?;
        let bank = ArcBank::build(&table, cfg.cheb_nodes);
        let m0 = mahler_bank(&bank, &cfg)?;
        let m2 = lq_norm_bank(&bank, 2.0, &cfg)?;
        let m4 = lq_norm_bank(&bank, 4.0, &cfg)?;
        let zeros = circle_zero_count_bank(&bank, &cfg)?;
        println!(
            "{:>7} {:>12.8} {:>10.2e} {:>10.8} {:>10.6} {:>8.4} {:>7.2}",
            p,
            m0.value,
            (m0.value - K0).abs(),
            m2.value,
            m4.value,
            zeros.ratio,
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}

fn main() -> fekete::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let primes = if args.is_empty() { vec![101, 1009] } else { args };
    run_example(&primes)
}
