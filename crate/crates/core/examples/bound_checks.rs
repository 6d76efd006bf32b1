//! The quantitative checks: approximation gap, tightness, derivative gaps,
//! sup norms and the truncated log-masses.
//!
//! `cargo run --release --example bound_checks -- 101 1009 10007`

use fekete::arith::LegendreTable;
use fekete::quad::QuadConfig;
use fekete::verify::{
    approximation_gap, deriv_gap, log_truncation_check, sup_norm_report, tightness_ratio, LogTarget,
};

pub fn run_example(primes: &[u64], log_p: u64) -> fekete::Result<()> {
    let ts: Vec<f64> = (0..=32).map(|j| j as f64 / 32.0).collect();
    println!(
        "{:>7} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "p", "p*gap", "tight", "p*d1", "p^2*d2", "montg", "bernst"
    );
    for &p in primes {
        let table = LegendreTable::new(p)?;
        let gap = approximation_gap(p, &ts)?;
        let tight = tightness_ratio(&table, 200, 1)?;
        let sup = sup_norm_report(&table);
        println!(
            "{:>7} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            p,
            gap.scaled_max,
            tight.max_ratio,
            deriv_gap(&table, 1)?,
            deriv_gap(&table, 2)?,
            sup.montgomery_ratio,
            sup.bernstein_ratio
        );
    }

    let eps = [0.1, 0.01, 0.001];
    let cfg = QuadConfig::default();
    for target in [LogTarget::Fekete { p: log_p }, LogTarget::Process { j: 500, n_samples: 200, seed: 1 }] {
        let r = log_truncation_check(target, &eps, &cfg)?;
        println!("{target:?}: interior exponent {:.3}, boundary spread {:.3}", r.interior_exponent, r.boundary_spread);
        for row in &r.rows {
            println!("  eps = {:<6} interior {:.3e}  boundary {:.3e}  C = {:.3}", row.eps, row.interior, row.boundary, row.boundary_constant);
        }
    }
    Ok(())
}

fn main() -> fekete::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let primes = if args.is_empty() { vec![101, 1009] } else { args };
    run_example(&primes, 1009)
}
