//! Evaluating F_p: Horner at single points, chirp-Z over all arcs at once,
//! and the per-arc functions G_p(k, t) and H_p(k, t).
//!
//! `cargo run --release --example evaluation -- 100003`

use std::time::Instant;

use fekete::arith::{gauss_sum, root_of_unity, unit, LegendreTable};
use fekete::eval::{fekete_horner, ArcBank, ArcFunction, FeketeEvaluator};

pub fn run_example(p: u64) -> fekete::Result<()> {
    let table = LegendreTable::new(p)?;
    let start = Instant::now();
    let grid = FeketeEvaluator::new(&table).at_offset(0.25);
    println!("chirp-Z: {} values in {:.3}s", grid.len(), start.elapsed().as_secs_f64());

    let mut worst: f64 = 0.0;
    for k in [0, 1, p / 3, p - 1] {
        let z = root_of_unity(k as i64, p) * unit(0.25 / p as f64);
        worst = worst.max((fekete_horner(&table, z)? - grid[k as usize]).norm());
    }
    println!("max |Horner - chirp-Z| on 4 points: {worst:.2e}");

    let tau = gauss_sum(&table);
    println!("F_p(zeta_p) = {:.6}, tau = {tau:.6}", fekete_horner(&table, root_of_unity(1, p))?);

    let k = (p / 2) as usize;
    let arc = ArcFunction::new(&table, k as u64)?;
    let bank = ArcBank::build(&table, 32);
    println!("arc {k}: endpoint orders {:?}", bank.endpoint_orders(k));
    for t in [0.1, 0.5, 0.9] {
        println!(
            "  t = {t}: G = {:.6}  H = {:+.6}  H(bank) = {:+.6}  H~ = {:+.6}",
            arc.g(t)?,
            arc.h(t)?,
            bank.h(k, t),
            arc.h_truncated(t)?
        );
    }
    Ok(())
}

fn main() -> fekete::Result<()> {
    let p = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1009);
    run_example(p)
}
