//! Legendre tables, the on-disk cache, Gauss sums and the quadratic
//! correlation identity.
//!
//! `cargo run --release --example legendre_tables -- 10007`

use fekete::arith::{
    gauss_sum, gauss_sum_closed_form, load_or_build, quadratic_correlation, LegendreTable,
};

pub fn run_example(p: u64) -> fekete::Result<()> {
    let dir = std::env::temp_dir().join("fekete-example-cache");
    let table = load_or_build(&dir, p)?;
    assert_eq!(table, LegendreTable::new(p)?);
    let residues = table.symbols().iter().filter(|&&s| s == 1).count();
    println!("p = {p}: {residues} residues, p mod 4 = {}", p % 4);
    println!("zero order of F_p at z = 1: {}", table.zero_order_at_one());

    let tau = gauss_sum(&table);
    let err = (tau - gauss_sum_closed_form(p)).norm();
    println!("Gauss sum {tau:.6}, closed-form error {err:.2e}");

    let shifts = [0, 1, 2, (p / 2) as i64, p as i64 - 1];
    for n in shifts {
        println!("  sum_k ((k(k+{n}))/p) = {}", quadratic_correlation(&table, n));
    }
    Ok(())
}

fn main() -> fekete::Result<()> {
    let p = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1009);
    run_example(p)
}
