//! Mixed moments of G_p(k, t) over k against the process moments.
//!
//! `cargo run --release --example moment_convergence`

use fekete::verify::{moment_convergence_report, moment_enumeration, moment_rhs_exact, MomentSpec};

pub fn run_example(primes: &[u64], j: usize) -> fekete::Result<()> {
    let specs = [
        ("|G(0.37)|^2", MomentSpec::second(0.37)?),
        ("G(0.2)^2", MomentSpec::new(vec![0.2], vec![2], vec![0])?),
        ("|G(0.2) G(0.7)|^2", MomentSpec::new(vec![0.2, 0.7], vec![1, 1], vec![1, 1])?),
    ];
    for (name, spec) in &specs {
        let gap = (moment_rhs_exact(3, spec)? - moment_enumeration(3, spec)?).norm();
        let report = moment_convergence_report(primes, j, spec)?;
        println!("{name}: pairing vs enumeration at J = 3: {gap:.1e}");
        for row in &report.rows {
            println!("  p = {:>6}  lhs = {:.6}  rhs = {:.6}  delta = {:.3e}", row.p, row.lhs, row.rhs, row.delta);
        }
        match report.beta {
            Some(b) => println!("  beta = {b:.3}  pass = {}", report.pass),
            None => println!("  delta vanishes"),
        }
    }
    Ok(())
}

fn main() -> fekete::Result<()> {
    run_example(&[101, 1009, 10007], 2000)
}
