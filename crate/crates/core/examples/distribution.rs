//! Rectangle probabilities of F_p(e(t))/F_p(zeta_p) against the process G_X(theta).
//!
//! `cargo run --release --example distribution -- 10007 1000000`

use fekete::arith::LegendreTable;
use fekete::verify::{default_rectangles, distribution_compare, process_symmetry};

pub fn run_example(p: u64, samples: u64) -> fekete::Result<()> {
    let rects = default_rectangles();
    let report = distribution_compare(&LegendreTable::new(p)?, &rects, 1000, samples, 16, 1)?;
    println!("{:>34} {:>9} {:>9} {:>8}", "rectangle", "F_p", "process", "gap");
    for (i, r) in rects.iter().enumerate() {
        let name = format!("[{}, {}] x [{}, {}]", r.re_lo, r.re_hi, r.im_lo, r.im_hi);
        println!("{name:>34} {:>9.5} {:>9.5} {:>8.5}", report.fekete[i], report.process[i], report.gaps[i]);
    }
    println!("max gap {:.5}", report.max_gap);

    let sym = process_symmetry(&rects[2..4], 1000, samples / 10, 2)?;
    println!("U vs -U on the process side: {sym:?}");
    Ok(())
}

fn main() -> fekete::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|a| a.parse().ok());
    let p = args.next().unwrap_or(1009);
    let samples = args.next().unwrap_or(200_000);
    run_example(p, samples)
}
