//! Driving the `fekete` command line in-process and reading its JSON records.
//!
//! `cargo run --release --example command_line`

use fekete::cli::{run_with_cache, RunRecord};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cache = std::env::temp_dir().join("fekete-example-cache");
    let runs: [&[&str]; 4] = [
        &["table", "--p", "1009"],
        &["mahler", "--p", "1009", "--nodes", "32"],
        &["k0", "--J", "3", "--mode", "exact"],
        &["verify", "--suite", "quadsum", "--p", "499"],
    ];
    for args in runs {
        let (code, out) = run_with_cache(std::iter::once("fekete").chain(args.iter().copied()), &cache);
        let record: RunRecord = serde_json::from_str(&out)?;
        println!("{:<40} exit {code}  {}", args.join(" "), record.values);
    }
    let (code, out) = run_with_cache(["fekete", "mahler", "--p", "1001"], &cache);
    println!("mahler --p 1001 -> exit {code}: {}", out.trim());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
