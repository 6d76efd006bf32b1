//! Every example runs at reduced size.

#[allow(dead_code)]
#[path = "../examples/legendre_tables.rs"]
mod legendre_tables;
#[allow(dead_code)]
#[path = "../examples/evaluation.rs"]
mod evaluation;
#[allow(dead_code)]
#[path = "../examples/mahler_measure.rs"]
mod mahler_measure;
#[allow(dead_code)]
#[path = "../examples/k0_constant.rs"]
mod k0_constant;
#[allow(dead_code)]
#[path = "../examples/process_moments.rs"]
mod process_moments;
#[allow(dead_code)]
#[path = "../examples/moment_convergence.rs"]
mod moment_convergence;
#[allow(dead_code)]
#[path = "../examples/distribution.rs"]
mod distribution;
#[allow(dead_code)]
#[path = "../examples/bound_checks.rs"]
mod bound_checks;
#[allow(dead_code)]
#[path = "../examples/command_line.rs"]
mod command_line;

#[test]
fn legendre_tables_runs() {
    legendre_tables::run_example(101).unwrap();
}

#[test]
fn evaluation_runs() {
    evaluation::run_example(1009).unwrap();
}

#[test]
fn mahler_measure_runs() {
    mahler_measure::run_example(&[11, 101]).unwrap();
}

#[test]
fn k0_constant_runs() {
    k0_constant::run_example(200, 1).unwrap();
}

#[test]
fn process_moments_runs() {
    process_moments::run_example(200, 500, 101).unwrap();
}

#[test]
fn moment_convergence_runs() {
    moment_convergence::run_example(&[101, 1009], 200).unwrap();
}

#[test]
fn distribution_runs() {
    distribution::run_example(101, 100_000).unwrap();
}

#[test]
fn bound_checks_runs() {
    bound_checks::run_example(&[101], 101).unwrap();
}

#[test]
fn command_line_runs() {
    command_line::run_example().unwrap();
}
