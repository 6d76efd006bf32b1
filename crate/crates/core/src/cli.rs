//! The `fekete` command line.
//!
//! Every invocation prints one [`RunRecord`] as JSON. Array payloads go to an
//! optional CSV sidecar given by `--out`. Exit codes: 0 success, 1 numerical
//! failure or a failed verification suite, 2 invalid input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{self, gauss_sum, gauss_sum_closed_form, quadratic_correlation, LegendreTable};
use crate::error::{Error, Result};
use crate::estimate::{Estimate, EstimateMode};
use crate::eval::PhaseGrid;
use crate::par::with_threads;
use crate::process::{self, sample_pattern, TruncatedH};
use crate::quad::{self, QuadConfig};
use crate::verify::{self, LogTarget, MomentSpec};

/// Environment variable naming the Legendre table cache directory.
pub const CACHE_ENV: &str = "FEKETE_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = "./.fekete-cache";

/// One reproducible run: replaying `(command, params, seed)` reproduces `values`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub values: Value,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub elapsed_seconds: f64,
    pub version: String,
}

#[derive(Parser, Debug)]
#[command(name = "fekete", version, about = "Fekete polynomials and their limiting random process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or load the Legendre table for p.
    Table(Params),
    /// G_p(k, t) on every arc at `grid` midpoints per arc.
    Eval(Params),
    /// M₀(F_p)/√p.
    Mahler(Params),
    /// M_q(F_p)/√p.
    Norm(Params),
    /// Zeros of F_p on the unit circle.
    Zeros(Params),
    /// One pattern of the process: G_X^J on a grid and its log-integral.
    ProcessSample(Params),
    /// The constant k₀ at truncation level J.
    K0(Params),
    /// (E ∫|G_X^J|^q)^{1/q} by Monte Carlo.
    Kq(Params),
    /// Mixed-moment convergence r = s = (1) at t = 0.37 over the listed primes.
    Moments(Params),
    /// Rectangle probabilities, Fekete grid against process draws.
    Dist(Params),
    /// Run a named verification suite.
    Verify(Params),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Quadsum,
    Gauss,
    Parseval,
    Approx,
    Tightness,
    Deriv,
    Logtrunc,
    Sup,
    Moments,
}

#[derive(Args, Debug, Clone)]
struct Params {
    /// Prime(s); commands taking one prime use the first.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "1009")]
    p: Vec<u64>,
    #[arg(long, default_value_t = 4.0)]
    q: f64,
    /// Process truncation level.
    #[arg(long = "J", default_value_t = 1000)]
    j: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Quadrature nodes per panel and Chebyshev nodes per arc.
    #[arg(long, default_value_t = 32)]
    nodes: usize,
    /// Grid points per arc or per pattern.
    #[arg(long, default_value_t = 16)]
    grid: usize,
    /// JSON rectangle family; defaults to the built-in one.
    #[arg(long)]
    rects: Option<PathBuf>,
    /// CSV sidecar for array payloads.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every logical core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = Mode::Mc)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Suite::Quadsum)]
    suite: Suite,
}

impl Params {
    fn prime(&self) -> u64 {
        self.p[0]
    }

    fn config(&self) -> Result<QuadConfig> {
        if self.nodes < 4 {
            return Err(Error::domain(format!("--nodes must be at least 4 (got {})", self.nodes)));
        }
        Ok(QuadConfig {
            gl_nodes: self.nodes,
            cheb_nodes: self.nodes,
            ..QuadConfig::default()
        })
    }
}

/// Payload of one subcommand before the record is assembled.
struct Outcome {
    params: BTreeMap<String, Value>,
    values: Value,
    std_error: f64,
    n_samples: u64,
    seed: u64,
    csv: Option<String>,
    pass: bool,
}

impl Outcome {
    fn new(values: Value) -> Self {
        Outcome {
            params: BTreeMap::new(),
            values,
            std_error: 0.0,
            n_samples: 0,
            seed: 0,
            csv: None,
            pass: true,
        }
    }

    fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params.insert(key.into(), json!(v));
        self
    }

    fn estimate(mut self, e: &Estimate) -> Self {
        self.std_error = e.std_error;
        self.n_samples = e.n_samples;
        self.seed = e.seed;
        self
    }

    fn seeded(mut self, n: u64, seed: u64) -> Self {
        self.n_samples = n;
        self.seed = seed;
        self
    }
}

/// Cache directory from [`CACHE_ENV`], else [`DEFAULT_CACHE_DIR`].
pub fn cache_dir_from_env() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

/// Parse `argv` (program name first), run, and return the exit code and the
/// text for standard output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_cache(argv, &cache_dir_from_env())
}

/// [`run`] with an explicit table cache directory.
pub fn run_with_cache<I, T>(argv: I, cache: &Path) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let (name, params) = split(&cli.command);
    let started = Instant::now();
    let result = if params.threads == 0 {
        dispatch(&cli.command, cache)
    } else {
        with_threads(params.threads, || dispatch(&cli.command, cache))
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let code = if e.is_numerical() { 1 } else { 2 };
            return (code, format!("error: {e}\n"));
        }
    };
    if let (Some(path), Some(csv)) = (&params.out, &outcome.csv) {
        if let Err(e) = std::fs::write(path, csv) {
            return (2, format!("error: cannot write {}: {e}\n", path.display()));
        }
    }
    let record = RunRecord {
        command: name.to_string(),
        params: outcome.params,
        values: outcome.values,
        std_error: outcome.std_error,
        n_samples: outcome.n_samples,
        seed: outcome.seed,
        elapsed_seconds: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let text = serde_json::to_string_pretty(&record).expect("records serialize") + "\n";
    (if outcome.pass { 0 } else { 1 }, text)
}

fn split(cmd: &Command) -> (&'static str, &Params) {
    match cmd {
        Command::Table(p) => ("table", p),
        Command::Eval(p) => ("eval", p),
        Command::Mahler(p) => ("mahler", p),
        Command::Norm(p) => ("norm", p),
        Command::Zeros(p) => ("zeros", p),
        Command::ProcessSample(p) => ("process-sample", p),
        Command::K0(p) => ("k0", p),
        Command::Kq(p) => ("kq", p),
        Command::Moments(p) => ("moments", p),
        Command::Dist(p) => ("dist", p),
        Command::Verify(p) => ("verify", p),
    }
}

fn dispatch(cmd: &Command, cache: &Path) -> Result<Outcome> {
    let table = |p: &Params| arith::load_or_build(cache, p.prime());
    match cmd {
        Command::Table(a) => {
            let t = table(a)?;
            let residues = t.symbols().iter().filter(|&&s| s == 1).count();
            Ok(Outcome::new(json!({
                "p": t.p(),
                "residues": residues,
                "non_residues": t.symbols().len() - 1 - residues,
                "zero_order_at_one": t.zero_order_at_one(),
                "cache_file": arith::cache_path(cache, t.p()),
            }))
            .param("p", t.p()))
        }
        Command::Eval(a) => eval_grid(&table(a)?, a.grid),
        Command::Mahler(a) => {
            let e = quad::mahler_fekete(&table(a)?, &a.config()?)?;
            Ok(Outcome::new(json!(e.value))
                .estimate(&e)
                .param("p", a.prime())
                .param("nodes", a.nodes))
        }
        Command::Norm(a) => {
            let e = quad::lq_norm_fekete(&table(a)?, a.q, &a.config()?)?;
            Ok(Outcome::new(json!(e.value))
                .estimate(&e)
                .param("p", a.prime())
                .param("q", a.q)
                .param("nodes", a.nodes))
        }
        Command::Zeros(a) => {
            let z = quad::circle_zero_count(&table(a)?, &a.config()?)?;
            Ok(Outcome::new(json!(z)).param("p", a.prime()))
        }
        Command::ProcessSample(a) => process_sample(a),
        Command::K0(a) => {
            let mode = match a.mode {
                Mode::Exact => EstimateMode::Exact,
                Mode::Mc => EstimateMode::MonteCarlo,
            };
            let r = process::k0_estimate(a.j, a.samples, mode, a.seed, &a.config()?)?;
            let mut out = Outcome::new(json!(r))
                .estimate(&r.k0)
                .param("J", a.j)
                .param("mode", format!("{:?}", a.mode).to_lowercase());
            if a.mode == Mode::Mc {
                out = out.param("samples", a.samples).param("seed", a.seed);
            }
            Ok(out)
        }
        Command::Kq(a) => {
            let e = process::kq_estimate(a.q, a.j, a.samples, a.seed)?;
            Ok(Outcome::new(json!(e.value))
                .estimate(&e)
                .param("q", a.q)
                .param("J", a.j)
                .param("samples", a.samples)
                .param("seed", a.seed))
        }
        Command::Moments(a) => {
            let spec = MomentSpec::second(0.37)?;
            let r = verify::moment_convergence_report(&a.p, a.j, &spec)?;
            let mut csv = String::from("p,lhs_re,lhs_im,rhs_re,rhs_im,delta\n");
            for row in &r.rows {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    row.p,
                    num(row.lhs.re),
                    num(row.lhs.im),
                    num(row.rhs.re),
                    num(row.rhs.im),
                    num(row.delta)
                );
            }
            let mut out = Outcome::new(json!(r)).param("p", &a.p).param("J", a.j);
            out.csv = Some(csv);
            Ok(out)
        }
        Command::Dist(a) => {
            let rects = match &a.rects {
                Some(path) => verify::load_rectangles(path)?,
                None => verify::default_rectangles(),
            };
            let r = verify::distribution_compare(&table(a)?, &rects, a.j, a.samples, a.grid, a.seed)?;
            let mut csv = String::from("rect,fekete,process,gap\n");
            for i in 0..rects.len() {
                let _ = writeln!(csv, "{i},{},{},{}", num(r.fekete[i]), num(r.process[i]), num(r.gaps[i]));
            }
            let mut out = Outcome::new(json!(r))
                .seeded(a.samples, a.seed)
                .param("p", a.prime())
                .param("J", a.j)
                .param("samples", a.samples)
                .param("grid", a.grid)
                .param("seed", a.seed);
            out.csv = Some(csv);
            Ok(out)
        }
        Command::Verify(a) => run_suite(a, &table(a)?),
    }
}

/// CSV number format: 17 significant digits, '.' separator.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn eval_grid(t: &LegendreTable, grid: usize) -> Result<Outcome> {
    if grid == 0 {
        return Err(Error::domain("--grid must be positive"));
    }
    let pg = PhaseGrid::uniform(t.p(), grid);
    let rows = pg.evaluate_normalized(t);
    let mut csv = String::from("k,t,re,im\n");
    let (mut max_abs, mut sum_sq) = (0.0f64, 0.0);
    for k in 0..t.p() as usize {
        for (j, &off) in pg.offsets().iter().enumerate() {
            let z = rows[j][k];
            max_abs = max_abs.max(z.norm());
            sum_sq += z.norm_sqr();
            let _ = writeln!(csv, "{k},{},{},{}", num(off), num(z.re), num(z.im));
        }
    }
    let n = t.p() as usize * grid;
    let mut out = Outcome::new(json!({
        "points": n,
        "max_abs": max_abs,
        "mean_square": sum_sq / n as f64,
    }))
    .param("p", t.p())
    .param("grid", grid);
    out.csv = Some(csv);
    Ok(out)
}

fn process_sample(a: &Params) -> Result<Outcome> {
    if a.grid == 0 {
        return Err(Error::domain("--grid must be positive"));
    }
    let pattern = sample_pattern(a.j, a.seed, 0)?;
    let h = TruncatedH::new(&pattern);
    let log = process::pattern_log_integral(&pattern, &a.config()?)?;
    let mut csv = String::from("t,re,im\n");
    for i in 0..a.grid {
        let t = (i as f64 + 0.5) / a.grid as f64;
        let g: Complex64 = h.g(t);
        let _ = writeln!(csv, "{},{},{}", num(t), num(g.re), num(g.im));
    }
    let mut out = Outcome::new(json!({
        "log_integral": log.value,
        "zeros": log.zeros.iter().map(|z| z.root).collect::<Vec<_>>(),
    }))
    .seeded(1, a.seed)
    .param("J", a.j)
    .param("seed", a.seed)
    .param("grid", a.grid);
    out.std_error = log.error_estimate;
    out.csv = Some(csv);
    Ok(out)
}

fn run_suite(a: &Params, t: &LegendreTable) -> Result<Outcome> {
    let p = t.p();
    let (name, values, pass) = match a.suite {
        Suite::Quadsum => {
            // Σ_k ((k(k+n))/p) is p − 1 for n ≡ 0 and −1 otherwise.
            let bad: Vec<i64> = (0..p as i64)
                .filter(|&n| quadratic_correlation(t, n) != if n == 0 { p as i64 - 1 } else { -1 })
                .collect();
            ("quadsum", json!({ "shifts": p, "mismatches": bad }), bad.is_empty())
        }
        Suite::Gauss => {
            let err = (gauss_sum(t) - gauss_sum_closed_form(p)).norm();
            let tol = 1e-9 * (p as f64).sqrt();
            ("gauss", json!({ "error": err, "tolerance": tol }), err <= tol)
        }
        Suite::Parseval => {
            let e = quad::lq_norm_fekete(t, 2.0, &a.config()?)?;
            let want = ((p - 1) as f64 / p as f64).sqrt();
            let err = (e.value - want).abs();
            ("parseval", json!({ "value": e.value, "expected": want, "error": err }), err <= 1e-8)
        }
        Suite::Approx => {
            let ts: Vec<f64> = (0..=32).map(|j| j as f64 / 32.0).collect();
            let r = verify::approximation_gap(p, &ts)?;
            let pass = r.scaled_max.is_finite();
            ("approx", json!(r), pass)
        }
        Suite::Tightness => {
            let r = verify::tightness_ratio(t, 500, a.seed)?;
            let pass = r.max_ratio.is_finite();
            ("tightness", json!(r), pass)
        }
        Suite::Deriv => {
            let d1 = verify::deriv_gap(t, 1)?;
            let d2 = verify::deriv_gap(t, 2)?;
            ("deriv", json!({ "order1_scaled": d1, "order2_scaled": d2 }), d1.is_finite() && d2.is_finite())
        }
        Suite::Logtrunc => {
            let r = verify::log_truncation_check(LogTarget::Fekete { p }, &[0.1, 0.01, 0.001], &a.config()?)?;
            let pass = r.pass;
            ("logtrunc", json!(r), pass)
        }
        Suite::Sup => {
            let r = verify::sup_norm_report(t);
            let pass = r.gauss_point_ok && r.bernstein_ratio <= 1.0 + 1e-3;
            ("sup", json!(r), pass)
        }
        Suite::Moments => {
            let specs = [
                MomentSpec::second(0.37)?,
                MomentSpec::new(vec![0.2], vec![2], vec![0])?,
                MomentSpec::new(vec![0.2, 0.7], vec![1, 1], vec![1, 1])?,
            ];
            let mut worst: f64 = 0.0;
            for s in &specs {
                let d = verify::moment_rhs_exact(3, s)? - verify::moment_enumeration(3, s)?;
                worst = worst.max(d.norm());
            }
            let lhs = verify::moment_lhs(t, &specs[0]);
            let pass = worst <= 1e-12 && lhs.re >= -1e-10 && lhs.im.abs() <= 1e-10;
            (
                "moments",
                json!({ "enumeration_gap": worst, "second_moment": [lhs.re, lhs.im] }),
                pass,
            )
        }
    };
    let mut out = Outcome::new(json!({ "suite": name, "pass": pass, "report": values }))
        .param("suite", name)
        .param("p", p);
    if a.suite == Suite::Tightness {
        out = out.param("seed", a.seed).seeded(500, a.seed);
    }
    out.pass = pass;
    Ok(out)
}
