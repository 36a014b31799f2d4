//! Single-binary front end: load a joint distribution, compute exhaustive
//! frontiers, run the iterative solver, build time-sharing codes, and verify
//! the built-in demo instances.
//!
//! Exit codes: 0 on success (all demo claims passing), 1 for input validation
//! failures, 2 when an enumeration exceeds the feasibility cap, 3 for
//! internal failures (output I/O, failed demo claims).

mod input;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use renyi_ib::canonical::{canonical_map, example1_joint, example2_joint, omega, table1a, BlockDiagonalSpec};
use renyi_ib::solver::{sweep, SolverConfig};
use renyi_ib::timeshare::{evaluate, plan, realize, simulate};
use renyi_ib::{
    brute_force_points, induce_map, mutual_information, shannon_entropy, upper_concave_envelope,
    Distribution, Envelope, JointDistribution, RenyiOrder,
};
use std::path::PathBuf;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn validation(message: String) -> Self {
        Self { code: 1, message }
    }

    pub fn internal(message: String) -> Self {
        Self { code: 3, message }
    }
}

impl From<renyi_ib::Error> for CliError {
    fn from(e: renyi_ib::Error) -> Self {
        let code = match e {
            renyi_ib::Error::Infeasible { .. } => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "renyi-ib",
    version,
    about = "Relevance vs. Renyi-entropy trade-offs for discrete joints: exact frontiers, iterative solving, time-sharing codes"
)]
struct Cli {
    /// Worker threads for frontier evaluation and solver sweeps (0 = all
    /// cores). Output is independent of this setting.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a joint file and report its basic information quantities.
    Info {
        /// Path to the joint distribution file (JSON; see README for the schema).
        joint: PathBuf,
    },
    /// Enumerate all deterministic maps and write the trade-off points and
    /// their upper concave envelope as CSV.
    Frontier {
        joint: PathBuf,
        /// Renyi order in (0, 1]; 1 is the Shannon case.
        #[arg(long)]
        alpha: f64,
        /// Cluster alphabet size.
        #[arg(long = "M")]
        m: u32,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the envelope with the iterative solver over a beta grid.
    Solve {
        joint: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "M")]
        m: u32,
        /// Comma-separated beta values, or "default" for {0} ∪ {2^-4 .. 2^8}.
        #[arg(long, default_value = "default")]
        beta_grid: String,
        /// Random initializations per beta (two canonical ones are always added).
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Temperature for the smoothed update; omit for hard reassignment.
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the time-sharing code achieving the envelope at a cost budget.
    Timeshare {
        joint: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "M")]
        m: u32,
        /// Cost budget (bits per symbol).
        #[arg(long)]
        gamma: f64,
        /// Block length of the realized code.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also estimate the realized pair by Monte Carlo.
        #[arg(long)]
        simulate: bool,
    },
    /// Build a named instance and verify its closed-form properties.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DemoName {
    Example1,
    Example2,
    Table1a,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code for usage errors is 2, which this tool
            // reserves for infeasible enumerations
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let threads = cli.jobs;
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn parse_alpha(alpha: f64) -> CliResult<RenyiOrder> {
    RenyiOrder::new(alpha).map_err(CliError::from)
}

fn parse_beta_grid(s: &str) -> CliResult<Vec<f64>> {
    if s.trim() == "default" {
        return Ok(SolverConfig::default_beta_grid());
    }
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::validation(format!("bad beta value \"{tok}\"")))
        })
        .collect()
}

fn ensure_out_dir(dir: &PathBuf) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::internal(format!("cannot create {}: {e}", dir.display())))
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Info { joint } => cmd_info(&joint),
        Command::Frontier { joint, alpha, m, out } => cmd_frontier(&joint, alpha, m, &out),
        Command::Solve { joint, alpha, m, beta_grid, restarts, max_iter, seed, nu, out } => {
            cmd_solve(&joint, alpha, m, &beta_grid, restarts, max_iter, seed, nu, &out)
        }
        Command::Timeshare { joint, alpha, m, gamma, n, seed, simulate } => {
            cmd_timeshare(&joint, alpha, m, gamma, n, seed, simulate)
        }
        Command::Demo { name } => cmd_demo(name),
    }
}

fn cmd_info(path: &PathBuf) -> CliResult<()> {
    let (j, bytes) = input::load_joint(path)?;
    println!("joint: {} ({} bytes, sha256:{})", path.display(), bytes.len(), output::sha256_hex(&bytes));
    println!("alphabets: |Y| = {}, |X| = {}", j.y_size(), j.x_size());
    if let (Some(y), Some(x)) = (j.y_labels(), j.x_labels()) {
        println!("labels: Y = [{}], X = [{}]", y.join(", "), x.join(", "));
    }
    println!("H(X) = {} bits", shannon_entropy(&j.p_x()));
    println!("H(Y) = {} bits", shannon_entropy(&j.p_y()));
    println!("I(Y;X) = {} bits", mutual_information(&j));
    Ok(())
}

fn frontier_envelope(j: &JointDistribution, order: RenyiOrder, m: u32) -> CliResult<(Vec<renyi_ib::TradeoffPoint>, Envelope)> {
    let points = brute_force_points(j, order, m)?;
    let envelope = upper_concave_envelope(&points)?;
    Ok((points, envelope))
}

fn cmd_frontier(path: &PathBuf, alpha: f64, m: u32, out: &PathBuf) -> CliResult<()> {
    let order = parse_alpha(alpha)?;
    let (j, bytes) = input::load_joint(path)?;
    let (points, envelope) = frontier_envelope(&j, order, m)?;
    ensure_out_dir(out)?;
    output::write_points_csv(&out.join("points.csv"), &points, alpha, m, "bruteforce")?;
    output::write_envelope_csv(&out.join("envelope.csv"), &envelope)?;
    output::write_manifest(
        &out.join("manifest.json"),
        "frontier",
        &bytes,
        None,
        serde_json::json!({"alpha": alpha, "M": m}),
    )?;
    println!(
        "frontier: {} maps -> {} vertices, flat point ({}, {})",
        points.len(),
        envelope.vertices().len(),
        envelope.flat_start(),
        envelope.flat_value()
    );
    println!("wrote {}", out.join("points.csv").display());
    println!("wrote {}", out.join("envelope.csv").display());
    println!("wrote {}", out.join("manifest.json").display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    path: &PathBuf,
    alpha: f64,
    m: u32,
    beta_grid: &str,
    restarts: usize,
    max_iter: usize,
    seed: u64,
    nu: Option<f64>,
    out: &PathBuf,
) -> CliResult<()> {
    let order = parse_alpha(alpha)?;
    let (j, bytes) = input::load_joint(path)?;
    let config = SolverConfig {
        beta_grid: parse_beta_grid(beta_grid)?,
        restarts,
        max_iter,
        seed,
        nu,
        order,
        m,
    };
    let outcome = sweep(&j, &config)?;
    ensure_out_dir(out)?;
    output::write_points_csv(&out.join("points.csv"), &outcome.points, alpha, m, "solver")?;
    output::write_envelope_csv(&out.join("envelope.csv"), &outcome.envelope)?;
    output::write_runs_csv(&out.join("runs.csv"), &outcome)?;
    output::write_manifest(
        &out.join("manifest.json"),
        "solve",
        &bytes,
        Some(seed),
        serde_json::json!({
            "alpha": alpha,
            "M": m,
            "beta_grid": config.beta_grid,
            "restarts": restarts,
            "max_iter": max_iter,
            "nu": nu,
        }),
    )?;
    let converged = outcome.runs.iter().filter(|r| r.run.converged).count();
    println!(
        "solve: {} runs ({} converged) -> {} vertices, flat point ({}, {})",
        outcome.runs.len(),
        converged,
        outcome.envelope.vertices().len(),
        outcome.envelope.flat_start(),
        outcome.envelope.flat_value()
    );
    println!("wrote {}", out.join("points.csv").display());
    println!("wrote {}", out.join("envelope.csv").display());
    println!("wrote {}", out.join("runs.csv").display());
    println!("wrote {}", out.join("manifest.json").display());
    Ok(())
}

fn cmd_timeshare(
    path: &PathBuf,
    alpha: f64,
    m: u32,
    gamma: f64,
    n: usize,
    seed: u64,
    run_simulation: bool,
) -> CliResult<()> {
    let order = parse_alpha(alpha)?;
    let (j, _) = input::load_joint(path)?;
    let (_, envelope) = frontier_envelope(&j, order, m)?;
    let p = plan(&envelope, gamma)?;
    println!("plan for gamma = {gamma} (alpha = {alpha}, M = {m})");
    println!("  targets: gamma = {}, eta = {}", p.target_gamma, p.target_eta);
    for (i, (map, weight)) in p.segments().iter().enumerate() {
        println!("  segment {}: weight = {}, map = {}", i + 1, weight, map.digits());
    }
    let code = realize(&p, n)?;
    let mut start = 1usize;
    for (map, len) in code.segments() {
        println!("  positions {start}..{}: map {}", start + len - 1, map.digits());
        start += len;
    }
    let (gn, en) = evaluate(&code, &j, order)?;
    println!("analytic: gamma_n = {gn}, eta_n = {en}");
    if run_simulation {
        let (gh, eh) = simulate(&code, &j, order, seed)?;
        println!("simulated (seed {seed}): gamma_hat = {gh}, eta_hat = {eh}");
    }
    Ok(())
}

/// Collects PASS/FAIL lines; any failure flips the exit code to 3.
struct Claims {
    failures: usize,
}

impl Claims {
    fn new() -> Self {
        Self { failures: 0 }
    }

    /// Two-sided check: |residual| ≤ tolerance.
    fn residual(&mut self, name: &str, residual: f64, tolerance: f64) {
        let pass = residual.abs() <= tolerance;
        if !pass {
            self.failures += 1;
        }
        println!(
            "{}  {name}: residual {residual:.3e} (tolerance {tolerance:.0e})",
            if pass { "PASS" } else { "FAIL" }
        );
    }

    /// One-sided check: value ≤ bound.
    fn upper(&mut self, name: &str, value: f64, bound: f64) {
        let pass = value <= bound;
        if !pass {
            self.failures += 1;
        }
        println!(
            "{}  {name}: value {value:.6} (bound {bound:.6})",
            if pass { "PASS" } else { "FAIL" }
        );
    }

    fn finish(self) -> CliResult<()> {
        if self.failures == 0 {
            println!("all claims pass");
            Ok(())
        } else {
            Err(CliError::internal(format!("{} claim(s) failed", self.failures)))
        }
    }
}

fn max_deviation_from_outer_bound(e: &Envelope, i_yx: f64, hi: f64) -> f64 {
    (0..=100)
        .map(|k| {
            let gamma = hi * k as f64 / 100.0;
            (e.evaluate(gamma).unwrap() - omega(gamma, i_yx).unwrap()).abs()
        })
        .fold(0.0, f64::max)
}

fn cmd_demo(name: DemoName) -> CliResult<()> {
    let mut claims = Claims::new();
    match name {
        DemoName::Example1 => {
            // Y = f(X) with f pairing four uniform symbols into two outputs
            let p_x = Distribution::uniform(4)?;
            let j = example1_joint(&[0, 0, 1, 1], 2, &p_x)?;
            let i_yx = mutual_information(&j);
            let h_y = shannon_entropy(&j.p_y());
            println!("instance: Y = f(X), |X| = 4 uniform, f pairs symbols; M = 4, alpha = 1");
            claims.residual("I(Y;X) = H(Y)", i_yx - h_y, 1e-12);
            let (_, e) = frontier_envelope(&j, RenyiOrder::SHANNON, 4)?;
            claims.residual("envelope(0) = 0", e.evaluate(0.0)?, 1e-12);
            claims.residual(
                "envelope = min(gamma, I(Y;X)) on [0, 2]",
                max_deviation_from_outer_bound(&e, i_yx, 2.0),
                1e-9,
            );
        }
        DemoName::Example2 => {
            let spec = BlockDiagonalSpec::new(
                vec![2, 1, 2],
                vec![1, 3, 2],
                vec![0.125, 0.125, 0.09375],
            )?;
            let (j, labels) = example2_joint(&spec);
            println!(
                "instance: block-diagonal joint, K = 3, weights ({}); M = 3, alpha = 1",
                spec.weights().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
            );
            let i_yx = mutual_information(&j);
            claims.residual(
                "I(Y;X) = -sum s_k log2 s_k",
                i_yx - spec.mutual_information(),
                1e-12,
            );
            let g = canonical_map(&labels, 3)?;
            let s = induce_map(&j, &g, RenyiOrder::SHANNON)?;
            let pw_residual = s
                .p_w()
                .masses()
                .iter()
                .zip(spec.weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            claims.residual("P_W = block weights for the canonical map", pw_residual, 0.0);
            let (_, e) = frontier_envelope(&j, RenyiOrder::SHANNON, 3)?;
            claims.residual("envelope(I) = I", e.evaluate(i_yx)? - i_yx, 1e-9);
            claims.residual(
                "envelope = min(gamma, I(Y;X)) on [0, I]",
                max_deviation_from_outer_bound(&e, i_yx, i_yx),
                1e-9,
            );
        }
        DemoName::Table1a => {
            let (j, _) = table1a();
            println!("instance: table1a (4x5 block-diagonal demo joint)");
            claims.residual("H(X) = 2.25", shannon_entropy(&j.p_x()) - 2.25, 1e-12);
            claims.residual("I(Y;X) = 1.5", mutual_information(&j) - 1.5, 1e-12);
            for alpha in [0.1, 0.5, 1.0] {
                let order = parse_alpha(alpha)?;
                let (_, e) = frontier_envelope(&j, order, 2)?;
                let vs = e.vertices();
                let residual = if vs.len() == 2 {
                    vs[0].gamma
                        .abs()
                        .max(vs[0].eta.abs())
                        .max((vs[1].gamma - 1.0).abs())
                        .max((vs[1].eta - 1.0).abs())
                } else {
                    f64::INFINITY
                };
                claims.residual(
                    &format!("M=2 vertices are (0,0),(1,1) at alpha {alpha}"),
                    residual,
                    1e-12,
                );
            }
            let (_, shannon_env) = frontier_envelope(&j, RenyiOrder::SHANNON, 3)?;
            claims.residual(
                "M=3 alpha=1 flat point is (1.5, 1.5)",
                (shannon_env.flat_start() - 1.5).abs().max((shannon_env.flat_value() - 1.5).abs()),
                1e-9,
            );
            claims.residual(
                "M=3 alpha=1 envelope = min(gamma, 1.5)",
                max_deviation_from_outer_bound(&shannon_env, 1.5, 2.5),
                1e-9,
            );
            let (_, half_env) = frontier_envelope(&j, parse_alpha(0.5)?, 3)?;
            let expected = 2.0 * (1.0 + 1.0 / 2f64.sqrt()).log2();
            claims.residual(
                "M=3 alpha=0.5 flat point is (2 log2(1 + 1/sqrt(2)), 1.5)",
                (half_env.flat_start() - expected).abs().max((half_env.flat_value() - 1.5).abs()),
                1e-9,
            );
            for alpha in [0.1, 0.5, 1.0] {
                let (_, e) = frontier_envelope(&j, parse_alpha(alpha)?, 3)?;
                claims.upper(
                    &format!("M=3 flat start stays below H(X) at alpha {alpha}"),
                    e.flat_start(),
                    2.25,
                );
            }
        }
    }
    claims.finish()
}
