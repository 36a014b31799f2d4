//! Iterative estimation of the envelope without enumerating all maps: hard
//! cluster reassignment (argmin of a per-symbol bracket), an optional
//! temperature-smoothed update, restarts, and β-sweeps.
//!
//! For each symbol `x` and cluster `w`, the bracket combines the derivative of
//! the Rényi cost with a relevance penalty:
//!
//! ```text
//! α · P_W(w)^(α−1) / ((1−α) · Σ_w' P_W(w')^α) + β · D(P(Y|X=x) ‖ P(Y|W=w))
//! ```
//!
//! with `−log₂ P_W(w) + β · D(..)` as its Shannon-order form. Dead clusters
//! score `+∞`, so they never revive under hard updates; multiple restarts are
//! the mitigation. Hard updates assign each symbol to the bracket minimizer;
//! the smoothed update spreads each row as `exp₂(−bracket/ν)`, which
//! concentrates on the same minimizer as `ν → 0`.

use crate::bottleneck::{induce, induce_map, objective, Channel, DeterministicMap, InducedSystem};
use crate::frontier::{upper_concave_envelope, Envelope, TradeoffPoint};
use crate::prob::{kl_of, JointDistribution, RenyiOrder};
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Parameters for [`sweep`].
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Trade-off multipliers to sweep; each exposes the envelope vertex
    /// touched by the support line of slope `1/β`.
    pub beta_grid: Vec<f64>,
    /// Number of random initializations per β, on top of the two canonical
    /// ones.
    pub restarts: usize,
    /// Iteration cap per run.
    pub max_iter: usize,
    /// Seed for the random initializations.
    pub seed: u64,
    /// When set, runs the temperature-smoothed update at this temperature
    /// instead of hard reassignment, then rounds the final channel back to a
    /// deterministic map.
    pub nu: Option<f64>,
    pub order: RenyiOrder,
    pub m: u32,
}

impl SolverConfig {
    pub fn new(order: RenyiOrder, m: u32) -> Self {
        Self {
            beta_grid: Self::default_beta_grid(),
            restarts: 20,
            max_iter: 200,
            seed: 0,
            nu: None,
            order,
            m,
        }
    }

    /// `{0} ∪ {2^k : k = −4..8}`: support-line slopes from 16 down to 1/256.
    pub fn default_beta_grid() -> Vec<f64> {
        let mut grid = vec![0.0];
        grid.extend((-4..=8).map(|k| 2f64.powi(k)));
        grid
    }

    fn validate(&self) -> Result<()> {
        if self.beta_grid.is_empty() {
            return Err(Error::InvalidConfig("beta grid must be non-empty".into()));
        }
        if let Some(&bad) = self.beta_grid.iter().find(|b| !(**b >= 0.0)) {
            return Err(Error::InvalidConfig(format!("beta must be non-negative, got {bad}")));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidConfig("m must be at least 1".into()));
        }
        if let Some(nu) = self.nu {
            if !(nu > 0.0) {
                return Err(Error::InvalidConfig(format!("nu must be positive, got {nu}")));
            }
        }
        Ok(())
    }
}

/// Outcome of one run of [`iterate`]: the best map encountered along the
/// trajectory, judged by the support-line objective.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub final_map: DeterministicMap,
    pub point: TradeoffPoint,
    /// `β · eta − gamma` at the returned map.
    pub objective_value: f64,
    /// Number of update steps performed.
    pub iterations: usize,
    /// A fixed point was reached.
    pub converged: bool,
    /// The trajectory revisited an earlier non-adjacent map.
    pub cycle_detected: bool,
}

/// How a run was initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// `g(x) = x mod M`.
    Identity,
    /// Greedy grouping of symbols with matching conditionals.
    Greedy,
    /// Seeded uniform assignment, numbered restart.
    Random(u32),
}

impl std::fmt::Display for InitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitKind::Identity => write!(f, "identity"),
            InitKind::Greedy => write!(f, "greedy"),
            InitKind::Random(i) => write!(f, "random-{i}"),
        }
    }
}

/// One sweep run with its β and initialization.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub beta: f64,
    pub init: InitKind,
    pub run: SolverRun,
}

/// Everything a sweep produces: the collected points, their envelope, and the
/// per-run log.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub points: Vec<TradeoffPoint>,
    pub envelope: Envelope,
    pub runs: Vec<RunRecord>,
}

fn bracket_from_parts(
    cond_x: &[f64],
    state: &InducedSystem,
    power_sum: f64,
    w: usize,
    beta: f64,
) -> f64 {
    let pw = state.p_w().masses()[w];
    if pw <= 0.0 {
        return f64::INFINITY;
    }
    let renyi_term = if state.order.is_shannon() {
        -pw.log2()
    } else {
        let alpha = state.order.alpha();
        alpha * pw.powf(alpha - 1.0) / ((1.0 - alpha) * power_sum)
    };
    if beta > 0.0 {
        let d = kl_of(cond_x, state.conditional(w).expect("live cluster").masses());
        if d.is_infinite() {
            return f64::INFINITY;
        }
        renyi_term + beta * d
    } else {
        // beta = 0 must not touch the divergence: 0 · ∞ is NaN
        renyi_term
    }
}

fn power_sum_of(state: &InducedSystem) -> f64 {
    if state.order.is_shannon() {
        return 0.0;
    }
    let alpha = state.order.alpha();
    state.p_w().masses().iter().filter(|&&p| p > 0.0).map(|&p| p.powf(alpha)).sum()
}

/// The per-symbol, per-cluster selection score, `+∞` for dead clusters or an
/// unmatchable conditional. Hard updates pick its minimizer over `w`.
pub fn bracket(
    j: &JointDistribution,
    x: usize,
    w: usize,
    state: &InducedSystem,
    beta: f64,
) -> f64 {
    let cond = j.y_given_x(x);
    bracket_from_parts(cond.masses(), state, power_sum_of(state), w, beta)
}

/// Per-symbol x-conditionals, computed once per joint.
fn source_conditionals(j: &JointDistribution) -> Vec<Vec<f64>> {
    (0..j.x_size()).map(|x| j.y_given_x(x).masses().to_vec()).collect()
}

fn hard_assign(
    conds: &[Vec<f64>],
    state: &InducedSystem,
    beta: f64,
) -> Vec<u32> {
    let m = state.num_clusters();
    let power_sum = power_sum_of(state);
    let pw = state.p_w().masses();
    conds
        .iter()
        .map(|cond| {
            let mut best: Option<(f64, usize)> = None;
            for w in 0..m {
                let b = bracket_from_parts(cond, state, power_sum, w, beta);
                if b.is_finite() && best.map_or(true, |(v, _)| b < v) {
                    best = Some((b, w));
                }
            }
            match best {
                Some((_, w)) => w as u32,
                // every bracket infinite: fall back to the live cluster with
                // the smallest Rényi term, i.e. the largest mass
                None => {
                    let mut w_best = 0;
                    let mut mass = f64::NEG_INFINITY;
                    for (w, &p) in pw.iter().enumerate() {
                        if p > 0.0 && p > mass {
                            mass = p;
                            w_best = w;
                        }
                    }
                    w_best as u32
                }
            }
        })
        .collect()
}

/// One hard reassignment step: each symbol moves independently to the cluster
/// minimizing the bracket of the previous iterate's induced state (ties break
/// to the smallest cluster index).
pub fn hard_update(
    j: &JointDistribution,
    prev: &DeterministicMap,
    beta: f64,
    order: RenyiOrder,
) -> Result<DeterministicMap> {
    let state = induce_map(j, prev, order)?;
    let conds = source_conditionals(j);
    DeterministicMap::new(hard_assign(&conds, &state, beta), prev.num_clusters())
}

/// One smoothed update at temperature `nu`: row `x` becomes
/// `exp₂(−bracket(x, ·)/ν)` normalized. Rows whose brackets are all `+∞` are
/// copied from `prev`; dead clusters keep exactly zero mass.
pub fn soft_update(
    j: &JointDistribution,
    prev: &Channel,
    beta: f64,
    order: RenyiOrder,
    nu: f64,
) -> Result<Channel> {
    if !(nu > 0.0) {
        return Err(Error::InvalidConfig(format!("nu must be positive, got {nu}")));
    }
    let state = induce(j, prev, order)?;
    let conds = source_conditionals(j);
    let m = state.num_clusters();
    let power_sum = power_sum_of(&state);
    let mut rows = Vec::with_capacity(j.x_size());
    for (x, cond) in conds.iter().enumerate() {
        let brackets: Vec<f64> =
            (0..m).map(|w| bracket_from_parts(cond, &state, power_sum, w, beta)).collect();
        let min = brackets.iter().copied().fold(f64::INFINITY, f64::min);
        if min.is_infinite() {
            rows.push(prev.row(x).to_vec());
            continue;
        }
        // shift by the minimum so the normalizer stays finite
        let weights: Vec<f64> = brackets.iter().map(|&b| (-(b - min) / nu).exp2()).collect();
        let z: f64 = weights.iter().sum();
        rows.push(weights.into_iter().map(|v| v / z).collect());
    }
    Channel::from_rows(rows)
}

/// Runs hard updates from `init` until a previously seen map recurs (fixed
/// point or cycle) or `max_iter` steps, returning the best-objective map
/// encountered, the initial map included.
pub fn iterate(
    j: &JointDistribution,
    init: &DeterministicMap,
    beta: f64,
    order: RenyiOrder,
    max_iter: usize,
) -> Result<SolverRun> {
    let conds = source_conditionals(j);
    iterate_with_conds(j, &conds, init, beta, order, max_iter)
}

fn iterate_with_conds(
    j: &JointDistribution,
    conds: &[Vec<f64>],
    init: &DeterministicMap,
    beta: f64,
    order: RenyiOrder,
    max_iter: usize,
) -> Result<SolverRun> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut current = init.clone();
    let mut state = induce_map(j, &current, order)?;
    let mut best_map = current.clone();
    let mut best_obj = objective(&state, beta);
    let mut best_point =
        TradeoffPoint { gamma: state.renyi_cost, eta: state.relevance, witness: current.clone() };
    seen.insert(current.assignment().to_vec());

    let mut iterations = 0;
    let mut converged = false;
    let mut cycle_detected = false;
    while iterations < max_iter {
        let next = hard_assign(conds, &state, beta);
        iterations += 1;
        if next == current.assignment() {
            converged = true;
            break;
        }
        let next = DeterministicMap::new(next, current.num_clusters())?;
        let next_state = induce_map(j, &next, order)?;
        let obj = objective(&next_state, beta);
        if obj > best_obj {
            best_obj = obj;
            best_map = next.clone();
            best_point = TradeoffPoint {
                gamma: next_state.renyi_cost,
                eta: next_state.relevance,
                witness: next.clone(),
            };
        }
        if !seen.insert(next.assignment().to_vec()) {
            cycle_detected = true;
            break;
        }
        current = next;
        state = next_state;
    }

    best_point.witness = best_map.clone();
    Ok(SolverRun {
        final_map: best_map,
        point: best_point,
        objective_value: best_obj,
        iterations,
        converged,
        cycle_detected,
    })
}

/// Soft-mode run: smoothed updates to (near) convergence, then the final
/// channel is rounded row-wise to its heaviest cluster.
fn iterate_soft(
    j: &JointDistribution,
    init: &DeterministicMap,
    beta: f64,
    order: RenyiOrder,
    nu: f64,
    max_iter: usize,
) -> Result<SolverRun> {
    let mut channel = init.to_channel();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let next = soft_update(j, &channel, beta, order, nu)?;
        iterations += 1;
        let delta = (0..j.x_size())
            .flat_map(|x| {
                next.row(x).iter().zip(channel.row(x)).map(|(a, b)| (a - b).abs())
            })
            .fold(0.0, f64::max);
        channel = next;
        if delta < 1e-12 {
            converged = true;
            break;
        }
    }
    let assignment = (0..j.x_size())
        .map(|x| {
            let row = channel.row(x);
            let mut best = 0usize;
            for w in 1..row.len() {
                if row[w] > row[best] {
                    best = w;
                }
            }
            best as u32
        })
        .collect();
    let hardened = DeterministicMap::new(assignment, init.num_clusters())?;
    let state = induce_map(j, &hardened, order)?;
    Ok(SolverRun {
        point: TradeoffPoint {
            gamma: state.renyi_cost,
            eta: state.relevance,
            witness: hardened.clone(),
        },
        objective_value: objective(&state, beta),
        final_map: hardened,
        iterations,
        converged,
        cycle_detected: false,
    })
}

/// Greedy block-style initialization: symbols with elementwise-matching
/// conditionals share a cluster; groups wrap around modulo `M`.
fn greedy_partition(j: &JointDistribution, m: u32) -> DeterministicMap {
    let conds = source_conditionals(j);
    let mut reps: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(j.x_size());
    for x in 0..j.x_size() {
        let group = reps
            .iter()
            .position(|&r| {
                conds[x].iter().zip(&conds[r]).all(|(a, b)| (a - b).abs() <= 1e-12)
            })
            .unwrap_or_else(|| {
                reps.push(x);
                reps.len() - 1
            });
        assignment.push(group as u32 % m);
    }
    DeterministicMap::new(assignment, m).expect("group indices are reduced modulo m")
}

fn run_task(
    j: &JointDistribution,
    conds: &[Vec<f64>],
    config: &SolverConfig,
    beta: f64,
    init_kind: InitKind,
    stream: u64,
) -> Result<RunRecord> {
    let init = match init_kind {
        InitKind::Identity => DeterministicMap::identity_like(j.x_size(), config.m),
        InitKind::Greedy => greedy_partition(j, config.m),
        InitKind::Random(_) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(stream);
            let assignment = (0..j.x_size()).map(|_| rng.gen_range(0..config.m)).collect();
            DeterministicMap::new(assignment, config.m)?
        }
    };
    let run = match config.nu {
        Some(nu) => iterate_soft(j, &init, beta, config.order, nu, config.max_iter)?,
        None => iterate_with_conds(j, conds, &init, beta, config.order, config.max_iter)?,
    };
    Ok(RunRecord { beta, init: init_kind, run })
}

fn sweep_tasks(config: &SolverConfig) -> Vec<(usize, InitKind)> {
    let mut tasks = Vec::new();
    for beta_index in 0..config.beta_grid.len() {
        tasks.push((beta_index, InitKind::Identity));
        tasks.push((beta_index, InitKind::Greedy));
        for r in 0..config.restarts {
            tasks.push((beta_index, InitKind::Random(r as u32)));
        }
    }
    tasks
}

fn collect_outcome(
    j: &JointDistribution,
    config: &SolverConfig,
    runs: Vec<RunRecord>,
) -> Result<SweepOutcome> {
    // the constant map anchors the envelope at (0, 0) even for degenerate grids
    let baseline = induce_map(j, &DeterministicMap::constant(j.x_size(), config.m), config.order)?;
    let mut points = vec![TradeoffPoint {
        gamma: baseline.renyi_cost,
        eta: baseline.relevance,
        witness: DeterministicMap::constant(j.x_size(), config.m),
    }];
    points.extend(runs.iter().map(|r| r.run.point.clone()));
    let envelope = upper_concave_envelope(&points)?;
    Ok(SweepOutcome { points, envelope, runs })
}

/// Sequential β-sweep: for every β in the grid, runs [`iterate`] from the two
/// canonical initializations plus `restarts` seeded random ones, and builds
/// the envelope of everything found.
pub fn sweep_seq(j: &JointDistribution, config: &SolverConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let conds = source_conditionals(j);
    let tasks = sweep_tasks(config);
    let runs = tasks
        .iter()
        .enumerate()
        .map(|(stream, &(bi, kind))| {
            run_task(j, &conds, config, config.beta_grid[bi], kind, stream as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    collect_outcome(j, config, runs)
}

/// Parallel β-sweep over the (β, restart) grid. Tasks are pure and results
/// are merged in task order, so the outcome is identical to [`sweep_seq`].
pub fn sweep(j: &JointDistribution, config: &SolverConfig) -> Result<SweepOutcome> {
    #[cfg(feature = "parallel")]
    {
        config.validate()?;
        let conds = source_conditionals(j);
        let tasks = sweep_tasks(config);
        let runs = tasks
            .par_iter()
            .enumerate()
            .map(|(stream, &(bi, kind))| {
                run_task(j, &conds, config, config.beta_grid[bi], kind, stream as u64)
            })
            .collect::<Result<Vec<_>>>()?;
        collect_outcome(j, config, runs)
    }
    #[cfg(not(feature = "parallel"))]
    sweep_seq(j, config)
}
