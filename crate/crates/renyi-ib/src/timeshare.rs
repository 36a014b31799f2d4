//! Symbol-wise time-sharing codes: realize any envelope point `(γ, Ī(γ))` by
//! splitting a length-`n` block between at most two deterministic maps, then
//! evaluate the average cost/relevance pair analytically or by Monte Carlo.

use crate::bottleneck::{induce_map, DeterministicMap};
use crate::frontier::Envelope;
use crate::prob::{mutual_information_of, renyi_of, JointDistribution, RenyiOrder};
use crate::{Error, Result};
use rand::distributions::{Distribution as _, WeightedIndex};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A convex combination of at most two witness maps hitting a target point on
/// the envelope.
#[derive(Debug, Clone)]
pub struct TimeSharePlan {
    segments: Vec<(DeterministicMap, f64)>,
    /// The cost the plan realizes; at most the requested budget.
    pub target_gamma: f64,
    /// The envelope value at the requested budget.
    pub target_eta: f64,
}

impl TimeSharePlan {
    /// `(map, weight)` pairs; weights are positive and sum to 1.
    pub fn segments(&self) -> &[(DeterministicMap, f64)] {
        &self.segments
    }
}

/// Picks the mixture achieving `(γ, envelope(γ))`.
///
/// Beyond the flat start a single segment with the flat-point witness
/// suffices (its cost is below the budget); at a vertex the plan is that
/// vertex's witness alone; in between, the two bracketing vertices mix with
/// weights solving `λ·γ₁ + (1−λ)·γ₂ = γ`.
pub fn plan(e: &Envelope, gamma: f64) -> Result<TimeSharePlan> {
    if !(gamma >= 0.0) {
        return Err(Error::NegativeGamma { gamma });
    }
    let vertices = e.vertices();
    if gamma >= e.flat_start() {
        let flat = vertices.last().unwrap();
        return Ok(TimeSharePlan {
            segments: vec![(flat.witness.clone(), 1.0)],
            target_gamma: flat.gamma,
            target_eta: flat.eta,
        });
    }
    let target_eta = e.evaluate(gamma)?;
    let hi = vertices.partition_point(|v| v.gamma <= gamma);
    // gamma < flat_start guarantees 1 <= hi < len
    let (left, right) = (&vertices[hi - 1], &vertices[hi]);
    let lambda = (right.gamma - gamma) / (right.gamma - left.gamma);
    let mut segments = Vec::new();
    if lambda > 0.0 {
        segments.push((left.witness.clone(), lambda));
    }
    if lambda < 1.0 {
        segments.push((right.witness.clone(), 1.0 - lambda));
    }
    Ok(TimeSharePlan { segments, target_gamma: gamma, target_eta })
}

/// A length-`n` code applying one deterministic map per position, stored as
/// runs of consecutive positions sharing a map.
#[derive(Debug, Clone)]
pub struct SymbolwiseCode {
    segments: Vec<(DeterministicMap, usize)>,
    n: usize,
}

impl SymbolwiseCode {
    /// Builds a code from one map per position, merging consecutive repeats.
    pub fn from_position_maps(maps: Vec<DeterministicMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptyCode);
        }
        let x_size = maps[0].x_size();
        if maps.iter().any(|m| m.x_size() != x_size) {
            return Err(Error::DimensionMismatch {
                expected: x_size,
                actual: maps.iter().find(|m| m.x_size() != x_size).unwrap().x_size(),
            });
        }
        let n = maps.len();
        let mut segments: Vec<(DeterministicMap, usize)> = Vec::new();
        for map in maps {
            match segments.last_mut() {
                Some((last, len)) if *last == map => *len += 1,
                _ => segments.push((map, 1)),
            }
        }
        Ok(Self { segments, n })
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    /// `(map, run length)` pairs covering positions `0..n` in order.
    pub fn segments(&self) -> &[(DeterministicMap, usize)] {
        &self.segments
    }

    /// The map applied at a given position.
    pub fn map_at(&self, mut position: usize) -> &DeterministicMap {
        for (map, len) in &self.segments {
            if position < *len {
                return map;
            }
            position -= len;
        }
        panic!("position {position} out of range for block length {}", self.n)
    }
}

/// Lays a plan out over `n` positions: the first segment gets `round(λ₁·n)`
/// of them, the second the rest.
pub fn realize(p: &TimeSharePlan, n: usize) -> Result<SymbolwiseCode> {
    if n == 0 {
        return Err(Error::EmptyCode);
    }
    let mut segments = Vec::new();
    match p.segments() {
        [(map, _)] => segments.push((map.clone(), n)),
        [(first, lambda), (second, _)] => {
            let first_len = (lambda * n as f64).round() as usize;
            let first_len = first_len.min(n);
            if first_len > 0 {
                segments.push((first.clone(), first_len));
            }
            if first_len < n {
                segments.push((second.clone(), n - first_len));
            }
        }
        _ => unreachable!("plans carry one or two segments"),
    }
    Ok(SymbolwiseCode { segments, n })
}

/// Analytic per-position averages `(γ_n, η_n)`.
///
/// The source is i.i.d. and each position applies a fixed map, so position
/// `i` contributes exactly its map's induced pair; the averages are the
/// run-length-weighted means. No sampling involved.
pub fn evaluate(
    c: &SymbolwiseCode,
    j: &JointDistribution,
    order: RenyiOrder,
) -> Result<(f64, f64)> {
    let mut gamma_total = 0.0;
    let mut eta_total = 0.0;
    for (map, len) in c.segments() {
        let s = induce_map(j, map, order)?;
        gamma_total += *len as f64 * s.renyi_cost;
        eta_total += *len as f64 * s.relevance;
    }
    let n = c.block_length() as f64;
    Ok((gamma_total / n, eta_total / n))
}

/// Monte Carlo counterpart of [`evaluate`]: draws `(Yⁿ, Xⁿ)` i.i.d. from the
/// joint, applies the code, and plugs per-segment empirical frequencies into
/// the same entropy formulas. No bias correction.
pub fn simulate(
    c: &SymbolwiseCode,
    j: &JointDistribution,
    order: RenyiOrder,
    seed: u64,
) -> Result<(f64, f64)> {
    let first_map = &c.segments()[0].0;
    if first_map.x_size() != j.x_size() {
        return Err(Error::DimensionMismatch {
            expected: j.x_size(),
            actual: first_map.x_size(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = WeightedIndex::new(j.data().iter().copied())
        .map_err(|_| Error::InvalidConfig("joint has no positive mass".into()))?;
    let (ny, nx) = (j.y_size(), j.x_size());
    let mut gamma_total = 0.0;
    let mut eta_total = 0.0;
    for (map, len) in c.segments() {
        let m = map.num_clusters() as usize;
        let mut counts = vec![0.0; ny * m];
        for _ in 0..*len {
            let flat = cell.sample(&mut rng);
            let (y, x) = (flat / nx, flat % nx);
            counts[y * m + map.cluster_of(x) as usize] += 1.0;
        }
        let total = *len as f64;
        let freq: Vec<f64> = counts.into_iter().map(|v| v / total).collect();
        let mut p_w = vec![0.0; m];
        for y in 0..ny {
            for w in 0..m {
                p_w[w] += freq[y * m + w];
            }
        }
        gamma_total += total * renyi_of(&p_w, order);
        eta_total += total * mutual_information_of(&freq, ny, m);
    }
    let n = c.block_length() as f64;
    Ok((gamma_total / n, eta_total / n))
}
