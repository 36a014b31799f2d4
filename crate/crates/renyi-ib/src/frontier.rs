//! Exact ground truth for the trade-off: enumerate every deterministic map,
//! evaluate its `(H_α(W), I(Y; W))` pair, and build the upper concave envelope
//! with a witness map retained at each vertex.

use crate::bottleneck::{induce_map, DeterministicMap};
use crate::prob::{JointDistribution, RenyiOrder};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Hard cap on the number of maps a single enumeration may visit.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Tolerance under which two trade-off points are collapsed into one.
const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// The index space of all `M^|X|` deterministic maps.
#[derive(Debug, Clone)]
pub struct MapEnumeration {
    x_size: usize,
    m: u32,
    count: u64,
}

impl MapEnumeration {
    /// Fails with [`Error::Infeasible`] when `M^|X|` exceeds [`ENUMERATION_CAP`].
    pub fn new(x_size: usize, m: u32) -> Result<Self> {
        if x_size == 0 || m == 0 {
            return Err(Error::BadJointShape);
        }
        let mut count: u64 = 1;
        for _ in 0..x_size {
            count = count.saturating_mul(m as u64);
            if count > ENUMERATION_CAP {
                return Err(Error::Infeasible {
                    count: (m as f64).powi(x_size as i32),
                    cap: ENUMERATION_CAP,
                });
            }
        }
        Ok(Self { x_size, m, count })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Decodes index `i ∈ [0, count)` into its base-`M` digit vector; symbol 0
    /// is the least significant digit.
    pub fn get(&self, index: u64) -> DeterministicMap {
        debug_assert!(index < self.count);
        let mut assignment = Vec::with_capacity(self.x_size);
        let mut rest = index;
        for _ in 0..self.x_size {
            assignment.push((rest % self.m as u64) as u32);
            rest /= self.m as u64;
        }
        DeterministicMap::new(assignment, self.m).expect("digits are in range by construction")
    }

    pub fn iter(&self) -> impl Iterator<Item = DeterministicMap> + '_ {
        (0..self.count).map(move |i| self.get(i))
    }
}

/// Streams all `M^|X|` deterministic maps, each exactly once.
pub fn enumerate_deterministic(
    x_size: usize,
    m: u32,
) -> Result<impl Iterator<Item = DeterministicMap>> {
    let e = MapEnumeration::new(x_size, m)?;
    Ok((0..e.count()).map(move |i| e.get(i)))
}

/// One achievable trade-off point together with a map that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffPoint {
    /// `H_α(W)` in bits.
    pub gamma: f64,
    /// `I(Y; W)` in bits.
    pub eta: f64,
    pub witness: DeterministicMap,
}

fn point_of(j: &JointDistribution, g: DeterministicMap, order: RenyiOrder) -> TradeoffPoint {
    let s = induce_map(j, &g, order).expect("enumerated maps match the joint by construction");
    TradeoffPoint { gamma: s.renyi_cost, eta: s.relevance, witness: g }
}

/// Evaluates every deterministic map sequentially, in index order.
pub fn brute_force_points_seq(
    j: &JointDistribution,
    order: RenyiOrder,
    m: u32,
) -> Result<Vec<TradeoffPoint>> {
    let e = MapEnumeration::new(j.x_size(), m)?;
    Ok(e.iter().map(|g| point_of(j, g, order)).collect())
}

/// Evaluates every deterministic map, partitioning the index range across the
/// rayon pool when the `parallel` feature is enabled. Output order is index
/// order either way.
pub fn brute_force_points(
    j: &JointDistribution,
    order: RenyiOrder,
    m: u32,
) -> Result<Vec<TradeoffPoint>> {
    #[cfg(feature = "parallel")]
    {
        let e = MapEnumeration::new(j.x_size(), m)?;
        Ok((0..e.count())
            .into_par_iter()
            .map(|i| point_of(j, e.get(i), order))
            .collect())
    }
    #[cfg(not(feature = "parallel"))]
    brute_force_points_seq(j, order, m)
}

/// The upper concave envelope of a set of trade-off points: a piecewise-linear
/// concave non-decreasing function anchored at `(0, 0)`, constant at
/// [`flat_value`](Envelope::flat_value) beyond
/// [`flat_start`](Envelope::flat_start).
#[derive(Debug, Clone)]
pub struct Envelope {
    vertices: Vec<TradeoffPoint>,
}

impl Envelope {
    /// Hull vertices in order of strictly increasing `gamma` and `eta`.
    pub fn vertices(&self) -> &[TradeoffPoint] {
        &self.vertices
    }

    /// The maximal relevance over the point set.
    pub fn flat_value(&self) -> f64 {
        self.vertices.last().expect("envelope is never empty").eta
    }

    /// The smallest cost at which the maximal relevance is reached.
    pub fn flat_start(&self) -> f64 {
        self.vertices.last().expect("envelope is never empty").gamma
    }

    /// Piecewise-linear interpolation between vertices; the flat value beyond
    /// the last vertex. Errors on negative `gamma`.
    pub fn evaluate(&self, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0) {
            return Err(Error::NegativeGamma { gamma });
        }
        let last = self.vertices.last().unwrap();
        if gamma >= last.gamma {
            return Ok(last.eta);
        }
        // binary search for the segment containing gamma
        let mut lo = 0;
        let mut hi = self.vertices.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.vertices[mid].gamma <= gamma {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (a, b) = (&self.vertices[lo], &self.vertices[hi]);
        let t = (gamma - a.gamma) / (b.gamma - a.gamma);
        Ok(a.eta + t * (b.eta - a.eta))
    }
}

/// Free-function form of [`Envelope::evaluate`].
pub fn evaluate_envelope(e: &Envelope, gamma: f64) -> Result<f64> {
    e.evaluate(gamma)
}

/// Builds the upper concave envelope of a point set that contains `(0, 0)`.
///
/// Near-duplicate points (both coordinates within 1e-12) are collapsed first,
/// keeping the lexicographically smallest witness; Pareto-dominated points are
/// dropped; the hull itself uses exact orientation tests on the stored
/// doubles, so exactly collinear points never become vertices.
pub fn upper_concave_envelope(points: &[TradeoffPoint]) -> Result<Envelope> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut sorted: Vec<&TradeoffPoint> = points.iter().collect();
    sorted.sort_by(|a, b| {
        a.gamma
            .total_cmp(&b.gamma)
            .then(a.eta.total_cmp(&b.eta))
            .then_with(|| a.witness.assignment().cmp(b.witness.assignment()))
    });

    // collapse near-duplicates, preferring the lexicographically smallest map
    let mut deduped: Vec<TradeoffPoint> = Vec::new();
    for p in sorted {
        match deduped.last_mut() {
            Some(rep)
                if (p.gamma - rep.gamma).abs() <= DUPLICATE_TOLERANCE
                    && (p.eta - rep.eta).abs() <= DUPLICATE_TOLERANCE =>
            {
                if p.witness.assignment() < rep.witness.assignment() {
                    rep.witness = p.witness.clone();
                }
            }
            _ => deduped.push(p.clone()),
        }
    }

    if !deduped
        .iter()
        .any(|p| p.gamma.abs() <= DUPLICATE_TOLERANCE && p.eta.abs() <= DUPLICATE_TOLERANCE)
    {
        return Err(Error::MissingOrigin);
    }

    // Pareto staircase: gamma ascending, keep strictly rising eta
    deduped.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(b.eta.total_cmp(&a.eta)));
    let mut staircase: Vec<TradeoffPoint> = Vec::new();
    let mut best_eta = f64::NEG_INFINITY;
    for p in deduped {
        if p.eta > best_eta {
            best_eta = p.eta;
            staircase.push(p);
        }
    }

    // upper hull via monotone chain; cross ≥ 0 means the middle point is
    // collinear or below, hence not a vertex
    let mut hull: Vec<TradeoffPoint> = Vec::new();
    for p in staircase {
        while hull.len() >= 2 {
            let o = &hull[hull.len() - 2];
            let a = &hull[hull.len() - 1];
            let cross = (a.gamma - o.gamma) * (p.eta - o.eta) - (a.eta - o.eta) * (p.gamma - o.gamma);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    Ok(Envelope { vertices: hull })
}
