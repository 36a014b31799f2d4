//! The Markov chain `Y - X - W`: channels, deterministic maps, and the
//! quantities they induce (cluster marginal, relevance, Rényi cost).

use crate::prob::{
    mutual_information_of, renyi_of, Distribution, JointDistribution, RenyiOrder,
    NORMALIZATION_TOLERANCE,
};
use crate::{Error, Result};

/// A conditional distribution `P(W | X)`: one row per source symbol, one
/// column per cluster, rows summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    data: Vec<f64>,
    x_size: usize,
    m: usize,
}

impl Channel {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let x_size = rows.len();
        if x_size == 0 || rows[0].is_empty() {
            return Err(Error::BadJointShape);
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::BadJointShape);
        }
        let mut data = Vec::with_capacity(x_size * m);
        for (row, r) in rows.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if !(value >= 0.0) {
                    return Err(Error::NegativeEntry { row, col, value });
                }
            }
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::RowNotNormalized { row, sum });
            }
            data.extend(r.iter().map(|v| v / sum));
        }
        Ok(Self { data, x_size, m })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    /// Number of clusters (columns).
    pub fn num_clusters(&self) -> usize {
        self.m
    }

    pub fn entry(&self, x: usize, w: usize) -> f64 {
        self.data[x * self.m + w]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.data[x * self.m..(x + 1) * self.m]
    }
}

/// A deterministic assignment `g: X → {0, .., M−1}`. These are the extreme
/// points of the channel polytope, and every envelope vertex is attained by
/// one of them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicMap {
    assignment: Vec<u32>,
    m: u32,
}

impl DeterministicMap {
    pub fn new(assignment: Vec<u32>, m: u32) -> Result<Self> {
        if assignment.is_empty() || m == 0 {
            return Err(Error::BadJointShape);
        }
        for (symbol, &cluster) in assignment.iter().enumerate() {
            if cluster >= m {
                return Err(Error::ClusterOutOfRange { symbol, cluster, m });
            }
        }
        Ok(Self { assignment, m })
    }

    /// The map sending every symbol to cluster 0.
    pub fn constant(x_size: usize, m: u32) -> Self {
        Self { assignment: vec![0; x_size], m }
    }

    /// `g(x) = x mod M`; the identity partition when `M ≥ |X|`.
    pub fn identity_like(x_size: usize, m: u32) -> Self {
        Self { assignment: (0..x_size).map(|x| x as u32 % m).collect(), m }
    }

    pub fn x_size(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_clusters(&self) -> u32 {
        self.m
    }

    pub fn cluster_of(&self, x: usize) -> u32 {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// The 0/1 row-stochastic channel realizing this map.
    pub fn to_channel(&self) -> Channel {
        let m = self.m as usize;
        let mut data = vec![0.0; self.assignment.len() * m];
        for (x, &w) in self.assignment.iter().enumerate() {
            data[x * m + w as usize] = 1.0;
        }
        Channel { data, x_size: self.assignment.len(), m }
    }

    /// Serializes the assignment as a comma-free digit string of 1-based
    /// cluster indices, fixed-width per symbol when `M > 9` so the string
    /// stays unambiguous.
    pub fn digits(&self) -> String {
        let width = if self.m > 9 { self.m.to_string().len() } else { 1 };
        let mut s = String::with_capacity(self.assignment.len() * width);
        for &w in &self.assignment {
            s.push_str(&format!("{:0width$}", w + 1, width = width));
        }
        s
    }
}

/// Everything the chain `Y - X - W` induces for a fixed channel: the cluster
/// marginal, the joint over `Y × W`, per-cluster conditionals, and the two
/// trade-off coordinates.
#[derive(Debug, Clone)]
pub struct InducedSystem {
    p_w: Distribution,
    p_yw: JointDistribution,
    p_y_given_w: Vec<Option<Distribution>>,
    /// `I(Y; W)` in bits.
    pub relevance: f64,
    /// `H_α(W)` in bits.
    pub renyi_cost: f64,
    pub order: RenyiOrder,
}

impl InducedSystem {
    pub fn p_w(&self) -> &Distribution {
        &self.p_w
    }

    pub fn p_yw(&self) -> &JointDistribution {
        &self.p_yw
    }

    /// `P(Y | W = w)`, or `None` for a dead cluster (`P_W(w) = 0`).
    pub fn conditional(&self, w: usize) -> Option<&Distribution> {
        self.p_y_given_w[w].as_ref()
    }

    pub fn num_clusters(&self) -> usize {
        self.p_w.len()
    }

    fn from_pyw(pyw: Vec<f64>, ny: usize, m: usize, order: RenyiOrder) -> Self {
        // p_w as the column marginal of p_yw keeps cost and relevance
        // consistent bit-for-bit; see `mutual_information_of`.
        let mut p_w = vec![0.0; m];
        for y in 0..ny {
            for w in 0..m {
                p_w[w] += pyw[y * m + w];
            }
        }
        let relevance = mutual_information_of(&pyw, ny, m);
        let renyi_cost = renyi_of(&p_w, order);
        let p_y_given_w = (0..m)
            .map(|w| {
                if p_w[w] > 0.0 {
                    Some(Distribution::from_normalized(
                        (0..ny).map(|y| pyw[y * m + w] / p_w[w]).collect(),
                    ))
                } else {
                    None
                }
            })
            .collect();
        Self {
            p_w: Distribution::from_normalized(p_w),
            p_yw: JointDistribution::from_normalized(pyw, ny, m),
            p_y_given_w,
            relevance,
            renyi_cost,
            order,
        }
    }
}

/// Pushes a joint through a channel: `P(Y, W) = Σ_x P(Y, x) P(W | x)`.
pub fn induce(j: &JointDistribution, c: &Channel, order: RenyiOrder) -> Result<InducedSystem> {
    if c.x_size() != j.x_size() {
        return Err(Error::DimensionMismatch { expected: j.x_size(), actual: c.x_size() });
    }
    let (ny, nx, m) = (j.y_size(), j.x_size(), c.num_clusters());
    let mut pyw = vec![0.0; ny * m];
    for y in 0..ny {
        for x in 0..nx {
            let jyx = j.entry(y, x);
            for w in 0..m {
                pyw[y * m + w] += jyx * c.entry(x, w);
            }
        }
    }
    Ok(InducedSystem::from_pyw(pyw, ny, m, order))
}

/// Same as [`induce`] for a deterministic map, skipping the channel matrix.
pub fn induce_map(
    j: &JointDistribution,
    g: &DeterministicMap,
    order: RenyiOrder,
) -> Result<InducedSystem> {
    if g.x_size() != j.x_size() {
        return Err(Error::DimensionMismatch { expected: j.x_size(), actual: g.x_size() });
    }
    let (ny, nx, m) = (j.y_size(), j.x_size(), g.num_clusters() as usize);
    let mut pyw = vec![0.0; ny * m];
    for y in 0..ny {
        for x in 0..nx {
            pyw[y * m + g.cluster_of(x) as usize] += j.entry(y, x);
        }
    }
    Ok(InducedSystem::from_pyw(pyw, ny, m, order))
}

/// The support-line objective `β · I(Y; W) − H_α(W)`.
pub fn objective(s: &InducedSystem, beta: f64) -> f64 {
    beta * s.relevance - s.renyi_cost
}
