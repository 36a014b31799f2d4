//! Exactly solvable instances: the outer bound `Ω`, functional sources
//! `Y = f(X)`, block-diagonal joints with their canonical relabelings, and the
//! built-in `table1a` demo instance.

use crate::bottleneck::DeterministicMap;
use crate::prob::{shannon_of, Distribution, JointDistribution};
use crate::{Error, Result};

/// The outer bound `Ω(γ) = min(γ, I(Y; X))`: concave, non-decreasing, and an
/// upper bound for every envelope.
pub fn omega(gamma: f64, i_yx: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::NegativeGamma { gamma });
    }
    if !(i_yx >= 0.0) {
        return Err(Error::NegativeGamma { gamma: i_yx });
    }
    Ok(gamma.min(i_yx))
}

/// Joint distribution of `(f(X), X)` for a function `f: X → Y` and a strictly
/// positive source distribution. Satisfies `I(Y; X) = H(Y)`.
pub fn example1_joint(f: &[usize], y_size: usize, p_x: &Distribution) -> Result<JointDistribution> {
    if f.len() != p_x.len() {
        return Err(Error::DimensionMismatch { expected: p_x.len(), actual: f.len() });
    }
    for (index, &mass) in p_x.masses().iter().enumerate() {
        if mass <= 0.0 {
            return Err(Error::ZeroMass { index });
        }
    }
    for (x, &y) in f.iter().enumerate() {
        if y >= y_size {
            return Err(Error::ClusterOutOfRange {
                symbol: x,
                cluster: y as u32,
                m: y_size as u32,
            });
        }
    }
    let nx = f.len();
    let mut data = vec![0.0; y_size * nx];
    for (x, &y) in f.iter().enumerate() {
        data[y * nx + x] = p_x.masses()[x];
    }
    Ok(JointDistribution::from_normalized(data, y_size, nx))
}

/// A block-diagonal joint: `K` disjoint rectangles `Y_k × X_k` along the
/// diagonal, each filled with a constant mass `p_k`, zero elsewhere.
///
/// `K` is automatically the maximal block count: merging two rectangles would
/// pull zero cells into a block, breaking the constant-mass diagonal form.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalSpec {
    x_sizes: Vec<usize>,
    y_sizes: Vec<usize>,
    masses: Vec<f64>,
}

impl BlockDiagonalSpec {
    pub fn new(x_sizes: Vec<usize>, y_sizes: Vec<usize>, masses: Vec<f64>) -> Result<Self> {
        let k = x_sizes.len();
        if k == 0 {
            return Err(Error::InvalidBlockSpec("need at least one block".into()));
        }
        if y_sizes.len() != k || masses.len() != k {
            return Err(Error::InvalidBlockSpec(format!(
                "got {} x-sizes, {} y-sizes, {} masses; all three must agree",
                k,
                y_sizes.len(),
                masses.len()
            )));
        }
        for i in 0..k {
            if x_sizes[i] == 0 || y_sizes[i] == 0 {
                return Err(Error::InvalidBlockSpec(format!("block {i} has an empty side")));
            }
            if !(masses[i] > 0.0) {
                return Err(Error::InvalidBlockSpec(format!(
                    "block {i} has non-positive mass {}",
                    masses[i]
                )));
            }
        }
        let total: f64 = (0..k).map(|i| (x_sizes[i] * y_sizes[i]) as f64 * masses[i]).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidBlockSpec(format!(
                "cell masses sum to {total:.15}, expected 1"
            )));
        }
        Ok(Self { x_sizes, y_sizes, masses })
    }

    pub fn block_count(&self) -> usize {
        self.x_sizes.len()
    }

    pub fn x_size(&self) -> usize {
        self.x_sizes.iter().sum()
    }

    pub fn y_size(&self) -> usize {
        self.y_sizes.iter().sum()
    }

    /// Block weights `s_k = |X_k| · |Y_k| · p_k`.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.block_count())
            .map(|k| (self.x_sizes[k] * self.y_sizes[k]) as f64 * self.masses[k])
            .collect()
    }

    /// Closed form `I(Y; X) = −Σ_k s_k log₂ s_k`.
    pub fn mutual_information(&self) -> f64 {
        shannon_of(&self.weights())
    }
}

/// The block labelings `f1: X → {1..K}`, `f2: Y → {1..K}` (stored 0-based):
/// strictly positive pushforwards, and `f1(x) = f2(y)` wherever the joint is
/// positive.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalLabels {
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
}

/// Materializes a block-diagonal spec into its joint and canonical labels.
pub fn example2_joint(spec: &BlockDiagonalSpec) -> (JointDistribution, CanonicalLabels) {
    let (ny, nx) = (spec.y_size(), spec.x_size());
    let mut data = vec![0.0; ny * nx];
    let mut f1 = Vec::with_capacity(nx);
    let mut f2 = Vec::with_capacity(ny);
    let (mut y0, mut x0) = (0, 0);
    for k in 0..spec.block_count() {
        for y in y0..y0 + spec.y_sizes[k] {
            for x in x0..x0 + spec.x_sizes[k] {
                data[y * nx + x] = spec.masses[k];
            }
        }
        f1.extend(std::iter::repeat(k).take(spec.x_sizes[k]));
        f2.extend(std::iter::repeat(k).take(spec.y_sizes[k]));
        y0 += spec.y_sizes[k];
        x0 += spec.x_sizes[k];
    }
    (JointDistribution::from_normalized(data, ny, nx), CanonicalLabels { f1, f2 })
}

/// The block-respecting map `g = f1` into `M ≥ K` clusters. At `α = 1` its
/// induced point satisfies `H(W) = I(Y; W) = I(Y; X)`.
pub fn canonical_map(labels: &CanonicalLabels, m: u32) -> Result<DeterministicMap> {
    let k = labels.f1.iter().copied().max().map_or(0, |v| v + 1);
    if (m as usize) < k {
        return Err(Error::TooFewClusters { m, required: k });
    }
    DeterministicMap::new(labels.f1.iter().map(|&b| b as u32).collect(), m)
}

/// The demo spec: three blocks of sizes 1×1, 2×2, 1×2 with cell masses
/// 1/4, 1/8, 1/8, giving block weights `s = (1/4, 1/2, 1/4)`.
pub fn table1a_spec() -> BlockDiagonalSpec {
    BlockDiagonalSpec::new(vec![1, 2, 2], vec![1, 2, 1], vec![0.25, 0.125, 0.125])
        .expect("the built-in spec is valid")
}

/// The built-in 4×5 demo joint (`H(X) = 2.25`, `I(Y; X) = 1.5` bits) and its
/// canonical labels.
pub fn table1a() -> (JointDistribution, CanonicalLabels) {
    example2_joint(&table1a_spec())
}
