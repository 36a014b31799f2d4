//! Finite-distribution primitives: validation, entropies, divergences and
//! mutual information, all measured in bits (logarithms base 2).
//!
//! Conventions: `0·log 0 := 0` and `0^α := 0` for `α > 0`. Divergences may be
//! `+∞` (IEEE infinity), which is only ever compared against or selected, never
//! subtracted.

use crate::{Error, Result};

/// Tolerance on the total mass accepted at construction. Inputs within this
/// tolerance of 1 are renormalized to sum to 1 up to machine epsilon.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A probability distribution on a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    masses: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Distribution {
    /// Validates and renormalizes a mass vector.
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in masses.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeMass { index, value });
            }
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        let masses = masses.into_iter().map(|p| p / sum).collect();
        Ok(Self { masses, labels: None })
    }

    /// Uniform distribution on `n` symbols.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Attaches symbol names; the label count must match the alphabet size.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.masses.len() {
            return Err(Error::DimensionMismatch {
                expected: self.masses.len(),
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Wraps masses that are already known to be normalized (marginals of a
    /// validated joint, conditionals of live clusters). Not re-scaled, so sums
    /// agree bit-for-bit with the arithmetic that produced them.
    pub(crate) fn from_normalized(masses: Vec<f64>) -> Self {
        debug_assert!(!masses.is_empty());
        debug_assert!((masses.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        Self { masses, labels: None }
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// A Rényi entropy order `α ∈ (0, 1]`; `α = 1` is the Shannon limit.
///
/// Orders above 1 are rejected: the trade-offs computed by this crate are
/// only meaningful (and only tested) on `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    /// The Shannon case `α = 1`.
    pub const SHANNON: RenyiOrder = RenyiOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder { alpha })
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_shannon(self) -> bool {
        self.0 == 1.0
    }
}

/// A joint distribution over `Y × X`, stored row-major with `Y` indexing rows.
///
/// Every column (source symbol `x`) must carry positive mass, so that the
/// conditionals `P(Y | X = x)` are well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    data: Vec<f64>,
    ny: usize,
    nx: usize,
    y_labels: Option<Vec<String>>,
    x_labels: Option<Vec<String>>,
}

impl JointDistribution {
    /// Validates and renormalizes a matrix given as rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let ny = rows.len();
        if ny == 0 || rows[0].is_empty() {
            return Err(Error::BadJointShape);
        }
        let nx = rows[0].len();
        if rows.iter().any(|r| r.len() != nx) {
            return Err(Error::BadJointShape);
        }
        let mut data = Vec::with_capacity(ny * nx);
        for (row, r) in rows.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if !(value >= 0.0) {
                    return Err(Error::NegativeEntry { row, col, value });
                }
                data.push(value);
            }
        }
        let sum: f64 = data.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::JointNotNormalized { sum });
        }
        for v in &mut data {
            *v /= sum;
        }
        let joint = Self { data, ny, nx, y_labels: None, x_labels: None };
        for col in 0..nx {
            if joint.column_sum(col) <= 0.0 {
                return Err(Error::ZeroColumn { col });
            }
        }
        Ok(joint)
    }

    pub fn with_labels(mut self, y_labels: Vec<String>, x_labels: Vec<String>) -> Result<Self> {
        if y_labels.len() != self.ny {
            return Err(Error::DimensionMismatch { expected: self.ny, actual: y_labels.len() });
        }
        if x_labels.len() != self.nx {
            return Err(Error::DimensionMismatch { expected: self.nx, actual: x_labels.len() });
        }
        self.y_labels = Some(y_labels);
        self.x_labels = Some(x_labels);
        Ok(self)
    }

    /// Builds a joint from already-normalized data without the positive-column
    /// check. Induced joints over `Y × W` legitimately contain zero columns
    /// (dead clusters), which the public constructor rejects for source joints.
    pub(crate) fn from_normalized(data: Vec<f64>, ny: usize, nx: usize) -> Self {
        debug_assert_eq!(data.len(), ny * nx);
        Self { data, ny, nx, y_labels: None, x_labels: None }
    }

    pub fn y_size(&self) -> usize {
        self.ny
    }

    pub fn x_size(&self) -> usize {
        self.nx
    }

    pub fn entry(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.nx + x]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn y_labels(&self) -> Option<&[String]> {
        self.y_labels.as_deref()
    }

    pub fn x_labels(&self) -> Option<&[String]> {
        self.x_labels.as_deref()
    }

    pub(crate) fn column_sum(&self, x: usize) -> f64 {
        let mut s = 0.0;
        for y in 0..self.ny {
            s += self.data[y * self.nx + x];
        }
        s
    }

    /// Marginal over the observed variable `X` (column sums).
    pub fn p_x(&self) -> Distribution {
        Distribution::from_normalized((0..self.nx).map(|x| self.column_sum(x)).collect())
    }

    /// Marginal over the hidden variable `Y` (row sums).
    pub fn p_y(&self) -> Distribution {
        let masses = (0..self.ny)
            .map(|y| self.data[y * self.nx..(y + 1) * self.nx].iter().sum())
            .collect();
        Distribution::from_normalized(masses)
    }

    /// Conditional `P(Y | X = x)`; total mass 1 because columns are positive.
    pub fn y_given_x(&self, x: usize) -> Distribution {
        let px = self.column_sum(x);
        let masses = (0..self.ny).map(|y| self.data[y * self.nx + x] / px).collect();
        Distribution::from_normalized(masses)
    }
}

/// `−Σ p log₂ p` over a raw slice, skipping zero masses. Entropies live in
/// `[0, log₂ |support|]`; rounding noise below zero is clamped away.
pub(crate) fn shannon_of(masses: &[f64]) -> f64 {
    let mut acc = 0.0;
    for &p in masses {
        if p > 0.0 {
            acc += p * p.log2();
        }
    }
    (0.0 - acc).max(0.0)
}

pub(crate) fn renyi_of(masses: &[f64], order: RenyiOrder) -> f64 {
    if order.is_shannon() {
        return shannon_of(masses);
    }
    let alpha = order.alpha();
    let mut sum = 0.0;
    for &p in masses {
        if p > 0.0 {
            sum += p.powf(alpha);
        }
    }
    (sum.log2() / (1.0 - alpha)).max(0.0)
}

/// Mutual information of a matrix: `H(cols) + (H(rows) − H(joint))`.
///
/// The grouping matters: when the matrix has one non-zero per row, the row
/// and joint entropies cancel term by term, so the result equals the column
/// entropy exactly. Envelope construction relies on this to recognize points
/// that sit exactly on a common support line.
pub(crate) fn mutual_information_of(data: &[f64], ny: usize, nx: usize) -> f64 {
    let mut cols = vec![0.0; nx];
    let mut rows = vec![0.0; ny];
    for y in 0..ny {
        for x in 0..nx {
            let v = data[y * nx + x];
            rows[y] += v;
            cols[x] += v;
        }
    }
    let h_rows = shannon_of(&rows);
    let h_cols = shannon_of(&cols);
    let h_joint = shannon_of(data);
    (h_cols + (h_rows - h_joint)).max(0.0)
}

/// Shannon entropy `H(p)` in bits.
pub fn shannon_entropy(p: &Distribution) -> f64 {
    shannon_of(p.masses())
}

/// Rényi entropy `H_α(p)` in bits: `(1/(1−α)) log₂ Σ p^α`, Shannon at `α = 1`.
pub fn renyi_entropy(p: &Distribution, order: RenyiOrder) -> f64 {
    renyi_of(p.masses(), order)
}

/// Kullback–Leibler divergence `D(p ‖ q)` in bits.
///
/// Returns `+∞` when `p` puts mass where `q` does not. Requires matching
/// alphabet sizes.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), actual: q.len() });
    }
    Ok(kl_of(p.masses(), q.masses()))
}

pub(crate) fn kl_of(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            acc += pi * (pi / qi).log2();
        }
    }
    acc
}

/// Mutual information `I(Y; X)` of a joint distribution, in bits.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    mutual_information_of(j.data(), j.y_size(), j.x_size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand::seq::SliceRandom;
    use rand_chacha::ChaCha8Rng;

    fn table1a_px() -> Distribution {
        Distribution::new(vec![0.25, 0.25, 0.25, 0.125, 0.125]).unwrap()
    }

    fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Distribution {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-12).collect();
        let s: f64 = raw.iter().sum();
        Distribution::new(raw.into_iter().map(|v| v / s).collect()).unwrap()
    }

    #[test]
    fn shannon_uniform_and_point_mass() {
        assert_eq!(shannon_entropy(&Distribution::uniform(4).unwrap()), 2.0);
        let point = Distribution::new(vec![1.0, 0.0, 0.0]).unwrap();
        let h = shannon_entropy(&point);
        assert_eq!(h, 0.0);
        assert!(h.is_sign_positive(), "entropy of a point mass must be +0.0");
    }

    #[test]
    fn shannon_table1a_source() {
        assert!((shannon_entropy(&table1a_px()) - 2.25).abs() <= 1e-12);
    }

    #[test]
    fn renyi_uniform_is_log_m_for_all_orders() {
        for &n in &[2usize, 3, 5, 8] {
            let u = Distribution::uniform(n).unwrap();
            for k in 1..=20 {
                let order = RenyiOrder::new(k as f64 / 20.0).unwrap();
                assert!(
                    (renyi_entropy(&u, order) - (n as f64).log2()).abs() <= 1e-12,
                    "uniform {n} at alpha {}",
                    order.alpha()
                );
            }
        }
    }

    #[test]
    fn renyi_point_mass_is_zero() {
        let p = Distribution::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(renyi_entropy(&p, RenyiOrder::new(0.5).unwrap()), 0.0);
    }

    #[test]
    fn renyi_closed_form_value() {
        // H_0.5(1/4, 1/2, 1/4) = 2·log₂(1 + 1/√2)
        let p = Distribution::new(vec![0.25, 0.5, 0.25]).unwrap();
        let expected = 2.0 * (1.0 + 1.0 / 2f64.sqrt()).log2();
        assert!((renyi_entropy(&p, RenyiOrder::new(0.5).unwrap()) - expected).abs() <= 1e-12);
        assert!((expected - 1.5431066063272239).abs() <= 1e-12);
    }

    #[test]
    fn renyi_rejects_orders_outside_unit_interval() {
        assert!(RenyiOrder::new(0.0).is_err());
        assert!(RenyiOrder::new(-0.3).is_err());
        assert!(RenyiOrder::new(1.5).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
        assert!(RenyiOrder::new(1.0).unwrap().is_shannon());
    }

    #[test]
    fn kl_basics() {
        let p = Distribution::new(vec![1.0, 0.0]).unwrap();
        let q = Distribution::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        assert_eq!(kl_divergence(&q, &q).unwrap(), 0.0);
        assert!((kl_divergence(&p, &q).unwrap() - 1.0).abs() <= 1e-12);
        assert_eq!(kl_divergence(&q, &p).unwrap(), f64::INFINITY);
        let r = Distribution::uniform(3).unwrap();
        assert!(matches!(kl_divergence(&p, &r), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn mutual_information_product_identity_and_table1a() {
        // product joint: independent => zero
        let px = [0.3, 0.7];
        let py = [0.2, 0.5, 0.3];
        let rows: Vec<Vec<f64>> =
            py.iter().map(|&a| px.iter().map(|&b| a * b).collect()).collect();
        let j = JointDistribution::from_rows(rows).unwrap();
        assert!(mutual_information(&j).abs() <= 1e-12);

        let eye = JointDistribution::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((mutual_information(&eye) - 1.0).abs() <= 1e-12);

        let t = crate::canonical::table1a().0;
        assert!((mutual_information(&t) - 1.5).abs() <= 1e-12);
    }

    #[test]
    fn shannon_below_renyi_below_log_m_on_random_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=8);
            let p = random_distribution(&mut rng, n);
            let alpha = RenyiOrder::new(rng.gen_range(0.01..1.0)).unwrap();
            let h1 = shannon_entropy(&p);
            let ha = renyi_entropy(&p, alpha);
            assert!(h1 <= ha + 1e-12);
            assert!(ha <= (n as f64).log2() + 1e-12);
        }
    }

    #[test]
    fn renyi_non_increasing_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        let grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        for _ in 0..200 {
            let n = rng.gen_range(2..=6);
            let p = random_distribution(&mut rng, n);
            let values: Vec<f64> = grid
                .iter()
                .map(|&a| renyi_entropy(&p, RenyiOrder::new(a).unwrap()))
                .collect();
            for w in values.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "renyi must be non-increasing in alpha");
            }
        }
    }

    #[test]
    fn renyi_continuous_at_shannon_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let near_one = RenyiOrder::new(1.0 - 1e-4).unwrap();
        for _ in 0..200 {
            let n = rng.gen_range(2..=6);
            let p = random_distribution(&mut rng, n);
            assert!((renyi_entropy(&p, near_one) - shannon_entropy(&p)).abs() <= 1e-3);
        }
    }

    #[test]
    fn kl_nonnegative_and_zero_only_on_support_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..500 {
            let n = rng.gen_range(2..=6);
            let p = random_distribution(&mut rng, n);
            let q = random_distribution(&mut rng, n);
            let d = kl_divergence(&p, &q).unwrap();
            assert!(d >= 0.0);
            if d == 0.0 {
                for (a, b) in p.masses().iter().zip(q.masses()) {
                    if *a > 0.0 {
                        assert!((a - b).abs() <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn mutual_information_invariant_under_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(505);
        for _ in 0..100 {
            let ny = rng.gen_range(2..=4);
            let nx = rng.gen_range(2..=4);
            let raw: Vec<Vec<f64>> = (0..ny)
                .map(|_| (0..nx).map(|_| rng.gen::<f64>() + 1e-3).collect())
                .collect();
            let total: f64 = raw.iter().flatten().sum();
            let rows: Vec<Vec<f64>> =
                raw.iter().map(|r| r.iter().map(|v| v / total).collect()).collect();
            let j = JointDistribution::from_rows(rows.clone()).unwrap();

            let mut rperm: Vec<usize> = (0..ny).collect();
            rperm.shuffle(&mut rng);
            let mut cperm: Vec<usize> = (0..nx).collect();
            cperm.shuffle(&mut rng);
            let permuted: Vec<Vec<f64>> = rperm
                .iter()
                .map(|&y| cperm.iter().map(|&x| rows[y][x]).collect())
                .collect();
            let jp = JointDistribution::from_rows(permuted).unwrap();
            assert!((mutual_information(&j) - mutual_information(&jp)).abs() <= 1e-12);
        }
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(matches!(Distribution::new(vec![]), Err(Error::EmptyDistribution)));
        assert!(matches!(
            Distribution::new(vec![0.5, -0.1, 0.6]),
            Err(Error::NegativeMass { index: 1, .. })
        ));
        assert!(matches!(
            Distribution::new(vec![0.4, 0.4]),
            Err(Error::NotNormalized { .. })
        ));
        // within tolerance: accepted and renormalized
        let p = Distribution::new(vec![0.5 + 4e-10, 0.5]).unwrap();
        assert!((p.masses().iter().sum::<f64>() - 1.0).abs() < 1e-15);

        assert!(matches!(
            JointDistribution::from_rows(vec![vec![0.5, 0.5], vec![0.5]]),
            Err(Error::BadJointShape)
        ));
        assert!(matches!(
            JointDistribution::from_rows(vec![vec![0.5, 0.0], vec![0.5, 0.0]]),
            Err(Error::ZeroColumn { col: 1 })
        ));
        assert!(matches!(
            JointDistribution::from_rows(vec![vec![0.5, -0.2], vec![0.5, 0.2]]),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            JointDistribution::from_rows(vec![vec![0.5, 0.4]]),
            Err(Error::JointNotNormalized { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn simplex_vec(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
            prop::collection::vec(1e-6..1.0f64, 1..=max_len).prop_map(|raw| {
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(|v| v / s).collect()
            })
        }

        fn simplex_pair(len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
            (simplex_vec(len), simplex_vec(len)).prop_filter("equal lengths", |(p, q)| p.len() == q.len())
        }

        proptest! {
            #[test]
            fn entropy_chain_holds(masses in simplex_vec(8), k in 1usize..=20) {
                let p = Distribution::new(masses).unwrap();
                let order = RenyiOrder::new(k as f64 / 20.0).unwrap();
                let h1 = shannon_entropy(&p);
                let ha = renyi_entropy(&p, order);
                prop_assert!(h1 >= 0.0);
                prop_assert!(h1 <= ha + 1e-12);
                prop_assert!(ha <= (p.len() as f64).log2() + 1e-12);
            }

            #[test]
            fn kl_is_nonnegative((p, q) in simplex_pair(6)) {
                let p = Distribution::new(p).unwrap();
                let q = Distribution::new(q).unwrap();
                let d = kl_divergence(&p, &q).unwrap();
                prop_assert!(d >= -1e-12);
            }
        }
    }

    #[test]
    fn marginals_and_conditionals() {
        let t = crate::canonical::table1a().0;
        assert_eq!(t.p_x().masses(), &[0.25, 0.25, 0.25, 0.125, 0.125]);
        assert_eq!(t.p_y().masses(), &[0.25, 0.25, 0.25, 0.25]);
        let c = t.y_given_x(0);
        assert_eq!(c.masses(), &[1.0, 0.0, 0.0, 0.0]);
        let c4 = t.y_given_x(3);
        assert_eq!(c4.masses(), &[0.0, 0.0, 0.0, 1.0]);
    }
}
