//! Constructors for the helicity-entangled density operators under study.
//!
//! Tracing the hidden Rindler wedge out of a helicity-entangled state leaves
//! an operator that is diagonal in the occupation numbers of every
//! accelerated observer: a weighted stack of identical small helicity blocks,
//! one per Fock index. [`BlockedDensity`] stores exactly that structure, so
//! spectra, negativities and entropies can be computed block by block, while
//! [`BlockedDensity::dense_expand`] provides the full dense operator as a
//! cross-check.

use std::collections::BTreeMap;
use std::fmt;

use crate::densops::{C64, CMatrix, DensityOperator, HermitianOp, spectrum_of};
use crate::error::{Error, Result};
use crate::fock::{AccelerationParam, FockWeightSeries, TruncationPolicy};
use crate::layout::SubsystemLayout;

/// Werner mixing weight of the pure entangled projector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingProbability(f64);

impl MixingProbability {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Squared weights of the right/left Unruh mode superposition,
/// `|q_R|^2 + |q_L|^2 = 1` by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhWeights {
    qr_sq: f64,
}

impl UnruhWeights {
    /// The single-mode identification of Minkowski and Rindler modes.
    pub const SINGLE_MODE: UnruhWeights = UnruhWeights { qr_sq: 1.0 };

    pub fn from_qr_sq(qr_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&qr_sq) || !qr_sq.is_finite() {
            return Err(Error::InvalidProbability(qr_sq));
        }
        Ok(Self { qr_sq })
    }

    pub fn qr_sq(self) -> f64 {
        self.qr_sq
    }

    pub fn ql_sq(self) -> f64 {
        1.0 - self.qr_sq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumSign {
    Plus,
    Minus,
}

/// Photon helicity label: momentum direction and spin. An observer's qubit
/// is the spin at fixed momentum sign, spin up indexed before spin down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HelicityLabel {
    pub momentum: MomentumSign,
    pub spin: Spin,
}

impl HelicityLabel {
    pub const ALL: [HelicityLabel; 4] = [
        HelicityLabel { momentum: MomentumSign::Plus, spin: Spin::Up },
        HelicityLabel { momentum: MomentumSign::Plus, spin: Spin::Down },
        HelicityLabel { momentum: MomentumSign::Minus, spin: Spin::Up },
        HelicityLabel { momentum: MomentumSign::Minus, spin: Spin::Down },
    ];

    pub fn qubit_index(&self) -> usize {
        match self.spin {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

impl fmt::Display for HelicityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.momentum {
            MomentumSign::Plus => '+',
            MomentumSign::Minus => '-',
        };
        let s = match self.spin {
            Spin::Up => '\u{2191}',
            Spin::Down => '\u{2193}',
        };
        write!(f, "{m}{s}")
    }
}

/// One Fock-indexed block: a nonnegative weight times a small unit-trace
/// Hermitian matrix on the helicity qubits.
#[derive(Debug, Clone)]
pub struct FockBlock {
    pub weight: f64,
    pub matrix: CMatrix,
}

/// Fock-index-block-diagonal density operator.
#[derive(Debug, Clone)]
pub struct BlockedDensity {
    helicity: SubsystemLayout,
    fock_names: Vec<String>,
    blocks: BTreeMap<Vec<u32>, FockBlock>,
    tail_bound: f64,
}

impl BlockedDensity {
    pub fn helicity_layout(&self) -> &SubsystemLayout {
        &self.helicity
    }

    /// Names of the Fock axes, aligned with the key components. The axis
    /// belonging to helicity party `X` is named `nX`.
    pub fn fock_names(&self) -> &[String] {
        &self.fock_names
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&Vec<u32>, &FockBlock)> {
        self.blocks.iter()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Certified upper bound on the series mass lost to truncation.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .values()
            .map(|b| b.weight * b.matrix.diagonal().iter().map(|z| z.re).sum::<f64>())
            .sum()
    }

    /// Collapses the Fock sums: the weighted average of all blocks,
    /// renormalized by the captured mass. For the states built here every
    /// block shares one helicity matrix, so this is the small effective
    /// operator all correlation measures see.
    pub fn effective_matrix(&self) -> Result<DensityOperator> {
        let mut iter = self.blocks.values();
        let first = iter.next().expect("constructors produce at least one block");
        let shape = first.matrix.nrows();
        if self.blocks.values().any(|b| b.matrix.nrows() != shape) {
            return Err(Error::InhomogeneousBlocks);
        }
        let mut acc = CMatrix::zeros(shape, shape);
        for block in self.blocks.values() {
            acc += block.matrix.scale(block.weight);
        }
        let mass: f64 = acc.diagonal().iter().map(|z| z.re).sum();
        DensityOperator::new(acc.unscale(mass), self.helicity.clone())
    }

    /// Full dense operator over helicity and Fock factors. Each Fock axis
    /// enumerates its populated occupation numbers in increasing order.
    pub fn dense_expand(&self, dim_cap: usize) -> Result<DensityOperator> {
        let axes: Vec<Vec<u32>> = (0..self.fock_names.len())
            .map(|i| {
                let mut values: Vec<u32> = self.blocks.keys().map(|k| k[i]).collect();
                values.sort_unstable();
                values.dedup();
                values
            })
            .collect();
        let hel_dim = self.helicity.dim();
        let fock_dim: usize = axes.iter().map(|a| a.len()).product();
        let dim = hel_dim * fock_dim;
        if dim > dim_cap {
            return Err(Error::DimensionCap { dim, cap: dim_cap });
        }

        let fock_layout = SubsystemLayout::new(
            self.fock_names
                .iter()
                .zip(&axes)
                .map(|(name, axis)| (name.clone(), axis.len())),
        )?;
        let layout = self.helicity.concat(&fock_layout)?;

        let mut matrix = CMatrix::zeros(dim, dim);
        for (key, block) in &self.blocks {
            let mut flat = 0usize;
            for (i, axis) in axes.iter().enumerate() {
                let rank = axis.binary_search(&key[i]).expect("key value indexed");
                flat = flat * axis.len() + rank;
            }
            for h in 0..hel_dim {
                for h2 in 0..hel_dim {
                    let v = block.matrix[(h, h2)] * C64::new(block.weight, 0.0);
                    if v != C64::new(0.0, 0.0) {
                        matrix[(h * fock_dim + flat, h2 * fock_dim + flat)] = v;
                    }
                }
            }
        }
        DensityOperator::with_trace_slack(matrix, layout, self.tail_bound)
    }

    /// Traces out one helicity party together with its Fock axis, merging
    /// blocks that collapse onto the same remaining key.
    pub fn partial_trace_party(&self, party: &str) -> Result<BlockedDensity> {
        self.helicity.position(party)?;
        let axis_name = format!("n{party}");
        let axis = self.fock_names.iter().position(|n| n == &axis_name);

        let mut fock_names = self.fock_names.clone();
        if let Some(i) = axis {
            fock_names.remove(i);
        }

        let mut merged: BTreeMap<Vec<u32>, FockBlock> = BTreeMap::new();
        let mut reduced_layout = None;
        for (key, block) in &self.blocks {
            let herm = HermitianOp::new_unchecked(block.matrix.clone(), self.helicity.clone());
            let traced = herm.partial_trace(party)?;
            reduced_layout.get_or_insert_with(|| traced.layout().clone());
            let mut new_key = key.clone();
            if let Some(i) = axis {
                new_key.remove(i);
            }
            merged
                .entry(new_key)
                .and_modify(|existing| {
                    let total = existing.weight + block.weight;
                    let mix = existing.matrix.scale(existing.weight / total)
                        + traced.matrix().scale(block.weight / total);
                    existing.matrix = mix;
                    existing.weight = total;
                })
                .or_insert_with(|| FockBlock {
                    weight: block.weight,
                    matrix: traced.matrix().clone(),
                });
        }

        Ok(BlockedDensity {
            helicity: reduced_layout.expect("at least one block"),
            fock_names,
            blocks: merged,
            tail_bound: self.tail_bound,
        })
    }

    /// Eigenvalue multiset of the whole operator, descending: the union over
    /// blocks of the weight-scaled block spectra.
    pub fn spectrum_multiset(&self) -> Vec<f64> {
        let mut values = Vec::new();
        for block in self.blocks.values() {
            for &l in spectrum_of(&block.matrix).eigenvalues() {
                values.push(block.weight * l);
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }

    /// Von Neumann entropy in bits, computed blockwise.
    pub fn von_neumann_entropy(&self) -> f64 {
        -self
            .spectrum_multiset()
            .iter()
            .map(|&l| crate::densops::xlog2(l.max(0.0)))
            .sum::<f64>()
    }

    /// Display labels for the helicity product basis: party `A` moves with
    /// positive momentum, accelerated parties with negative momentum.
    pub fn helicity_basis_labels(&self) -> Vec<String> {
        let parties = self.helicity.names();
        let mut labels = vec![String::new()];
        for party in parties {
            let momentum = if party == "A" { '+' } else { '-' };
            let mut next = Vec::with_capacity(labels.len() * 2);
            for prefix in &labels {
                for spin in ['\u{2191}', '\u{2193}'] {
                    let sep = if prefix.is_empty() { "" } else { "," };
                    next.push(format!("{prefix}{sep}{party}{momentum}{spin}"));
                }
            }
            labels = next;
        }
        labels
    }
}

/// X-shaped two-qubit helicity block of the mixed bipartite state: diagonal
/// `((1-p)/4, (1+p)/4, (1+p)/4, (1-p)/4)` with coupling `p/2` between the
/// opposite-spin states.
pub fn werner_two_qubit(p: f64) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    let lo = (1.0 - p) / 4.0;
    let hi = (1.0 + p) / 4.0;
    m[(0, 0)] = C64::new(lo, 0.0);
    m[(1, 1)] = C64::new(hi, 0.0);
    m[(2, 2)] = C64::new(hi, 0.0);
    m[(3, 3)] = C64::new(lo, 0.0);
    m[(1, 2)] = C64::new(p / 2.0, 0.0);
    m[(2, 1)] = C64::new(p / 2.0, 0.0);
    m
}

/// Three-qubit helicity block: `(1+3p)/8` on the two entangled basis states
/// (up-down-down and down-up-up), coupling `p/2` between them, `(1-p)/8`
/// elsewhere on the diagonal.
pub fn werner_three_qubit(p: f64) -> CMatrix {
    let mut m = CMatrix::zeros(8, 8);
    let lo = (1.0 - p) / 8.0;
    let hi = (1.0 + 3.0 * p) / 8.0;
    for i in 0..8 {
        m[(i, i)] = C64::new(lo, 0.0);
    }
    m[(3, 3)] = C64::new(hi, 0.0); // up, down, down
    m[(4, 4)] = C64::new(hi, 0.0); // down, up, up
    m[(3, 4)] = C64::new(p / 2.0, 0.0);
    m[(4, 3)] = C64::new(p / 2.0, 0.0);
    m
}

/// Mixed bipartite helicity state between an inertial observer `A` and an
/// accelerated observer `B`, traced over the hidden wedge: weight `w_n` at
/// `B`-occupation `n + 1`, identical X-shaped helicity block everywhere.
pub fn bipartite_werner(
    omega: AccelerationParam,
    p: MixingProbability,
    policy: &TruncationPolicy,
) -> Result<BlockedDensity> {
    let series = FockWeightSeries::build(omega, policy)?;
    let matrix = werner_two_qubit(p.value());
    let mut blocks = BTreeMap::new();
    for (n, &w) in series.weights().iter().enumerate() {
        blocks.insert(
            vec![(n + 1) as u32],
            FockBlock {
                weight: w,
                matrix: matrix.clone(),
            },
        );
    }
    Ok(BlockedDensity {
        helicity: SubsystemLayout::new([("A", 2), ("B", 2)])?,
        fock_names: vec!["nB".to_string()],
        blocks,
        tail_bound: series.tail_bound(),
    })
}

/// Mixed tripartite helicity state: inertial `A`, accelerated `B` and `C`
/// with independent accelerations. Blocks are indexed by the pair of
/// occupation numbers with product weights.
pub fn tripartite_werner(
    omega_b: AccelerationParam,
    omega_c: AccelerationParam,
    p: MixingProbability,
    policy: &TruncationPolicy,
) -> Result<BlockedDensity> {
    let series_b = FockWeightSeries::build(omega_b, policy)?;
    let series_c = FockWeightSeries::build(omega_c, policy)?;
    let matrix = werner_three_qubit(p.value());
    let mut blocks = BTreeMap::new();
    for (n, &wb) in series_b.weights().iter().enumerate() {
        for (m, &wc) in series_c.weights().iter().enumerate() {
            blocks.insert(
                vec![(n + 1) as u32, (m + 1) as u32],
                FockBlock {
                    weight: wb * wc,
                    matrix: matrix.clone(),
                },
            );
        }
    }
    let tb = series_b.tail_bound();
    let tc = series_c.tail_bound();
    Ok(BlockedDensity {
        helicity: SubsystemLayout::new([("A", 2), ("B", 2), ("C", 2)])?,
        fock_names: vec!["nB".to_string(), "nC".to_string()],
        blocks,
        tail_bound: tb + tc - tb * tc,
    })
}

/// Beyond-single-mode bipartite state: the accelerated observer couples to a
/// right/left Unruh superposition, putting a `|q_L|^2`-weighted block at
/// occupation `n` and a `|q_R|^2`-weighted block at `n + 1` for each series
/// index. Coinciding occupation numbers merge. No cross coherences are kept;
/// see [`unruh_cross_term_gap`] for the diagnostic that quantifies them.
pub fn unruh_bipartite(
    omega: AccelerationParam,
    unruh: UnruhWeights,
    p: MixingProbability,
    policy: &TruncationPolicy,
) -> Result<BlockedDensity> {
    let series = FockWeightSeries::build(omega, policy)?;
    let matrix = werner_two_qubit(p.value());
    let mut blocks: BTreeMap<Vec<u32>, FockBlock> = BTreeMap::new();
    let mut add = |occupation: u32, weight: f64| {
        if weight == 0.0 {
            return;
        }
        blocks
            .entry(vec![occupation])
            .and_modify(|b| b.weight += weight)
            .or_insert_with(|| FockBlock {
                weight,
                matrix: matrix.clone(),
            });
    };
    for (n, &w) in series.weights().iter().enumerate() {
        add(n as u32, w * unruh.ql_sq());
        add((n + 1) as u32, w * unruh.qr_sq());
    }
    Ok(BlockedDensity {
        helicity: SubsystemLayout::new([("A", 2), ("B", 2)])?,
        fock_names: vec!["nB".to_string()],
        blocks,
        tail_bound: series.tail_bound(),
    })
}

/// Literal two-wedge construction of the beyond-single-mode state at a
/// pinned series cutoff: builds the pure state over (A, B-helicity, wedge-I
/// occupation, wedge-II occupation), applies the mixing, and traces the
/// hidden wedge without discarding anything. The result keeps the
/// coherences between wedge-I occupations `n` and `n + 2` that
/// [`unruh_bipartite`] drops.
pub fn unruh_bipartite_exact_trace(
    omega: AccelerationParam,
    unruh: UnruhWeights,
    p: MixingProbability,
    cutoff: usize,
) -> Result<DensityOperator> {
    let series = FockWeightSeries::with_cutoff(omega, cutoff);
    let ql = unruh.ql_sq().sqrt();
    let qr = unruh.qr_sq().sqrt();
    let k = cutoff + 2;

    let layout = SubsystemLayout::new([("A", 2), ("B", 2), ("nB", k), ("w2", k)])?;
    let dim = layout.dim();
    // amplitude vector of |A-spin a> (x) |B-one-particle, spin b>
    let dressed = |a: usize, b: usize| -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for (n, &w) in series.weights().iter().enumerate() {
            let amp = w.sqrt();
            // left family: wedge-I occupation n, hidden wedge n + 1
            let idx_l = ((a * 2 + b) * k + n) * k + (n + 1);
            v[idx_l] += C64::new(ql * amp, 0.0);
            // right family: wedge-I occupation n + 1, hidden wedge n
            let idx_r = ((a * 2 + b) * k + (n + 1)) * k + n;
            v[idx_r] += C64::new(qr * amp, 0.0);
        }
        v
    };

    let mut matrix = CMatrix::zeros(dim, dim);
    let mut accumulate = |bra: &[C64], ket: &[C64], scale: f64| {
        for (i, &vi) in ket.iter().enumerate() {
            if vi == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &vj) in bra.iter().enumerate() {
                if vj == C64::new(0.0, 0.0) {
                    continue;
                }
                matrix[(i, j)] += vi * vj.conj() * C64::new(scale, 0.0);
            }
        }
    };

    // identity part of the mixing: equal weights on the four dressed
    // helicity basis states
    let pv = p.value();
    for a in 0..2 {
        for b in 0..2 {
            let v = dressed(a, b);
            accumulate(&v, &v, (1.0 - pv) / 4.0);
        }
    }
    // entangled projector (|up,down> + |down,up>) / sqrt(2)
    let up_down = dressed(0, 1);
    let down_up = dressed(1, 0);
    let psi: Vec<C64> = up_down
        .iter()
        .zip(&down_up)
        .map(|(x, y)| (x + y) * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0))
        .collect();
    accumulate(&psi, &psi, pv);

    let full = HermitianOp::new_unchecked(matrix, layout);
    let traced = full.partial_trace("w2")?;
    DensityOperator::with_trace_slack(
        traced.matrix().clone(),
        traced.layout().clone(),
        series.tail_bound(),
    )
}

/// Hilbert-Schmidt norm of the wedge-I Fock coherences that the printed
/// block form of the beyond-single-mode state omits.
pub fn unruh_cross_term_gap(
    omega: AccelerationParam,
    unruh: UnruhWeights,
    p: MixingProbability,
    cutoff: usize,
) -> Result<f64> {
    let exact = unruh_bipartite_exact_trace(omega, unruh, p, cutoff)?;
    let pinched = pinch_factor(&exact, "nB")?;
    let diff = exact.matrix() - &pinched;
    Ok(diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// Zeroes every entry whose bra and ket indices differ on `factor`.
pub(crate) fn pinch_factor(op: &DensityOperator, factor: &str) -> Result<CMatrix> {
    let pos = op.layout().position(factor)?;
    let (l, d, r) = op.layout().split_at(pos);
    let mut out = CMatrix::zeros(op.dim(), op.dim());
    for li in 0..l {
        for k in 0..d {
            for ri in 0..r {
                let row = (li * d + k) * r + ri;
                for lj in 0..l {
                    for rj in 0..r {
                        let col = (lj * d + k) * r + rj;
                        out[(row, col)] = op.matrix()[(row, col)];
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const OMEGAS: [f64; 6] = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0];

    fn omega(v: f64) -> AccelerationParam {
        AccelerationParam::new(v).unwrap()
    }

    fn prob(p: f64) -> MixingProbability {
        MixingProbability::new(p).unwrap()
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn bipartite_effective_matrix_is_the_x_block() {
        let p = 0.5;
        let state = bipartite_werner(omega(0.5), prob(p), &policy()).unwrap();
        let eff = state.effective_matrix().unwrap();
        let expected = werner_two_qubit(p);
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    (eff.matrix()[(i, j)] - expected[(i, j)]).norm() < 1e-12,
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn effective_matrix_independent_of_acceleration() {
        for p in [0.0, 0.3, 1.0] {
            let reference = bipartite_werner(omega(0.5), prob(p), &policy())
                .unwrap()
                .effective_matrix()
                .unwrap();
            for &om in &OMEGAS {
                let eff = bipartite_werner(omega(om), prob(p), &policy())
                    .unwrap()
                    .effective_matrix()
                    .unwrap();
                let dev = (eff.matrix() - reference.matrix())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-10, "p={p}, omega={om}: dev={dev}");
            }
            // tripartite as well
            let reference = tripartite_werner(omega(0.5), omega(0.7), prob(p), &policy())
                .unwrap()
                .effective_matrix()
                .unwrap();
            for &om in &OMEGAS {
                let eff = tripartite_werner(omega(om), omega(2.0 / om), prob(p), &policy())
                    .unwrap()
                    .effective_matrix()
                    .unwrap();
                let dev = (eff.matrix() - reference.matrix())
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(dev < 1e-10, "p={p}, omega={om}: dev={dev}");
            }
        }
    }

    #[test]
    fn unruh_effective_matrix_independent_of_mode_weights() {
        let p = prob(0.6);
        let reference = unruh_bipartite(omega(0.5), UnruhWeights::SINGLE_MODE, p, &policy())
            .unwrap()
            .effective_matrix()
            .unwrap();
        for qr_sq in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let state = unruh_bipartite(
                omega(0.5),
                UnruhWeights::from_qr_sq(qr_sq).unwrap(),
                p,
                &policy(),
            )
            .unwrap();
            let eff = state.effective_matrix().unwrap();
            let dev = (eff.matrix() - reference.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10, "qr_sq={qr_sq}: dev={dev}");
        }
    }

    #[test]
    fn zero_mixing_gives_maximally_mixed_blocks() {
        let state = bipartite_werner(omega(0.5), prob(0.0), &policy()).unwrap();
        for (_, block) in state.blocks() {
            for i in 0..4 {
                for j in 0..4 {
                    let expected = if i == j { 0.25 } else { 0.0 };
                    assert!((block.matrix[(i, j)].re - expected).abs() < 1e-15);
                    assert_eq!(block.matrix[(i, j)].im, 0.0);
                }
            }
        }
        let eff = state.effective_matrix().unwrap();
        for i in 0..4 {
            assert!((eff.matrix()[(i, i)].re - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn full_mixing_is_the_pure_projector() {
        let eff = bipartite_werner(omega(0.7), prob(1.0), &policy())
            .unwrap()
            .effective_matrix()
            .unwrap();
        // projector onto (|up,down> + |down,up>)/sqrt(2)
        let spec = eff.spectrum();
        assert!((spec.eigenvalues()[0] - 1.0).abs() < 1e-10);
        assert!(spec.eigenvalues()[1].abs() < 1e-10);
        assert!((eff.matrix()[(1, 2)].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn traces_are_unit_up_to_tail() {
        let state = bipartite_werner(omega(0.5), prob(0.5), &policy()).unwrap();
        assert!((state.trace() - 1.0).abs() <= state.tail_bound() + 1e-12);

        let state = tripartite_werner(omega(0.3), omega(0.8), prob(0.4), &policy()).unwrap();
        assert!((state.trace() - 1.0).abs() <= state.tail_bound() + 1e-12);

        let state = unruh_bipartite(
            omega(0.4),
            UnruhWeights::from_qr_sq(0.3).unwrap(),
            prob(0.9),
            &policy(),
        )
        .unwrap();
        assert!((state.trace() - 1.0).abs() <= state.tail_bound() + 1e-12);
    }

    #[test]
    fn tripartite_effective_spectrum() {
        let p = 0.5;
        let eff = tripartite_werner(omega(0.5), omega(0.5), prob(p), &policy())
            .unwrap()
            .effective_matrix()
            .unwrap();
        let spec = eff.spectrum();
        assert!((spec.eigenvalues()[0] - (1.0 + 7.0 * p) / 8.0).abs() < 1e-12);
        for &l in &spec.eigenvalues()[1..] {
            assert!((l - (1.0 - p) / 8.0).abs() < 1e-12);
        }

        let pure = tripartite_werner(omega(0.5), omega(0.5), prob(1.0), &policy())
            .unwrap()
            .effective_matrix()
            .unwrap();
        let spec = pure.spectrum();
        assert!((spec.eigenvalues()[0] - 1.0).abs() < 1e-10);
        assert!(spec.eigenvalues()[1].abs() < 1e-10);
    }

    #[test]
    fn single_mode_unruh_matches_bipartite_block_for_block() {
        let p = prob(0.42);
        let plain = bipartite_werner(omega(0.6), p, &policy()).unwrap();
        let unruh = unruh_bipartite(omega(0.6), UnruhWeights::SINGLE_MODE, p, &policy()).unwrap();
        assert_eq!(plain.block_count(), unruh.block_count());
        for ((ka, ba), (kb, bb)) in plain.blocks().zip(unruh.blocks()) {
            assert_eq!(ka, kb);
            assert_eq!(ba.weight, bb.weight);
            assert_eq!(ba.matrix, bb.matrix);
        }
    }

    #[test]
    fn left_only_unruh_shifts_occupations_but_keeps_spectrum() {
        let p = prob(0.8);
        let right = unruh_bipartite(omega(0.6), UnruhWeights::SINGLE_MODE, p, &policy()).unwrap();
        let left = unruh_bipartite(
            omega(0.6),
            UnruhWeights::from_qr_sq(0.0).unwrap(),
            p,
            &policy(),
        )
        .unwrap();
        let (kr, kl): (Vec<_>, Vec<_>) = (
            right.blocks().map(|(k, _)| k[0]).collect(),
            left.blocks().map(|(k, _)| k[0]).collect(),
        );
        assert_eq!(kr.first(), Some(&1));
        assert_eq!(kl.first(), Some(&0));
        let sr = right.spectrum_multiset();
        let sl = left.spectrum_multiset();
        for (a, b) in sr.iter().zip(&sl) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_expand_dimension_and_spectrum() {
        let state = bipartite_werner(omega(0.5), prob(0.5), &policy()).unwrap();
        let cutoff = state.block_count() - 1;
        let dense = state.dense_expand(4096).unwrap();
        assert_eq!(dense.dim(), 4 * (cutoff + 1));
        assert!(state.dense_expand(7).is_err());

        let blocked_spec = state.spectrum_multiset();
        let dense_spec = dense.spectrum();
        for (a, b) in blocked_spec.iter().zip(dense_spec.eigenvalues()) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((dense.trace() - state.trace()).abs() < 1e-12);
    }

    #[test]
    fn tripartite_pure_reduction_is_diagonal_and_separable() {
        let state = tripartite_werner(omega(0.4), omega(0.9), prob(1.0), &policy()).unwrap();
        let reduced = state.partial_trace_party("C").unwrap();
        assert_eq!(reduced.fock_names(), &["nB".to_string()]);
        let eff = reduced.effective_matrix().unwrap();
        // diagonal (0, 1/2, 1/2, 0): spins anti-align, coherence dies with C
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j && (i == 1 || i == 2) { 0.5 } else { 0.0 };
                assert!(
                    (eff.matrix()[(i, j)] - C64::new(expected, 0.0)).norm() < 1e-12,
                    "entry ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn partial_trace_party_merges_weights() {
        let state = tripartite_werner(omega(0.4), omega(0.9), prob(0.7), &policy()).unwrap();
        let nb_blocks = state
            .blocks()
            .map(|(k, _)| k[0])
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        let reduced = state.partial_trace_party("C").unwrap();
        assert_eq!(reduced.block_count(), nb_blocks);
        assert!((reduced.trace() - state.trace()).abs() < 1e-12);
    }

    #[test]
    fn exact_trace_matches_block_form_at_pure_mode_weights() {
        for qr_sq in [0.0, 1.0] {
            let gap = unruh_cross_term_gap(
                omega(0.5),
                UnruhWeights::from_qr_sq(qr_sq).unwrap(),
                prob(0.7),
                12,
            )
            .unwrap();
            assert!(gap < 1e-13, "qr_sq={qr_sq}: gap={gap}");
        }
    }

    #[test]
    fn exact_trace_reveals_cross_terms_for_mixed_mode_weights() {
        let u = UnruhWeights::from_qr_sq(0.5).unwrap();
        let gap = unruh_cross_term_gap(omega(0.5), u, prob(1.0), 12).unwrap();
        assert!(gap > 1e-3, "expected visible coherences, gap={gap}");

        // the Fock-diagonal part agrees with the printed block form exactly
        let exact = unruh_bipartite_exact_trace(omega(0.5), u, prob(1.0), 12).unwrap();
        let pinched = pinch_factor(&exact, "nB").unwrap();
        // a policy slightly looser than tail(12) pins the block cutoff at 12
        let series = FockWeightSeries::with_cutoff(omega(0.5), 12);
        let pinned = TruncationPolicy::new(series.tail_bound() * 1.0000001, 512).unwrap();
        let blocked = unruh_bipartite(omega(0.5), u, prob(1.0), &pinned).unwrap();
        let dense = blocked.dense_expand(1 << 14).unwrap();
        assert_eq!(dense.dim(), pinched.nrows());
        let dev = (dense.matrix() - &pinched)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "dev={dev}");
    }

    #[test]
    fn basis_labels_follow_party_momenta() {
        let state = bipartite_werner(omega(0.5), prob(0.5), &policy()).unwrap();
        let labels = state.helicity_basis_labels();
        assert_eq!(labels[0], "A+\u{2191},B-\u{2191}");
        assert_eq!(labels[3], "A+\u{2193},B-\u{2193}");
        assert_eq!(labels.len(), 4);
    }
}
