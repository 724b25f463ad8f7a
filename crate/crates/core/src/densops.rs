//! Dense Hermitian operator algebra over labeled tensor factors.
//!
//! Operators carry a [`SubsystemLayout`] naming their tensor factors, which
//! makes partial traces and partial transposes addressable by factor name.
//! [`HermitianOp`] guarantees Hermiticity; [`DensityOperator`] additionally
//! guarantees unit trace and positive semidefiniteness.

use std::ops::Deref;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Maximum allowed deviation from `m == m^dagger`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Maximum allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) floor count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;

/// `x log2 x`, continuously extended by 0 at and below zero.
pub(crate) fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Binary entropy in bits.
pub(crate) fn binary_entropy(q: f64) -> f64 {
    -xlog2(q) - xlog2(1.0 - q)
}

/// Real eigenvalues of a Hermitian operator, sorted descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        *self.values.first().expect("nonempty spectrum")
    }
}

/// Hermitian (not necessarily positive) operator over labeled factors.
#[derive(Debug, Clone)]
pub struct HermitianOp {
    matrix: CMatrix,
    layout: SubsystemLayout,
}

impl HermitianOp {
    pub fn new(matrix: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if layout.dim() != matrix.nrows() {
            return Err(Error::LayoutMismatch {
                product: layout.dim(),
                dim: matrix.nrows(),
            });
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix, layout })
    }

    pub(crate) fn new_unchecked(matrix: CMatrix, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.dim());
        Self { matrix, layout }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Trace over one named factor; remaining factors keep their order.
    pub fn partial_trace(&self, factor: &str) -> Result<HermitianOp> {
        let pos = self.layout.position(factor)?;
        let (l, d, r) = self.layout.split_at(pos);
        let out_dim = l * r;
        let mut out = CMatrix::zeros(out_dim, out_dim);
        for li in 0..l {
            for ri in 0..r {
                let row_out = li * r + ri;
                for lj in 0..l {
                    for rj in 0..r {
                        let col_out = lj * r + rj;
                        let mut acc = C64::new(0.0, 0.0);
                        for k in 0..d {
                            let row = (li * d + k) * r + ri;
                            let col = (lj * d + k) * r + rj;
                            acc += self.matrix[(row, col)];
                        }
                        out[(row_out, col_out)] = acc;
                    }
                }
            }
        }
        Ok(HermitianOp::new_unchecked(out, self.layout.without(pos)))
    }

    /// Transpose the bra/ket indices of one named factor. An involution that
    /// preserves the trace but may break positivity.
    pub fn partial_transpose(&self, factor: &str) -> Result<HermitianOp> {
        let pos = self.layout.position(factor)?;
        let (l, d, r) = self.layout.split_at(pos);
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for li in 0..l {
            for ki in 0..d {
                for ri in 0..r {
                    let row_out = (li * d + ki) * r + ri;
                    for lj in 0..l {
                        for kj in 0..d {
                            for rj in 0..r {
                                let col_out = (lj * d + kj) * r + rj;
                                let row_in = (li * d + kj) * r + ri;
                                let col_in = (lj * d + ki) * r + rj;
                                out[(row_out, col_out)] = self.matrix[(row_in, col_in)];
                            }
                        }
                    }
                }
            }
        }
        Ok(HermitianOp::new_unchecked(out, self.layout.clone()))
    }

    /// Eigenvalues, descending. The input is symmetrized before the dense
    /// solve so accumulated roundoff cannot leak imaginary parts.
    pub fn spectrum(&self) -> Spectrum {
        spectrum_of(&self.matrix)
    }

    /// Nuclear norm: sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        self.spectrum().eigenvalues().iter().map(|l| l.abs()).sum()
    }

    /// Squared Hilbert-Schmidt norm: sum of squared entry magnitudes.
    pub fn hs_norm_sq(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub(crate) fn hermiticity_deviation(matrix: &CMatrix) -> f64 {
    let n = matrix.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
            worst = worst.max(dev);
        }
    }
    worst
}

pub(crate) fn spectrum_of(matrix: &CMatrix) -> Spectrum {
    let n = matrix.nrows();
    if n == 1 {
        return Spectrum {
            values: vec![matrix[(0, 0)].re],
        };
    }
    let sym = (matrix + matrix.adjoint()).scale(0.5);
    let eigen = sym.symmetric_eigenvalues();
    let mut values: Vec<f64> = eigen.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Spectrum { values }
}

/// Dense representation `identity (x) small (x) identity`, with `small`
/// sitting at factor position `pos` of `layout`.
pub(crate) fn embed_at(layout: &SubsystemLayout, pos: usize, small: &CMatrix) -> CMatrix {
    let (l, d, r) = layout.split_at(pos);
    debug_assert_eq!(small.nrows(), d);
    let dim = l * d * r;
    let mut out = CMatrix::zeros(dim, dim);
    for li in 0..l {
        for a in 0..d {
            for b in 0..d {
                let v = small[(a, b)];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                for ri in 0..r {
                    out[((li * d + a) * r + ri, (li * d + b) * r + ri)] = v;
                }
            }
        }
    }
    out
}

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: HermitianOp,
}

impl Deref for DensityOperator {
    type Target = HermitianOp;

    fn deref(&self) -> &HermitianOp {
        &self.op
    }
}

impl DensityOperator {
    pub fn new(matrix: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        Self::with_trace_slack(matrix, layout, 0.0)
    }

    /// Like [`DensityOperator::new`] but allowing the trace to fall short of
    /// 1 by up to `slack` (on top of the usual tolerance). Truncated Fock
    /// expansions carry their certified tail mass here.
    pub fn with_trace_slack(matrix: CMatrix, layout: SubsystemLayout, slack: f64) -> Result<Self> {
        let op = HermitianOp::new(matrix, layout)?;
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOL + slack {
            return Err(Error::NonUnitTrace(trace, TRACE_TOL + slack));
        }
        let min = op.spectrum().min();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { op })
    }

    /// For operators whose invariants hold by construction (partial traces,
    /// dephasings and collapses of already-validated states).
    pub(crate) fn new_unchecked(matrix: CMatrix, layout: SubsystemLayout) -> Self {
        Self {
            op: HermitianOp::new_unchecked(matrix, layout),
        }
    }

    /// Kronecker product; factor lists concatenate left-to-right.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let layout = self.layout().concat(other.layout())?;
        let matrix = self.matrix().kronecker(other.matrix());
        Ok(DensityOperator::new_unchecked(matrix, layout))
    }

    /// Partial trace, staying within density operators.
    pub fn partial_trace(&self, factor: &str) -> Result<DensityOperator> {
        let herm = self.op.partial_trace(factor)?;
        Ok(DensityOperator { op: herm })
    }

    /// Reduction onto a single named factor (trace out everything else).
    pub fn reduce_to(&self, factor: &str) -> Result<DensityOperator> {
        self.layout().position(factor)?;
        let mut state = self.clone();
        let others: Vec<String> = self
            .layout()
            .names()
            .iter()
            .filter(|n| n.as_str() != factor)
            .cloned()
            .collect();
        for name in others {
            state = state.partial_trace(&name)?;
        }
        Ok(state)
    }

    /// Von Neumann entropy in bits. Eigenvalues inside the PSD tolerance
    /// band below zero are clamped to zero before the logs.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let spectrum = self.spectrum();
        if spectrum.min() < -PSD_TOL {
            return Err(Error::NotPositive(spectrum.min()));
        }
        Ok(spectrum
            .eigenvalues()
            .iter()
            .map(|&l| -xlog2(l.max(0.0)))
            .sum())
    }
}

/// Entropy gained by a projective dephasing: `S(dephased) - S(rho)`.
///
/// The caller guarantees that `dephased` is `sum_k P_k rho P_k` for some
/// complete projector family, which makes the result nonnegative up to
/// numerical noise.
pub fn measured_relative_entropy(rho: &DensityOperator, dephased: &DensityOperator) -> Result<f64> {
    Ok(dephased.von_neumann_entropy()? - rho.von_neumann_entropy()?)
}
