//! Quantum discord: closed-form, brute-force, global, and geometric.
//!
//! The brute-force route minimizes the measured conditional entropy over a
//! Bloch-angle grid with local refinement and is the arbiter for every
//! closed form in this module. The closed-form route evaluates the standard
//! candidate minimizers for real symmetric X-shaped states; those candidates
//! are known to be beaten on rare X-states, which is why callers that care
//! cross-check against the grid (see [`unruh_discord`]).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::densops::{
    C64, CMatrix, DensityOperator, HermitianOp, binary_entropy, embed_at, xlog2,
};
use crate::error::{Error, Result};
use crate::fock::{AccelerationParam, TruncationPolicy};
use crate::search::{BoxDim, SearchResult, minimize_box};
use crate::states::{MixingProbability, UnruhWeights, unruh_bipartite};

/// Rank-1 projective measurement direction on a qubit, parametrized by the
/// Bloch polar angle `theta in [0, pi)` and azimuth `phi in [0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// The computational (z-axis) measurement.
    pub const Z: MeasurementBasis = MeasurementBasis {
        theta: 0.0,
        phi: 0.0,
    };

    /// Orthonormal, complete projector pair
    /// `|+> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>` and its complement.
    pub fn projectors(&self) -> [CMatrix; 2] {
        let c = (self.theta / 2.0).cos();
        let s = (self.theta / 2.0).sin();
        let phase = C64::new(self.phi.cos(), self.phi.sin());
        let mut plus = CMatrix::zeros(2, 2);
        plus[(0, 0)] = C64::new(c * c, 0.0);
        plus[(0, 1)] = phase.conj() * C64::new(c * s, 0.0);
        plus[(1, 0)] = phase * C64::new(c * s, 0.0);
        plus[(1, 1)] = C64::new(s * s, 0.0);
        let mut minus = CMatrix::zeros(2, 2);
        minus[(0, 0)] = C64::new(s * s, 0.0);
        minus[(0, 1)] = -phase.conj() * C64::new(c * s, 0.0);
        minus[(1, 0)] = -phase * C64::new(c * s, 0.0);
        minus[(1, 1)] = C64::new(c * c, 0.0);
        [plus, minus]
    }

    /// Unit Bloch vector of the `+` projector.
    pub fn bloch_axis(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

/// Measurement-minimization grid: a dense first pass over the angle box,
/// then `refinement_rounds` passes over windows shrunk by `shrink_factor`
/// around the incumbent.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub theta_steps: usize,
    pub phi_steps: usize,
    pub refinement_rounds: usize,
    pub shrink_factor: f64,
}

impl GridSpec {
    pub fn new(
        theta_steps: usize,
        phi_steps: usize,
        refinement_rounds: usize,
        shrink_factor: f64,
    ) -> Result<Self> {
        if theta_steps < 2 || phi_steps < 1 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 theta and 1 phi steps, got {theta_steps}x{phi_steps}"
            )));
        }
        if !(shrink_factor > 0.0 && shrink_factor < 1.0) {
            return Err(Error::InvalidGrid(format!(
                "shrink factor must lie in (0, 1), got {shrink_factor}"
            )));
        }
        Ok(Self {
            theta_steps,
            phi_steps,
            refinement_rounds,
            shrink_factor,
        })
    }

    fn theta_dim(&self) -> BoxDim {
        BoxDim::closed(0.0, PI, self.theta_steps)
    }

    fn phi_dim(&self) -> BoxDim {
        BoxDim::periodic(0.0, TAU, self.phi_steps)
    }

    /// First-pass spacing of the theta grid.
    pub fn theta_step_size(&self) -> f64 {
        PI / (self.theta_steps - 1) as f64
    }
}

impl Default for GridSpec {
    /// 61x61 angles with three 4x shrinking rounds resolves the smooth
    /// conditional-entropy landscapes used here to well below 1e-4.
    fn default() -> Self {
        Self {
            theta_steps: 61,
            phi_steps: 61,
            refinement_rounds: 3,
            shrink_factor: 0.25,
        }
    }
}

/// One outcome of a projective measurement: its probability and the
/// collapsed state, or `None` when the branch has no weight to normalize.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub probability: f64,
    pub state: Option<DensityOperator>,
}

const BRANCH_FLOOR: f64 = 1e-14;

fn require_qubit(rho: &DensityOperator, factor: &str) -> Result<usize> {
    let pos = rho.layout().position(factor)?;
    let dim = rho.layout().dims()[pos];
    if dim != 2 {
        return Err(Error::NotAQubit {
            factor: factor.to_string(),
            dim,
        });
    }
    Ok(pos)
}

/// Projective measurement of one qubit factor: probabilities
/// `p_i = tr(P_i rho P_i)` and collapsed states `P_i rho P_i / p_i`.
pub fn measure_and_collapse(
    rho: &DensityOperator,
    factor: &str,
    basis: &MeasurementBasis,
) -> Result<[MeasurementOutcome; 2]> {
    let pos = require_qubit(rho, factor)?;
    let outcomes = basis.projectors().map(|proj| {
        let full = embed_at(rho.layout(), pos, &proj);
        let sandwiched = &full * rho.matrix() * &full;
        let probability: f64 = sandwiched.diagonal().iter().map(|z| z.re).sum();
        let state = (probability >= BRANCH_FLOOR).then(|| {
            DensityOperator::new_unchecked(
                sandwiched.unscale(probability),
                rho.layout().clone(),
            )
        });
        MeasurementOutcome { probability, state }
    });
    Ok(outcomes)
}

/// Measured conditional entropy `sum_i p_i S(rho | outcome i)`. Branches
/// below the probability floor contribute zero.
pub fn conditional_entropy(
    rho: &DensityOperator,
    factor: &str,
    basis: &MeasurementBasis,
) -> Result<f64> {
    let outcomes = measure_and_collapse(rho, factor, basis)?;
    let mut total = 0.0;
    for outcome in &outcomes {
        if let Some(state) = &outcome.state {
            total += outcome.probability * state.von_neumann_entropy()?;
        }
    }
    Ok(total)
}

/// Dephasing of one qubit factor in the given basis,
/// `sum_i P_i rho P_i`.
pub fn dephase(rho: &DensityOperator, factor: &str, basis: &MeasurementBasis) -> Result<DensityOperator> {
    let pos = require_qubit(rho, factor)?;
    let mut acc = CMatrix::zeros(rho.dim(), rho.dim());
    for proj in basis.projectors() {
        let full = embed_at(rho.layout(), pos, &proj);
        acc += &full * rho.matrix() * &full;
    }
    Ok(DensityOperator::new_unchecked(acc, rho.layout().clone()))
}

/// Dephasing under product projectors, one basis per listed factor.
/// Single-factor dephasings commute, so the product pinching is their
/// composition.
pub fn dephase_product(
    rho: &DensityOperator,
    factors: &[(&str, MeasurementBasis)],
) -> Result<DensityOperator> {
    let mut state = rho.clone();
    for (factor, basis) in factors {
        state = dephase(&state, factor, basis)?;
    }
    Ok(state)
}

/// Which route produced a discord value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscordMethod {
    ClosedForm,
    BruteForce,
}

/// Named correlation measures at one parameter point.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub discord: f64,
    pub geometric_2norm: Option<f64>,
    pub geometric_1norm: Option<f64>,
    pub minimizing_basis: MeasurementBasis,
    pub method: DiscordMethod,
}

/// Discord by direct minimization of the measured conditional entropy over
/// the angle grid: `S(measured) - S(all) + min_basis S(rest | basis)`.
pub fn discord_bruteforce(
    rho: &DensityOperator,
    measured_factor: &str,
    grid: &GridSpec,
) -> Result<CorrelationReport> {
    require_qubit(rho, measured_factor)?;
    let s_all = rho.von_neumann_entropy()?;
    let s_measured = rho.reduce_to(measured_factor)?.von_neumann_entropy()?;
    let s_rest = rho.partial_trace(measured_factor)?.von_neumann_entropy()?;

    let dims = [grid.theta_dim(), grid.phi_dim()];
    let objective = |x: &[f64]| {
        conditional_entropy(rho, measured_factor, &MeasurementBasis::new(x[0], x[1]))
            .expect("validated state and factor")
    };
    let SearchResult { value, point } = minimize_box(
        &dims,
        grid.refinement_rounds,
        grid.shrink_factor,
        objective,
    );

    Ok(CorrelationReport {
        mutual_information: s_rest + s_measured - s_all,
        discord: s_measured - s_all + value,
        geometric_2norm: None,
        geometric_1norm: None,
        minimizing_basis: MeasurementBasis::new(point[0], point[1]),
        method: DiscordMethod::BruteForce,
    })
}

/// Real symmetric X-shaped two-qubit state: nonzero entries on the diagonal
/// and anti-diagonal only. Indices follow the product basis
/// `|A up, B up>, |A up, B down>, |A down, B up>, |A down, B down>`.
#[derive(Debug, Clone, Copy)]
pub struct XStateParams {
    diag: [f64; 4],
    rho14: f64,
    rho23: f64,
}

const X_SHAPE_TOL: f64 = 1e-10;

impl XStateParams {
    pub fn new(diag: [f64; 4], rho14: f64, rho23: f64) -> Result<Self> {
        let sum: f64 = diag.iter().sum();
        if (sum - 1.0).abs() > 1e-8 {
            return Err(Error::NonUnitTrace(sum, 1e-8));
        }
        Ok(Self { diag, rho14, rho23 })
    }

    /// Extracts the X parameters, rejecting any state that is not X-shaped
    /// with real symmetric off-diagonals.
    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::LayoutMismatch {
                product: rho.dim(),
                dim: 4,
            });
        }
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let on_x = i == j || i + j == 3;
                let entry = m[(i, j)];
                let offending = if on_x {
                    entry.im.abs() > X_SHAPE_TOL
                } else {
                    entry.norm() > X_SHAPE_TOL
                };
                if offending {
                    return Err(Error::NotXState {
                        row: i,
                        col: j,
                        value: entry.norm(),
                    });
                }
            }
        }
        Self::new(
            [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re],
            m[(0, 3)].re,
            m[(1, 2)].re,
        )
    }

    pub fn diag(&self) -> [f64; 4] {
        self.diag
    }

    pub fn rho14(&self) -> f64 {
        self.rho14
    }

    pub fn rho23(&self) -> f64 {
        self.rho23
    }

    /// Joint spectrum from the two 2x2 anti-diagonal blocks.
    fn eigenvalues(&self) -> [f64; 4] {
        let pair = |a: f64, d: f64, off: f64| {
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + off * off).sqrt();
            (mid + rad, mid - rad)
        };
        let (l1, l2) = pair(self.diag[0], self.diag[3], self.rho14);
        let (l3, l4) = pair(self.diag[1], self.diag[2], self.rho23);
        [l1, l2, l3, l4]
    }

    fn joint_entropy(&self) -> f64 {
        -self.eigenvalues().iter().map(|&l| xlog2(l.max(0.0))).sum::<f64>()
    }

    /// Conditional entropy of one measurement candidate `(k, l, mu)`.
    fn candidate_conditional_entropy(&self, k: f64, l: f64, mu: f64) -> f64 {
        let [d1, d2, d3, d4] = self.diag;
        let beta = 4.0 * k * l * (self.rho14 + self.rho23).powi(2)
            - 16.0 * mu * self.rho14 * self.rho23;
        let p0 = (d2 + d4) * l + (d1 + d3) * k;
        let p1 = 1.0 - p0;
        let mut entropy = 0.0;
        if p0 > BRANCH_FLOOR {
            let theta0 = (((d1 - d3) * k + (d2 - d4) * l).powi(2) + beta).sqrt() / p0;
            entropy += p0 * binary_entropy(0.5 * (1.0 + theta0.min(1.0)));
        }
        if p1 > BRANCH_FLOOR {
            let theta1 = (((d1 - d3) * l + (d2 - d4) * k).powi(2) + beta).sqrt() / p1;
            entropy += p1 * binary_entropy(0.5 * (1.0 + theta1.min(1.0)));
        }
        entropy
    }
}

/// Closed-form discord of a real symmetric X state, measuring the second
/// qubit: the minimum over the candidate measurements `k = l = 1/2`
/// (equatorial) and `k = 0` / `k = 1` (polar). The equatorial azimuth must
/// track the relative sign of the anti-diagonal pair: `mu = 0` when
/// `rho14 rho23 >= 0`, `mu = k l` otherwise, which turns the coupling term
/// into `(|rho14| + |rho23|)^2` in both cases. Both equatorial candidates
/// are always evaluated.
pub fn xstate_discord(x: &XStateParams) -> CorrelationReport {
    let [d1, d2, d3, _] = x.diag;
    let s_a = binary_entropy(d1 + d2);
    let s_b = binary_entropy(d1 + d3);
    let s_ab = x.joint_entropy();

    let candidates = [
        (0.5, 0.5, 0.0, MeasurementBasis::new(FRAC_PI_2, 0.0)),
        (0.5, 0.5, 0.25, MeasurementBasis::new(FRAC_PI_2, FRAC_PI_2)),
        (0.0, 1.0, 0.0, MeasurementBasis::Z),
        (1.0, 0.0, 0.0, MeasurementBasis::Z),
    ];
    let mut best = f64::INFINITY;
    let mut best_basis = MeasurementBasis::Z;
    for (k, l, mu, basis) in candidates {
        let entropy = x.candidate_conditional_entropy(k, l, mu);
        if entropy < best {
            best = entropy;
            best_basis = basis;
        }
    }

    CorrelationReport {
        mutual_information: s_a + s_b - s_ab,
        discord: s_b - s_ab + best,
        geometric_2norm: None,
        geometric_1norm: None,
        minimizing_basis: best_basis,
        method: DiscordMethod::ClosedForm,
    }
}

/// Discord of the mixed bipartite helicity state as a function of the mixing
/// weight alone:
/// `(1/4) log2[(1+3p)^(1+3p) (1-p)^(1-p) / (1+p)^(2(1+p))]`, with `0^0 = 1`.
pub fn werner_discord_formula(p: MixingProbability) -> f64 {
    let p = p.value();
    0.25 * (xlog2(1.0 + 3.0 * p) + xlog2(1.0 - p) - 2.0 * xlog2(1.0 + p))
}

/// Global discord of the mixed tripartite helicity state:
/// `(1/8) log2[(1+7p)^(1+7p) (1-p)^(1-p) / (1+3p)^(2(1+3p))]`.
pub fn tripartite_global_discord_formula(p: MixingProbability) -> f64 {
    let p = p.value();
    (xlog2(1.0 + 7.0 * p) + xlog2(1.0 - p) - 2.0 * xlog2(1.0 + 3.0 * p)) / 8.0
}

/// Result of a global-discord minimization: the value and the per-party
/// measurement bases attaining it.
#[derive(Debug, Clone)]
pub struct GlobalDiscordResult {
    pub value: f64,
    pub bases: Vec<MeasurementBasis>,
}

/// Per-state context shared by every point of a global-discord search.
struct GlobalContext {
    parties: Vec<String>,
    reductions: Vec<(DensityOperator, f64)>,
    s_all: f64,
}

impl GlobalContext {
    fn prepare(rho: &DensityOperator) -> Result<Self> {
        let parties: Vec<String> = rho.layout().names().to_vec();
        for party in &parties {
            require_qubit(rho, party)?;
        }
        let s_all = rho.von_neumann_entropy()?;
        let mut reductions = Vec::with_capacity(parties.len());
        for party in &parties {
            let reduction = rho.reduce_to(party)?;
            let entropy = reduction.von_neumann_entropy()?;
            reductions.push((reduction, entropy));
        }
        Ok(Self {
            parties,
            reductions,
            s_all,
        })
    }

    fn objective(&self, rho: &DensityOperator, bases: &[MeasurementBasis]) -> f64 {
        let assignments: Vec<(&str, MeasurementBasis)> = self
            .parties
            .iter()
            .map(|p| p.as_str())
            .zip(bases.iter().copied())
            .collect();
        let dephased = dephase_product(rho, &assignments).expect("validated layout");
        let joint = dephased.von_neumann_entropy().expect("valid dephased state") - self.s_all;
        let mut local = 0.0;
        for ((reduction, s_j), (party, basis)) in self.reductions.iter().zip(&assignments) {
            let dephased_j = dephase(reduction, party, basis).expect("validated layout");
            local += dephased_j.von_neumann_entropy().expect("valid dephased state") - s_j;
        }
        joint - local
    }
}

/// Global discord over product projective measurements, restricted to the
/// default search space: the first party measured on the z-axis and all
/// azimuths zero. That restriction is exact for the states built here, whose
/// minimizer sits at all-polar angles; use [`global_discord_full`] to search
/// every angle.
pub fn global_discord(rho: &DensityOperator, grid: &GridSpec) -> Result<GlobalDiscordResult> {
    let ctx = GlobalContext::prepare(rho)?;
    let free = ctx.parties.len() - 1;
    let dims = vec![grid.theta_dim(); free];
    let objective = |x: &[f64]| {
        let mut bases = vec![MeasurementBasis::Z];
        bases.extend(x.iter().map(|&t| MeasurementBasis::new(t, 0.0)));
        ctx.objective(rho, &bases)
    };
    let SearchResult { value, point } = minimize_box(
        &dims,
        grid.refinement_rounds,
        grid.shrink_factor,
        objective,
    );
    let mut bases = vec![MeasurementBasis::Z];
    bases.extend(point.iter().map(|&t| MeasurementBasis::new(t, 0.0)));
    Ok(GlobalDiscordResult { value, bases })
}

/// Global discord minimized over every polar and azimuthal angle. The grid
/// has `theta_steps^N * phi_steps^N` points per pass; keep the steps small.
pub fn global_discord_full(rho: &DensityOperator, grid: &GridSpec) -> Result<GlobalDiscordResult> {
    let ctx = GlobalContext::prepare(rho)?;
    let n = ctx.parties.len();
    let mut dims = vec![grid.theta_dim(); n];
    dims.extend(vec![grid.phi_dim(); n]);
    let objective = |x: &[f64]| {
        let bases: Vec<MeasurementBasis> = (0..n)
            .map(|j| MeasurementBasis::new(x[j], x[n + j]))
            .collect();
        ctx.objective(rho, &bases)
    };
    let SearchResult { value, point } = minimize_box(
        &dims,
        grid.refinement_rounds,
        grid.shrink_factor,
        objective,
    );
    let bases = (0..n)
        .map(|j| MeasurementBasis::new(point[j], point[n + j]))
        .collect();
    Ok(GlobalDiscordResult { value, bases })
}

fn hs_norm_sq_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum()
}

/// Geometric discord in the squared Hilbert-Schmidt norm: the minimal
/// `tr[(rho - rho')^2]` over dephasings `rho'` of the measured qubit.
pub fn geometric_discord_2norm(
    rho: &DensityOperator,
    measured_factor: &str,
    grid: &GridSpec,
) -> Result<f64> {
    require_qubit(rho, measured_factor)?;
    let dims = [grid.theta_dim(), grid.phi_dim()];
    let objective = |x: &[f64]| {
        let dephased = dephase(rho, measured_factor, &MeasurementBasis::new(x[0], x[1]))
            .expect("validated state and factor");
        hs_norm_sq_diff(rho.matrix(), dephased.matrix())
    };
    Ok(minimize_box(&dims, grid.refinement_rounds, grid.shrink_factor, objective).value)
}

/// Multi-party geometric discord: minimal `tr[(rho - rho')^2]` over product
/// dephasings, one axis per qubit party. Equal to `tr(rho^2) - tr(rho'^2)`
/// because the pinching is an orthogonal projection in the
/// Hilbert-Schmidt inner product.
pub fn geometric_discord_2norm_global(rho: &DensityOperator, grid: &GridSpec) -> Result<f64> {
    let parties: Vec<String> = rho.layout().names().to_vec();
    for party in &parties {
        require_qubit(rho, party)?;
    }
    let n = parties.len();
    let mut dims = vec![grid.theta_dim(); n];
    dims.extend(vec![grid.phi_dim(); n]);
    let objective = |x: &[f64]| {
        let assignments: Vec<(&str, MeasurementBasis)> = parties
            .iter()
            .enumerate()
            .map(|(j, p)| (p.as_str(), MeasurementBasis::new(x[j], x[n + j])))
            .collect();
        let dephased = dephase_product(rho, &assignments).expect("validated layout");
        hs_norm_sq_diff(rho.matrix(), dephased.matrix())
    };
    Ok(minimize_box(&dims, grid.refinement_rounds, grid.shrink_factor, objective).value)
}

/// Geometric discord in the trace (Schatten 1) norm: minimal
/// `|| rho - rho' ||_1` over dephasings of the measured qubit.
pub fn geometric_discord_1norm(
    rho: &DensityOperator,
    measured_factor: &str,
    grid: &GridSpec,
) -> Result<f64> {
    require_qubit(rho, measured_factor)?;
    let dims = [grid.theta_dim(), grid.phi_dim()];
    let objective = |x: &[f64]| {
        let dephased = dephase(rho, measured_factor, &MeasurementBasis::new(x[0], x[1]))
            .expect("validated state and factor");
        let diff = HermitianOp::new_unchecked(
            rho.matrix() - dephased.matrix(),
            rho.layout().clone(),
        );
        diff.trace_norm()
    };
    Ok(minimize_box(&dims, grid.refinement_rounds, grid.shrink_factor, objective).value)
}

/// Full correlation report for the beyond-single-mode bipartite state.
///
/// The effective helicity matrix is built from the right/left Unruh
/// superposition, discord is evaluated both in closed form and by grid
/// minimization (the smaller upper bound wins, tagging the method), and
/// both geometric measures are attached.
pub fn unruh_discord(
    omega: AccelerationParam,
    unruh: UnruhWeights,
    p: MixingProbability,
    grid: &GridSpec,
) -> Result<CorrelationReport> {
    let state = unruh_bipartite(omega, unruh, p, &TruncationPolicy::default())?;
    let effective = state.effective_matrix()?;
    let closed = xstate_discord(&XStateParams::from_density(&effective)?);
    let brute = discord_bruteforce(&effective, "B", grid)?;
    let geo2 = geometric_discord_2norm(&effective, "A", grid)?;
    let geo1 = geometric_discord_1norm(&effective, "A", grid)?;

    // both routes upper-bound the true minimum; keep the tighter one
    let (discord, method) = if brute.discord < closed.discord - 1e-12 {
        (brute.discord, DiscordMethod::BruteForce)
    } else {
        (closed.discord, DiscordMethod::ClosedForm)
    };
    Ok(CorrelationReport {
        mutual_information: closed.mutual_information,
        discord,
        geometric_2norm: Some(geo2),
        geometric_1norm: Some(geo1),
        minimizing_basis: brute.minimizing_basis,
        method,
    })
}
