//! Negativity measures and the tripartite pi-tangle.
//!
//! Negativity here is the trace-norm form `N = ||rho^PT|| - 1`; the
//! logarithmic form `log2 ||rho^PT||` is reported separately and never mixed
//! into the pi-tangle. On block-diagonal states both are computed blockwise,
//! which is exact because the partial transpose acts inside each Fock block.

use crate::densops::{DensityOperator, HermitianOp};
use crate::error::Result;
use crate::states::BlockedDensity;

/// Trace-norm negativity. `signed` is the raw `||rho^PT|| - 1`, which dips
/// (barely) below zero for separable truncated states; `value` clamps at 0.
#[derive(Debug, Clone, Copy)]
pub struct Negativity {
    pub value: f64,
    pub signed: f64,
}

impl Negativity {
    fn from_trace_norm(norm: f64) -> Self {
        let signed = norm - 1.0;
        Negativity {
            value: signed.max(0.0),
            signed,
        }
    }
}

/// `log2 ||rho^PT_factor||`, the logarithmic negativity.
pub fn log_negativity(rho: &DensityOperator, factor: &str) -> Result<f64> {
    Ok(rho.partial_transpose(factor)?.trace_norm().log2())
}

/// `||rho^PT_factor|| - 1`.
pub fn trace_norm_negativity(rho: &DensityOperator, factor: &str) -> Result<Negativity> {
    let norm = rho.partial_transpose(factor)?.trace_norm();
    Ok(Negativity::from_trace_norm(norm))
}

fn blocked_pt_trace_norm(state: &BlockedDensity, factor: &str) -> Result<f64> {
    state.helicity_layout().position(factor)?;
    let mut norm = 0.0;
    for (_, block) in state.blocks() {
        let herm = HermitianOp::new(block.matrix.clone(), state.helicity_layout().clone())?;
        norm += block.weight * herm.partial_transpose(factor)?.trace_norm();
    }
    Ok(norm)
}

/// Blockwise trace-norm negativity, `sum_k w_k ||block_k^PT|| - 1`.
pub fn trace_norm_negativity_blocked(state: &BlockedDensity, factor: &str) -> Result<Negativity> {
    Ok(Negativity::from_trace_norm(blocked_pt_trace_norm(
        state, factor,
    )?))
}

/// Blockwise logarithmic negativity.
pub fn log_negativity_blocked(state: &BlockedDensity, factor: &str) -> Result<f64> {
    Ok(blocked_pt_trace_norm(state, factor)?.log2())
}

/// Pi-tangle decomposition for a three-party state.
#[derive(Debug, Clone, Copy)]
pub struct TangleReport {
    /// One-tangles `N_{A(BC)}, N_{B(AC)}, N_{C(AB)}`.
    pub one_tangle_a: f64,
    pub one_tangle_b: f64,
    pub one_tangle_c: f64,
    /// Pairwise negativities of the two-party reductions.
    pub n_ab: f64,
    pub n_ac: f64,
    pub n_bc: f64,
    /// `pi_X = N_{X(YZ)}^2 - N_{XY}^2 - N_{XZ}^2`.
    pub pi_a: f64,
    pub pi_b: f64,
    pub pi_c: f64,
    /// Average of the three residuals.
    pub pi: f64,
}

impl TangleReport {
    fn assemble(one: [f64; 3], pairwise: [f64; 3]) -> Self {
        let [one_a, one_b, one_c] = one;
        let [n_ab, n_ac, n_bc] = pairwise;
        let pi_a = one_a * one_a - n_ab * n_ab - n_ac * n_ac;
        let pi_b = one_b * one_b - n_ab * n_ab - n_bc * n_bc;
        let pi_c = one_c * one_c - n_ac * n_ac - n_bc * n_bc;
        TangleReport {
            one_tangle_a: one_a,
            one_tangle_b: one_b,
            one_tangle_c: one_c,
            n_ab,
            n_ac,
            n_bc,
            pi_a,
            pi_b,
            pi_c,
            pi: (pi_a + pi_b + pi_c) / 3.0,
        }
    }
}

/// Pi-tangle of a blocked three-party state with helicity factors
/// `A`, `B`, `C`. One-tangles come from the full state, pairwise
/// negativities from the two-party reductions.
pub fn pi_tangle_blocked(state: &BlockedDensity) -> Result<TangleReport> {
    let one = [
        trace_norm_negativity_blocked(state, "A")?.value,
        trace_norm_negativity_blocked(state, "B")?.value,
        trace_norm_negativity_blocked(state, "C")?.value,
    ];
    let ab = state.partial_trace_party("C")?;
    let ac = state.partial_trace_party("B")?;
    let bc = state.partial_trace_party("A")?;
    let pairwise = [
        trace_norm_negativity_blocked(&ab, "A")?.value,
        trace_norm_negativity_blocked(&ac, "A")?.value,
        trace_norm_negativity_blocked(&bc, "B")?.value,
    ];
    Ok(TangleReport::assemble(one, pairwise))
}

/// Pi-tangle of a dense three-party state. The layout must name the helicity
/// qubits `A`, `B`, `C`; a party's Fock factor, when present, is named
/// `n<party>` and is traced out together with it.
pub fn pi_tangle_dense(rho: &DensityOperator) -> Result<TangleReport> {
    let one = [
        trace_norm_negativity(rho, "A")?.value,
        trace_norm_negativity(rho, "B")?.value,
        trace_norm_negativity(rho, "C")?.value,
    ];
    let drop_party = |party: &str| -> Result<DensityOperator> {
        let mut out = rho.partial_trace(party)?;
        let fock = format!("n{party}");
        if out.layout().contains(&fock) {
            out = out.partial_trace(&fock)?;
        }
        Ok(out)
    };
    let ab = drop_party("C")?;
    let ac = drop_party("B")?;
    let bc = drop_party("A")?;
    let pairwise = [
        trace_norm_negativity(&ab, "A")?.value,
        trace_norm_negativity(&ac, "A")?.value,
        trace_norm_negativity(&bc, "B")?.value,
    ];
    Ok(TangleReport::assemble(one, pairwise))
}
