//! Property tests for the operator algebra and the series truncation.

use heliq::densops::{C64, CMatrix};
use heliq::discord::{GridSpec, XStateParams, discord_bruteforce, xstate_discord};
use heliq::{
    AccelerationParam, DensityOperator, HermitianOp, SubsystemLayout, fock_weight,
};
use proptest::prelude::*;

fn hermitian_from(parts: &[(f64, f64)], dim: usize) -> CMatrix {
    let raw = CMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = parts[i * dim + j];
        C64::new(re, im)
    });
    (raw.clone() + raw.adjoint()).scale(0.5)
}

fn density_from(parts: &[(f64, f64)], dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |i, j| {
        let (re, im) = parts[i * dim + j];
        C64::new(re, im)
    });
    let psd = &g * g.adjoint();
    let trace: f64 = psd.diagonal().iter().map(|z| z.re).sum();
    psd.unscale(trace)
}

fn entry() -> impl Strategy<Value = (f64, f64)> {
    ((-1.0..1.0f64), (-1.0..1.0f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // partial transpose is a trace-preserving involution
    #[test]
    fn partial_transpose_involutes(parts in prop::collection::vec(entry(), 36)) {
        let layout = SubsystemLayout::new([("A", 2), ("B", 3)]).unwrap();
        let herm = HermitianOp::new(hermitian_from(&parts, 6), layout).unwrap();
        for factor in ["A", "B"] {
            let pt = herm.partial_transpose(factor).unwrap();
            prop_assert!((pt.trace() - herm.trace()).abs() < 1e-12);
            let back = pt.partial_transpose(factor).unwrap();
            prop_assert_eq!(back.matrix(), herm.matrix());
        }
    }

    // tracing the right factor out of a product recovers the left factor
    #[test]
    fn product_partial_trace_round_trip(
        a_parts in prop::collection::vec(entry(), 4),
        b_parts in prop::collection::vec(entry(), 9),
    ) {
        let a = DensityOperator::new(density_from(&a_parts, 2), SubsystemLayout::single("A", 2)).unwrap();
        let b = DensityOperator::new(density_from(&b_parts, 3), SubsystemLayout::single("B", 3)).unwrap();
        let prod = a.tensor(&b).unwrap();
        prop_assert!((prod.trace() - 1.0).abs() < 1e-10);
        let back = prod.partial_trace("B").unwrap();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((back.matrix()[(i, j)] - a.matrix()[(i, j)]).norm() < 1e-12);
            }
        }
    }

    // spectrum sums to the trace; entropy of the mixture is nonnegative
    #[test]
    fn spectrum_sums_to_trace(parts in prop::collection::vec(entry(), 16)) {
        let layout = SubsystemLayout::new([("A", 2), ("B", 2)]).unwrap();
        let rho = DensityOperator::new(density_from(&parts, 4), layout).unwrap();
        let spectrum = rho.spectrum();
        prop_assert!((spectrum.sum() - rho.trace()).abs() < 1e-10);
        prop_assert!(rho.von_neumann_entropy().unwrap() >= -1e-12);
    }

    // closed-form tail of the weight series equals direct summation
    #[test]
    fn tail_matches_brute_force(omega_val in 0.05..2.0f64, n in 0usize..50) {
        let omega = AccelerationParam::new(omega_val).unwrap();
        let exact = heliq::fock::exact_tail(omega, n);
        let brute: f64 = (n + 1..n + 4000).map(|k| fock_weight(k, omega)).sum();
        prop_assert!((exact - brute).abs() < 1e-14);
    }
}

proptest! {
    // the grid arbitrates the closed form on random X states; a handful of
    // cases here, the 50-state battery lives in the verification suite
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn xstate_closed_form_tracks_brute_force(
        raw in prop::collection::vec(0.05..1.0f64, 4),
        f14 in -0.95..0.95f64,
        f23 in -0.95..0.95f64,
    ) {
        let sum: f64 = raw.iter().sum();
        let diag = [raw[0] / sum, raw[1] / sum, raw[2] / sum, raw[3] / sum];
        let rho14 = f14 * (diag[0] * diag[3]).sqrt();
        let rho23 = f23 * (diag[1] * diag[2]).sqrt();
        let x = XStateParams::new(diag, rho14, rho23).unwrap();

        let layout = SubsystemLayout::new([("A", 2), ("B", 2)]).unwrap();
        let rho = DensityOperator::new(heliq::checks::x_state_matrix(&x), layout).unwrap();
        let grid = GridSpec::new(41, 17, 2, 0.25).unwrap();
        let closed = xstate_discord(&x).discord;
        let brute = discord_bruteforce(&rho, "B", &grid).unwrap().discord;
        prop_assert!((closed - brute).abs() < 1e-4, "closed={}, brute={}", closed, brute);
    }
}
