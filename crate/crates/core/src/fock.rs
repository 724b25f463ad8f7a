//! Geometric-series Fock weights left behind when an accelerated observer's
//! modes are traced over the causally disconnected wedge.
//!
//! A single-particle mode seen from a uniformly accelerated frame dresses
//! into a two-wedge squeezed state. Tracing out the hidden wedge produces a
//! diagonal Fock distribution with weights
//!
//! ```text
//! w_n = (1 - x)^2 * x^n * (n + 1),        x = exp(-2 pi omega)
//! ```
//!
//! which sum to exactly 1. Everything downstream (density matrices, measures)
//! consumes a truncated prefix of this series together with a certified bound
//! on the discarded tail.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Dimensionless acceleration parameter: detected mode energy over proper
/// acceleration. `omega -> inf` is the inertial limit, `omega -> 0+` the
/// infinite-acceleration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationParam {
    omega: f64,
}

impl AccelerationParam {
    pub fn new(omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidOmega(omega));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Ratio `x = exp(-2 pi omega)` of the geometric weight series.
    pub fn series_ratio(&self) -> f64 {
        (-2.0 * PI * self.omega).exp()
    }
}

/// How far the weight series may be truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Maximum allowed tail mass.
    pub epsilon: f64,
    /// Absolute upper bound on the Fock cutoff.
    pub hard_cap: usize,
}

impl TruncationPolicy {
    pub fn new(epsilon: f64, hard_cap: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) || hard_cap == 0 {
            return Err(Error::InvalidPolicy { epsilon, hard_cap });
        }
        Ok(Self { epsilon, hard_cap })
    }
}

impl Default for TruncationPolicy {
    /// Tail mass below 1e-12 keeps truncation error far under every
    /// tolerance used by the verification suite, while the cap keeps the
    /// largest dense tripartite expansion tractable.
    fn default() -> Self {
        Self {
            epsilon: 1e-12,
            hard_cap: 512,
        }
    }
}

/// Single weight `w_n = (1 - x)^2 x^n (n + 1)`.
pub fn fock_weight(n: usize, omega: AccelerationParam) -> f64 {
    let x = omega.series_ratio();
    (1.0 - x).powi(2) * x.powi(n as i32) * (n as f64 + 1.0)
}

/// Exact mass of the series beyond index `n`:
/// `(1 - x)^2 sum_{k > n} x^k (k + 1) = x^(n+1) ((n+1)(1-x) + 1)`.
pub fn exact_tail(omega: AccelerationParam, n: usize) -> f64 {
    let x = omega.series_ratio();
    x.powi(n as i32 + 1) * ((n as f64 + 1.0) * (1.0 - x) + 1.0)
}

/// Truncated weight series with its certified tail bound.
#[derive(Debug, Clone)]
pub struct FockWeightSeries {
    omega: AccelerationParam,
    cutoff: usize,
    weights: Vec<f64>,
    tail_bound: f64,
}

impl FockWeightSeries {
    /// Shortest prefix whose exact tail is at most `policy.epsilon`.
    pub fn build(omega: AccelerationParam, policy: &TruncationPolicy) -> Result<Self> {
        let mut cutoff = None;
        for n in 0..=policy.hard_cap {
            if exact_tail(omega, n) <= policy.epsilon {
                cutoff = Some(n);
                break;
            }
        }
        let Some(cutoff) = cutoff else {
            return Err(Error::Truncation {
                target: policy.epsilon,
                hard_cap: policy.hard_cap,
                achievable: exact_tail(omega, policy.hard_cap),
            });
        };
        Ok(Self::with_cutoff(omega, cutoff))
    }

    /// Series with a pinned cutoff; the tail bound is still exact.
    pub fn with_cutoff(omega: AccelerationParam, cutoff: usize) -> Self {
        let weights = (0..=cutoff).map(|n| fock_weight(n, omega)).collect();
        Self {
            omega,
            cutoff,
            weights,
            tail_bound: exact_tail(omega, cutoff),
        }
    }

    pub fn omega(&self) -> AccelerationParam {
        self.omega
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Weights `w_0 ..= w_cutoff`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Mass retained by the truncation, `sum of weights = 1 - tail`.
    pub fn captured_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Convenience wrapper matching the series constructor.
pub fn weight_series(omega: AccelerationParam, policy: &TruncationPolicy) -> Result<FockWeightSeries> {
    FockWeightSeries::build(omega, policy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega(v: f64) -> AccelerationParam {
        AccelerationParam::new(v).unwrap()
    }

    /// Independent tail oracle: brute-force summation far past the cutoff.
    fn brute_force_tail(om: AccelerationParam, n: usize) -> f64 {
        // 4000 terms is enough for the slowest decay in the test grid
        // (omega = 0.05, ratio ~ 0.73) to fall below 1e-40.
        (n + 1..n + 4000).map(|k| fock_weight(k, om)).sum()
    }

    #[test]
    fn rejects_bad_omega() {
        assert!(AccelerationParam::new(0.0).is_err());
        assert!(AccelerationParam::new(-1.0).is_err());
        assert!(AccelerationParam::new(f64::NAN).is_err());
        assert!(AccelerationParam::new(f64::INFINITY).is_err());
    }

    #[test]
    fn inertial_limit_concentrates_on_ground_weight() {
        assert!((fock_weight(0, omega(50.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_weight_at_half() {
        // (1 - e^(-pi))^2
        assert!((fock_weight(0, omega(0.5)) - 0.915_439_606_204_163_4).abs() < 1e-12);
        assert!((fock_weight(0, omega(0.5)) - 0.915_440).abs() < 1e-6);
    }

    #[test]
    fn weights_sum_to_one() {
        for om in [0.05, 0.1, 0.2, 0.5, 1.0, 2.0] {
            let total: f64 = (0..4000).map(|n| fock_weight(n, omega(om))).sum();
            assert!((total - 1.0).abs() < 1e-12, "omega={om}: sum={total}");
        }
    }

    #[test]
    fn exact_tail_matches_brute_force_on_grid() {
        for om in [0.05, 0.1, 0.2, 0.5, 1.0, 2.0] {
            let om = omega(om);
            for n in 0..=50 {
                let exact = exact_tail(om, n);
                let brute = brute_force_tail(om, n);
                assert!(
                    (exact - brute).abs() < 1e-14,
                    "omega={}, n={n}: exact={exact}, brute={brute}",
                    om.omega()
                );
            }
        }
    }

    #[test]
    fn trivial_epsilon_truncates_at_zero() {
        let policy = TruncationPolicy::new(0.999_999, 8).unwrap();
        let series = weight_series(omega(0.5), &policy).unwrap();
        assert_eq!(series.cutoff(), 0);
    }

    #[test]
    fn cutoff_matches_partial_sum_oracle() {
        // Smallest N whose partial sum reaches 1 - epsilon, found by direct
        // accumulation.
        let eps = 1e-12;
        for om in [0.2, 0.5, 1.0] {
            let om = omega(om);
            let mut sum = 0.0;
            let mut n = 0;
            while sum < 1.0 - eps {
                sum += fock_weight(n, om);
                n += 1;
            }
            let expected = n - 1;
            let series = weight_series(om, &TruncationPolicy::new(eps, 512).unwrap()).unwrap();
            assert_eq!(series.cutoff(), expected, "omega={}", om.omega());
        }
    }

    #[test]
    fn unreachable_tail_reports_truncation_error() {
        let policy = TruncationPolicy::new(1e-12, 10).unwrap();
        match weight_series(omega(0.05), &policy) {
            Err(Error::Truncation {
                hard_cap,
                achievable,
                ..
            }) => {
                assert_eq!(hard_cap, 10);
                assert!(achievable > 1e-12);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn partial_sums_monotone_and_bounded() {
        for om in [0.05, 0.5, 2.0] {
            let series = FockWeightSeries::with_cutoff(omega(om), 200);
            let mut sum = 0.0;
            for &w in series.weights() {
                assert!(w >= 0.0);
                // deep-tail weights fall below one ulp of the partial sum;
                // strict growth only holds while they still count
                if w > 1e-12 {
                    assert!(sum + w > sum);
                }
                let next = sum + w;
                assert!(next >= sum);
                assert!(next <= 1.0 + 1e-12);
                sum = next;
            }
            assert!(sum + series.tail_bound() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn weights_eventually_decrease() {
        let om = omega(0.05);
        let series = FockWeightSeries::with_cutoff(om, 300);
        let w = series.weights();
        // ratio w_{n+1}/w_n = x (n+2)/(n+1) < 1 once n is large enough
        for n in 20..299 {
            assert!(w[n + 1] < w[n], "n={n}");
        }
    }
}
