//! Deterministic box-grid minimization with local refinement.
//!
//! Measurement-basis optimization in this crate is smooth and low
//! dimensional, so a dense grid pass followed by a few shrinking passes
//! around the incumbent is both simple and accurate. Evaluation order never
//! affects the result: reductions use a total order on `(value, flat index)`,
//! so the parallel and sequential paths return bit-identical answers.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// One search dimension.
#[derive(Debug, Clone, Copy)]
pub struct BoxDim {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    /// Periodic dimensions sample `[lo, hi)` and are refined without
    /// clamping; non-periodic ones sample `[lo, hi]` inclusive.
    pub wrap: bool,
}

impl BoxDim {
    pub fn closed(lo: f64, hi: f64, steps: usize) -> Self {
        Self {
            lo,
            hi,
            steps: steps.max(1),
            wrap: false,
        }
    }

    pub fn periodic(lo: f64, hi: f64, steps: usize) -> Self {
        Self {
            lo,
            hi,
            steps: steps.max(1),
            wrap: true,
        }
    }

    fn point(&self, k: usize) -> f64 {
        if self.steps == 1 {
            return self.lo;
        }
        let denom = if self.wrap { self.steps } else { self.steps - 1 };
        self.lo + (self.hi - self.lo) * k as f64 / denom as f64
    }

    fn step_size(&self) -> f64 {
        if self.steps == 1 {
            0.0
        } else if self.wrap {
            (self.hi - self.lo) / self.steps as f64
        } else {
            (self.hi - self.lo) / (self.steps - 1) as f64
        }
    }
}

/// Result of a box minimization.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub value: f64,
    pub point: Vec<f64>,
}

fn decode(dims: &[BoxDim], mut flat: usize) -> Vec<f64> {
    let mut coords = vec![0.0; dims.len()];
    for (i, dim) in dims.iter().enumerate().rev() {
        coords[i] = dim.point(flat % dim.steps);
        flat /= dim.steps;
    }
    coords
}

fn better(a: &(f64, usize), b: &(f64, usize)) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => a.1 < b.1,
    }
}

fn grid_pass_seq<F>(dims: &[BoxDim], f: &F) -> (f64, usize)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total: usize = dims.iter().map(|d| d.steps).product();
    let mut best = (f64::INFINITY, usize::MAX);
    for flat in 0..total {
        let value = f(&decode(dims, flat));
        if better(&(value, flat), &best) {
            best = (value, flat);
        }
    }
    best
}

#[cfg(feature = "parallel")]
fn grid_pass_par<F>(dims: &[BoxDim], f: &F) -> (f64, usize)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total: usize = dims.iter().map(|d| d.steps).product();
    (0..total)
        .into_par_iter()
        .map(|flat| (f(&decode(dims, flat)), flat))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if better(&a, &b) { a } else { b },
        )
}

fn refine_dims(dims: &[BoxDim], center: &[f64], shrink: f64, round: usize) -> Vec<BoxDim> {
    dims.iter()
        .zip(center)
        .map(|(dim, &c)| {
            let half = 0.5 * (dim.hi - dim.lo) * shrink.powi(round as i32);
            let (lo, hi) = if dim.wrap {
                // keep the window centered; f is periodic in wrapped dims
                (c - half, c + half)
            } else {
                ((c - half).max(dim.lo), (c + half).min(dim.hi))
            };
            BoxDim {
                lo,
                hi,
                steps: dim.steps,
                wrap: false,
            }
        })
        .collect()
}

fn minimize_with<F, P>(dims: &[BoxDim], rounds: usize, shrink: f64, f: &F, pass: P) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync,
    P: Fn(&[BoxDim], &F) -> (f64, usize),
{
    let (mut value, flat) = pass(dims, f);
    let mut point = decode(dims, flat);
    for round in 1..=rounds {
        let window = refine_dims(dims, &point, shrink, round);
        let (v, flat) = pass(&window, f);
        if v <= value {
            value = v;
            point = decode(&window, flat);
        }
    }
    SearchResult { value, point }
}

/// Sequential minimization over the grid, with `rounds` shrinking passes
/// around the incumbent.
pub fn minimize_box_seq<F>(dims: &[BoxDim], rounds: usize, shrink: f64, f: F) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    minimize_with(dims, rounds, shrink, &f, grid_pass_seq)
}

/// Parallel minimization; identical result to the sequential pass.
#[cfg(feature = "parallel")]
pub fn minimize_box_par<F>(dims: &[BoxDim], rounds: usize, shrink: f64, f: F) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    minimize_with(dims, rounds, shrink, &f, grid_pass_par)
}

/// Default entry point: parallel when the `parallel` feature is enabled,
/// sequential otherwise.
pub fn minimize_box<F>(dims: &[BoxDim], rounds: usize, shrink: f64, f: F) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    #[cfg(feature = "parallel")]
    {
        minimize_box_par(dims, rounds, shrink, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        minimize_box_seq(dims, rounds, shrink, f)
    }
}

/// Grid spacing of the first pass, per dimension.
pub fn initial_steps(dims: &[BoxDim]) -> Vec<f64> {
    dims.iter().map(|d| d.step_size()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum_with_refinement() {
        let dims = [BoxDim::closed(0.0, 3.0, 31), BoxDim::closed(0.0, 3.0, 31)];
        let f = |x: &[f64]| (x[0] - 1.234).powi(2) + (x[1] - 2.345).powi(2);
        let res = minimize_box_seq(&dims, 4, 0.25, f);
        assert!((res.point[0] - 1.234).abs() < 2e-3, "{:?}", res.point);
        assert!((res.point[1] - 2.345).abs() < 2e-3, "{:?}", res.point);
        assert!(res.value < 1e-5);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let dims = [BoxDim::closed(0.0, 1.0, 5), BoxDim::closed(0.0, 1.0, 5)];
        let res = minimize_box_seq(&dims, 0, 0.25, |_| 7.0);
        assert_eq!(res.point, vec![0.0, 0.0]);
        assert_eq!(res.value, 7.0);
    }

    #[test]
    fn periodic_dimension_samples_half_open_interval() {
        let dim = BoxDim::periodic(0.0, 1.0, 4);
        let pts: Vec<f64> = (0..4).map(|k| dim.point(k)).collect();
        assert_eq!(pts, vec![0.0, 0.25, 0.5, 0.75]);
        let closed = BoxDim::closed(0.0, 1.0, 5);
        let pts: Vec<f64> = (0..5).map(|k| closed.point(k)).collect();
        assert_eq!(pts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        // a minimum sitting at a periodic sample point is found exactly
        let res = minimize_box_seq(&[dim], 0, 0.5, |x| (x[0] - 0.75).abs());
        assert_eq!(res.point, vec![0.75]);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree_exactly() {
        let dims = [
            BoxDim::closed(0.0, std::f64::consts::PI, 41),
            BoxDim::periodic(0.0, std::f64::consts::TAU, 37),
        ];
        let f = |x: &[f64]| (1.3 * x[0]).sin() * (0.7 * x[1]).cos() + 0.1 * x[0];
        let seq = minimize_box_seq(&dims, 3, 0.25, f);
        let par = minimize_box_par(&dims, 3, 0.25, f);
        assert_eq!(seq.value.to_bits(), par.value.to_bits());
        assert_eq!(seq.point, par.point);
    }
}
