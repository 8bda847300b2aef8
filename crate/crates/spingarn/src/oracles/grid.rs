//! Exhaustive grid search over one- and two-dimensional boxes.

use crate::error::{Error, Result};

/// Returns the grid point of minimal objective value over the given box,
/// with `steps` subdivisions per dimension (so `steps + 1` samples per
/// axis). Ties break toward lexicographically smallest coordinates.
///
/// Only dimensions 1 and 2 are supported and at least 1000 steps per
/// dimension are required — this is a reference oracle, not a solver.
pub fn grid_argmin<F>(objective: F, bounds: &[(f64, f64)], steps: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    if bounds.is_empty() || bounds.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "grid search supports 1 or 2 dimensions, got {}",
            bounds.len()
        )));
    }
    if steps < 1000 {
        return Err(Error::InvalidArgument(format!(
            "grid search needs at least 1000 steps per dimension, got {steps}"
        )));
    }
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must satisfy lo < hi, got ({lo}, {hi})"
            )));
        }
    }

    let coord = |d: usize, k: usize| {
        let (lo, hi) = bounds[d];
        lo + (hi - lo) * (k as f64) / (steps as f64)
    };

    let mut best_value = f64::INFINITY;
    let mut best_point: Vec<f64> = Vec::new();
    let mut point = vec![0.0; bounds.len()];

    if bounds.len() == 1 {
        for k in 0..=steps {
            point[0] = coord(0, k);
            let v = objective(&point);
            if !v.is_finite() && v != f64::INFINITY {
                return Err(Error::NonFinite("grid objective value"));
            }
            if v < best_value {
                best_value = v;
                best_point = point.clone();
            }
        }
    } else {
        for k0 in 0..=steps {
            point[0] = coord(0, k0);
            for k1 in 0..=steps {
                point[1] = coord(1, k1);
                let v = objective(&point);
                if !v.is_finite() && v != f64::INFINITY {
                    return Err(Error::NonFinite("grid objective value"));
                }
                if v < best_value {
                    best_value = v;
                    best_point = point.clone();
                }
            }
        }
    }

    if best_point.is_empty() {
        return Err(Error::InvalidArgument(
            "objective was +inf on the whole grid".into(),
        ));
    }
    Ok(best_point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_threshold_stationary_point() {
        // ½(x-3)² + |x| has its minimum at x = 2 (x - 3 + sign(x) = 0)
        let p = grid_argmin(
            |x| 0.5 * (x[0] - 3.0).powi(2) + x[0].abs(),
            &[(-10.0, 10.0)],
            1_000_000,
        )
        .unwrap();
        assert!((p[0] - 2.0).abs() <= 2e-5, "{p:?}");
    }

    #[test]
    fn quadratic_bowl() {
        let p = grid_argmin(|x| 0.5 * x[0] * x[0], &[(-1.0, 1.0)], 1000).unwrap();
        assert_eq!(p[0], 0.0);
    }

    #[test]
    fn two_dimensional_coupled() {
        // Σ ½(x_i-3)² + |x1+x2| is minimized where x_i = 3 - v with
        // v ∈ ∂|x1+x2|; the sum stays positive, so v = 1 and x = (2, 2)
        let p = grid_argmin(
            |x| 0.5 * (x[0] - 3.0).powi(2) + 0.5 * (x[1] - 3.0).powi(2) + (x[0] + x[1]).abs(),
            &[(-10.0, 10.0), (-10.0, 10.0)],
            4000,
        )
        .unwrap();
        assert!((p[0] - 2.0).abs() <= 1e-2, "{p:?}");
        assert!((p[1] - 2.0).abs() <= 1e-2, "{p:?}");
    }

    #[test]
    fn ties_break_lexicographically() {
        let p = grid_argmin(|_| 1.0, &[(-1.0, 1.0), (-1.0, 1.0)], 1000).unwrap();
        assert_eq!(p, vec![-1.0, -1.0]);
    }

    #[test]
    fn strictly_convex_minimizers_within_one_cell() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let steps = 10_000;
        let cell = 12.0 / steps as f64;
        for _ in 0..20 {
            let a = rng.random_range(0.2..4.0);
            let c = rng.random_range(-5.0..5.0);
            let p = grid_argmin(|x| a * (x[0] - c) * (x[0] - c), &[(-6.0, 6.0)], steps).unwrap();
            assert!((p[0] - c).abs() <= cell, "target {c}, got {}", p[0]);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(grid_argmin(|x| x[0], &[(-1.0, 1.0)], 10).is_err());
        assert!(grid_argmin(|x| x[0], &[], 1000).is_err());
        assert!(grid_argmin(|x| x[0], &[(1.0, -1.0)], 1000).is_err());
        assert!(grid_argmin(|x| x[0] * f64::NAN, &[(-1.0, 1.0)], 1000).is_err());
    }
}
