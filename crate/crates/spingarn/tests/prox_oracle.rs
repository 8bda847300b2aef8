//! Prox catalog against the grid-search oracle: each proximity operator
//! is the argmin of `f + ½||z - ·||²`, so exhaustive search over a box
//! must land within one or two grid cells of the closed form.

use spingarn::monotone_ops::{MonotoneOp, ProxSpec};
use spingarn::oracles::grid_argmin;
use spingarn::{Matrix, Vector};

fn grid_prox_1d<F>(f: F, z: f64, steps: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    grid_argmin(
        |t| f(t[0]) + 0.5 * (t[0] - z).powi(2),
        &[(-10.0, 10.0)],
        steps,
    )
    .unwrap()[0]
}

#[test]
fn l1_prox_matches_grid() {
    let steps = 200_000;
    let resolution = 20.0 / steps as f64;
    let op = MonotoneOp::from_prox(&ProxSpec::l1(1, 1.0).unwrap()).unwrap();
    for z in [3.0, -0.5, 0.7, -4.2, 0.0] {
        let exact = op.resolve(&Vector::new(vec![z]).unwrap()).unwrap().get(0);
        let grid = grid_prox_1d(|t| t.abs(), z, steps);
        assert!(
            (exact - grid).abs() <= 2.0 * resolution,
            "z={z}: exact {exact} vs grid {grid}"
        );
    }
}

#[test]
fn weighted_l1_prox_matches_grid() {
    let steps = 200_000;
    let resolution = 20.0 / steps as f64;
    let w = 1.7;
    let op = MonotoneOp::from_prox(&ProxSpec::l1(1, w).unwrap()).unwrap();
    for z in [3.0, -2.5, 1.0] {
        let exact = op.resolve(&Vector::new(vec![z]).unwrap()).unwrap().get(0);
        let grid = grid_prox_1d(|t| w * t.abs(), z, steps);
        assert!((exact - grid).abs() <= 2.0 * resolution);
    }
}

#[test]
fn quadratic_prox_matches_grid() {
    let steps = 200_000;
    let resolution = 20.0 / steps as f64;
    let op = MonotoneOp::from_prox(
        &ProxSpec::quadratic(
            Matrix::from_rows(&[vec![2.0]]).unwrap(),
            Vector::new(vec![1.0]).unwrap(),
            1.0,
        )
        .unwrap(),
    )
    .unwrap();
    for z in [4.0, -1.0, 0.25] {
        let exact = op.resolve(&Vector::new(vec![z]).unwrap()).unwrap().get(0);
        let grid = grid_prox_1d(|t| t * t - t, z, steps);
        assert!((exact - grid).abs() <= 2.0 * resolution);
    }
}

#[test]
fn box_prox_matches_grid() {
    let steps = 200_000;
    let resolution = 20.0 / steps as f64;
    let op = MonotoneOp::from_prox(
        &ProxSpec::box_indicator(
            Vector::new(vec![-1.0]).unwrap(),
            Vector::new(vec![2.0]).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    for z in [5.0, -3.0, 0.5] {
        let exact = op.resolve(&Vector::new(vec![z]).unwrap()).unwrap().get(0);
        let grid = grid_prox_1d(
            |t| {
                if (-1.0..=2.0).contains(&t) {
                    0.0
                } else {
                    f64::INFINITY
                }
            },
            z,
            steps,
        );
        assert!((exact - grid).abs() <= 2.0 * resolution);
    }
}

#[test]
fn ball_prox_matches_grid_2d() {
    let steps = 2000;
    let resolution = 8.0 / steps as f64;
    let op =
        MonotoneOp::from_prox(&ProxSpec::euclidean_ball(Vector::zeros(2), 1.0).unwrap()).unwrap();
    for z in [[3.0, 1.5], [-2.0, 0.5], [0.2, 0.1]] {
        let exact = op.resolve(&Vector::new(z.to_vec()).unwrap()).unwrap();
        let grid = grid_argmin(
            |t| {
                let inside = t[0] * t[0] + t[1] * t[1] <= 1.0;
                let dist = 0.5 * ((t[0] - z[0]).powi(2) + (t[1] - z[1]).powi(2));
                if inside {
                    dist
                } else {
                    f64::INFINITY
                }
            },
            &[(-4.0, 4.0), (-4.0, 4.0)],
            steps,
        )
        .unwrap();
        for i in 0..2 {
            assert!(
                (exact.get(i) - grid[i]).abs() <= 2.0 * resolution,
                "z={z:?}: exact {:?} vs grid {grid:?}",
                exact.as_slice()
            );
        }
    }
}
