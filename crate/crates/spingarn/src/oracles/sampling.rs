//! Seeded random instance generation for tests and verification suites.
//!
//! Symmetric PSD parts are sampled in `G^T G` form so monotonicity holds by
//! construction; strongly monotone variants add a positive diagonal shift
//! so the sampled problems have unique, quickly reachable solutions.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linops::{orthonormalize, LinearMap, Matrix, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

pub fn matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::new(
        rows,
        cols,
        (0..rows * cols)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect(),
    )
    .unwrap()
}

/// `G^T G / n`: symmetric PSD with entries of moderate size.
pub fn psd_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let g = matrix(rng, n, n);
    let mut out = g.transpose().multiply(&g);
    let scale = 1.0 / n as f64;
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, out.get(i, j) * scale);
        }
    }
    // symmetrize exactly against accumulation-order asymmetry
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (out.get(i, j) + out.get(j, i));
            out.set(i, j, avg);
            out.set(j, i, avg);
        }
    }
    out
}

/// PSD plus a diagonal shift in `[0.3, 1.0]`: strongly monotone.
pub fn strongly_monotone_psd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = psd_matrix(rng, n);
    let mu = rng.random_range(0.3..1.0);
    for i in 0..n {
        m.set(i, i, m.get(i, i) + mu);
    }
    m
}

/// A dense matrix with PSD symmetric part: `G^T G / n` plus a skew part.
pub fn monotone_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = psd_matrix(rng, n);
    let k = matrix(rng, n, n);
    for i in 0..n {
        for j in 0..n {
            let skew = 0.5 * (k.get(i, j) - k.get(j, i));
            m.set(i, j, m.get(i, j) + skew);
        }
    }
    m
}

/// Like [`monotone_matrix`] but with a strictly positive monotonicity
/// constant, so sampled problems have unique, quickly reachable solutions.
pub fn strongly_monotone_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut m = monotone_matrix(rng, n);
    let mu = rng.random_range(0.3..1.0);
    for i in 0..n {
        m.set(i, i, m.get(i, i) + mu);
    }
    m
}

/// An orthonormal basis of a random `k`-dimensional subspace of `R^n`.
pub fn orthonormal_basis(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vector> {
    assert!(k <= n);
    loop {
        let candidates: Vec<Vector> = (0..k).map(|_| vector(rng, n)).collect();
        let basis = orthonormalize(&candidates, 1e-10);
        if basis.len() == k {
            return basis;
        }
        // random vectors were dependent (probability ~0); resample
    }
}

/// Shapes of random linear maps used by the verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapShape {
    Dense,
    Identity,
    ScaledIdentity,
    RowStack,
    ColumnSum,
}

impl MapShape {
    pub const ALL: [MapShape; 5] = [
        MapShape::Dense,
        MapShape::Identity,
        MapShape::ScaledIdentity,
        MapShape::RowStack,
        MapShape::ColumnSum,
    ];
}

/// A random map of the requested shape with dimensions at most
/// `(max_domain, max_codomain)`. Identity shapes use the domain bound.
pub fn linear_map(
    rng: &mut ChaCha8Rng,
    shape: MapShape,
    max_domain: usize,
    max_codomain: usize,
) -> LinearMap {
    let n = rng.random_range(1..=max_domain);
    let m = rng.random_range(1..=max_codomain);
    match shape {
        MapShape::Dense => LinearMap::dense(matrix(rng, m, n)),
        MapShape::Identity => LinearMap::identity(n).unwrap(),
        MapShape::ScaledIdentity => {
            LinearMap::scaled_identity(n, rng.random_range(-2.0..2.0)).unwrap()
        }
        MapShape::RowStack => {
            let pieces = rng.random_range(2..=3);
            LinearMap::row_stack(
                (0..pieces)
                    .map(|_| {
                        let rows = rng.random_range(1..=max_codomain.div_ceil(pieces));
                        LinearMap::dense(matrix(rng, rows, n))
                    })
                    .collect(),
            )
            .unwrap()
        }
        MapShape::ColumnSum => {
            let pieces = rng.random_range(2..=3);
            LinearMap::column_sum(
                (0..pieces)
                    .map(|_| {
                        let cols = rng.random_range(1..=max_domain.div_ceil(pieces));
                        LinearMap::dense(matrix(rng, m, cols))
                    })
                    .collect(),
            )
            .unwrap()
        }
    }
}
