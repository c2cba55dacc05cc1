//! Eigendecomposition by characteristic polynomial plus root clustering.
//!
//! Geometric multiplicity can be smaller than algebraic multiplicity — that
//! deficiency is exactly the exceptional-point signature this crate exists
//! to detect, so no attempt is made to "complete" the eigenvector lists.

use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{ComplexMatrix, ComplexVector};
use super::poly::{char_poly, poly_roots};
use super::solve::null_space;
use super::{NumlinError, DEFAULT_ROOT_MAX_ITER, DEFAULT_ROOT_TOL, ROOT_CLUSTER_TOL};

/// One clustered eigenvalue with its algebraic multiplicity and the
/// right eigenvectors found for it.
#[derive(Clone, Debug, Serialize)]
pub struct EigPair {
    pub value: Complex64,
    pub multiplicity: usize,
    pub vectors: Vec<ComplexVector>,
}

/// Eigenvalues and right eigenvectors of a square matrix (n ≤ 16).
///
/// Roots of the characteristic polynomial within [`ROOT_CLUSTER_TOL`] of each
/// other merge into one eigenvalue (centroid, summed multiplicity);
/// eigenvectors come from `null_space(a - λI, tol)`. Results are sorted by
/// real part, then imaginary part.
pub fn eig(a: &ComplexMatrix, tol: f64) -> Result<Vec<EigPair>, NumlinError> {
    let coeffs = char_poly(a)?;
    let roots = poly_roots(&coeffs, DEFAULT_ROOT_TOL, DEFAULT_ROOT_MAX_ITER)?;
    let clusters = cluster(&roots, ROOT_CLUSTER_TOL);
    let mut out = Vec::with_capacity(clusters.len());
    for (value, multiplicity) in clusters {
        let shifted = a.add_scaled_identity(-value);
        let vectors = null_space(&shifted, tol);
        out.push(EigPair { value, multiplicity, vectors });
    }
    Ok(out)
}

/// Greedy union of points within `radius` of each other (transitively);
/// returns (centroid, size) per cluster sorted by (re, im).
fn cluster(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut clusters: Vec<(Complex64, usize)> = groups
        .values()
        .map(|idxs| {
            let sum: Complex64 = idxs.iter().map(|&i| points[i]).sum();
            (sum / idxs.len() as f64, idxs.len())
        })
        .collect();
    clusters.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    clusters
}
