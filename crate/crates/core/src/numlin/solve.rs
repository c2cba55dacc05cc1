//! Gaussian elimination with partial pivoting: rank, null spaces, linear
//! solves and subspace angles.

use num_complex::Complex64;

use super::matrix::{canonicalize, vec_inner, ComplexMatrix, ComplexVector};
use super::NumlinError;

/// Reduced row echelon form. Pivots smaller in magnitude than
/// `rel_tol * max_entry_magnitude(original)` are treated as zero.
/// Returns the reduced matrix and the pivot column indices in order.
fn rref(a: &ComplexMatrix, rel_tol: f64) -> (ComplexMatrix, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.n_rows(), m.n_cols());
    let thresh = rel_tol * a.max_entry_magnitude();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        // partial pivoting by magnitude
        let (best_row, best_mag) = (row..rows)
            .map(|r| (r, m[(r, col)].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best_mag <= thresh {
            continue;
        }
        if best_row != row {
            for j in 0..cols {
                let tmp = m[(row, j)];
                m[(row, j)] = m[(best_row, j)];
                m[(best_row, j)] = tmp;
            }
        }
        let inv = Complex64::new(1.0, 0.0) / m[(row, col)];
        for j in col..cols {
            m[(row, j)] = m[(row, j)] * inv;
        }
        m[(row, col)] = Complex64::new(1.0, 0.0);
        for r in 0..rows {
            if r == row {
                continue;
            }
            let factor = m[(r, col)];
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in col..cols {
                let sub = factor * m[(row, j)];
                m[(r, j)] -= sub;
            }
            m[(r, col)] = Complex64::new(0.0, 0.0);
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Number of pivots in a row-echelon reduction with partial pivoting.
/// A pivot counts if its magnitude exceeds `tol * max_entry_magnitude(a)`;
/// the zero matrix has rank 0.
pub fn rank(a: &ComplexMatrix, tol: f64) -> usize {
    rref(a, tol).1.len()
}

/// Orthonormal, canonicalized basis of `{v : a v ~ 0}`. Basis vectors are
/// orthonormalized (modified Gram-Schmidt over the raw kernel basis) and
/// then scaled so the lowest-index nonzero entry is real and positive.
/// Empty when the kernel is trivial.
pub fn null_space(a: &ComplexMatrix, tol: f64) -> Vec<ComplexVector> {
    let (r, pivots) = rref(a, tol);
    let cols = a.n_cols();
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; cols];
        for &c in &pivots {
            s[c] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set[*c]) {
        let mut v = vec![Complex64::new(0.0, 0.0); cols];
        v[free] = Complex64::new(1.0, 0.0);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(row, free)];
        }
        basis.push(v);
    }
    // modified Gram-Schmidt; raw vectors are independent by construction
    let mut ortho: Vec<ComplexVector> = Vec::with_capacity(basis.len());
    for mut v in basis {
        for q in &ortho {
            let proj = vec_inner(q, &v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let n = super::matrix::vec_norm(&v);
        if n > 0.0 {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            ortho.push(v);
        }
    }
    ortho.into_iter().map(|v| canonicalize(&v)).collect()
}

/// LU-based linear solve `a x = b` with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<ComplexVector, NumlinError> {
    if !a.is_square() {
        return Err(NumlinError::DimensionMismatch("solve needs a square matrix".into()));
    }
    let n = a.n_rows();
    if b.len() != n {
        return Err(NumlinError::DimensionMismatch(format!(
            "solve: matrix is {0}x{0}, rhs has length {1}",
            n,
            b.len()
        )));
    }
    let mut m = a.clone();
    let mut x: ComplexVector = b.to_vec();
    for col in 0..n {
        let (best_row, best_mag) = (col..n)
            .map(|r| (r, m[(r, col)].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if best_mag == 0.0 {
            return Err(NumlinError::Singular);
        }
        if best_row != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(best_row, j)];
                m[(best_row, j)] = tmp;
            }
            x.swap(col, best_row);
        }
        for r in col + 1..n {
            let factor = m[(r, col)] / m[(col, col)];
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in col..n {
                let sub = factor * m[(col, j)];
                m[(r, j)] -= sub;
            }
            let sub = factor * x[col];
            x[r] -= sub;
        }
    }
    for row in (0..n).rev() {
        let mut acc = x[row];
        for j in row + 1..n {
            acc -= m[(row, j)] * x[j];
        }
        x[row] = acc / m[(row, row)];
    }
    Ok(x)
}

/// Explicit inverse via column-wise solves.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix, NumlinError> {
    if !a.is_square() {
        return Err(NumlinError::DimensionMismatch("inverse needs a square matrix".into()));
    }
    let n = a.n_rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[j] = Complex64::new(1.0, 0.0);
        let col = solve(a, &e)?;
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    Ok(out)
}

/// Principal angles (radians, ascending) between the spans of two vector
/// families living in the same ambient space. Each family is orthonormalized
/// first; the angles come from the singular values of `U^H V`, obtained as
/// eigenvalues of the small Hermitian Gram matrix.
pub fn principal_angles(
    u: &[ComplexVector],
    v: &[ComplexVector],
) -> Result<Vec<f64>, NumlinError> {
    let ou = orthonormalize(u);
    let ov = orthonormalize(v);
    if ou.is_empty() || ov.is_empty() {
        return Ok(Vec::new());
    }
    let (small, large) = if ou.len() <= ov.len() { (&ou, &ov) } else { (&ov, &ou) };
    let p = small.len();
    // W[i][j] = <small_i, large_j>; M = W W^H is p x p Hermitian PSD with
    // eigenvalues cos^2(theta_i).
    let mut m = ComplexMatrix::zeros(p, p);
    for i in 0..p {
        for j in 0..p {
            let mut acc = Complex64::new(0.0, 0.0);
            for w in large.iter() {
                acc += vec_inner(&small[i], w) * vec_inner(w, &small[j]);
            }
            m[(i, j)] = acc;
        }
    }
    let pairs = super::eig::eig(&m, super::DEFAULT_RANK_TOL)?;
    let mut cos2: Vec<f64> = Vec::new();
    for pair in pairs {
        for _ in 0..pair.multiplicity {
            cos2.push(pair.value.re.clamp(0.0, 1.0));
        }
    }
    // eig returns one entry per algebraic multiplicity; pad defensively
    while cos2.len() < p {
        cos2.push(0.0);
    }
    let mut angles: Vec<f64> = cos2.iter().map(|c| c.sqrt().clamp(0.0, 1.0).acos()).collect();
    angles.sort_by(f64::total_cmp);
    angles.truncate(p);
    Ok(angles)
}

fn orthonormalize(vs: &[ComplexVector]) -> Vec<ComplexVector> {
    let mut ortho: Vec<ComplexVector> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for q in &ortho {
            let proj = vec_inner(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= proj * qi;
            }
        }
        let n = super::matrix::vec_norm(&w);
        if n > 1e-12 {
            for wi in w.iter_mut() {
                *wi /= n;
            }
            ortho.push(w);
        }
    }
    ortho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::DEFAULT_RANK_TOL;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn h1(n: usize) -> ComplexMatrix {
        ComplexMatrix::jordan_block(n, c(0.0, 0.0))
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(rank(&ComplexMatrix::zeros(4, 4), DEFAULT_RANK_TOL), 0);
    }

    #[test]
    fn shift_matrix_rank_drops_by_one_per_power() {
        let h = h1(10);
        for k in 1..=10 {
            let p = h.pow(k).unwrap();
            assert_eq!(rank(&p, DEFAULT_RANK_TOL), 10 - k, "k = {k}");
        }
    }

    #[test]
    fn kernel_of_shift_is_first_basis_vector() {
        let ns = null_space(&h1(10), DEFAULT_RANK_TOL);
        assert_eq!(ns.len(), 1);
        assert!((ns[0][0] - c(1.0, 0.0)).norm() < 1e-14);
        for z in &ns[0][1..] {
            assert!(z.norm() < 1e-14);
        }
        // transpose localizes at the other edge
        let ns2 = null_space(&h1(10).transpose(), DEFAULT_RANK_TOL);
        assert_eq!(ns2.len(), 1);
        assert!((ns2[0][9] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        // random-ish dense singular matrix: two equal columns
        let mut a = ComplexMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64, (j as f64) - 1.0));
        for i in 0..4 {
            a[(i, 2)] = a[(i, 1)];
        }
        let ns = null_space(&a, DEFAULT_RANK_TOL);
        assert!(!ns.is_empty());
        for v in &ns {
            let r = a.mat_vec(v).unwrap();
            assert!(
                crate::numlin::vec_inf_norm(&r) < 1e-10 * (1.0 + a.inf_norm()),
                "kernel residual too large"
            );
        }
    }

    #[test]
    fn solve_round_trips() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| {
            c(1.0 + (i * j) as f64, if i == j { 0.5 } else { -0.25 })
        });
        let x_true = vec![c(1.0, -1.0), c(0.0, 2.0), c(-3.0, 0.5)];
        let b = a.mat_vec(&x_true).unwrap();
        let x = solve(&a, &b).unwrap();
        assert!(crate::numlin::vec_approx_eq(&x, &x_true, 1e-10));
        let inv = inverse(&a).unwrap();
        assert!(inv
            .mat_mul(&a)
            .unwrap()
            .approx_eq(&ComplexMatrix::identity(3), 1e-10));
    }

    #[test]
    fn singular_solve_is_an_error() {
        let a = ComplexMatrix::zeros(3, 3);
        assert!(matches!(
            solve(&a, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            Err(NumlinError::Singular)
        ));
    }

    #[test]
    fn principal_angles_detect_equality_and_orthogonality() {
        let e = |k: usize| -> ComplexVector {
            let mut v = vec![c(0.0, 0.0); 4];
            v[k] = c(1.0, 0.0);
            v
        };
        let a = principal_angles(&[e(0), e(1)], &[e(1), e(0)]).unwrap();
        assert!(a.iter().all(|t| *t < 1e-8));
        let b = principal_angles(&[e(0)], &[e(1)]).unwrap();
        assert!((b[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
        // 45 degrees
        let diag = vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let g = principal_angles(&[e(0)], &[diag]).unwrap();
        assert!((g[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-8);
    }
}
