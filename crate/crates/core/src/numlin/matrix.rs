//! Row-major dense complex matrices and the small set of vector helpers the
//! rest of the crate leans on.

use num_complex::Complex64;

use super::NumlinError;

/// Scalar field of all amplitudes and eigenvalues.
pub type Complex = Complex64;

/// A state vector / eigenvector; the dimension is the length.
pub type ComplexVector = Vec<Complex64>;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from a row-major entry buffer. Rejects non-finite entries and
    /// length mismatches.
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, NumlinError> {
        if n_rows == 0 || n_cols == 0 || data.len() != n_rows * n_cols {
            return Err(NumlinError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                n_rows,
                n_cols,
                n_rows * n_cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(NumlinError::NonFinite);
        }
        Ok(Self { n_rows, n_cols, data })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Entry-wise constructor, row index first.
    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Jordan block of the given size and eigenvalue: `value` on the
    /// diagonal, ones on the superdiagonal, zeros elsewhere.
    pub fn jordan_block(n: usize, value: Complex64) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                value
            } else if j == i + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn col(&self, j: usize) -> ComplexVector {
        (0..self.n_rows).map(|i| self[(i, j)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n_rows.min(self.n_cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].conj())
    }

    /// Largest entry magnitude; 0 for the zero matrix.
    pub fn max_entry_magnitude(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Matrix infinity norm (maximum absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.n_rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, NumlinError> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(NumlinError::DimensionMismatch(format!(
                "add {}x{} vs {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, NumlinError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Shift the diagonal: `self + s * I`.
    pub fn add_scaled_identity(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n_rows.min(self.n_cols) {
            m[(i, i)] += s;
        }
        m
    }

    /// Standard matrix product.
    pub fn mat_mul(&self, other: &Self) -> Result<Self, NumlinError> {
        if self.n_cols != other.n_rows {
            return Err(NumlinError::DimensionMismatch(format!(
                "mat_mul {}x{} vs {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = Self::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.n_cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `self^k`, with `self^0 = I`. Square matrices only.
    pub fn pow(&self, k: usize) -> Result<Self, NumlinError> {
        if !self.is_square() {
            return Err(NumlinError::DimensionMismatch("pow needs a square matrix".into()));
        }
        let mut out = Self::identity(self.n_rows);
        for _ in 0..k {
            out = out.mat_mul(self)?;
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mat_vec(&self, v: &[Complex64]) -> Result<ComplexVector, NumlinError> {
        if v.len() != self.n_cols {
            return Err(NumlinError::DimensionMismatch(format!(
                "mat_vec {}x{} vs vector of length {}",
                self.n_rows,
                self.n_cols,
                v.len()
            )));
        }
        Ok((0..self.n_rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum::<Complex64>()
            })
            .collect())
    }

    /// Entry-wise comparison within an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n_rows == other.n_rows
            && self.n_cols == other.n_cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Whether the matrix equals its conjugate transpose within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.approx_eq(&self.conj_transpose(), tol)
    }

    /// True when every entry strictly below (or on) the diagonal is zero.
    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.is_square()
            && (0..self.n_rows).all(|i| {
                (0..=i.min(self.n_cols - 1)).all(|j| {
                    let z = self[(i, j)];
                    z.re == 0.0 && z.im == 0.0
                })
            })
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Euclidean norm of a vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum component magnitude.
pub fn vec_inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian inner product `<a, b>` (conjugate-linear in `a`).
pub fn vec_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_sub(a: &[Complex64], b: &[Complex64]) -> ComplexVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_approx_eq(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

/// Scale a vector by a unit-modulus factor so its lowest-index nonzero entry
/// becomes real and positive. Entries below `1e-12 * ||v||_inf` are treated
/// as zero when locating that entry. The zero vector is returned unchanged.
pub fn canonicalize(v: &[Complex64]) -> ComplexVector {
    let scale = vec_inf_norm(v);
    if scale == 0.0 {
        return v.to_vec();
    }
    let thresh = 1e-12 * scale;
    let lead = match v.iter().find(|z| z.norm() > thresh) {
        Some(z) => *z,
        None => return v.to_vec(),
    };
    let phase = lead.conj() / lead.norm();
    v.iter().map(|z| z * phase).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, j as f64));
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i3.mat_mul(&a).unwrap(), a);
        assert_eq!(a.mat_mul(&i3).unwrap(), a);
    }

    #[test]
    fn shift_composition_and_nilpotency() {
        // H1(3): ones on the superdiagonal.
        let h = ComplexMatrix::jordan_block(3, c(0.0, 0.0));
        let h2 = h.mat_mul(&h).unwrap();
        let mut expect = ComplexMatrix::zeros(3, 3);
        expect[(0, 2)] = c(1.0, 0.0);
        assert_eq!(h2, expect);
        let h3 = h2.mat_mul(&h).unwrap();
        assert_eq!(h3, ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            a.mat_mul(&b),
            Err(NumlinError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let bad = vec![c(1.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            ComplexMatrix::from_entries(2, 2, bad),
            Err(NumlinError::NonFinite)
        ));
    }

    #[test]
    fn canonicalize_makes_leading_entry_real_positive() {
        let v = vec![c(0.0, 0.0), c(0.0, -2.0), c(1.0, 1.0)];
        let w = canonicalize(&v);
        assert!(w[1].re > 0.0 && w[1].im.abs() < 1e-15);
        // unit-modulus scaling preserves norms
        assert!((vec_norm(&w) - vec_norm(&v)).abs() < 1e-12);
    }

    #[test]
    fn inf_norm_is_max_row_sum() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c((i + j) as f64, 0.0));
        // rows sums: 0+1, 1+2
        assert_eq!(a.inf_norm(), 3.0);
    }
}
