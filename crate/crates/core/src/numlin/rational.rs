//! Exact rational backend: a zero-tolerance oracle for rank filtrations and
//! characteristic polynomials.
//!
//! Every finite f64 is a dyadic rational, so any real-valued matrix converts
//! exactly; complex-valued matrices have no rational form here and callers
//! fall back to the floating path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::ComplexMatrix;
use super::NumlinError;

/// Square matrix over exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, NumlinError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(NumlinError::DimensionMismatch(
                "rational matrix must be square and nonempty".into(),
            ));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Exact conversion; `None` when any entry has a nonzero imaginary part
    /// or is not finite.
    pub fn from_complex(a: &ComplexMatrix) -> Option<Self> {
        if !a.is_square() {
            return None;
        }
        let n = a.n_rows();
        let mut entries = Vec::with_capacity(n * n);
        for z in a.entries() {
            if z.im != 0.0 || !z.re.is_finite() {
                return None;
            }
            entries.push(BigRational::from_float(z.re)?);
        }
        Some(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        Self { n, entries }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, NumlinError> {
        if self.n != other.n {
            return Err(NumlinError::DimensionMismatch(format!(
                "rational mul {} vs {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).map(|i| self.at(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact rank by fraction-preserving Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            if row == n {
                break;
            }
            let pivot_row = (row..n).find(|&r| !m[r][col].is_zero());
            let pr = match pivot_row {
                Some(pr) => pr,
                None => continue,
            };
            m.swap(row, pr);
            let pivot = m[row][col].clone();
            for r in row + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &pivot;
                for j in col..n {
                    let sub = &factor * &m[row][j];
                    m[r][j] -= sub;
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }

    fn add_scaled_identity(&self, s: &BigRational) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.entries[i * self.n + i] += s;
        }
        out
    }
}

/// Exact ranks of successive powers `a^k`, k = 1..n. No tolerance involved.
pub fn exact_rank_filtration(a: &RationalMatrix) -> Vec<usize> {
    let n = a.n();
    let mut filtration = Vec::with_capacity(n);
    let mut p = a.clone();
    for k in 1..=n {
        filtration.push(p.rank());
        if k < n {
            // a zero power stays zero; skip the multiply
            if p.is_zero() {
                for _ in k + 1..=n {
                    filtration.push(0);
                }
                break;
            }
            p = p.mul(a).expect("same size");
        }
    }
    filtration
}

/// Exact monic characteristic polynomial (ascending coefficients, degree n)
/// via the same trace recursion as the floating path, carried out over
/// rationals where it is exact.
pub fn exact_char_poly(a: &RationalMatrix) -> Vec<BigRational> {
    let n = a.n();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = a.clone();
    let mut c = -m.trace();
    coeffs[n - 1] = c.clone();
    for k in 2..=n {
        m = a.mul(&m.add_scaled_identity(&c)).expect("same size");
        c = -m.trace() / BigRational::from_integer(BigInt::from(k));
        coeffs[n - k] = c.clone();
    }
    coeffs
}

/// Convenience: compare an exact coefficient against a float within `tol`.
pub fn rational_close_to(r: &BigRational, x: f64, tol: f64) -> bool {
    match BigRational::from_float(x) {
        Some(xf) => {
            let diff = r - xf;
            // |diff| <= tol, compared exactly
            match BigRational::from_float(tol) {
                Some(t) => diff.abs() <= t,
                None => false,
            }
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn shift(n: usize) -> RationalMatrix {
        RationalMatrix::from_complex(&ComplexMatrix::jordan_block(n, Complex64::new(0.0, 0.0)))
            .unwrap()
    }

    #[test]
    fn filtration_of_shift_descends_to_zero() {
        assert_eq!(exact_rank_filtration(&shift(5)), vec![4, 3, 2, 1, 0]);
    }

    #[test]
    fn zero_matrix_filtration() {
        let z = RationalMatrix::from_complex(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(exact_rank_filtration(&z), vec![0, 0, 0]);
    }

    #[test]
    fn dyadic_disorder_converts_exactly() {
        // arbitrary f64 couplings are dyadic rationals
        let mut m = ComplexMatrix::zeros(3, 3);
        m[(0, 1)] = Complex64::new(0.3, 0.0);
        m[(1, 2)] = Complex64::new(-1.27, 0.0);
        let r = RationalMatrix::from_complex(&m).unwrap();
        assert_eq!(exact_rank_filtration(&r), vec![2, 1, 0]);
    }

    #[test]
    fn complex_entries_have_no_rational_form() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(RationalMatrix::from_complex(&m).is_none());
    }

    #[test]
    fn exact_char_poly_of_cyclic_shift() {
        let mut m = ComplexMatrix::jordan_block(4, Complex64::new(0.0, 0.0));
        m[(3, 0)] = Complex64::new(1.0, 0.0);
        let r = RationalMatrix::from_complex(&m).unwrap();
        let cp = exact_char_poly(&r);
        assert_eq!(cp[0], -BigRational::one());
        assert!(cp[1].is_zero() && cp[2].is_zero() && cp[3].is_zero());
        assert_eq!(cp[4], BigRational::one());
    }
}
