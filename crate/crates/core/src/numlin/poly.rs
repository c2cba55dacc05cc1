//! Characteristic polynomials (Faddeev–LeVerrier) and simultaneous root
//! iteration (Durand–Kerner).
//!
//! Polynomials are coefficient vectors in ascending order,
//! `p(z) = c[0] + c[1] z + ... + c[n] z^n`, and are kept monic (`c[n] = 1`).

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::{NumlinError, SPECTRAL_SIZE_CAP};

/// Monic characteristic polynomial coefficients of a square matrix, ascending
/// order, degree n. Uses the Faddeev–LeVerrier recursion, which is exact for
/// integer matrices at desk scale but unstable for large n; sizes above
/// [`SPECTRAL_SIZE_CAP`] are rejected.
pub fn char_poly(a: &ComplexMatrix) -> Result<Vec<Complex64>, NumlinError> {
    if !a.is_square() {
        return Err(NumlinError::DimensionMismatch(
            "char_poly needs a square matrix".into(),
        ));
    }
    let n = a.n_rows();
    if n > SPECTRAL_SIZE_CAP {
        return Err(NumlinError::UnsupportedSize { n, cap: SPECTRAL_SIZE_CAP });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut m = a.clone();
    let mut c = -m.trace();
    coeffs[n - 1] = c;
    for k in 2..=n {
        m = a.mat_mul(&m.add_scaled_identity(c))?;
        c = -m.trace() / (k as f64);
        coeffs[n - k] = c;
    }
    // normalize -0.0 so exact-zero coefficients compare and print cleanly
    for z in coeffs.iter_mut() {
        z.re += 0.0;
        z.im += 0.0;
    }
    Ok(coeffs)
}

/// Horner evaluation.
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Expand the monic polynomial with the given roots (ascending coefficients).
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        coeffs = multiply_linear(&coeffs, *r);
    }
    coeffs
}

// multiply by (z - root): out[k] = p[k-1] - root * p[k]
fn multiply_linear(p: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= root * c;
    }
    out
}

/// All roots of a monic polynomial via Durand–Kerner simultaneous iteration.
///
/// Exact-zero trailing coefficients are deflated first: they contribute roots
/// at exactly 0 (nilpotent spectra hit this path and come out exact instead
/// of as a slowly-converging cloud). The iteration stops once a full sweep
/// moves no point by more than `1e-14 * (1 + root bound)`; the returned roots
/// always satisfy `|p(root)| < tol * (1 + max coefficient magnitude)`, else
/// an error carrying the best iterate is returned. Roots are sorted by real
/// part, then imaginary part.
pub fn poly_roots(
    coeffs: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<Complex64>, NumlinError> {
    if coeffs.len() < 2 {
        return Err(NumlinError::InvalidPolynomial);
    }
    let lead = coeffs[coeffs.len() - 1];
    if lead.norm() == 0.0 {
        return Err(NumlinError::InvalidPolynomial);
    }
    // tolerate a non-unit leading coefficient by normalizing
    let monic: Vec<Complex64> = if (lead - Complex64::new(1.0, 0.0)).norm() <= 1e-12 {
        coeffs.to_vec()
    } else {
        coeffs.iter().map(|c| c / lead).collect()
    };
    let max_coeff = monic
        .iter()
        .take(monic.len() - 1)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let residual_bound = tol * (1.0 + max_coeff);

    // deflate exact zero roots
    let zero_count = monic
        .iter()
        .take_while(|c| c.re == 0.0 && c.im == 0.0)
        .count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_count];
    let reduced = &monic[zero_count..];
    let degree = reduced.len() - 1;
    if degree == 0 {
        return Ok(roots);
    }

    let bound = 1.0 + reduced
        .iter()
        .take(degree)
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let step_tol = 1e-14 * bound;

    // classic staggered initial guesses, scaled to the root bound
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = Vec::with_capacity(degree);
    let mut g = Complex64::new(1.0, 0.0);
    for _ in 0..degree {
        g *= seed;
        z.push(g * bound);
    }

    let mut sweeps = 0;
    while sweeps < max_iter {
        sweeps += 1;
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let num = poly_eval(reduced, z[i]);
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 || !den.re.is_finite() || !den.im.is_finite() {
                // coincident iterates: nudge deterministically and retry next sweep
                z[i] += Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                max_step = f64::MAX;
                continue;
            }
            let step = num / den;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= step_tol {
            break;
        }
    }

    // step convergence is the usual exit; residuals are what the contract
    // promises, so gate on them regardless of how the loop ended
    let worst_residual = z
        .iter()
        .map(|r| poly_eval(reduced, *r).norm())
        .fold(0.0, f64::max);
    if worst_residual >= residual_bound {
        return Err(NumlinError::RootsNotConverged {
            iters: sweeps,
            residual: worst_residual,
            best: z,
        });
    }

    roots.extend(z);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}
