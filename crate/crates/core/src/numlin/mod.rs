//! Dense complex linear algebra sufficient for every analysis at desk scale
//! (n ≤ 32 for power/rank work, n ≤ 16 for full spectra).
//!
//! Everything here is a pure function of its inputs; values are freely
//! shareable across threads.

mod eig;
mod io;
mod matrix;
mod poly;
mod rational;
mod solve;

pub use eig::{eig, EigPair};
pub use io::{parse_matrix, write_matrix};
pub use matrix::{
    canonicalize, vec_approx_eq, vec_inf_norm, vec_inner, vec_norm, vec_sub, Complex,
    ComplexMatrix, ComplexVector,
};
pub use poly::{char_poly, poly_eval, poly_from_roots, poly_roots};
pub use rational::{exact_char_poly, exact_rank_filtration, RationalMatrix};
pub use solve::{inverse, null_space, principal_angles, rank, solve};

use num_complex::Complex64;

/// Relative pivot threshold for rank / null-space decisions: a pivot counts
/// if its magnitude exceeds `tol * max_entry_magnitude`. All spectra of
/// interest here are O(1) and well separated at desk scale.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Residual bound for polynomial roots: `|p(root)| < tol * (1 + max |coeff|)`.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

/// Iteration cap for the simultaneous root iteration. Clustered roots of
/// multiplicity m contract only like (1 - 1/m) per sweep, so this is sized
/// for multiplicity up to 16 rather than for simple roots.
pub const DEFAULT_ROOT_MAX_ITER: usize = 2000;

/// Roots closer than this merge into a single eigenvalue with summed
/// multiplicity; nilpotent spectra produce a numerical cloud around 0.
pub const ROOT_CLUSTER_TOL: f64 = 1e-6;

/// Spectral operations (characteristic polynomial, eigendecomposition) are
/// capped at this size; the recursion used for coefficients is unstable
/// beyond it.
pub const SPECTRAL_SIZE_CAP: usize = 16;

/// Rank-filtration and power-based checks are allowed up to this size.
pub const POWER_SIZE_CAP: usize = 32;

/// Errors produced by the linear-algebra layer.
#[derive(Debug, thiserror::Error)]
pub enum NumlinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix entries must be finite (no NaN/Inf)")]
    NonFinite,
    #[error("operation capped at n = {cap}, got n = {n}")]
    UnsupportedSize { n: usize, cap: usize },
    #[error("polynomial must be monic of degree >= 1")]
    InvalidPolynomial,
    #[error("root iteration did not converge after {iters} sweeps (worst residual {residual:.3e})")]
    RootsNotConverged {
        iters: usize,
        residual: f64,
        /// Best iterate found, in case the caller wants to inspect it.
        best: Vec<Complex64>,
    },
    #[error("singular matrix")]
    Singular,
    #[error("matrix parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("entries are not exactly representable as rationals")]
    NotRational,
}
