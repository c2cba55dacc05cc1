//! Certification of order-N exceptional points: nilpotency tests, rank
//! filtrations, Jordan chains and the similarity transform, and adiabatic
//! equivalence along parameter paths.

use num_complex::Complex64;
use serde::Serialize;

use crate::numlin::{
    inverse, null_space, rank, ComplexMatrix, ComplexVector, NumlinError, DEFAULT_RANK_TOL,
    POWER_SIZE_CAP,
};

/// Norm-based nilpotency threshold: `||H^p||_inf < tol * (1 + ||H||_inf)^p`.
/// Floating powers of non-normal matrices can transiently grow, hence the
/// power-dependent scaling.
pub const DEFAULT_NILPOTENCY_TOL: f64 = 1e-12;

/// Jordan-chain verification bound on `||S^-1 H S - J||_inf`.
pub const DEFAULT_CHAIN_TOL: f64 = 1e-8;

/// Condition estimate above which a chain result carries a warning.
pub const ILL_CONDITION_BOUND: f64 = 1e12;

#[derive(Debug, thiserror::Error)]
pub enum EpnError {
    #[error("matrix must be square")]
    NotSquare,
    #[error("EPN checks capped at n = {cap}, got n = {n}")]
    TooLarge { n: usize, cap: usize },
    #[error("matrix is not an order-N exceptional point (rank filtration {filtration:?})")]
    NotEpn { filtration: Vec<usize> },
    #[error("jordan chain verification failed: residual {residual:.3e} exceeds {tol:.3e}")]
    ChainVerification { residual: f64, tol: f64 },
    #[error("parameter grid must be nonempty and sorted ascending")]
    BadGrid,
    #[error(transparent)]
    Numlin(#[from] NumlinError),
    #[error("family evaluation failed: {0}")]
    Family(String),
}

/// Full exceptional-point report for one matrix.
#[derive(Clone, Debug, Serialize)]
pub struct EPReport {
    pub n: usize,
    /// Smallest k with `rank(H^k) = 0`, if any. Derived from the rank
    /// filtration (relative pivot tolerance) rather than the norm test, so
    /// tiny coupling products cannot fake an early zero power.
    pub nilpotency_index: Option<usize>,
    /// `rank(H^k)` for k = 1..n.
    pub rank_filtration: Vec<usize>,
    /// Canonicalized kernel basis.
    pub kernel: Vec<ComplexVector>,
    /// True iff the filtration is (n-1, n-2, ..., 0).
    pub is_epn: bool,
    /// Jordan eigenvalue certified by the nilpotent route (always 0 here).
    pub jordan_value: Complex64,
    /// Acyclicity of the nonzero-entry digraph; authoritative for lattices
    /// whose couplings are structurally one-directional.
    pub structural_nilpotent: bool,
}

/// Jordan chain `v_1..v_n` with `H v_1 = 0`, `H v_k = v_{k-1}`, assembled
/// into the similarity transform `S = [v_1 ... v_n]`.
#[derive(Clone, Debug, Serialize)]
pub struct JordanChain {
    pub vectors: Vec<ComplexVector>,
    pub similarity: Vec<ComplexVector>,
    /// `||S^-1 H S - J||_inf` actually achieved.
    pub residual: f64,
    /// `||S||_inf ||S^-1||_inf`.
    pub condition_estimate: f64,
    /// Set when the condition estimate exceeds [`ILL_CONDITION_BOUND`].
    pub ill_conditioned: bool,
}

/// Per-sample EPN verdicts along a parameter path.
#[derive(Clone, Debug, Serialize)]
pub struct PathVerdict {
    pub samples: Vec<(f64, bool)>,
    pub path_equivalent: bool,
    pub first_failure: Option<f64>,
}

/// Whether the digraph of nonzero entries is acyclic (edge `j -> i` for each
/// nonzero `H[i][j]`). Acyclic support forces nilpotency regardless of the
/// coupling values.
pub fn structural_nilpotent(h: &ComplexMatrix) -> bool {
    if !h.is_square() {
        return false;
    }
    let n = h.n_rows();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| {
                    let z = h[(i, j)];
                    z.re != 0.0 || z.im != 0.0
                })
                .collect()
        })
        .collect();
    // colors: 0 unvisited, 1 on stack, 2 done
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(top) = stack.last_mut() {
            let (node, cursor) = *top;
            if cursor < adjacency[node].len() {
                top.1 += 1;
                let next = adjacency[node][cursor];
                match color[next] {
                    1 => return false, // back edge: cycle
                    0 => {
                        color[next] = 1;
                        stack.push((next, 0));
                    }
                    _ => {}
                }
            } else {
                color[node] = 2;
                stack.pop();
            }
        }
    }
    true
}

/// Smallest p (p ≤ n) with `||H^p||_inf < tol * (1 + ||H||_inf)^p`, or `None`
/// if no power qualifies. Capped at n = 32.
pub fn nilpotency_index(h: &ComplexMatrix, tol: f64) -> Result<Option<usize>, EpnError> {
    if !h.is_square() {
        return Err(EpnError::NotSquare);
    }
    let n = h.n_rows();
    if n > POWER_SIZE_CAP {
        return Err(EpnError::TooLarge { n, cap: POWER_SIZE_CAP });
    }
    let base = 1.0 + h.inf_norm();
    let mut power = h.clone();
    let mut scale = base;
    for p in 1..=n {
        if power.inf_norm() < tol * scale {
            return Ok(Some(p));
        }
        if p < n {
            power = power.mat_mul(h)?;
            scale *= base;
        }
    }
    Ok(None)
}

/// Rank filtration `rank(H^k)`, k = 1..n, each rank taken with the pivot
/// threshold relative to that power's own largest entry.
pub fn rank_filtration(h: &ComplexMatrix, tol: f64) -> Result<Vec<usize>, EpnError> {
    if !h.is_square() {
        return Err(EpnError::NotSquare);
    }
    let n = h.n_rows();
    if n > POWER_SIZE_CAP {
        return Err(EpnError::TooLarge { n, cap: POWER_SIZE_CAP });
    }
    let mut filtration = Vec::with_capacity(n);
    let mut power = h.clone();
    for k in 1..=n {
        filtration.push(rank(&power, tol));
        if k < n {
            power = power.mat_mul(h)?;
        }
    }
    Ok(filtration)
}

/// Does the filtration certify one size-n Jordan block of value 0?
fn filtration_is_epn(filtration: &[usize]) -> bool {
    let n = filtration.len();
    filtration.iter().enumerate().all(|(i, &r)| r == n - (i + 1))
}

/// Full EPN report: rank filtration, kernel, structural test.
pub fn epn_check(h: &ComplexMatrix, tol: f64) -> Result<EPReport, EpnError> {
    let filtration = rank_filtration(h, tol)?;
    let n = h.n_rows();
    let kernel = null_space(h, tol);
    let nilpotency_index = filtration
        .iter()
        .position(|&r| r == 0)
        .map(|i| i + 1);
    Ok(EPReport {
        n,
        nilpotency_index,
        rank_filtration: filtration.clone(),
        kernel,
        is_epn: filtration_is_epn(&filtration),
        jordan_value: Complex64::new(0.0, 0.0),
        structural_nilpotent: structural_nilpotent(h),
    })
}

/// Build the Jordan chain and similarity transform for an EPN-certified
/// matrix. The chain seed `v_n` is the standard basis vector maximizing
/// `||H^{n-1} e_j||` (smallest j on ties), then `v_k = H^{n-k} v_n`.
pub fn jordan_chain(h: &ComplexMatrix, tol: f64) -> Result<JordanChain, EpnError> {
    let report = epn_check(h, DEFAULT_RANK_TOL)?;
    if !report.is_epn {
        return Err(EpnError::NotEpn { filtration: report.rank_filtration });
    }
    let n = h.n_rows();
    let top = h.pow(n - 1)?;
    let seed_col = (0..n)
        .map(|j| crate::numlin::vec_norm(&top.col(j)))
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(j, _)| j)
        .unwrap_or(n - 1);

    let mut chain_rev: Vec<ComplexVector> = Vec::with_capacity(n);
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[seed_col] = Complex64::new(1.0, 0.0);
    chain_rev.push(v.clone());
    for _ in 1..n {
        v = h.mat_vec(&v)?;
        chain_rev.push(v.clone());
    }
    chain_rev.reverse(); // now v_1..v_n with v_1 = H^{n-1} v_n

    let mut s = ComplexMatrix::zeros(n, n);
    for (k, vk) in chain_rev.iter().enumerate() {
        for i in 0..n {
            s[(i, k)] = vk[i];
        }
    }
    let s_inv = inverse(&s).map_err(EpnError::Numlin)?;
    let jordan = ComplexMatrix::jordan_block(n, Complex64::new(0.0, 0.0));
    let transformed = s_inv.mat_mul(&h.mat_mul(&s)?)?;
    let residual = transformed.sub(&jordan)?.inf_norm();
    if residual >= tol {
        return Err(EpnError::ChainVerification { residual, tol });
    }
    let condition_estimate = s.inf_norm() * s_inv.inf_norm();
    Ok(JordanChain {
        vectors: chain_rev,
        similarity: (0..n).map(|j| s.col(j)).collect(),
        residual,
        condition_estimate,
        ill_conditioned: condition_estimate > ILL_CONDITION_BOUND,
    })
}

/// Sample a parameter family on a sorted grid and collect per-sample EPN
/// verdicts. A failing path only means "not equivalent along this path";
/// no claim is made about other deformations.
pub fn adiabatic_path_check<F>(
    family_at: F,
    grid: &[f64],
    tol: f64,
) -> Result<PathVerdict, EpnError>
where
    F: Fn(f64) -> Result<ComplexMatrix, String>,
{
    if grid.is_empty() || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(EpnError::BadGrid);
    }
    let mut samples = Vec::with_capacity(grid.len());
    let mut first_failure = None;
    for &p in grid {
        let h = family_at(p).map_err(EpnError::Family)?;
        let ok = epn_check(&h, tol)?.is_epn;
        if !ok && first_failure.is_none() {
            first_failure = Some(p);
        }
        samples.push((p, ok));
    }
    Ok(PathVerdict {
        path_equivalent: first_failure.is_none(),
        samples,
        first_failure,
    })
}

/// Uniform grid helper: `points` samples covering [lo, hi] inclusive.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    (0..points)
        .map(|k| lo + (hi - lo) * (k as f64) / ((points - 1) as f64))
        .collect()
}
