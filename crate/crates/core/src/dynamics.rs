//! Time evolution under `i d/dt psi = H(t) psi` by classical fourth-order
//! Runge–Kutta with per-step renormalization, plus the exact finite-series
//! propagator available whenever the generator is nilpotent.
//!
//! The state is renormalized every step and the growth folded into a
//! log-intensity ledger: state conversion drives polynomial intensity growth
//! like t^{2(N-1)}, which would overflow naive accumulation, while normalized
//! dynamics plus log bookkeeping is exactly equivalent for a linear equation.

use num_complex::Complex64;
use serde::Serialize;

use crate::epn::{nilpotency_index, DEFAULT_NILPOTENCY_TOL};
use crate::lattice::{HamiltonianFamily, LatticeError};
use crate::numlin::{vec_norm, ComplexMatrix, ComplexVector, NumlinError};

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),
    #[error("state became non-finite at t = {last_good_time} despite renormalization")]
    NonFiniteState { last_good_time: f64 },
    #[error("matrix is not nilpotent; exact propagator undefined")]
    NotNilpotent,
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Numlin(#[from] NumlinError),
    #[error("epn: {0}")]
    Epn(String),
}

/// Fixed-step integration plan. The default step is
/// `min(1e-2, t_max / 1e4)`; coupling magnitudes here are O(1) and stiffness
/// absent, so no adaptive stepping.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Snapshots are stored every this many steps (plus the initial state).
    pub snapshot_stride: usize,
    /// Unit-normalized at construction; fidelity is tracked against it.
    pub target_state: Option<ComplexVector>,
    /// Fixed true; kept as a field so configs echo their contract.
    pub renormalize_every_step: bool,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_max: f64, snapshot_stride: usize) -> Self {
        Self {
            dt,
            t_max,
            snapshot_stride,
            target_state: None,
            renormalize_every_step: true,
        }
    }

    pub fn default_dt(t_max: f64) -> f64 {
        (t_max / 1e4).min(1e-2)
    }

    pub fn with_target(mut self, target: ComplexVector) -> Self {
        self.target_state = Some(target);
        self
    }

    fn validate(&self, dim: usize) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!(
                "t_max must be at least dt, got t_max = {}, dt = {}",
                self.t_max, self.dt
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(DynamicsError::InvalidConfig("snapshot_stride must be at least 1".into()));
        }
        if !self.renormalize_every_step {
            return Err(DynamicsError::InvalidConfig(
                "renormalize_every_step is fixed true".into(),
            ));
        }
        if let Some(t) = &self.target_state {
            if t.len() != dim {
                return Err(DynamicsError::InvalidConfig(format!(
                    "target_state has length {}, lattice has {dim} sites",
                    t.len()
                )));
            }
            if vec_norm(t) == 0.0 {
                return Err(DynamicsError::InvalidConfig("target_state must be nonzero".into()));
            }
        }
        Ok(())
    }
}

/// Time grid, unit-normalized snapshots, accumulated log-intensity and
/// fidelity against the target (when one was set).
#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<ComplexVector>,
    /// `ln sum_n |psi_n|^2` relative to t = 0; entry 0 is exactly 0.
    pub log_intensity: Vec<f64>,
    /// `|<target, psi_hat(t)>|^2`, present iff a target was set.
    pub fidelity: Option<Vec<f64>>,
}

impl TrajectoryRecord {
    /// Normalized site densities `|psi_hat_n|^2` per snapshot.
    pub fn densities(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| s.iter().map(|z| z.norm_sqr()).collect())
            .collect()
    }

    pub fn n_sites(&self) -> usize {
        self.states.first().map_or(0, |s| s.len())
    }

    /// CSV export: header `t,log_intensity,fidelity,d1..dN`, one row per
    /// snapshot. The fidelity column is empty when no target was set.
    pub fn to_csv(&self) -> String {
        let n = self.n_sites();
        let mut out = String::from("t,log_intensity,fidelity");
        for k in 1..=n {
            out.push_str(&format!(",d{k}"));
        }
        out.push('\n');
        for (idx, t) in self.times.iter().enumerate() {
            out.push_str(&format!("{t},{}", self.log_intensity[idx]));
            match &self.fidelity {
                Some(f) => out.push_str(&format!(",{}", f[idx])),
                None => out.push(','),
            }
            for z in &self.states[idx] {
                out.push_str(&format!(",{}", z.norm_sqr()));
            }
            out.push('\n');
        }
        out
    }
}

fn fidelity_against(target: &[Complex64], psi: &[Complex64]) -> f64 {
    crate::numlin::vec_inner(target, psi).norm_sqr()
}

/// Integrate `d psi / dt = -i H(t) psi` from `psi0` (normalized on entry)
/// with stage evaluations of `H` at `t`, `t + dt/2` and `t + dt`.
pub fn evolve(
    family: &HamiltonianFamily,
    psi0: &[Complex64],
    cfg: &EvolutionConfig,
) -> Result<TrajectoryRecord, DynamicsError> {
    let n = family.spec.n_sites;
    if psi0.len() != n {
        return Err(DynamicsError::InvalidConfig(format!(
            "initial state has length {}, lattice has {n} sites",
            psi0.len()
        )));
    }
    let norm0 = vec_norm(psi0);
    if norm0 == 0.0 || !norm0.is_finite() {
        return Err(DynamicsError::InvalidConfig("initial state must be nonzero and finite".into()));
    }
    cfg.validate(n)?;

    let target: Option<ComplexVector> = cfg.target_state.as_ref().map(|t| {
        let tn = vec_norm(t);
        t.iter().map(|z| z / tn).collect()
    });

    let mut psi: ComplexVector = psi0.iter().map(|z| z / norm0).collect();
    let n_steps = (cfg.t_max / cfg.dt).round().max(1.0) as usize;

    // constant families are evaluated once
    let constant = family.is_constant();
    let h_const = if constant { Some(family.at(0.0)?) } else { None };

    let mut record = TrajectoryRecord {
        times: Vec::new(),
        states: Vec::new(),
        log_intensity: Vec::new(),
        fidelity: target.as_ref().map(|_| Vec::new()),
    };
    let mut log_intensity = 0.0f64;
    let mut push_snapshot = |t: f64, psi: &ComplexVector, log_i: f64, rec: &mut TrajectoryRecord| {
        rec.times.push(t);
        rec.states.push(psi.clone());
        rec.log_intensity.push(log_i);
        if let (Some(f), Some(tv)) = (rec.fidelity.as_mut(), target.as_ref()) {
            f.push(fidelity_against(tv, psi));
        }
    };
    push_snapshot(0.0, &psi, 0.0, &mut record);

    // k = -i H psi evaluated without building the scaled matrix
    let apply = |h: &ComplexMatrix, v: &[Complex64]| -> Result<ComplexVector, DynamicsError> {
        let hv = h.mat_vec(v)?;
        Ok(hv
            .into_iter()
            .map(|z| Complex64::new(z.im, -z.re)) // multiply by -i
            .collect())
    };

    let mut h_next: Option<ComplexMatrix> = None;
    for step in 0..n_steps {
        let t = step as f64 * cfg.dt;
        let (h0, h_half, h1);
        match (&h_const, constant) {
            (Some(h), true) => {
                h0 = h.clone();
                h_half = h.clone();
                h1 = h.clone();
            }
            _ => {
                h0 = match h_next.take() {
                    Some(h) => h,
                    None => family.at(t)?,
                };
                h_half = family.at(t + cfg.dt / 2.0)?;
                h1 = family.at(t + cfg.dt)?;
                h_next = Some(h1.clone());
            }
        }
        let k1 = apply(&h0, &psi)?;
        let y2: ComplexVector = psi
            .iter()
            .zip(&k1)
            .map(|(p, k)| p + k * (cfg.dt / 2.0))
            .collect();
        let k2 = apply(&h_half, &y2)?;
        let y3: ComplexVector = psi
            .iter()
            .zip(&k2)
            .map(|(p, k)| p + k * (cfg.dt / 2.0))
            .collect();
        let k3 = apply(&h_half, &y3)?;
        let y4: ComplexVector = psi.iter().zip(&k3).map(|(p, k)| p + k * cfg.dt).collect();
        let k4 = apply(&h1, &y4)?;
        for i in 0..n {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (cfg.dt / 6.0);
        }
        let norm = vec_norm(&psi);
        if !norm.is_finite() || norm == 0.0 {
            return Err(DynamicsError::NonFiniteState { last_good_time: t });
        }
        // fold growth into the ledger, keep the state on the unit sphere
        if norm != 1.0 {
            for z in psi.iter_mut() {
                *z /= norm;
            }
        }
        log_intensity += 2.0 * norm.ln();
        if (step + 1) % cfg.snapshot_stride == 0 {
            push_snapshot((step + 1) as f64 * cfg.dt, &psi, log_intensity, &mut record);
        }
    }
    Ok(record)
}

/// Exact propagator `U(t) = sum_{k=0}^{p-1} (-i t)^k H^k / k!` for a
/// nilpotent generator of index p; a finite sum, so exact for constant H.
pub fn exact_nilpotent_propagator(
    h: &ComplexMatrix,
    t: f64,
) -> Result<ComplexMatrix, DynamicsError> {
    let p = nilpotency_index(h, DEFAULT_NILPOTENCY_TOL)
        .map_err(|e| DynamicsError::Epn(e.to_string()))?
        .ok_or(DynamicsError::NotNilpotent)?;
    let n = h.n_rows();
    let mut u = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let factor = Complex64::new(0.0, -t);
    for k in 1..p {
        term = term.mat_mul(h)?.scale(factor / (k as f64));
        u = u.add(&term)?;
    }
    Ok(u)
}

/// Smallest snapshot time whose fidelity reaches `1 - epsilon` and stays
/// there for every later snapshot (monotone-tail rule: transient
/// oscillations must not trigger false convergence). `None` when never
/// reached or when no target was set.
pub fn convergence_time(record: &TrajectoryRecord, epsilon: f64) -> Option<f64> {
    let fid = record.fidelity.as_ref()?;
    let threshold = 1.0 - epsilon;
    let mut earliest = None;
    for (i, f) in fid.iter().enumerate().rev() {
        if *f >= threshold {
            earliest = Some(i);
        } else {
            break;
        }
    }
    earliest.map(|i| record.times[i])
}

/// Least-squares slope of log-intensity versus `ln t` over snapshots with
/// `t` inside the window. Needs at least two snapshots at positive times.
pub fn growth_exponent(
    record: &TrajectoryRecord,
    window: (f64, f64),
) -> Result<f64, DynamicsError> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(DynamicsError::DegenerateWindow(format!(
            "window must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    let pts: Vec<(f64, f64)> = record
        .times
        .iter()
        .zip(&record.log_intensity)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(t, y)| (t.ln(), *y))
        .collect();
    if pts.len() < 2 {
        return Err(DynamicsError::DegenerateWindow(format!(
            "only {} snapshots inside the window",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(DynamicsError::DegenerateWindow("zero variance in ln t".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LatticeSpec, TimeDependentCouplingSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(n: usize, k: usize) -> ComplexVector {
        let mut v = vec![c(0.0, 0.0); n];
        v[k] = c(1.0, 0.0);
        v
    }

    #[test]
    fn kernel_state_is_an_exact_fixed_point() {
        let fam = HamiltonianFamily::constant(LatticeSpec::h1(14));
        let cfg = EvolutionConfig::new(1e-2, 5.0, 10).with_target(basis(14, 0));
        let rec = evolve(&fam, &basis(14, 0), &cfg).unwrap();
        for (i, s) in rec.states.iter().enumerate() {
            assert_eq!(s[0], c(1.0, 0.0), "snapshot {i}");
            assert!(s[1..].iter().all(|z| *z == c(0.0, 0.0)));
            assert_eq!(rec.log_intensity[i], 0.0);
        }
        let fid = rec.fidelity.unwrap();
        assert!(fid.iter().all(|f| *f == 1.0));
    }

    #[test]
    fn exact_propagator_three_site_expansion() {
        // H1(3), psi0 = e3: psi(t) = e3 - i t e2 - (t^2/2) e1
        let h = crate::lattice::build_hamiltonian(&LatticeSpec::h1(3)).unwrap();
        let t = 0.7;
        let u = exact_nilpotent_propagator(&h, t).unwrap();
        let psi = u.mat_vec(&basis(3, 2)).unwrap();
        assert!((psi[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((psi[1] - c(0.0, -t)).norm() < 1e-15);
        assert!((psi[0] - c(-t * t / 2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn propagator_at_zero_is_identity_and_determinant_free() {
        let h = crate::lattice::build_hamiltonian(&LatticeSpec::ring_backward(6, 1.0)).unwrap();
        let u0 = exact_nilpotent_propagator(&h, 0.0).unwrap();
        assert!(u0.approx_eq(&ComplexMatrix::identity(6), 1e-15));
    }

    #[test]
    fn propagator_rejects_non_nilpotent_input() {
        let h = crate::lattice::build_hamiltonian(&LatticeSpec::hermitian_chain(4)).unwrap();
        assert!(matches!(
            exact_nilpotent_propagator(&h, 1.0),
            Err(DynamicsError::NotNilpotent)
        ));
    }

    #[test]
    fn rk4_matches_exact_propagator() {
        let spec = LatticeSpec::h1(8);
        let h = crate::lattice::build_hamiltonian(&spec).unwrap();
        let fam = HamiltonianFamily::constant(spec);
        let cfg = EvolutionConfig::new(1e-3, 2.0, 100);
        let rec = evolve(&fam, &basis(8, 7), &cfg).unwrap();
        for (t, s) in rec.times.iter().zip(&rec.states) {
            let u = exact_nilpotent_propagator(&h, *t).unwrap();
            let exact = u.mat_vec(&basis(8, 7)).unwrap();
            let norm = vec_norm(&exact);
            let exact_hat: ComplexVector = exact.iter().map(|z| z / norm).collect();
            let err = crate::numlin::vec_sub(s, &exact_hat);
            assert!(crate::numlin::vec_inf_norm(&err) < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn two_level_time_dependent_state_is_exact() {
        // [[0, J(t)], [0, 0]] with J(t) = 1 + 0.5 sin t: psi stays (1, 0)
        let fam = HamiltonianFamily::with_rule(
            LatticeSpec::h1(2),
            TimeDependentCouplingSpec::uniform_sine(1.0, 0.5, 1.0),
        )
        .unwrap();
        let cfg = EvolutionConfig::new(1e-2, 20.0, 50);
        let rec = evolve(&fam, &basis(2, 0), &cfg).unwrap();
        for s in &rec.states {
            assert_eq!(s[0], c(1.0, 0.0));
            assert_eq!(s[1], c(0.0, 0.0));
        }
        assert!(rec.log_intensity.iter().all(|l| *l == 0.0));
    }

    #[test]
    fn hermitian_evolution_conserves_intensity() {
        let fam = HamiltonianFamily::constant(LatticeSpec::hermitian_chain(6));
        let cfg = EvolutionConfig::new(1e-3, 10.0, 100);
        let rec = evolve(&fam, &basis(6, 2), &cfg).unwrap();
        for l in &rec.log_intensity {
            assert!(l.abs() < 1e-6, "log intensity drifted: {l}");
        }
    }

    #[test]
    fn convergence_time_of_prepared_state_is_zero() {
        let fam = HamiltonianFamily::constant(LatticeSpec::h1(14));
        let cfg = EvolutionConfig::new(1e-2, 1.0, 10).with_target(basis(14, 0));
        let rec = evolve(&fam, &basis(14, 0), &cfg).unwrap();
        assert_eq!(convergence_time(&rec, 1e-6), Some(0.0));
    }

    #[test]
    fn oscillatory_fidelity_never_converges() {
        // Hermitian chain, target e1: fidelity oscillates, never settles
        let fam = HamiltonianFamily::constant(LatticeSpec::hermitian_chain(6));
        let cfg = EvolutionConfig::new(1e-2, 30.0, 10).with_target(basis(6, 0));
        let rec = evolve(&fam, &basis(6, 0), &cfg).unwrap();
        assert_eq!(convergence_time(&rec, 0.01), None);
    }

    #[test]
    fn growth_exponent_for_three_site_conversion() {
        // H1(3), psi0 = e3: intensity 1 + t^2 + t^4/4, late slope -> 4
        let fam = HamiltonianFamily::constant(LatticeSpec::h1(3));
        let cfg = EvolutionConfig::new(1e-2, 60.0, 10).with_target(basis(3, 0));
        let rec = evolve(&fam, &basis(3, 2), &cfg).unwrap();
        let slope = growth_exponent(&rec, (20.0, 60.0)).unwrap();
        assert!((slope - 4.0).abs() < 0.05, "slope = {slope}");
        // stationary kernel state has slope ~ 0
        let rec0 = evolve(&fam, &basis(3, 0), &cfg).unwrap();
        let slope0 = growth_exponent(&rec0, (20.0, 60.0)).unwrap();
        assert!(slope0.abs() < 1e-9);
    }

    #[test]
    fn degenerate_windows_are_rejected() {
        let fam = HamiltonianFamily::constant(LatticeSpec::h1(3));
        let cfg = EvolutionConfig::new(1e-2, 1.0, 10);
        let rec = evolve(&fam, &basis(3, 2), &cfg).unwrap();
        assert!(growth_exponent(&rec, (0.0, 1.0)).is_err());
        assert!(growth_exponent(&rec, (0.5, 0.2)).is_err());
        assert!(growth_exponent(&rec, (900.0, 1000.0)).is_err());
    }

    #[test]
    fn fidelity_stays_in_unit_interval() {
        let fam = HamiltonianFamily::constant(LatticeSpec::h1(10));
        let cfg = EvolutionConfig::new(1e-2, 50.0, 25).with_target(basis(10, 0));
        let rec = evolve(&fam, &basis(10, 9), &cfg).unwrap();
        for f in rec.fidelity.as_ref().unwrap() {
            assert!(*f >= 0.0 && *f <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn csv_layout_matches_contract() {
        let fam = HamiltonianFamily::constant(LatticeSpec::h1(3));
        let cfg = EvolutionConfig::new(0.5, 1.0, 1).with_target(basis(3, 0));
        let rec = evolve(&fam, &basis(3, 2), &cfg).unwrap();
        let csv = rec.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,log_intensity,fidelity,d1,d2,d3");
        assert_eq!(csv.lines().count(), 1 + rec.times.len());
    }
}
