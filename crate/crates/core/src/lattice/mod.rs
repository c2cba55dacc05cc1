//! Declarative construction of every lattice Hamiltonian family used by the
//! analyses: open/ring unidirectional chains, interface lattices, disorder
//! realizations and time-dependent coupling rules.
//!
//! Site indices are 1-based in documentation (matching the usual bra-ket
//! labels `|n>`) and 0-based in code. The matrix convention is fixed as
//!
//! ```text
//! H[n][n+1] = J^F_n      (forward bond n, n = 1..N-1)
//! H[n+1][n] = J^B_n      (backward bond n)
//! H[n][n+2] = J'         (next-nearest neighbor)
//! H[1][N]   = J^B_N      (ring closure, backward edge bond)
//! H[N][1]   = J^F_N      (ring closure, forward edge bond)
//! ```
//!
//! Under this convention the kernel of the uniform forward chain `H1` is
//! `e1` (left edge). Note the source material also prints the H1 edge state
//! as `{0,...,0,1}` while calling it left-localized; the two statements are
//! inconsistent under any fixed convention, and this crate follows the
//! matrix convention above throughout.

mod rng;

pub use rng::{derive_seed, SplitMix64};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numlin::{ComplexMatrix, NumlinError};

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),
    #[error("empty admissible set: exclusion radius {j_min} >= max coupling magnitude {max}")]
    EmptyAdmissibleSet { j_min: f64, max: f64 },
    #[error(transparent)]
    Numlin(#[from] NumlinError),
}

/// Boundary handling for the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Open,
    /// Edges connected through the backward edge bond `H[1][N]`; keeps the
    /// support digraph acyclic, so nilpotency survives the closure.
    RingBackward,
    /// Edges connected through the forward edge bond `H[N][1]`; this is the
    /// periodic closure whose spectrum is the N-th roots of unity.
    RingForward,
}

/// Declarative description of a lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub n_sites: usize,
    /// Per-bond forward amplitudes `J^F_n`, length `n_sites - 1`.
    #[serde(with = "amp_vec")]
    pub forward: Vec<Complex64>,
    /// Per-bond backward amplitudes `J^B_n`, length `n_sites - 1`.
    #[serde(with = "amp_vec")]
    pub backward: Vec<Complex64>,
    /// Edge bond `J^F_N`, used by `ring_forward` (defaults to 1).
    #[serde(default, with = "amp_opt", skip_serializing_if = "Option::is_none")]
    pub edge_forward: Option<Complex64>,
    /// Edge bond `J^B_N`, used by `ring_backward` (defaults to 1).
    #[serde(default, with = "amp_opt", skip_serializing_if = "Option::is_none")]
    pub edge_backward: Option<Complex64>,
    /// Next-nearest-neighbor amplitude `J'`, |J'| < 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nnn_amplitude: Option<f64>,
    #[serde(default)]
    pub boundary: Boundary,
    /// When set, marks the interface lattice: sites `1..=interface_site`
    /// carry backward couplings directed toward the interface, the rest
    /// forward couplings, with the interface bond carrying both.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interface_site: Option<usize>,
}

impl LatticeSpec {
    fn bare(n: usize) -> Self {
        Self {
            n_sites: n,
            forward: vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)],
            backward: vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)],
            edge_forward: None,
            edge_backward: None,
            nnn_amplitude: None,
            boundary: Boundary::Open,
            interface_site: None,
        }
    }

    /// Uniform forward chain: `J^F = 1`, `J^B = 0`, open edges. Its matrix is
    /// the size-N Jordan block of value 0; the exceptional state is `e1`.
    pub fn h1(n: usize) -> Self {
        let mut s = Self::bare(n);
        s.forward = vec![Complex64::new(1.0, 0.0); n - 1];
        s
    }

    /// Uniform backward chain (transpose of `h1`); exceptional state `eN`.
    pub fn h2(n: usize) -> Self {
        let mut s = Self::bare(n);
        s.backward = vec![Complex64::new(1.0, 0.0); n - 1];
        s
    }

    /// Hermitian conductor chain `J^F = J^B = 1`.
    pub fn hermitian_chain(n: usize) -> Self {
        let mut s = Self::bare(n);
        s.forward = vec![Complex64::new(1.0, 0.0); n - 1];
        s.backward = vec![Complex64::new(1.0, 0.0); n - 1];
        s
    }

    /// `h1` plus a uniform next-nearest-neighbor amplitude.
    pub fn h1_nnn(n: usize, nnn: f64) -> Self {
        let mut s = Self::h1(n);
        s.nnn_amplitude = Some(nnn);
        s
    }

    /// Interface of two unidirectional lattices. Lattice-I occupies sites
    /// `1..=site` with couplings directed toward the interface
    /// (`H[n+1][n] = 1` for bonds `n = 1..=site`), lattice-II the rest
    /// (`H[n][n+1] = 1` for bonds `n = site..N-1`); the interface bond
    /// carries both. This is the unique nearest-neighbor stitching whose
    /// kernel matches the reported interface states.
    pub fn interface(n: usize, site: usize) -> Self {
        let mut s = Self::bare(n);
        for b in 0..n - 1 {
            if b < site {
                s.backward[b] = Complex64::new(1.0, 0.0);
            }
            if b + 1 >= site {
                s.forward[b] = Complex64::new(1.0, 0.0);
            }
        }
        s.interface_site = Some(site);
        s
    }

    /// `h1` with the edges joined through the backward edge bond `J^B_N = g`.
    pub fn ring_backward(n: usize, g: f64) -> Self {
        let mut s = Self::h1(n);
        s.boundary = Boundary::RingBackward;
        s.edge_backward = Some(Complex64::new(g, 0.0));
        s
    }

    /// `h1` with the periodic closure `J^F_N = g`.
    pub fn ring_forward(n: usize, g: f64) -> Self {
        let mut s = Self::h1(n);
        s.boundary = Boundary::RingForward;
        s.edge_forward = Some(Complex64::new(g, 0.0));
        s
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let n = self.n_sites;
        if n < 2 {
            return Err(LatticeError::InvalidSpec("n_sites must be at least 2".into()));
        }
        if self.forward.len() != n - 1 || self.backward.len() != n - 1 {
            return Err(LatticeError::InvalidSpec(format!(
                "bond arrays must have length {} (got forward {}, backward {})",
                n - 1,
                self.forward.len(),
                self.backward.len()
            )));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !self.forward.iter().all(finite)
            || !self.backward.iter().all(finite)
            || !self.edge_forward.iter().all(finite)
            || !self.edge_backward.iter().all(finite)
        {
            return Err(LatticeError::InvalidSpec("couplings must be finite".into()));
        }
        if let Some(j) = self.nnn_amplitude {
            if !j.is_finite() || j.abs() >= 1.0 {
                return Err(LatticeError::InvalidSpec(format!(
                    "nnn_amplitude must satisfy |J'| < 1, got {j}"
                )));
            }
        }
        if let Some(site) = self.interface_site {
            if site <= 1 || site >= n {
                return Err(LatticeError::InvalidSpec(format!(
                    "interface_site must satisfy 1 < site < {n}, got {site}"
                )));
            }
            if self.boundary != Boundary::Open {
                return Err(LatticeError::InvalidSpec(
                    "interface lattice cannot also have a ring closure".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Build the dense Hamiltonian for a lattice spec.
pub fn build_hamiltonian(spec: &LatticeSpec) -> Result<ComplexMatrix, LatticeError> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut h = ComplexMatrix::zeros(n, n);
    for b in 0..n - 1 {
        h[(b, b + 1)] = spec.forward[b];
        h[(b + 1, b)] = spec.backward[b];
    }
    if let Some(j) = spec.nnn_amplitude {
        for b in 0..n.saturating_sub(2) {
            h[(b, b + 2)] = Complex64::new(j, 0.0);
        }
    }
    match spec.boundary {
        Boundary::Open => {}
        Boundary::RingBackward => {
            h[(0, n - 1)] = spec.edge_backward.unwrap_or(Complex64::new(1.0, 0.0));
        }
        Boundary::RingForward => {
            h[(n - 1, 0)] = spec.edge_forward.unwrap_or(Complex64::new(1.0, 0.0));
        }
    }
    Ok(h)
}

/// Which couplings a disorder pass replaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderTarget {
    Forward,
    Backward,
    Both,
}

/// Disorder model: i.i.d. uniform draws on an interval, redrawn until they
/// clear the exclusion radius `|J| >= J_min`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderSpec {
    pub target: DisorderTarget,
    /// `[lo, hi]` with `lo < hi`.
    pub interval: [f64; 2],
    /// Hard floor `J_min > 0`; keeps rank tolerances meaningful.
    #[serde(default = "default_exclusion_radius")]
    pub exclusion_radius: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_exclusion_radius() -> f64 {
    0.1
}

impl DisorderSpec {
    pub fn validate(&self) -> Result<(), LatticeError> {
        let [lo, hi] = self.interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(LatticeError::InvalidSpec(format!(
                "disorder interval must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(self.exclusion_radius > 0.0) {
            return Err(LatticeError::InvalidSpec(
                "exclusion_radius must be positive".into(),
            ));
        }
        let max = lo.abs().max(hi.abs());
        if self.exclusion_radius >= max {
            return Err(LatticeError::EmptyAdmissibleSet {
                j_min: self.exclusion_radius,
                max,
            });
        }
        Ok(())
    }
}

/// Replace targeted couplings by seeded uniform draws.
///
/// Only couplings that are nonzero in the base spec are targeted, so the
/// lattice topology (and with it the support digraph) is preserved — a
/// disordered forward chain stays a forward chain. Draws consume the stream
/// in bond order: forward bonds, forward edge bond, backward bonds, backward
/// edge bond; rejected draws also consume the stream.
pub fn sample_disorder(
    spec: &LatticeSpec,
    disorder: &DisorderSpec,
) -> Result<LatticeSpec, LatticeError> {
    spec.validate()?;
    disorder.validate()?;
    let [lo, hi] = disorder.interval;
    let j_min = disorder.exclusion_radius;
    let mut rng = SplitMix64::new(disorder.seed);
    let mut draw = move || loop {
        let v = rng.uniform(lo, hi);
        if v.abs() >= j_min {
            return Complex64::new(v, 0.0);
        }
    };
    let hit_forward = matches!(disorder.target, DisorderTarget::Forward | DisorderTarget::Both);
    let hit_backward = matches!(disorder.target, DisorderTarget::Backward | DisorderTarget::Both);
    let nonzero = |z: &Complex64| z.re != 0.0 || z.im != 0.0;

    let mut out = spec.clone();
    if hit_forward {
        for a in out.forward.iter_mut().filter(|a| nonzero(a)) {
            *a = draw();
        }
        if let Some(a) = out.edge_forward.as_mut().filter(|a| nonzero(a)) {
            *a = draw();
        }
    }
    if hit_backward {
        for a in out.backward.iter_mut().filter(|a| nonzero(a)) {
            *a = draw();
        }
        if let Some(a) = out.edge_backward.as_mut().filter(|a| nonzero(a)) {
            *a = draw();
        }
    }
    Ok(out)
}

/// Conjugation by the site-reversal permutation: entry `(i, j)` moves to
/// `(N+1-i, N+1-j)`. Sends `H1` to `H2` and is an involution.
pub fn reversal_conjugate(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.n_rows(), m.n_cols());
    ComplexMatrix::from_fn(rows, cols, |i, j| m[(rows - 1 - i, cols - 1 - j)])
}

/// Time profile of the coupling rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeProfile {
    /// `J^F_n(t) = base + depth * sin(omega t)` on every forward bond.
    UniformSine,
    /// `J^F_n(t) = base + R_n + depth * sin(R'_n omega t)` with per-bond
    /// offsets `R_n` and frequency factors `R'_n`.
    RandomSine,
    /// `J^F_n(t) = cos(omega t)`, `J^B_n(t) = sin(omega t)` on every bond;
    /// sweeps the uniform chain from `H1` to `H2`.
    CosSinPath,
}

/// Closed-form time dependence for the couplings; evaluated at arbitrary
/// stage times by the integrator, no interpolation tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDependentCouplingSpec {
    #[serde(default = "default_base")]
    pub base: f64,
    #[serde(default = "default_depth")]
    pub modulation_depth: f64,
    pub omega: f64,
    /// Per-bond `R_n`; empty means all zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub static_offsets: Vec<f64>,
    /// Per-bond `R'_n`; empty means all one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frequency_factors: Vec<f64>,
    pub profile: TimeProfile,
    /// When set and the offset/factor arrays are empty, `random_sine`
    /// samples them from [-0.5, 0.5] with this seed (offsets first, then
    /// factors, bond order).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_base() -> f64 {
    1.0
}

fn default_depth() -> f64 {
    0.5
}

impl TimeDependentCouplingSpec {
    pub fn uniform_sine(base: f64, depth: f64, omega: f64) -> Self {
        Self {
            base,
            modulation_depth: depth,
            omega,
            static_offsets: Vec::new(),
            frequency_factors: Vec::new(),
            profile: TimeProfile::UniformSine,
            seed: None,
        }
    }

    /// Random-sine rule with `R_n`, `R'_n` sampled from [-0.5, 0.5].
    pub fn random_sine(n_bonds: usize, base: f64, depth: f64, omega: f64, seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed);
        let static_offsets = (0..n_bonds).map(|_| rng.uniform(-0.5, 0.5)).collect();
        let frequency_factors = (0..n_bonds).map(|_| rng.uniform(-0.5, 0.5)).collect();
        Self {
            base,
            modulation_depth: depth,
            omega,
            static_offsets,
            frequency_factors,
            profile: TimeProfile::RandomSine,
            seed: Some(seed),
        }
    }

    pub fn cos_sin_path(omega: f64) -> Self {
        Self {
            base: 0.0,
            modulation_depth: 0.0,
            omega,
            static_offsets: Vec::new(),
            frequency_factors: Vec::new(),
            profile: TimeProfile::CosSinPath,
            seed: None,
        }
    }

    /// Fill empty offset/factor arrays (sampling for `random_sine` when a
    /// seed is present) and check lengths/ranges against the bond count.
    pub fn resolved(&self, n_bonds: usize) -> Result<Self, LatticeError> {
        let mut rule = self.clone();
        if rule.profile == TimeProfile::RandomSine {
            if rule.static_offsets.is_empty() && rule.frequency_factors.is_empty() {
                if let Some(seed) = rule.seed {
                    let sampled =
                        Self::random_sine(n_bonds, rule.base, rule.modulation_depth, rule.omega, seed);
                    rule.static_offsets = sampled.static_offsets;
                    rule.frequency_factors = sampled.frequency_factors;
                } else {
                    return Err(LatticeError::InvalidSpec(
                        "random_sine needs static_offsets/frequency_factors or a seed".into(),
                    ));
                }
            }
            if rule.static_offsets.len() != n_bonds || rule.frequency_factors.len() != n_bonds {
                return Err(LatticeError::InvalidSpec(format!(
                    "random_sine arrays must have length {n_bonds}"
                )));
            }
            let in_range = |x: &f64| (-0.5..=0.5).contains(x);
            if !rule.static_offsets.iter().all(in_range)
                || !rule.frequency_factors.iter().all(in_range)
            {
                return Err(LatticeError::InvalidSpec(
                    "R_n and R'_n must lie in [-0.5, 0.5]".into(),
                ));
            }
        }
        if !rule.omega.is_finite() {
            return Err(LatticeError::InvalidSpec("omega must be finite".into()));
        }
        Ok(rule)
    }
}

/// A lattice spec together with an optional time rule; evaluates to a matrix
/// at any time. Constant families ignore `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFamily {
    pub spec: LatticeSpec,
    pub time_rule: Option<TimeDependentCouplingSpec>,
}

impl HamiltonianFamily {
    pub fn constant(spec: LatticeSpec) -> Self {
        Self { spec, time_rule: None }
    }

    pub fn with_rule(
        spec: LatticeSpec,
        rule: TimeDependentCouplingSpec,
    ) -> Result<Self, LatticeError> {
        let resolved = rule.resolved(spec.n_sites - 1)?;
        Ok(Self { spec, time_rule: Some(resolved) })
    }

    pub fn is_constant(&self) -> bool {
        self.time_rule.is_none()
    }

    /// Evaluate the Hamiltonian at time `t`.
    pub fn at(&self, t: f64) -> Result<ComplexMatrix, LatticeError> {
        if !t.is_finite() {
            return Err(LatticeError::InvalidSpec(format!("time must be finite, got {t}")));
        }
        let rule = match &self.time_rule {
            None => return build_hamiltonian(&self.spec),
            Some(rule) => rule,
        };
        let mut spec = self.spec.clone();
        let nonzero = |z: &Complex64| z.re != 0.0 || z.im != 0.0;
        match rule.profile {
            TimeProfile::UniformSine => {
                let j = rule.base + rule.modulation_depth * (rule.omega * t).sin();
                for a in spec.forward.iter_mut().filter(|a| nonzero(a)) {
                    *a = Complex64::new(j, 0.0);
                }
            }
            TimeProfile::RandomSine => {
                for (b, a) in spec.forward.iter_mut().enumerate() {
                    if nonzero(a) {
                        let j = rule.base
                            + rule.static_offsets[b]
                            + rule.modulation_depth
                                * (rule.frequency_factors[b] * rule.omega * t).sin();
                        *a = Complex64::new(j, 0.0);
                    }
                }
            }
            TimeProfile::CosSinPath => {
                let (f, bwd) = ((rule.omega * t).cos(), (rule.omega * t).sin());
                for b in 0..spec.n_sites - 1 {
                    spec.forward[b] = Complex64::new(f, 0.0);
                    spec.backward[b] = Complex64::new(bwd, 0.0);
                }
            }
        }
        build_hamiltonian(&spec)
    }
}

mod amp_vec {
    use super::amp_repr::AmpRepr;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<AmpRepr> = v.iter().map(AmpRepr::from).collect();
        reprs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let reprs: Vec<AmpRepr> = Vec::deserialize(d)?;
        Ok(reprs.into_iter().map(Complex64::from).collect())
    }
}

mod amp_opt {
    use super::amp_repr::AmpRepr;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(AmpRepr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        let repr: Option<AmpRepr> = Option::deserialize(d)?;
        Ok(repr.map(Complex64::from))
    }
}

mod amp_repr {
    use num_complex::Complex64;
    use serde::{Deserialize, Serialize};

    /// Amplitudes serialize as plain numbers when real, `{re, im}` otherwise;
    /// both forms are accepted on input.
    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum AmpRepr {
        Real(f64),
        Complex { re: f64, im: f64 },
    }

    impl From<&Complex64> for AmpRepr {
        fn from(z: &Complex64) -> Self {
            if z.im == 0.0 {
                AmpRepr::Real(z.re)
            } else {
                AmpRepr::Complex { re: z.re, im: z.im }
            }
        }
    }

    impl From<AmpRepr> for Complex64 {
        fn from(r: AmpRepr) -> Self {
            match r {
                AmpRepr::Real(x) => Complex64::new(x, 0.0),
                AmpRepr::Complex { re, im } => Complex64::new(re, im),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{null_space, DEFAULT_RANK_TOL};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h1_is_the_jordan_block() {
        let h = build_hamiltonian(&LatticeSpec::h1(3)).unwrap();
        let expect = ComplexMatrix::jordan_block(3, c(0.0, 0.0));
        assert_eq!(h, expect);
        assert!(h.is_strictly_upper_triangular());
    }

    #[test]
    fn h2_is_the_transpose_of_h1() {
        let h1 = build_hamiltonian(&LatticeSpec::h1(7)).unwrap();
        let h2 = build_hamiltonian(&LatticeSpec::h2(7)).unwrap();
        assert_eq!(h2, h1.transpose());
    }

    #[test]
    fn interface_kernel_matches_reported_states() {
        let h = build_hamiltonian(&LatticeSpec::interface(10, 5)).unwrap();
        let ker = null_space(&h, DEFAULT_RANK_TOL);
        assert_eq!(ker.len(), 2);
        // span must contain e4 - e6 and e5 - e7 (0-based: 3,5 and 4,6)
        for (a, b) in [(3usize, 5usize), (4, 6)] {
            let mut v = vec![c(0.0, 0.0); 10];
            v[a] = c(1.0, 0.0);
            v[b] = c(-1.0, 0.0);
            let r = h.mat_vec(&v).unwrap();
            assert!(crate::numlin::vec_inf_norm(&r) < 1e-14);
        }
    }

    #[test]
    fn ring_closures_place_single_corner_entries() {
        let hb = build_hamiltonian(&LatticeSpec::ring_backward(5, 0.7)).unwrap();
        assert_eq!(hb[(0, 4)], c(0.7, 0.0));
        assert_eq!(hb[(4, 0)], c(0.0, 0.0));
        let hf = build_hamiltonian(&LatticeSpec::ring_forward(5, 1.0)).unwrap();
        assert_eq!(hf[(4, 0)], c(1.0, 0.0));
        assert_eq!(hf[(0, 4)], c(0.0, 0.0));
    }

    #[test]
    fn interface_plus_ring_is_rejected() {
        let mut s = LatticeSpec::interface(10, 5);
        s.boundary = Boundary::RingBackward;
        assert!(matches!(
            build_hamiltonian(&s),
            Err(LatticeError::InvalidSpec(_))
        ));
    }

    #[test]
    fn nnn_amplitude_must_stay_below_one() {
        let s = LatticeSpec::h1_nnn(5, 1.0);
        assert!(s.validate().is_err());
        assert!(LatticeSpec::h1_nnn(5, 0.9).validate().is_ok());
    }

    #[test]
    fn disorder_is_deterministic_and_respects_the_floor() {
        let base = LatticeSpec::h1(10);
        let d = DisorderSpec {
            target: DisorderTarget::Forward,
            interval: [-1.5, 1.5],
            exclusion_radius: 0.1,
            seed: 12345,
        };
        let a = sample_disorder(&base, &d).unwrap();
        let b = sample_disorder(&base, &d).unwrap();
        assert_eq!(a, b);
        for j in &a.forward {
            assert!(j.re.abs() >= 0.1 && j.re.abs() <= 1.5);
            assert_eq!(j.im, 0.0);
        }
        // backward couplings stay zero: topology preserved
        assert!(a.backward.iter().all(|z| z.re == 0.0 && z.im == 0.0));
        // distinct seeds give distinct specs
        let d2 = DisorderSpec { seed: 54321, ..d.clone() };
        let other = sample_disorder(&base, &d2).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn empty_admissible_set_is_an_error() {
        let d = DisorderSpec {
            target: DisorderTarget::Forward,
            interval: [-0.05, 0.05],
            exclusion_radius: 0.1,
            seed: 0,
        };
        assert!(matches!(
            sample_disorder(&LatticeSpec::h1(4), &d),
            Err(LatticeError::EmptyAdmissibleSet { .. })
        ));
    }

    #[test]
    fn reversal_sends_h1_to_h2_and_is_an_involution() {
        let h1 = build_hamiltonian(&LatticeSpec::h1(6)).unwrap();
        let h2 = build_hamiltonian(&LatticeSpec::h2(6)).unwrap();
        assert_eq!(reversal_conjugate(&h1), h2);
        assert_eq!(reversal_conjugate(&reversal_conjugate(&h1)), h1);
    }

    #[test]
    fn cos_sin_path_interpolates_h1_to_h2() {
        let fam = HamiltonianFamily::with_rule(
            LatticeSpec::h1(6),
            TimeDependentCouplingSpec::cos_sin_path(1.0),
        )
        .unwrap();
        let h1 = build_hamiltonian(&LatticeSpec::h1(6)).unwrap();
        let h2 = build_hamiltonian(&LatticeSpec::h2(6)).unwrap();
        assert!(fam.at(0.0).unwrap().approx_eq(&h1, 1e-15));
        assert!(fam
            .at(std::f64::consts::FRAC_PI_2)
            .unwrap()
            .approx_eq(&h2, 1e-15));
        let mid = fam.at(std::f64::consts::FRAC_PI_4).unwrap();
        assert!(mid.is_hermitian(1e-12));
    }

    #[test]
    fn random_sine_rule_resolves_and_keeps_column_one_zero() {
        let fam = HamiltonianFamily::with_rule(
            LatticeSpec::h1(8),
            TimeDependentCouplingSpec::random_sine(7, 1.0, 0.5, 1.0, 99),
        )
        .unwrap();
        for &t in &[0.0, 0.3, 2.7] {
            let h = fam.at(t).unwrap();
            for i in 0..8 {
                assert_eq!(h[(i, 0)], c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn spec_json_round_trip_accepts_numbers_and_objects() {
        let s = LatticeSpec::interface(10, 5);
        let text = serde_json::to_string_pretty(&s).unwrap();
        let back: LatticeSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
        // object-form amplitudes parse too
        let doc = r#"{
            "n_sites": 3,
            "forward": [1.0, {"re": 0.0, "im": 1.0}],
            "backward": [0.0, 0.0]
        }"#;
        let spec: LatticeSpec = serde_json::from_str(doc).unwrap();
        assert_eq!(spec.forward[1], c(0.0, 1.0));
        // unknown keys are rejected
        assert!(serde_json::from_str::<LatticeSpec>(
            r#"{"n_sites": 2, "forward": [1], "backward": [0], "bogus": 1}"#
        )
        .is_err());
    }
}
