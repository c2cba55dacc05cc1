//! Numerical laboratory for order-N exceptional points (EPNs) in
//! non-Hermitian tight-binding lattices.
//!
//! The crate is organized around five concerns:
//!
//! * [`numlin`] — dense complex linear algebra at desk scale, plus an exact
//!   rational backend used as a zero-tolerance oracle,
//! * [`lattice`] — declarative construction of the lattice Hamiltonians
//!   (unidirectional chains, interfaces, rings, disorder, time dependence),
//! * [`epn`] — certification of order-N exceptional points via rank
//!   filtrations and Jordan-chain similarity, and adiabatic path checks,
//! * [`dynamics`] — Runge–Kutta time evolution with log-intensity
//!   bookkeeping and an exact propagator for nilpotent generators,
//! * [`scenario`] — JSON-driven experiment runner behind the `epnlab` CLI.

pub mod dynamics;
pub mod epn;
pub mod lattice;
pub mod numlin;
pub mod scenario;
