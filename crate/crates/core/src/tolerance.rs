//! Numerical tolerances shared by the oracle, the verification report, and
//! the test suites.
//!
//! Three tiers: exact algebraic identities between dense matrices, checks on
//! constructed states and cross-route observables, and anything that goes
//! through a matrix exponential.

/// Canonical anticommutation relations, entrywise.
pub const CAR: f64 = 1e-13;

/// Algebraic operator identities (commutators, charge decompositions) and
/// closed-form conservation laws.
pub const ALGEBRA: f64 = 1e-12;

/// Constructed states, eigenvalue equations, and analytic-vs-oracle
/// observables.
pub const STATE: f64 = 1e-10;

/// Matrix-exponential diagnostics (mixing generator, Schrödinger evolution).
pub const EXPM: f64 = 1e-8;

/// Smallest variance accepted as non-negative for Hermitian operators.
pub const VARIANCE_FLOOR: f64 = -1e-12;
