//! Exact second quantization on a handful of fermionic modes.
//!
//! Operators are dense matrices built by Jordan–Wigner. The QM engine uses
//! two particle modes; the QFT engine uses one (k, r) sector with modes
//! (α₁, α₂, β₁, β₂). Everything the closed-form modules claim is recomputed
//! here from operators and states, and [`verify::run_suite`] compares the two.

mod field;
pub mod qft;
pub mod qm;
pub mod space;
pub mod verify;

pub use field::{Axis, ChargeKind, Flavor};
pub use qft::{FourPointReport, MixingGeneratorDiagnostic, QftOracle, QftOracleObservables};
pub use qm::{QmOracle, QmOracleObservables};
pub use space::{expectation, variance, FockOperator, FockSpace, FockState, ModeLabel, Species};
pub use verify::{run_suite, Check, CheckKind, VerificationReport, VerifyConfig};
