//! Two-flavor neutrino mixing: oscillation, mode entanglement and flavor
//! charges, in plane-wave QM and in one momentum sector of the Dirac field.
//!
//! * [`qm`] and [`qft`] hold the closed forms.
//! * [`fock`] rebuilds them from dense fermionic operators and compares.
//! * [`scenario`] turns a TOML scenario into a deterministic table.
//!
//! ```
//! use nuent::qft::{self, KinematicSector};
//! use nuent::qm::MixingAngle;
//!
//! let theta = MixingAngle::from_sin_sq(0.314)?;
//! let sector = KinematicSector::new(1.0, 2.0, 1.0)?;
//! let q = qft::qft_oscillation(theta, &sector, 3.0);
//! assert!((q.q_ee + q.q_emu - 1.0).abs() < 1e-15);
//! # Ok::<(), nuent::Error>(())
//! ```

pub mod error;
pub mod fock;
pub mod qft;
pub mod qm;
pub mod scenario;
pub mod tolerance;

pub use error::{Error, Result};

// Code blocks in the guide run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/index.md")]
    mod index {}
    #[doc = include_str!("../../../book/src/mixing.md")]
    mod mixing {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
}
