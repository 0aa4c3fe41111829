//! Charges built as spatial integrals of field bilinears, ∫ν_i†K_{ij}ν_j,
//! restricted to one momentum sector.
//!
//! Each mass field ν_i contributes a short list of mode "slots": the
//! particle annihilator α_i(t) and, for Dirac fields, the antiparticle
//! creator β_i†(t). Spinor overlaps between the slots of ν_i and ν_j enter
//! through a small matrix per species pair. Normal ordering is taken with
//! respect to the mass vacuum.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;

use super::space::{FockOperator, FockSpace};
use crate::error::{Error, Result};
use crate::qm::{mixing_matrix, MixingAngle};

/// Flavor index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Electron,
    Muon,
}

impl Flavor {
    pub(crate) fn index(self) -> usize {
        match self {
            Flavor::Electron => 0,
            Flavor::Muon => 1,
        }
    }
}

/// su(2) generator axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    J1,
    J2,
    J3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::J1, Axis::J2, Axis::J3];

    /// τ = σ/2.
    pub fn tau(self) -> Matrix2<C64> {
        let h = 0.5;
        let z = C64::new(0.0, 0.0);
        match self {
            Axis::J1 => Matrix2::new(z, C64::new(h, 0.0), C64::new(h, 0.0), z),
            Axis::J2 => Matrix2::new(z, C64::new(0.0, -h), C64::new(0.0, h), z),
            Axis::J3 => Matrix2::new(C64::new(h, 0.0), z, z, C64::new(-h, 0.0)),
        }
    }

    /// ε_{ijk}: returns (k, sign) such that [τ_i, τ_j] = i·sign·τ_k, or
    /// `None` when i = j.
    pub fn cross(self, other: Axis) -> Option<(Axis, f64)> {
        use Axis::*;
        match (self, other) {
            (J1, J2) => Some((J3, 1.0)),
            (J2, J3) => Some((J1, 1.0)),
            (J3, J1) => Some((J2, 1.0)),
            (J2, J1) => Some((J3, -1.0)),
            (J3, J2) => Some((J1, -1.0)),
            (J1, J3) => Some((J2, -1.0)),
            _ => None,
        }
    }
}

/// Which charge to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChargeKind {
    /// Q₁ or Q₂, the Noether charge of one mass field.
    Mass(u8),
    /// Q_e(t) or Q_μ(t).
    Flavor(Flavor),
    /// Q_{m,j}: su(2) generators in the mass basis.
    MassSu2(Axis),
    /// Q_{f,j}(t): su(2) generators in the flavor basis.
    FlavorSu2(Axis),
    /// The total charge Q = Q₁ + Q₂.
    Total,
    /// Q/2, the Casimir-like charge of the su(2) algebra.
    Casimir,
}

impl ChargeKind {
    /// Species-space kernel K with charge = ∫ν_mᵀ† K ν_m.
    pub fn kernel(self, theta: MixingAngle) -> Matrix2<C64> {
        let r = mixing_matrix(theta);
        let rot = Matrix2::new(r[0][0], r[0][1], r[1][0], r[1][1]).map(|x| C64::new(x, 0.0));
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        match self {
            ChargeKind::Mass(1) => Matrix2::new(one, z, z, z),
            ChargeKind::Mass(_) => Matrix2::new(z, z, z, one),
            ChargeKind::Flavor(f) => {
                let mut p = Matrix2::zeros();
                p[(f.index(), f.index())] = one;
                rot.transpose() * p * rot
            }
            ChargeKind::MassSu2(axis) => axis.tau(),
            ChargeKind::FlavorSu2(axis) => rot.transpose() * axis.tau() * rot,
            ChargeKind::Total => Matrix2::identity(),
            ChargeKind::Casimir => Matrix2::identity() * C64::new(0.5, 0.0),
        }
    }
}

impl fmt::Display for ChargeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = |a: &Axis| match a {
            Axis::J1 => "j1",
            Axis::J2 => "j2",
            Axis::J3 => "j3",
        };
        match self {
            ChargeKind::Mass(i) => write!(f, "mass-{i}"),
            ChargeKind::Flavor(Flavor::Electron) => write!(f, "flavor-e"),
            ChargeKind::Flavor(Flavor::Muon) => write!(f, "flavor-mu"),
            ChargeKind::MassSu2(a) => write!(f, "mass-{}", axis(a)),
            ChargeKind::FlavorSu2(a) => write!(f, "flavor-{}", axis(a)),
            ChargeKind::Total => write!(f, "total"),
            ChargeKind::Casimir => write!(f, "casimir"),
        }
    }
}

impl FromStr for ChargeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "mass-1" => ChargeKind::Mass(1),
            "mass-2" => ChargeKind::Mass(2),
            "flavor-e" => ChargeKind::Flavor(Flavor::Electron),
            "flavor-mu" => ChargeKind::Flavor(Flavor::Muon),
            "mass-j1" => ChargeKind::MassSu2(Axis::J1),
            "mass-j2" => ChargeKind::MassSu2(Axis::J2),
            "mass-j3" => ChargeKind::MassSu2(Axis::J3),
            "flavor-j1" | "su2-j1" => ChargeKind::FlavorSu2(Axis::J1),
            "flavor-j2" | "su2-j2" => ChargeKind::FlavorSu2(Axis::J2),
            "flavor-j3" | "su2-j3" => ChargeKind::FlavorSu2(Axis::J3),
            "total" => ChargeKind::Total,
            "casimir" => ChargeKind::Casimir,
            other => return Err(Error::UnknownCharge(other.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Slot {
    pub mode: usize,
    /// Antiparticle slot: contributes β† rather than α.
    pub creation: bool,
    pub omega: f64,
}

impl Slot {
    pub(crate) fn operator(&self, space: &FockSpace, t: f64) -> FockOperator {
        if self.creation {
            space.creator(self.mode) * C64::from_polar(1.0, self.omega * t)
        } else {
            space.annihilator(self.mode) * C64::from_polar(1.0, -self.omega * t)
        }
    }
}

/// Mode content of the two mass fields in one sector.
#[derive(Clone, Debug)]
pub(crate) struct FieldSector {
    pub slots: [Vec<Slot>; 2],
    /// `overlaps[i][j][(a, b)]` is the spinor overlap between slot a of ν_i
    /// and slot b of ν_j.
    pub overlaps: [[DMatrix<C64>; 2]; 2],
}

impl FieldSector {
    /// ∫ν_i†(t)ν_j(t), before normal ordering.
    pub fn bilinear(&self, space: &FockSpace, i: usize, j: usize, t: f64) -> FockOperator {
        let left: Vec<FockOperator> = self.slots[i].iter().map(|s| s.operator(space, t).dagger()).collect();
        let right: Vec<FockOperator> = self.slots[j].iter().map(|s| s.operator(space, t)).collect();
        let overlap = &self.overlaps[i][j];
        let mut acc = FockOperator::zeros(space.dim());
        for (a, l) in left.iter().enumerate() {
            for (b, r) in right.iter().enumerate() {
                let w = overlap[(a, b)];
                if w != C64::new(0.0, 0.0) {
                    acc = &acc + &((l * r) * w);
                }
            }
        }
        acc
    }

    /// Σ_ij K_ij ∫ν_i†ν_j, normal ordered with respect to the mass vacuum.
    pub fn charge(&self, space: &FockSpace, kernel: &Matrix2<C64>, t: f64) -> FockOperator {
        let mut acc = FockOperator::zeros(space.dim());
        for i in 0..2 {
            for j in 0..2 {
                let k = kernel[(i, j)];
                if k != C64::new(0.0, 0.0) {
                    acc = &acc + &(self.bilinear(space, i, j, t) * k);
                }
            }
        }
        acc.normal_ordered(&space.vacuum())
            .expect("vacuum lives in the same space")
    }
}
