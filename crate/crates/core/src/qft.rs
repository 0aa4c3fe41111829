//! Closed-form two-flavor quantities for mixed Dirac fields.
//!
//! Each momentum sector (m₁, m₂, |k|) carries two Bogoliubov magnitudes
//! |U_k| and |V_k|, the overlaps between spinor wavefunctions of different
//! mass. |V_k| measures the particle–antiparticle condensate of the flavor
//! vacuum, adds a second oscillation frequency ω_{k,1} + ω_{k,2}, and
//! vanishes in the relativistic limit |k| ≫ √(m₁m₂), where the
//! quantum-mechanical formulas of [`crate::qm`] come back.
//!
//! All formulas assume the frame k = (0, 0, |k|); the helicity label only
//! enters phases and drops out of every observable here.

use crate::error::{finite, Error, Result};
use crate::qm::{self, MixingAngle, QmSpectrum};

/// ω = √(k² + m²).
pub fn dispersion(m: f64, k: f64) -> Result<f64> {
    check_mass(m)?;
    check_momentum(k)?;
    Ok(k.hypot(m))
}

fn check_mass(m: f64) -> Result<f64> {
    finite("mass", m)?;
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::NonPositiveMass(m))
    }
}

fn check_momentum(k: f64) -> Result<f64> {
    finite("momentum", k)?;
    if k >= 0.0 {
        Ok(k)
    } else {
        Err(Error::NegativeMomentum(k))
    }
}

/// The Bogoliubov magnitudes |U_k| and |V_k| of one momentum sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bogoliubov {
    pub u_k: f64,
    pub v_k: f64,
}

impl Bogoliubov {
    /// |U_k|² + |V_k|², which should be one.
    pub fn norm(&self) -> f64 {
        self.u_k * self.u_k + self.v_k * self.v_k
    }
}

/// Computes |U_k| and |V_k| for masses m₁, m₂ at momentum |k|.
///
/// With Ω = 2√(ω₁ω₂(ω₁+m₁)(ω₂+m₂)):
///
/// * |U_k| = [k² + (ω₁+m₁)(ω₂+m₂)] / Ω
/// * |V_k| = |(ω₁+m₁) − (ω₂+m₂)|·k / Ω
///
/// The magnitude is taken in |V_k| so it is non-negative for either mass
/// ordering. The difference ω₁ − ω₂ is evaluated as (m₁² − m₂²)/(ω₁ + ω₂)
/// so the large-|k| regime keeps full relative precision.
pub fn bogoliubov(m1: f64, m2: f64, k: f64) -> Result<Bogoliubov> {
    let w1 = dispersion(m1, k)?;
    let w2 = dispersion(m2, k)?;
    let a1 = w1 + m1;
    let a2 = w2 + m2;
    let omega = 2.0 * (w1 * w2 * a1 * a2).sqrt();
    let dw = (m1 - m2) * (m1 + m2) / (w1 + w2);
    let da = (m1 - m2) + dw;
    Ok(Bogoliubov {
        u_k: (k * k + a1 * a2) / omega,
        v_k: da.abs() * k / omega,
    })
}

/// A single momentum sector with its derived energies and Bogoliubov
/// magnitudes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicSector {
    m1: f64,
    m2: f64,
    k: f64,
    omega_k1: f64,
    omega_k2: f64,
    coeffs: Bogoliubov,
}

impl KinematicSector {
    pub fn new(m1: f64, m2: f64, k: f64) -> Result<Self> {
        let coeffs = bogoliubov(m1, m2, k)?;
        Ok(Self {
            m1,
            m2,
            k,
            omega_k1: dispersion(m1, k)?,
            omega_k2: dispersion(m2, k)?,
            coeffs,
        })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn omega_k1(&self) -> f64 {
        self.omega_k1
    }

    pub fn omega_k2(&self) -> f64 {
        self.omega_k2
    }

    pub fn u_k(&self) -> f64 {
        self.coeffs.u_k
    }

    pub fn v_k(&self) -> f64 {
        self.coeffs.v_k
    }

    pub fn bogoliubov(&self) -> Bogoliubov {
        self.coeffs
    }

    /// The sector energies as a quantum-mechanical spectrum, used to compare
    /// against the plane-wave treatment.
    pub fn qm_spectrum(&self) -> QmSpectrum {
        QmSpectrum {
            omega1: self.omega_k1,
            omega2: self.omega_k2,
        }
    }

    /// (ω_{k,2} − ω_{k,1})t/2.
    pub fn phase_minus(&self, t: f64) -> f64 {
        0.5 * (self.omega_k2 - self.omega_k1) * t
    }

    /// (ω_{k,2} + ω_{k,1})t/2.
    pub fn phase_plus(&self, t: f64) -> f64 {
        0.5 * (self.omega_k2 + self.omega_k1) * t
    }
}

/// Flavor-charge expectations on an electron-neutrino state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QftOscillation {
    pub q_ee: f64,
    pub q_emu: f64,
    pub t: f64,
}

/// Charge variances and condensate density at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QftEntanglementReport {
    pub var_q_static: f64,
    pub var_q_e_dynamic: f64,
    pub condensation: f64,
}

/// Coefficients of Q_σ(t) = a·Q₁ + b·Q₂ + c·∫(ν₁†ν₂ + ν₂†ν₁).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargeCoefficients {
    pub mass1: f64,
    pub mass2: f64,
    pub cross: f64,
}

/// Decomposition of both flavor charges onto mass charges and the
/// mass-mixing cross term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChargeDecomposition {
    pub electron: ChargeCoefficients,
    pub muon: ChargeCoefficients,
}

impl ChargeDecomposition {
    /// Coefficients of Q_e + Q_μ; (1, 1, 0) expresses total charge
    /// conservation.
    pub fn total(&self) -> ChargeCoefficients {
        ChargeCoefficients {
            mass1: self.electron.mass1 + self.muon.mass1,
            mass2: self.electron.mass2 + self.muon.mass2,
            cross: self.electron.cross + self.muon.cross,
        }
    }
}

/// 𝒬_{e→e}(t) and 𝒬_{e→μ}(t):
///
/// 𝒬_{e→e} = 1 − sin²2θ·[|U_k|²·sin²((ω₂−ω₁)t/2) + |V_k|²·sin²((ω₂+ω₁)t/2)].
pub fn qft_oscillation(theta: MixingAngle, sector: &KinematicSector, t: f64) -> QftOscillation {
    let sm = sector.phase_minus(t).sin();
    let sp = sector.phase_plus(t).sin();
    let u2 = sector.u_k() * sector.u_k();
    let v2 = sector.v_k() * sector.v_k();
    let q_emu = theta.sin_sq_2theta() * (u2 * sm * sm + v2 * sp * sp);
    QftOscillation {
        q_ee: 1.0 - q_emu,
        q_emu,
        t,
    }
}

/// |𝒬_{e→e}(t) − P_ee(t)| with the plane-wave probability evaluated at the
/// same sector energies. Bounded by sin²2θ·|V_k|².
pub fn relativistic_limit_gap(theta: MixingAngle, m1: f64, m2: f64, k: f64, t: f64) -> Result<f64> {
    let sector = KinematicSector::new(m1, m2, k)?;
    let q = qft_oscillation(theta, &sector, t);
    let p = qm::transition_probabilities(theta, sector.qm_spectrum(), t);
    Ok((q.q_ee - p.p_ee).abs())
}

/// ⟨α_i†α_i⟩ = ⟨β_i†β_i⟩ in the flavor vacuum: sin²θ·|V_k|².
pub fn condensation_density(theta: MixingAngle, sector: &KinematicSector) -> f64 {
    theta.sin_sq() * sector.v_k() * sector.v_k()
}

/// ΔQ₁ = ΔQ₂ on a flavor state: ¼ sin²2θ, independent of the sector and
/// of time.
pub fn charge_variance_static(theta: MixingAngle) -> f64 {
    0.25 * theta.sin_sq_2theta()
}

/// ΔQ_e(t) on |ν_e⟩: 𝒬_{e→e}·𝒬_{e→μ}.
pub fn charge_variance_dynamic(theta: MixingAngle, sector: &KinematicSector, t: f64) -> f64 {
    let q = qft_oscillation(theta, sector, t);
    q.q_ee * q.q_emu
}

/// Coefficients relating flavor charges to mass charges:
/// Q_e = cos²θ Q₁ + sin²θ Q₂ + sinθcosθ·X and
/// Q_μ = sin²θ Q₁ + cos²θ Q₂ − sinθcosθ·X.
pub fn flavor_charge_decomposition(theta: MixingAngle) -> ChargeDecomposition {
    let (c2, s2) = (theta.cos_sq(), theta.sin_sq());
    let sc = theta.sin() * theta.cos();
    ChargeDecomposition {
        electron: ChargeCoefficients {
            mass1: c2,
            mass2: s2,
            cross: sc,
        },
        muon: ChargeCoefficients {
            mass1: s2,
            mass2: c2,
            cross: -sc,
        },
    }
}

/// All QFT entanglement measures at time t.
pub fn entanglement_report(theta: MixingAngle, sector: &KinematicSector, t: f64) -> QftEntanglementReport {
    QftEntanglementReport {
        var_q_static: charge_variance_static(theta),
        var_q_e_dynamic: charge_variance_dynamic(theta, sector, t),
        condensation: condensation_density(theta, sector),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(dispersion(3.0, 4.0).unwrap(), 5.0);
        assert_abs_diff_eq!(dispersion(1.0, 1.0).unwrap(), std::f64::consts::SQRT_2, epsilon = 1e-15);
        assert_eq!(dispersion(0.0, 1.0), Err(Error::NonPositiveMass(0.0)));
        assert_eq!(dispersion(-1.0, 1.0), Err(Error::NonPositiveMass(-1.0)));
        assert_eq!(dispersion(1.0, -1.0), Err(Error::NegativeMomentum(-1.0)));
    }

    #[test]
    fn bogoliubov_degenerate_cases() {
        for k in [0.0, 0.3, 7.0, 1e4] {
            let b = bogoliubov(1.3, 1.3, k).unwrap();
            assert_eq!(b.v_k, 0.0);
            assert_abs_diff_eq!(b.u_k, 1.0, epsilon = 1e-15);
        }
        let b = bogoliubov(1.0, 5.0, 0.0).unwrap();
        assert_eq!(b.v_k, 0.0);
        assert_abs_diff_eq!(b.u_k, 1.0, epsilon = 1e-15);
        assert!(bogoliubov(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bogoliubov_reference_sector() {
        // Values from a direct evaluation of the unsimplified formulas
        // (ω₁ = √2, ω₂ = √5) in extended precision.
        let b = bogoliubov(1.0, 2.0, 1.0).unwrap();
        let w1 = 2f64.sqrt();
        let w2 = 5f64.sqrt();
        let den = 2.0 * (w1 * w2 * (w1 + 1.0) * (w2 + 2.0)).sqrt();
        assert_abs_diff_eq!(b.u_k, (1.0 + (w1 + 1.0) * (w2 + 2.0)) / den, epsilon = 1e-15);
        assert_abs_diff_eq!(b.v_k, ((w2 + 2.0) - (w1 + 1.0)) / den, epsilon = 1e-15);
        assert_abs_diff_eq!(b.u_k, 0.987_087_457_637_497, epsilon = 1e-12);
        assert_abs_diff_eq!(b.v_k, 0.160_182_243_006_967, epsilon = 1e-12);
        assert_abs_diff_eq!(b.norm(), 1.0, epsilon = 1e-15);
        // symmetric under exchanging the masses
        assert_abs_diff_eq!(bogoliubov(2.0, 1.0, 1.0).unwrap().v_k, b.v_k, epsilon = 1e-15);
    }

    #[test]
    fn oscillation_examples() {
        let th = MixingAngle::from_sin_sq(0.314).unwrap();
        let sector = KinematicSector::new(1.0, 2.0, 1.0).unwrap();
        let q = qft_oscillation(th, &sector, 0.0);
        assert_eq!((q.q_ee, q.q_emu), (1.0, 0.0));

        // v_k = 0: reduces to the plane-wave formulas.
        let degenerate = KinematicSector::new(1.0, 1.0, 3.0).unwrap();
        for t in [0.5, 1.7, 9.0] {
            let q = qft_oscillation(th, &degenerate, t);
            let p = qm::transition_probabilities(th, degenerate.qm_spectrum(), t);
            assert_eq!(q.q_ee, p.p_ee);
        }
    }

    #[test]
    fn oscillation_algebraic_stress_case() {
        // θ = π/4, |U|² = |V|² = ½ and both phases π/2 give 𝒬_ee = 0. No
        // physical sector has |V|² = ½ here, so substitute by hand.
        let s22 = MixingAngle::new(FRAC_PI_4).unwrap().sin_sq_2theta();
        let q_ee = 1.0 - s22 * (0.5 * FRAC_PI_2.sin().powi(2) + 0.5 * FRAC_PI_2.sin().powi(2));
        assert_abs_diff_eq!(q_ee, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn relativistic_gap_examples() {
        let th = MixingAngle::from_sin_sq(0.314).unwrap();
        assert_eq!(relativistic_limit_gap(th, 1.0, 1.0, 2.0, 3.0).unwrap(), 0.0);
        assert_eq!(relativistic_limit_gap(th, 1.0, 2.0, 2.0, 0.0).unwrap(), 0.0);
        let k = 1e3 * 2f64.sqrt();
        let sector = KinematicSector::new(1.0, 2.0, k).unwrap();
        let bound = th.sin_sq_2theta() * sector.v_k().powi(2);
        assert!(sector.v_k() <= 1.01 * 1.0 / (2.0 * k));
        for i in 0..500 {
            let t = i as f64 * 0.731;
            assert!(relativistic_limit_gap(th, 1.0, 2.0, k, t).unwrap() <= bound * (1.0 + 1e-9));
        }
    }

    #[test]
    fn envelope_shrinks_beyond_peak() {
        let th = MixingAngle::from_sin_sq(0.314).unwrap();
        let (m1, m2): (f64, f64) = (0.5, 2.0);
        let mut last = f64::INFINITY;
        for i in 0..40 {
            let k = (m1 * m2).sqrt() * 1.2f64.powi(i + 1);
            let env = th.sin_sq_2theta() * bogoliubov(m1, m2, k).unwrap().v_k.powi(2);
            assert!(env < last);
            last = env;
        }
    }

    #[test]
    fn condensation_and_variances() {
        let zero = MixingAngle::new(0.0).unwrap();
        let th = MixingAngle::from_sin_sq(0.314).unwrap();
        let sector = KinematicSector::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(condensation_density(zero, &sector), 0.0);
        let degenerate = KinematicSector::new(2.0, 2.0, 1.0).unwrap();
        assert_eq!(condensation_density(th, &degenerate), 0.0);
        assert_abs_diff_eq!(
            condensation_density(th, &sector),
            0.314 * sector.v_k().powi(2),
            epsilon = 1e-15
        );

        assert_eq!(charge_variance_static(zero), 0.0);
        assert_abs_diff_eq!(
            charge_variance_static(MixingAngle::new(FRAC_PI_4).unwrap()),
            0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(charge_variance_static(th), 0.215404, epsilon = 1e-12);

        assert_eq!(charge_variance_dynamic(th, &sector, 0.0), 0.0);
        for t in [0.3, 2.0, 11.0] {
            let v = charge_variance_dynamic(th, &degenerate, t);
            assert_eq!(v, qm::variance_flavor_number_dynamic(th, degenerate.qm_spectrum(), t));
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = flavor_charge_decomposition(MixingAngle::new(0.0).unwrap());
        assert_eq!(
            d.electron,
            ChargeCoefficients {
                mass1: 1.0,
                mass2: 0.0,
                cross: 0.0
            }
        );
        let d = flavor_charge_decomposition(MixingAngle::new(FRAC_PI_4).unwrap());
        assert_abs_diff_eq!(d.electron.mass1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.electron.mass2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.electron.cross, 0.5, epsilon = 1e-15);
        let total = flavor_charge_decomposition(MixingAngle::from_sin_sq(0.314).unwrap()).total();
        assert_abs_diff_eq!(total.mass1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(total.mass2, 1.0, epsilon = 1e-15);
        assert_eq!(total.cross, 0.0);
    }
}
