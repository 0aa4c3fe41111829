//! Two-mode oracle for plane-wave mixing: modes (α₁, α₂), one particle.

use num_complex::Complex64 as C64;

use super::field::{Axis, ChargeKind, FieldSector, Flavor, Slot};
use super::space::{
    expectation, linear_entropy, reduced_density, two_mode_amplitudes, variance, CMatrix, FockOperator, FockSpace,
    FockState, ModeLabel,
};
use crate::error::Result;
use crate::qm::{hamiltonian_coefficients, mixing_matrix, MixingAngle, QmSpectrum, Su2Variances};

/// α_e(t) and α_μ(t) as matrices.
#[derive(Clone, Debug)]
pub struct QmFlavorOps {
    pub electron: FockOperator,
    pub muon: FockOperator,
}

impl QmFlavorOps {
    pub fn get(&self, flavor: Flavor) -> &FockOperator {
        match flavor {
            Flavor::Electron => &self.electron,
            Flavor::Muon => &self.muon,
        }
    }
}

/// Every single-particle observable of |ν_e⟩ at one time, computed from
/// matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QmOracleObservables {
    pub t: f64,
    /// {α_e(t), α_e†(0)} and {α_μ(t), α_e†(0)}.
    pub u_ee: C64,
    pub u_emu: C64,
    /// ⟨ν_e|N_σ(t)|ν_e⟩ in the Heisenberg picture.
    pub p_ee: f64,
    pub p_emu: f64,
    /// The same probabilities from e^{−iHt}|ν_e⟩ and N_σ(0).
    pub p_ee_schrodinger: f64,
    pub p_emu_schrodinger: f64,
    /// Linear entropy in the mass-mode bipartition.
    pub s_linear_static: f64,
    /// Linear entropy of e^{−iHt}|ν_e⟩ in the flavor-mode bipartition.
    pub s_linear_dynamic: f64,
    pub var_n1: f64,
    pub var_n2: f64,
    pub var_ne: f64,
    pub var_nmu: f64,
    pub su2: Su2Variances,
}

/// Brute-force engine on the two-mode space.
#[derive(Debug)]
pub struct QmOracle {
    theta: MixingAngle,
    spectrum: QmSpectrum,
    space: FockSpace,
    sector: FieldSector,
}

impl QmOracle {
    pub fn new(theta: MixingAngle, spectrum: QmSpectrum) -> Result<Self> {
        let space = FockSpace::new(vec![ModeLabel::particle(1), ModeLabel::particle(2)])?;
        let one = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        let slot = |mode: usize, omega: f64| {
            vec![Slot {
                mode,
                creation: false,
                omega,
            }]
        };
        let sector = FieldSector {
            slots: [slot(0, spectrum.omega1), slot(1, spectrum.omega2)],
            overlaps: [[one.clone(), one.clone()], [one.clone(), one]],
        };
        Ok(Self {
            theta,
            spectrum,
            space,
            sector,
        })
    }

    pub fn theta(&self) -> MixingAngle {
        self.theta
    }

    pub fn spectrum(&self) -> QmSpectrum {
        self.spectrum
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    /// α_i(t) = α_i e^{−iω_i t}.
    pub fn mass_ops(&self, t: f64) -> [FockOperator; 2] {
        [0, 1].map(|i| self.sector.slots[i][0].operator(&self.space, t))
    }

    pub fn flavor_ops(&self, t: f64) -> QmFlavorOps {
        let r = mixing_matrix(self.theta);
        let [a1, a2] = self.mass_ops(t);
        let combine = |row: [f64; 2], label: &str| (&(&a1 * row[0]) + &(&a2 * row[1])).with_label(label);
        QmFlavorOps {
            electron: combine(r[0], "α_e"),
            muon: combine(r[1], "α_μ"),
        }
    }

    /// H = ω₁N₁ + ω₂N₂.
    pub fn hamiltonian(&self) -> FockOperator {
        let h = &(self.space.number(0) * self.spectrum.omega1) + &(self.space.number(1) * self.spectrum.omega2);
        h.with_label("H")
    }

    /// e^{−iHt}, by matrix exponential.
    pub fn propagator(&self, t: f64) -> FockOperator {
        let gen = self.hamiltonian().matrix() * C64::new(0.0, -t);
        FockOperator::new(gen.exp(), "e^{-iHt}")
    }

    /// α_σ†(0)|0⟩.
    pub fn flavor_state(&self, flavor: Flavor) -> FockState {
        let op = self.flavor_ops(0.0).get(flavor).dagger();
        op.apply(&self.space.vacuum())
            .expect("same space")
            .with_label(match flavor {
                Flavor::Electron => "|ν_e⟩",
                Flavor::Muon => "|ν_μ⟩",
            })
    }

    /// Charges as field bilinears at time t.
    pub fn charge(&self, kind: ChargeKind, t: f64) -> FockOperator {
        self.sector
            .charge(&self.space, &kind.kernel(self.theta), t)
            .with_label(format!("{kind}({t})"))
    }

    /// Largest deviation of ω₁N₁ + ω₂N₂ from
    /// ω_ee N_e(t) + ω_μμ N_μ(t) + ω_eμ(J₊(t) + J₋(t)).
    pub fn hamiltonian_identity_residual(&self, t: f64) -> f64 {
        let h = hamiltonian_coefficients(self.theta, self.spectrum);
        let f = self.flavor_ops(t);
        let ne = &f.electron.dagger() * &f.electron;
        let nmu = &f.muon.dagger() * &f.muon;
        let jp = &f.electron.dagger() * &f.muon;
        let jm = jp.dagger();
        let rhs = &(&(ne * h.omega_ee) + &(nmu * h.omega_mumu)) + &(&(&jp + &jm) * h.omega_emu);
        self.hamiltonian().max_abs_diff(&rhs)
    }

    /// Largest deviation of e^{iHt} α_i e^{−iHt} from α_i e^{−iω_i t}.
    pub fn heisenberg_residual(&self, t: f64) -> f64 {
        let fwd = self.propagator(t);
        let back = fwd.dagger();
        let ops = self.mass_ops(t);
        (0..2)
            .map(|i| (&(&back * self.space.annihilator(i)) * &fwd).max_abs_diff(&ops[i]))
            .fold(0.0, f64::max)
    }

    pub fn observables(&self, t: f64) -> Result<QmOracleObservables> {
        let vac = self.space.vacuum();
        let nu_e = self.flavor_state(Flavor::Electron);
        let f0 = self.flavor_ops(0.0);
        let ft = self.flavor_ops(t);
        let e_dag0 = f0.electron.dagger();
        let amp = |op: &FockOperator| {
            let (c, _) = op.anticommutator(&e_dag0).scalar_part();
            c
        };

        let ne_t = self.charge(ChargeKind::Flavor(Flavor::Electron), t);
        let nmu_t = self.charge(ChargeKind::Flavor(Flavor::Muon), t);
        let ne_0 = self.charge(ChargeKind::Flavor(Flavor::Electron), 0.0);
        let nmu_0 = self.charge(ChargeKind::Flavor(Flavor::Muon), 0.0);
        let psi_t = self.propagator(t).apply(&nu_e)?;

        let static_amps = two_mode_amplitudes(&nu_e, [self.space.annihilator(0), self.space.annihilator(1)], &vac)?;
        let dynamic_amps = two_mode_amplitudes(&psi_t, [&f0.electron, &f0.muon], &vac)?;

        let su2 = |axis: Axis| variance(&nu_e, &self.charge(ChargeKind::FlavorSu2(axis), t));
        Ok(QmOracleObservables {
            t,
            u_ee: amp(&ft.electron),
            u_emu: amp(&ft.muon),
            p_ee: expectation(&nu_e, &ne_t)?.re,
            p_emu: expectation(&nu_e, &nmu_t)?.re,
            p_ee_schrodinger: expectation(&psi_t, &ne_0)?.re,
            p_emu_schrodinger: expectation(&psi_t, &nmu_0)?.re,
            s_linear_static: linear_entropy(&reduced_density(&static_amps, 0)),
            s_linear_dynamic: linear_entropy(&reduced_density(&dynamic_amps, 0)),
            var_n1: variance(&nu_e, &self.charge(ChargeKind::Mass(1), t))?,
            var_n2: variance(&nu_e, &self.charge(ChargeKind::Mass(2), t))?,
            var_ne: variance(&nu_e, &ne_t)?,
            var_nmu: variance(&nu_e, &nmu_t)?,
            su2: Su2Variances {
                j1: su2(Axis::J1)?,
                j2: su2(Axis::J2)?,
                j3: su2(Axis::J3)?,
                c: variance(&nu_e, &self.charge(ChargeKind::Casimir, t))?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::space::car_residual;
    use crate::qm;
    use crate::tolerance;

    fn oracle(theta: f64) -> QmOracle {
        QmOracle::new(MixingAngle::new(theta).unwrap(), QmSpectrum::new(1.1, 2.7).unwrap()).unwrap()
    }

    #[test]
    fn zero_angle_gives_mass_ops() {
        let o = oracle(0.0);
        let f = o.flavor_ops(0.0);
        assert_eq!(f.electron.max_abs_diff(o.space().annihilator(0)), 0.0);
        assert_eq!(f.muon.max_abs_diff(o.space().annihilator(1)), 0.0);
    }

    #[test]
    fn flavor_ops_obey_car() {
        let o = oracle(0.52);
        for t in [0.0, 0.8, -3.1] {
            let f = o.flavor_ops(t);
            assert!(car_residual(&[f.electron, f.muon]) < tolerance::CAR);
        }
    }

    #[test]
    fn matches_closed_forms() {
        let o = oracle(0.37);
        for t in [0.0, 0.4, 1.9, 7.3] {
            let obs = o.observables(t).unwrap();
            let amp = qm::evolve_amplitudes(o.theta(), o.spectrum(), t);
            let p = qm::transition_probabilities(o.theta(), o.spectrum(), t);
            let su2 = qm::variance_su2_flavor(o.theta(), o.spectrum(), t).derived;
            assert!((obs.u_ee - amp.u_ee).norm() < tolerance::STATE);
            assert!((obs.u_emu - amp.u_emu).norm() < tolerance::STATE);
            assert!((obs.p_ee - p.p_ee).abs() < tolerance::STATE);
            assert!((obs.p_emu_schrodinger - p.p_emu).abs() < tolerance::STATE);
            assert!((obs.s_linear_static - qm::linear_entropy_static(o.theta())).abs() < tolerance::STATE);
            assert!(
                (obs.s_linear_dynamic - qm::linear_entropy_dynamic(o.theta(), o.spectrum(), t)).abs()
                    < tolerance::STATE
            );
            assert!((obs.var_ne - p.p_ee * p.p_emu).abs() < tolerance::STATE);
            assert!((obs.su2.j1 - su2.j1).abs() < tolerance::STATE);
            assert!((obs.su2.j2 - su2.j2).abs() < tolerance::STATE);
            assert!((obs.su2.j3 - su2.j3).abs() < tolerance::STATE);
            assert!(obs.su2.c.abs() < tolerance::STATE);
        }
    }

    #[test]
    fn hamiltonian_identities() {
        let o = oracle(1.1);
        for t in [0.0, 2.5] {
            assert!(o.hamiltonian_identity_residual(t) < tolerance::ALGEBRA);
            assert!(o.heisenberg_residual(t) < tolerance::EXPM);
        }
    }
}
