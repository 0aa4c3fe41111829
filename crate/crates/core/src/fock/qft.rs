//! Four-mode oracle for one (k, r) sector of mixed Dirac fields.
//!
//! Modes are ordered (α₁, α₂, β₁, β₂). The frame has k along the third
//! axis, so the Bogoliubov coefficients are real, |U_k| and |V_k| enter
//! directly, and the helicity only appears through ε = (−1)^r.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::field::{ChargeKind, FieldSector, Flavor, Slot};
use super::space::{expectation, variance, FockOperator, FockSpace, FockState, ModeLabel};
use crate::error::{Error, Result};
use crate::qft::{qft_oscillation, KinematicSector};
use crate::qm::MixingAngle;
use crate::tolerance;

const A1: usize = 0;
const A2: usize = 1;
const B1: usize = 2;
const B2: usize = 3;

/// α_i(t) and β_i(t).
#[derive(Clone, Debug)]
pub struct QftMassOps {
    pub alpha: [FockOperator; 2],
    pub beta: [FockOperator; 2],
}

/// α_σ(t) and β_σ(t).
#[derive(Clone, Debug)]
pub struct QftFlavorOps {
    pub alpha_e: FockOperator,
    pub alpha_mu: FockOperator,
    pub beta_e: FockOperator,
    pub beta_mu: FockOperator,
}

impl QftFlavorOps {
    pub fn alpha(&self, flavor: Flavor) -> &FockOperator {
        match flavor {
            Flavor::Electron => &self.alpha_e,
            Flavor::Muon => &self.alpha_mu,
        }
    }

    pub fn beta(&self, flavor: Flavor) -> &FockOperator {
        match flavor {
            Flavor::Electron => &self.beta_e,
            Flavor::Muon => &self.beta_mu,
        }
    }

    pub fn all(&self) -> [&FockOperator; 4] {
        [&self.alpha_e, &self.alpha_mu, &self.beta_e, &self.beta_mu]
    }
}

/// Outcome of the mixing-generator diagnostic.
///
/// The generator is a sector ansatz; when `passed` is false the direct
/// Bogoliubov definitions stay authoritative and nothing is substituted.
#[derive(Clone, Debug)]
pub struct MixingGeneratorDiagnostic {
    pub generator: FockOperator,
    /// max |G†G − 𝟙|.
    pub unitarity_defect: f64,
    /// max over the four mass annihilators of |G⁻¹ a G − a_flavor(0)|.
    pub ops_residual: f64,
    /// ‖G⁻¹|0⟩ − |0⟩_{eμ}‖.
    pub vacuum_residual: f64,
    pub passed: bool,
}

/// ⟨α_e†α_e β_e†β_e⟩ against ⟨β_e†β_e⟩, and the variance of Q_e(t) assembled
/// from number operators against q_ee·q_eμ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourPointReport {
    pub t: f64,
    pub four_point: f64,
    pub two_point: f64,
    pub assembled_variance: f64,
    pub closed_form_variance: f64,
}

impl FourPointReport {
    pub fn max_residual(&self) -> f64 {
        (self.four_point - self.two_point)
            .abs()
            .max((self.assembled_variance - self.closed_form_variance).abs())
    }
}

/// Observables on |ν_e⟩ and |0⟩_{eμ} at one time, all computed from matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QftOracleObservables {
    pub t: f64,
    /// ⟨ν_e|Q_σ(t)|ν_e⟩ from the flavor-operator charges.
    pub q_ee: f64,
    pub q_emu: f64,
    /// The same expectation from the field-bilinear charge.
    pub q_ee_field: f64,
    /// |{α_e(t), α_e†(0)}|² + |{β_e†(t), α_e†(0)}|².
    pub q_ee_anticommutators: f64,
    /// ΔQ₁ and ΔQ₂ on |ν_e⟩.
    pub var_q1: f64,
    pub var_q2: f64,
    /// ΔQ_e(t) on |ν_e⟩.
    pub var_qe: f64,
    /// ⟨0_{eμ}|α₁†α₁|0_{eμ}⟩ and ⟨0_{eμ}|β₁†β₁|0_{eμ}⟩.
    pub condensation_alpha: f64,
    pub condensation_beta: f64,
    /// ⟨0|0_{eμ}⟩.
    pub vacuum_overlap: C64,
    /// ⟨0_{eμ}|Q_e(t)|0_{eμ}⟩.
    pub vacuum_charge: f64,
}

/// Brute-force engine on one four-mode sector.
#[derive(Debug)]
pub struct QftOracle {
    theta: MixingAngle,
    sector: KinematicSector,
    helicity: u8,
    space: FockSpace,
    field: FieldSector,
}

impl QftOracle {
    pub fn new(theta: MixingAngle, sector: KinematicSector, helicity: u8) -> Result<Self> {
        if !matches!(helicity, 1 | 2) {
            return Err(Error::Helicity(helicity));
        }
        let space = FockSpace::new(vec![
            ModeLabel::particle(1).with_helicity(helicity),
            ModeLabel::particle(2).with_helicity(helicity),
            ModeLabel::antiparticle(1).with_helicity(helicity),
            ModeLabel::antiparticle(2).with_helicity(helicity),
        ])?;
        let slots = |a: usize, b: usize, omega: f64| {
            vec![
                Slot {
                    mode: a,
                    creation: false,
                    omega,
                },
                Slot {
                    mode: b,
                    creation: true,
                    omega,
                },
            ]
        };
        let eps = if helicity.is_multiple_of(2) { 1.0 } else { -1.0 };
        let (u, v) = (sector.u_k(), sector.v_k() * eps);
        let c = |x: f64| C64::new(x, 0.0);
        let o12 = DMatrix::from_row_slice(2, 2, &[c(u), c(v), c(-v), c(u)]);
        let o21 = o12.adjoint();
        let id = DMatrix::identity(2, 2);
        let field = FieldSector {
            slots: [slots(A1, B1, sector.omega_k1()), slots(A2, B2, sector.omega_k2())],
            overlaps: [[id.clone(), o12], [o21, id]],
        };
        Ok(Self {
            theta,
            sector,
            helicity,
            space,
            field,
        })
    }

    pub fn theta(&self) -> MixingAngle {
        self.theta
    }

    pub fn sector(&self) -> &KinematicSector {
        &self.sector
    }

    pub fn helicity(&self) -> u8 {
        self.helicity
    }

    /// ε = (−1)^r.
    pub fn epsilon(&self) -> f64 {
        if self.helicity.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    fn phase(&self, mode: usize, t: f64) -> C64 {
        let omega = match mode {
            A1 | B1 => self.sector.omega_k1(),
            _ => self.sector.omega_k2(),
        };
        C64::from_polar(1.0, -omega * t)
    }

    /// α_i(t) = α_i e^{−iω_i t}, β_i(t) = β_i e^{−iω_i t}.
    pub fn mass_ops(&self, t: f64) -> QftMassOps {
        let op = |m: usize| self.space.annihilator(m) * self.phase(m, t);
        QftMassOps {
            alpha: [op(A1), op(A2)],
            beta: [op(B1), op(B2)],
        }
    }

    /// The flavor annihilators of the sector at time t.
    pub fn flavor_ops(&self, t: f64) -> QftFlavorOps {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let (u, ev) = (self.sector.u_k(), self.epsilon() * self.sector.v_k());
        let m = self.mass_ops(t);
        let [a1, a2] = &m.alpha;
        let [b1, b2] = &m.beta;
        let (a1d, a2d, b1d, b2d) = (a1.dagger(), a2.dagger(), b1.dagger(), b2.dagger());
        let lin = |terms: &[(&FockOperator, f64)], label: &str| {
            terms
                .iter()
                .fold(FockOperator::zeros(self.space.dim()), |acc, (op, w)| &acc + &(*op * *w))
                .with_label(label)
        };
        QftFlavorOps {
            alpha_e: lin(&[(a1, c), (a2, s * u), (&b2d, s * ev)], "α_e"),
            alpha_mu: lin(&[(a2, c), (a1, -s * u), (&b1d, s * ev)], "α_μ"),
            beta_e: lin(&[(b1, c), (b2, s * u), (&a2d, -s * ev)], "β_e"),
            beta_mu: lin(&[(b2, c), (b1, -s * u), (&a1d, -s * ev)], "β_μ"),
        }
    }

    /// |0⟩_{eμ} restricted to this sector, written out term by term:
    /// [(1 − s²V²) − εscV(α₁†β₂† + α₂†β₁†) + εs²UV(α₁†β₁† − α₂†β₂†)
    ///  + s²V² α₁†β₂†α₂†β₁†]|0⟩.
    pub fn flavor_vacuum(&self) -> FockState {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let (u, v, eps) = (self.sector.u_k(), self.sector.v_k(), self.epsilon());
        let cr = |m: usize| self.space.creator(m);
        let pair = |x: usize, y: usize| &cr(x) * &cr(y);
        let quartet = &pair(A1, B2) * &pair(A2, B1);
        let bracket = [
            (self.space.identity(), 1.0 - s * s * v * v),
            (&pair(A1, B2) + &pair(A2, B1), -eps * s * c * v),
            (&pair(A1, B1) - &pair(A2, B2), eps * s * s * u * v),
            (quartet, s * s * v * v),
        ]
        .into_iter()
        .fold(FockOperator::zeros(self.space.dim()), |acc, (op, w)| &acc + &(op * w));
        bracket
            .apply(&self.space.vacuum())
            .expect("same space")
            .with_label("|0⟩_eμ")
    }

    /// α_σ†(0)|0⟩_{eμ}.
    pub fn flavor_state(&self, flavor: Flavor) -> FockState {
        let op = self.flavor_ops(0.0).alpha(flavor).dagger();
        op.apply(&self.flavor_vacuum())
            .expect("same space")
            .with_label(match flavor {
                Flavor::Electron => "|ν_e⟩",
                Flavor::Muon => "|ν_μ⟩",
            })
    }

    /// The flavor states written out as three-term brackets on |0⟩:
    /// |ν_e⟩ = [cα₁† + sUα₂† − εsV α₁†α₂†β₁†]|0⟩ and
    /// |ν_μ⟩ = [cα₂† − sUα₁† + εsV α₁†α₂†β₂†]|0⟩.
    pub fn explicit_flavor_state(&self, flavor: Flavor) -> FockState {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let (u, v, eps) = (self.sector.u_k(), self.sector.v_k(), self.epsilon());
        let cr = |m: usize| self.space.creator(m);
        let triple = |x: usize| &(&cr(A1) * &cr(A2)) * &cr(x);
        let op = match flavor {
            Flavor::Electron => &(&(cr(A1) * c) + &(cr(A2) * (s * u))) + &(triple(B1) * (-eps * s * v)),
            Flavor::Muon => &(&(cr(A2) * c) + &(cr(A1) * (-s * u))) + &(triple(B2) * (eps * s * v)),
        };
        op.apply(&self.space.vacuum()).expect("same space")
    }

    /// Charges as field bilinears at time t, normal ordered against the mass
    /// vacuum.
    pub fn charge(&self, kind: ChargeKind, t: f64) -> FockOperator {
        self.field
            .charge(&self.space, &kind.kernel(self.theta), t)
            .with_label(format!("{kind}({t})"))
    }

    /// Q_σ(t) = α_σ†(t)α_σ(t) − β_σ†(t)β_σ(t), normal ordered against the
    /// flavor vacuum.
    pub fn flavor_charge(&self, flavor: Flavor, t: f64) -> FockOperator {
        let f = self.flavor_ops(t);
        let a = f.alpha(flavor);
        let b = f.beta(flavor);
        let q = &(&a.dagger() * a) - &(&b.dagger() * b);
        q.normal_ordered(&self.flavor_vacuum())
            .expect("same space")
            .with_label(format!("Q_{}({t})", flavor_symbol(flavor)))
    }

    /// Q_i = α_i†α_i − β_i†β_i, from number operators.
    pub fn mass_charge(&self, mass_index: u8) -> FockOperator {
        let (a, b) = if mass_index == 1 { (A1, B1) } else { (A2, B2) };
        (&self.space.number(a) - &self.space.number(b)).with_label(format!("Q_{mass_index}"))
    }

    /// ∫(ν₁†ν₂ + ν₂†ν₁) at time t.
    pub fn cross_term(&self, t: f64) -> FockOperator {
        (&self.field.bilinear(&self.space, 0, 1, t) + &self.field.bilinear(&self.space, 1, 0, t)).with_label("X")
    }

    /// H = Σ_i ω_i(α_i†α_i + β_i†β_i).
    pub fn hamiltonian(&self) -> FockOperator {
        let w = [self.sector.omega_k1(), self.sector.omega_k2()];
        let mut h = FockOperator::zeros(self.space.dim());
        for (m, omega) in [(A1, w[0]), (A2, w[1]), (B1, w[0]), (B2, w[1])] {
            h = &h + &(self.space.number(m) * omega);
        }
        h.with_label("H")
    }

    /// Largest deviation of e^{iHt} a e^{−iHt} from the phase-evolved mass
    /// annihilators, over all four modes.
    pub fn heisenberg_residual(&self, t: f64) -> f64 {
        let fwd = FockOperator::new((self.hamiltonian().matrix() * C64::new(0.0, -t)).exp(), "e^{-iHt}");
        let back = fwd.dagger();
        let m = self.mass_ops(t);
        let evolved = [&m.alpha[0], &m.alpha[1], &m.beta[0], &m.beta[1]];
        (0..4)
            .map(|j| (&(&back * self.space.annihilator(j)) * &fwd).max_abs_diff(evolved[j]))
            .fold(0.0, f64::max)
    }

    /// |a|0⟩_{eμ}| for the four flavor annihilators at t = 0, maximum.
    pub fn vacuum_annihilation_residual(&self) -> f64 {
        let vac = self.flavor_vacuum();
        self.flavor_ops(0.0)
            .all()
            .iter()
            .map(|op| op.apply(&vac).expect("same space").norm())
            .fold(0.0, f64::max)
    }

    /// Residuals of Q_e(0)|ν_e⟩ = |ν_e⟩, Q_μ(0)|ν_e⟩ = 0 and Q_σ(0)|0⟩_{eμ} = 0.
    pub fn eigen_residuals(&self) -> [f64; 4] {
        let nu_e = self.flavor_state(Flavor::Electron);
        let vac = self.flavor_vacuum();
        let qe = self.flavor_charge(Flavor::Electron, 0.0);
        let qmu = self.flavor_charge(Flavor::Muon, 0.0);
        let apply = |q: &FockOperator, s: &FockState| q.apply(s).expect("same space");
        [
            apply(&qe, &nu_e).distance(&nu_e).expect("same space"),
            apply(&qmu, &nu_e).norm(),
            apply(&qe, &vac).norm(),
            apply(&qmu, &vac).norm(),
        ]
    }

    /// Builds G = exp[θ(K − K†)] with
    /// K = Uα₁†α₂ + εVα₁†β₂† − εVβ₁α₂ + Uβ₁β₂†,
    /// and checks it against the direct definitions.
    pub fn mixing_generator(&self) -> MixingGeneratorDiagnostic {
        let (u, ev) = (self.sector.u_k(), self.epsilon() * self.sector.v_k());
        let a = |m: usize| self.space.annihilator(m);
        let cr = |m: usize| self.space.creator(m);
        let k = [
            (&cr(A1) * a(A2)) * u,
            (&cr(A1) * &cr(B2)) * ev,
            (a(B1) * a(A2)) * (-ev),
            (a(B1) * &cr(B2)) * u,
        ]
        .into_iter()
        .fold(FockOperator::zeros(self.space.dim()), |acc, x| &acc + &x);
        let kernel = (&k - &k.dagger()) * self.theta.theta();
        let g = FockOperator::new(kernel.matrix().exp(), "G");
        let g_inv = FockOperator::new((kernel.matrix() * C64::new(-1.0, 0.0)).exp(), "G⁻¹");

        let unitarity_defect = (&g.dagger() * &g).max_abs_diff(&self.space.identity());
        let f = self.flavor_ops(0.0);
        let targets = [(A1, &f.alpha_e), (A2, &f.alpha_mu), (B1, &f.beta_e), (B2, &f.beta_mu)];
        let ops_residual = targets
            .iter()
            .map(|(m, target)| (&(&g_inv * a(*m)) * &g).max_abs_diff(target))
            .fold(0.0, f64::max);
        let vacuum_residual = g_inv
            .apply(&self.space.vacuum())
            .expect("same space")
            .distance(&self.flavor_vacuum())
            .expect("same space");
        let passed = unitarity_defect.max(ops_residual).max(vacuum_residual) < tolerance::EXPM;
        MixingGeneratorDiagnostic {
            generator: g,
            unitarity_defect,
            ops_residual,
            vacuum_residual,
            passed,
        }
    }

    pub fn four_point(&self, t: f64) -> Result<FourPointReport> {
        let nu_e = self.flavor_state(Flavor::Electron);
        let f = self.flavor_ops(t);
        let na = &f.alpha_e.dagger() * &f.alpha_e;
        let nb = &f.beta_e.dagger() * &f.beta_e;
        let four_point = expectation(&nu_e, &(&na * &nb))?.re;
        let two_point = expectation(&nu_e, &nb)?.re;
        let mean_a = expectation(&nu_e, &na)?.re;
        let q = mean_a - two_point;
        let assembled_variance = mean_a + two_point - 2.0 * four_point - q * q;
        let osc = qft_oscillation(self.theta, &self.sector, t);
        Ok(FourPointReport {
            t,
            four_point,
            two_point,
            assembled_variance,
            closed_form_variance: osc.q_ee * osc.q_emu,
        })
    }

    pub fn observables(&self, t: f64) -> Result<QftOracleObservables> {
        let nu_e = self.flavor_state(Flavor::Electron);
        let vac_f = self.flavor_vacuum();
        let qe = self.flavor_charge(Flavor::Electron, t);
        let qmu = self.flavor_charge(Flavor::Muon, t);
        let qe_field = self.charge(ChargeKind::Flavor(Flavor::Electron), t);

        let f0 = self.flavor_ops(0.0);
        let ft = self.flavor_ops(t);
        let e_dag0 = f0.alpha_e.dagger();
        let amp = |op: &FockOperator| op.anticommutator(&e_dag0).scalar_part().0.norm_sqr();

        Ok(QftOracleObservables {
            t,
            q_ee: expectation(&nu_e, &qe)?.re,
            q_emu: expectation(&nu_e, &qmu)?.re,
            q_ee_field: expectation(&nu_e, &qe_field)?.re,
            q_ee_anticommutators: amp(&ft.alpha_e) + amp(&ft.beta_e.dagger()),
            var_q1: variance(&nu_e, &self.charge(ChargeKind::Mass(1), t))?,
            var_q2: variance(&nu_e, &self.charge(ChargeKind::Mass(2), t))?,
            var_qe: variance(&nu_e, &qe)?,
            condensation_alpha: expectation(&vac_f, &self.space.number(A1))?.re,
            condensation_beta: expectation(&vac_f, &self.space.number(B1))?.re,
            vacuum_overlap: self.space.vacuum().inner(&vac_f)?,
            vacuum_charge: expectation(&vac_f, &qe)?.re,
        })
    }
}

fn flavor_symbol(flavor: Flavor) -> &'static str {
    match flavor {
        Flavor::Electron => "e",
        Flavor::Muon => "μ",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::space::car_residual;
    use crate::qft;

    fn oracle(theta: f64, m1: f64, m2: f64, k: f64, r: u8) -> QftOracle {
        QftOracle::new(
            MixingAngle::new(theta).unwrap(),
            KinematicSector::new(m1, m2, k).unwrap(),
            r,
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_helicity() {
        let th = MixingAngle::new(0.3).unwrap();
        let s = KinematicSector::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(QftOracle::new(th, s, 3).unwrap_err(), Error::Helicity(3));
    }

    #[test]
    fn zero_angle_is_trivial() {
        let o = oracle(0.0, 1.0, 2.0, 1.0, 1);
        let f = o.flavor_ops(0.0);
        assert_eq!(f.alpha_e.max_abs_diff(o.space().annihilator(A1)), 0.0);
        assert_eq!(f.beta_mu.max_abs_diff(o.space().annihilator(B2)), 0.0);
        assert!(o.flavor_vacuum().distance(&o.space().vacuum()).unwrap() < 1e-15);
    }

    #[test]
    fn vacuum_and_states() {
        for r in [1, 2] {
            let o = oracle(0.58, 0.7, 2.3, 1.1, r);
            let vac = o.flavor_vacuum();
            assert!((vac.norm() - 1.0).abs() < 1e-12);
            assert!(o.vacuum_annihilation_residual() < tolerance::STATE);
            for fl in [Flavor::Electron, Flavor::Muon] {
                let s = o.flavor_state(fl);
                assert!((s.norm() - 1.0).abs() < 1e-12);
                assert!(s.distance(&o.explicit_flavor_state(fl)).unwrap() < tolerance::STATE);
            }
            let e = o.flavor_state(Flavor::Electron);
            let mu = o.flavor_state(Flavor::Muon);
            assert!(e.inner(&mu).unwrap().norm() < tolerance::STATE);
            assert!(o.eigen_residuals().iter().all(|r| *r < tolerance::STATE));
        }
    }

    #[test]
    fn flavor_ops_keep_car() {
        let o = oracle(1.2, 0.4, 3.0, 0.9, 2);
        for t in [0.0, 1.7] {
            let f = o.flavor_ops(t);
            let ops: Vec<FockOperator> = f.all().into_iter().cloned().collect();
            assert!(car_residual(&ops) < tolerance::ALGEBRA);
        }
    }

    #[test]
    fn observables_match_closed_forms() {
        let o = oracle(0.44, 1.0, 2.0, 1.0, 1);
        let th = o.theta();
        for t in [0.0, 0.9, 4.4] {
            let obs = o.observables(t).unwrap();
            let osc = qft::qft_oscillation(th, o.sector(), t);
            assert!((obs.q_ee - osc.q_ee).abs() < tolerance::STATE);
            assert!((obs.q_ee_field - osc.q_ee).abs() < tolerance::STATE);
            assert!((obs.q_ee_anticommutators - osc.q_ee).abs() < tolerance::STATE);
            assert!((obs.q_emu - osc.q_emu).abs() < tolerance::STATE);
            assert!((obs.var_q1 - qft::charge_variance_static(th)).abs() < tolerance::STATE);
            assert!((obs.var_qe - qft::charge_variance_dynamic(th, o.sector(), t)).abs() < tolerance::STATE);
            assert!((obs.condensation_alpha - qft::condensation_density(th, o.sector())).abs() < tolerance::STATE);
            assert!(obs.vacuum_charge.abs() < tolerance::STATE);
            let v2 = o.sector().v_k().powi(2);
            assert!((obs.vacuum_overlap.re - (1.0 - th.sin_sq() * v2)).abs() < tolerance::STATE);
            assert!(o.four_point(t).unwrap().max_residual() < tolerance::STATE);
        }
    }

    #[test]
    fn generator_reproduces_direct_definitions() {
        let d = oracle(0.9, 0.5, 1.8, 0.6, 1).mixing_generator();
        assert!(d.passed, "{d:?}");
        let id = oracle(0.0, 0.5, 1.8, 0.6, 2).mixing_generator();
        assert!(id.generator.max_abs_diff(&FockOperator::identity(16)) < 1e-15);
    }

    #[test]
    fn heisenberg_self_consistency() {
        let o = oracle(0.3, 1.0, 4.0, 2.0, 2);
        assert!(o.heisenberg_residual(1.3) < tolerance::EXPM);
    }
}
