//! Closed-form two-flavor quantities in the quantum-mechanical treatment.
//!
//! Flavor states are rotations of mass eigenstates by the mixing angle θ,
//! mass eigenstates evolve as plane waves, and entanglement is read off
//! either in the mass-mode or the flavor-mode bipartition of the single
//! particle. Everything here is a pure function of its arguments; the
//! [`fock`](crate::fock) oracle reproduces each result from dense operators.
//!
//! Natural units throughout (ħ = c = 1): energies share units with masses
//! and times carry inverse-energy units.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::error::{finite, Error, Result};

/// The mixing angle θ ∈ [0, π/2] with its sine and cosine cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingAngle {
    theta: f64,
    cos: f64,
    sin: f64,
}

impl MixingAngle {
    /// Builds the angle from radians.
    pub fn new(theta: f64) -> Result<Self> {
        finite("theta", theta)?;
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::AngleOutOfRange(theta));
        }
        let (sin, cos) = theta.sin_cos();
        Ok(Self { theta, cos, sin })
    }

    /// Builds the angle from sin²θ, the parametrization used when quoting
    /// measured mixing.
    pub fn from_sin_sq(sin_sq: f64) -> Result<Self> {
        finite("sin2_theta", sin_sq)?;
        if !(0.0..=1.0).contains(&sin_sq) {
            return Err(Error::Sin2ThetaOutOfRange(sin_sq));
        }
        Self::new(sin_sq.sqrt().asin().min(FRAC_PI_2))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    /// sin²θ.
    pub fn sin_sq(&self) -> f64 {
        self.sin * self.sin
    }

    /// cos²θ.
    pub fn cos_sq(&self) -> f64 {
        self.cos * self.cos
    }

    /// sin²(2θ), the oscillation amplitude.
    pub fn sin_sq_2theta(&self) -> f64 {
        let s2 = 2.0 * self.sin * self.cos;
        s2 * s2
    }

    /// sin²(4θ).
    pub fn sin_sq_4theta(&self) -> f64 {
        let s4 = (4.0 * self.theta).sin();
        s4 * s4
    }
}

/// Energies (ω₁, ω₂) of the two mass eigenstates.
///
/// No ordering is imposed: swapping the energies only flips the sign of the
/// relative phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QmSpectrum {
    pub omega1: f64,
    pub omega2: f64,
}

impl QmSpectrum {
    pub fn new(omega1: f64, omega2: f64) -> Result<Self> {
        Ok(Self {
            omega1: finite("omega1", omega1)?,
            omega2: finite("omega2", omega2)?,
        })
    }

    /// ω₂ − ω₁.
    pub fn delta(&self) -> f64 {
        self.omega2 - self.omega1
    }

    /// The oscillation phase (ω₂ − ω₁)t/2.
    pub fn phase(&self, t: f64) -> f64 {
        0.5 * self.delta() * t
    }
}

/// The flavor-transition amplitude matrix Ũ(t) = U(θ)·diag(e^{−iω₁t}, e^{−iω₂t})·U(θ)ᵀ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlavorAmplitudes {
    pub u_ee: C64,
    pub u_emu: C64,
    pub u_mue: C64,
    pub u_mumu: C64,
    pub t: f64,
}

impl FlavorAmplitudes {
    pub fn as_rows(&self) -> [[C64; 2]; 2] {
        [[self.u_ee, self.u_emu], [self.u_mue, self.u_mumu]]
    }

    /// Largest deviation of either row from unit norm.
    pub fn unitarity_defect(&self) -> f64 {
        let e = self.u_ee.norm_sqr() + self.u_emu.norm_sqr() - 1.0;
        let mu = self.u_mue.norm_sqr() + self.u_mumu.norm_sqr() - 1.0;
        e.abs().max(mu.abs())
    }
}

/// Survival and appearance probabilities for an initial electron neutrino.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionProbabilities {
    pub p_ee: f64,
    pub p_emu: f64,
}

/// Eigenvalues of a single-mode reduced density matrix.
///
/// `lambda1` is the occupation probability of the mode, `lambda2` the
/// probability that it is empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedDensity {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ReducedDensity {
    /// Tr ρ² for a diagonal 2×2 density matrix.
    pub fn purity(&self) -> f64 {
        self.lambda1 * self.lambda1 + self.lambda2 * self.lambda2
    }

    /// S_L = 2(1 − Tr ρ²).
    pub fn linear_entropy(&self) -> f64 {
        2.0 * (1.0 - self.purity())
    }
}

/// Variances of the flavor-basis su(2) generators and of the Casimir-like
/// total-number charge 𝒞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Variances {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub c: f64,
}

/// Flavor su(2) variances computed two ways.
///
/// `derived` comes from the one-particle amplitudes and is the value the
/// oracle confirms. `quoted` evaluates the commonly quoted closed forms
/// verbatim:
///
/// * ΔJ₁ = ¼[1 − sin²4θ·sin⁴(Δωt/2)]
/// * ΔJ₂ = ¼ − sin²2θ·sin²(Δωt)
/// * ΔJ₃ = sin²2θ·sin²(Δωt/2)·[1 − sin²2θ·sin²(Δωt/2)]
///
/// The quoted ΔJ₂ lacks a factor ¼ on its second term and goes negative for
/// strong mixing; [`Su2VarianceComparison::discrepancy`] exposes the gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2VarianceComparison {
    pub derived: Su2Variances,
    pub quoted: Su2Variances,
}

impl Su2VarianceComparison {
    /// `quoted − derived`, component by component.
    pub fn discrepancy(&self) -> Su2Variances {
        Su2Variances {
            j1: self.quoted.j1 - self.derived.j1,
            j2: self.quoted.j2 - self.derived.j2,
            j3: self.quoted.j3 - self.derived.j3,
            c: self.quoted.c - self.derived.c,
        }
    }
}

/// Coefficients of the free Hamiltonian written in flavor modes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianCoefficients {
    pub omega_ee: f64,
    pub omega_mumu: f64,
    pub omega_emu: f64,
}

/// Dynamic entanglement of |ν_e(t)⟩ in the flavor-mode bipartition.
///
/// `s_linear` is the linear entropy of either flavor mode, `var_n` the
/// variance of N_e(t); the two always differ by exactly a factor of four.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QmEntanglementReport {
    pub s_linear: f64,
    pub var_n: f64,
    pub var_j1: f64,
    pub var_j2: f64,
    pub var_j3: f64,
    pub var_c: f64,
}

/// The rotation U(θ) = [[cosθ, sinθ], [−sinθ, cosθ]] taking mass states to
/// flavor states.
pub fn mixing_matrix(theta: MixingAngle) -> [[f64; 2]; 2] {
    let (c, s) = (theta.cos(), theta.sin());
    [[c, s], [-s, c]]
}

/// Ũ(t) for initial flavor states at t = 0.
pub fn evolve_amplitudes(theta: MixingAngle, spec: QmSpectrum, t: f64) -> FlavorAmplitudes {
    let u = mixing_matrix(theta);
    let phases = [
        C64::from_polar(1.0, -spec.omega1 * t),
        C64::from_polar(1.0, -spec.omega2 * t),
    ];
    // Ũ_ab = Σ_j U_aj e^{−iω_j t} U_bj, since U⁻¹ = Uᵀ.
    let entry = |a: usize, b: usize| -> C64 { (0..2).map(|j| phases[j] * (u[a][j] * u[b][j])).sum() };
    FlavorAmplitudes {
        u_ee: entry(0, 0),
        u_emu: entry(0, 1),
        u_mue: entry(1, 0),
        u_mumu: entry(1, 1),
        t,
    }
}

/// P(ν_e → ν_e) and P(ν_e → ν_μ) at time t.
pub fn transition_probabilities(theta: MixingAngle, spec: QmSpectrum, t: f64) -> TransitionProbabilities {
    probabilities_at_phase(theta, spec.phase(t))
}

/// Transition probabilities as a function of the phase φ = (ω₂ − ω₁)t/2.
pub fn probabilities_at_phase(theta: MixingAngle, phase: f64) -> TransitionProbabilities {
    let sp = phase.sin();
    let p_emu = theta.sin_sq_2theta() * sp * sp;
    TransitionProbabilities {
        p_ee: 1.0 - p_emu,
        p_emu,
    }
}

/// Reduced states of the two mass modes for a flavor state.
///
/// Mode 1 is occupied with probability cos²θ, mode 2 with sin²θ; the result
/// is time independent.
pub fn reduced_densities_static(theta: MixingAngle) -> (ReducedDensity, ReducedDensity) {
    let (c2, s2) = (theta.cos_sq(), theta.sin_sq());
    (
        ReducedDensity {
            lambda1: c2,
            lambda2: s2,
        },
        ReducedDensity {
            lambda1: s2,
            lambda2: c2,
        },
    )
}

/// Reduced states of the two flavor modes for |ν_e(t)⟩: the e mode is
/// occupied with probability P_ee, the μ mode with P_eμ.
pub fn reduced_densities_dynamic(theta: MixingAngle, spec: QmSpectrum, t: f64) -> (ReducedDensity, ReducedDensity) {
    let p = transition_probabilities(theta, spec, t);
    (
        ReducedDensity {
            lambda1: p.p_ee,
            lambda2: p.p_emu,
        },
        ReducedDensity {
            lambda1: p.p_emu,
            lambda2: p.p_ee,
        },
    )
}

/// Linear entropy of a flavor state in the mass-mode bipartition: sin²2θ.
pub fn linear_entropy_static(theta: MixingAngle) -> f64 {
    theta.sin_sq_2theta()
}

/// Linear entropy of |ν_e(t)⟩ in the flavor-mode bipartition,
/// 4·|Ũ_ee|²·(1 − |Ũ_ee|²).
pub fn linear_entropy_dynamic(theta: MixingAngle, spec: QmSpectrum, t: f64) -> f64 {
    4.0 * variance_flavor_number_dynamic(theta, spec, t)
}

/// ΔN₁ = ΔN₂ on a flavor state: ¼ sin²2θ.
pub fn variance_mass_number_static(theta: MixingAngle) -> f64 {
    0.25 * theta.sin_sq_2theta()
}

/// ΔN_e(t) = ΔN_μ(t) on |ν_e⟩: P_ee·P_eμ.
pub fn variance_flavor_number_dynamic(theta: MixingAngle, spec: QmSpectrum, t: f64) -> f64 {
    let p = transition_probabilities(theta, spec, t);
    p.p_ee * p.p_emu
}

/// Flavor su(2) variances on |ν_e⟩ at time t.
///
/// Convention: J₁ = (J₊ + J₋)/2, J₂ = (J₊ − J₋)/(2i) with J₊ = α_e†(t)α_μ(t).
/// The state lives in the one-particle sector where every Jᵢ² = ¼, so
/// ΔJᵢ = ¼ − ⟨Jᵢ⟩² with ⟨J₊⟩ = Ũ_ee*·Ũ_eμ and ⟨J₃⟩ = (P_ee − P_eμ)/2.
pub fn variance_su2_flavor(theta: MixingAngle, spec: QmSpectrum, t: f64) -> Su2VarianceComparison {
    let amp = evolve_amplitudes(theta, spec, t);
    let j_plus = amp.u_ee.conj() * amp.u_emu;
    let p = transition_probabilities(theta, spec, t);
    let j3 = 0.5 * (p.p_ee - p.p_emu);
    let derived = Su2Variances {
        j1: 0.25 - j_plus.re * j_plus.re,
        j2: 0.25 - j_plus.im * j_plus.im,
        j3: 0.25 - j3 * j3,
        c: 0.0,
    };

    let half = spec.phase(t);
    let sh = half.sin();
    let full = (2.0 * half).sin();
    let s22 = theta.sin_sq_2theta();
    let osc = s22 * sh * sh;
    let quoted = Su2Variances {
        j1: 0.25 * (1.0 - theta.sin_sq_4theta() * sh.powi(4)),
        j2: 0.25 - s22 * full * full,
        j3: osc * (1.0 - osc),
        c: 0.0,
    };
    Su2VarianceComparison { derived, quoted }
}

/// Same as [`variance_su2_flavor`] but with the derived ΔJ₂ evaluated in its
/// closed form ¼ − ¼·sin²2θ·sin²(Δωt); handy as a second route in tests.
pub fn variance_j2_closed_form(theta: MixingAngle, spec: QmSpectrum, t: f64) -> f64 {
    let full = (spec.delta() * t).sin();
    0.25 - 0.25 * theta.sin_sq_2theta() * full * full
}

/// Coefficients (ω_ee, ω_μμ, ω_eμ) of H = ω_ee N_e + ω_μμ N_μ + ω_eμ(J₊ + J₋).
pub fn hamiltonian_coefficients(theta: MixingAngle, spec: QmSpectrum) -> HamiltonianCoefficients {
    let (c2, s2) = (theta.cos_sq(), theta.sin_sq());
    HamiltonianCoefficients {
        omega_ee: spec.omega1 * c2 + spec.omega2 * s2,
        omega_mumu: spec.omega1 * s2 + spec.omega2 * c2,
        omega_emu: spec.delta() * theta.sin() * theta.cos(),
    }
}

/// Collects the dynamic flavor-mode entanglement measures of |ν_e(t)⟩.
pub fn entanglement_report(theta: MixingAngle, spec: QmSpectrum, t: f64) -> QmEntanglementReport {
    let var_n = variance_flavor_number_dynamic(theta, spec, t);
    let su2 = variance_su2_flavor(theta, spec, t).derived;
    QmEntanglementReport {
        s_linear: 4.0 * var_n,
        var_n,
        var_j1: su2.j1,
        var_j2: su2.j2,
        var_j3: su2.j3,
        var_c: su2.c,
    }
}
