use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Particle or antiparticle mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Species {
    Particle,
    Antiparticle,
}

/// Tag attached to each fermionic mode: species, mass index (1 or 2), and
/// an optional helicity label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    pub species: Species,
    pub mass_index: u8,
    pub helicity: Option<u8>,
}

impl ModeLabel {
    pub fn particle(mass_index: u8) -> Self {
        Self {
            species: Species::Particle,
            mass_index,
            helicity: None,
        }
    }

    pub fn antiparticle(mass_index: u8) -> Self {
        Self {
            species: Species::Antiparticle,
            mass_index,
            helicity: None,
        }
    }

    pub fn with_helicity(self, r: u8) -> Self {
        Self {
            helicity: Some(r),
            ..self
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.species {
            Species::Particle => "α",
            Species::Antiparticle => "β",
        };
        write!(f, "{sym}{}", self.mass_index)?;
        if let Some(r) = self.helicity {
            write!(f, "^{r}")?;
        }
        Ok(())
    }
}

/// A dense operator on a Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    matrix: CMatrix,
    label: String,
}

impl FockOperator {
    pub fn new(matrix: CMatrix, label: impl Into<String>) -> Self {
        assert!(matrix.is_square(), "Fock operators are square");
        Self {
            matrix,
            label: label.into(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMatrix::identity(dim, dim), "𝟙")
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(CMatrix::zeros(dim, dim), "0")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> Self {
        Self::new(self.matrix.adjoint(), format!("{}†", self.label))
    }

    /// {A, B} = AB + BA.
    pub fn anticommutator(&self, other: &Self) -> Self {
        let m = &self.matrix * &other.matrix + &other.matrix * &self.matrix;
        Self::new(m, format!("{{{}, {}}}", self.label, other.label))
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Self::new(m, format!("[{}, {}]", self.label, other.label))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.dagger())
    }

    /// Splits an operator expected to be a multiple of the identity into
    /// that multiple (trace / dim) and the entrywise residual.
    pub fn scalar_part(&self) -> (C64, f64) {
        let c = self.matrix.trace() / self.dim() as f64;
        let residual = self.max_abs_diff(&(FockOperator::identity(self.dim()) * c));
        (c, residual)
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        check_dim(self.dim(), state.dim())?;
        Ok(FockState::new(
            &self.matrix * &state.vector,
            format!("{}{}", self.label, state.label),
        ))
    }

    /// Subtracts ⟨ref|A|ref⟩·𝟙, normal ordering with respect to `reference`.
    pub fn normal_ordered(&self, reference: &FockState) -> Result<Self> {
        let shift = expectation(reference, self)?;
        Ok(Self::new(
            &self.matrix - CMatrix::identity(self.dim(), self.dim()) * shift,
            format!(":{}:", self.label),
        ))
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;

    fn add(self, rhs: &FockOperator) -> FockOperator {
        FockOperator::new(&self.matrix + &rhs.matrix, format!("{} + {}", self.label, rhs.label))
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;

    fn sub(self, rhs: &FockOperator) -> FockOperator {
        FockOperator::new(&self.matrix - &rhs.matrix, format!("{} − {}", self.label, rhs.label))
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator::new(&self.matrix * &rhs.matrix, format!("{}{}", self.label, rhs.label))
    }
}

impl Mul<C64> for FockOperator {
    type Output = FockOperator;

    fn mul(mut self, rhs: C64) -> FockOperator {
        self.matrix *= rhs;
        self
    }
}

impl Mul<f64> for FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: f64) -> FockOperator {
        self * C64::new(rhs, 0.0)
    }
}

impl Mul<C64> for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: C64) -> FockOperator {
        self.clone() * rhs
    }
}

impl Mul<f64> for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: f64) -> FockOperator {
        self.clone() * rhs
    }
}

impl Neg for FockOperator {
    type Output = FockOperator;

    fn neg(self) -> FockOperator {
        self * -1.0
    }
}

/// A state vector on a Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    vector: CVector,
    label: String,
}

impl FockState {
    pub fn new(vector: CVector, label: impl Into<String>) -> Self {
        Self {
            vector,
            label: label.into(),
        }
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn norm(&self) -> f64 {
        self.vector.norm()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.vector.dotc(&other.vector))
    }

    /// ‖self − other‖.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok((&self.vector - &other.vector).norm())
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// ⟨ψ|A|ψ⟩.
pub fn expectation(state: &FockState, op: &FockOperator) -> Result<C64> {
    check_dim(op.dim(), state.dim())?;
    Ok(state.vector.dotc(&(&op.matrix * &state.vector)))
}

/// ⟨ψ|A²|ψ⟩ − ⟨ψ|A|ψ⟩², real part. For Hermitian A this equals ‖(A − ⟨A⟩)ψ‖².
pub fn variance(state: &FockState, op: &FockOperator) -> Result<f64> {
    check_dim(op.dim(), state.dim())?;
    let a_psi = &op.matrix * &state.vector;
    let mean = state.vector.dotc(&a_psi);
    let second = a_psi.dotc(&a_psi);
    Ok((second - mean * mean).re)
}

/// Fermionic Fock space over `n` modes with Jordan–Wigner annihilators
/// a_j = Z ⊗ … ⊗ Z ⊗ σ⁻ ⊗ 𝟙 ⊗ … ⊗ 𝟙.
///
/// Basis index bits are occupation numbers, mode 0 in the most significant
/// bit, so index 0 is the vacuum. Annihilator matrices are built on first
/// use; a space of n modes holds up to n dense 2ⁿ × 2ⁿ matrices.
#[derive(Debug)]
pub struct FockSpace {
    labels: Vec<ModeLabel>,
    annihilators: Vec<OnceLock<FockOperator>>,
}

impl FockSpace {
    pub const MAX_MODES: usize = 12;

    pub fn new(labels: Vec<ModeLabel>) -> Result<Self> {
        let n = labels.len();
        if !(1..=Self::MAX_MODES).contains(&n) {
            return Err(Error::ModeCount(n));
        }
        Ok(Self {
            annihilators: (0..n).map(|_| OnceLock::new()).collect(),
            labels,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_modes()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn annihilator(&self, mode: usize) -> &FockOperator {
        self.annihilators[mode].get_or_init(|| self.build_annihilator(mode))
    }

    pub fn creator(&self, mode: usize) -> FockOperator {
        self.annihilator(mode).dagger()
    }

    /// a_j†a_j.
    pub fn number(&self, mode: usize) -> FockOperator {
        (&self.creator(mode) * self.annihilator(mode)).with_label(format!("N[{}]", self.labels[mode]))
    }

    pub fn identity(&self) -> FockOperator {
        FockOperator::identity(self.dim())
    }

    /// The state with every mode empty.
    pub fn vacuum(&self) -> FockState {
        let mut v = CVector::zeros(self.dim());
        v[0] = C64::new(1.0, 0.0);
        FockState::new(v, "|0⟩")
    }

    fn build_annihilator(&self, mode: usize) -> FockOperator {
        let n = self.n_modes();
        let dim = self.dim();
        let bit = 1usize << (n - 1 - mode);
        // modes 0..mode sit in the bits above `bit`
        let string_mask = !((bit << 1) - 1) & (dim - 1);
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            if col & bit != 0 {
                let sign = if (col & string_mask).count_ones().is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                m[(col ^ bit, col)] = C64::new(sign, 0.0);
            }
        }
        FockOperator::new(m, self.labels[mode].to_string())
    }

    /// Largest entrywise violation of {a_i, a_j†} = δ_ij and {a_i, a_j} = 0
    /// over all mode pairs.
    pub fn car_residual(&self) -> f64 {
        let ops: Vec<FockOperator> = (0..self.n_modes()).map(|j| self.annihilator(j).clone()).collect();
        car_residual(&ops)
    }
}

/// CAR residual for an arbitrary family of would-be annihilators.
pub fn car_residual(ops: &[FockOperator]) -> f64 {
    let Some(first) = ops.first() else {
        return 0.0;
    };
    let id = FockOperator::identity(first.dim());
    let zero = FockOperator::zeros(first.dim());
    let mut worst: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            let mixed = a.anticommutator(&b.dagger());
            let target = if i == j { &id } else { &zero };
            worst = worst.max(mixed.max_abs_diff(target));
            worst = worst.max(a.anticommutator(b).max_abs());
        }
    }
    worst
}

/// Expands `state` in the occupation basis of two modes `b` built on
/// `reference` (their joint vacuum): entry `[n1][n2]` is
/// ⟨ref|b₂^{n2} b₁^{n1}|ψ⟩, the amplitude on (b₁†)^{n1}(b₂†)^{n2}|ref⟩.
pub fn two_mode_amplitudes(
    state: &FockState,
    modes: [&FockOperator; 2],
    reference: &FockState,
) -> Result<[[C64; 2]; 2]> {
    check_dim(state.dim(), reference.dim())?;
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (n1, row) in out.iter_mut().enumerate() {
        for (n2, slot) in row.iter_mut().enumerate() {
            let mut v = state.vector.clone();
            if n1 == 1 {
                v = modes[0].matrix() * v;
            }
            if n2 == 1 {
                v = modes[1].matrix() * v;
            }
            *slot = reference.vector.dotc(&v);
        }
    }
    Ok(out)
}

/// Reduced density matrix of one of the two modes, in the basis
/// (|0⟩, |1⟩), from the amplitudes of [`two_mode_amplitudes`].
pub fn reduced_density(amps: &[[C64; 2]; 2], keep: usize) -> Matrix2<C64> {
    let amp = |kept: usize, traced: usize| {
        if keep == 0 {
            amps[kept][traced]
        } else {
            amps[traced][kept]
        }
    };
    Matrix2::from_fn(|r, c| (0..2).map(|x| amp(r, x) * amp(c, x).conj()).sum())
}

/// S_L = 2(1 − Tr ρ²).
pub fn linear_entropy(rho: &Matrix2<C64>) -> f64 {
    2.0 * (1.0 - (rho * rho).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<ModeLabel> {
        (0..n).map(|j| ModeLabel::particle(j as u8 + 1)).collect()
    }

    #[test]
    fn single_mode_annihilator() {
        let space = FockSpace::new(labels(1)).unwrap();
        let a = space.annihilator(0).matrix();
        let want = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0].map(|x| C64::new(x, 0.0)));
        assert_eq!(a, &want);
    }

    #[test]
    fn two_mode_cross_anticommutator_vanishes() {
        let space = FockSpace::new(labels(2)).unwrap();
        let ac = space.annihilator(0).anticommutator(&space.creator(1));
        assert_eq!(ac.max_abs(), 0.0);
    }

    #[test]
    fn car_exhaustive() {
        for n in 1..=6 {
            let space = FockSpace::new(labels(n)).unwrap();
            assert!(space.car_residual() < crate::tolerance::CAR, "n = {n}");
        }
    }

    #[test]
    fn mode_count_bounds() {
        assert_eq!(FockSpace::new(vec![]).unwrap_err(), Error::ModeCount(0));
        assert_eq!(FockSpace::new(labels(13)).unwrap_err(), Error::ModeCount(13));
        assert!(FockSpace::new(labels(12)).is_ok());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let small = FockSpace::new(labels(1)).unwrap();
        let big = FockSpace::new(labels(2)).unwrap();
        let err = expectation(&small.vacuum(), big.annihilator(0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 2 });
        assert!(variance(&small.vacuum(), big.annihilator(0)).is_err());
    }

    #[test]
    fn variance_of_number_on_superposition() {
        let space = FockSpace::new(labels(2)).unwrap();
        let (c, s) = (0.6, 0.8);
        let psi = (&(space.creator(0) * c) + &(space.creator(1) * s))
            .apply(&space.vacuum())
            .unwrap();
        let var = variance(&psi, &space.number(0)).unwrap();
        assert!((var - c * c * s * s).abs() < 1e-15);
        let amps = two_mode_amplitudes(&psi, [space.annihilator(0), space.annihilator(1)], &space.vacuum()).unwrap();
        let rho = reduced_density(&amps, 0);
        assert!((rho[(1, 1)].re - c * c).abs() < 1e-15);
        assert!((linear_entropy(&rho) - 4.0 * c * c * s * s).abs() < 1e-15);
    }
}
