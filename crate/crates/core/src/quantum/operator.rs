use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{CMatrix, QuantumError, Result, C64};

pub const GROUND: usize = 0;
pub const EXCITED: usize = 1;
pub const SECOND: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Mw,
    Qubit,
    Saw,
}

/// Truncation of the composite `MW ⊗ qubit ⊗ SAW` space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertConfig {
    pub n_mw: usize,
    pub n_qubit: usize,
    pub n_saw: usize,
}

impl HilbertConfig {
    pub fn new(n_mw: usize, n_qubit: usize, n_saw: usize) -> Result<Self> {
        if n_mw < 2 {
            return Err(QuantumError::TruncationTooSmall(n_mw));
        }
        if n_saw < 2 {
            return Err(QuantumError::TruncationTooSmall(n_saw));
        }
        if n_qubit < 3 {
            return Err(QuantumError::TooFewQubitLevels(n_qubit));
        }
        Ok(Self { n_mw, n_qubit, n_saw })
    }

    pub fn dim(&self) -> usize {
        self.n_mw * self.n_qubit * self.n_saw
    }

    pub fn subsystem_dim(&self, s: Subsystem) -> usize {
        match s {
            Subsystem::Mw => self.n_mw,
            Subsystem::Qubit => self.n_qubit,
            Subsystem::Saw => self.n_saw,
        }
    }

    /// Composite index of `|n_mw⟩ ⊗ |level⟩ ⊗ |n_saw⟩`.
    pub fn index(&self, n_mw: usize, level: usize, n_saw: usize) -> usize {
        (n_mw * self.n_qubit + level) * self.n_saw + n_saw
    }

    /// Inverse of [`HilbertConfig::index`].
    pub fn decompose(&self, idx: usize) -> (usize, usize, usize) {
        let s = idx % self.n_saw;
        let q = (idx / self.n_saw) % self.n_qubit;
        let m = idx / (self.n_saw * self.n_qubit);
        (m, q, s)
    }

    /// Excitation-number charge of every basis state: `n_mw + n_saw +
    /// level_charge[level]`. Used to build a [`super::Grading`].
    pub fn charges(&self, level_charge: &[i32]) -> Vec<i32> {
        assert_eq!(level_charge.len(), self.n_qubit, "one charge per transmon level");
        (0..self.dim())
            .map(|i| {
                let (m, q, s) = self.decompose(i);
                m as i32 + s as i32 + level_charge[q]
            })
            .collect()
    }
}

/// Dense complex operator. `space` is set for operators on the composite
/// space; subsystem operators leave it empty.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    matrix: CMatrix,
    space: Option<HilbertConfig>,
    hermitian: bool,
}

/// Relative Frobenius deviation `‖M − M†‖ / ‖M‖` (0 for the zero matrix).
pub(crate) fn hermitian_deviation(m: &CMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.adjoint()).norm() / norm
}

impl OperatorMatrix {
    pub fn new(matrix: CMatrix) -> Self {
        assert!(matrix.is_square(), "operators must be square");
        Self { matrix, space: None, hermitian: false }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMatrix::identity(dim, dim)).with_hermitian_flag()
    }

    /// Build from a real matrix.
    pub fn from_real(m: &DMatrix<f64>) -> Self {
        Self::new(m.map(|x| C64::new(x, 0.0)))
    }

    /// Checks Hermiticity to 1e-12 relative and sets the flag.
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        let dev = hermitian_deviation(&matrix);
        if dev > 1e-12 {
            return Err(QuantumError::NotHermitian(dev));
        }
        Ok(Self { matrix, space: None, hermitian: true })
    }

    fn with_hermitian_flag(mut self) -> Self {
        self.hermitian = true;
        self
    }

    pub fn with_space(mut self, cfg: HilbertConfig) -> Result<Self> {
        if cfg.dim() != self.dim() {
            return Err(QuantumError::DimensionMismatch { expected: cfg.dim(), got: self.dim() });
        }
        self.space = Some(cfg);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn space(&self) -> Option<HilbertConfig> {
        self.space
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        hermitian_deviation(&self.matrix) <= tol
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint(), space: self.space, hermitian: self.hermitian }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * C64::new(factor, 0.0),
            space: self.space,
            hermitian: self.hermitian,
        }
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self { matrix: &self.matrix * factor, space: self.space, hermitian: false }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self::new(&self.matrix * &other.matrix - &other.matrix * &self.matrix)
            .inherit(self.space.or(other.space))
    }

    /// `A + A†`.
    pub fn plus_adjoint(&self) -> Self {
        Self::new(&self.matrix + self.matrix.adjoint())
            .inherit(self.space)
            .with_hermitian_flag()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    fn inherit(mut self, space: Option<HilbertConfig>) -> Self {
        self.space = space;
        self
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix {
            matrix: &self.matrix + &rhs.matrix,
            space: self.space.or(rhs.space),
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix {
            matrix: &self.matrix - &rhs.matrix,
            space: self.space.or(rhs.space),
            hermitian: self.hermitian && rhs.hermitian,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix::new(&self.matrix * &rhs.matrix).inherit(self.space.or(rhs.space))
    }
}

/// Bosonic lowering operator truncated to `n` Fock levels.
pub fn annihilator(n: usize) -> Result<OperatorMatrix> {
    if n < 2 {
        return Err(QuantumError::TruncationTooSmall(n));
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 1..n {
        m[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    Ok(OperatorMatrix::new(m))
}

/// Transition operator `|k⟩⟨l|` on the transmon levels.
pub fn transmon_projector(k: usize, l: usize, n_qubit: usize) -> Result<OperatorMatrix> {
    for level in [k, l] {
        if level >= n_qubit {
            return Err(QuantumError::LevelOutOfRange { level, n_levels: n_qubit });
        }
    }
    let mut m = CMatrix::zeros(n_qubit, n_qubit);
    m[(k, l)] = C64::new(1.0, 0.0);
    let op = OperatorMatrix::new(m);
    Ok(if k == l { op.with_hermitian_flag() } else { op })
}

/// Kronecker embedding of a subsystem operator into the composite space.
pub fn embed(op: &OperatorMatrix, subsystem: Subsystem, cfg: HilbertConfig) -> Result<OperatorMatrix> {
    let expected = cfg.subsystem_dim(subsystem);
    if op.dim() != expected {
        return Err(QuantumError::DimensionMismatch { expected, got: op.dim() });
    }
    let id = |n: usize| CMatrix::identity(n, n);
    let m = match subsystem {
        Subsystem::Mw => op.matrix.kronecker(&id(cfg.n_qubit * cfg.n_saw)),
        Subsystem::Qubit => id(cfg.n_mw).kronecker(&op.matrix).kronecker(&id(cfg.n_saw)),
        Subsystem::Saw => id(cfg.n_mw * cfg.n_qubit).kronecker(&op.matrix),
    };
    Ok(OperatorMatrix { matrix: m, space: Some(cfg), hermitian: op.hermitian })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn annihilator_two_levels() {
        let a = annihilator(2).unwrap();
        assert_eq!(a.get(0, 1), c(1.0));
        assert_eq!(a.get(0, 0), c(0.0));
        assert_eq!(a.get(1, 0), c(0.0));
        assert_eq!(a.get(1, 1), c(0.0));
    }

    #[test]
    fn annihilator_three_levels() {
        let a = annihilator(3).unwrap();
        assert_eq!(a.get(0, 1), c(1.0));
        assert!((a.get(1, 2).re - 2f64.sqrt()).abs() < 1e-15);
        let nonzero = a.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn annihilator_rejects_small_truncation() {
        assert!(matches!(annihilator(1), Err(QuantumError::TruncationTooSmall(1))));
    }

    #[test]
    fn ladder_commutator_is_identity_below_cutoff() {
        for n in 2..8 {
            let a = annihilator(n).unwrap();
            let comm = a.commutator(&a.adjoint());
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((comm.get(i, j) - c(expected)).norm() < 1e-14);
                }
            }
            // the truncation edge carries -(n-1)
            assert!((comm.get(n - 1, n - 1).re + (n as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn projector_completeness_and_algebra() {
        let n = 3;
        let sum = &(&transmon_projector(0, 0, n).unwrap() + &transmon_projector(1, 1, n).unwrap())
            + &transmon_projector(2, 2, n).unwrap();
        assert_eq!(sum.matrix(), &CMatrix::identity(3, 3));

        let ge = transmon_projector(GROUND, EXCITED, n).unwrap();
        let eg = transmon_projector(EXCITED, GROUND, n).unwrap();
        assert_eq!((&ge * &eg).matrix(), transmon_projector(0, 0, n).unwrap().matrix());

        let gf = transmon_projector(GROUND, SECOND, n).unwrap();
        let fg = transmon_projector(SECOND, GROUND, n).unwrap();
        assert_eq!(gf.adjoint().matrix(), fg.matrix());
    }

    #[test]
    fn projector_level_out_of_range() {
        assert!(matches!(
            transmon_projector(3, 0, 3),
            Err(QuantumError::LevelOutOfRange { level: 3, n_levels: 3 })
        ));
    }

    #[test]
    fn embedding_identity_and_commuting_supports() {
        let cfg = HilbertConfig::new(3, 3, 2).unwrap();
        let id = embed(&OperatorMatrix::identity(3), Subsystem::Qubit, cfg).unwrap();
        assert_eq!(id.matrix(), &CMatrix::identity(cfg.dim(), cfg.dim()));

        let a = embed(&annihilator(3).unwrap(), Subsystem::Mw, cfg).unwrap();
        let cc = embed(&annihilator(2).unwrap(), Subsystem::Saw, cfg).unwrap();
        assert!(a.commutator(&cc).matrix().norm() < 1e-15);
        assert!(a.commutator(&cc.adjoint()).matrix().norm() < 1e-15);
    }

    #[test]
    fn embedded_projector_trace() {
        let cfg = HilbertConfig::new(4, 3, 5).unwrap();
        let see = embed(&transmon_projector(1, 1, 3).unwrap(), Subsystem::Qubit, cfg).unwrap();
        // oracle: count basis states with level == e
        let expected = (0..cfg.dim()).filter(|&i| cfg.decompose(i).1 == 1).count() as f64;
        assert_eq!(see.trace().re, expected);
        assert_eq!(expected, (cfg.n_mw * cfg.n_saw) as f64);
    }

    #[test]
    fn embedding_dimension_mismatch() {
        let cfg = HilbertConfig::new(3, 3, 2).unwrap();
        assert!(embed(&annihilator(4).unwrap(), Subsystem::Mw, cfg).is_err());
    }

    #[test]
    fn index_round_trip() {
        let cfg = HilbertConfig::new(4, 3, 5).unwrap();
        for i in 0..cfg.dim() {
            let (m, q, s) = cfg.decompose(i);
            assert_eq!(cfg.index(m, q, s), i);
        }
    }

    #[test]
    fn config_validation() {
        assert!(HilbertConfig::new(1, 3, 2).is_err());
        assert!(HilbertConfig::new(2, 2, 2).is_err());
        assert!(HilbertConfig::new(2, 3, 1).is_err());
        assert_eq!(HilbertConfig::new(4, 3, 4).unwrap().dim(), 48);
    }
}
