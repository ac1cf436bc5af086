use nalgebra::SymmetricEigen;

use super::operator::hermitian_deviation;
use super::{CMatrix, OperatorMatrix, QuantumError, Result, C64};

const TRACE_TOL: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = -1e-8;

/// A validated density matrix: unit trace, Hermitian, positive semidefinite
/// up to the numerical tolerances above.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: OperatorMatrix,
}

impl DensityState {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(QuantumError::InvalidState(format!("trace {tr}")));
        }
        let dev = hermitian_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(QuantumError::InvalidState(format!("hermitian deviation {dev:.3e}")));
        }
        let min_eig = min_eigenvalue(&matrix);
        if min_eig < POSITIVITY_TOL {
            return Err(QuantumError::InvalidState(format!("eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { matrix: OperatorMatrix::new(matrix) })
    }

    /// Symmetrizes and renormalizes before validating. Used on solver output.
    pub fn from_numerical(matrix: CMatrix) -> Result<Self> {
        let h = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let tr = h.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(QuantumError::InvalidState(format!("trace {tr}")));
        }
        Self::new(h / C64::new(tr, 0.0))
    }

    /// `|idx⟩⟨idx|`.
    pub fn basis(dim: usize, idx: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(idx, idx)] = C64::new(1.0, 0.0);
        Self { matrix: OperatorMatrix::new(m) }
    }

    /// Diagonal state with the given populations (normalized).
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let total: f64 = populations.iter().sum();
        let n = populations.len();
        let m = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(populations[i] / total, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.matrix.matrix()
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.matrix
    }

    /// `Tr[ρ A]`.
    pub fn expect(&self, op: &OperatorMatrix) -> C64 {
        (self.matrix() * op.matrix()).trace()
    }

    pub fn population(&self, idx: usize) -> f64 {
        self.matrix()[(idx, idx)].re
    }

    /// `½ ‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        let diff = self.matrix() - other.matrix();
        let herm = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        0.5 * eig.eigenvalues.iter().map(|x| x.abs()).sum::<f64>()
    }
}

pub(crate) fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    SymmetricEigen::new(herm).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}
