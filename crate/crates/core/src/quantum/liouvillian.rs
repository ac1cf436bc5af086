use std::collections::BTreeMap;

use super::operator::hermitian_deviation;
use super::{CMatrix, OperatorMatrix, QuantumError, Result, C64};

/// A jump operator with its (angular) rate.
#[derive(Debug, Clone)]
pub struct Collapse {
    pub operator: OperatorMatrix,
    pub rate: f64,
}

/// Integer charge per basis state (typically an excitation number).
///
/// When attached to a [`Liouvillian`], every collapse operator must shift the
/// charge by a single fixed amount and the Hamiltonian may change it by at
/// most one. The superoperator is then block-tridiagonal in the coherence
/// charge `k = q(i) − q(j)` of `|i⟩⟨j|`, and block-diagonal when the
/// Hamiltonian conserves the charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    charges: Vec<i32>,
}

impl Grading {
    pub fn new(charges: Vec<i32>) -> Self {
        Self { charges }
    }

    pub fn charges(&self) -> &[i32] {
        &self.charges
    }

    /// Basis pairs `(i, j)` grouped by coherence charge.
    pub fn sectors(&self) -> BTreeMap<i32, Vec<(usize, usize)>> {
        let n = self.charges.len();
        let mut out: BTreeMap<i32, Vec<(usize, usize)>> = BTreeMap::new();
        for j in 0..n {
            for i in 0..n {
                out.entry(self.charges[i] - self.charges[j]).or_default().push((i, j));
            }
        }
        out
    }
}

/// Lindblad generator `Lρ = −i[H, ρ] + Σ r (LρL† − ½{L†L, ρ})`.
///
/// The superoperator is kept in factored form: the effective non-Hermitian
/// generator `G = −iH − ½ Σ r L†L` plus the jump list. Use
/// [`Liouvillian::superoperator`] to materialize the `dim² × dim²` matrix
/// (column-stacking convention, `vec(ρ)[i + j·dim] = ρᵢⱼ`).
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    hamiltonian: CMatrix,
    collapses: Vec<Collapse>,
    effective: CMatrix,
    grading: Option<Grading>,
    charge_conserving: bool,
}

/// Assemble a Liouvillian from `H/ħ` (rad/s) and `(operator, rate)` pairs.
pub fn lindblad(h: &OperatorMatrix, collapses: &[(OperatorMatrix, f64)]) -> Result<Liouvillian> {
    let dim = h.dim();
    let dev = hermitian_deviation(h.matrix());
    if dev > 1e-12 {
        return Err(QuantumError::NotHermitian(dev));
    }
    let mut effective = h.matrix() * C64::new(0.0, -1.0);
    let mut jumps = Vec::with_capacity(collapses.len());
    for (op, rate) in collapses {
        if *rate < 0.0 || !rate.is_finite() {
            return Err(QuantumError::NegativeRate(*rate));
        }
        if op.dim() != dim {
            return Err(QuantumError::DimensionMismatch { expected: dim, got: op.dim() });
        }
        if *rate == 0.0 {
            continue;
        }
        let l = op.matrix();
        effective -= (l.adjoint() * l) * C64::new(0.5 * rate, 0.0);
        jumps.push(Collapse { operator: op.clone(), rate: *rate });
    }
    Ok(Liouvillian {
        dim,
        hamiltonian: h.matrix().clone(),
        collapses: jumps,
        effective,
        grading: None,
        charge_conserving: false,
    })
}

impl Liouvillian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn collapses(&self) -> &[Collapse] {
        &self.collapses
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    /// True when a grading is attached and the Hamiltonian conserves it.
    pub fn is_charge_conserving(&self) -> bool {
        self.grading.is_some() && self.charge_conserving
    }

    /// Attach a grading after checking it against `H` and every jump.
    pub fn with_grading(mut self, grading: Grading) -> Result<Self> {
        let q = grading.charges();
        if q.len() != self.dim {
            return Err(QuantumError::DimensionMismatch { expected: self.dim, got: q.len() });
        }
        let h_scale = self.hamiltonian.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut conserving = true;
        for j in 0..self.dim {
            for i in 0..self.dim {
                if self.hamiltonian[(i, j)].norm() <= 1e-14 * h_scale {
                    continue;
                }
                match (q[i] - q[j]).abs() {
                    0 => {}
                    1 => conserving = false,
                    d => {
                        return Err(QuantumError::IncompatibleGrading(format!(
                            "Hamiltonian element ({i},{j}) changes charge by {d}"
                        )))
                    }
                }
            }
        }
        for (n, c) in self.collapses.iter().enumerate() {
            let l = c.operator.matrix();
            let scale = l.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut shift: Option<i32> = None;
            for j in 0..self.dim {
                for i in 0..self.dim {
                    if l[(i, j)].norm() <= 1e-14 * scale {
                        continue;
                    }
                    let d = q[i] - q[j];
                    match shift {
                        None => shift = Some(d),
                        Some(s) if s != d => {
                            return Err(QuantumError::IncompatibleGrading(format!(
                                "collapse {n} mixes charge shifts {s} and {d}"
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        self.grading = Some(grading);
        self.charge_conserving = conserving;
        Ok(self)
    }

    /// `Lρ` evaluated in matrix form.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let g_rho = &self.effective * rho;
        let mut out = g_rho + rho * self.effective.adjoint();
        for c in &self.collapses {
            let l = c.operator.matrix();
            out += (l * rho * l.adjoint()) * C64::new(c.rate, 0.0);
        }
        out
    }

    /// Superoperator element `⟨⟨ij| L |kl⟩⟩`.
    #[inline]
    pub fn element(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> C64 {
        let mut v = C64::new(0.0, 0.0);
        if j == l {
            v += self.effective[(i, k)];
        }
        if i == k {
            v += self.effective[(j, l)].conj();
        }
        for c in &self.collapses {
            let m = c.operator.matrix();
            let a = m[(i, k)];
            if a.re != 0.0 || a.im != 0.0 {
                v += a * m[(j, l)].conj() * c.rate;
            }
        }
        v
    }

    /// Dense block between two lists of basis pairs.
    pub fn block(&self, rows: &[(usize, usize)], cols: &[(usize, usize)]) -> CMatrix {
        CMatrix::from_fn(rows.len(), cols.len(), |r, c| self.element(rows[r], cols[c]))
    }

    /// Dense `dim² × dim²` superoperator.
    pub fn superoperator(&self) -> CMatrix {
        let d = self.dim;
        let pairs: Vec<(usize, usize)> =
            (0..d).flat_map(|j| (0..d).map(move |i| (i, j))).collect();
        self.block(&pairs, &pairs)
    }

    /// Upper bound on the spectral radius: `2‖G‖∞ + Σ r ‖L‖∞²`.
    pub fn norm_bound(&self) -> f64 {
        let inf_norm = |m: &CMatrix| {
            m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
        };
        2.0 * inf_norm(&self.effective)
            + self
                .collapses
                .iter()
                .map(|c| c.rate * inf_norm(c.operator.matrix()).powi(2))
                .sum::<f64>()
    }
}
