use super::params::DeviceParams;
use crate::quantum::{CMatrix, HilbertConfig, OperatorMatrix, C64};
use crate::units::angular;

/// Rotating-frame detunings of the parametric model, Hz.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Detunings {
    pub mw: f64,
    pub f: f64,
    pub saw: f64,
}

/// Transmon level energy in Hz: `0, ω_e, ω_f`, then the Kerr ladder
/// `kω_e + k(k−1)α/2` for higher levels.
fn level_energy(p: &DeviceParams, k: usize) -> f64 {
    let t = &p.transmon;
    match k {
        0 => 0.0,
        1 => t.omega_e,
        2 => t.omega_f,
        _ => k as f64 * t.omega_e + (k * (k - 1)) as f64 / 2.0 * t.alpha(),
    }
}

/// Lab-frame ladder Hamiltonian `H/ħ` (rad/s) of the two resonators
/// exchange-coupled to the transmon in the rotating-wave approximation, with
/// the harmonic matrix elements `⟨k|b|k+1⟩ = √(k+1)` (so the e–f coupling
/// carries the √2).
pub fn build_hamiltonian(p: &DeviceParams, cfg: HilbertConfig) -> OperatorMatrix {
    let dim = cfg.dim();
    let mut h = CMatrix::zeros(dim, dim);
    let (gm, gs) = (angular(p.coupling.g_mw), angular(p.coupling.g_saw));
    for i in 0..dim {
        let (m, q, s) = cfg.decompose(i);
        let e = m as f64 * p.mw.omega + s as f64 * p.saw.omega + level_energy(p, q);
        h[(i, i)] = C64::new(angular(e), 0.0);
        if q == 0 {
            continue;
        }
        // b lowers the transmon by one level with element √q
        let bq = (q as f64).sqrt();
        if m + 1 < cfg.n_mw {
            let j = cfg.index(m + 1, q - 1, s);
            let v = C64::new(gm * bq * ((m + 1) as f64).sqrt(), 0.0);
            h[(j, i)] = v;
            h[(i, j)] = v;
        }
        if s + 1 < cfg.n_saw {
            let j = cfg.index(m, q - 1, s + 1);
            let v = C64::new(gs * bq * ((s + 1) as f64).sqrt(), 0.0);
            h[(j, i)] = v;
            h[(i, j)] = v;
        }
    }
    OperatorMatrix::hermitian(h)
        .and_then(|op| op.with_space(cfg))
        .expect("ladder Hamiltonian is Hermitian by construction")
}

/// Rotating-frame parametric Hamiltonian `H/ħ` (rad/s):
/// `Δ_m a†a + Δ_f σ_ff + Δ_s c†c + g_p,m(aσ_fg + a†σ_gf) + g_p,s(cσ_fg + c†σ_gf)`.
pub fn parametric_hamiltonian(g_p_mw: f64, g_p_saw: f64, det: Detunings, cfg: HilbertConfig) -> OperatorMatrix {
    let dim = cfg.dim();
    let mut h = CMatrix::zeros(dim, dim);
    let (gm, gs) = (angular(g_p_mw), angular(g_p_saw));
    for i in 0..dim {
        let (m, q, s) = cfg.decompose(i);
        let f_pop = if q == 2 { det.f } else { 0.0 };
        h[(i, i)] = C64::new(angular(m as f64 * det.mw + s as f64 * det.saw + f_pop), 0.0);
        if q != 2 {
            continue;
        }
        // σ_gf a† and σ_gf c† from |f⟩
        if m + 1 < cfg.n_mw {
            let j = cfg.index(m + 1, 0, s);
            let v = C64::new(gm * ((m + 1) as f64).sqrt(), 0.0);
            h[(j, i)] = v;
            h[(i, j)] = v;
        }
        if s + 1 < cfg.n_saw {
            let j = cfg.index(m, 0, s + 1);
            let v = C64::new(gs * ((s + 1) as f64).sqrt(), 0.0);
            h[(j, i)] = v;
            h[(i, j)] = v;
        }
    }
    OperatorMatrix::hermitian(h)
        .and_then(|op| op.with_space(cfg))
        .expect("parametric Hamiltonian is Hermitian by construction")
}

/// Excitation charges conserved by [`build_hamiltonian`]: the level index.
pub fn ladder_charges(cfg: HilbertConfig) -> Vec<i32> {
    cfg.charges(&(0..cfg.n_qubit as i32).collect::<Vec<_>>())
}

/// Charges conserved by [`parametric_hamiltonian`]: `|g⟩` carries 0 and every
/// excited level 1, so `aσ_fg` and `cσ_fg` are neutral.
pub fn parametric_charges(cfg: HilbertConfig) -> Vec<i32> {
    let levels: Vec<i32> = (0..cfg.n_qubit).map(|q| i32::from(q > 0)).collect();
    cfg.charges(&levels)
}
