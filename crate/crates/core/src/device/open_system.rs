use super::hamiltonian::{parametric_charges, parametric_hamiltonian, Detunings};
use super::params::DeviceParams;
use crate::quantum::{
    annihilator, embed, lindblad, transmon_projector, Grading, HilbertConfig, Liouvillian, OperatorMatrix,
    Result, Subsystem, GROUND, SECOND,
};
use crate::units::angular;

/// Extra terms of the open parametric model.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OpenSystemOptions {
    /// Coherent SAW drive `ε(c + c†)`, Hz. An input flux `P` through the SAW
    /// port corresponds to `ε = √(Γ_ex P / 2π)`.
    pub saw_drive: f64,
    /// Thermal occupation of the SAW intrinsic bath.
    pub saw_occupation: f64,
}

/// Rotating-frame Lindblad model of the parametric converter: MW decay `γ`,
/// a single `|f⟩ → |g⟩` relaxation `κ_f`, SAW decay through its ports and a
/// thermal intrinsic bath. `|e⟩` and any higher levels take no part in the
/// conversion; they relax down the ladder at `k·κ_f/2` so the steady state is
/// unique. Graded by [`parametric_charges`].
pub fn parametric_open_system(
    p: &DeviceParams,
    g_pm: f64,
    g_ps: f64,
    det: Detunings,
    cfg: HilbertConfig,
    opts: OpenSystemOptions,
) -> Result<Liouvillian> {
    let a = embed(&annihilator(cfg.n_mw)?, Subsystem::Mw, cfg)?;
    let c = embed(&annihilator(cfg.n_saw)?, Subsystem::Saw, cfg)?;
    let s_gf = embed(&transmon_projector(GROUND, SECOND, cfg.n_qubit)?, Subsystem::Qubit, cfg)?;
    let mut h = parametric_hamiltonian(g_pm, g_ps, det, cfg);
    if opts.saw_drive != 0.0 {
        let drive = c.plus_adjoint().scale(angular(opts.saw_drive));
        h = OperatorMatrix::hermitian((&h + &drive).into_matrix())?.with_space(cfg)?;
    }
    let gamma_int = p.saw.linewidth_internal();
    let n = opts.saw_occupation;
    let saw_ports = p.saw.ports as f64 * p.saw.linewidth_external;
    let mut collapses = vec![
        (a, angular(p.mw.linewidth_total)),
        (s_gf, angular(p.transmon.kappa_f)),
        (c.clone(), angular(saw_ports + gamma_int * (n + 1.0))),
        (c.adjoint(), angular(gamma_int * n)),
    ];
    for k in 1..cfg.n_qubit {
        if k == SECOND {
            continue;
        }
        let down = embed(&transmon_projector(k - 1, k, cfg.n_qubit)?, Subsystem::Qubit, cfg)?;
        collapses.push((down, angular(0.5 * k as f64 * p.transmon.kappa_f)));
    }
    lindblad(&h, &collapses)?.with_grading(Grading::new(parametric_charges(cfg)))
}

/// SAW → MW power conversion efficiency of the steady state of
/// [`parametric_open_system`] under a weak coherent SAW input of `flux`
/// phonons/s: `γ_ex |⟨a⟩|² / flux` with `γ_ex` in rad/s.
pub fn steady_state_conversion(
    p: &DeviceParams,
    g_pm: f64,
    g_ps: f64,
    det: Detunings,
    cfg: HilbertConfig,
    flux: f64,
) -> Result<f64> {
    let eps = (p.saw.linewidth_external * flux / (2.0 * std::f64::consts::PI)).sqrt();
    let opts = OpenSystemOptions { saw_drive: eps, saw_occupation: 0.0 };
    let l = parametric_open_system(p, g_pm, g_ps, det, cfg, opts)?;
    let rho = crate::quantum::steady_state(&l)?;
    let a = embed(&annihilator(cfg.n_mw)?, Subsystem::Mw, cfg)?;
    Ok(angular(p.mw.linewidth_external) * rho.expect(&a).norm_sqr() / flux)
}
