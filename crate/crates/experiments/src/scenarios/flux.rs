//! Output MW photon flux against input SAW phonon flux.

use saw_transducer::device::DeviceParams;
use saw_transducer::scattering::{
    efficiency_on_resonance, flux_bound, flux_transfer_line, BoundNormalization, LinearModeNetwork,
};

use super::{csv, Check, Outcome, Tolerance};
use crate::ComponentError;

pub(super) fn run(p: &DeviceParams) -> Result<Outcome, ComponentError> {
    let net = LinearModeNetwork::at_operating_point(p)?;
    let flux: Vec<f64> = (0..=32).map(|k| 10f64.powf(2.0 + k as f64 * 0.25)).collect();
    let out_flux = flux_transfer_line(p, &net, &flux)?;
    let mut linear = p.clone();
    linear.drive.saw_pull_per_phonon = 0.0;
    let lin_flux = flux_transfer_line(&linear, &net, &flux)?;
    let (em, es) = net.coupling_factors();
    let (cm, cs) = net.cooperativities()?;
    let rows = flux.iter().zip(out_flux.iter().zip(&lin_flux)).map(|(&f, (&o, &l))| {
        vec![
            f,
            o,
            l,
            flux_bound(em, es, f, BoundNormalization::UnitEfficiency),
            flux_bound(em, es, f, BoundNormalization::FourFold),
        ]
    });
    let mut out = Outcome::default();
    out.files.push((
        "fig3c_flux.csv".into(),
        csv("input_flux,output_flux,output_flux_linear,bound_unit,bound_fourfold", rows),
    ));
    let slope = lin_flux[0] / flux[0];
    out.checks.push(Check::new(
        "low-flux slope / (eta_m eta_s)",
        efficiency_on_resonance(cm, cs, 1.0, 1.0),
        slope / (em * es),
        Tolerance::Relative(1e-9),
    ));
    out.checks.push(Check::new("low-flux slope / (eta_m eta_s), quoted", 0.39, slope / (em * es), Tolerance::Relative(0.02)));
    let last = out_flux.len() - 1;
    out.checks.push(Check::new("high-flux output / linear", 1.0, out_flux[last] / lin_flux[last], Tolerance::Info));
    out.notes.push("bound_unit is the unit-normalized-efficiency line; bound_fourfold scales it by 4".into());
    Ok(out)
}
