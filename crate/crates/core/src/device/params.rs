use serde::{Deserialize, Serialize};

use super::{invalid, Result};
use crate::units::{ELEMENTARY_CHARGE, HBAR, MICRON2};

/// Transmon parameters. `alpha` is derived as `omega_f − 2·omega_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmonParams {
    pub e_c: f64,
    pub e_j: f64,
    pub omega_e: f64,
    pub omega_f: f64,
    /// Decay rate of `|f⟩`, modeled as a single `|f⟩ → |g⟩` relaxation.
    pub kappa_f: f64,
}

impl TransmonParams {
    pub fn new(e_c: f64, e_j: f64, omega_e: f64, omega_f: f64, kappa_f: f64) -> Result<Self> {
        let p = Self { e_c, e_j, omega_e, omega_f, kappa_f };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_c > 0.0 && self.e_j > 0.0) {
            return Err(invalid("transmon.e_c/e_j", "energies must be positive"));
        }
        if !(self.omega_e > 0.0 && self.omega_f > self.omega_e) {
            return Err(invalid("transmon.omega_f", "need 0 < omega_e < omega_f"));
        }
        if self.kappa_f < 0.0 {
            return Err(invalid("transmon.kappa_f", "negative decay rate"));
        }
        if self.e_j / self.e_c <= 10.0 {
            log::warn!("E_J/E_C = {:.2} is outside the transmon regime", self.e_j / self.e_c);
        }
        Ok(())
    }

    /// Anharmonicity `ω_f − 2ω_e` (negative for a transmon).
    pub fn alpha(&self) -> f64 {
        self.omega_f - 2.0 * self.omega_e
    }

    /// `ω_f − ω_e`.
    pub fn omega_fe(&self) -> f64 {
        self.omega_f - self.omega_e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    pub omega: f64,
    pub linewidth_total: f64,
    /// External coupling rate of a single port.
    pub linewidth_external: f64,
    pub ports: u32,
}

impl ResonatorParams {
    pub fn new(omega: f64, linewidth_total: f64, linewidth_external: f64, ports: u32) -> Result<Self> {
        let r = Self { omega, linewidth_total, linewidth_external, ports };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(invalid("resonator.omega", "must be positive"));
        }
        if !(self.linewidth_total > 0.0) {
            return Err(invalid("resonator.linewidth_total", "must be positive"));
        }
        if self.linewidth_external < 0.0
            || self.linewidth_external * self.ports.max(1) as f64 > self.linewidth_total
        {
            return Err(invalid(
                "resonator.linewidth_external",
                "need 0 ≤ ports·external ≤ total",
            ));
        }
        Ok(())
    }

    /// External coupling factor `η = linewidth_external / linewidth_total`.
    pub fn coupling_factor(&self) -> f64 {
        self.linewidth_external / self.linewidth_total
    }

    /// Loss into everything except the external ports.
    pub fn linewidth_internal(&self) -> f64 {
        self.linewidth_total - self.ports as f64 * self.linewidth_external
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub g_mw: f64,
    pub g_saw: f64,
}

/// IDT and substrate geometry of the SAW resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryParams {
    pub c_idt: f64,
    pub c_total: f64,
    /// Mode area in m².
    pub mode_area: f64,
    /// Surface piezoelectric potential per unit strain amplitude, V.
    pub phi0: f64,
    /// Substrate mass density, kg/m³.
    pub density: f64,
    pub sound_velocity: f64,
    /// Effective mode depth in units of the acoustic wavelength.
    pub depth_wavelengths: f64,
}

impl GeometryParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_total > 0.0 && self.c_idt >= 0.0 && self.c_idt <= self.c_total) {
            return Err(invalid("geometry.c_idt", "need 0 ≤ c_idt ≤ c_total"));
        }
        if !(self.mode_area > 0.0) {
            return Err(invalid("geometry.mode_area", "must be positive"));
        }
        if !(self.density > 0.0 && self.sound_velocity > 0.0 && self.depth_wavelengths > 0.0) {
            return Err(invalid("geometry", "density, velocity and depth must be positive"));
        }
        Ok(())
    }

    /// `V_zpf = φ₀ √(1 μm² / A)`.
    pub fn v_zpf(&self) -> f64 {
        self.phi0 * (MICRON2 / self.mode_area).sqrt()
    }

    /// `X_zpf = √(ħ / (2 m ω))` with `m = ρ·A·d` and `d = depth·λ`; since
    /// `λω = 2πv` this is `√(ħ / (4π·depth·ρ·A·v))`, independent of frequency.
    pub fn x_zpf(&self) -> f64 {
        (HBAR
            / (4.0 * std::f64::consts::PI
                * self.depth_wavelengths
                * self.density
                * self.mode_area
                * self.sound_velocity))
            .sqrt()
    }

    /// `e·φ₀·(C_IDT/C)/h`: the coupling at 1 μm² mode area, in Hz.
    pub fn coupling_prefactor(&self) -> f64 {
        ELEMENTARY_CHARGE * self.phi0 * (self.c_idt / self.c_total) / (2.0 * std::f64::consts::PI * HBAR)
    }
}

/// Where a tone enters the device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DrivePort {
    /// Port 1, the MW feed line.
    Mw,
    /// Port 2, the SAW input IDT (also carries the qubit drives).
    SawIn,
    /// Port 3, the SAW output IDT.
    SawOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveTone {
    pub frequency: f64,
    /// Drive amplitude `Ω/2π`.
    pub amplitude: f64,
    pub port: DrivePort,
}

impl DriveTone {
    pub fn new(frequency: f64, amplitude: f64, port: DrivePort) -> Result<Self> {
        if amplitude < 0.0 {
            return Err(invalid("drive.amplitude", "must be non-negative"));
        }
        Ok(Self { frequency, amplitude, port })
    }
}

/// Operating point and calibration of the two parametric drives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveSettings {
    /// `Ω_m/2π` of drive 1 at the operating point.
    pub amplitude_mw: f64,
    /// `Ω_s/2π` of drive 2 at the operating point.
    pub amplitude_saw: f64,
    /// Single-photon detuning `ω_d1 − ω_m + ω_f` at the operating point.
    pub detuning: f64,
    /// `Ω/2π` per √mW of drive power referred to the device, per drive.
    pub calibration_mw: f64,
    pub calibration_saw: f64,
    /// Optional fixed Stark coefficients `(s₁, s₂)` in 1/Hz replacing the
    /// perturbative values.
    pub stark_override: Option<[f64; 2]>,
    /// SAW frequency pull per intra-resonator phonon, Hz.
    pub saw_pull_per_phonon: f64,
}

impl DriveSettings {
    /// Drive amplitude for a power in mW on drive 1 (`mw`) or drive 2.
    pub fn amplitude_for_power(&self, power_mw: f64, mw_drive: bool) -> f64 {
        let cal = if mw_drive { self.calibration_mw } else { self.calibration_saw };
        cal * power_mw.max(0.0).sqrt()
    }
}

/// Thermal and read-out settings for the noise measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSettings {
    /// Background at the MW output plane, quanta·s⁻¹·Hz⁻¹.
    pub floor: f64,
    pub t_bath_low: f64,
    pub t_bath_high: f64,
    pub t_eff_low: f64,
    pub t_eff_high: f64,
    /// Ordered amplifier stages `(name, gain dB)`.
    pub amplifiers: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub transmon: TransmonParams,
    pub mw: ResonatorParams,
    pub saw: ResonatorParams,
    pub coupling: CouplingParams,
    pub geometry: GeometryParams,
    pub drive: DriveSettings,
    pub noise: NoiseSettings,
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        self.transmon.validate()?;
        self.mw.validate()?;
        self.saw.validate()?;
        self.geometry.validate()?;
        if self.coupling.g_mw < 0.0 || self.coupling.g_saw < 0.0 {
            return Err(invalid("coupling", "couplings must be non-negative"));
        }
        if self.noise.floor < 0.0 {
            return Err(invalid("noise.floor", "must be non-negative"));
        }
        Ok(())
    }
}
