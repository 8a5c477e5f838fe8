//! Feasibility chain and the serializable run summary.

use becphonon::error::Result as CoreResult;
use becphonon::pulse::{energy_resolution, leakage_at_zero_energy, PulseEnvelope};
use becphonon::raman::{pi_pulse_times, TransferSetup};
use serde::Serialize;

use crate::config::ResolvedScenario;

/// One pass/fail check with the measured value and its threshold.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
    /// "<=" or ">=": how `value` is compared against `threshold`.
    pub comparison: String,
}

impl CheckResult {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: value <= threshold,
            value,
            threshold,
            comparison: "<=".to_string(),
        }
    }

    fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: value >= threshold,
            value,
            threshold,
            comparison: ">=".to_string(),
        }
    }
}

/// Where each input came from.
#[derive(Debug, Clone, Serialize)]
pub struct ProvenanceEntry {
    pub name: String,
    pub source: String,
}

/// Derived quantities of the feasibility chain, in experimenter-facing
/// units (ordinary Hz, seconds, SI lengths).
#[derive(Debug, Clone, Serialize)]
pub struct DerivedQuantities {
    pub mu_hz: f64,
    pub c_s_si: f64,
    pub xi_si: f64,
    pub k_xi: f64,
    pub wavelength_si: f64,
    pub omega_k_hz: f64,
    pub g_eff_hz: f64,
    pub delta_res_hz: f64,
    pub delta_offset_hz: f64,
    /// sqrt(mu/delta) * Omega1*Omega2/Delta in ordinary Hz: the
    /// interaction-enhanced transition rate in the phonon limit.
    pub effective_rate_hz: f64,
    /// Pulse duration in the area convention g_eff T = pi.
    pub t_pi_s: f64,
    /// Exact swap duration t_pi / 2.
    pub t_transfer_s: f64,
    pub fwhm_hz: f64,
    pub leakage_db: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub inputs: Vec<ProvenanceEntry>,
    pub derived: DerivedQuantities,
    pub checks: Vec<CheckResult>,
    pub all_pass: bool,
    pub notes: Vec<String>,
}

impl RunSummary {
    pub fn all_pass(checks: &[CheckResult]) -> bool {
        checks.iter().all(|c| c.pass)
    }
}

/// Thresholds for the feasibility checks. None of them is physically
/// forced; they are engineering choices, reported alongside every verdict.
pub mod thresholds {
    /// max(|Ω₁|,|Ω₂|)/Δ for the adiabatic elimination to be controlled.
    pub const ADIABATICITY: f64 = 0.1;
    /// kξ below which the phonon-limit formulas apply.
    pub const PHONON_REGIME: f64 = 1.0;
    /// δ must exceed the pulse FWHM by this factor to resolve the mode.
    pub const RESOLUTION_MARGIN: f64 = 3.0;
    /// Spectral amplitude at the ground-state transition, dB below peak.
    pub const LEAKAGE_DB: f64 = -20.0;
}

/// Run the feasibility chain: from the configured condensate and drive to
/// the effective rate, pulse duration, energy resolution and leakage, with
/// the adiabaticity / phonon-regime / resolution / leakage flags.
pub fn feasibility(scenario: &ResolvedScenario) -> CoreResult<RunSummary> {
    let setup = TransferSetup::new(scenario.params, scenario.drive, scenario.k)?;
    let si = &scenario.si;
    let times = pi_pulse_times(&setup)?;

    // Resolution and leakage are evaluated for the full area-pi pulse,
    // with the configured envelope shape.
    let envelope = PulseEnvelope::new(
        scenario.pulse.shape,
        times.t_pi,
        setup.g_eff,
        scenario.drive.small_detuning,
    )?;
    let fwhm_hz = energy_resolution(&envelope) / si.time_unit();
    let leakage_db = leakage_at_zero_energy(&envelope).ok();

    let delta_hz = si.angular_to_hz(scenario.drive.small_detuning);
    let rate_hz = (setup.params.mu() / scenario.drive.small_detuning).sqrt()
        * si.angular_to_hz(scenario.drive.two_photon_rate());

    let derived = DerivedQuantities {
        mu_hz: si.angular_to_hz(setup.params.mu()),
        c_s_si: si.velocity_to_si(setup.params.sound_speed()),
        xi_si: si.length_to_si(setup.params.healing_length()),
        k_xi: setup.params.k_xi(setup.k),
        wavelength_si: si.length_to_si(std::f64::consts::TAU / setup.k),
        omega_k_hz: si.angular_to_hz(setup.omega_k()),
        g_eff_hz: si.angular_to_hz(setup.g_eff),
        delta_res_hz: si.angular_to_hz(setup.delta_res),
        delta_offset_hz: si.angular_to_hz(setup.delta_offset),
        effective_rate_hz: rate_hz,
        t_pi_s: si.time_to_si(times.t_pi),
        t_transfer_s: si.time_to_si(times.t_transfer()),
        fwhm_hz,
        leakage_db,
    };

    let mut checks = vec![
        CheckResult::at_most(
            "adiabaticity max(Omega)/Delta",
            scenario.drive.adiabaticity(),
            thresholds::ADIABATICITY,
        ),
        CheckResult::at_most("phonon regime k*xi", derived.k_xi, thresholds::PHONON_REGIME),
        CheckResult::at_least(
            "resolution margin delta/FWHM",
            delta_hz / fwhm_hz,
            thresholds::RESOLUTION_MARGIN,
        ),
    ];
    if let Some(db) = leakage_db {
        checks.push(CheckResult::at_most(
            "ground-state leakage (dB)",
            db,
            thresholds::LEAKAGE_DB,
        ));
    } else {
        // delta*T below 2 pi: the ground state is inside the pulse
        // bandwidth, which is an automatic failure.
        checks.push(CheckResult::at_most("ground-state leakage (dB)", 0.0, thresholds::LEAKAGE_DB));
    }

    let all_pass = RunSummary::all_pass(&checks);
    Ok(RunSummary {
        inputs: scenario
            .sources
            .iter()
            .map(|(name, source)| ProvenanceEntry { name: name.clone(), source: source.clone() })
            .collect(),
        derived,
        checks,
        all_pass,
        notes: vec![
            "t_pi_s follows the area convention g_eff*T = pi; a single excitation is fully \
             transferred already at t_transfer_s = t_pi_s/2."
                .to_string(),
            "effective_rate_hz uses the phonon-limit prefactor sqrt(mu/delta); the exact \
             coupling g_eff_hz carries sqrt(mu/(2 delta)), a factor sqrt(2) below it."
                .to_string(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, DEFAULT_CONFIG};

    #[test]
    fn default_scenario_chain() {
        let scenario = parse_config(DEFAULT_CONFIG).unwrap().resolve().unwrap();
        let summary = feasibility(&scenario).unwrap();
        // Frozen from the unit-bridge oracle: rate 12.6 Hz, t_pi 41.7 ms.
        assert!((summary.derived.effective_rate_hz - 12.616).abs() < 0.01);
        assert!((summary.derived.t_pi_s - 0.041669).abs() < 1e-4);
        assert!((summary.derived.mu_hz - 159.155).abs() < 0.01);
        assert!(summary.all_pass, "checks: {:?}", summary.checks);
    }

    #[test]
    fn strong_drive_fails_adiabaticity() {
        let text = DEFAULT_CONFIG.replace("Omega1 = 1e7", "Omega1 = 5e12");
        let scenario = parse_config(&text).unwrap().resolve().unwrap();
        let summary = feasibility(&scenario).unwrap();
        let adiab = summary.checks.iter().find(|c| c.name.starts_with("adiabaticity")).unwrap();
        assert!(!adiab.pass);
        assert!(!summary.all_pass);
    }

    #[test]
    fn free_particle_mode_fails_phonon_check() {
        // kappa chosen so k*xi = 3
        let text = DEFAULT_CONFIG.replace("delta_Hz = 100", "delta_Hz = 100\nkappa = -3.0");
        let scenario = parse_config(&text).unwrap().resolve().unwrap();
        let summary = feasibility(&scenario).unwrap();
        let phonon = summary.checks.iter().find(|c| c.name.starts_with("phonon")).unwrap();
        assert!(!phonon.pass);
    }
}
