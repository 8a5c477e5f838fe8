//! Acoustic analogue-gravity estimators.
//!
//! Long-wavelength phonons in a flowing condensate propagate on the
//! effective (inverse) metric
//!
//! ```text
//!   g_eff^{μν} = (1/ϱ₀c_s) [ 1, v₀ ; v₀, v₀² − c_s² ]       (1D block),
//! ```
//!
//! built from the background density ϱ₀, flow velocity v₀ and sound speed
//! c_s. Where |v₀| crosses c_s the flow hosts a sonic horizon whose
//! emission temperature is set by the gradient of v₀ − c_s, and a temporal
//! change of c_s creates quasiparticle pairs. These estimators quantify
//! what a phonon detector would need to see; none of them simulates the
//! flow itself.

use crate::bogoliubov::{evolve_bdg_mode, excitation_number, BdgModeState, CouplingRamp};
use crate::error::{Error, Result};
use crate::units::{CondensateParams, SiConversion, EV_SI, HBAR_SI, K_BOLTZMANN_SI};

/// ħ / 2πk_B in kelvin seconds: temperature per unit velocity gradient.
pub const HAWKING_K_PER_GRADIENT: f64 = HBAR_SI / (std::f64::consts::TAU * K_BOLTZMANN_SI);

/// 1D background flow sampled on a common position grid.
#[derive(Debug, Clone)]
pub struct FlowProfile {
    pub r: Vec<f64>,
    pub v0: Vec<f64>,
    pub c_s: Vec<f64>,
    pub rho0: Vec<f64>,
}

impl FlowProfile {
    pub fn new(r: Vec<f64>, v0: Vec<f64>, c_s: Vec<f64>, rho0: Vec<f64>) -> Result<Self> {
        let n = r.len();
        if n < 3 {
            return Err(Error::domain("flow profile needs at least 3 grid points"));
        }
        if v0.len() != n || c_s.len() != n || rho0.len() != n {
            return Err(Error::domain("flow profile grids must be aligned"));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("position grid must be strictly increasing"));
        }
        if c_s.iter().any(|&c| !(c > 0.0)) {
            return Err(Error::domain("sound speed must be positive everywhere"));
        }
        if rho0.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::domain("density must be positive everywhere"));
        }
        Ok(FlowProfile { r, v0, c_s, rho0 })
    }
}

/// The 1D inverse-metric block with the 1/(ϱ₀c_s) prefactor multiplied in.
#[derive(Debug, Clone, Copy)]
pub struct MetricComponents {
    pub prefactor: f64,
    pub tt: f64,
    pub tx: f64,
    pub xx: f64,
}

impl MetricComponents {
    /// det = tt·xx − tx² = −(c_s · prefactor)²; negative for any valid
    /// background (Lorentzian signature).
    pub fn determinant(&self) -> f64 {
        self.tt * self.xx - self.tx * self.tx
    }
}

/// Inverse-metric components at one point of the background.
pub fn effective_metric(rho0: f64, v0: f64, c_s: f64) -> Result<MetricComponents> {
    if !(rho0 > 0.0) || !rho0.is_finite() {
        return Err(Error::domain(format!("density must be positive, got {rho0}")));
    }
    if !(c_s > 0.0) || !c_s.is_finite() {
        return Err(Error::domain(format!("sound speed must be positive, got {c_s}")));
    }
    let prefactor = 1.0 / (rho0 * c_s);
    Ok(MetricComponents {
        prefactor,
        tt: prefactor,
        tx: prefactor * v0,
        xx: prefactor * (v0 * v0 - c_s * c_s),
    })
}

/// One sonic horizon: position of the |v₀| = c_s crossing, local gradient
/// of v₀ − c_s, and the corresponding emission temperature.
#[derive(Debug, Clone, Copy)]
pub struct Horizon {
    pub position: f64,
    /// ∂_r (v₀ − c_s) at the crossing (internal units).
    pub gradient: f64,
    /// T = (ħ/2πk_B) |∂_r (v₀ − c_s)| in kelvin.
    pub temperature_kelvin: f64,
}

#[derive(Debug, Clone, Default)]
pub struct HorizonReport {
    pub horizons: Vec<Horizon>,
}

// Central differences with one-sided stencils at the edges.
fn gradient_at(r: &[f64], f: &[f64], i: usize) -> f64 {
    let n = r.len();
    if i == 0 {
        (f[1] - f[0]) / (r[1] - r[0])
    } else if i == n - 1 {
        (f[n - 1] - f[n - 2]) / (r[n - 1] - r[n - 2])
    } else {
        (f[i + 1] - f[i - 1]) / (r[i + 1] - r[i - 1])
    }
}

/// Locate every sign change of v₀ − c_s by linear interpolation and report
/// the Hawking temperature from the local gradient. A profile without a
/// crossing yields an empty report, not an error. Velocities are converted
/// to SI through `si` before the temperature is formed.
pub fn find_horizons(profile: &FlowProfile, si: &SiConversion) -> Result<HorizonReport> {
    let n = profile.r.len();
    let excess: Vec<f64> = (0..n).map(|i| profile.v0[i] - profile.c_s[i]).collect();
    let mut horizons = Vec::new();
    for i in 0..n - 1 {
        let (a, b) = (excess[i], excess[i + 1]);
        let crossing = if a == 0.0 {
            // exact grid hit; attribute to the left cell only
            Some(profile.r[i])
        } else if a * b < 0.0 {
            let f = a / (a - b);
            Some(profile.r[i] + f * (profile.r[i + 1] - profile.r[i]))
        } else {
            None
        };
        if let Some(position) = crossing {
            // gradient interpolated between the cell's nodal gradients
            let g0 = gradient_at(&profile.r, &excess, i);
            let g1 = gradient_at(&profile.r, &excess, i + 1);
            let f = (position - profile.r[i]) / (profile.r[i + 1] - profile.r[i]);
            let gradient = g0 + f * (g1 - g0);
            // internal velocity gradient is an inverse time
            let gradient_si = gradient / si.time_unit();
            horizons.push(Horizon {
                position,
                gradient,
                temperature_kelvin: HAWKING_K_PER_GRADIENT * gradient_si.abs(),
            });
        }
    }
    Ok(HorizonReport { horizons })
}

/// Energy ħ c_s (2π/λ) of a phonon of wavelength λ, in eV. `c_s` and
/// `lambda` are internal and converted through `si`.
pub fn hawking_energy_bound(c_s: f64, lambda: f64, si: &SiConversion) -> Result<f64> {
    if !(c_s >= 0.0) || !(lambda > 0.0) {
        return Err(Error::domain(format!(
            "need c_s >= 0 and lambda > 0, got c_s = {c_s}, lambda = {lambda}"
        )));
    }
    let c_s_si = si.velocity_to_si(c_s);
    let lambda_si = si.length_to_si(lambda);
    Ok(HBAR_SI * c_s_si * std::f64::consts::TAU / lambda_si / EV_SI)
}

/// Order-of-magnitude wavelength |c_s²/ċ_s| of quasiparticles created by a
/// changing sound speed. An estimate of the scale only, not a prediction
/// of the spectrum; a stationary background (ċ_s = 0) has no such scale.
pub fn creation_wavelength(c_s: f64, cdot_s: f64) -> Result<f64> {
    if cdot_s == 0.0 {
        return Err(Error::domain(
            "stationary sound speed: no particle-creation scale",
        ));
    }
    Ok((c_s * c_s / cdot_s).abs())
}

/// Quasiparticles created per mode by a coupling ramp: n(k) = |β_k|² from
/// evolving each mode over the ramp and projecting on the final stationary
/// basis. Sudden ramps match the endpoint-basis overlap exactly.
pub fn particle_creation_summary(
    ramp: &CouplingRamp,
    params0: &CondensateParams,
    k_grid: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    if k_grid.is_empty() {
        return Err(Error::domain("k grid must not be empty"));
    }
    if k_grid.iter().any(|&k| k == 0.0 || !k.is_finite()) {
        return Err(Error::domain("k grid must be finite and exclude k = 0"));
    }
    let params_start = params0.with_coupling(ramp.g_start())?;
    let params_final = params0.with_coupling(ramp.g_end())?;
    let tau = ramp.duration();
    let mut out = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let init = BdgModeState::stationary(&params_start, k)?;
        let traj = evolve_bdg_mode(&init, ramp, params0, k, &[0.0, tau], tol)?;
        let n = excitation_number(traj.last().unwrap(), &params_final, k)?;
        out.push((k, n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn si_identity() -> SiConversion {
        SiConversion::identity()
    }

    #[test]
    fn metric_static_fluid_is_diagonal() {
        let m = effective_metric(2.0, 0.0, 1.5).unwrap();
        assert_eq!(m.tx, 0.0);
        assert!((m.tt - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.xx - (-1.5 * 1.5) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn metric_sonic_point_kills_xx() {
        let m = effective_metric(1.0, 2.0, 2.0).unwrap();
        assert!(m.xx.abs() < 1e-15);
    }

    #[test]
    fn metric_direct_evaluation() {
        let m = effective_metric(2.0, 0.5, 1.0).unwrap();
        assert!((m.tt - 0.5).abs() < 1e-15);
        assert!((m.tx - 0.25).abs() < 1e-15);
        assert!((m.xx - (-0.375)).abs() < 1e-15);
    }

    #[test]
    fn metric_signature_invariant() {
        for (rho, v, c) in [(1.0, 0.0, 1.0), (2.0, 0.5, 1.0), (0.3, 3.0, 0.7)] {
            let m = effective_metric(rho, v, c).unwrap();
            let det = m.determinant();
            assert!(det < 0.0);
            assert!((det + (c * m.prefactor).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn metric_rejects_bad_background() {
        assert!(effective_metric(0.0, 0.0, 1.0).is_err());
        assert!(effective_metric(1.0, 0.0, 0.0).is_err());
    }

    fn tanh_profile(n: usize) -> FlowProfile {
        let c0 = 1.0;
        let r: Vec<f64> = (0..n).map(|i| -4.0 + 8.0 * i as f64 / (n - 1) as f64).collect();
        let v0: Vec<f64> = r.iter().map(|&x| 2.0 * c0 * x.tanh()).collect();
        let c_s = vec![c0; n];
        let rho0 = vec![1.0; n];
        FlowProfile::new(r, v0, c_s, rho0).unwrap()
    }

    #[test]
    fn horizon_found_where_tanh_is_half() {
        let rep = find_horizons(&tanh_profile(801), &si_identity()).unwrap();
        assert_eq!(rep.horizons.len(), 1);
        let h = rep.horizons[0];
        // root-finding oracle: tanh(r) = 1/2 at atanh(0.5)
        let expected = 0.5f64.atanh();
        assert!((h.position - expected).abs() < 1e-4, "pos = {}", h.position);
        // gradient 2 c0 sech^2(r*) = 2 (1 - 1/4) = 1.5
        assert!((h.gradient - 1.5).abs() < 1e-3);
        assert!(h.temperature_kelvin > 0.0);
    }

    #[test]
    fn subsonic_flow_has_no_horizon() {
        let n = 101;
        let r: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let v0 = vec![0.3; n];
        let profile = FlowProfile::new(r, v0, vec![1.0; n], vec![1.0; n]).unwrap();
        let rep = find_horizons(&profile, &si_identity()).unwrap();
        assert!(rep.horizons.is_empty());
    }

    #[test]
    fn hawking_temperature_codata_value() {
        // gradient of 1e3 / s maps to 1.21566e-9 K
        assert!((HAWKING_K_PER_GRADIENT - 1.2156624712e-12).abs() < 1e-21);
        let t = HAWKING_K_PER_GRADIENT * 1e3;
        assert!((t - 1.21566247e-9).abs() / 1.21566247e-9 < 1e-8);
    }

    #[test]
    fn horizon_position_stable_under_grid_refinement() {
        let coarse = find_horizons(&tanh_profile(201), &si_identity()).unwrap();
        let fine = find_horizons(&tanh_profile(401), &si_identity()).unwrap();
        let cell = 8.0 / 200.0;
        assert!((coarse.horizons[0].position - fine.horizons[0].position).abs() <= cell);
    }

    #[test]
    fn temperature_depends_only_on_gradient() {
        // same |d(v0 - c_s)/dr| at the root, different absolute levels
        let n = 401;
        let r: Vec<f64> = (0..n).map(|i| -2.0 + 4.0 * i as f64 / (n - 1) as f64).collect();
        let v_a: Vec<f64> = r.iter().map(|&x| 1.0 + 0.5 * x).collect();
        let v_b: Vec<f64> = r.iter().map(|&x| 3.0 + 0.5 * x).collect();
        let pa = FlowProfile::new(r.clone(), v_a, vec![1.0; n], vec![1.0; n]).unwrap();
        let pb = FlowProfile::new(r, v_b, vec![3.0; n], vec![2.0; n]).unwrap();
        let ta = find_horizons(&pa, &si_identity()).unwrap().horizons[0].temperature_kelvin;
        let tb = find_horizons(&pb, &si_identity()).unwrap().horizons[0].temperature_kelvin;
        assert!((ta - tb).abs() / ta < 1e-12);
    }

    #[test]
    fn phonon_energy_bound_si_case() {
        // c_s = 1 mm/s: E = 1e-13 eV corresponds to lambda = 41.36 um
        // (2 pi hbar c_s / E with SI constants).
        let si = si_identity();
        let e = hawking_energy_bound(1e-3, 4.135667694e-5, &si).unwrap();
        assert!((e - 1e-13).abs() / 1e-13 < 1e-8, "E = {e}");
        // doubling the wavelength halves the energy
        let e2 = hawking_energy_bound(1e-3, 2.0 * 4.135667694e-5, &si).unwrap();
        assert!((e2 - e / 2.0).abs() / e < 1e-12);
        // zero sound speed carries no energy
        assert_eq!(hawking_energy_bound(0.0, 1e-5, &si).unwrap(), 0.0);
    }

    #[test]
    fn creation_wavelength_scales() {
        assert!((creation_wavelength(1.0, 0.1).unwrap() - 10.0).abs() < 1e-12);
        let a = creation_wavelength(1.0, 0.1).unwrap();
        let b = creation_wavelength(2.0, 0.1).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
        // SI: c_s = 1 mm/s changing at 1 (mm/s)/s gives 1 mm
        assert!((creation_wavelength(1e-3, 1e-3).unwrap() - 1e-3).abs() < 1e-15);
        assert!(creation_wavelength(1.0, 0.0).is_err());
    }

    #[test]
    fn creation_summary_constant_ramp_is_empty_handed() {
        let p = CondensateParams::new(1.0, 1.0, 1.0).unwrap();
        let ramp = CouplingRamp::Constant { g: 1.0, duration: 10.0 };
        let table = particle_creation_summary(&ramp, &p, &[0.3, 0.7, 1.5], 1e-10).unwrap();
        for (k, n) in table {
            assert!(n < 1e-20, "k={k}: n={n}");
        }
    }

    #[test]
    fn creation_summary_sudden_matches_overlap() {
        use crate::bogoliubov::quasiparticle_coeffs;
        let p = CondensateParams::new(1.0, 1.0, 1.0).unwrap();
        let ramp = CouplingRamp::Sudden { g0: 1.0, g1: 4.0, switch_time: 0.5, duration: 1.0 };
        let ks = [0.4, 1.0, 2.3];
        let table = particle_creation_summary(&ramp, &p, &ks, 1e-10).unwrap();
        let p1 = p.with_coupling(4.0).unwrap();
        for (k, n) in table {
            let m0 = quasiparticle_coeffs(&p, k).unwrap();
            let m1 = quasiparticle_coeffs(&p1, k).unwrap();
            let oracle = (m1.u * m0.v - m1.v * m0.u).powi(2);
            assert!((n - oracle).abs() <= 1e-6, "k={k}: {n} vs {oracle}");
        }
    }

    #[test]
    fn creation_summary_slow_ramp_suppressed() {
        use crate::bogoliubov::dispersion;
        let p = CondensateParams::new(1.0, 1.0, 1.0).unwrap();
        let ks = [0.5, 1.0];
        let omega_min = dispersion(&p.with_coupling(0.25).unwrap(), 0.5);
        let ramp = CouplingRamp::SmoothTanh {
            g0: 1.0,
            g1: 0.25,
            duration: 200.0 / omega_min,
            steepness: 3.0,
        };
        let table = particle_creation_summary(&ramp, &p, &ks, 1e-11).unwrap();
        for (k, n) in table {
            assert!(n <= 1e-3, "k={k}: n={n}");
        }
    }
}
