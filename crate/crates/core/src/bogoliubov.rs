//! Quasiparticle structure of the homogeneous condensate.
//!
//! The dispersion relation is ω²(k) = gρk²/m + k⁴/(2m)², interpolating
//! between sound waves ω ≈ c_s k for kξ ≪ 1 and free particles
//! ω ≈ k²/2m for kξ ≫ 1. A single k-mode is described by the pair of
//! mode functions (U, V) obeying the linearized equations
//!
//! ```text
//!   i U̇ = (ε_k + gρ) U + gρ V
//!   i V̇ = −(ε_k + gρ) V − gρ U,      ε_k = k²/2m,
//! ```
//!
//! written in the frame of the condensate (the e^{−iμt} phase removed).
//! The symplectic norm |U|² − |V|² = 1 is conserved for any g(t); a
//! time-dependent coupling mixes the mode with its negative-frequency
//! partner and the admixture |β|² is the number of created quasiparticles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{integrate, LinearSystem};
use crate::units::CondensateParams;

/// One stationary quasiparticle mode: wavenumber, frequency and the
/// Bogoliubov coefficients with u² − v² = 1.
#[derive(Debug, Clone, Copy)]
pub struct BogoliubovMode {
    pub k: f64,
    pub omega: f64,
    pub u: f64,
    pub v: f64,
}

/// Mode frequency ω(k) = √(gρk²/m + k⁴/(2m)²).
pub fn dispersion(params: &CondensateParams, k: f64) -> f64 {
    let eps = k * k / (2.0 * params.mass());
    (params.mu() * k * k / params.mass() + eps * eps).sqrt()
}

/// Quasiparticle coefficients of a stationary mode,
///
/// ```text
///   u = (√(ε/ω) + √(ω/ε)) / 2,   v = (√(ε/ω) − √(ω/ε)) / 2,
/// ```
///
/// equivalent to √(k²/2ω)(1/2 ± ω/k²) for m = 1. v ≤ 0 for g > 0 and
/// v = 0 for the ideal gas, where atoms are their own quasiparticles.
/// k = 0 is rejected: the gapless zero mode has no normalizable pair.
pub fn quasiparticle_coeffs(params: &CondensateParams, k: f64) -> Result<BogoliubovMode> {
    if k == 0.0 || !k.is_finite() {
        return Err(Error::domain(format!(
            "quasiparticle coefficients need k != 0, got {k}"
        )));
    }
    let omega = dispersion(params, k);
    let eps = k * k / (2.0 * params.mass());
    let a = (eps / omega).sqrt();
    let b = (omega / eps).sqrt();
    Ok(BogoliubovMode {
        k,
        omega,
        u: 0.5 * (a + b),
        v: 0.5 * (a - b),
    })
}

/// Complex mode functions of one k-mode; |U|² − |V|² = 1 up to integrator
/// tolerance along any evolution.
#[derive(Debug, Clone, Copy)]
pub struct BdgModeState {
    pub u: Complex64,
    pub v: Complex64,
}

impl BdgModeState {
    /// Stationary mode of the given background.
    pub fn stationary(params: &CondensateParams, k: f64) -> Result<Self> {
        let m = quasiparticle_coeffs(params, k)?;
        Ok(BdgModeState {
            u: Complex64::new(m.u, 0.0),
            v: Complex64::new(m.v, 0.0),
        })
    }

    /// Symplectic norm |U|² − |V|², conserved at the value 1.
    pub fn symplectic_norm(&self) -> f64 {
        self.u.norm_sqr() - self.v.norm_sqr()
    }
}

/// Time course of the interaction coupling g(t) over [0, duration].
///
/// Sudden ramps switch instantaneously at `switch_time` and are propagated
/// exactly (piecewise-stationary phases, no integration), which makes them
/// usable as an oracle for the integrated ramps.
#[derive(Debug, Clone, Copy)]
pub enum CouplingRamp {
    Constant { g: f64, duration: f64 },
    Linear { g0: f64, g1: f64, duration: f64 },
    /// (tanh(s(2t/τ−1)) − tanh(−s)) / (tanh(s) − tanh(−s)) interpolation;
    /// endpoints are exact, `steepness` sets how localized the change is.
    SmoothTanh { g0: f64, g1: f64, duration: f64, steepness: f64 },
    Sudden { g0: f64, g1: f64, switch_time: f64, duration: f64 },
}

impl CouplingRamp {
    pub fn duration(&self) -> f64 {
        match *self {
            CouplingRamp::Constant { duration, .. }
            | CouplingRamp::Linear { duration, .. }
            | CouplingRamp::SmoothTanh { duration, .. }
            | CouplingRamp::Sudden { duration, .. } => duration,
        }
    }

    pub fn g_start(&self) -> f64 {
        match *self {
            CouplingRamp::Constant { g, .. } => g,
            CouplingRamp::Linear { g0, .. }
            | CouplingRamp::SmoothTanh { g0, .. }
            | CouplingRamp::Sudden { g0, .. } => g0,
        }
    }

    pub fn g_end(&self) -> f64 {
        match *self {
            CouplingRamp::Constant { g, .. } => g,
            CouplingRamp::Linear { g1, .. }
            | CouplingRamp::SmoothTanh { g1, .. }
            | CouplingRamp::Sudden { g1, .. } => g1,
        }
    }

    /// g(t), clamped to the endpoint values outside [0, duration].
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            CouplingRamp::Constant { g, .. } => g,
            CouplingRamp::Linear { g0, g1, duration } => {
                let x = (t / duration).clamp(0.0, 1.0);
                g0 + (g1 - g0) * x
            }
            CouplingRamp::SmoothTanh { g0, g1, duration, steepness } => {
                let x = (t / duration).clamp(0.0, 1.0);
                let s = steepness;
                let w = ((s * (2.0 * x - 1.0)).tanh() + s.tanh()) / (2.0 * s.tanh());
                g0 + (g1 - g0) * w
            }
            CouplingRamp::Sudden { g0, g1, switch_time, .. } => {
                if t < switch_time {
                    g0
                } else {
                    g1
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let dur = self.duration();
        if !(dur > 0.0) || !dur.is_finite() {
            return Err(Error::domain(format!("ramp duration must be positive, got {dur}")));
        }
        if self.g_start() < 0.0 || self.g_end() < 0.0 {
            return Err(Error::domain("coupling must stay non-negative"));
        }
        if let CouplingRamp::Sudden { switch_time, duration, .. } = *self {
            if !(0.0..=duration).contains(&switch_time) {
                return Err(Error::domain(format!(
                    "switch_time {switch_time} outside [0, {duration}]"
                )));
            }
        }
        if let CouplingRamp::SmoothTanh { steepness, .. } = *self {
            if !(steepness > 0.0) {
                return Err(Error::domain("tanh steepness must be positive"));
            }
        }
        Ok(())
    }
}

// Exact propagation over a constant-coupling interval: decompose onto the
// (u, v) e^{-iwt} and (v, u) e^{+iwt} solutions of the stationary problem.
fn propagate_constant(
    state: &BdgModeState,
    params: &CondensateParams,
    k: f64,
    dt: f64,
) -> Result<BdgModeState> {
    let m = quasiparticle_coeffs(params, k)?;
    let (u0, v0) = (Complex64::new(m.u, 0.0), Complex64::new(m.v, 0.0));
    let alpha = u0 * state.u - v0 * state.v;
    let beta = u0 * state.v - v0 * state.u;
    let ph_m = Complex64::new(0.0, -m.omega * dt).exp();
    let ph_p = Complex64::new(0.0, m.omega * dt).exp();
    Ok(BdgModeState {
        u: alpha * ph_m * u0 + beta * ph_p * v0,
        v: alpha * ph_m * v0 + beta * ph_p * u0,
    })
}

/// Evolve one k-mode under the ramp g(t), starting from `initial` (usually
/// the stationary mode of the initial background). Returns the state at
/// every entry of `t_grid`, which must lie within [0, ramp duration].
///
/// Constant and sudden ramps are propagated exactly through the stationary
/// phases; the other shapes go through the adaptive integrator.
pub fn evolve_bdg_mode(
    initial: &BdgModeState,
    ramp: &CouplingRamp,
    params0: &CondensateParams,
    k: f64,
    t_grid: &[f64],
    tol: f64,
) -> Result<Vec<BdgModeState>> {
    ramp.validate()?;
    if k == 0.0 {
        return Err(Error::domain("mode evolution needs k != 0"));
    }
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("time grid must be strictly increasing, len >= 2"));
    }
    let dur = ramp.duration();
    if t_grid[0] < 0.0 || t_grid[t_grid.len() - 1] > dur * (1.0 + 1e-12) {
        return Err(Error::domain("time grid must lie within the ramp duration"));
    }
    let norm0 = initial.symplectic_norm();
    if (norm0 - 1.0).abs() > 1e-6 {
        return Err(Error::Consistency(format!(
            "initial symplectic norm {norm0} deviates from 1 by more than 1e-6"
        )));
    }

    match *ramp {
        CouplingRamp::Constant { g, .. } => {
            let p = params0.with_coupling(g)?;
            let mut out = Vec::with_capacity(t_grid.len());
            for &t in t_grid {
                out.push(propagate_constant(initial, &p, k, t - t_grid[0])?);
            }
            Ok(out)
        }
        CouplingRamp::Sudden { g0, g1, switch_time, .. } => {
            let p0 = params0.with_coupling(g0)?;
            let p1 = params0.with_coupling(g1)?;
            let mut out = Vec::with_capacity(t_grid.len());
            if t_grid[0] >= switch_time {
                // grid lies entirely after the jump
                for &t in t_grid {
                    out.push(propagate_constant(initial, &p1, k, t - t_grid[0])?);
                }
            } else {
                let at_switch = propagate_constant(initial, &p0, k, switch_time - t_grid[0])?;
                for &t in t_grid {
                    if t < switch_time {
                        out.push(propagate_constant(initial, &p0, k, t - t_grid[0])?);
                    } else {
                        out.push(propagate_constant(&at_switch, &p1, k, t - switch_time)?);
                    }
                }
            }
            Ok(out)
        }
        _ => {
            let eps = k * k / (2.0 * params0.mass());
            let rho = params0.density();
            let ramp = *ramp;
            let sys = LinearSystem::new(2, false, move |t, a: &mut DMatrix<Complex64>| {
                let p = ramp.value(t) * rho;
                let h = eps + p;
                a[(0, 0)] = Complex64::new(0.0, -h);
                a[(0, 1)] = Complex64::new(0.0, -p);
                a[(1, 0)] = Complex64::new(0.0, p);
                a[(1, 1)] = Complex64::new(0.0, h);
            })?;
            let traj = integrate(&sys, &[initial.u, initial.v], t_grid, tol)?;
            Ok(traj
                .states
                .iter()
                .map(|s| BdgModeState { u: s[0], v: s[1] })
                .collect())
        }
    }
}

/// Number of quasiparticles n = |β|² the state carries with respect to the
/// stationary basis of `params_final`: β = u_f V − v_f U. Zero for an
/// unevolved stationary mode; independent of the stationary phase.
pub fn excitation_number(
    state: &BdgModeState,
    params_final: &CondensateParams,
    k: f64,
) -> Result<f64> {
    let norm = state.symplectic_norm();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Consistency(format!(
            "symplectic norm {norm} deviates from 1 by more than 1e-6"
        )));
    }
    let m = quasiparticle_coeffs(params_final, k)?;
    let beta = Complex64::new(m.u, 0.0) * state.v - Complex64::new(m.v, 0.0) * state.u;
    Ok(beta.norm_sqr())
}
