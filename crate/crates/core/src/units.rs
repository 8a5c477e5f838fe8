//! Unit conventions, condensate background parameters and scale checks.
//!
//! Internally ħ = 1 and every frequency is angular. Energies, frequencies
//! and inverse times are therefore the same thing, and a condensate is fully
//! specified by the atomic mass `m`, the interaction coupling `g` and the
//! density `rho`. Everything user-facing that is quoted in ordinary Hz is
//! multiplied by 2π on ingestion (see [`SiConversion`]).

use crate::error::{Error, Result};

/// Reduced Planck constant, CODATA 2018 (J s).
pub const HBAR_SI: f64 = 1.054571817e-34;
/// Boltzmann constant, exact since the 2019 SI redefinition (J/K).
pub const K_BOLTZMANN_SI: f64 = 1.380649e-23;
/// Electron volt, exact (J).
pub const EV_SI: f64 = 1.602176634e-19;

/// Homogeneous condensate background with derived scales.
///
/// The derived quantities follow from the Bogoliubov description of the
/// interacting gas:
///
/// * chemical potential `μ = g ρ`
/// * sound speed `c_s = √(g ρ / m)`
/// * healing length `ξ` with `1/ξ² = m g ρ`
///
/// `g = 0` is a legal ideal-gas limit; the healing length is then reported
/// as the sentinel `f64::INFINITY` rather than through a division by zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateParams {
    m: f64,
    g: f64,
    rho: f64,
    mu: f64,
    c_s: f64,
    xi: f64,
}

impl CondensateParams {
    /// Derive the background from mass, coupling and density.
    pub fn new(m: f64, g: f64, rho: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::domain(format!("mass must be positive, got {m}")));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::domain(format!("density must be positive, got {rho}")));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::domain(format!(
                "coupling must be non-negative, got {g}"
            )));
        }
        let mu = g * rho;
        let c_s = (g * rho / m).sqrt();
        let xi = if g == 0.0 {
            f64::INFINITY
        } else {
            1.0 / (m * g * rho).sqrt()
        };
        Ok(CondensateParams { m, g, rho, mu, c_s, xi })
    }

    /// Atomic mass.
    pub fn mass(&self) -> f64 {
        self.m
    }

    /// Interaction coupling.
    pub fn coupling(&self) -> f64 {
        self.g
    }

    /// Condensate density.
    pub fn density(&self) -> f64 {
        self.rho
    }

    /// Chemical potential μ = g ρ.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Sound speed c_s = √(g ρ / m).
    pub fn sound_speed(&self) -> f64 {
        self.c_s
    }

    /// Healing length ξ = 1/√(m g ρ); `INFINITY` for the ideal gas.
    pub fn healing_length(&self) -> f64 {
        self.xi
    }

    /// Same background with the coupling replaced, other inputs unchanged.
    pub fn with_coupling(&self, g: f64) -> Result<Self> {
        CondensateParams::new(self.m, g, self.rho)
    }

    /// Dimensionless kξ for a wavenumber; separates the phonon regime
    /// (kξ ≪ 1) from free particles (kξ ≫ 1). Zero for the ideal gas.
    pub fn k_xi(&self, k: f64) -> f64 {
        if self.xi.is_infinite() {
            0.0
        } else {
            k.abs() * self.xi
        }
    }
}

/// The four length scales whose ordering λ ≫ ξ ≫ a_d ≫ a_s underpins the
/// dilute-gas, long-wavelength description.
#[derive(Debug, Clone, Copy)]
pub struct ScaleHierarchy {
    /// Phonon wavelength.
    pub lambda: f64,
    /// Healing length.
    pub xi: f64,
    /// Inter-particle distance.
    pub a_d: f64,
    /// s-wave scattering length.
    pub a_s: f64,
}

/// Outcome of a hierarchy check: the three consecutive ratios and whether
/// each clears the requested minimum.
#[derive(Debug, Clone, Copy)]
pub struct HierarchyReport {
    pub lambda_over_xi: f64,
    pub xi_over_ad: f64,
    pub ad_over_as: f64,
    pub lambda_over_xi_ok: bool,
    pub xi_over_ad_ok: bool,
    pub ad_over_as_ok: bool,
    pub ratio_min: f64,
}

impl HierarchyReport {
    /// Overall pass: every ratio at or above `ratio_min`.
    pub fn pass(&self) -> bool {
        self.lambda_over_xi_ok && self.xi_over_ad_ok && self.ad_over_as_ok
    }
}

/// Check the scale hierarchy λ ≫ ξ ≫ a_d ≫ a_s, interpreting "≫" as a
/// ratio of at least `ratio_min` (≥ 1).
pub fn check_hierarchy(h: &ScaleHierarchy, ratio_min: f64) -> Result<HierarchyReport> {
    for (name, value) in [
        ("lambda", h.lambda),
        ("xi", h.xi),
        ("a_d", h.a_d),
        ("a_s", h.a_s),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::domain(format!(
                "length {name} must be positive and finite, got {value}"
            )));
        }
    }
    if !(ratio_min >= 1.0) {
        return Err(Error::domain(format!(
            "ratio_min must be at least 1, got {ratio_min}"
        )));
    }
    let r1 = h.lambda / h.xi;
    let r2 = h.xi / h.a_d;
    let r3 = h.a_d / h.a_s;
    Ok(HierarchyReport {
        lambda_over_xi: r1,
        xi_over_ad: r2,
        ad_over_as: r3,
        lambda_over_xi_ok: r1 >= ratio_min,
        xi_over_ad_ok: r2 >= ratio_min,
        ad_over_as_ok: r3 >= ratio_min,
        ratio_min,
    })
}

/// Bridge between the internal ħ = 1 unit system and SI.
///
/// `length_unit` is meters per internal length unit and `time_unit` seconds
/// per internal time unit; the corresponding frequency conversion is
/// 1/`time_unit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiConversion {
    length_unit: f64,
    time_unit: f64,
}

impl SiConversion {
    pub fn new(length_unit: f64, time_unit: f64) -> Result<Self> {
        if !(length_unit > 0.0) || !length_unit.is_finite() {
            return Err(Error::domain(format!(
                "length_unit must be positive, got {length_unit}"
            )));
        }
        if !(time_unit > 0.0) || !time_unit.is_finite() {
            return Err(Error::domain(format!(
                "time_unit must be positive, got {time_unit}"
            )));
        }
        Ok(SiConversion { length_unit, time_unit })
    }

    /// Identity mapping: internal units read directly as meters and seconds.
    pub fn identity() -> Self {
        SiConversion { length_unit: 1.0, time_unit: 1.0 }
    }

    pub fn length_unit(&self) -> f64 {
        self.length_unit
    }

    pub fn time_unit(&self) -> f64 {
        self.time_unit
    }

    pub fn length_to_si(&self, x: f64) -> f64 {
        x * self.length_unit
    }

    pub fn length_from_si(&self, x_si: f64) -> f64 {
        x_si / self.length_unit
    }

    pub fn time_to_si(&self, t: f64) -> f64 {
        t * self.time_unit
    }

    pub fn time_from_si(&self, t_si: f64) -> f64 {
        t_si / self.time_unit
    }

    pub fn velocity_to_si(&self, v: f64) -> f64 {
        v * self.length_unit / self.time_unit
    }

    /// Internal angular frequency to SI angular frequency (rad/s).
    pub fn angular_frequency_to_si(&self, w: f64) -> f64 {
        w / self.time_unit
    }

    /// Internal angular frequency to ordinary SI frequency (Hz).
    pub fn angular_to_hz(&self, w: f64) -> f64 {
        w / self.time_unit / std::f64::consts::TAU
    }

    /// Ordinary SI frequency (Hz) to internal angular frequency.
    pub fn hz_to_angular(&self, f_hz: f64) -> f64 {
        f_hz * std::f64::consts::TAU * self.time_unit
    }

    /// Internal inverse length (wavenumber) to SI (1/m).
    pub fn wavenumber_to_si(&self, k: f64) -> f64 {
        k / self.length_unit
    }

    pub fn wavenumber_from_si(&self, k_si: f64) -> f64 {
        k_si * self.length_unit
    }
}
