//! The driven three-level Λ atom and its adiabatic two-level reduction.
//!
//! Two beams with Rabi amplitudes Ω₁, Ω₂ couple the stable levels 1 and 2
//! to the excited level 3. Both are detuned from the upper level by the
//! same large Δ, and the two-photon transition 1 ↔ 2 carries an additional
//! small detuning δ. In the slowly rotating frame the exact equations are
//!
//! ```text
//!   i ψ̇₁ = −Ω₁ ψ₃
//!   i ψ̇₂ = −Ω₂ e^{+iδt} ψ₃
//!   i ψ̇₃ = −Δ ψ₃ − Ω₁* ψ₁ − Ω₂* e^{−iδt} ψ₂ ,
//! ```
//!
//! so the optical frequencies never appear and the only explicit time
//! dependence oscillates at δ. For |Ω| ≪ Δ the upper level follows
//! ψ₃ ≈ −(Ω₁*ψ₁ + Ω₂*e^{−iδt}ψ₂)/Δ and the remaining two levels see light
//! shifts |Ωᵢ|²/Δ and a two-photon coupling Ω₁Ω₂*/Δ.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{integrate, LinearSystem};

/// Bare level energies ω₁ < ω₂ < ω₃ (angular frequency). The slow frame
/// absorbs them; they are kept to validate that the drive addresses a
/// proper Λ configuration.
#[derive(Debug, Clone, Copy)]
pub struct LambdaLevels {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

impl LambdaLevels {
    pub fn new(omega1: f64, omega2: f64, omega3: f64) -> Result<Self> {
        if !(omega1 < omega2 && omega2 < omega3) {
            return Err(Error::domain(format!(
                "level energies must be ordered w1 < w2 < w3, got {omega1}, {omega2}, {omega3}"
            )));
        }
        Ok(LambdaLevels { omega1, omega2, omega3 })
    }
}

/// The two Raman beams: complex Rabi amplitudes, the common large detuning
/// Δ > 0, the small two-photon detuning δ and the wavenumber mismatch
/// κ = k₁ − k₂ from the small angle between the beams.
#[derive(Debug, Clone, Copy)]
pub struct RamanDrive {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub large_detuning: f64,
    pub small_detuning: f64,
    pub wavenumber_mismatch: f64,
}

impl RamanDrive {
    pub fn new(
        omega1: Complex64,
        omega2: Complex64,
        large_detuning: f64,
        small_detuning: f64,
        wavenumber_mismatch: f64,
    ) -> Result<Self> {
        if !(large_detuning > 0.0) || !large_detuning.is_finite() {
            return Err(Error::domain(format!(
                "large detuning must be positive, got {large_detuning}"
            )));
        }
        Ok(RamanDrive {
            omega1,
            omega2,
            large_detuning,
            small_detuning,
            wavenumber_mismatch,
        })
    }

    /// Adiabaticity indicator max(|Ω₁|, |Ω₂|)/Δ; the elimination is a
    /// controlled approximation for values well below one. Callers treat
    /// values above 0.1 as a soft warning, not an error.
    pub fn adiabaticity(&self) -> f64 {
        self.omega1.norm().max(self.omega2.norm()) / self.large_detuning
    }

    /// Symmetric two-photon rate |Ω₁Ω₂|/Δ, the magnitude of the effective
    /// coupling; equals Ω²/Δ for equal beam amplitudes.
    pub fn two_photon_rate(&self) -> f64 {
        self.omega1.norm() * self.omega2.norm() / self.large_detuning
    }
}

/// Complex amplitudes of the three levels in the slow frame.
#[derive(Debug, Clone, Copy)]
pub struct ThreeLevelState {
    pub psi1: Complex64,
    pub psi2: Complex64,
    pub psi3: Complex64,
}

impl ThreeLevelState {
    pub fn new(psi1: Complex64, psi2: Complex64, psi3: Complex64) -> Self {
        ThreeLevelState { psi1, psi2, psi3 }
    }

    /// Population-basis state |1⟩.
    pub fn ground() -> Self {
        ThreeLevelState::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr() + self.psi3.norm_sqr()
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.psi1.norm_sqr(), self.psi2.norm_sqr(), self.psi3.norm_sqr()]
    }
}

/// Result of eliminating the far-detuned upper level: light shifts
/// |Ωᵢ|²/Δ, complex two-photon coupling Ω₁Ω₂*/Δ, and the effective
/// two-photon detuning δ′ = δ + (|Ω₁|² − |Ω₂|²)/Δ that absorbs the
/// differential light shift. For equal beam amplitudes δ′ = δ.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveTwoLevel {
    pub shift1: f64,
    pub shift2: f64,
    pub coupling: Complex64,
    pub delta_eff: f64,
}

/// Eliminate the upper level for a drive with Δ > 0.
pub fn adiabatic_eliminate(drive: &RamanDrive) -> Result<EffectiveTwoLevel> {
    let delta_big = drive.large_detuning;
    if !(delta_big > 0.0) {
        return Err(Error::domain("adiabatic elimination needs Delta > 0"));
    }
    let shift1 = drive.omega1.norm_sqr() / delta_big;
    let shift2 = drive.omega2.norm_sqr() / delta_big;
    Ok(EffectiveTwoLevel {
        shift1,
        shift2,
        coupling: drive.omega1 * drive.omega2.conj() / delta_big,
        delta_eff: drive.small_detuning + (shift1 - shift2),
    })
}

/// Integrate the exact three-level dynamics in the slow frame over the
/// strictly increasing `t_grid`; the returned trajectory starts at `psi0`.
pub fn evolve_three_level(
    levels: &LambdaLevels,
    drive: &RamanDrive,
    psi0: &ThreeLevelState,
    t_grid: &[f64],
    tol: f64,
) -> Result<Vec<ThreeLevelState>> {
    LambdaLevels::new(levels.omega1, levels.omega2, levels.omega3)?;
    let o1 = drive.omega1;
    let o2 = drive.omega2;
    let dd = drive.large_detuning;
    let delta = drive.small_detuning;
    let sys = LinearSystem::new(3, true, move |t, a: &mut DMatrix<Complex64>| {
        // A = -i H(t); the only time dependence is the e^{±iδt} cross phase.
        let ph = if delta == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, delta * t).exp()
        };
        let mi = Complex64::new(0.0, -1.0);
        a.fill(Complex64::new(0.0, 0.0));
        a[(0, 2)] = mi * -o1;
        a[(1, 2)] = mi * -(o2 * ph);
        a[(2, 0)] = mi * -o1.conj();
        a[(2, 1)] = mi * -(o2.conj() * ph.conj());
        a[(2, 2)] = mi * Complex64::new(-dd, 0.0);
    })?;
    let traj = integrate(&sys, &[psi0.psi1, psi0.psi2, psi0.psi3], t_grid, tol)?;
    Ok(traj
        .states
        .iter()
        .map(|s| ThreeLevelState::new(s[0], s[1], s[2]))
        .collect())
}

/// Integrate the reduced two-level dynamics. The cross coupling rotates at
/// the rate that makes `delta_eff` exactly the detuning of the equivalent
/// static two-level problem, so δ′ = 0 is exact two-photon resonance; with
/// equal light shifts this is identical to the eliminated equations.
pub fn evolve_effective_two_level(
    eff: &EffectiveTwoLevel,
    psi0: &[Complex64; 2],
    t_grid: &[f64],
    tol: f64,
) -> Result<Vec<[Complex64; 2]>> {
    let s1 = eff.shift1;
    let s2 = eff.shift2;
    let c = eff.coupling;
    let theta = eff.delta_eff + s1 - s2;
    let sys = LinearSystem::new(2, true, move |t, a: &mut DMatrix<Complex64>| {
        let ph = if theta == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, -theta * t).exp()
        };
        let mi = Complex64::new(0.0, -1.0);
        a[(0, 0)] = mi * Complex64::new(s1, 0.0);
        a[(0, 1)] = mi * (c * ph);
        a[(1, 0)] = mi * (c.conj() * ph.conj());
        a[(1, 1)] = mi * Complex64::new(s2, 0.0);
    })?;
    let traj = integrate(&sys, psi0, t_grid, tol)?;
    Ok(traj.states.iter().map(|s| [s[0], s[1]]).collect())
}

/// Sup-norm deviation between the exact three-level evolution and the
/// reduced description over `t_grid`.
///
/// The reduced state is compared as a full three-component vector, with its
/// upper-level amplitude reconstructed from the elimination formula
/// ψ₃ = −(Ω₁*ψ₁ + Ω₂*e^{−iδt}ψ₂)/Δ. The initial transient of the exact ψ₃
/// (the reduced description cannot represent it) then dominates the
/// deviation, which scales linearly in Ω/Δ at fixed pulse area.
pub fn compare_adiabatic(
    levels: &LambdaLevels,
    drive: &RamanDrive,
    psi0: &ThreeLevelState,
    t_grid: &[f64],
    tol: f64,
) -> Result<f64> {
    let full = evolve_three_level(levels, drive, psi0, t_grid, tol)?;
    let eff = adiabatic_eliminate(drive)?;
    let reduced = evolve_effective_two_level(&eff, &[psi0.psi1, psi0.psi2], t_grid, tol)?;

    let o1c = drive.omega1.conj();
    let o2c = drive.omega2.conj();
    let dd = drive.large_detuning;
    let delta = drive.small_detuning;

    let mut sup: f64 = 0.0;
    for ((state, red), &t) in full.iter().zip(&reduced).zip(t_grid) {
        let ph = Complex64::new(0.0, -delta * t).exp();
        let psi3_recon = -(o1c * red[0] + o2c * ph * red[1]) / dd;
        let d = (state.psi1 - red[0]).norm_sqr()
            + (state.psi2 - red[1]).norm_sqr()
            + (state.psi3 - psi3_recon).norm_sqr();
        sup = sup.max(d.sqrt());
    }
    Ok(sup)
}
