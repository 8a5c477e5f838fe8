//! Numerical model of a phonon-counting scheme for dilute Bose-Einstein
//! condensates.
//!
//! Long-wavelength excitations of a condensate are Bogoliubov quasiparticles.
//! A pair of far-detuned Raman beams, offset from two-photon resonance by a
//! small detuning δ, can transfer exactly one atom into a second internal
//! state for every phonon of energy ω_k = δ it annihilates; counting the
//! transferred atoms then counts the phonons. This crate implements the
//! pieces of that scheme end to end:
//!
//! * [`units`] — background condensate parameters, scale hierarchy, SI bridge
//! * [`lambda`] — the driven three-level Λ atom and its adiabatic reduction
//! * [`bogoliubov`] — dispersion, (u, v) coefficients, mode evolution under
//!   a time-dependent coupling
//! * [`raman`] — phonon↔atom coupling strength, resonance condition, π-pulse
//!   timing, two-mode transfer dynamics
//! * [`fock`] — truncated two-mode Fock-space evolution under the
//!   beam-splitter Hamiltonian (n phonons → n atoms)
//! * [`pulse`] — pulse envelopes, spectra, energy resolution and spectral
//!   leakage at the condensate ground-state transition
//! * [`gravity`] — acoustic-metric estimators: horizons, Hawking temperature,
//!   particle-creation summaries
//! * [`integrate`] — the shared adaptive integrator behind every evolution

pub mod bogoliubov;
pub mod error;
pub mod fock;
pub mod gravity;
pub mod integrate;
pub mod lambda;
pub mod pulse;
pub mod raman;
pub mod units;

pub use error::{Error, Result};
pub use units::{CondensateParams, ScaleHierarchy, SiConversion};

pub use bogoliubov::{BdgModeState, BogoliubovMode, CouplingRamp};
pub use fock::{CountingResult, FockHamiltonian, FockState2};
pub use lambda::{EffectiveTwoLevel, LambdaLevels, RamanDrive, ThreeLevelState};
pub use pulse::{EnvelopeShape, PulseEnvelope, SpectrumReport};
pub use raman::{TransferSetup, TwoModeAmplitudes};
