//! Truncated two-mode Fock dynamics under the beam-splitter Hamiltonian
//!
//! ```text
//!   H = g_eff (ζ† a + a† ζ) + δ_off n_ζ ,
//! ```
//!
//! which conserves the total excitation number n_a + n_ζ. States live in the
//! triangular basis |n_a, n_ζ⟩ with n_a + n_ζ ≤ N_max, ordered by total
//! number and then by n_ζ, and every sector evolves independently through
//! exact diagonalization of its (N+1)-dimensional tridiagonal block. On
//! resonance the evolution is a beam splitter; after area g_eff·t = π/2 it
//! maps |n, 0⟩ → |0, n⟩, so n phonons become n countable atoms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

fn sector_offset(n: usize) -> usize {
    n * (n + 1) / 2
}

fn space_dim(n_max: usize) -> usize {
    (n_max + 1) * (n_max + 2) / 2
}

/// State of the two-mode register truncated at total number `n_max`.
#[derive(Debug, Clone)]
pub struct FockState2 {
    n_max: usize,
    amps: DVector<Complex64>,
}

impl FockState2 {
    /// Basis state |n_a, n_ζ⟩. Support beyond the truncation is rejected,
    /// never silently projected.
    pub fn basis(n_a: usize, n_zeta: usize, n_max: usize) -> Result<Self> {
        if n_a + n_zeta > n_max {
            return Err(Error::domain(format!(
                "|{n_a}, {n_zeta}> exceeds the truncation N_max = {n_max}"
            )));
        }
        let mut amps = DVector::zeros(space_dim(n_max));
        amps[sector_offset(n_a + n_zeta) + n_zeta] = Complex64::new(1.0, 0.0);
        Ok(FockState2 { n_max, amps })
    }

    /// Build a state from amplitudes over the triangular basis (ordered by
    /// total number, then n_ζ). Must be normalized to within 1e-8.
    pub fn from_amplitudes(amps: Vec<Complex64>, n_max: usize) -> Result<Self> {
        if amps.len() != space_dim(n_max) {
            return Err(Error::domain(format!(
                "expected {} amplitudes for N_max = {n_max}, got {}",
                space_dim(n_max),
                amps.len()
            )));
        }
        let state = FockState2 { n_max, amps: DVector::from_vec(amps) };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::domain(format!("state norm^2 = {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitude(&self, n_a: usize, n_zeta: usize) -> Complex64 {
        if n_a + n_zeta > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.amps[sector_offset(n_a + n_zeta) + n_zeta]
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability carried by the total-number sector N.
    pub fn sector_probability(&self, n: usize) -> f64 {
        if n > self.n_max {
            return 0.0;
        }
        let off = sector_offset(n);
        (0..=n).map(|j| self.amps[off + j].norm_sqr()).sum()
    }
}

/// Beam-splitter Hamiltonian on the truncated space.
#[derive(Debug, Clone)]
pub struct FockHamiltonian {
    pub n_max: usize,
    pub g_eff: f64,
    pub delta_offset: f64,
    matrix: DMatrix<f64>,
}

impl FockHamiltonian {
    /// Full matrix in the triangular basis (real symmetric).
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Matrix element ⟨n_a', n_ζ'| H |n_a, n_ζ⟩.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> f64 {
        let i = sector_offset(bra.0 + bra.1) + bra.1;
        let j = sector_offset(ket.0 + ket.1) + ket.1;
        self.matrix[(i, j)]
    }
}

/// Build H = g_eff (ζ†a + a†ζ) + δ_off n_ζ for the truncation `n_max` ≥ 1.
/// The hopping element between |n_a, n_ζ⟩ and |n_a−1, n_ζ+1⟩ is
/// g_eff √(n_a (n_ζ+1)); the total excitation number is conserved, so the
/// matrix is block tridiagonal over the sectors.
pub fn build_hamiltonian(g_eff: f64, delta_offset: f64, n_max: usize) -> Result<FockHamiltonian> {
    if n_max < 1 {
        return Err(Error::domain(format!("N_max must be at least 1, got {n_max}")));
    }
    let dim = space_dim(n_max);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for n in 0..=n_max {
        let off = sector_offset(n);
        for nz in 0..=n {
            let na = n - nz;
            h[(off + nz, off + nz)] = delta_offset * nz as f64;
            if na >= 1 {
                let amp = g_eff * ((na as f64) * (nz as f64 + 1.0)).sqrt();
                h[(off + nz, off + nz + 1)] = amp;
                h[(off + nz + 1, off + nz)] = amp;
            }
        }
    }
    Ok(FockHamiltonian { n_max, g_eff, delta_offset, matrix: h })
}

/// Propagate `state` for time `t` under `h` by exact per-sector
/// diagonalization; unitary, so the norm and all sector populations are
/// preserved to numerical precision.
pub fn evolve_fock(state: &FockState2, h: &FockHamiltonian, t: f64) -> Result<FockState2> {
    if state.n_max != h.n_max {
        return Err(Error::domain(format!(
            "state truncation {} does not match Hamiltonian truncation {}",
            state.n_max, h.n_max
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("evolution time must be >= 0, got {t}")));
    }
    let mut out = state.amps.clone();
    for n in 0..=state.n_max {
        let off = sector_offset(n);
        let dim = n + 1;
        let block = h.matrix.view((off, off), (dim, dim)).into_owned();
        let eig = block.symmetric_eigen();
        // amp_out = U exp(-i Lambda t) U^T amp_in
        let amp_in = DVector::from_iterator(dim, (0..dim).map(|j| state.amps[off + j]));
        let mut proj = DVector::<Complex64>::zeros(dim);
        for m in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..dim {
                acc += Complex64::new(eig.eigenvectors[(j, m)], 0.0) * amp_in[j];
            }
            proj[m] = acc * Complex64::new(0.0, -eig.eigenvalues[m] * t).exp();
        }
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..dim {
                acc += Complex64::new(eig.eigenvectors[(j, m)], 0.0) * proj[m];
            }
            out[off + j] = acc;
        }
    }
    Ok(FockState2 { n_max: state.n_max, amps: out })
}

/// Marginal distribution of the transferred-atom number n_ζ.
#[derive(Debug, Clone)]
pub struct CountingResult {
    /// P(n_ζ = i) for i = 0..=n_max.
    pub probabilities: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

/// Count the atoms in the second mode: the Born-rule marginal over n_ζ.
pub fn count(state: &FockState2) -> CountingResult {
    let mut probabilities = vec![0.0; state.n_max + 1];
    for n in 0..=state.n_max {
        let off = sector_offset(n);
        for nz in 0..=n {
            probabilities[nz] += state.amps[off + nz].norm_sqr();
        }
    }
    let mean: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| i as f64 * p)
        .sum();
    let second: f64 = probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| (i as f64) * (i as f64) * p)
        .sum();
    CountingResult {
        probabilities,
        mean,
        variance: second - mean * mean,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Independent oracle: the beam-splitter rotation a -> cos(gt) a - i sin(gt) z
    // gives |n,0> -> sum_p sqrt(C(n,p)) cos^{n-p}(-i sin)^p |n-p, p>.
    fn binomial(n: usize, p: usize) -> f64 {
        let mut acc = 1.0;
        for i in 0..p {
            acc *= (n - i) as f64 / (i + 1) as f64;
        }
        acc
    }

    fn splitter_amplitude(n: usize, p: usize, theta: f64) -> Complex64 {
        let mag = binomial(n, p).sqrt() * theta.cos().powi((n - p) as i32)
            * theta.sin().powi(p as i32);
        Complex64::new(0.0, -1.0).powu(p as u32) * mag
    }

    #[test]
    fn single_excitation_sector_is_two_level() {
        let h = build_hamiltonian(0.7, 0.2, 3).unwrap();
        assert_eq!(h.element((1, 0), (1, 0)), 0.0);
        assert_eq!(h.element((0, 1), (0, 1)), 0.2);
        assert!((h.element((0, 1), (1, 0)) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn ladder_matrix_element_root_two() {
        let h = build_hamiltonian(1.0, 0.0, 4).unwrap();
        // <1,1| H |2,0> = g sqrt(n_a (n_z + 1)) = sqrt(2).
        assert!((h.element((1, 1), (2, 0)) - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((h.element((0, 2), (1, 1)) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_couplings_give_zero_hamiltonian() {
        let h = build_hamiltonian(0.0, 0.0, 2).unwrap();
        assert!(h.matrix().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn hamiltonian_is_symmetric_and_sector_diagonal() {
        let h = build_hamiltonian(0.9, -0.3, 5).unwrap();
        let m = h.matrix();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                assert_eq!(m[(i, j)], m[(j, i)]);
            }
        }
        // coupling between different total-number sectors must vanish
        let one = sector_offset(1);
        let two = sector_offset(2);
        for i in one..two {
            for j in two..sector_offset(3) {
                assert_eq!(m[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn rejects_invalid_truncation() {
        assert!(build_hamiltonian(1.0, 0.0, 0).is_err());
        assert!(FockState2::basis(2, 2, 3).is_err());
    }

    #[test]
    fn swap_pulse_counts_phonons() {
        let g = 0.8;
        let n_max = 8;
        let h = build_hamiltonian(g, 0.0, n_max).unwrap();
        let t_swap = PI / (2.0 * g);
        for n in [1usize, 2, 3, 5] {
            let psi0 = FockState2::basis(n, 0, n_max).unwrap();
            let psi = evolve_fock(&psi0, &h, t_swap).unwrap();
            let p = psi.amplitude(0, n).norm_sqr();
            assert!(p >= 1.0 - 1e-9, "n={n}: p={p}");
            let c = count(&psi);
            assert!((c.mean - n as f64).abs() < 1e-8);
            assert!(c.variance < 1e-9);
        }
    }

    #[test]
    fn reverse_transfer_is_symmetric() {
        let g = 0.8;
        let h = build_hamiltonian(g, 0.0, 4).unwrap();
        let psi0 = FockState2::basis(0, 2, 4).unwrap();
        let psi = evolve_fock(&psi0, &h, PI / (2.0 * g)).unwrap();
        assert!(psi.amplitude(2, 0).norm_sqr() >= 1.0 - 1e-9);
    }

    #[test]
    fn trajectory_matches_combinatorial_splitter_oracle() {
        let g = 0.6;
        let n = 4;
        let h = build_hamiltonian(g, 0.0, n).unwrap();
        let psi0 = FockState2::basis(n, 0, n).unwrap();
        for theta in [0.3f64, 0.9, 1.4] {
            let psi = evolve_fock(&psi0, &h, theta / g).unwrap();
            for p in 0..=n {
                let expected = splitter_amplitude(n, p, theta);
                let got = psi.amplitude(n - p, p);
                assert!(
                    (got - expected).norm() < 1e-10,
                    "theta={theta} p={p}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn sector_populations_conserved() {
        let h = build_hamiltonian(1.1, 0.4, 5).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); space_dim(5)];
        amps[sector_offset(1)] = Complex64::new(inv_sqrt2, 0.0); // |1,0>
        amps[sector_offset(3) + 1] = Complex64::new(0.0, inv_sqrt2); // |2,1>
        let psi0 = FockState2::from_amplitudes(amps, 5).unwrap();
        let p1 = psi0.sector_probability(1);
        let p3 = psi0.sector_probability(3);
        for t in [0.3, 1.7, 9.2] {
            let psi = evolve_fock(&psi0, &h, t).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
            assert!((psi.sector_probability(1) - p1).abs() < 1e-10);
            assert!((psi.sector_probability(3) - p3).abs() < 1e-10);
        }
    }

    #[test]
    fn counting_mean_is_linear_over_sectors() {
        // Mixture over sectors: mean n_zeta after the swap equals the
        // initial mean n_a.
        let g = 0.5;
        let n_max = 6;
        let h = build_hamiltonian(g, 0.0, n_max).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); space_dim(n_max)];
        let w = [(1usize, 0.5f64), (3, 0.3), (4, 0.2)];
        for &(n, p) in &w {
            amps[sector_offset(n)] = Complex64::new(p.sqrt(), 0.0); // |n, 0>
        }
        let psi0 = FockState2::from_amplitudes(amps, n_max).unwrap();
        let mean_in: f64 = w.iter().map(|&(n, p)| n as f64 * p).sum();
        let psi = evolve_fock(&psi0, &h, PI / (2.0 * g)).unwrap();
        let c = count(&psi);
        assert!((c.mean - mean_in).abs() < 1e-9, "{} vs {mean_in}", c.mean);
    }

    #[test]
    fn counting_trivial_cases() {
        let vac = FockState2::basis(0, 0, 2).unwrap();
        let c = count(&vac);
        assert_eq!(c.probabilities[0], 1.0);
        assert_eq!(c.mean, 0.0);

        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); space_dim(2)];
        amps[sector_offset(1)] = Complex64::new(inv_sqrt2, 0.0); // |1,0>
        amps[sector_offset(1) + 1] = Complex64::new(inv_sqrt2, 0.0); // |0,1>
        let sup = FockState2::from_amplitudes(amps, 2).unwrap();
        let c = count(&sup);
        assert!((c.probabilities[0] - 0.5).abs() < 1e-12);
        assert!((c.probabilities[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let g = 0.8;
        let h = build_hamiltonian(g, 0.3, 6).unwrap();
        let psi0 = FockState2::basis(4, 1, 6).unwrap();
        let psi = evolve_fock(&psi0, &h, 2.7).unwrap();
        let c = count(&psi);
        let total: f64 = c.probabilities.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
