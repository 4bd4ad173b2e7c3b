//! Seedable generators for random states, used by property and acceptance
//! tests.
//!
//! Random density matrices are `U diag(w) U^dagger` with `U` Haar-distributed
//! (Gram-Schmidt on a complex Gaussian matrix with phase fixing) and `w`
//! uniform on the probability simplex.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::qmat::{mix, CMatrix, DensityMatrix, Mat2, Mat4, PolarizationKet};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random unitary of size `N`.
pub fn random_unitary<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> CMatrix<N> {
    let mut cols: [[Complex64; N]; N] =
        std::array::from_fn(|_| std::array::from_fn(|_| gaussian(rng)));
    for j in 0..N {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: Complex64 = done[k]
                .iter()
                .zip(rest[0].iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (x, q) in rest[0].iter_mut().zip(done[k].iter()) {
                *x -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // dividing by the norm alone leaves the R diagonal positive, which is
        // the phase convention that makes Gram-Schmidt Haar
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    let mut u = CMatrix::<N>::zeros();
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Uniform point on the probability simplex.
pub fn random_simplex<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [f64; N] {
    let e: [f64; N] = std::array::from_fn(|_| Exp1.sample(rng));
    let s: f64 = e.iter().sum();
    e.map(|x| x / s)
}

/// Random photon-pair state from a random spectrum and a Haar rotation.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let w = random_simplex::<4, _>(rng);
    random_with_spectrum(rng, w)
}

/// `U diag(spectrum) U^dagger` for a Haar-random `U`.
pub fn random_with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: [f64; 4]) -> DensityMatrix {
    let u = random_unitary::<4, _>(rng);
    let m = u * Mat4::from_diagonal(spectrum) * u.adjoint();
    DensityMatrix::from_trusted(m)
}

/// Uniformly random pure polarization state.
pub fn random_polarization<R: Rng + ?Sized>(rng: &mut R) -> PolarizationKet {
    loop {
        if let Ok(k) = PolarizationKet::normalized(gaussian(rng), gaussian(rng)) {
            return k;
        }
    }
}

/// Random single-photon density matrix, pure with probability ½.
pub fn random_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    if rng.random_bool(0.5) {
        random_polarization(rng).projector()
    } else {
        let w = random_simplex::<2, _>(rng);
        let u = random_unitary::<2, _>(rng);
        u * Mat2::from_diagonal(w) * u.adjoint()
    }
}

/// `ρ_A ⊗ ρ_B` with independent random factors.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let a = random_qubit_state(rng);
    let b = random_qubit_state(rng);
    DensityMatrix::from_trusted(a.kron(&b))
}

/// Convex mixture of 2 to 6 random product states.
pub fn random_separable_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let n = rng.random_range(2..=6);
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect::<Vec<f64>>();
    let total: f64 = w.iter().sum();
    let mut terms: Vec<(f64, DensityMatrix)> = w
        .iter()
        .map(|x| (x / total, random_product_state(rng)))
        .collect();
    // absorb the rounding of the normalization into the last weight
    let partial: f64 = terms[..n - 1].iter().map(|t| t.0).sum();
    terms[n - 1].0 = 1.0 - partial;
    mix(&terms).expect("normalized weights")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let u = random_unitary::<4, _>(&mut rng);
            assert!(u.unitarity_residual() < 1e-13);
        }
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            for rho in [
                random_density_matrix(&mut rng),
                random_product_state(&mut rng),
                random_separable_state(&mut rng),
            ] {
                DensityMatrix::new(*rho.matrix()).unwrap();
            }
        }
    }
}
