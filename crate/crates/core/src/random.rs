//! Seeded test-instance generators.

use alloc::format;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::spectral_norm;
use crate::error::{Error, Result};
use crate::pauli::words_up_to_weight;
use crate::polynomial::PauliPolynomial;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    // [-1, 1)
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    2.0 * u - 1.0
}

fn sample(n: usize, k: usize, seed: u64, keep: impl Fn(&crate::pauli::PauliWord) -> bool) -> PauliPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = PauliPolynomial::zero(n);
    for w in words_up_to_weight(n, k) {
        let c = uniform(&mut rng);
        if keep(&w) {
            p.add_term(w, Complex64::new(c, 0.0));
        }
    }
    p
}

/// Hermitian polynomial with every word of weight ≤ k drawn uniformly from [-1, 1).
pub fn random_hermitian(n: usize, k: usize, seed: u64) -> PauliPolynomial {
    sample(n, k, seed, |_| true)
}

/// Hermitian even-weight polynomial of degree ≤ k.
pub fn random_even_weight(n: usize, k: usize, seed: u64) -> Result<PauliPolynomial> {
    if k % 2 == 1 {
        return Err(Error::Contract(format!(
            "k = {k} is odd; embed odd-weight Hamiltonians with the even-weight reduction first"
        )));
    }
    if k > n {
        return Err(Error::Domain(format!("degree k = {k} exceeds n = {n}")));
    }
    Ok(sample(n, k, seed, |w| w.weight() % 2 == 0))
}

/// Hermitian polynomial in the `Z` letters only (a diagonal Hamiltonian).
pub fn random_diagonal(n: usize, k: usize, seed: u64) -> PauliPolynomial {
    sample(n, k, seed, |w| w.is_diagonal())
}

/// Divides by the spectral norm so that the result has norm one.
pub fn normalize_sup(p: &PauliPolynomial) -> Result<PauliPolynomial> {
    let norm = spectral_norm(p)?;
    if norm == 0.0 {
        return Err(Error::Contract("cannot normalize the zero polynomial".into()));
    }
    Ok(p.scale_real(1.0 / norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_scaled_word() {
        let p = PauliPolynomial::from_real(2, &[(2.0, "ZZ")]).unwrap();
        let q = normalize_sup(&p).unwrap();
        assert_eq!(q, PauliPolynomial::from_real(2, &[(1.0, "ZZ")]).unwrap());
    }

    #[test]
    fn generators_are_deterministic_and_well_formed() {
        let a = random_even_weight(4, 4, 7).unwrap();
        assert_eq!(a, random_even_weight(4, 4, 7).unwrap());
        assert_ne!(a, random_even_weight(4, 4, 8).unwrap());
        assert!(a.is_hermitian() && a.is_even_weight() && a.degree() <= 4);
        let q = normalize_sup(&a).unwrap();
        assert!((spectral_norm(&q).unwrap() - 1.0).abs() < 1e-10);
        assert!(random_diagonal(3, 3, 1).is_diagonal());
    }

    #[test]
    fn odd_k_points_to_reduction() {
        let e = random_even_weight(3, 3, 0).unwrap_err();
        assert!(format!("{e}").contains("reduction"));
    }
}
