//! Embedding of arbitrary Hamiltonians into even-weight Hamiltonians on one
//! extra qubit with the same spectrum.

use alloc::vec::Vec;

use crate::dense::{evaluate, DenseOperator};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::{Letter, PauliWord};
use crate::polynomial::PauliPolynomial;

/// `H̃ = Z_0 ⊗ H_odd + I_0 ⊗ H_even`, with the ancilla prepended as site 0.
pub fn even_weight_embedding(p: &PauliPolynomial) -> Result<PauliPolynomial> {
    if !p.is_hermitian() {
        return Err(Error::Contract("embedding needs a Hermitian polynomial".into()));
    }
    let mut out = PauliPolynomial::zero(p.n() + 1);
    for (w, &v) in p.terms() {
        let letter = if w.weight() % 2 == 1 { Letter::Z } else { Letter::I };
        out.add_term(w.prepend(letter), v);
    }
    Ok(out)
}

/// `(H_even, H_odd)`.
pub fn parity_split(p: &PauliPolynomial) -> (PauliPolynomial, PauliPolynomial) {
    let mut even = PauliPolynomial::zero(p.n());
    let mut odd = PauliPolynomial::zero(p.n());
    for (w, &v) in p.terms() {
        if w.weight() % 2 == 0 {
            even.add_term(*w, v);
        } else {
            odd.add_term(*w, v);
        }
    }
    (even, odd)
}

/// Locality after embedding: `k` for even `k`, `k + 1` for odd `k`.
pub fn embedded_locality(k: usize) -> usize {
    k + k % 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Every eigenvalue of one operator lies within tolerance of some eigenvalue of the other.
    pub set_equal: bool,
    /// The sorted spectrum of `H̃` is that of `H` with each value repeated twice.
    pub doubled_multiset: bool,
    /// `spec(H_even + H_odd)` and `spec(H_even - H_odd)` each match `spec(H)`.
    pub blocks_match: bool,
    pub lambda_min: (f64, f64),
    pub lambda_max: (f64, f64),
    pub max_deviation: f64,
    pub tol: f64,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.set_equal && self.doubled_multiset && self.blocks_match
    }
}

fn max_sorted_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn nearest(v: f64, set: &[f64]) -> f64 {
    set.iter().map(|s| (s - v).abs()).fold(f64::INFINITY, f64::min)
}

/// Compares the spectra of `p` and its embedding `p_tilde` at tolerance `1e-9`.
pub fn verify_spectrum_equal(p: &PauliPolynomial, p_tilde: &PauliPolynomial) -> Result<SpectrumReport> {
    if p_tilde.n() != p.n() + 1 {
        return Err(Error::Dimension { expected: p.n() + 1, found: p_tilde.n() });
    }
    let tol = 1e-9;
    let spec = evaluate(p)?.eigenvalues();
    let spec_t = evaluate(p_tilde)?.eigenvalues();
    let (even, odd) = parity_split(p);
    let plus = evaluate(&(&even + &odd))?.eigenvalues();
    let minus = evaluate(&(&even - &odd))?.eigenvalues();

    let set_dev = spec_t.iter().map(|&v| nearest(v, &spec)).chain(spec.iter().map(|&v| nearest(v, &spec_t))).fold(0.0, f64::max);
    let doubled: Vec<f64> = spec.iter().flat_map(|&v| [v, v]).collect();
    let multi_dev = max_sorted_diff(&spec_t, &doubled);
    let block_dev = max_sorted_diff(&plus, &spec).max(max_sorted_diff(&minus, &spec));
    let lambda_min = (spec[0], spec_t[0]);
    let lambda_max = (spec[spec.len() - 1], spec_t[spec_t.len() - 1]);
    Ok(SpectrumReport {
        set_equal: set_dev <= tol,
        doubled_multiset: multi_dev <= tol,
        blocks_match: block_dev <= tol,
        lambda_min,
        lambda_max,
        max_deviation: set_dev.max(multi_dev).max(block_dev),
        tol,
    })
}

/// `Θ M Θ⁻¹ = Y^{⊗n} conj(M) Y^{⊗n}` for the antiunitary `Θ = (σ_Y κ)^{⊗n}`.
pub fn apply_theta(m: &DenseOperator) -> Result<DenseOperator> {
    let n = m.n();
    let y = crate::dense::word_matrix(&PauliWord::from_letters(&alloc::vec![Letter::Y; n])?);
    let conj: CMatrix = m.matrix().map(|z| z.conj());
    DenseOperator::new(n, &y * conj * &y)
}

/// Largest entry of `Θ w Θ⁻¹ - (-1)^{|w|} w` over all words at `n` qubits.
pub fn theta_sign_defect(n: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in crate::dense::all_words(n) {
        let wm = crate::dense::word_matrix(&w);
        let t = apply_theta(&DenseOperator::new(n, wm.clone())?)?;
        let sign = if w.weight() % 2 == 0 { 1.0 } else { -1.0 };
        worst = worst.max(linalg::max_abs_diff(t.matrix(), &(wm * linalg::c(sign, 0.0))));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_word_gets_ancilla() {
        let p = PauliPolynomial::from_real(1, &[(1.0, "X")]).unwrap();
        let e = even_weight_embedding(&p).unwrap();
        assert_eq!(e, PauliPolynomial::from_real(2, &[(1.0, "ZX")]).unwrap());
    }

    #[test]
    fn even_input_untouched() {
        let p = PauliPolynomial::from_real(2, &[(0.5, "ZZ"), (0.25, "II")]).unwrap();
        let e = even_weight_embedding(&p).unwrap();
        assert_eq!(e, PauliPolynomial::from_real(3, &[(0.5, "IZZ"), (0.25, "III")]).unwrap());
    }

    #[test]
    fn z_spectrum() {
        let p = PauliPolynomial::from_real(1, &[(1.0, "Z")]).unwrap();
        let r = verify_spectrum_equal(&p, &even_weight_embedding(&p).unwrap()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn theta_rule() {
        for n in 1..=3 {
            assert!(theta_sign_defect(n).unwrap() < 1e-12);
        }
    }
}
