//! Polynomials in the Pauli quotient algebra: finite sums of Pauli words
//! with complex coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliWord};

/// Coefficients at or below this magnitude are dropped after arithmetic.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance used when deciding whether coefficients are real.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliPolynomial {
    n: usize,
    terms: BTreeMap<PauliWord, Complex64>,
}

impl PauliPolynomial {
    pub fn zero(n: usize) -> Self {
        PauliPolynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, value: f64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(PauliWord::identity(n), Complex64::new(value, 0.0));
        p
    }

    pub fn word(w: PauliWord) -> Self {
        let mut p = Self::zero(w.n());
        p.add_term(w, Complex64::new(1.0, 0.0));
        p
    }

    /// Builds a polynomial from `(coefficient, word)` pairs; repeated words are summed.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex64, PauliWord)>,
    {
        let mut p = Self::zero(n);
        for (coeff, w) in terms {
            if w.n() != n {
                return Err(Error::Dimension { expected: n, found: w.n() });
            }
            p.add_term(w, coeff);
        }
        Ok(p)
    }

    /// Real-coefficient convenience constructor from word strings.
    pub fn from_real(n: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for &(c, s) in terms {
            out.push((Complex64::new(c, 0.0), s.parse::<PauliWord>()?));
        }
        Self::from_terms(n, out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, w: PauliWord, coeff: Complex64) {
        assert_eq!(w.n(), self.n, "word qubit count differs from polynomial");
        let slot = self.terms.entry(w).or_insert(Complex64::new(0.0, 0.0));
        *slot += coeff;
        if slot.norm() <= PRUNE_THRESHOLD {
            self.terms.remove(&w);
        }
    }

    pub fn coeff(&self, w: &PauliWord) -> Complex64 {
        self.terms.get(w).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Coefficient of the identity word.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&PauliWord::identity(self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliWord, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(PauliWord::weight).max().unwrap_or(0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= HERMITIAN_TOL * (1.0 + c.re.abs()))
    }

    pub fn is_even_weight(&self) -> bool {
        self.terms.keys().all(|w| w.weight() % 2 == 0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(PauliWord::is_diagonal)
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, *c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(*w, c * s);
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `p + c·1`.
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.add_term(PauliWord::identity(self.n), Complex64::new(c, 0.0));
        out
    }

    /// Bilinear extension of the word product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut acc: BTreeMap<PauliWord, Complex64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (phase, w) = a.mul_unchecked(b);
                *acc.entry(w).or_insert(Complex64::new(0.0, 0.0)) += ca * cb * phase.to_complex();
            }
        }
        acc.retain(|_, c| c.norm() > PRUNE_THRESHOLD);
        Ok(PauliPolynomial { n: self.n, terms: acc })
    }

    /// The involution: conjugate every coefficient (words are self-adjoint).
    pub fn adjoint(&self) -> Self {
        PauliPolynomial { n: self.n, terms: self.terms.iter().map(|(w, c)| (*w, c.conj())).collect() }
    }

    /// Terms of weight exactly `r`.
    pub fn homogeneous_component(&self, r: usize) -> Self {
        PauliPolynomial {
            n: self.n,
            terms: self.terms.iter().filter(|(w, _)| w.weight() == r).map(|(w, c)| (*w, *c)).collect(),
        }
    }

    /// Components `p_0, …, p_n`.
    pub fn components(&self) -> Vec<Self> {
        (0..=self.n).map(|r| self.homogeneous_component(r)).collect()
    }

    /// Rescales each weight-`r` component by `factor(r)`.
    pub fn map_components<F: Fn(usize) -> Complex64>(&self, factor: F) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(*w, c * factor(w.weight()));
        }
        out
    }

    /// Normalized-trace inner product, conjugate-linear in the first argument.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_n(other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(w, c)| other.terms.get(w).map(|d| c.conj() * d))
            .sum())
    }

    /// Largest coefficientwise difference.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (w, c) in &self.terms {
            m = m.max((c - other.coeff(w)).norm());
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                m = m.max(c.norm());
            }
        }
        m
    }

    /// Embeds into `n + extra` qubits, new sites appended on the right as identities.
    pub fn extend(&self, extra: usize) -> Self {
        PauliPolynomial {
            n: self.n + extra,
            terms: self.terms.iter().map(|(w, c)| (w.extend(extra), *c)).collect(),
        }
    }

    /// Real parts of the coefficients; meaningful for Hermitian input.
    pub fn real_coeffs(&self) -> impl Iterator<Item = (&PauliWord, f64)> {
        self.terms.iter().map(|(w, c)| (w, c.re))
    }

    pub fn single(n: usize, site: usize, letter: Letter, coeff: f64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(PauliWord::single(n, site, letter), Complex64::new(coeff, 0.0));
        p
    }
}

impl Add for &PauliPolynomial {
    type Output = PauliPolynomial;
    fn add(self, rhs: &PauliPolynomial) -> PauliPolynomial {
        self.try_add(rhs).expect("qubit counts differ")
    }
}

impl Sub for &PauliPolynomial {
    type Output = PauliPolynomial;
    fn sub(self, rhs: &PauliPolynomial) -> PauliPolynomial {
        self.try_add(&-rhs).expect("qubit counts differ")
    }
}

impl Neg for &PauliPolynomial {
    type Output = PauliPolynomial;
    fn neg(self) -> PauliPolynomial {
        self.scale_real(-1.0)
    }
}

impl Mul for &PauliPolynomial {
    type Output = PauliPolynomial;
    fn mul(self, rhs: &PauliPolynomial) -> PauliPolynomial {
        self.try_mul(rhs).expect("qubit counts differ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, t: &[(f64, &str)]) -> PauliPolynomial {
        PauliPolynomial::from_real(n, t).unwrap()
    }

    #[test]
    fn identity_is_unit() {
        let a = p(2, &[(0.5, "XZ"), (-1.0, "YI"), (2.0, "II")]);
        let one = PauliPolynomial::constant(2, 1.0);
        assert_eq!(&a * &one, a);
        assert_eq!(&one * &a, a);
    }

    #[test]
    fn square_of_site_x_is_one() {
        let x1 = p(1, &[(1.0, "X")]);
        assert_eq!(&x1 * &x1, PauliPolynomial::constant(1, 1.0));
    }

    #[test]
    fn adjoint_conjugates() {
        let ix = PauliPolynomial::from_terms(1, [(Complex64::new(0.0, 1.0), "X".parse().unwrap())]).unwrap();
        let adj = ix.adjoint();
        assert_eq!(adj.coeff(&"X".parse().unwrap()), Complex64::new(0.0, -1.0));
        assert_eq!(adj.adjoint(), ix);
        let real = p(2, &[(0.3, "XY"), (1.0, "II")]);
        assert_eq!(real.adjoint(), real);
    }

    #[test]
    fn components_of_constant() {
        let one = PauliPolynomial::constant(3, 1.0);
        assert_eq!(one.homogeneous_component(0), one);
        for r in 1..=3 {
            assert!(one.homogeneous_component(r).is_empty());
        }
    }

    #[test]
    fn even_weight_has_no_odd_components() {
        let a = p(3, &[(1.0, "XXI"), (0.5, "IZZ"), (0.25, "III")]);
        assert!(a.is_even_weight());
        assert!(a.homogeneous_component(1).is_empty());
        assert!(a.homogeneous_component(3).is_empty());
    }

    #[test]
    fn inner_product_basics() {
        let one = PauliPolynomial::constant(1, 1.0);
        assert_eq!(one.inner(&one).unwrap(), Complex64::new(1.0, 0.0));
        let x = p(1, &[(1.0, "X")]);
        let z = p(1, &[(1.0, "Z")]);
        assert_eq!(x.inner(&z).unwrap(), Complex64::new(0.0, 0.0));
        assert!(x.inner(&p(2, &[(1.0, "XX")])).is_err());
    }

    #[test]
    fn pruning_drops_cancelled_terms() {
        let a = p(1, &[(1.0, "X"), (-1.0, "X"), (2.0, "Z")]);
        assert_eq!(a.len(), 1);
    }
}
