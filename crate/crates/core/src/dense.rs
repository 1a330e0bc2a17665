//! Evaluation of Pauli polynomials on the Pauli matrices.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::PauliWord;
use crate::polynomial::PauliPolynomial;

/// Default qubit cap for dense evaluation (matrix dimension 1024).
pub const DEFAULT_DENSE_CAP: usize = 10;

/// A `2^n × 2^n` complex matrix, site 1 acting on the most significant tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    matrix: CMatrix,
}

impl DenseOperator {
    pub fn new(n: usize, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << n;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Contract(alloc::format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(DenseOperator { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        linalg::hermitian_defect(&self.matrix) <= 1e-12 * (1.0 + self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// Ascending eigenvalues; the matrix is symmetrized first.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// Normalized trace `Tr(M)/2^n`.
    pub fn normalized_trace(&self) -> Complex64 {
        linalg::trace(&self.matrix) / self.dim() as f64
    }

    /// Pauli expansion `Σ_w Tr(w M)/2^n · w`.
    pub fn to_polynomial(&self) -> PauliPolynomial {
        let mut p = PauliPolynomial::zero(self.n);
        for w in all_words(self.n) {
            let c = word_trace(&w, &self.matrix);
            p.add_term(w, c);
        }
        p
    }
}

fn index_mask(n: usize, site_mask: u64) -> usize {
    // site j sits on index bit n-1-j
    let mut out = 0usize;
    for j in 0..n {
        if (site_mask >> j) & 1 == 1 {
            out |= 1 << (n - 1 - j);
        }
    }
    out
}

/// Column `c` of a word matrix holds `phase(c)` in row `c ^ flip`.
fn word_action(w: &PauliWord) -> (usize, usize, Complex64) {
    let n = w.n();
    let flip = index_mask(n, w.x_mask());
    let sign = index_mask(n, w.z_mask());
    let ys = (w.x_mask() & w.z_mask()).count_ones();
    let base = crate::pauli::Phase::new(ys as i64).to_complex();
    (flip, sign, base)
}

/// Dense matrix of a single word.
pub fn word_matrix(w: &PauliWord) -> CMatrix {
    let dim = 1usize << w.n();
    let (flip, sign, base) = word_action(w);
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let s = if (col & sign).count_ones() % 2 == 1 { -base } else { base };
        m[(col ^ flip, col)] = s;
    }
    m
}

/// `Tr(w M)/dim` in O(dim).
pub fn word_trace(w: &PauliWord, m: &CMatrix) -> Complex64 {
    let dim = 1usize << w.n();
    let (flip, sign, base) = word_action(w);
    let mut acc = Complex64::new(0.0, 0.0);
    // Tr(W M) = Σ_c W[c^flip, c] M[c, c^flip]
    for col in 0..dim {
        let s = if (col & sign).count_ones() % 2 == 1 { -base } else { base };
        acc += s * m[(col, col ^ flip)];
    }
    acc / dim as f64
}

/// Every word on `n` qubits in graded lexicographic order.
pub fn all_words(n: usize) -> Vec<PauliWord> {
    let mut v: Vec<PauliWord> = (0..(1u64 << (2 * n)))
        .map(|code| {
            let mut x = 0u64;
            let mut z = 0u64;
            for j in 0..n {
                let l = (code >> (2 * j)) & 3;
                x |= (l & 1) << j;
                z |= ((l >> 1) & 1) << j;
            }
            PauliWord::from_masks(n, x, z)
        })
        .collect();
    v.sort();
    v
}

pub fn evaluate(p: &PauliPolynomial) -> Result<DenseOperator> {
    evaluate_capped(p, DEFAULT_DENSE_CAP)
}

/// Substitutes the Pauli matrices, refusing `n > cap`.
pub fn evaluate_capped(p: &PauliPolynomial, cap: usize) -> Result<DenseOperator> {
    let n = p.n();
    if n > cap {
        return Err(Error::Resource { what: "dense evaluation qubits", requested: n, cap });
    }
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for (w, coeff) in p.terms() {
        let (flip, sign, base) = word_action(w);
        let b = base * coeff;
        for col in 0..dim {
            let s = if (col & sign).count_ones() % 2 == 1 { -b } else { b };
            m[(col ^ flip, col)] += s;
        }
    }
    DenseOperator::new(n, m)
}

/// Normalized-trace inner product computed from the dense matrices.
pub fn trace_inner_dense(p: &PauliPolynomial, q: &PauliPolynomial) -> Result<Complex64> {
    if p.n() != q.n() {
        return Err(Error::Dimension { expected: p.n(), found: q.n() });
    }
    let a = evaluate(p)?;
    let b = evaluate(q)?;
    let prod = a.matrix().adjoint() * b.matrix();
    Ok(linalg::trace(&prod) / a.dim() as f64)
}

/// Smallest eigenvalue of `p(σ)`; `p` must be Hermitian.
pub fn lambda_min(p: &PauliPolynomial) -> Result<f64> {
    if !p.is_hermitian() {
        return Err(Error::Contract("lambda_min needs a Hermitian polynomial".into()));
    }
    Ok(evaluate(p)?.eigenvalues()[0])
}

/// Smallest eigenvalue together with the first eigenvector of the sorted decomposition.
pub fn ground_state(p: &PauliPolynomial) -> Result<(f64, Vec<Complex64>)> {
    if !p.is_hermitian() {
        return Err(Error::Contract("ground_state needs a Hermitian polynomial".into()));
    }
    let m = evaluate(p)?;
    let (vals, vecs) = linalg::eigh(m.matrix());
    Ok((vals[0], vecs.column(0).iter().copied().collect()))
}

/// Spectral norm: largest |eigenvalue| when Hermitian, largest singular value otherwise.
pub fn spectral_norm(p: &PauliPolynomial) -> Result<f64> {
    let m = evaluate(p)?;
    if p.is_hermitian() {
        Ok(linalg::hermitian_norm(m.matrix()))
    } else {
        Ok(linalg::operator_norm(m.matrix()))
    }
}
