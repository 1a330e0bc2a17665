//! Small dense helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest |entry| of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn hermitian_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian matrix.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = symmetrize(a);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(a.nrows(), order.len(), |r, k| eig.eigenvectors[(r, order[k])]);
    (values, vectors)
}

pub fn eigvalsh(a: &CMatrix) -> Vec<f64> {
    let h = symmetrize(a);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn real_eigvalsh(a: &RMatrix) -> Vec<f64> {
    let h = (a + a.transpose()) * 0.5;
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn symmetrize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * c(0.5, 0.0)
}

pub fn real_symmetrize(a: &RMatrix) -> RMatrix {
    (a + a.transpose()) * 0.5
}

/// Square root of a PSD matrix; eigenvalues below zero are clamped.
pub fn psd_sqrt(a: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(a);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&l| c(libm::sqrt(l.max(0.0)), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn hermitian_norm(a: &CMatrix) -> f64 {
    let v = eigvalsh(a);
    match (v.first(), v.last()) {
        (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
        _ => 0.0,
    }
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}
