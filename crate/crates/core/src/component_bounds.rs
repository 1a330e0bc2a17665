//! Norm bounds on homogeneous components via the noise operator and
//! Chebyshev-node interpolation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::spectral_norm;
use crate::error::{Error, Result};
use crate::polynomial::PauliPolynomial;
use num_complex::Complex64;

/// Largest degree for which the integer Chebyshev coefficients are tabulated.
pub const MAX_INTERPOLATION_DEGREE: usize = 12;

/// `H(α) = Σ_r α^r H_r`.
pub fn noise_operator(p: &PauliPolynomial, alpha: f64) -> Result<PauliPolynomial> {
    if !(-1.0 / 3.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("noise parameter {alpha} outside [-1/3, 1]")));
    }
    Ok(p.map_components(|r| Complex64::new(libm::pow(alpha, r as f64), 0.0)))
}

/// Integer coefficients `τ_{r,j}` of `T*_j(x) = T_j(2x - 1)`; row `j`, column `r`.
pub fn shifted_chebyshev_table(k: usize) -> Result<Vec<Vec<i128>>> {
    if k > MAX_INTERPOLATION_DEGREE {
        return Err(Error::Resource { what: "Chebyshev degree", requested: k, cap: MAX_INTERPOLATION_DEGREE });
    }
    // T*_{j+1} = 2(2x - 1) T*_j - T*_{j-1}
    let mut rows: Vec<Vec<i128>> = vec![vec![1]];
    if k >= 1 {
        rows.push(vec![-1, 2]);
    }
    for j in 1..k {
        let (prev, cur) = (&rows[j - 1], &rows[j]);
        let mut next = vec![0i128; j + 2];
        for (r, &c) in cur.iter().enumerate() {
            next[r + 1] += 4 * c;
            next[r] -= 2 * c;
        }
        for (r, &c) in prev.iter().enumerate() {
            next[r] -= c;
        }
        rows.push(next);
    }
    Ok(rows)
}

/// `T_j(x)` by the three-term recurrence.
pub fn chebyshev_t(j: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if j == 0 {
        return a;
    }
    for _ in 1..j {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// Roots of `T*_{k+1}`, ascending.
pub fn chebyshev_nodes(k: usize) -> Vec<f64> {
    let m = (k + 1) as f64;
    let mut nodes: Vec<f64> = (0..=k)
        .map(|i| 0.5 * (1.0 + libm::cos((2.0 * i as f64 + 1.0) * core::f64::consts::PI / (2.0 * m))))
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevInterpolation {
    pub k: usize,
    pub nodes: Vec<f64>,
    /// `b[r][i]` with `H_r = Σ_i b[r][i] H(α_i)`.
    pub coeffs: Vec<Vec<f64>>,
    /// `max_r Σ_i |b[r][i]|`, a certified upper bound for the component constant.
    pub gamma: f64,
}

impl ChebyshevInterpolation {
    /// Largest `|Σ_i b[r][i] α_i^s - δ_{rs}|`.
    pub fn vandermonde_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..=self.k {
            for s in 0..=self.k {
                let v: f64 = (0..=self.k).map(|i| self.coeffs[r][i] * libm::pow(self.nodes[i], s as f64)).sum();
                let target = if r == s { 1.0 } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }
}

pub fn interpolation_coeffs(k: usize) -> Result<ChebyshevInterpolation> {
    if k == 0 {
        return Err(Error::Domain("interpolation degree must be at least 1".into()));
    }
    let tau = shifted_chebyshev_table(k)?;
    let nodes = chebyshev_nodes(k);
    let m = (k + 1) as f64;
    let mut coeffs = vec![vec![0.0; k + 1]; k + 1];
    for (r, row) in coeffs.iter_mut().enumerate() {
        for (i, b) in row.iter_mut().enumerate() {
            let x = 2.0 * nodes[i] - 1.0;
            *b = (r..=k)
                .map(|j| {
                    let u = if j == 0 { 1.0 } else { 2.0 };
                    u / m * chebyshev_t(j, x) * tau[j][r] as f64
                })
                .sum();
        }
    }
    let gamma = coeffs.iter().map(|row| row.iter().map(|b| b.abs()).sum::<f64>()).fold(0.0, f64::max);
    Ok(ChebyshevInterpolation { k, nodes, coeffs, gamma })
}

/// Interpolation constant `γ_k`.
pub fn gamma_k(k: usize) -> Result<f64> {
    Ok(interpolation_coeffs(k)?.gamma)
}

/// `(1 + √2)^{2k+1}`.
pub fn gamma_k_closed(k: usize) -> f64 {
    libm::pow(1.0 + core::f64::consts::SQRT_2, (2 * k + 1) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentBoundReport {
    pub k: usize,
    pub gamma: f64,
    pub norm: f64,
    /// `‖p_r‖ / ‖p‖` for `r = 0..=k`.
    pub ratios: Vec<f64>,
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Checks `‖p_r‖ ≤ γ_k ‖p‖` for every component by dense eigensolves.
pub fn verify_component_bound(p: &PauliPolynomial, k: usize) -> Result<ComponentBoundReport> {
    if p.degree() > k {
        return Err(Error::Contract(format!("degree {} exceeds k = {k}", p.degree())));
    }
    let gamma = gamma_k(k)?;
    let norm = spectral_norm(p)?;
    let mut ratios = Vec::with_capacity(k + 1);
    for r in 0..=k {
        let comp = p.homogeneous_component(r);
        let ratio = if norm == 0.0 || comp.is_empty() { 0.0 } else { spectral_norm(&comp)? / norm };
        ratios.push(ratio);
    }
    let worst_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(ComponentBoundReport { k, gamma, norm, ratios, worst_ratio, passed: worst_ratio <= gamma * (1.0 + 1e-12) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_nodes() {
        let nodes = chebyshev_nodes(1);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((nodes[0] - (1.0 - h) / 2.0).abs() < 1e-15);
        assert!((nodes[1] - (1.0 + h) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn shifted_coefficients() {
        let t = shifted_chebyshev_table(3).unwrap();
        // T*_2 = 8x^2 - 8x + 1, T*_3 = 32x^3 - 48x^2 + 18x - 1
        assert_eq!(t[2], vec![1, -8, 8]);
        assert_eq!(t[3], vec![-1, 18, -48, 32]);
        assert_eq!(chebyshev_t(2, 3.0), 17.0);
    }

    #[test]
    fn vandermonde_inverse() {
        for k in 1..=6 {
            assert!(interpolation_coeffs(k).unwrap().vandermonde_defect() < 1e-9, "k = {k}");
        }
    }

    #[test]
    fn gamma_below_closed_form() {
        let mut last = 0.0;
        for k in 1..=8 {
            let g = gamma_k(k).unwrap();
            assert!(g < gamma_k_closed(k));
            assert!(g >= last);
            last = g;
        }
    }

    #[test]
    fn noise_range() {
        let p = PauliPolynomial::from_real(2, &[(1.0, "II"), (0.5, "XZ")]).unwrap();
        assert!(noise_operator(&p, 1.5).is_err());
        assert_eq!(noise_operator(&p, 1.0).unwrap(), p);
        assert_eq!(noise_operator(&p, 0.0).unwrap(), PauliPolynomial::constant(2, 1.0));
    }
}
