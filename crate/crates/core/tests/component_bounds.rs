use pauli_sos::component_bounds::*;
use pauli_sos::dense::spectral_norm;
use pauli_sos::random::{normalize_sup, random_hermitian};
use pauli_sos::Error;

#[test]
fn two_hundred_random_instances() {
    let g2 = gamma_k(2).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..200 {
        let p = normalize_sup(&random_hermitian(3, 2, seed)).unwrap();
        let rep = verify_component_bound(&p, 2).unwrap();
        assert!(rep.passed, "seed {seed}: {:?}", rep.ratios);
        assert!((rep.norm - 1.0).abs() < 1e-9);
        assert_eq!(rep.gamma, g2);
        worst = worst.max(rep.worst_ratio);
    }
    assert!(worst > 0.0 && worst <= g2);
}

#[test]
fn components_are_recovered_from_noisy_copies() {
    for k in 1..=4 {
        let interp = interpolation_coeffs(k).unwrap();
        for seed in 0..3 {
            let p = random_hermitian(3, k, 40 + seed);
            let noisy: Vec<_> = interp.nodes.iter().map(|&a| noise_operator(&p, a).unwrap()).collect();
            for r in 0..=k {
                let mut sum = pauli_sos::polynomial::PauliPolynomial::zero(3);
                for (i, h) in noisy.iter().enumerate() {
                    sum = &sum + &h.scale_real(interp.coeffs[r][i]);
                }
                assert!(sum.max_coeff_diff(&p.homogeneous_component(r)) < 1e-9, "k = {k}, r = {r}");
            }
        }
    }
}

#[test]
fn chebyshev_coefficient_signs_and_sums() {
    let tau = shifted_chebyshev_table(8).unwrap();
    for (j, row) in tau.iter().enumerate() {
        assert_eq!(row.len(), j + 1);
        for (r, &t) in row.iter().enumerate() {
            let sign = if (j + r) % 2 == 0 { 1 } else { -1 };
            assert!(t * sign > 0, "tau[{j}][{r}] = {t}");
        }
        let abs_sum: i128 = row.iter().map(|t| t.abs()).sum();
        assert_eq!(abs_sum as f64, chebyshev_t(j, 3.0));
    }
}

#[test]
fn discrete_orthogonality_at_nodes() {
    for k in 1..=6 {
        let xs: Vec<f64> = chebyshev_nodes(k).iter().map(|a| 2.0 * a - 1.0).collect();
        let m = (k + 1) as f64;
        for j in 0..=k {
            for l in 0..=k {
                let s: f64 = xs.iter().map(|&x| chebyshev_t(j, x) * chebyshev_t(l, x)).sum();
                let expect = match (j == l, j) {
                    (false, _) => 0.0,
                    (true, 0) => m,
                    (true, _) => m / 2.0,
                };
                assert!((s - expect).abs() < 1e-10, "k={k} j={j} l={l}");
            }
        }
    }
}

#[test]
fn noise_is_contractive() {
    for seed in 0..10 {
        let p = random_hermitian(3, 3, 300 + seed);
        let norm = spectral_norm(&p).unwrap();
        for alpha in [-1.0 / 3.0, -0.2, 0.0, 0.3, 0.7, 1.0] {
            let h = noise_operator(&p, alpha).unwrap();
            assert!(spectral_norm(&h).unwrap() <= norm + 1e-9);
        }
    }
    let p = random_hermitian(2, 2, 1);
    assert!(matches!(noise_operator(&p, -0.5), Err(Error::Domain(_))));
    assert!(matches!(noise_operator(&p, 1.01), Err(Error::Domain(_))));
}

#[test]
fn ratios_do_not_depend_on_padding() {
    for seed in 0..5 {
        let p = random_hermitian(3, 2, 500 + seed);
        let a = verify_component_bound(&p, 2).unwrap();
        let b = verify_component_bound(&p.extend(1), 2).unwrap();
        for (x, y) in a.ratios.iter().zip(&b.ratios) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn gamma_growth() {
    let g: Vec<f64> = (1..=8).map(|k| gamma_k(k).unwrap()).collect();
    for (i, &v) in g.iter().enumerate() {
        assert!(v <= gamma_k_closed(i + 1));
    }
    assert!(g.windows(2).all(|w| w[1] >= w[0]));
    assert!(matches!(gamma_k(MAX_INTERPOLATION_DEGREE + 1), Err(Error::Resource { .. })));
    assert!(matches!(verify_component_bound(&random_hermitian(2, 2, 0), 1), Err(Error::Contract(_))));
}
