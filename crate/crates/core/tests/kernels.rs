use num_bigint::BigInt;
use num_traits::ToPrimitive;
use pauli_sos::dense::{evaluate, ground_state, lambda_min, spectral_norm};
use pauli_sos::kernels::*;
use pauli_sos::krawtchouk::{binomial, KrawtchoukContext};
use pauli_sos::linalg::{max_abs_diff, operator_norm};
use pauli_sos::polynomial::PauliPolynomial;
use pauli_sos::random::{normalize_sup, random_even_weight, random_hermitian};
use pauli_sos::Error;

#[test]
fn a_is_a_commuting_projector() {
    for n in 1..=2 {
        for j in 0..n {
            let a = build_a(n, j).unwrap();
            assert!(max_abs_diff(&(a.matrix() * a.matrix()), a.matrix()) < 1e-12);
        }
    }
    let (a0, a1) = (build_a(2, 0).unwrap(), build_a(2, 1).unwrap());
    assert!(max_abs_diff(&(a0.matrix() * a1.matrix()), &(a1.matrix() * a0.matrix())) < 1e-12);
    assert!(matches!(build_a(5, 0), Err(Error::Resource { .. })));
}

#[test]
fn kernel_spectra() {
    for n in 1..=3 {
        let ctx = KrawtchoukContext::new(n, 4).unwrap();
        let total: BigInt = crn_spectrum(&ctx, 0).unwrap().into_iter().map(|(_, m)| m).sum();
        assert_eq!(total, BigInt::from(4).pow(n as u32));
        for r in 0..=n {
            let dense = build_crn(n, r).unwrap().eigenvalues();
            let formula = crn_spectrum_sorted(&ctx, r).unwrap();
            assert_eq!(dense.len(), formula.len());
            for (a, b) in dense.iter().zip(&formula) {
                assert!((a - b).abs() < 1e-10, "n = {n}, r = {r}");
            }
            for (i, (_, m)) in crn_spectrum(&ctx, r).unwrap().iter().enumerate() {
                let w = m.to_f64().unwrap() / 4f64.powi(n as i32);
                assert!((w - ctx.weight(i)).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn krawtchouk_identity_and_symmetric_sums() {
    for n in 1..=3 {
        let ctx = KrawtchoukContext::new(n, 4).unwrap();
        let s = build_a_sum(n).unwrap();
        for r in 0..=n {
            let c = build_crn(n, r).unwrap();
            let mut k = krawtchouk_of_operator(&ctx, r, s.matrix()).unwrap();
            if r % 2 == 1 {
                k = -k;
            }
            assert!(operator_norm(&(c.matrix() - &k)) < 1e-10);
            let via_a = build_crn_from_a(n, r).unwrap();
            assert!(max_abs_diff(c.matrix(), via_a.matrix()) < 1e-10);
        }
    }
}

#[test]
fn kernels_are_orthogonal() {
    let n = 3;
    let ops: Vec<_> = (0..=n).map(|r| build_crn(n, r).unwrap()).collect();
    for r in 0..=n {
        for s in 0..=n {
            let ip = ops[r].inner(&ops[s]);
            let expect = if r == s { (BigInt::from(3).pow(r as u32) * binomial(n, r)).to_f64().unwrap() } else { 0.0 };
            assert!((ip.re - expect).abs() < 1e-10 && ip.im.abs() < 1e-10);
        }
    }
}

#[test]
fn components_via_two_copy_trace() {
    // p_r = Tr_2(C_r (I ⊗ p)), checked on coefficients: ⟨u, p_r⟩ = Σ_{|w|=r} ⟨u, w⟩⟨w, p⟩
    let p = random_hermitian(3, 3, 5);
    for r in 0..=3 {
        let c = build_crn(3, r).unwrap();
        let dim = 8;
        let pm = evaluate(&p).unwrap().into_matrix();
        let lifted = pauli_sos::linalg::kron(&nalgebra::DMatrix::identity(dim, dim), &pm);
        let prod = c.matrix() * lifted;
        // normalized partial trace over the second copy
        let mut out = nalgebra::DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for s in 0..dim {
                    acc += prod[(a * dim + s, b * dim + s)];
                }
                out[(a, b)] = acc / dim as f64;
            }
        }
        let expect = evaluate(&p.homogeneous_component(r)).unwrap();
        assert!(max_abs_diff(&out, expect.matrix()) < 1e-10);
    }
}

#[test]
fn coefficient_problem_matches_roots() {
    let ctx = KrawtchoukContext::new(8, 4).unwrap();
    for d in 1..=3 {
        let co = solve_coefficients(8, d, 2).unwrap();
        assert!((co.sdp_objective - ctx.smallest_root(d + 1).unwrap()).abs() < 1e-6);
        assert!(co.c.iter().step_by(2).all(|&v| v <= 1.0 + 1e-9));
        assert!(co.profile.iter().all(|&f| f >= -1e-9));
        for r in 1..=1 {
            assert!(1.0 - co.c[2 * r] <= 8.0 * r as f64 / 24.0 * co.sdp_objective + 1e-9);
        }
    }
    let co = solve_coefficients(8, 8, 4).unwrap();
    assert!(co.sdp_objective <= 1e-8);
    for r in 0..=4 {
        assert!((co.c[2 * r] - 1.0).abs() < 1e-6);
    }
    assert!(solve_coefficients(8, 1, 3).is_err());
    assert!(solve_coefficients(8, 1, 4).is_err());
}

#[test]
fn eta_values() {
    assert_eq!(optimal_eta(5, 2, 5).unwrap(), 1.0);
    let eta = optimal_eta(40, 2, 26).unwrap();
    assert!((eta - 1.0 / (1.0 - 8.0 / 120.0 * 2.0)).abs() < 1e-6);
    // (4k/3)(ξ/n) = 1/2 gives η = 2
    assert!((optimal_eta_from_xi(3, 2, 0.5625).unwrap() - 2.0).abs() < 1e-12);
    assert!(matches!(optimal_eta(3, 2, 0), Err(Error::Regime(_))));
}

#[test]
fn extracted_coefficients_match_assembled_kernel() {
    let co = solve_coefficients(3, 2, 2).unwrap();
    let k = kernel_operator(&co).unwrap();
    for (r, &cr) in co.c.iter().enumerate() {
        let c = build_crn(3, r).unwrap();
        let norm = (BigInt::from(3).pow(r as u32) * binomial(3, r)).to_f64().unwrap();
        assert!((c.inner(&k).re / norm - cr).abs() < 1e-10);
    }
    // positivity chain: f(Σ A_j) is PSD and equals the kernel
    let f = profile_operator(&co).unwrap();
    assert!(f.eigenvalues()[0] > -1e-9);
    assert!(max_abs_diff(f.matrix(), k.matrix()) < 1e-9);
}

#[test]
fn kernel_operator_and_inverse() {
    let co = solve_coefficients(3, 2, 2).unwrap();
    let one = PauliPolynomial::constant(3, 1.0);
    assert_eq!(apply_k(&one, &co).unwrap(), one);
    let p = random_hermitian(3, 3, 8);
    let round = apply_k_inverse(&apply_k(&p, &co).unwrap(), &co).unwrap();
    assert!(round.max_coeff_diff(&p) < 1e-10);

    let q = normalize_sup(&random_even_weight(3, 2, 1).unwrap()).unwrap();
    let diff = &apply_k_inverse(&q, &co).unwrap() - &q;
    let lhs = spectral_norm(&diff).unwrap();
    let sum: f64 = (1..=1).map(|r| (1.0 / co.c[2 * r] - 1.0).abs()).sum();
    let comp = (0..=1).map(|r| spectral_norm(&q.homogeneous_component(2 * r)).unwrap()).fold(0.0, f64::max);
    assert!(lhs <= sum * comp + 1e-12);
}

#[test]
fn constants() {
    assert!((theorem1_constant_closed(2) - 437.4).abs() < 0.1);
    let gamma = pauli_sos::component_bounds::gamma_k(2).unwrap();
    let exact = epsilon_bound(40, 2, 2.0, gamma, EtaMode::Fixed).unwrap();
    let closed = epsilon_bound(40, 2, 2.0, pauli_sos::component_bounds::gamma_k_closed(2), EtaMode::Fixed).unwrap();
    assert!(exact < closed);
    let doubled = epsilon_bound(40, 2, 4.0, gamma, EtaMode::Fixed).unwrap();
    assert!((doubled - 2.0 * exact).abs() < 1e-12);
    assert!(epsilon_bound(3, 2, 1.2, gamma, EtaMode::Fixed).is_err());
}

#[test]
fn certificate_for_shifted_zz() {
    let p = PauliPolynomial::from_real(2, &[(1.0, "II"), (1.0, "ZZ")]).unwrap();
    let co = solve_coefficients(2, 1, 2).unwrap();
    let w = build_sos_certificate(&p, &co).unwrap();
    assert!(w.min_eigenvalue() > -1e-10);
    assert!(w.polynomial().max_coeff_diff(&apply_k(&p, &co).unwrap()) < 1e-8);
    let bad = PauliPolynomial::from_real(2, &[(1.0, "ZZ")]).unwrap();
    assert!(build_sos_certificate(&bad, &co).is_err());
}

#[test]
fn lemma3_pipeline() {
    for seed in 0..3 {
        let p = normalize_sup(&random_even_weight(3, 2, seed).unwrap()).unwrap();
        let co = solve_coefficients(3, 2, 2).unwrap();
        let lam = lambda_min(&p).unwrap();
        let inv = apply_k_inverse(&p, &co).unwrap();
        let eps = spectral_norm(&(&inv - &p)).unwrap();
        let w = build_sos_certificate(&inv.shift(eps - lam), &co).unwrap();
        assert!(w.polynomial().max_coeff_diff(&p.shift(eps - lam)) < 1e-8);
    }
}

#[test]
fn kernel_state_is_feasible() {
    let p = normalize_sup(&random_even_weight(3, 2, 3).unwrap()).unwrap();
    let (lam, v) = ground_state(&p).unwrap();
    let gamma = pauli_sos::component_bounds::gamma_k(2).unwrap();
    for d in 1..=3 {
        let co = solve_coefficients(3, d, 2).unwrap();
        let s = upper_bound_feasible_s(&p, &co).unwrap();
        assert!((s.constant_term().re - 1.0).abs() < 1e-9);
        // ⟨p, s⟩ = v†(Kp)v
        let kp = evaluate(&apply_k(&p, &co).unwrap()).unwrap().into_matrix();
        let vv = nalgebra::DVector::from_vec(v.clone());
        let expect = (vv.adjoint() * kp * &vv)[(0, 0)].re;
        let value = p.inner(&s).unwrap().re;
        assert!((value - expect).abs() < 1e-9);
        assert!(value - lam <= theorem2_bound(3, 2, co.xi_reference, gamma) + 1e-9);
        let cert = feasible_s_certificate(&p, &co).unwrap();
        assert!(cert.polynomial().max_coeff_diff(&s) < 1e-8);
    }
}
