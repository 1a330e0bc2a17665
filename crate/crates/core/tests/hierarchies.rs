use num_complex::Complex64;
use pauli_sos::dense::lambda_min;
use pauli_sos::hierarchies::*;
use pauli_sos::kernels::EtaMode;
use pauli_sos::linalg::eigvalsh;
use pauli_sos::pauli::{Letter, PauliWord};
use pauli_sos::polynomial::PauliPolynomial;
use pauli_sos::random::{normalize_sup, random_diagonal, random_even_weight, random_hermitian};
use pauli_sos::Error;

const TOL: f64 = 1e-6;

#[test]
fn sandwich_and_monotone() {
    for seed in 0..4 {
        let p = random_hermitian(3, 2, 1000 + seed);
        let lambda = lambda_min(&p).unwrap();
        let mut last_nu = f64::NEG_INFINITY;
        let mut last_mu = f64::INFINITY;
        for d in 1..=2 {
            let nu = nu_d(&p, d).unwrap();
            let mu = mu_d(&p, d).unwrap();
            assert!(nu.value <= lambda + TOL && lambda <= mu.value + TOL, "seed {seed}, d {d}");
            assert!(nu.value >= last_nu - TOL && mu.value <= last_mu + TOL);
            assert!(nu.reconstruction_error <= RECONSTRUCTION_TOL);
            assert!(nu.certificate.min_eigenvalue() > -1e-8);
            assert!(nu.discrepancy() < 1e-5);
            last_nu = nu.value;
            last_mu = mu.value;
        }
    }
}

#[test]
fn exact_at_full_level() {
    for seed in 0..3 {
        let p = random_hermitian(2, 2, 1100 + seed);
        let lambda = lambda_min(&p).unwrap();
        assert!((nu_d(&p, 2).unwrap().value - lambda).abs() < TOL);
        assert!((mu_d(&p, 2).unwrap().value - lambda).abs() < TOL);
    }
}

#[test]
fn lower_bound_moves_with_shift() {
    let p = random_hermitian(3, 2, 1200);
    let a = nu_d(&p, 1).unwrap().value;
    let b = nu_d(&p.shift(0.75), 1).unwrap().value;
    assert!((b - a - 0.75).abs() < TOL);
    let a = mu_d(&p, 1).unwrap().value;
    let b = mu_d(&p.shift(-0.5), 1).unwrap().value;
    assert!((b - a + 0.5).abs() < TOL);
}

fn brute_force_min(p: &PauliPolynomial) -> f64 {
    let n = p.n();
    (0u64..1 << n)
        .map(|bits| {
            p.terms()
                .map(|(w, c)| {
                    let flips = (w.z_mask() & bits).count_ones();
                    c.re * if flips % 2 == 0 { 1.0 } else { -1.0 }
                })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn diagonal_matches_brute_force() {
    for seed in 0..4 {
        let p = random_diagonal(3, 2, 1300 + seed);
        let nu = nu_d(&p, 3).unwrap();
        assert!((nu.value - brute_force_min(&p)).abs() < 1e-7);
    }
}

#[test]
fn moment_matrix_is_a_state() {
    let p = random_hermitian(2, 2, 1400);
    let nu = nu_d(&p, 1).unwrap();
    let m = nu.moment_matrix.unwrap();
    assert!(eigvalsh(&m)[0] > -1e-7);
    let basis = enumerate_words(2, 1).unwrap();
    let moments = moments_from_matrix(&basis, &m);
    assert!((moments[&PauliWord::identity(2)] - Complex64::new(1.0, 0.0)).norm() < 1e-7);
    let mu = mu_d(&p, 1).unwrap();
    let s = mu.state.unwrap();
    assert!((s.constant_term().re - 1.0).abs() < 1e-7);
}

#[test]
fn rate_reports_at_three_qubits() {
    let p = normalize_sup(&random_even_weight(3, 2, 1500).unwrap()).unwrap();
    let r1 = verify_theorem1(&p, 1, EtaMode::Fixed).unwrap();
    assert_eq!(r1.verdict, Verdict::NotApplicable);
    assert!(r1.bound.is_none());
    for d in 2..=3 {
        let r = verify_theorem1(&p, d, EtaMode::Fixed).unwrap();
        assert_eq!(r.verdict, Verdict::Passed, "d {d}: gap {} bound {:?}", r.gap, r.bound);
        assert!(r.gap >= -TOL);
    }
    for d in 1..=3 {
        let r = verify_theorem2(&p, d).unwrap();
        assert_eq!(r.verdict, Verdict::Passed);
        assert!(r.slack().unwrap() >= -BOUND_TOL);
    }
}

#[test]
fn kernel_bound_sits_below_the_hierarchy() {
    let p = normalize_sup(&random_even_weight(3, 2, 1600).unwrap()).unwrap();
    for d in 1..=2 {
        let kb = kernel_certified_lower_bound(&p, d).unwrap();
        let nu = nu_d(&p, d).unwrap();
        assert!(kb.value <= nu.value + TOL);
        assert!(kb.epsilon >= 0.0);
        assert!(kb.certificate.min_eigenvalue() > -1e-8);
    }
}

#[test]
fn input_errors() {
    let mut p = PauliPolynomial::zero(2);
    p.add_term(PauliWord::single(2, 0, Letter::X), Complex64::new(0.0, 1.0));
    assert!(matches!(nu_d(&p, 1), Err(Error::Contract(_))));
    let odd = PauliPolynomial::from_real(2, &[(0.5, "XI")]).unwrap();
    assert!(matches!(verify_theorem2(&odd, 1), Err(Error::Contract(_))));
    let big = random_hermitian(5, 2, 0);
    assert!(matches!(nu_d(&big, 1), Err(Error::Resource { .. })));
    let loud = PauliPolynomial::from_real(2, &[(3.0, "ZZ")]).unwrap();
    assert!(matches!(verify_theorem1(&loud, 2, EtaMode::Fixed), Err(Error::Contract(_))));
}
