use pauli_sos::dense::{evaluate, lambda_min};
use pauli_sos::linalg::max_abs_diff;
use pauli_sos::random::random_hermitian;
use pauli_sos::reduction::*;

#[test]
fn hundred_random_embeddings() {
    for seed in 0..100 {
        let k = 2 + (seed % 2) as usize;
        let p = random_hermitian(3, k, 700 + seed);
        let t = even_weight_embedding(&p).unwrap();
        assert_eq!(t.n(), 4);
        assert!(t.is_even_weight());
        assert!(t.is_hermitian());
        assert!(t.degree() <= embedded_locality(k));
        let rep = verify_spectrum_equal(&p, &t).unwrap();
        assert!(rep.passed(), "seed {seed}: deviation {}", rep.max_deviation);
        assert!((rep.lambda_min.0 - rep.lambda_min.1).abs() < 1e-9);
        assert!((lambda_min(&t).unwrap() - lambda_min(&p).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn locality_rule() {
    assert_eq!(embedded_locality(1), 2);
    assert_eq!(embedded_locality(2), 2);
    assert_eq!(embedded_locality(3), 4);
    assert_eq!(embedded_locality(4), 4);
}

#[test]
fn theta_flips_odd_part() {
    assert!(theta_sign_defect(3).unwrap() < 1e-12);
    for seed in 0..5 {
        let p = random_hermitian(3, 3, 900 + seed);
        let (even, odd) = parity_split(&p);
        let conj = apply_theta(&evaluate(&(&even + &odd)).unwrap()).unwrap();
        let minus = evaluate(&(&even - &odd)).unwrap();
        assert!(max_abs_diff(conj.matrix(), minus.matrix()) < 1e-12);
    }
}

#[test]
fn even_input_is_unchanged_up_to_padding() {
    let p = random_hermitian(3, 2, 5);
    let (even, _) = parity_split(&p);
    let t = even_weight_embedding(&even).unwrap();
    assert_eq!(t.len(), even.len());
    assert!(t.terms().all(|(w, _)| w.letter(0) == pauli_sos::pauli::Letter::I));
}
