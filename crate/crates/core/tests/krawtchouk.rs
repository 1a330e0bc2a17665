use num_bigint::BigInt;
use pauli_sos::krawtchouk::{binomial, hermite_largest_root, phi_asymptotic, KrawtchoukContext};

#[test]
fn lemmas_hold_exhaustively() {
    for q in 2..=4 {
        for n in 1..=60 {
            let ctx = KrawtchoukContext::new(n, q).unwrap();
            assert!(ctx.lemma_violations().is_empty(), "n = {n}, q = {q}");
        }
    }
}

#[test]
fn generating_function_matches_values() {
    for n in 1..=20 {
        let ctx = KrawtchoukContext::new(n, 4).unwrap();
        for i in 0..=n {
            let coeffs = ctx.generating_coeffs(i).unwrap();
            for r in 0..=n {
                assert_eq!(&coeffs[r], ctx.value(r, i).unwrap());
            }
            assert_eq!(coeffs[0], BigInt::from(1));
        }
    }
}

#[test]
fn first_column_and_linear_values() {
    let ctx = KrawtchoukContext::new(9, 3).unwrap();
    for r in 0..=9 {
        assert_eq!(ctx.value(r, 0).unwrap(), &(BigInt::from(2).pow(r as u32) * binomial(9, r)));
        assert!((ctx.normalized(r, 0) - 1.0).abs() < 1e-15);
    }
    for i in 0..=9 {
        assert_eq!(ctx.value(1, i).unwrap(), &BigInt::from(2 * 9 - 3 * i as i64));
    }
    assert!(ctx.value(10, 0).is_err());
}

#[test]
fn orthogonality_at_thirty() {
    let ctx = KrawtchoukContext::new(30, 4).unwrap();
    let rows: Vec<Vec<f64>> = (0..=30).map(|r| ctx.row_f64(r)).collect();
    for r in 0..=30 {
        let norm = ctx.norm_squared(r).to_string().parse::<f64>().unwrap();
        for s in 0..=30 {
            let ip = ctx.inner_product(&rows[r], &rows[s]).unwrap();
            let expect = if r == s { norm } else { 0.0 };
            let scale = (ctx.norm_squared(r).to_string().parse::<f64>().unwrap()
                * ctx.norm_squared(s).to_string().parse::<f64>().unwrap())
            .sqrt();
            assert!((ip - expect).abs() <= 1e-9 * scale, "r = {r}, s = {s}");
        }
    }
}

#[test]
fn reference_root_values() {
    let ctx = KrawtchoukContext::new(40, 4).unwrap();
    let cases = [(0, 0.75), (4, 0.525296), (20, 0.125181), (26, 0.05), (30, 0.018611)];
    for (d, expect) in cases {
        let xi = ctx.smallest_root(d + 1).unwrap() / 40.0;
        assert!((xi - expect).abs() < 1e-5, "d = {d}: {xi}");
    }
}

#[test]
fn roots_decrease_and_bisection_agrees() {
    let ctx = KrawtchoukContext::new(40, 4).unwrap();
    let mut last = f64::INFINITY;
    for d in 1..=40 {
        let xi = ctx.smallest_root(d).unwrap();
        assert!(xi < last);
        assert!((xi - ctx.smallest_root_jacobi(d).unwrap()).abs() < 1e-6);
        last = xi;
    }
}

#[test]
fn hermite_bound_dominates() {
    let ctx = KrawtchoukContext::new(40, 4).unwrap();
    for d in 1..=20 {
        assert!(ctx.root_upper_bound(d).unwrap() >= ctx.smallest_root(d).unwrap() / 40.0);
    }
    assert!(ctx.root_upper_bound(39).is_err());
    assert_eq!(hermite_largest_root(1), 0.0);
    assert!((hermite_largest_root(2) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
}

#[test]
fn asymptotic_curve() {
    assert!((phi_asymptotic(4, 0.0).unwrap() - 0.75).abs() < 1e-15);
    assert!(phi_asymptotic(4, 0.75).unwrap().abs() < 1e-15);
    assert!(phi_asymptotic(4, 0.8).is_err());
    for t in [0.1, 0.25, 0.5] {
        let mut last = f64::INFINITY;
        for n in [40, 80, 160] {
            let ctx = KrawtchoukContext::new(n, 4).unwrap();
            let d = (t * n as f64).round() as usize;
            let dev = (ctx.smallest_root(d).unwrap() / n as f64 - phi_asymptotic(4, t).unwrap()).abs();
            assert!(dev < last, "t = {t}, n = {n}");
            last = dev;
        }
    }
}

#[test]
fn corrupted_table_is_detected() {
    let mut ctx = KrawtchoukContext::new(6, 4).unwrap();
    assert!(ctx.table_defects().is_empty());
    ctx.corrupt_value(3, 2, 1);
    assert_eq!(ctx.table_defects(), vec![(3, 2)]);
}
