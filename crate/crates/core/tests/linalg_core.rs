use infogeom::linalg::random::{random_density, random_hermitian, random_tangent, rng};
use infogeom::linalg::{
    self, c, diag, eigh, identity, kron, partial_trace, re, real_matrix, CMat, Side,
};
use proptest::prelude::*;

#[test]
fn diagonal_and_pauli_spectra() {
    let e = eigh(&diag(&[1.0, 2.0])).unwrap();
    assert_eq!(e.values, vec![1.0, 2.0]);
    assert!(linalg::frobenius(&(e.vectors - identity(2))) < 1e-15);
    let x = real_matrix(2, &[0.0, 1.0, 1.0, 0.0]);
    let e = eigh(&x).unwrap();
    assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
}

#[test]
fn reconstruction_on_random_hermitians() {
    let mut r = rng(1);
    for k in 0..1000 {
        let d = 1 + k % 8;
        let h = random_hermitian(d, &mut r).scale(1.0 + k as f64);
        let e = eigh(&h).unwrap();
        let back = e.map(|x| x);
        assert!(linalg::frobenius(&(back - &h)) < 1e-9 * linalg::frobenius(&h));
        let u = &e.vectors;
        assert!(linalg::frobenius(&(u.adjoint() * u - identity(d))) < 1e-10);
    }
}

#[test]
fn eigenbasis_is_deterministic_under_degeneracy() {
    let a = diag(&[0.2, 0.2, 0.6]);
    let e1 = eigh(&a).unwrap();
    let e2 = eigh(&a.clone()).unwrap();
    assert_eq!(e1.vectors, e2.vectors);
    assert!(linalg::frobenius(&(e1.vectors - identity(3))) < 1e-15);
}

#[test]
fn multiplication_superoperators() {
    let mut r = rng(2);
    let rho = random_density(2, 2, &mut r);
    let sigma = random_density(2, 2, &mut r);
    let a = linalg::random::ginibre(2, 2, &mut r);
    let l = linalg::left_mult(&rho);
    let rr = linalg::right_mult(&rho);
    assert!(linalg::frobenius(&(linalg::apply_super(&l, &a) - &rho * &a)) < 1e-12);
    assert!(linalg::frobenius(&(linalg::apply_super(&rr, &a) - &a * &rho)) < 1e-12);
    let rs = linalg::right_mult(&sigma);
    assert!(linalg::frobenius(&(&l * &rs - &rs * &l)) < 1e-12);
    let id = identity(2);
    assert_eq!(linalg::left_mult(&id), identity(4));
    assert_eq!(linalg::right_mult(&id), identity(4));
    let v = linalg::apply_super(&l, &id);
    assert!(linalg::frobenius(&(v - &rho)) < 1e-15);
    assert_eq!(linalg::unvec(&linalg::vec(&a), 2, 2), a);
}

#[test]
fn sandwich_inverse_examples() {
    let x = CMat::from_fn(3, 3, |i, j| c(i as f64 - j as f64, 0.5 * j as f64));
    let m = linalg::maximally_mixed(3);
    let b = linalg::sandwich_inverse(&m, &m, 1.0, &x).unwrap();
    assert!(linalg::frobenius(&(b - x.scale(1.5))) < 1e-13);
    let mut r = rng(5);
    let s = random_density(3, 3, &mut r);
    let b0 = linalg::sandwich_inverse(&s, &s, 0.0, &x).unwrap();
    let inv = s.clone().try_inverse().unwrap();
    assert!(linalg::rel_diff(&b0, &(inv * &x), 1.0) < 1e-9);
    let z = CMat::zeros(2, 2);
    assert!(linalg::sandwich_inverse(&z, &z, 1.0, &CMat::identity(2, 2)).is_err());
}

#[test]
fn sandwich_inverse_residuals() {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let d = 1 + k % 5;
        let s = [0.0, 0.3, 1.0][k % 3];
        let sigma = random_density(d, d, &mut r);
        let rho = random_density(d, d, &mut r);
        let x = linalg::random::ginibre(d, d, &mut r);
        let b = linalg::sandwich_inverse(&sigma, &rho, s, &x).unwrap();
        let back = &sigma * &b + (&b * &rho).scale(s);
        worst = worst.max(linalg::frobenius(&(back - &x)) / linalg::frobenius(&x).max(1.0));
    }
    eprintln!("worst sandwich residual {worst:e}");
    assert!(worst < 1e-10);
}

#[test]
fn sandwich_inverse_matches_time_integral() {
    // ∫_0^T e^{-tσ} X e^{-tρ} dt by composite Simpson
    let mut r = rng(17);
    let floor = identity(2).scale(0.2);
    let sigma = (random_density(2, 2, &mut r) + &floor) / re(1.4);
    let rho = (random_density(2, 2, &mut r) + &floor) / re(1.4);
    let x = linalg::random::ginibre(2, 2, &mut r);
    let es = eigh(&sigma).unwrap();
    let er = eigh(&rho).unwrap();
    let t_max = 80.0;
    let n = 40_000;
    let h = t_max / n as f64;
    let mut acc = CMat::zeros(2, 2);
    for k in 0..=n {
        let t = k as f64 * h;
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let term = es.map(|v| (-t * v).exp()) * &x * er.map(|v| (-t * v).exp());
        acc += term.scale(w * h / 3.0);
    }
    let b = linalg::sandwich_inverse(&sigma, &rho, 1.0, &x).unwrap();
    assert!(linalg::frobenius(&(acc - b)) < 1e-8);
}

#[test]
fn partial_trace_of_products() {
    let mut r = rng(4);
    let a = random_density(2, 2, &mut r);
    let b = random_density(3, 3, &mut r);
    let ab = kron(&a, &b);
    assert!(linalg::frobenius(&(partial_trace(&ab, 2, 3, Side::Second).unwrap() - &a)) < 1e-14);
    assert!(linalg::frobenius(&(partial_trace(&ab, 2, 3, Side::First).unwrap() - &b)) < 1e-14);
    assert_eq!(kron(&identity(2), &identity(2)), identity(4));
    // index-loop oracle on a non-product operator
    let g = linalg::random::ginibre(6, 6, &mut r);
    let pt = partial_trace(&g, 2, 3, Side::Second).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let mut s = re(0.0);
            for k in 0..3 {
                s += g[(3 * i + k, 3 * j + k)];
            }
            assert!((pt[(i, j)] - s).norm() < 1e-14);
        }
    }
    assert!((pt.trace() - g.trace()).norm() < 1e-12);
}

#[test]
fn generators_are_deterministic() {
    let a = random_density(3, 3, &mut rng(8));
    let b = random_density(3, 3, &mut rng(8));
    assert_eq!(a, b);
    let e = eigh(&a).unwrap();
    assert!(e.min() >= linalg::RANK_EPS);
    let t = random_tangent(4, &mut rng(1));
    assert!(t.trace().norm() < 1e-14);
    assert!((linalg::frobenius(&t) - 1.0).abs() < 1e-14);
}

proptest! {
    #[test]
    fn vectorization_roundtrip(seed in 0u64..1000, d in 1usize..6) {
        let mut r = rng(seed);
        let a = linalg::random::ginibre(d, d, &mut r);
        prop_assert_eq!(linalg::unvec(&linalg::vec(&a), d, d), a);
    }

    #[test]
    fn sandwich_superoperator_is_faithful(seed in 0u64..1000, d in 1usize..5) {
        let mut r = rng(seed);
        let a = linalg::random::ginibre(d, d, &mut r);
        let b = linalg::random::ginibre(d, d, &mut r);
        let x = linalg::random::ginibre(d, d, &mut r);
        let direct = &a * &x * &b;
        let via = linalg::apply_super(&linalg::sandwich_super(&a, &b), &x);
        prop_assert!(linalg::frobenius(&(via - &direct)) < 1e-12 * linalg::frobenius(&direct).max(1.0));
    }
}
