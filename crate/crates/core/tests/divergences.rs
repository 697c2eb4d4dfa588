use infogeom::divergence::{self, geodesic, ContrastFn};
use infogeom::fisher;
use infogeom::linalg::random::{random_density, random_tangent, random_unitary, rng};
use infogeom::linalg::{self, diag, kron, CMat};
use infogeom::monotone;

fn pure(d: usize, k: usize) -> CMat {
    linalg::unit(d, k, k)
}

fn named() -> Vec<(
    ContrastFn,
    fn(&CMat, &CMat) -> infogeom::Result<divergence::DivergenceResult>,
)> {
    vec![
        (ContrastFn::relative_entropy(), divergence::relative_entropy),
        (ContrastFn::wigner_yanase(), divergence::wy_contrast),
        (ContrastFn::bures(), divergence::bures_contrast),
        (ContrastFn::harmonic(), divergence::harmonic_contrast),
        (ContrastFn::sqrt(), divergence::sq_contrast),
        (ContrastFn::variance(), divergence::quantum_info_variance),
    ]
}

#[test]
fn classical_examples() {
    let r = diag(&[0.5, 0.5]);
    let s = diag(&[0.75, 0.25]);
    let h = divergence::contrast(&ContrastFn::relative_entropy(), &r, &s)
        .unwrap()
        .value()
        .unwrap();
    assert!((h - 0.1438410362).abs() < 1e-9);
    let f = divergence::fidelity(&r, &s).unwrap();
    assert!((f - (0.375f64.sqrt() + 0.125f64.sqrt())).abs() < 1e-14);
    assert!((f - 0.9659).abs() < 1e-4);
    let chi = divergence::chi2(&monotone::kmb(), &r, &s)
        .unwrap()
        .value()
        .unwrap();
    let want = (0.25f64 * 0.25) / 0.5 * 2.0;
    assert!((chi - want).abs() < 1e-14);
}

#[test]
fn equal_arguments_give_zero() {
    let mut g = rng(1);
    let rho = random_density(3, 3, &mut g);
    for (cf, closed) in named() {
        assert!(
            divergence::contrast(&cf, &rho, &rho)
                .unwrap()
                .value()
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(
            closed(&rho, &rho).unwrap().value().unwrap().abs() < 1e-12,
            "{}",
            cf.name
        );
    }
    assert!(
        divergence::chi2(&monotone::bures(), &rho, &rho)
            .unwrap()
            .value()
            .unwrap()
            .abs()
            < 1e-14
    );
    assert!((divergence::fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
    assert!(divergence::wy_distance(&rho, &rho).unwrap() < 1e-6);
    assert!(divergence::trace_distance(&rho, &rho).unwrap() < 1e-14);
    let (s, xi) = divergence::chernoff_optimize(&rho, &rho).unwrap();
    assert!(xi.abs() < 1e-12 && (0.0..=1.0).contains(&s));
}

#[test]
fn closed_forms_match_coordinate_formula() {
    let mut g = rng(2);
    for _ in 0..50 {
        let d = 2 + g.random_range(0..3);
        let rho = random_density(d, d, &mut g);
        let sigma = random_density(d, d, &mut g);
        for (cf, closed) in named() {
            let a = divergence::contrast(&cf, &rho, &sigma)
                .unwrap()
                .value()
                .unwrap();
            let b = closed(&rho, &sigma).unwrap().value().unwrap();
            assert!(
                (a - b).abs() < 1e-9 * a.abs().max(1.0),
                "{}: {a} vs {b}",
                cf.name
            );
            assert!(a >= -1e-12);
        }
        for alpha in [-0.5, 0.3, 0.7, 1.5] {
            let a = divergence::contrast(&ContrastFn::alpha(alpha), &rho, &sigma)
                .unwrap()
                .value()
                .unwrap();
            let b = divergence::alpha_divergence(alpha, &rho, &sigma)
                .unwrap()
                .value()
                .unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }
}

use rand::Rng;

#[test]
fn renyi_and_alpha_are_related() {
    let mut g = rng(3);
    for _ in 0..20 {
        let rho = random_density(3, 3, &mut g);
        let sigma = random_density(3, 3, &mut g);
        for alpha in [0.2, 0.5, 0.8] {
            let h = divergence::alpha_divergence(alpha, &rho, &sigma)
                .unwrap()
                .value()
                .unwrap();
            let s = divergence::renyi(1.0 - alpha, &rho, &sigma)
                .unwrap()
                .value()
                .unwrap();
            let rhs = ((-alpha * s).exp() - 1.0) / (alpha * (alpha - 1.0));
            assert!((h - rhs).abs() < 1e-10);
        }
    }
}

#[test]
fn tensoring_with_a_common_state() {
    let mut g = rng(4);
    let rho = random_density(2, 2, &mut g);
    let sigma = random_density(2, 2, &mut g);
    let tau = random_density(2, 2, &mut g);
    for (cf, _) in named() {
        let a = divergence::contrast(&cf, &rho, &sigma)
            .unwrap()
            .value()
            .unwrap();
        let b = divergence::contrast(&cf, &kron(&rho, &tau), &kron(&sigma, &tau))
            .unwrap()
            .value()
            .unwrap();
        assert!((a - b).abs() < 1e-10, "{}", cf.name);
    }
    let (ra, rb) = (random_density(2, 2, &mut g), random_density(3, 3, &mut g));
    let (sa, sb) = (random_density(2, 2, &mut g), random_density(3, 3, &mut g));
    let joint = divergence::relative_entropy(&kron(&ra, &rb), &kron(&sa, &sb))
        .unwrap()
        .value()
        .unwrap();
    let parts = divergence::relative_entropy(&ra, &sa)
        .unwrap()
        .value()
        .unwrap()
        + divergence::relative_entropy(&rb, &sb)
            .unwrap()
            .value()
            .unwrap();
    assert!((joint - parts).abs() < 1e-10);
}

#[test]
fn orthogonal_pure_states() {
    let (a, b) = (pure(2, 0), pure(2, 1));
    assert!((divergence::wy_contrast(&a, &b).unwrap().value().unwrap() - 4.0).abs() < 1e-14);
    assert!((divergence::trace_distance(&a, &b).unwrap() - 2.0).abs() < 1e-14);
    assert!(divergence::relative_entropy(&a, &b).unwrap().is_infinite());
}

#[test]
fn chi2_harmonic_is_twice_a_contrast() {
    let mut g = rng(5);
    let g2 = ContrastFn::new("half-square", |x| 0.5 * (x - 1.0) * (x - 1.0));
    for _ in 0..50 {
        let rho = random_density(3, 3, &mut g);
        let sigma = random_density(3, 3, &mut g);
        let chi = divergence::chi2(&monotone::harmonic(), &rho, &sigma)
            .unwrap()
            .value()
            .unwrap();
        let h = divergence::contrast(&g2, &rho, &sigma)
            .unwrap()
            .value()
            .unwrap();
        assert!((chi - 2.0 * h).abs() < 1e-10 * chi.max(1.0));
    }
}

#[test]
fn chi2_expands_to_the_metric() {
    let mut g = rng(6);
    let pi = random_density(3, 3, &mut g);
    let t = random_tangent(3, &mut g).scale(0.3 * linalg::eigh(&pi).unwrap().min());
    for f in monotone::catalog() {
        let info = fisher::fisher_information(&f, &pi, &t).unwrap();
        let mut prev = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let sigma = &pi + t.scale(eps);
            let chi = divergence::chi2(&f, &pi, &sigma).unwrap().value().unwrap();
            let resid = (chi - eps * eps * info).abs();
            assert!(resid <= 1e-14 + prev);
            prev = resid;
        }
    }
}

#[test]
fn unitary_invariance_and_joint_convexity() {
    let mut g = rng(7);
    for _ in 0..20 {
        let rho = random_density(3, 3, &mut g);
        let sigma = random_density(3, 3, &mut g);
        let u = random_unitary(3, &mut g);
        let rot = |m: &CMat| linalg::hermitize(&(&u * m * u.adjoint()));
        for (cf, _) in named() {
            let a = divergence::contrast(&cf, &rho, &sigma)
                .unwrap()
                .value()
                .unwrap();
            let b = divergence::contrast(&cf, &rot(&rho), &rot(&sigma))
                .unwrap()
                .value()
                .unwrap();
            assert!((a - b).abs() < 1e-10 * a.max(1.0));
        }
        let (r2, s2) = (random_density(3, 3, &mut g), random_density(3, 3, &mut g));
        let l = 0.35;
        let mix = |a: &CMat, b: &CMat| a.scale(l) + b.scale(1.0 - l);
        for (cf, _) in named() {
            let lhs = divergence::contrast(&cf, &mix(&rho, &r2), &mix(&sigma, &s2))
                .unwrap()
                .value()
                .unwrap();
            let rhs = l * divergence::contrast(&cf, &rho, &sigma)
                .unwrap()
                .value()
                .unwrap()
                + (1.0 - l)
                    * divergence::contrast(&cf, &r2, &s2)
                        .unwrap()
                        .value()
                        .unwrap();
            assert!(lhs <= rhs + 1e-9, "{}", cf.name);
        }
    }
}

#[test]
fn distances_and_paths() {
    let mut g = rng(8);
    for _ in 0..1000 {
        let rho = random_density(2, 2, &mut g);
        let sigma = random_density(2, 2, &mut g);
        let db = divergence::bures_distance(&rho, &sigma).unwrap();
        let dw = divergence::wy_distance(&rho, &sigma).unwrap();
        assert!(db <= dw + 1e-12);
        assert!((0.0..=std::f64::consts::PI).contains(&dw));
    }
    let rho = random_density(3, 3, &mut g);
    let sigma = random_density(3, 3, &mut g);
    let p0 = divergence::wy_geodesic_path(&rho, &sigma, 0.0).unwrap();
    let p1 = divergence::wy_geodesic_path(&rho, &sigma, 1.0).unwrap();
    assert!(linalg::frobenius(&(p0 - &rho)) < 1e-10);
    assert!(linalg::frobenius(&(p1 - &sigma)) < 1e-10);
    for k in 1..10 {
        let p = divergence::wy_geodesic_path(&rho, &sigma, k as f64 / 10.0).unwrap();
        linalg::validate_state(&p).unwrap();
    }
    let len = geodesic::path_length(
        &monotone::wigner_yanase(),
        |t| divergence::wy_geodesic_path(&rho, &sigma, t),
        1000,
    )
    .unwrap();
    let d = divergence::wy_distance(&rho, &sigma).unwrap();
    assert!((len - d).abs() < 1e-3 * d);
}

#[test]
fn unnormalized_lengths() {
    assert_eq!(divergence::unnormalized_length(0.0, 1.0, 1.0), 0.0);
    let mut g = rng(9);
    for _ in 0..20 {
        let rho = random_density(2, 2, &mut g);
        let sigma = random_density(2, 2, &mut g);
        let (r0, r1) = (0.7, 1.3);
        let a = rho.scale(r0);
        let b = sigma.scale(r1);
        let wy = divergence::unnormalized_length(
            0.5 * divergence::wy_distance(&rho, &sigma).unwrap(),
            r0,
            r1,
        );
        assert!((wy - geodesic::wy_length_positive(&a, &b).unwrap()).abs() < 1e-9);
        let bu = divergence::unnormalized_length(
            0.5 * divergence::bures_distance(&rho, &sigma).unwrap(),
            r0,
            r1,
        );
        assert!((bu - geodesic::bures_length_positive(&a, &b).unwrap()).abs() < 1e-9);
        // normalized endpoints
        let lb = divergence::unnormalized_length(
            0.5 * divergence::bures_distance(&rho, &sigma).unwrap(),
            1.0,
            1.0,
        );
        assert!((lb - divergence::bures_length(&rho, &sigma).unwrap()).abs() < 1e-12);
        let lw = divergence::unnormalized_length(
            0.5 * divergence::wy_distance(&rho, &sigma).unwrap(),
            1.0,
            1.0,
        );
        let hwy = divergence::wy_contrast(&rho, &sigma)
            .unwrap()
            .value()
            .unwrap();
        assert!((lw * lw - 0.5 * hwy).abs() < 1e-12);
    }
}

#[test]
fn symmetrized_ordering() {
    let mut g = rng(10);
    for d in [2, 3, 4] {
        let rho = random_density(d, d, &mut g);
        let sigma = random_density(d, d, &mut g);
        for (cf, _) in named() {
            let rep = divergence::symmetrized_ordering_check(&cf, &rho, &sigma).unwrap();
            assert!(rep.holds, "{} {:?}", cf.name, rep);
        }
    }
    let rho = random_density(3, 3, &mut g);
    let rep =
        divergence::symmetrized_ordering_check(&ContrastFn::wigner_yanase(), &rho, &rho).unwrap();
    assert!(rep.lower.abs() < 1e-12 && rep.middle.abs() < 1e-12 && rep.upper.abs() < 1e-12);
}

#[test]
fn chernoff_local_form() {
    let mut g = rng(11);
    for _ in 0..20 {
        let rho = random_density(2, 2, &mut g);
        let lmin = linalg::eigh(&rho).unwrap().min();
        let t = random_tangent(2, &mut g).scale(lmin.min(1.0));
        let eps = 1e-2;
        let rho1 = &rho + t.scale(eps);
        let (s, xi) = divergence::chernoff_optimize(&rho, &rho1).unwrap();
        let local = divergence::chernoff_local(&rho, &t, eps).unwrap();
        assert!((xi - local).abs() <= 5.0 * eps.powi(3));
        assert!((s - 0.5).abs() < 1e-2);
    }
}
