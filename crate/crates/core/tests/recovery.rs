use infogeom::dynamics::{DepolarizingFamily, DepolarizingKind, Lindbladian, QuantumChannel};
use infogeom::linalg::random::{random_density, random_tangent, random_unitary, rng};
use infogeom::linalg::{self, diag, CMat};
use infogeom::monotone::{self, StandardMonotone};
use infogeom::recovery::{self, petz_map};
use nalgebra::DMatrix;
use rand::Rng;

/// Pairs with `f′ ≤ f` pointwise.
fn ordered_pairs() -> Vec<(StandardMonotone, StandardMonotone)> {
    vec![
        (monotone::sqrt(), monotone::sqrt()),
        (monotone::harmonic(), monotone::bures()),
        (monotone::harmonic(), monotone::kmb()),
        (monotone::kmb(), monotone::bures()),
        (monotone::wigner_yanase(), monotone::bures()),
        (monotone::bures(), monotone::bures()),
    ]
}

fn random_stochastic(d_out: usize, d_in: usize, g: &mut impl Rng) -> DMatrix<f64> {
    let mut t = DMatrix::from_fn(d_out, d_in, |_, _| g.random_range(0.05..1.0));
    for j in 0..d_in {
        let s: f64 = t.column(j).sum();
        t.column_mut(j).scale_mut(1.0 / s);
    }
    t
}

fn random_probs(d: usize, g: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| g.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

#[test]
fn identity_channel_recovers_itself() {
    let mut g = rng(1);
    let pi = random_density(3, 3, &mut g);
    let id = QuantumChannel::identity(3);
    for f in monotone::catalog() {
        let rec = petz_map(&f, &f, &pi, &id).unwrap();
        assert!(
            linalg::frobenius(&(&rec.map.superop - linalg::identity(9))) < 1e-12,
            "{}",
            f.name
        );
        let spec = recovery::recovery_spectrum(&f, &f, &pi, &id).unwrap();
        assert!(spec.eigenvalues.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(recovery::involution_check(&f, &f, &pi, &id).unwrap() < 1e-12);
    }
}

#[test]
fn prior_is_retrieved_and_duality_holds() {
    let mut g = rng(2);
    let cat = monotone::catalog();
    for k in 0..30 {
        let pi = random_density(2, 2, &mut g);
        let phi = QuantumChannel::random(2, 2 + k % 2, 2, &mut g);
        let fp = &cat[k % cat.len()];
        let f = &cat[(k * 7 + 3) % cat.len()];
        let rec = petz_map(fp, f, &pi, &phi).unwrap();
        let back = rec.map.apply(&phi.apply(&pi).unwrap()).unwrap();
        assert!(linalg::frobenius(&(back - &pi)) < 1e-10);
        // trace preserving
        let dual = rec.map.adjoint().apply(&linalg::identity(2)).unwrap();
        assert!(linalg::frobenius(&(dual - linalg::identity(phi.d_out))) < 1e-10);
        let a = random_tangent(2, &mut g);
        let b = random_tangent(2, &mut g);
        assert!(recovery::duality_residual(fp, f, &pi, &phi, &a, &b).unwrap() < 1e-10);
    }
}

#[test]
fn classical_channels_reduce_to_bayes() {
    let mut g = rng(3);
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let (d_in, d_out) = (2 + k % 2, 2 + (k / 2) % 2);
        let t = random_stochastic(d_out, d_in, &mut g);
        let p = random_probs(d_in, &mut g);
        let phi = QuantumChannel::classical(&t).unwrap();
        let q: Vec<f64> = (0..d_out)
            .map(|j| (0..d_in).map(|i| t[(j, i)] * p[i]).sum())
            .collect();
        let cat = monotone::catalog();
        let rec = petz_map(
            &cat[k % cat.len()],
            &cat[(k + 3) % cat.len()],
            &diag(&p),
            &phi,
        )
        .unwrap();
        for j in 0..d_out {
            let img = rec.map.apply(&linalg::unit(d_out, j, j)).unwrap();
            for i in 0..d_in {
                let bayes = t[(j, i)] * p[i] / q[j];
                worst = worst.max((img[(i, i)].re - bayes).abs());
            }
        }
    }
    assert!(worst < 1e-12, "{worst:e}");
}

#[test]
fn square_root_pair_is_cp() {
    let mut g = rng(4);
    for _ in 0..10 {
        let pi = random_density(2, 2, &mut g);
        let phi = QuantumChannel::random(2, 2, 2, &mut g);
        let sq = monotone::sqrt();
        let rec = petz_map(&sq, &sq, &pi, &phi).unwrap();
        assert!(rec.factors_cp && rec.choi_min_eig > -1e-10);
    }
}

#[test]
fn spectra_lie_in_the_unit_interval() {
    let mut g = rng(5);
    let pairs = ordered_pairs();
    for k in 0..50 {
        let pi = random_density(2, 2, &mut g);
        let phi = QuantumChannel::random(2, 2, 1 + k % 3, &mut g);
        let (fp, f) = &pairs[k % pairs.len()];
        let s = recovery::recovery_spectrum(fp, f, &pi, &phi).unwrap();
        assert!(s.within_unit_interval(1e-9), "{:?}", s.eigenvalues);
        assert!(s.contains_one && s.imag_residue < 1e-9 && s.prior_residual < 1e-10);
    }
    let sq = monotone::sqrt();
    let dep = QuantumChannel::depolarizing(2, 0.5);
    let s = recovery::recovery_spectrum(&sq, &sq, &linalg::maximally_mixed(2), &dep).unwrap();
    // identity part survives, traceless parts shrink by (1−λ)²
    let mut want = vec![0.25, 0.25, 0.25, 1.0];
    want.sort_by(f64::total_cmp);
    for (a, b) in s.eigenvalues.iter().zip(&want) {
        assert!((a - b).abs() < 1e-12);
    }
    let ad = QuantumChannel::amplitude_damping(0.4).unwrap();
    let pi = random_density(2, 2, &mut g);
    let s =
        recovery::recovery_spectrum(&monotone::harmonic(), &monotone::bures(), &pi, &ad).unwrap();
    assert!(s.within_unit_interval(1e-9));
    // reversed order is refused, and the unchecked variant may leave [0, 1]
    assert!(
        recovery::recovery_spectrum(&monotone::bures(), &monotone::harmonic(), &pi, &ad).is_err()
    );
    let s =
        recovery::recovery_spectrum_unchecked(&monotone::bures(), &monotone::harmonic(), &pi, &ad)
            .unwrap();
    eprintln!("reversed pair spectrum {:?}", s.eigenvalues);
}

#[test]
fn involution_and_composition() {
    let mut g = rng(6);
    let sq = monotone::sqrt();
    let pi = random_density(2, 2, &mut g);
    let phi = QuantumChannel::random(2, 2, 2, &mut g);
    assert!(recovery::involution_check(&sq, &sq, &pi, &phi).unwrap() < 1e-9);
    assert!(
        recovery::involution_check(&monotone::bures(), &monotone::harmonic(), &pi, &phi).unwrap()
            < 1e-9
    );
    // classical double Bayes returns the original conditionals
    let t = random_stochastic(3, 2, &mut g);
    let p = random_probs(2, &mut g);
    let cl = QuantumChannel::classical(&t).unwrap();
    assert!(
        recovery::involution_check(&monotone::kmb(), &monotone::kmb(), &diag(&p), &cl).unwrap()
            < 1e-9
    );

    for fmid in [monotone::sqrt(), monotone::bures(), monotone::harmonic()] {
        let s = QuantumChannel::random(2, 2, 2, &mut g);
        let ts = QuantumChannel::random(2, 2, 3, &mut g);
        let r = recovery::composition_check(
            &monotone::bures(),
            &fmid,
            &monotone::harmonic(),
            &pi,
            &s,
            &ts,
        )
        .unwrap();
        assert!(r < 1e-9, "{r:e}");
    }
    let id = QuantumChannel::identity(2);
    assert!(recovery::composition_check(&sq, &sq, &sq, &pi, &id, &id).unwrap() < 1e-12);
    let t2 = random_stochastic(2, 3, &mut g);
    let c2 = QuantumChannel::classical(&t2).unwrap();
    let r = recovery::composition_check(&sq, &monotone::kmb(), &sq, &diag(&p), &cl, &c2).unwrap();
    assert!(r < 1e-9);
}

#[test]
fn rotated_petz_family() {
    let mut g = rng(7);
    let sigma = random_density(2, 2, &mut g);
    let phi = QuantumChannel::random(2, 2, 2, &mut g);
    let sq = monotone::sqrt();
    let r0 = recovery::rotated_petz(&phi, &sigma, 0.0).unwrap();
    let p = petz_map(&sq, &sq, &sigma, &phi).unwrap();
    assert!(linalg::frobenius(&(&r0.map.superop - &p.map.superop)) < 1e-10);
    let r = recovery::rotated_petz(&phi, &sigma, 0.7).unwrap();
    assert!(r.choi_min_eig > -1e-10);
    let dual = r.map.adjoint().apply(&linalg::identity(2)).unwrap();
    assert!(linalg::frobenius(&(dual - linalg::identity(2))) < 1e-10);
    // unital channel with maximally mixed reference: no dependence on t
    let u = QuantumChannel::unitary(&random_unitary(2, &mut g)).unwrap();
    let mixed = linalg::maximally_mixed(2);
    let a = recovery::rotated_petz(&u, &mixed, 0.0).unwrap();
    let b = recovery::rotated_petz(&u, &mixed, 1.3).unwrap();
    assert!(linalg::frobenius(&(&a.map.superop - &b.map.superop)) < 1e-12);
}

#[test]
fn chi2_chain() {
    let mut g = rng(8);
    let pairs = ordered_pairs();
    for k in 0..300 {
        let rho = random_density(2, 2, &mut g);
        let sigma = random_density(2, 2, &mut g);
        let phi = QuantumChannel::random(2, 2, 1 + k % 3, &mut g);
        let (fp, f) = &pairs[k % pairs.len()];
        let gap = recovery::chi2_recovery_gap(fp, f, &rho, &sigma, &phi).unwrap();
        assert!(gap.holds(1e-9), "{gap:?}");
    }
    let rho = random_density(2, 2, &mut g);
    let sigma = random_density(2, 2, &mut g);
    let sq = monotone::sqrt();
    let id = QuantumChannel::identity(2);
    let gap = recovery::chi2_recovery_gap(&sq, &sq, &rho, &sigma, &id).unwrap();
    assert!(gap.lhs.abs() < 1e-12 && gap.mid.abs() < 1e-12 && gap.rhs.abs() < 1e-12);
    // equal χ² under a unitary forces perfect recovery of the difference
    let u = QuantumChannel::unitary(&random_unitary(2, &mut g)).unwrap();
    let gap = recovery::chi2_recovery_gap(&monotone::bures(), &monotone::bures(), &rho, &sigma, &u)
        .unwrap();
    assert!(gap.lhs.abs() < 1e-9 && gap.mid < 1e-9 && gap.rhs < 1e-9);
}

#[test]
fn petz_supremum() {
    let mut g = rng(9);
    let pairs: Vec<(StandardMonotone, StandardMonotone)> = vec![
        (monotone::harmonic(), monotone::bures()),
        (monotone::sqrt(), monotone::bures()),
        (monotone::harmonic(), monotone::sqrt()),
        (monotone::sqrt(), monotone::sqrt()),
    ];
    for _ in 0..30 {
        let pi = random_density(2, 2, &mut g);
        let phi = QuantumChannel::random(2, 2, 2, &mut g);
        let rep = recovery::petz_supremum_check(&pi, &phi, &pairs).unwrap();
        assert!(rep.holds, "{:?}", rep.min_gaps);
        assert!(rep.min_gaps[3].abs() < 1e-12);
    }
    let t = random_stochastic(2, 2, &mut g);
    let p = random_probs(2, &mut g);
    let cl = QuantumChannel::classical(&t).unwrap();
    let rep = recovery::petz_supremum_check(&diag(&p), &cl, &pairs).unwrap();
    assert!(rep.min_gaps.iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn retrodiction_tracks_fisher_expansion() {
    let delta: CMat = random_tangent(2, &mut rng(10)).scale(1e-2);
    let pi = linalg::maximally_mixed(2);
    let sq = monotone::sqrt();
    let nm = DepolarizingFamily::new(DepolarizingKind::NonMarkov);
    let s = recovery::retrodiction_trajectory(&sq, &sq, &pi, &delta, &nm, 3.0, 1e-2).unwrap();
    assert!(s.expansion.iter().any(|&e| e));
    assert!(s.implication_failures().is_empty());
    // the remainder is cubic in |δρ| ~ 1e-2
    for (q, d) in s.quadratic.iter().zip(&s.divergence) {
        assert!((q - d).abs() <= 1e-2 * q.max(1e-12) + 1e-12, "{q} {d}");
    }
    let m = DepolarizingFamily::new(DepolarizingKind::Markov);
    let s = recovery::retrodiction_trajectory(&sq, &sq, &pi, &delta, &m, 3.0, 1e-2).unwrap();
    assert!(s.quadratic.windows(2).all(|w| w[1] >= w[0]));
    let zero = CMat::zeros(2, 2);
    let s = recovery::retrodiction_trajectory(&sq, &sq, &pi, &zero, &m, 1.0, 0.1).unwrap();
    assert!(s
        .divergence
        .iter()
        .chain(&s.quadratic)
        .all(|v| v.abs() < 1e-15));
    // a generator without closed form goes through the integrated propagator
    let ad = Lindbladian::amplitude_damping(0.5);
    let pi = random_density(2, 2, &mut rng(11));
    let s = recovery::retrodiction_trajectory(
        &monotone::harmonic(),
        &monotone::bures(),
        &pi,
        &delta,
        &ad,
        1.0,
        1e-2,
    )
    .unwrap();
    assert!(!s.expansion.iter().any(|&e| e));
}
