//! Seeded random states, tangents, unitaries and channels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{c, eigh, identity, re, CMat, Eigh};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        c(a, b)
    })
}

/// Random density matrix of the given rank from the induced Ginibre measure.
///
/// Full-rank draws are mixed with a `1e-6` share of the maximally mixed state
/// so that no eigenvalue falls below `1e-6 / d`.
pub fn random_density(d: usize, rank: usize, rng: &mut impl Rng) -> CMat {
    let rank = rank.clamp(1, d);
    let g = ginibre(d, rank, rng);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho /= re(tr);
    if rank == d {
        let eps = 1e-6;
        rho = rho.scale(1.0 - eps) + identity(d).scale(eps / d as f64);
    }
    super::hermitize(&rho)
}

/// Random Hermitian traceless matrix with unit Frobenius norm.
pub fn random_tangent(d: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(d, d, rng);
    let mut h = super::hermitize(&g);
    let tr = h.trace().re / d as f64;
    h -= identity(d).scale(tr);
    let n = super::frobenius(&h);
    h / re(n)
}

/// Random Hermitian matrix with unit Frobenius norm.
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> CMat {
    let h = super::hermitize(&ginibre(d, d, rng));
    let n = super::frobenius(&h);
    h / re(n)
}

/// Haar-random isometry `rows × cols` (`rows ≥ cols`).
pub fn random_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let ph = d / n;
            for i in 0..rows {
                q[(i, j)] *= ph;
            }
        }
    }
    q
}

pub fn random_unitary(d: usize, rng: &mut impl Rng) -> CMat {
    random_isometry(d, d, rng)
}

/// Kraus operators of a random channel from a Stinespring isometry.
pub fn random_kraus(d_in: usize, d_out: usize, rank: usize, rng: &mut impl Rng) -> Vec<CMat> {
    let v = random_isometry(d_out * rank, d_in, rng);
    (0..rank)
        .map(|a| v.rows(a * d_out, d_out).into_owned())
        .collect()
}

/// Random state with prescribed spectrum.
pub fn state_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> CMat {
    let u = random_unitary(spectrum.len(), rng);
    let e = Eigh {
        values: spectrum.to_vec(),
        vectors: u,
    };
    e.map(|x| x)
}

/// Random full-rank state whose smallest eigenvalue is at least `floor`.
pub fn random_state_floor(d: usize, floor: f64, rng: &mut impl Rng) -> CMat {
    let rho = random_density(d, d, rng);
    let e = eigh(&rho).expect("hermitian by construction");
    if e.min() >= floor {
        return rho;
    }
    let t = floor * d as f64;
    rho.scale(1.0 - t) + identity(d).scale(t / d as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, validate_full_rank, validate_state};

    #[test]
    fn random_density_is_a_state_of_requested_rank() {
        let mut r = rng(7);
        let rho = random_density(3, 3, &mut r);
        validate_full_rank(&rho).unwrap();
        let low = random_density(4, 2, &mut r);
        let e = validate_state(&low).unwrap();
        assert!(e.values[1].abs() < 1e-12 && e.values[2] > 1e-6);
    }

    #[test]
    fn random_kraus_is_trace_preserving() {
        let mut r = rng(3);
        let ks = random_kraus(2, 3, 2, &mut r);
        let s = ks
            .iter()
            .fold(CMat::zeros(2, 2), |acc, k| acc + k.adjoint() * k);
        assert!(frobenius(&(s - identity(2))) < 1e-13);
    }

    #[test]
    fn same_seed_same_draw() {
        let a = random_tangent(3, &mut rng(11));
        let b = random_tangent(3, &mut rng(11));
        assert_eq!(a, b);
    }
}
