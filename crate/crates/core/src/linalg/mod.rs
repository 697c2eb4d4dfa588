//! Dense complex linear algebra for small Hermitian problems.
//!
//! Operators are `DMatrix<Complex64>`. Superoperators act on column-stacked
//! vectorizations, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

pub mod random;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Eigenvalues below this are treated as zero when deciding support.
pub const RANK_EPS: f64 = 1e-12;
/// Eigenvalues above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;
/// Smallest denominator accepted by [`sandwich_inverse`].
pub const SINGULAR_EPS: f64 = 1e-14;

const HERMITIAN_TOL: f64 = 1e-9;
const DEGENERACY_TOL: f64 = 1e-11;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn maximally_mixed(d: usize) -> CMat {
    identity(d).scale(1.0 / d as f64)
}

/// Builds a diagonal matrix from real entries.
pub fn diag(values: &[f64]) -> CMat {
    let n = values.len();
    CMat::from_fn(n, n, |i, j| {
        if i == j {
            re(values[i])
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Builds a matrix from row-major real entries.
pub fn real_matrix(n: usize, entries: &[f64]) -> CMat {
    CMat::from_fn(n, n, |i, j| re(entries[i * n + j]))
}

/// `|i><j|` in dimension `d`.
pub fn unit(d: usize, i: usize, j: usize) -> CMat {
    let mut m = zeros(d, d);
    m[(i, j)] = re(1.0);
    m
}

pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// Hilbert-Schmidt inner product `Tr[A† B]`.
pub fn hs_inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn ensure_square(a: &CMat) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub fn ensure_dim(a: &CMat, d: usize) -> Result<()> {
    let n = ensure_square(a)?;
    if n != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: n,
        });
    }
    Ok(())
}

/// Largest entry of `A - A†`.
pub fn hermitian_deviation(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `(A + A†)/2`.
pub fn hermitize(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

pub fn ensure_hermitian(a: &CMat) -> Result<()> {
    ensure_square(a)?;
    let scale = frobenius(a).max(1.0);
    let deviation = hermitian_deviation(a);
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues ascend. Each nondegenerate eigenvector has its largest
/// component real and positive; a degenerate eigenspace is spanned by the
/// Gram-Schmidt orthonormalization of the projected standard basis, so
/// repeated calls and equal inputs give identical bases.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Eigh {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> CVec {
        self.vectors.column(i).into_owned()
    }

    /// Rebuilds `Σ f(λ_i) |v_i><v_i|`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMat {
        let d = self.dim();
        let mut scaled = self.vectors.clone();
        for j in 0..d {
            let w = f(self.values[j]);
            for i in 0..d {
                scaled[(i, j)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    /// `V† A V`.
    pub fn to_eigenbasis(&self, a: &CMat) -> CMat {
        self.vectors.adjoint() * a * &self.vectors
    }

    /// `V A V†`.
    pub fn from_eigenbasis(&self, a: &CMat) -> CMat {
        &self.vectors * a * self.vectors.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

pub fn eigh(a: &CMat) -> Result<Eigh> {
    let d = ensure_square(a)?;
    ensure_hermitian(a)?;
    if d == 0 {
        return Ok(Eigh {
            values: vec![],
            vectors: zeros(0, 0),
        });
    }
    let h = hermitize(a);
    let eig = SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or(Error::NonConvergence)?;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::from_fn(d, d, |r, k| eig.eigenvectors[(r, order[k])]);

    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && values[end] - values[end - 1] <= DEGENERACY_TOL * scale {
            end += 1;
        }
        if end - start == 1 {
            fix_phase(&mut vectors, start);
        } else {
            canonical_span(&mut vectors, start, end);
        }
        start = end;
    }
    Ok(Eigh { values, vectors })
}

fn fix_phase(v: &mut CMat, col: usize) {
    let d = v.nrows();
    let mut best = 0;
    let mut best_abs = -1.0;
    for i in 0..d {
        let a = v[(i, col)].norm();
        if a > best_abs * (1.0 + 1e-9) {
            best = i;
            best_abs = a;
        }
    }
    let phase = v[(best, col)] / best_abs;
    let rot = phase.conj();
    for i in 0..d {
        v[(i, col)] *= rot;
    }
}

fn canonical_span(v: &mut CMat, start: usize, end: usize) {
    let d = v.nrows();
    let m = end - start;
    let block = v.columns(start, m).into_owned();
    let mut basis: Vec<CVec> = Vec::with_capacity(m);
    for k in 0..d {
        if basis.len() == m {
            break;
        }
        // projection of e_k onto the eigenspace
        let coeffs = CVec::from_fn(m, |j, _| block[(k, j)].conj());
        let mut w = &block * coeffs;
        for b in &basis {
            let ov = b.dotc(&w);
            w -= b * ov;
        }
        let n = w.norm();
        if n > 1e-6 {
            basis.push(w / re(n));
        }
    }
    for (j, b) in basis.into_iter().enumerate() {
        v.set_column(start + j, &b);
    }
}

/// Checks Hermiticity, positivity and unit trace.
pub fn validate_state(rho: &CMat) -> Result<Eigh> {
    let e = eigh(rho)?;
    if e.min() < -PSD_TOL {
        return Err(Error::NotPositive { min_eig: e.min() });
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::Constraint(format!(
            "state trace {} differs from one",
            tr
        )));
    }
    Ok(e)
}

/// Like [`validate_state`] but also requires full rank.
pub fn validate_full_rank(rho: &CMat) -> Result<Eigh> {
    let e = validate_state(rho)?;
    if e.min() <= RANK_EPS {
        return Err(Error::RankDeficient { min_eig: e.min() });
    }
    Ok(e)
}

/// Solves `σ B + s B ρ = X` in the eigenbases of `σ` (left) and `ρ` (right).
pub fn sandwich_inverse(sigma: &CMat, rho: &CMat, s: f64, x: &CMat) -> Result<CMat> {
    let es = eigh(sigma)?;
    let er = eigh(rho)?;
    sandwich_inverse_eig(&es, &er, s, x)
}

/// [`sandwich_inverse`] with precomputed spectra.
pub fn sandwich_inverse_eig(es: &Eigh, er: &Eigh, s: f64, x: &CMat) -> Result<CMat> {
    let (ds, dr) = (es.dim(), er.dim());
    if x.nrows() != ds || x.ncols() != dr {
        return Err(Error::DimensionMismatch {
            expected: ds,
            found: x.nrows(),
        });
    }
    let mut xp = es.vectors.adjoint() * x * &er.vectors;
    for i in 0..ds {
        for j in 0..dr {
            let den = es.values[i] + s * er.values[j];
            if den.abs() < SINGULAR_EPS {
                return Err(Error::Singular { denominator: den });
            }
            xp[(i, j)] /= den;
        }
    }
    Ok(&es.vectors * xp * er.vectors.adjoint())
}

/// Column-stacking vectorization.
pub fn vec(a: &CMat) -> CVec {
    CVec::from_column_slice(a.as_slice())
}

pub fn unvec(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Traces out one factor of an operator on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace(a: &CMat, d_a: usize, d_b: usize, over: Side) -> Result<CMat> {
    ensure_dim(a, d_a * d_b)?;
    Ok(match over {
        Side::Second => CMat::from_fn(d_a, d_a, |i, j| {
            (0..d_b).map(|k| a[(i * d_b + k, j * d_b + k)]).sum()
        }),
        Side::First => CMat::from_fn(d_b, d_b, |i, j| {
            (0..d_a).map(|k| a[(k * d_b + i, k * d_b + j)]).sum()
        }),
    })
}

/// Superoperator matrix of `X ↦ A X`.
pub fn left_mult(a: &CMat) -> CMat {
    kron(&identity(a.ncols()), a)
}

/// Superoperator matrix of `X ↦ X A`.
pub fn right_mult(a: &CMat) -> CMat {
    kron(&a.transpose(), &identity(a.nrows()))
}

/// Superoperator matrix of `X ↦ A X B`.
pub fn sandwich_super(a: &CMat, b: &CMat) -> CMat {
    kron(&b.transpose(), a)
}

/// Matrix of a linear map on `d_in × d_in` operators, built column by column.
pub fn superop_from_fn(d_in: usize, d_out: usize, f: impl Fn(&CMat) -> CMat) -> CMat {
    let mut s = zeros(d_out * d_out, d_in * d_in);
    for j in 0..d_in {
        for i in 0..d_in {
            let out = f(&unit(d_in, i, j));
            s.set_column(j * d_in + i, &vec(&out));
        }
    }
    s
}

/// Applies a superoperator matrix to an operator.
pub fn apply_super(s: &CMat, x: &CMat) -> CMat {
    let d_out = (s.nrows() as f64).sqrt().round() as usize;
    unvec(&(s * vec(x)), d_out, d_out)
}

pub fn sqrt_psd(e: &Eigh) -> CMat {
    e.map(|x| x.max(0.0).sqrt())
}

pub fn sqrtm(a: &CMat) -> Result<CMat> {
    Ok(sqrt_psd(&eigh(a)?))
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm(a: &CMat) -> Result<f64> {
    Ok(eigh(a)?.values.iter().map(|v| v.abs()).sum())
}

/// Uhlmann fidelity `Tr √(√ρ σ √ρ)`.
pub fn fidelity(rho: &CMat, sigma: &CMat) -> Result<f64> {
    let sr = sqrtm(rho)?;
    let inner = hermitize(&(&sr * sigma * &sr));
    Ok(eigh(&inner)?.values.iter().map(|v| v.max(0.0).sqrt()).sum())
}

/// Orthonormal Hermitian basis `{1/√d, traceless generators}` with `Tr[X_m X_n] = δ_mn`.
pub fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut basis = vec![identity(d).scale(1.0 / (d as f64).sqrt())];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = zeros(d, d);
            s[(j, k)] = re(h);
            s[(k, j)] = re(h);
            basis.push(s);
            let mut a = zeros(d, d);
            a[(j, k)] = c(0.0, -h);
            a[(k, j)] = c(0.0, h);
            basis.push(a);
        }
    }
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut m = zeros(d, d);
        for i in 0..l {
            m[(i, i)] = re(1.0 / norm);
        }
        m[(l, l)] = re(-(l as f64) / norm);
        basis.push(m);
    }
    basis
}

/// Relative Frobenius distance `‖a - b‖ / max(‖b‖, floor)`.
pub fn rel_diff(a: &CMat, b: &CMat, floor: f64) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_eigenspace_uses_standard_basis() {
        let e = eigh(&identity(3)).unwrap();
        assert!(rel_diff(&e.vectors, &identity(3), 1.0) < 1e-14);
    }

    #[test]
    fn eigenvalues_ascend_and_reconstruct() {
        let a = real_matrix(3, &[2.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, -1.0]);
        let e = eigh(&a).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(rel_diff(&e.map(|x| x), &a, 1.0) < 1e-13);
    }

    #[test]
    fn sandwich_inverse_solves_equation() {
        let s = diag(&[0.3, 0.7]);
        let r = real_matrix(2, &[0.6, 0.1, 0.1, 0.4]);
        let x = CMat::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.2));
        let b = sandwich_inverse(&s, &r, 0.8, &x).unwrap();
        let lhs = &s * &b + (&b * &r).scale(0.8);
        assert!(rel_diff(&lhs, &x, 1.0) < 1e-13);
    }

    #[test]
    fn vec_convention_matches_sandwich() {
        let a = CMat::from_fn(2, 2, |i, j| c(i as f64, 1.0 + j as f64));
        let b = CMat::from_fn(2, 2, |i, j| c(j as f64 - i as f64, 0.3));
        let x = CMat::from_fn(2, 2, |i, j| c(0.1 * i as f64, 0.2 * j as f64 + 1.0));
        let direct = &a * &x * &b;
        let via = apply_super(&sandwich_super(&a, &b), &x);
        assert!(rel_diff(&via, &direct, 1.0) < 1e-14);
    }

    #[test]
    fn hermitian_basis_is_orthonormal() {
        let b = hermitian_basis(3);
        assert_eq!(b.len(), 9);
        for (i, x) in b.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let ip = hs_inner(x, y);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - re(want)).norm() < 1e-14);
            }
        }
    }
}
