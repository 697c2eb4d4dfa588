//! Quantum Fisher operators `J_f|π`, their inverses, and the induced metrics.
//!
//! In the eigenbasis of `π` the operator is a Schur multiplier:
//! `J_f[|i><j|] = m_f(π_i, π_j) |i><j|`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Eigh};
use crate::monotone::StandardMonotone;

#[derive(Clone, Debug)]
pub struct FisherOperator {
    pub base_point: CMat,
    pub spectral: Eigh,
    pub f: StandardMonotone,
    /// `K[i][j] = b f(a/b)` with `a = π_i`, `b = π_j`.
    pub kernel: DMatrix<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CpReport {
    pub cp: bool,
    pub min_eig: f64,
    pub inverse_cp: bool,
    pub inverse_min_eig: f64,
}

impl FisherOperator {
    pub fn new(f: &StandardMonotone, pi: &CMat) -> Result<Self> {
        let spectral = linalg::validate_full_rank(pi)?;
        Self::from_spectrum(f, pi.clone(), spectral)
    }

    /// Builds from a positive spectrum without checking the trace.
    pub fn from_spectrum(f: &StandardMonotone, base_point: CMat, spectral: Eigh) -> Result<Self> {
        if spectral.min() <= linalg::RANK_EPS {
            return Err(Error::RankDeficient {
                min_eig: spectral.min(),
            });
        }
        let d = spectral.dim();
        let mut kernel = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                kernel[(i, j)] = f.mean(spectral.values[i], spectral.values[j])?;
            }
        }
        Ok(Self {
            base_point,
            spectral,
            f: f.clone(),
            kernel,
        })
    }

    pub fn dim(&self) -> usize {
        self.spectral.dim()
    }

    fn schur(&self, a: &CMat, w: impl Fn(f64) -> f64) -> Result<CMat> {
        linalg::ensure_dim(a, self.dim())?;
        let mut ap = self.spectral.to_eigenbasis(a);
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                ap[(i, j)] *= w(self.kernel[(i, j)]);
            }
        }
        Ok(self.spectral.from_eigenbasis(&ap))
    }

    pub fn apply(&self, a: &CMat) -> Result<CMat> {
        self.schur(a, |k| k)
    }

    pub fn apply_inverse(&self, a: &CMat) -> Result<CMat> {
        self.schur(a, |k| 1.0 / k)
    }

    /// `J_f^p` for real `p`, used for symmetrized similarity transforms.
    pub fn apply_power(&self, a: &CMat, p: f64) -> Result<CMat> {
        self.schur(a, |k| k.powf(p))
    }

    /// `Tr[A† J_f⁻¹[B]]`.
    pub fn inner(&self, a: &CMat, b: &CMat) -> Result<linalg::C64> {
        linalg::ensure_dim(a, self.dim())?;
        linalg::ensure_dim(b, self.dim())?;
        let ap = self.spectral.to_eigenbasis(a);
        let bp = self.spectral.to_eigenbasis(b);
        let d = self.dim();
        let mut acc = linalg::re(0.0);
        for i in 0..d {
            for j in 0..d {
                acc += ap[(i, j)].conj() * bp[(i, j)] / self.kernel[(i, j)];
            }
        }
        Ok(acc)
    }

    /// Fisher scalar product `K_{f,π}(A, B)` for Hermitian arguments.
    pub fn scalar_product(&self, a: &CMat, b: &CMat) -> Result<f64> {
        Ok(self.inner(a, b)?.re)
    }

    pub fn information(&self, delta: &CMat) -> Result<f64> {
        self.scalar_product(delta, delta)
    }

    /// Matrix of `J_f` (or its inverse) acting on column-stacked operators.
    pub fn as_superoperator(&self, inverse: bool) -> CMat {
        let d = self.dim();
        linalg::superop_from_fn(d, d, |x| {
            if inverse {
                self.apply_inverse(x).expect("dimension fixed")
            } else {
                self.apply(x).expect("dimension fixed")
            }
        })
    }

    /// Complete positivity of `J_f` and `J_f⁻¹` via the Schur kernel.
    pub fn is_cp(&self) -> CpReport {
        let min_eig = |k: DMatrix<f64>| {
            let e = nalgebra::SymmetricEigen::new(k);
            e.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let fwd = min_eig(self.kernel.clone());
        let inv = min_eig(self.kernel.map(|k| 1.0 / k));
        let scale = self.kernel.amax();
        CpReport {
            cp: fwd >= -1e-10 * scale.max(1.0),
            min_eig: fwd,
            inverse_cp: inv >= -1e-10 * (1.0 / self.spectral.min()).max(1.0),
            inverse_min_eig: inv,
        }
    }
}

pub fn scalar_product(f: &StandardMonotone, pi: &CMat, a: &CMat, b: &CMat) -> Result<f64> {
    FisherOperator::new(f, pi)?.scalar_product(a, b)
}

pub fn fisher_information(f: &StandardMonotone, pi: &CMat, delta: &CMat) -> Result<f64> {
    FisherOperator::new(f, pi)?.information(delta)
}

/// Generalized logarithmic derivative `L_f = J_f⁻¹|π[δρ]`.
pub fn sld(f: &StandardMonotone, pi: &CMat, delta: &CMat) -> Result<CMat> {
    FisherOperator::new(f, pi)?.apply_inverse(delta)
}

/// Default step for θ-derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Reciprocal Fisher information of a one-parameter family at `θ0`.
pub fn cramer_rao_bound(
    f: &StandardMonotone,
    family: impl Fn(f64) -> CMat,
    theta0: f64,
    h: f64,
) -> Result<f64> {
    let rho = family(theta0);
    let d = rho.nrows();
    let mut drho = (family(theta0 + h) - family(theta0 - h)) / linalg::re(2.0 * h);
    drho = linalg::hermitize(&drho);
    let tr = drho.trace().re / d as f64;
    drho -= linalg::identity(d).scale(tr);
    let info = fisher_information(f, &rho, &drho)?;
    if info < 1e-14 {
        return Err(Error::Unidentifiable);
    }
    Ok(1.0 / info)
}

/// Thermal state `e^{-βH}/Z` and `log Z`.
pub fn thermal_state(h: &CMat, beta: f64) -> Result<(CMat, f64)> {
    let e = linalg::eigh(h)?;
    let shift = e.min();
    let z: f64 = e.values.iter().map(|&v| (-beta * (v - shift)).exp()).sum();
    let pi = e.map(|v| (-beta * (v - shift)).exp() / z);
    Ok((pi, z.ln() - beta * shift))
}

/// Mixed second derivative of `log Tr e^{-β(H + xA + yB)}` at the origin,
/// evaluated through the logarithmic-mean Fisher operator.
pub fn log_partition_hessian(h: &CMat, a: &CMat, b: &CMat, beta: f64) -> Result<f64> {
    if beta <= 0.0 {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            range: "(0, inf)",
        });
    }
    let (pi, _) = thermal_state(h, beta)?;
    let d = pi.nrows();
    let center = |x: &CMat| x - linalg::identity(d) * (x * &pi).trace();
    let (da, db) = (center(a), center(b));
    let j = FisherOperator::new(&crate::monotone::kmb(), &pi)?;
    let jb = j.apply(&db)?;
    Ok(beta * beta * (&da * jb).trace().re)
}
