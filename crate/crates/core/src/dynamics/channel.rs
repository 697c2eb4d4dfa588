//! Linear maps on operators, stored as column-stacked superoperators with
//! an optional Kraus list.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, random, CMat, PSD_TOL};

#[derive(Clone, Debug)]
pub struct QuantumChannel {
    pub d_in: usize,
    pub d_out: usize,
    /// `vec(Φ(X)) = superop · vec(X)`.
    pub superop: CMat,
    pub kraus: Option<Vec<CMat>>,
    choi: CMat,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CptpReport {
    /// `‖Φ†(1) − 1‖_F`.
    pub tp_residual: f64,
    pub choi_min_eig: f64,
    pub trace_preserving: bool,
    pub completely_positive: bool,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.trace_preserving && self.completely_positive
    }
}

fn choi_of(d_in: usize, d_out: usize, s: &CMat) -> CMat {
    let mut choi = CMat::zeros(d_in * d_out, d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_in {
            let out = linalg::apply_super(s, &linalg::unit(d_in, i, j));
            choi.view_mut((i * d_out, j * d_out), (d_out, d_out))
                .copy_from(&out);
        }
    }
    choi
}

impl QuantumChannel {
    pub fn from_superop(d_in: usize, d_out: usize, superop: CMat) -> Result<Self> {
        if superop.nrows() != d_out * d_out || superop.ncols() != d_in * d_in {
            return Err(Error::DimensionMismatch {
                expected: d_out * d_out,
                found: superop.nrows(),
            });
        }
        let choi = choi_of(d_in, d_out, &superop);
        Ok(Self {
            d_in,
            d_out,
            superop,
            kraus: None,
            choi,
        })
    }

    pub fn from_kraus(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::Schema("empty Kraus list".into()))?;
        let (d_out, d_in) = (first.nrows(), first.ncols());
        let mut s = CMat::zeros(d_out * d_out, d_in * d_in);
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::DimensionMismatch {
                    expected: d_out,
                    found: k.nrows(),
                });
            }
            s += linalg::sandwich_super(k, &k.adjoint());
        }
        let mut ch = Self::from_superop(d_in, d_out, s)?;
        ch.kraus = Some(kraus);
        Ok(ch)
    }

    /// Generic map given as a closure.
    pub fn from_fn(d_in: usize, d_out: usize, f: impl Fn(&CMat) -> CMat) -> Result<Self> {
        Self::from_superop(d_in, d_out, linalg::superop_from_fn(d_in, d_out, f))
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(vec![linalg::identity(d)]).expect("nonempty")
    }

    pub fn unitary(u: &CMat) -> Result<Self> {
        linalg::ensure_square(u)?;
        Self::from_kraus(vec![u.clone()])
    }

    /// Transposition in the computational basis: positive, trace preserving,
    /// not completely positive.
    pub fn transpose(d: usize) -> Self {
        Self::from_fn(d, d, |x| x.transpose()).expect("square")
    }

    /// `ρ ↦ (1−λ)ρ + λ Tr[ρ] 1/d`.
    pub fn depolarizing(d: usize, lambda: f64) -> Self {
        let mixed = linalg::maximally_mixed(d);
        Self::from_fn(d, d, |x| {
            x.scale(1.0 - lambda) + mixed.scale(lambda) * linalg::trace(x)
        })
        .expect("square")
    }

    /// Qubit amplitude damping towards `|0⟩` with decay probability `p`.
    pub fn amplitude_damping(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                range: "[0, 1]",
            });
        }
        let k0 = linalg::real_matrix(2, &[1.0, 0.0, 0.0, (1.0 - p).sqrt()]);
        let k1 = linalg::real_matrix(2, &[0.0, p.sqrt(), 0.0, 0.0]);
        Self::from_kraus(vec![k0, k1])
    }

    /// Classical stochastic matrix `T[i][j] = P(i | j)` acting on diagonals
    /// and dephasing everything else.
    pub fn classical(t: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let (d_out, d_in) = t.shape();
        let mut kraus = Vec::new();
        for i in 0..d_out {
            for j in 0..d_in {
                if t[(i, j)] < 0.0 {
                    return Err(Error::Constraint(format!(
                        "negative transition probability at ({i}, {j})"
                    )));
                }
                if t[(i, j)] > 0.0 {
                    let mut k = CMat::zeros(d_out, d_in);
                    k[(i, j)] = linalg::re(t[(i, j)].sqrt());
                    kraus.push(k);
                }
            }
        }
        Self::from_kraus(kraus)
    }

    pub fn random(d_in: usize, d_out: usize, kraus_rank: usize, rng: &mut impl Rng) -> Self {
        Self::from_kraus(random::random_kraus(d_in, d_out, kraus_rank, rng)).expect("valid Kraus")
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        linalg::ensure_dim(rho, self.d_in)?;
        Ok(linalg::apply_super(&self.superop, rho))
    }

    /// Hilbert-Schmidt adjoint `Φ†`, which maps outputs back to inputs.
    pub fn adjoint(&self) -> Self {
        let mut ch =
            Self::from_superop(self.d_out, self.d_in, self.superop.adjoint()).expect("shape");
        ch.kraus = self
            .kraus
            .as_ref()
            .map(|ks| ks.iter().map(|k| k.adjoint()).collect());
        ch
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<Self> {
        if first.d_out != self.d_in {
            return Err(Error::DimensionMismatch {
                expected: self.d_in,
                found: first.d_out,
            });
        }
        Self::from_superop(first.d_in, self.d_out, &self.superop * &first.superop)
    }

    /// `Φ ⊗ 𝕀_{d_anc}`, with the channel acting on the first factor.
    pub fn tensor_with_identity(&self, d_anc: usize) -> Self {
        if let Some(ks) = &self.kraus {
            let id = linalg::identity(d_anc);
            return Self::from_kraus(ks.iter().map(|k| linalg::kron(k, &id)).collect())
                .expect("nonempty");
        }
        let (di, dout) = (self.d_in, self.d_out);
        Self::from_fn(di * d_anc, dout * d_anc, |x| {
            let mut out = CMat::zeros(dout * d_anc, dout * d_anc);
            for k in 0..d_anc {
                for l in 0..d_anc {
                    let block = CMat::from_fn(di, di, |i, j| x[(i * d_anc + k, j * d_anc + l)]);
                    let img = linalg::apply_super(&self.superop, &block);
                    for i in 0..dout {
                        for j in 0..dout {
                            out[(i * d_anc + k, j * d_anc + l)] = img[(i, j)];
                        }
                    }
                }
            }
            out
        })
        .expect("shape")
    }

    /// Unnormalized Choi matrix `Σ |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`.
    pub fn choi(&self) -> &CMat {
        &self.choi
    }

    pub fn is_cptp(&self) -> CptpReport {
        let dual = linalg::apply_super(&self.superop.adjoint(), &linalg::identity(self.d_out));
        let tp_residual = linalg::frobenius(&(dual - linalg::identity(self.d_in)));
        let choi_min_eig = linalg::eigh(&linalg::hermitize(&self.choi))
            .map(|e| e.min())
            .unwrap_or(f64::NAN);
        CptpReport {
            tp_residual,
            choi_min_eig,
            trace_preserving: tp_residual < 1e-10,
            completely_positive: choi_min_eig >= -PSD_TOL,
        }
    }

    /// Most negative output eigenvalue over random pure and mixed inputs.
    pub fn is_positive_probe(&self, trials: usize, rng: &mut impl Rng) -> f64 {
        let mut worst = f64::INFINITY;
        for k in 0..trials {
            let rank = if k % 2 == 0 { 1 } else { self.d_in };
            let rho = random::random_density(self.d_in, rank, rng);
            let out = linalg::hermitize(&self.apply(&rho).expect("dimension"));
            if let Ok(e) = linalg::eigh(&out) {
                worst = worst.min(e.min());
            }
        }
        worst
    }

    /// Kraus operators recovered from the Choi matrix (CP maps only).
    pub fn kraus_from_choi(&self) -> Result<Vec<CMat>> {
        let e = linalg::eigh(&linalg::hermitize(&self.choi))?;
        if e.min() < -PSD_TOL {
            return Err(Error::NotPositive { min_eig: e.min() });
        }
        let mut out = Vec::new();
        for (k, &lam) in e.values.iter().enumerate() {
            if lam <= linalg::RANK_EPS {
                continue;
            }
            let v = e.vector(k);
            let m = CMat::from_fn(self.d_out, self.d_in, |a, i| {
                v[i * self.d_out + a] * lam.sqrt()
            });
            out.push(m);
        }
        Ok(out)
    }
}
