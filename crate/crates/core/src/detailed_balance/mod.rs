//! Detailed balance of GKLS generators with respect to a full-rank state.
//!
//! Two notions are compared. The correlation product `Tr[A B π]` gives the
//! classic condition on the Heisenberg generator; the Fisher products
//! `K_{f,π}` give a family of conditions on the Schrödinger generator, one per
//! standard monotone. Generators are passed as superoperator matrices so that
//! maps containing transposition terms can be analysed as well.

pub mod structural;

use serde::Serialize;

pub use structural::{
    build_db_lindbladian, build_fisher_db_extra, fisher_not_alicki_qubit, structural_decompose,
    DbGenerator, ModularFrame, Sector, SectorJump, StructuralDecomposition, StructuralTerm,
};

use crate::dynamics::lindblad::canonical_form;
use crate::error::{Error, Result};
use crate::fisher::FisherOperator;
use crate::linalg::{self, c, CMat};
use crate::monotone::{self, StandardMonotone};

/// Residual threshold shared by all verdicts, relative to `‖G‖_F`.
pub const DB_TOL: f64 = 1e-8;

/// Side length `d` of the operators a `d² × d²` superoperator acts on.
pub fn superop_dim(g: &CMat) -> Result<usize> {
    let n = linalg::ensure_square(g)?;
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::Schema(format!(
            "superoperator size {n} is not a perfect square"
        )));
    }
    Ok(d)
}

/// `Õ = 𝓙⁻¹ O† 𝓙` with `𝓙 = ℝ_π`.
pub fn alicki_adjoint(g: &CMat, pi: &CMat) -> Result<CMat> {
    let d = superop_dim(g)?;
    linalg::ensure_dim(pi, d)?;
    let e = linalg::validate_full_rank(pi)?;
    let r = linalg::right_mult(pi);
    let r_inv = linalg::right_mult(&e.map(|x| 1.0 / x));
    Ok(r_inv * g.adjoint() * r)
}

/// `Õ_f = J_f O† J_f⁻¹`.
pub fn fisher_adjoint(g: &CMat, pi: &CMat, f: &StandardMonotone) -> Result<CMat> {
    let d = superop_dim(g)?;
    linalg::ensure_dim(pi, d)?;
    let j = FisherOperator::new(f, pi)?;
    Ok(fisher_adjoint_with(g, &j))
}

fn fisher_adjoint_with(g: &CMat, j: &FisherOperator) -> CMat {
    j.as_superoperator(false) * g.adjoint() * j.as_superoperator(true)
}

/// `‖[G, 𝕃_π ℝ_π⁻¹]‖_F`.
pub fn modular_commutator_norm(g: &CMat, pi: &CMat) -> Result<f64> {
    let d = superop_dim(g)?;
    linalg::ensure_dim(pi, d)?;
    let e = linalg::validate_full_rank(pi)?;
    let modular = linalg::left_mult(pi) * linalg::right_mult(&e.map(|x| 1.0 / x));
    Ok(linalg::frobenius(&(g * &modular - &modular * g)))
}

/// Hamiltonian part `𝓤 = −i[H, ·]` and dissipator `G − 𝓤` of a generator,
/// with `H` taken from the canonical diagonal form.
pub fn split_generator(g: &CMat) -> Result<(CMat, CMat, CMat)> {
    let d = superop_dim(g)?;
    let can = canonical_form(g, d)?;
    let u = (linalg::left_mult(&can.h) - linalg::right_mult(&can.h)) * c(0.0, -1.0);
    let diss = g - &u;
    Ok((can.h, u, diss))
}

/// Residuals of the three adjointness conditions, relative to `‖G‖_F`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjointResiduals {
    /// `‖[O, Õ]‖`.
    pub normality: f64,
    /// `‖Ũ + U‖`.
    pub skew: f64,
    /// `‖D̃ − D‖`.
    pub self_adjoint: f64,
    pub holds: bool,
}

impl AdjointResiduals {
    fn new(normality: f64, skew: f64, self_adjoint: f64) -> Self {
        let holds = normality < DB_TOL && skew < DB_TOL && self_adjoint < DB_TOL;
        Self {
            normality,
            skew,
            self_adjoint,
            holds,
        }
    }

    pub fn max(&self) -> f64 {
        self.normality.max(self.skew).max(self.self_adjoint)
    }
}

fn residuals(g: &CMat, u: &CMat, diss: &CMat, adj: impl Fn(&CMat) -> CMat) -> AdjointResiduals {
    let scale = linalg::frobenius(g);
    if scale == 0.0 {
        return AdjointResiduals::new(0.0, 0.0, 0.0);
    }
    let gt = adj(g);
    AdjointResiduals::new(
        linalg::frobenius(&(g * &gt - &gt * g)) / (scale * scale),
        linalg::frobenius(&(adj(u) + u)) / scale,
        linalg::frobenius(&(adj(diss) - diss)) / scale,
    )
}

/// Conditions on the Heisenberg generator `G†` under the product `Tr[A B π]`.
pub fn is_alicki_db(g: &CMat, pi: &CMat) -> Result<AdjointResiduals> {
    let (_, u, diss) = split_generator(g)?;
    let d = superop_dim(g)?;
    linalg::ensure_dim(pi, d)?;
    let e = linalg::validate_full_rank(pi)?;
    let r = linalg::right_mult(pi);
    let r_inv = linalg::right_mult(&e.map(|x| 1.0 / x));
    let heis = |m: &CMat| m.adjoint();
    Ok(residuals(&heis(g), &heis(&u), &heis(&diss), |m| {
        &r_inv * m.adjoint() * &r
    }))
}

/// Monotones standing in for "every standard monotone".
pub fn default_fisher_sample() -> Vec<StandardMonotone> {
    vec![
        monotone::bures(),
        monotone::harmonic(),
        monotone::sqrt(),
        monotone::kmb(),
        monotone::wigner_yanase(),
        monotone::alpha(0.3).expect("in range"),
        monotone::extreme_point(0.4).expect("in range"),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct FisherSampleResidual {
    pub monotone: String,
    #[serde(flatten)]
    pub residuals: AdjointResiduals,
}

/// Exact test of the Fisher conditions for every monotone at once.
///
/// In the eigenbasis of `π` the coordinate `c = ⟨γ|D(|α⟩⟨β|)|δ⟩` of the
/// dissipator may be nonzero only when `π_α/π_β` equals `π_γ/π_δ` or its
/// inverse, and then `c π_β = c' π_δ` (equal ratios) or `c π_α = c' π_δ`
/// (inverse ratios), where `c' = ⟨β|D(|δ⟩⟨γ|)|α⟩`.
#[derive(Clone, Debug, Serialize)]
pub struct SelectionRuleReport {
    /// Largest coordinate outside the allowed pattern, relative to the largest coordinate.
    pub forbidden: f64,
    /// Largest violation of the ratio relations, relative to `max|c|·max π`.
    pub ratio: f64,
    /// `‖[H, π]‖_F`.
    pub hamiltonian_commutator: f64,
    /// `‖[𝓤, D]‖_F / ‖G‖²`.
    pub unitary_dissipator_commutator: f64,
    pub holds: bool,
}

/// Relative tolerance for grouping `log(π_i/π_j)` into sectors.
pub const SECTOR_TOL: f64 = 1e-9;

pub(crate) fn same_log(a: f64, b: f64) -> bool {
    (a - b).abs() <= SECTOR_TOL * a.abs().max(b.abs()).max(1.0)
}

pub fn selection_rule(g: &CMat, pi: &CMat) -> Result<SelectionRuleReport> {
    let d = superop_dim(g)?;
    linalg::ensure_dim(pi, d)?;
    let e = linalg::validate_full_rank(pi)?;
    let (h, u, diss) = split_generator(g)?;
    let p = &e.values;
    let w = linalg::sandwich_super(&e.vectors, &e.vectors.adjoint());
    let dp = w.adjoint() * &diss * &w;
    let idx = |row: usize, col: usize| row + d * col;
    let coord = |g_: usize, d_: usize, a: usize, b: usize| dp[(idx(g_, d_), idx(a, b))];
    let cmax = dp.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let pmax = e.max();
    let mut forbidden = 0.0f64;
    let mut ratio = 0.0f64;
    if cmax > 0.0 {
        for a in 0..d {
            for b in 0..d {
                for gm in 0..d {
                    for dl in 0..d {
                        let cv = coord(gm, dl, a, b);
                        let partner = coord(b, a, dl, gm);
                        let x1 = (p[a] / p[b]).ln();
                        let x2 = (p[gm] / p[dl]).ln();
                        let v = if same_log(x1, x2) {
                            (cv * p[b] - partner * p[dl]).norm()
                        } else if same_log(x1, -x2) {
                            (cv * p[a] - partner * p[dl]).norm()
                        } else {
                            forbidden = forbidden.max(cv.norm() / cmax);
                            continue;
                        };
                        ratio = ratio.max(v / (cmax * pmax));
                    }
                }
            }
        }
    }
    let hamiltonian_commutator = linalg::frobenius(&linalg::commutator(&h, pi));
    let scale = linalg::frobenius(g);
    let unitary_dissipator_commutator = if scale > 0.0 {
        linalg::frobenius(&(&u * &diss - &diss * &u)) / (scale * scale)
    } else {
        0.0
    };
    let holds = forbidden < DB_TOL
        && ratio < DB_TOL
        && hamiltonian_commutator < DB_TOL
        && unitary_dissipator_commutator < DB_TOL;
    Ok(SelectionRuleReport {
        forbidden,
        ratio,
        hamiltonian_commutator,
        unitary_dissipator_commutator,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FisherDbVerdict {
    pub samples: Vec<FisherSampleResidual>,
    pub selection_rule: SelectionRuleReport,
    /// The selection rule is authoritative; the samples must agree with it.
    pub holds: bool,
}

pub fn is_fisher_db(g: &CMat, pi: &CMat, fs: &[StandardMonotone]) -> Result<FisherDbVerdict> {
    let (_, u, diss) = split_generator(g)?;
    let selection_rule = selection_rule(g, pi)?;
    let mut samples = Vec::with_capacity(fs.len());
    for f in fs {
        let j = FisherOperator::new(f, pi)?;
        let jf = j.as_superoperator(false);
        let jf_inv = j.as_superoperator(true);
        samples.push(FisherSampleResidual {
            monotone: f.name.clone(),
            residuals: residuals(g, &u, &diss, |m| &jf * m.adjoint() * &jf_inv),
        });
    }
    let holds = selection_rule.holds && samples.iter().all(|s| s.residuals.holds);
    Ok(FisherDbVerdict {
        samples,
        selection_rule,
        holds,
    })
}

/// Everything the command line reports about one generator.
#[derive(Clone, Debug, Serialize)]
pub struct DbReport {
    pub alicki: AdjointResiduals,
    pub fisher: FisherDbVerdict,
    pub modular_commutator_norm: f64,
    /// Present when the Fisher conditions hold and `π` is nondegenerate.
    pub structural: Option<StructuralDecomposition>,
}

pub fn db_report(g: &CMat, pi: &CMat, fs: &[StandardMonotone]) -> Result<DbReport> {
    let alicki = is_alicki_db(g, pi)?;
    let fisher = is_fisher_db(g, pi, fs)?;
    let modular_commutator_norm = modular_commutator_norm(g, pi)?;
    let structural = if fisher.holds {
        match structural_decompose(g, pi) {
            Ok(s) => Some(s),
            Err(Error::Degenerate(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(DbReport {
        alicki,
        fisher,
        modular_commutator_norm,
        structural,
    })
}
