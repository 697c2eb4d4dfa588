//! Sector bookkeeping for the modular operator, detailed-balance
//! constructors, and the structural decomposition of Fisher detailed-balance
//! generators.
//!
//! Let `{|i⟩}` be the eigenbasis of `π`. The units `|γ⟩⟨α|` are eigenoperators
//! of `𝕃_π ℝ_π⁻¹` with eigenvalue `π_γ/π_α = e^ω`; grouping them by `ω` gives
//! the sectors. A Fisher detailed-balance dissipator couples a unit pair
//! either inside one sector (ordinary GKLS terms) or, after transposing `ρ`
//! in the eigenbasis of `π`, inside one sector again (transposition terms).

use serde::Serialize;

use super::{same_log, selection_rule, split_generator, superop_dim};
use crate::dynamics::lindblad::Lindbladian;
use crate::error::{Error, Result};
use crate::io::ser_matrix;
use crate::linalg::{self, re, CMat, Eigh};

/// Full-rank state with its eigenbasis; the frame in which transposition and
/// sector indices are defined.
#[derive(Clone, Debug)]
pub struct ModularFrame {
    pub pi: CMat,
    pub spectral: Eigh,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sector {
    pub omega: f64,
    /// `(γ, α)` for each unit `|γ⟩⟨α|` in the sector.
    pub pairs: Vec<(usize, usize)>,
}

impl ModularFrame {
    pub fn new(pi: &CMat) -> Result<Self> {
        let spectral = linalg::validate_full_rank(pi)?;
        Ok(Self {
            pi: pi.clone(),
            spectral,
        })
    }

    /// As [`ModularFrame::new`], rejecting repeated eigenvalues.
    pub fn nondegenerate(pi: &CMat) -> Result<Self> {
        let f = Self::new(pi)?;
        let logs: Vec<f64> = f.spectral.values.iter().map(|p| p.ln()).collect();
        if let Some(w) = logs.windows(2).find(|w| same_log(w[0], w[1])) {
            return Err(Error::Degenerate(format!(
                "eigenvalue {:.6e} of the stationary state repeats; sector bookkeeping needs a nondegenerate spectrum",
                w[0].exp()
            )));
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.spectral.dim()
    }

    /// `ω = log(π_γ/π_α)`.
    pub fn omega(&self, gamma: usize, alpha: usize) -> f64 {
        (self.spectral.values[gamma] / self.spectral.values[alpha]).ln()
    }

    /// `|γ⟩⟨α|` in the eigenbasis of `π`, expressed in input coordinates.
    pub fn unit(&self, gamma: usize, alpha: usize) -> CMat {
        self.from_frame(&linalg::unit(self.dim(), gamma, alpha))
    }

    pub fn to_frame(&self, x: &CMat) -> CMat {
        self.spectral.to_eigenbasis(x)
    }

    pub fn from_frame(&self, x: &CMat) -> CMat {
        self.spectral.from_eigenbasis(x)
    }

    /// Transposition in the eigenbasis of `π`.
    pub fn transpose(&self, x: &CMat) -> CMat {
        self.from_frame(&self.to_frame(x).transpose())
    }

    pub fn transpose_superop(&self) -> CMat {
        let d = self.dim();
        linalg::superop_from_fn(d, d, |x| self.transpose(x))
    }

    /// Units grouped by `ω` in ascending order.
    pub fn sectors(&self) -> Vec<Sector> {
        let d = self.dim();
        let mut all: Vec<(f64, (usize, usize))> = (0..d)
            .flat_map(|g| (0..d).map(move |a| (g, a)))
            .map(|(g, a)| (self.omega(g, a), (g, a)))
            .collect();
        all.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<Sector> = Vec::new();
        for (w, pair) in all {
            match out.last_mut() {
                Some(s) if same_log(s.omega, w) => s.pairs.push(pair),
                _ => out.push(Sector {
                    omega: w,
                    pairs: vec![pair],
                }),
            }
        }
        for s in &mut out {
            if s.pairs.iter().any(|(g, a)| g == a) {
                s.omega = 0.0;
            }
        }
        out
    }

    /// The `ω` of a modular eigenoperator, `π A π⁻¹ = e^ω A`.
    pub fn eigen_omega(&self, op: &CMat) -> Result<f64> {
        linalg::ensure_dim(op, self.dim())?;
        let a = self.to_frame(op);
        let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if scale == 0.0 {
            return Err(Error::Constraint("zero operator has no sector".into()));
        }
        let mut omega: Option<f64> = None;
        for g in 0..self.dim() {
            for al in 0..self.dim() {
                if a[(g, al)].norm() <= 1e-12 * scale {
                    continue;
                }
                let w = self.omega(g, al);
                match omega {
                    None => omega = Some(w),
                    Some(w0) if same_log(w0, w) => {}
                    Some(w0) => {
                        return Err(Error::Constraint(format!(
                            "operator mixes sectors ω = {w0:.6} and ω = {w:.6}"
                        )))
                    }
                }
            }
        }
        let w = omega.expect("nonzero operator");
        Ok(if w.abs() <= super::SECTOR_TOL { 0.0 } else { w })
    }
}

/// One jump (or transposition operator) with its weight, in input coordinates.
#[derive(Clone, Debug)]
pub struct SectorJump {
    pub op: CMat,
    pub rate: f64,
}

impl SectorJump {
    pub fn new(op: CMat, rate: f64) -> Self {
        Self { op, rate }
    }

    /// `|γ⟩⟨α|` of the frame at the given rate.
    pub fn transition(frame: &ModularFrame, gamma: usize, alpha: usize, rate: f64) -> Self {
        Self::new(frame.unit(gamma, alpha), rate)
    }
}

fn hermitian_or_err(op: &CMat, what: &str) -> Result<()> {
    let dev = linalg::hermitian_deviation(op);
    if dev > 1e-12 * linalg::frobenius(op).max(1.0) {
        return Err(Error::Constraint(format!(
            "{what} in the ω = 0 sector must be Hermitian (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

/// Expands user terms with their partners `(A†, e^{−ω} λ)`; `ω = 0`
/// operators must be Hermitian and are their own partners.
fn with_partners(
    frame: &ModularFrame,
    terms: &[SectorJump],
    what: &str,
) -> Result<Vec<(f64, CMat, f64)>> {
    let mut out = Vec::with_capacity(2 * terms.len());
    for t in terms {
        if !t.rate.is_finite() {
            return Err(Error::Constraint(format!("{what} weight must be finite")));
        }
        let w = frame.eigen_omega(&t.op)?;
        if w == 0.0 {
            hermitian_or_err(&t.op, what)?;
            out.push((0.0, t.op.clone(), t.rate));
        } else {
            out.push((w, t.op.clone(), t.rate));
            out.push((-w, t.op.adjoint(), (-w).exp() * t.rate));
        }
    }
    Ok(out)
}

fn check_hamiltonian(h: &CMat, pi: &CMat) -> Result<()> {
    let comm = linalg::frobenius(&linalg::commutator(h, pi));
    if comm > 1e-10 * linalg::frobenius(h).max(1.0) {
        return Err(Error::Constraint(format!(
            "[H, π] = {comm:.3e}, expected 0"
        )));
    }
    Ok(())
}

/// GKLS generator with modular-eigenoperator jumps and rates obeying
/// `λ^ω = e^ω λ^{−ω}`. Give one jump per partner pair; the reversed jump
/// `A†` at rate `e^{−ω} λ` is added here.
pub fn build_db_lindbladian(
    pi: &CMat,
    h: Option<&CMat>,
    jumps: &[SectorJump],
) -> Result<Lindbladian> {
    let frame = ModularFrame::nondegenerate(pi)?;
    let d = frame.dim();
    let h = match h {
        Some(h) => {
            linalg::ensure_dim(h, d)?;
            check_hamiltonian(h, pi)?;
            h.clone()
        }
        None => CMat::zeros(d, d),
    };
    if let Some(t) = jumps.iter().find(|t| !(t.rate >= 0.0)) {
        return Err(Error::Constraint(format!("rate {} is negative", t.rate)));
    }
    let expanded = with_partners(&frame, jumps, "jump")?;
    let (ops, rates) = expanded.into_iter().map(|(_, op, r)| (op, r)).unzip();
    Lindbladian::new(h, ops, rates)
}

/// A GKLS part plus transposition terms `Σ μ B ρ^T B†`, the transpose taken
/// in the eigenbasis of `π`.
#[derive(Clone, Debug, Serialize)]
pub struct DbGenerator {
    pub lindbladian: Lindbladian,
    pub transpose_terms: Vec<StructuralTerm>,
    #[serde(skip)]
    pub frame: ModularFrame,
}

impl DbGenerator {
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn superop(&self) -> CMat {
        let mut s = self.lindbladian.superop();
        if !self.transpose_terms.is_empty() {
            let t = self.frame.transpose_superop();
            for term in &self.transpose_terms {
                s += linalg::sandwich_super(&term.op, &term.op.adjoint()) * &t * re(term.rate);
            }
        }
        s
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        let mut out = self.lindbladian.apply(rho)?;
        if !self.transpose_terms.is_empty() {
            let rt = self.frame.transpose(rho);
            for term in &self.transpose_terms {
                out += (&term.op * &rt * term.op.adjoint()) * re(term.rate);
            }
        }
        Ok(out)
    }
}

/// Detailed-balance generator with transposition terms. Per sector the
/// weights `μ` must sum to zero and the induced coefficient matrix must
/// vanish on its diagonal, so that populations are untouched.
pub fn build_fisher_db_extra(
    pi: &CMat,
    h: Option<&CMat>,
    jumps: &[SectorJump],
    transpose: &[SectorJump],
) -> Result<DbGenerator> {
    let lindbladian = build_db_lindbladian(pi, h, jumps)?;
    let frame = ModularFrame::nondegenerate(pi)?;
    let expanded = with_partners(&frame, transpose, "transposition operator")?;
    let sectors = frame.sectors();
    let sector_of = |w: f64| {
        sectors
            .iter()
            .position(|s| same_log(s.omega, w))
            .expect("sector exists")
    };
    let mut sums = vec![0.0; sectors.len()];
    let mut abs = vec![0.0; sectors.len()];
    // diagonal of the coefficient matrix over each sector's units
    let mut diag = vec![0.0; frame.dim() * frame.dim()];
    for (w, op, mu) in &expanded {
        let k = sector_of(*w);
        sums[k] += mu;
        abs[k] += mu.abs();
        let b = frame.to_frame(op);
        for (g, a) in &sectors[k].pairs {
            diag[g * frame.dim() + a] += mu * b[(*g, *a)].norm_sqr();
        }
    }
    for (k, s) in sectors.iter().enumerate() {
        if sums[k].abs() > 1e-12 * abs[k].max(1.0) {
            return Err(Error::Constraint(format!(
                "transposition weights in sector ω = {:.6} sum to {:.3e}, expected 0",
                s.omega, sums[k]
            )));
        }
    }
    let dscale = expanded
        .iter()
        .map(|t| t.2.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    if let Some(v) = diag.iter().find(|v| v.abs() > 1e-12 * dscale) {
        return Err(Error::Constraint(format!(
            "transposition terms move populations (diagonal coefficient {v:.3e})"
        )));
    }
    let transpose_terms = expanded
        .into_iter()
        .map(|(omega, op, rate)| StructuralTerm { omega, rate, op })
        .collect();
    let gen = DbGenerator {
        lindbladian,
        transpose_terms,
        frame,
    };
    // Terms chaining three equally spaced levels carry an identity component,
    // hence a Hamiltonian that does not commute with π.
    let (hc, _, _) = split_generator(&gen.superop())?;
    let comm = linalg::frobenius(&linalg::commutator(&hc, pi));
    if comm > 1e-10 * linalg::frobenius(&gen.superop()).max(1.0) {
        return Err(Error::Constraint(format!(
            "transposition terms induce a Hamiltonian with [H, π] = {comm:.3e}"
        )));
    }
    Ok(gen)
}

/// The two-level generator with a single jump `|0⟩⟨1| + e^{−β/2}|1⟩⟨0|` at
/// unit rate and `H = 0`, stationary at `diag(1, e^{−β})/(1 + e^{−β})`. It
/// satisfies every Fisher condition but not the correlation-product one.
pub fn fisher_not_alicki_qubit(beta: f64) -> (Lindbladian, CMat) {
    let z = 1.0 + (-beta).exp();
    let pi = linalg::diag(&[1.0 / z, (-beta).exp() / z]);
    let a = linalg::unit(2, 0, 1) + linalg::unit(2, 1, 0) * re((-beta / 2.0).exp());
    let l = Lindbladian {
        h: CMat::zeros(2, 2),
        jumps: vec![a],
        rates: vec![1.0],
    };
    (l, pi)
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralTerm {
    pub omega: f64,
    /// `λ` for GKLS terms, `μ` for transposition terms.
    pub rate: f64,
    #[serde(serialize_with = "ser_matrix")]
    pub op: CMat,
}

/// Residuals of the structural conditions.
#[derive(Clone, Debug, Serialize)]
pub struct StructuralConditions {
    /// `max ‖π A π⁻¹ − e^ω A‖` over all operators.
    pub eigenoperator: f64,
    /// Sorted spectra of the `−ω` blocks against `e^{−ω}` times the `ω` blocks.
    pub rate_ratio: f64,
    pub weight_ratio: f64,
    pub min_rate: f64,
    /// `max_ω |Σ_i μ_i^ω|`.
    pub weight_sum: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructuralDecomposition {
    #[serde(serialize_with = "ser_matrix")]
    pub hamiltonian: CMat,
    pub sectors: Vec<Sector>,
    pub lindblad_terms: Vec<StructuralTerm>,
    pub transpose_terms: Vec<StructuralTerm>,
    pub conditions: StructuralConditions,
    /// `‖G' − G‖_F / ‖G‖_F` for the re-synthesized generator `G'`.
    pub resynthesis: f64,
}

impl StructuralDecomposition {
    pub fn generator(&self, pi: &CMat) -> Result<DbGenerator> {
        Ok(DbGenerator {
            lindbladian: Lindbladian {
                h: self.hamiltonian.clone(),
                jumps: self.lindblad_terms.iter().map(|t| t.op.clone()).collect(),
                rates: self.lindblad_terms.iter().map(|t| t.rate).collect(),
            },
            transpose_terms: self.transpose_terms.clone(),
            frame: ModularFrame::nondegenerate(pi)?,
        })
    }
}

/// Diagonalizes a sector block; returns eigenvalues and operators
/// `Σ_x v_x X_x` in frame coordinates.
fn diagonalize_block(k: &CMat, basis: &[CMat]) -> Result<Vec<(f64, CMat)>> {
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let e = linalg::eigh(&linalg::hermitize(k))?;
    Ok((0..basis.len())
        .map(|col| {
            let mut op = CMat::zeros(basis[0].nrows(), basis[0].ncols());
            for (x, b) in basis.iter().enumerate() {
                op += b * e.vectors[(x, col)];
            }
            (e.values[col], op)
        })
        .collect())
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn spectrum(k: &CMat) -> Result<Vec<f64>> {
    Ok(sorted(linalg::eigh(&linalg::hermitize(k))?.values))
}

/// Splits a Fisher detailed-balance generator into its Hamiltonian, GKLS
/// terms per sector, and transposition terms per sector.
pub fn structural_decompose(g: &CMat, pi: &CMat) -> Result<StructuralDecomposition> {
    let d = superop_dim(g)?;
    linalg::ensure_dim(pi, d)?;
    let frame = ModularFrame::nondegenerate(pi)?;
    let sel = selection_rule(g, pi)?;
    if !sel.holds {
        return Err(Error::Constraint(format!(
            "generator is not detailed balanced for every Fisher product (forbidden {:.3e}, ratio {:.3e}, [H,π] {:.3e})",
            sel.forbidden, sel.ratio, sel.hamiltonian_commutator
        )));
    }
    let (h, _, diss) = split_generator(g)?;
    let w = linalg::sandwich_super(&frame.spectral.vectors, &frame.spectral.vectors.adjoint());
    let dp = w.adjoint() * &diss * &w;
    let sectors = frame.sectors();
    let mut slot = vec![(0usize, 0usize); d * d];
    for (k, s) in sectors.iter().enumerate() {
        for (pos, (gm, al)) in s.pairs.iter().enumerate() {
            slot[gm * d + al] = (k, pos);
        }
    }
    let locate = |gm: usize, al: usize| slot[gm * d + al];
    let mut kb: Vec<CMat> = sectors
        .iter()
        .map(|s| CMat::zeros(s.pairs.len(), s.pairs.len()))
        .collect();
    let mut tb = kb.clone();
    let idx = |row: usize, col: usize| row + d * col;
    for a in 0..d {
        for b in 0..d {
            for gm in 0..d {
                for dl in 0..d {
                    // coefficient of |γ⟩⟨α| ρ (|δ⟩⟨β|)†
                    let cv = dp[(idx(gm, dl), idx(a, b))];
                    let (sx, px) = locate(gm, a);
                    let (sy, py) = locate(dl, b);
                    if sx == sy {
                        kb[sx][(px, py)] = cv;
                        continue;
                    }
                    // = |γ⟩⟨β| ρ^T (|δ⟩⟨α|)†
                    let (tx, qx) = locate(gm, b);
                    let (ty, qy) = locate(dl, a);
                    if tx == ty {
                        tb[tx][(qx, qy)] = cv;
                    }
                }
            }
        }
    }
    let scale = linalg::frobenius(g);
    let zero = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut lindblad_terms = Vec::new();
    let mut transpose_terms = Vec::new();
    let mut rate_ratio = 0.0f64;
    let mut weight_ratio = 0.0f64;
    let mut weight_sum = 0.0f64;
    let units = |s: &Sector| -> Vec<CMat> {
        s.pairs
            .iter()
            .map(|(gm, al)| linalg::unit(d, *gm, *al))
            .collect()
    };
    let partner = |k: usize| {
        sectors
            .iter()
            .position(|s| same_log(s.omega, -sectors[k].omega))
            .expect("partner sector")
    };
    for (k, s) in sectors.iter().enumerate() {
        if s.omega < 0.0 {
            continue;
        }
        let push = |terms: &mut Vec<StructuralTerm>, list: Vec<(f64, CMat)>| {
            for (rate, op) in list {
                if rate.abs() <= zero {
                    continue;
                }
                let op_in = frame.from_frame(&op);
                if s.omega > 0.0 {
                    terms.push(StructuralTerm {
                        omega: -s.omega,
                        rate: (-s.omega).exp() * rate,
                        op: op_in.adjoint(),
                    });
                }
                terms.push(StructuralTerm {
                    omega: s.omega,
                    rate,
                    op: op_in,
                });
            }
        };
        let gkls = if s.omega == 0.0 {
            // traceless diagonal basis; the identity direction is fixed by trace preservation
            let pos: Vec<usize> = (0..d).map(|al| locate(al, al).1).collect();
            let diag_basis: Vec<CMat> = linalg::hermitian_basis(d).split_off(d * d - d + 1);
            let t = CMat::from_fn(d, d - 1, |al, m| diag_basis[m][(al, al)]);
            let kp = CMat::from_fn(d, d, |x, y| kb[k][(pos[x], pos[y])]);
            diagonalize_block(&(t.adjoint() * kp * &t), &diag_basis)?
        } else {
            diagonalize_block(&kb[k], &units(s))?
        };
        let trans = diagonalize_block(&tb[k], &units(s))?;
        weight_sum = weight_sum.max(trans.iter().map(|t| t.0).sum::<f64>().abs());
        if s.omega > 0.0 {
            let q = partner(k);
            let scaled =
                |v: &[(f64, CMat)]| sorted(v.iter().map(|t| (-s.omega).exp() * t.0).collect());
            let cmp = |a: Vec<f64>, b: Vec<f64>| {
                a.iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            };
            rate_ratio = rate_ratio.max(cmp(spectrum(&kb[q])?, scaled(&gkls)));
            weight_ratio = weight_ratio.max(cmp(spectrum(&tb[q])?, scaled(&trans)));
        }
        push(&mut lindblad_terms, gkls);
        push(&mut transpose_terms, trans);
    }
    let eigen_res = |t: &StructuralTerm| {
        let lhs = &frame.pi * &t.op * frame.spectral.map(|x| 1.0 / x);
        linalg::frobenius(&(lhs - &t.op * re(t.omega.exp())))
    };
    let eigenoperator = lindblad_terms
        .iter()
        .chain(&transpose_terms)
        .map(eigen_res)
        .fold(0.0, f64::max);
    let min_rate = lindblad_terms
        .iter()
        .map(|t| t.rate)
        .fold(f64::INFINITY, f64::min);
    let mut out = StructuralDecomposition {
        hamiltonian: h,
        sectors,
        lindblad_terms,
        transpose_terms,
        conditions: StructuralConditions {
            eigenoperator,
            rate_ratio: rate_ratio / scale.max(f64::MIN_POSITIVE),
            weight_ratio: weight_ratio / scale.max(f64::MIN_POSITIVE),
            min_rate: if min_rate.is_finite() { min_rate } else { 0.0 },
            weight_sum: weight_sum / scale.max(f64::MIN_POSITIVE),
        },
        resynthesis: 0.0,
    };
    let rebuilt = out.generator(pi)?.superop();
    out.resynthesis = if scale > 0.0 {
        linalg::frobenius(&(rebuilt - g)) / scale
    } else {
        linalg::frobenius(&rebuilt)
    };
    Ok(out)
}
