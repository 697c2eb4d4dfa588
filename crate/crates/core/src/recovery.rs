//! Generalized Petz recovery maps `J_{f′}|π ∘ Φ† ∘ J_f⁻¹|Φ(π)` and the
//! quantities built from them.

use serde::Serialize;

use crate::divergence::{self, ContrastFn};
use crate::dynamics::{trajectory_channels, Evolution, QuantumChannel};
use crate::error::{Error, Result};
use crate::fisher::{self, FisherOperator};
use crate::linalg::{self, c, CMat, Eigh, PSD_TOL};
use crate::monotone::{self, StandardMonotone};

#[derive(Clone, Debug)]
pub struct RecoveryMap {
    /// The recovery, mapping outputs of `Φ` back to its inputs.
    pub map: QuantumChannel,
    pub prior: CMat,
    pub fprime: String,
    pub f: String,
    /// Both Fisher factors (`J_{f′}` and `J_f⁻¹`) are CP, which makes the
    /// composition CP.
    pub factors_cp: bool,
    pub choi_min_eig: f64,
}

impl RecoveryMap {
    pub fn is_cp(&self) -> bool {
        self.factors_cp || self.choi_min_eig >= -PSD_TOL
    }

    /// `Φ̃ ∘ Φ` as a superoperator on the input space.
    pub fn round_trip(&self, phi: &QuantumChannel) -> CMat {
        &self.map.superop * &phi.superop
    }
}

fn super_of(j: &FisherOperator, p: f64) -> CMat {
    let d = j.dim();
    linalg::superop_from_fn(d, d, |x| j.apply_power(x, p).expect("dimension fixed"))
}

pub fn petz_map(
    fprime: &StandardMonotone,
    f: &StandardMonotone,
    pi: &CMat,
    phi: &QuantumChannel,
) -> Result<RecoveryMap> {
    linalg::ensure_dim(pi, phi.d_in)?;
    let jp = FisherOperator::new(fprime, pi)?;
    let image = linalg::hermitize(&phi.apply(pi)?);
    let jf = FisherOperator::new(f, &image)?;
    let s = super_of(&jp, 1.0) * &phi.adjoint().superop * super_of(&jf, -1.0);
    let map = QuantumChannel::from_superop(phi.d_out, phi.d_in, s)?;
    let choi_min_eig = linalg::eigh(&linalg::hermitize(map.choi()))?.min();
    Ok(RecoveryMap {
        map,
        prior: pi.clone(),
        fprime: fprime.name.clone(),
        f: f.name.clone(),
        factors_cp: jp.is_cp().cp && jf.is_cp().inverse_cp,
        choi_min_eig,
    })
}

/// `f′(x) ≤ f(x)` on the shared logarithmic grid.
pub fn dominated_on_grid(fprime: &StandardMonotone, f: &StandardMonotone) -> bool {
    monotone::log_grid()
        .into_iter()
        .all(|x| fprime.eval(x) <= f.eval(x) * (1.0 + 1e-12))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Anti-Hermitian part of the symmetrized operator, i.e. the imaginary
    /// residue of the spectrum.
    pub imag_residue: f64,
    /// `‖Φ̃Φ(π) − π‖_F`.
    pub prior_residual: f64,
    pub contains_one: bool,
}

impl SpectrumReport {
    pub fn within_unit_interval(&self, tol: f64) -> bool {
        self.eigenvalues
            .iter()
            .all(|&v| v >= -tol && v <= 1.0 + tol)
    }
}

/// Spectrum of `Φ̃Φ` through the Hermitian similarity
/// `J_{f′}^{-1/2} (Φ̃Φ) J_{f′}^{1/2} = J_{f′}^{1/2} Φ† J_f⁻¹ Φ J_{f′}^{1/2}`,
/// without checking `f′ ≤ f`.
pub fn recovery_spectrum_unchecked(
    fprime: &StandardMonotone,
    f: &StandardMonotone,
    pi: &CMat,
    phi: &QuantumChannel,
) -> Result<SpectrumReport> {
    let jp = FisherOperator::new(fprime, pi)?;
    let image = linalg::hermitize(&phi.apply(pi)?);
    let jf = FisherOperator::new(f, &image)?;
    let half = super_of(&jp, 0.5);
    let sym = &half * &phi.adjoint().superop * super_of(&jf, -1.0) * &phi.superop * &half;
    let imag_residue = linalg::hermitian_deviation(&sym);
    let e = linalg::eigh(&linalg::hermitize(&sym))?;
    let rec = petz_map(fprime, f, pi, phi)?;
    let back = rec.map.apply(&image)?;
    Ok(SpectrumReport {
        contains_one: e.values.iter().any(|v| (v - 1.0).abs() < 1e-9),
        eigenvalues: e.values,
        imag_residue,
        prior_residual: linalg::frobenius(&(back - pi)),
    })
}

/// As [`recovery_spectrum_unchecked`], rejecting pairs with `f′ > f`
/// somewhere on the grid.
pub fn recovery_spectrum(
    fprime: &StandardMonotone,
    f: &StandardMonotone,
    pi: &CMat,
    phi: &QuantumChannel,
) -> Result<SpectrumReport> {
    if !dominated_on_grid(fprime, f) {
        return Err(Error::Constraint(format!(
            "{} exceeds {} on the grid; the spectrum need not lie in [0, 1]",
            fprime.name, f.name
        )));
    }
    recovery_spectrum_unchecked(fprime, f, pi, phi)
}

/// `‖K_{f,Φπ}(ΦA, ΦB) − K_{f′,π}(A, Φ̃ΦB)‖` for given `A`, `B`.
pub fn duality_residual(
    fprime: &StandardMonotone,
    f: &StandardMonotone,
    pi: &CMat,
    phi: &QuantumChannel,
    a: &CMat,
    b: &CMat,
) -> Result<f64> {
    let rec = petz_map(fprime, f, pi, phi)?;
    let image = linalg::hermitize(&phi.apply(pi)?);
    let lhs = FisherOperator::new(f, &image)?.inner(&phi.apply(a)?, &phi.apply(b)?)?;
    let mb = linalg::apply_super(&rec.round_trip(phi), b);
    let rhs = FisherOperator::new(fprime, pi)?.inner(a, &mb)?;
    Ok((lhs - rhs).norm())
}

/// Recovering the recovery map, with prior `Φ(π)` and the roles of the
/// monotones swapped, returns `Φ`. Reports the Frobenius residual.
pub fn involution_check(
    f: &StandardMonotone,
    fprime: &StandardMonotone,
    pi: &CMat,
    phi: &QuantumChannel,
) -> Result<f64> {
    let first = petz_map(fprime, f, pi, phi)?;
    let image = linalg::hermitize(&phi.apply(pi)?);
    let second = petz_map(f, fprime, &image, &first.map)?;
    Ok(linalg::frobenius(&(&second.map.superop - &phi.superop)))
}

/// `P_{(f′,f),π}(Φ_{t,s}∘Φ_s)` against `P_{(f′,f″),π}(Φ_s) ∘ P_{(f″,f),Φ_s(π)}(Φ_{t,s})`.
pub fn composition_check(
    f: &StandardMonotone,
    fmid: &StandardMonotone,
    fprime: &StandardMonotone,
    pi: &CMat,
    phi_s: &QuantumChannel,
    phi_ts: &QuantumChannel,
) -> Result<f64> {
    let whole = petz_map(fprime, f, pi, &phi_ts.compose(phi_s)?)?;
    let mid = linalg::hermitize(&phi_s.apply(pi)?);
    let inner = petz_map(fmid, f, &mid, phi_ts)?;
    let outer = petz_map(fprime, fmid, pi, phi_s)?;
    let chained = outer.map.compose(&inner.map)?;
    Ok(linalg::frobenius(&(&whole.map.superop - &chained.superop)))
}

/// `π^z` for complex `z` on a positive spectrum.
fn complex_power(e: &Eigh, z: linalg::C64) -> CMat {
    let d = e.dim();
    let diag = CMat::from_fn(d, d, |i, j| {
        if i == j {
            (z * e.values[i].ln()).exp()
        } else {
            c(0.0, 0.0)
        }
    });
    &e.vectors * diag * e.vectors.adjoint()
}

/// `V_σ(½ − it) ∘ Φ† ∘ V_{Φ(σ)}(it − ½)` with `V_π(z)[A] = π^z A (π^z)†`,
/// built from Kraus operators so it is CP by construction.
pub fn rotated_petz(phi: &QuantumChannel, sigma: &CMat, t: f64) -> Result<RecoveryMap> {
    let es = linalg::validate_full_rank(sigma)?;
    let image = linalg::hermitize(&phi.apply(sigma)?);
    let ei = linalg::validate_full_rank(&image)?;
    let kraus = match &phi.kraus {
        Some(k) => k.clone(),
        None => phi.kraus_from_choi()?,
    };
    let left = complex_power(&es, c(0.5, -t));
    let right = complex_power(&ei, c(-0.5, t));
    let rk: Vec<CMat> = kraus.iter().map(|k| &left * k.adjoint() * &right).collect();
    let map = QuantumChannel::from_kraus(rk)?;
    let choi_min_eig = linalg::eigh(&linalg::hermitize(map.choi()))?.min();
    Ok(RecoveryMap {
        map,
        prior: sigma.clone(),
        fprime: format!("rotated({t})"),
        f: format!("rotated({t})"),
        factors_cp: true,
        choi_min_eig,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Chi2Gap {
    /// `χ²_{f′}(ρ‖σ) − χ²_f(Φρ‖Φσ)`.
    pub lhs: f64,
    /// `𝓕_{f′,ρ}((𝕀 − Φ̃Φ)Δ)`.
    pub mid: f64,
    /// `‖(𝕀 − Φ̃Φ)Δ‖₁²`.
    pub rhs: f64,
}

impl Chi2Gap {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs >= self.mid - tol && self.mid >= self.rhs - tol
    }
}

/// The three terms of the χ² recovery chain with `Δ = ρ − σ` and the
/// recovery taken with prior `ρ`.
pub fn chi2_recovery_gap(
    fprime: &StandardMonotone,
    f: &StandardMonotone,
    rho: &CMat,
    sigma: &CMat,
    phi: &QuantumChannel,
) -> Result<Chi2Gap> {
    if !dominated_on_grid(fprime, f) {
        return Err(Error::Constraint(format!(
            "{} exceeds {} on the grid",
            fprime.name, f.name
        )));
    }
    let delta = rho - sigma;
    let lhs = divergence::chi2(fprime, rho, sigma)?.value()?
        - divergence::chi2(
            f,
            &linalg::hermitize(&phi.apply(rho)?),
            &linalg::hermitize(&phi.apply(sigma)?),
        )?
        .value()?;
    let rec = petz_map(fprime, f, rho, phi)?;
    let lost = linalg::hermitize(&(&delta - linalg::apply_super(&rec.round_trip(phi), &delta)));
    Ok(Chi2Gap {
        lhs,
        mid: fisher::fisher_information(fprime, rho, &lost)?,
        rhs: linalg::trace_norm(&lost)?.powi(2),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RetrodictionSeries {
    pub times: Vec<f64>,
    /// `𝓕_{f,Φ_t(π)}(Φ_t(δρ))`.
    pub fisher: Vec<f64>,
    /// `H_{g(f′)}(π+δρ ‖ Φ̃_tΦ_t(π+δρ))`.
    pub divergence: Vec<f64>,
    /// `½ 𝓕_{f′,π}((𝕀 − Φ̃_tΦ_t)δρ)`, the second-order part of `divergence`.
    pub quadratic: Vec<f64>,
    /// Fisher information grew over the step ending at this time.
    pub expansion: Vec<bool>,
}

impl RetrodictionSeries {
    /// Steps where the Fisher information expanded but the quadratic
    /// retrieval error did not strictly decrease.
    pub fn implication_failures(&self) -> Vec<usize> {
        (1..self.times.len())
            .filter(|&k| self.expansion[k] && self.quadratic[k] >= self.quadratic[k - 1])
            .collect()
    }
}

pub fn retrodiction_trajectory(
    fprime: &StandardMonotone,
    f: &StandardMonotone,
    pi: &CMat,
    delta: &CMat,
    evo: &dyn Evolution,
    t_max: f64,
    dt: f64,
) -> Result<RetrodictionSeries> {
    if !dominated_on_grid(fprime, f) {
        return Err(Error::Constraint(format!(
            "{} exceeds {} on the grid",
            fprime.name, f.name
        )));
    }
    let (times, channels) = trajectory_channels(evo, t_max, dt)?;
    let g = ContrastFn::from_monotone(fprime);
    let start = pi + delta;
    let mut out = RetrodictionSeries {
        times,
        fisher: vec![],
        divergence: vec![],
        quadratic: vec![],
        expansion: vec![],
    };
    for phi in &channels {
        let rec = petz_map(fprime, f, pi, phi)?;
        let m = rec.round_trip(phi);
        let moved = linalg::hermitize(&phi.apply(delta)?);
        let image = linalg::hermitize(&phi.apply(pi)?);
        out.fisher
            .push(fisher::fisher_information(f, &image, &moved)?);
        let lost = linalg::hermitize(&(delta - linalg::apply_super(&m, delta)));
        out.quadratic
            .push(0.5 * fisher::fisher_information(fprime, pi, &lost)?);
        let guess = linalg::hermitize(&linalg::apply_super(&m, &start));
        out.divergence
            .push(divergence::contrast(&g, &start, &guess)?.value()?);
        let k = out.fisher.len() - 1;
        out.expansion
            .push(k > 0 && out.fisher[k] > out.fisher[k - 1]);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SupremumReport {
    pub pairs: Vec<(String, String)>,
    /// Per pair, `min_k (μ_k^P − μ_k)` over sorted spectra.
    pub min_gaps: Vec<f64>,
    pub holds: bool,
}

/// The standard Petz map `(f_SQ, f_SQ)` dominates every CP pair: its
/// sorted recovery spectrum lies above that of each sampled pair.
pub fn petz_supremum_check(
    pi: &CMat,
    phi: &QuantumChannel,
    pairs: &[(StandardMonotone, StandardMonotone)],
) -> Result<SupremumReport> {
    let sq = monotone::sqrt();
    let top = recovery_spectrum_unchecked(&sq, &sq, pi, phi)?;
    let mut min_gaps = Vec::with_capacity(pairs.len());
    for (fp, f) in pairs {
        let s = recovery_spectrum_unchecked(fp, f, pi, phi)?;
        let gap = top
            .eigenvalues
            .iter()
            .zip(&s.eigenvalues)
            .map(|(a, b)| a - b)
            .fold(f64::INFINITY, f64::min);
        min_gaps.push(gap);
    }
    Ok(SupremumReport {
        pairs: pairs
            .iter()
            .map(|(a, b)| (a.name.clone(), b.name.clone()))
            .collect(),
        holds: min_gaps.iter().all(|&g| g >= -1e-9),
        min_gaps,
    })
}
