//! Decomposition of the Fisher-information derivative into per-jump
//! currents, with a finite-difference cross-check.

use serde::Serialize;

use crate::dynamics::lindblad::{time_grid, trajectory, Evolution, Lindbladian};
use crate::error::Result;
use crate::fisher;
use crate::linalg::{self, CMat};
use crate::monotone::StandardMonotone;

#[derive(Clone, Debug, Serialize)]
pub struct FluxEntry {
    pub rates: Vec<f64>,
    /// `I_α ≤ 0`, one per jump.
    pub currents: Vec<f64>,
    /// `Σ_α λ_α I_α`.
    pub total: f64,
}

/// Currents of every jump of `l` at the point `(π, δρ)`. The Hamiltonian
/// part leaves the information unchanged and does not appear.
pub fn flux_currents(
    f: &StandardMonotone,
    l: &Lindbladian,
    pi: &CMat,
    delta: &CMat,
) -> Result<FluxEntry> {
    let nodes = f.measure_nodes()?;
    let e = linalg::validate_full_rank(pi)?;
    linalg::ensure_dim(delta, e.dim())?;
    let pos = |m: &CMat| (pi * m.adjoint() * m).trace().re;
    let mut acc = vec![0.0; l.jumps.len()];
    for &(s, w) in &nodes {
        let b = linalg::sandwich_inverse_eig(&e, &e, s, delta)?;
        let bd = b.adjoint();
        for (slot, a) in acc.iter_mut().zip(&l.jumps) {
            let c1 = linalg::commutator(a, &bd);
            let c2 = linalg::commutator(a, &b);
            *slot += w * (pos(&c1) + s * pos(&c2));
        }
    }
    let currents: Vec<f64> = acc.iter().map(|v| -2.0 * v).collect();
    let total = currents.iter().zip(&l.rates).map(|(i, r)| i * r).sum();
    Ok(FluxEntry {
        rates: l.rates.clone(),
        currents,
        total,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxReport {
    pub monotone: String,
    pub evolution: String,
    pub times: Vec<f64>,
    pub fisher: Vec<f64>,
    /// `Σ λ_α I_α`, absent in finite-difference-only mode.
    pub analytic: Option<Vec<f64>>,
    /// Fourth-order finite differences of `fisher`; NaN below five samples.
    pub finite_difference: Vec<f64>,
    pub rates: Vec<Vec<f64>>,
    pub currents: Vec<Vec<f64>>,
}

/// Fourth-order derivative of uniformly sampled data: the Richardson
/// combination of central differences at `h` and `2h` in the interior,
/// one-sided five-point stencils at the two ends.
pub fn richardson_derivative(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    if n < 5 {
        return vec![f64::NAN; n];
    }
    (0..n)
        .map(|k| {
            let v = if k >= 2 && k + 2 < n {
                y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]
            } else if k == 0 {
                let b = &y[0..5];
                -25.0 * b[0] + 48.0 * b[1] - 36.0 * b[2] + 16.0 * b[3] - 3.0 * b[4]
            } else if k == 1 {
                // offsets -1..3
                let b = &y[0..5];
                -3.0 * b[0] - 10.0 * b[1] + 18.0 * b[2] - 6.0 * b[3] + b[4]
            } else if k + 1 == n {
                let b = &y[k - 4..=k];
                25.0 * b[4] - 48.0 * b[3] + 36.0 * b[2] - 16.0 * b[1] + 3.0 * b[0]
            } else {
                let b = &y[k - 3..k + 2];
                3.0 * b[4] + 10.0 * b[3] - 18.0 * b[2] + 6.0 * b[1] - b[0]
            };
            v / (12.0 * h)
        })
        .collect()
}

/// Tracks `𝓕_{f,π_t}(δρ_t)` along an evolution together with its
/// analytic derivative from the flux decomposition.
pub fn fisher_trajectory(
    f: &StandardMonotone,
    pi0: &CMat,
    delta0: &CMat,
    evo: &dyn Evolution,
    t_max: f64,
    dt: f64,
    fd_only: bool,
) -> Result<FluxReport> {
    if !fd_only {
        f.measure_nodes()?;
    }
    linalg::validate_full_rank(pi0)?;
    let times = time_grid(t_max, dt)?;
    let pis = trajectory(evo, pi0, t_max, dt)?;
    let deltas = trajectory(evo, delta0, t_max, dt)?;
    let mut fisher_vals = Vec::with_capacity(times.len());
    let mut analytic = Vec::new();
    let mut rates = Vec::new();
    let mut currents = Vec::new();
    for ((t, pi), delta) in times.iter().zip(&pis).zip(&deltas) {
        fisher_vals.push(fisher::fisher_information(f, pi, delta)?);
        if !fd_only {
            let entry = flux_currents(f, &evo.generator(*t)?, pi, delta)?;
            analytic.push(entry.total);
            rates.push(entry.rates);
            currents.push(entry.currents);
        }
    }
    let finite_difference = richardson_derivative(&fisher_vals, dt);
    Ok(FluxReport {
        monotone: f.name.clone(),
        evolution: evo.label(),
        times,
        fisher: fisher_vals,
        analytic: (!fd_only).then_some(analytic),
        finite_difference,
        rates,
        currents,
    })
}

impl FluxReport {
    /// Largest `|analytic − fd| / max(|fd|, floor)` over the grid, where the
    /// floor is `floor_frac` times the largest `|fd|`.
    pub fn max_relative_error(&self, floor_frac: f64) -> Option<f64> {
        let an = self.analytic.as_ref()?;
        let scale = self
            .finite_difference
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = (floor_frac * scale).max(f64::MIN_POSITIVE);
        Some(
            an.iter()
                .zip(&self.finite_difference)
                .filter(|(_, b)| b.is_finite())
                .map(|(a, b)| (a - b).abs() / b.abs().max(floor))
                .fold(0.0, f64::max),
        )
    }
}

/// Number of sign flips in a sequence, ignoring entries within `tol` of zero.
pub fn count_sign_changes(values: &[f64], tol: f64) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v.abs() <= tol || !v.is_finite() {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            count += 1;
        }
        last = v.signum();
    }
    count
}
