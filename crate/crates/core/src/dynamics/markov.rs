//! Markovianity diagnostics: signs of canonical rates over time, Fisher
//! contraction along the evolution (with and without an ancilla), and the
//! search for Fisher expansion under a positive but not CP map.

use rand::Rng;
use serde::Serialize;

use crate::dynamics::channel::QuantumChannel;
use crate::dynamics::lindblad::{canonical_form, time_grid, trajectory, Evolution, WithAncilla};
use crate::error::Result;
use crate::fisher;
use crate::linalg::{self, random, CMat};
use crate::monotone::{self, StandardMonotone};

/// Rates at or above this value count as nonnegative.
pub const RATE_NONNEG_TOL: f64 = 1e-9;
/// A rate below minus this value witnesses a non-CP-divisible step.
pub const RATE_NEG_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum MarkovVerdict {
    Markovian,
    NonMarkovian,
    Inconclusive,
}

impl std::fmt::Display for MarkovVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MarkovVerdict::Markovian => "MARKOVIAN",
            MarkovVerdict::NonMarkovian => "NON-MARKOVIAN",
            MarkovVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RateWitness {
    pub t: f64,
    pub index: usize,
    pub rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionWitness {
    pub t: f64,
    pub sample: usize,
    pub ancilla: bool,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkovReport {
    pub evolution: String,
    pub verdict: MarkovVerdict,
    pub times: Vec<f64>,
    /// Smallest canonical rate at each time.
    pub min_rates: Vec<f64>,
    pub rate_witness: Option<RateWitness>,
    pub samples: usize,
    /// First observed increase of the Fisher information, if any.
    pub fisher_expansion: Option<ContractionWitness>,
}

/// Canonical rates of the generator at time `t`, ascending.
pub fn canonical_rates(evo: &dyn Evolution, t: f64) -> Result<Vec<f64>> {
    Ok(canonical_form(&evo.generator_superop(t)?, evo.dim())?.rates)
}

fn first_increase(series: &[f64]) -> Option<usize> {
    series
        .windows(2)
        .position(|w| w[1] > w[0] * (1.0 + 1e-9) + 1e-12)
        .map(|k| k + 1)
}

/// Rates-sign verdict plus a Fisher-contraction scan over `samples` random
/// `(π, δρ)` pairs, half of them on the system extended by an equal-sized
/// ancilla.
pub fn markov_report(
    evo: &dyn Evolution,
    t_max: f64,
    dt: f64,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<MarkovReport> {
    let times = time_grid(t_max, dt)?;
    let mut min_rates = Vec::with_capacity(times.len());
    let mut rate_witness: Option<RateWitness> = None;
    for &t in &times {
        let rates = canonical_rates(evo, t)?;
        let (index, rate) =
            rates
                .iter()
                .cloned()
                .enumerate()
                .fold(
                    (0, f64::INFINITY),
                    |acc, (i, r)| if r < acc.1 { (i, r) } else { acc },
                );
        min_rates.push(rate);
        if rate < -RATE_NEG_TOL && rate_witness.is_none() {
            rate_witness = Some(RateWitness { t, index, rate });
        }
    }
    let lowest = min_rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if rate_witness.is_some() {
        MarkovVerdict::NonMarkovian
    } else if lowest >= -RATE_NONNEG_TOL {
        MarkovVerdict::Markovian
    } else {
        MarkovVerdict::Inconclusive
    };

    let d = evo.dim();
    let bures = monotone::bures();
    let extended = WithAncilla {
        inner: evo,
        d_anc: d,
    };
    let mut fisher_expansion = None;
    for sample in 0..samples {
        let ancilla = sample % 2 == 1;
        let target: &dyn Evolution = if ancilla { &extended } else { evo };
        let dim = target.dim();
        let pi0 = random::random_state_floor(dim, 0.05, rng);
        let delta0 = random::random_tangent(dim, rng);
        let pis = trajectory(target, &pi0, t_max, dt)?;
        let deltas = trajectory(target, &delta0, t_max, dt)?;
        let series = pis
            .iter()
            .zip(&deltas)
            .map(|(p, q)| fisher::fisher_information(&bures, p, q))
            .collect::<Result<Vec<_>>>()?;
        if let Some(k) = first_increase(&series) {
            let better = fisher_expansion
                .as_ref()
                .is_none_or(|w: &ContractionWitness| times[k] < w.t);
            if better {
                fisher_expansion = Some(ContractionWitness {
                    t: times[k],
                    sample,
                    ancilla,
                    before: series[k - 1],
                    after: series[k],
                });
            }
        }
    }
    Ok(MarkovReport {
        evolution: evo.label(),
        verdict,
        times,
        min_rates,
        rate_witness,
        samples,
        fisher_expansion,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionWitness {
    pub trial: usize,
    #[serde(skip)]
    pub rho: CMat,
    #[serde(skip)]
    pub delta: CMat,
    /// `𝓕_{f,ρ}(δρ)`.
    pub before: f64,
    /// `𝓕_{f,Φ(ρ)}(Φ(δρ))`.
    pub after: f64,
    pub output_min_eig: f64,
}

/// Smallest eigenvalue of `Φ(pρ + (1−p)1/d)`.
fn mixed_output_min(phi: &QuantumChannel, rho: &CMat, p: f64) -> Result<f64> {
    let d = rho.nrows();
    let mix = rho.scale(p) + linalg::maximally_mixed(d).scale(1.0 - p);
    Ok(linalg::eigh(&linalg::hermitize(&phi.apply(&mix)?))?.min())
}

/// Searches for a full-rank state `ρ` and perturbation `δρ` whose Fisher
/// information grows under `phi`, which is impossible for CPTP maps.
///
/// Each trial draws a pure state, mixes it with the maximally mixed state
/// until the output's smallest eigenvalue reaches a random target in
/// `[1e-4, 1e-2]`, and perturbs along the output's weakest direction pulled
/// back through `phi` (or, if `phi` is not invertible, along a random
/// perturbation diagonal in the eigenbasis of `ρ`).
pub fn fisher_expansion_search(
    phi: &QuantumChannel,
    f: &StandardMonotone,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<Option<ExpansionWitness>> {
    let d = phi.d_in;
    let inverse = if phi.d_in == phi.d_out {
        phi.superop.clone().try_inverse()
    } else {
        None
    };
    for trial in 0..trials {
        let target = 10f64.powf(rng.random_range(-4.0..-2.0));
        let pure = random::random_density(d, 1, rng);
        // min-eig of an affine family is concave: bisect on p in [0, 1]
        let mut p = 1.0;
        if mixed_output_min(phi, &pure, 1.0)? < target {
            let (mut lo, mut hi) = (0.0, 1.0);
            if mixed_output_min(phi, &pure, 0.0)? < target {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if mixed_output_min(phi, &pure, mid)? >= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            p = lo;
        }
        if p >= 1.0 {
            continue;
        }
        let rho = pure.scale(p) + linalg::maximally_mixed(d).scale(1.0 - p);
        let out = linalg::hermitize(&phi.apply(&rho)?);
        let eo = linalg::eigh(&out)?;
        if eo.min() <= linalg::RANK_EPS {
            continue;
        }
        let delta = match &inverse {
            Some(inv) => {
                let v = eo.vector(0);
                let weak = &v * v.adjoint() - &out;
                linalg::hermitize(&linalg::apply_super(inv, &weak))
            }
            None => {
                let er = linalg::eigh(&rho)?;
                let mut w: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mean = w.iter().sum::<f64>() / d as f64;
                w.iter_mut().for_each(|x| *x -= mean);
                er.from_eigenbasis(&linalg::diag(&w))
            }
        };
        let before = fisher::fisher_information(f, &rho, &delta)?;
        let after = fisher::fisher_information(f, &out, &linalg::hermitize(&phi.apply(&delta)?))?;
        if after > before * (1.0 + 1e-9) {
            return Ok(Some(ExpansionWitness {
                trial,
                rho,
                delta,
                before,
                after,
                output_min_eig: eo.min(),
            }));
        }
    }
    Ok(None)
}
