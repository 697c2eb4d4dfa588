//! Input files and named presets of the command line.

use std::path::Path;

use serde::Deserialize;

use crate::detailed_balance::fisher_not_alicki_qubit;
use crate::dynamics::{
    DepolarizingFamily, DepolarizingKind, Evolution, Lindbladian, QuantumChannel,
    ScheduledLindbladian,
};
use crate::error::{Error, Result};
use crate::io::{hermitian_from_json, read_json, GeneratorJson, MatrixJson, ParsedGenerator};
use crate::linalg::{self, CMat};

pub const DEFAULT_MONOTONES: &str = "bures,harmonic,sqrt,kmb,wy";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatesJson {
    rho: MatrixJson,
    sigma: Option<MatrixJson>,
    delta: Option<MatrixJson>,
    a: Option<MatrixJson>,
    b: Option<MatrixJson>,
}

/// A base state and optional companions, all of the same dimension.
pub struct States {
    pub rho: CMat,
    pub sigma: Option<CMat>,
    pub delta: Option<CMat>,
    pub a: Option<CMat>,
    pub b: Option<CMat>,
}

fn hermitian(m: &Option<MatrixJson>, d: usize) -> Result<Option<CMat>> {
    m.as_ref()
        .map(|m| {
            let h = hermitian_from_json(m)?.matrix;
            linalg::ensure_dim(&h, d)?;
            Ok(h)
        })
        .transpose()
}

pub fn load_states(path: &Path) -> Result<States> {
    let raw: StatesJson = read_json(path)?;
    let rho = hermitian_from_json(&raw.rho)?.matrix;
    let d = rho.nrows();
    linalg::validate_state(&rho)?;
    let sigma = hermitian(&raw.sigma, d)?;
    let plain = |m: &Option<MatrixJson>| -> Result<Option<CMat>> {
        m.as_ref()
            .map(|m| {
                let x = m.to_matrix()?;
                linalg::ensure_dim(&x, d)?;
                Ok(x)
            })
            .transpose()
    };
    Ok(States {
        rho,
        sigma,
        delta: hermitian(&raw.delta, d)?,
        a: plain(&raw.a)?,
        b: plain(&raw.b)?,
    })
}

/// A matrix file holding a density matrix.
pub fn load_matrix_state(path: &Path) -> Result<CMat> {
    let m: MatrixJson = read_json(path)?;
    let rho = hermitian_from_json(&m)?.matrix;
    linalg::validate_state(&rho)?;
    Ok(rho)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    pi: MatrixJson,
    delta: MatrixJson,
}

/// `(π, δρ)` from a file, or the maximally mixed state with
/// `δρ = 0.1 (|0⟩⟨0| − |1⟩⟨1|)`.
pub fn load_state(path: Option<&Path>, d: usize) -> Result<(CMat, CMat)> {
    match path {
        Some(p) => {
            let raw: PointJson = read_json(p)?;
            let pi = hermitian_from_json(&raw.pi)?.matrix;
            let delta = hermitian_from_json(&raw.delta)?.matrix;
            linalg::ensure_dim(&pi, d)?;
            linalg::ensure_dim(&delta, d)?;
            Ok((pi, delta))
        }
        None => {
            let mut w = vec![0.0; d];
            w[0] = 0.1;
            if d > 1 {
                w[1] = -0.1;
            }
            Ok((linalg::maximally_mixed(d), linalg::diag(&w)))
        }
    }
}

fn preset_parameter(name: &str, default: f64) -> Result<(&str, f64)> {
    match name.split_once(':') {
        Some((head, p)) => match p.parse::<f64>() {
            Ok(v) => Ok((head, v)),
            Err(_) => Ok((name, default)),
        },
        None => Ok((name, default)),
    }
}

pub enum Dynamics {
    Depolarizing(DepolarizingFamily),
    Fixed(Lindbladian),
    Scheduled(ScheduledLindbladian),
}

impl Dynamics {
    pub fn evolution(&self) -> &dyn Evolution {
        match self {
            Dynamics::Depolarizing(d) => d,
            Dynamics::Fixed(l) => l,
            Dynamics::Scheduled(s) => s,
        }
    }
}

pub fn load_dynamics(preset: Option<&str>, generator: Option<&Path>) -> Result<Dynamics> {
    match (preset, generator) {
        (Some("depolarizing:markov"), None) => Ok(Dynamics::Depolarizing(DepolarizingFamily::new(
            DepolarizingKind::Markov,
        ))),
        (Some("depolarizing:nonmarkov"), None) => Ok(Dynamics::Depolarizing(
            DepolarizingFamily::new(DepolarizingKind::NonMarkov),
        )),
        (Some(name), None) => match preset_parameter(name, 1.0)? {
            ("amplitude-damping", gamma) if gamma >= 0.0 => {
                Ok(Dynamics::Fixed(Lindbladian::amplitude_damping(gamma)))
            }
            _ => Err(Error::UnknownName(name.into())),
        },
        (None, Some(p)) => {
            let raw: GeneratorJson = read_json(p)?;
            Ok(match raw.parse()? {
                ParsedGenerator::Fixed(l) => Dynamics::Fixed(l),
                ParsedGenerator::Scheduled(s) => Dynamics::Scheduled(s),
            })
        }
        _ => Err(Error::Schema(
            "give exactly one of --preset or --generator".into(),
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelJson {
    kraus: Vec<MatrixJson>,
}

pub fn load_channel(preset: Option<&str>, path: Option<&Path>) -> Result<QuantumChannel> {
    match (preset, path) {
        (Some(name), None) => match preset_parameter(name, f64::NAN)? {
            ("amplitude-damping", p) if (0.0..=1.0).contains(&p) => {
                QuantumChannel::amplitude_damping(p)
            }
            ("depolarizing", l) if (0.0..=4.0 / 3.0).contains(&l) => {
                Ok(QuantumChannel::depolarizing(2, l))
            }
            _ => Err(Error::UnknownName(name.into())),
        },
        (None, Some(p)) => {
            let raw: ChannelJson = read_json(p)?;
            let kraus = raw
                .kraus
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<Result<Vec<_>>>()?;
            if kraus.is_empty() {
                return Err(Error::Schema("`kraus` is empty".into()));
            }
            QuantumChannel::from_kraus(kraus)
        }
        _ => Err(Error::Schema(
            "give exactly one of --preset or --channel".into(),
        )),
    }
}

/// Superoperator and reference state of a detailed-balance question.
pub fn load_db_problem(
    preset: Option<&str>,
    generator: Option<&Path>,
    state: Option<&Path>,
) -> Result<(CMat, CMat)> {
    match (preset, generator) {
        (Some(name), None) => match preset_parameter(name, 1.0)? {
            ("fisher-not-alicki", beta) if beta > 0.0 => {
                let (l, pi) = fisher_not_alicki_qubit(beta);
                Ok((l.superop(), pi))
            }
            _ => Err(Error::UnknownName(name.into())),
        },
        (None, Some(p)) => {
            let raw: GeneratorJson = read_json(p)?;
            let l = match raw.parse()? {
                ParsedGenerator::Fixed(l) => l,
                ParsedGenerator::Scheduled(_) => {
                    return Err(Error::Schema(
                        "detailed balance needs a time-independent generator".into(),
                    ))
                }
            };
            let s = state.ok_or_else(|| Error::Schema("--generator needs --state".into()))?;
            let pi = load_matrix_state(s)?;
            linalg::ensure_dim(&pi, l.dim())?;
            Ok((l.superop(), pi))
        }
        _ => Err(Error::Schema(
            "give exactly one of --preset or --generator".into(),
        )),
    }
}
