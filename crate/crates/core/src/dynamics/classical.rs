//! Classical stochastic generators: rate matrices, detailed balance, and
//! the trace-distance derivative.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::dynamics::lindblad::Lindbladian;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Generator `R` of `ṗ = R p`, with `R[i][j] = a_{i←j}` off the diagonal
/// and the diagonal fixed by zero column sums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateMatrix {
    pub matrix: DMatrix<f64>,
}

impl RateMatrix {
    /// From the off-diagonal rates; the diagonal of `rates` is ignored.
    pub fn from_rates(rates: DMatrix<f64>) -> Result<Self> {
        let (r, c) = rates.shape();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        let mut m = rates;
        for j in 0..c {
            m[(j, j)] = 0.0;
            let out: f64 = m.column(j).sum();
            m[(j, j)] = -out;
        }
        Ok(Self { matrix: m })
    }

    /// From a full generator whose columns must already sum to zero.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c {
            return Err(Error::NotSquare { rows: r, cols: c });
        }
        for j in 0..c {
            let s: f64 = m.column(j).sum();
            if s.abs() > 1e-12 {
                return Err(Error::Constraint(format!(
                    "column {j} sums to {s:e}, expected 0"
                )));
            }
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `a_{i←j}` for `i ≠ j`, zero on the diagonal.
    pub fn decompose(&self) -> DMatrix<f64> {
        let mut a = self.matrix.clone();
        a.fill_diagonal(0.0);
        a
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(p))
            .as_slice()
            .to_vec()
    }

    /// GKLS generator with one jump `|i⟩⟨j|` per nonzero rate.
    pub fn to_lindbladian(&self) -> Lindbladian {
        let d = self.dim();
        let mut jumps = Vec::new();
        let mut rates = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if i != j && self.matrix[(i, j)] != 0.0 {
                    jumps.push(linalg::unit(d, i, j));
                    rates.push(self.matrix[(i, j)]);
                }
            }
        }
        Lindbladian {
            h: CMat::zeros(d, d),
            jumps,
            rates,
        }
    }
}

/// `a_{i←j} = R[i][j]` for a whole time grid: Markovian iff every
/// off-diagonal rate is nonnegative at every time.
pub fn is_classical_markov(grid: &[RateMatrix], tol: f64) -> bool {
    grid.iter().all(|r| {
        let a = r.decompose();
        a.iter().all(|&x| x >= -tol)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalDbReport {
    /// `max |a_{i←j} π_j − a_{j←i} π_i|`.
    pub pair_residual: f64,
    /// `‖R J_π − J_π Rᵀ‖_F` with `J_π = diag(π)`.
    pub operator_residual: f64,
    pub holds: bool,
}

pub const CLASSICAL_DB_TOL: f64 = 1e-10;

pub fn classical_db_check(r: &RateMatrix, pi: &[f64]) -> Result<ClassicalDbReport> {
    let d = r.dim();
    if pi.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: pi.len(),
        });
    }
    if let Some(&bad) = pi.iter().find(|&&p| !(p > 0.0)) {
        return Err(Error::RankDeficient { min_eig: bad });
    }
    let a = r.decompose();
    let mut pair_residual: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            pair_residual = pair_residual.max((a[(i, j)] * pi[j] - a[(j, i)] * pi[i]).abs());
        }
    }
    let jp = DMatrix::from_diagonal(&DVector::from_column_slice(pi));
    let operator_residual = (&r.matrix * &jp - &jp * r.matrix.transpose()).norm();
    Ok(ClassicalDbReport {
        pair_residual,
        operator_residual,
        holds: pair_residual < CLASSICAL_DB_TOL && operator_residual < CLASSICAL_DB_TOL,
    })
}

/// Right derivative of `‖x‖₁` along `ẋ = R x`. Components at zero
/// contribute `|(R x)_i|` since they can only grow in magnitude.
pub fn trace_distance_derivative(r: &RateMatrix, x: &[f64]) -> f64 {
    let rx = r.apply(x);
    x.iter()
        .zip(&rx)
        .map(|(&xi, &v)| if xi == 0.0 { v.abs() } else { xi.signum() * v })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct SignCase {
    pub x: Vec<f64>,
    pub derivative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeRateDemo {
    pub rates: RateMatrix,
    /// Negative entry `a_{0←1}`.
    pub negative_rate: f64,
    /// Traceless qubit vectors, one per sign pattern of the first entry.
    pub qubit_cases: Vec<SignCase>,
    pub qubit_contracts: bool,
    pub embedded_rates: RateMatrix,
    pub embedded_witness: SignCase,
    pub embedded_expands: bool,
}

/// Two-level generator with `a_{0←1} = −0.3`, `a_{1←0} = 1.0`: it is not
/// Markovian, yet the trace distance between any two qubit distributions
/// shrinks. Adding a third, idle level exposes a vector whose trace norm grows.
pub fn negative_rate_counterexample() -> NegativeRateDemo {
    let mut a = DMatrix::zeros(2, 2);
    a[(0, 1)] = -0.3;
    a[(1, 0)] = 1.0;
    let rates = RateMatrix::from_rates(a.clone()).expect("square");
    let qubit_cases: Vec<SignCase> = [1.0, -1.0]
        .iter()
        .flat_map(|&s| [0.01, 0.3, 1.0].map(|m| vec![s * m, -s * m]))
        .map(|x| SignCase {
            derivative: trace_distance_derivative(&rates, &x),
            x,
        })
        .collect();
    let qubit_contracts = qubit_cases.iter().all(|c| c.derivative <= 0.0);
    let mut a3 = DMatrix::zeros(3, 3);
    a3.view_mut((0, 0), (2, 2)).copy_from(&a);
    let embedded_rates = RateMatrix::from_rates(a3).expect("square");
    let x = vec![0.0, 1.0, -1.0];
    let embedded_witness = SignCase {
        derivative: trace_distance_derivative(&embedded_rates, &x),
        x,
    };
    let embedded_expands = embedded_witness.derivative > 0.0;
    NegativeRateDemo {
        negative_rate: a[(0, 1)],
        rates,
        qubit_cases,
        qubit_contracts,
        embedded_rates,
        embedded_witness,
        embedded_expands,
    }
}
