//! Contrast functions, χ²-type divergences and related distinguishability
//! measures.

pub mod chernoff;
pub mod geodesic;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher::FisherOperator;
use crate::linalg::{self, CMat, Eigh, RANK_EPS};
use crate::monotone::{self, StandardConvex, StandardMonotone};

pub use chernoff::{chernoff_local, chernoff_optimize, trace_distance};
pub use geodesic::{
    bures_distance, bures_length, fidelity, unnormalized_length, wy_distance, wy_geodesic_path,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Coordinate,
    ClosedForm,
    Integral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Finite(f64),
    /// Support mismatch with an unbounded convex function.
    Infinite,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DivergenceResult {
    pub value: Value,
    pub method: Method,
    pub symmetric: bool,
}

impl DivergenceResult {
    fn finite(v: f64, method: Method, symmetric: bool) -> Self {
        Self {
            value: Value::Finite(v),
            method,
            symmetric,
        }
    }

    pub fn get(&self) -> Option<f64> {
        match self.value {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.value, Value::Infinite)
    }

    /// Finite value, or an error for the infinite state.
    pub fn value(&self) -> Result<f64> {
        self.get()
            .ok_or_else(|| Error::Constraint("divergence is infinite".into()))
    }
}

/// A convex function `g` with `g(1) = 0` defining `H_g`.
#[derive(Clone)]
pub struct ContrastFn {
    pub name: String,
    g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for ContrastFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ContrastFn({})", self.name)
    }
}

impl ContrastFn {
    pub fn new(name: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            g: Arc::new(g),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.g)(x)
    }

    /// `(g(x) + x g(1/x)) / 2`.
    pub fn symmetrized(&self) -> ContrastFn {
        let g = self.g.clone();
        ContrastFn::new(format!("sym({})", self.name), move |x| {
            if x == 0.0 {
                return f64::INFINITY;
            }
            0.5 * (g(x) + x * g(1.0 / x))
        })
    }

    pub fn relative_entropy() -> Self {
        Self::new("relative-entropy", |x| -x.ln())
    }

    pub fn alpha(alpha: f64) -> Self {
        Self::new(format!("alpha:{alpha}"), move |x| {
            (x.powf(alpha) - 1.0) / (alpha * (alpha - 1.0))
        })
    }

    pub fn wigner_yanase() -> Self {
        Self::new("wy", |x| 4.0 * (1.0 - x.sqrt()))
    }

    pub fn bures() -> Self {
        Self::new("bures", |x| (x - 1.0) * (x - 1.0) / (x + 1.0))
    }

    pub fn harmonic() -> Self {
        Self::new("harmonic", |x| 0.5 * (x - 1.0) * (x - 1.0))
    }

    pub fn sqrt() -> Self {
        Self::new("sqrt", |x| (1.0 - x) / x.sqrt())
    }

    pub fn variance() -> Self {
        Self::new("variance", |x| {
            let l = x.ln();
            0.5 * l * l
        })
    }

    /// The symmetrized convex function `L f`.
    pub fn from_monotone(f: &StandardMonotone) -> Self {
        Self::from(&monotone::convex::l_transform(f))
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.split_once(':') {
            Some(("alpha", p)) => {
                let a: f64 = p.parse().map_err(|_| Error::UnknownName(name.into()))?;
                if !(-1.0..=2.0).contains(&a) || a == 0.0 || a == 1.0 {
                    return Err(Error::OutOfRange {
                        name: "alpha",
                        value: a,
                        range: "[-1, 2] without 0 and 1",
                    });
                }
                Ok(Self::alpha(a))
            }
            None => match name {
                "relative-entropy" => Ok(Self::relative_entropy()),
                "wy" => Ok(Self::wigner_yanase()),
                "bures" => Ok(Self::bures()),
                "harmonic" => Ok(Self::harmonic()),
                "sqrt" => Ok(Self::sqrt()),
                "variance" => Ok(Self::variance()),
                _ => Err(Error::UnknownName(name.into())),
            },
            _ => Err(Error::UnknownName(name.into())),
        }
    }
}

impl From<&StandardConvex> for ContrastFn {
    fn from(g: &StandardConvex) -> Self {
        let g = g.clone();
        ContrastFn::new(g.name.clone(), move |x| g.eval(x))
    }
}

/// `H_g(ρ‖σ) = Σ_ij ρ_i g(σ_j/ρ_i) |<σ_j|ρ_i>|²`.
pub fn contrast(g: &ContrastFn, rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let er = linalg::validate_full_rank(rho)?;
    let es = linalg::validate_state(sigma)?;
    if er.dim() != es.dim() {
        return Err(Error::DimensionMismatch {
            expected: er.dim(),
            found: es.dim(),
        });
    }
    contrast_eig(g, &er, &es)
}

fn contrast_eig(g: &ContrastFn, er: &Eigh, es: &Eigh) -> Result<DivergenceResult> {
    let overlap = es.vectors.adjoint() * &er.vectors;
    let d = er.dim();
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            let w = overlap[(j, i)].norm_sqr();
            let sj = es.values[j].max(0.0);
            let ri = er.values[i];
            let ratio = if sj <= RANK_EPS { 0.0 } else { sj / ri };
            let gv = g.eval(ratio);
            if !gv.is_finite() {
                if w > 1e-14 {
                    return Ok(DivergenceResult {
                        value: Value::Infinite,
                        method: Method::Coordinate,
                        symmetric: false,
                    });
                }
                continue;
            }
            total += ri * gv * w;
        }
    }
    Ok(DivergenceResult::finite(total, Method::Coordinate, false))
}

/// `(H_g(ρ‖σ) + H_g(σ‖ρ)) / 2`.
pub fn symmetric_contrast(g: &ContrastFn, rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let a = contrast(g, rho, sigma)?;
    let b = contrast(g, sigma, rho)?;
    Ok(match (a.get(), b.get()) {
        (Some(x), Some(y)) => DivergenceResult::finite(0.5 * (x + y), Method::Coordinate, true),
        _ => DivergenceResult {
            value: Value::Infinite,
            method: Method::Coordinate,
            symmetric: true,
        },
    })
}

fn power(e: &Eigh, p: f64) -> CMat {
    e.map(|x| if x <= RANK_EPS { 0.0 } else { x.powf(p) })
}

fn log_full(e: &Eigh) -> Result<CMat> {
    if e.min() <= RANK_EPS {
        return Err(Error::RankDeficient { min_eig: e.min() });
    }
    Ok(e.map(f64::ln))
}

fn check_pair(rho: &CMat, sigma: &CMat) -> Result<(Eigh, Eigh)> {
    let er = linalg::validate_state(rho)?;
    let es = linalg::validate_state(sigma)?;
    if er.dim() != es.dim() {
        return Err(Error::DimensionMismatch {
            expected: er.dim(),
            found: es.dim(),
        });
    }
    Ok((er, es))
}

/// Umegaki relative entropy `Tr ρ (log ρ - log σ)`; infinite when the
/// support of `ρ` is not contained in that of `σ`.
pub fn relative_entropy(rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let (er, es) = check_pair(rho, sigma)?;
    let overlap = es.vectors.adjoint() * &er.vectors;
    let d = er.dim();
    let mut total = 0.0;
    for i in 0..d {
        let ri = er.values[i];
        if ri <= RANK_EPS {
            continue;
        }
        total += ri * ri.ln();
        for j in 0..d {
            let w = overlap[(j, i)].norm_sqr();
            let sj = es.values[j];
            if sj <= RANK_EPS {
                if w > 1e-14 {
                    return Ok(DivergenceResult {
                        value: Value::Infinite,
                        method: Method::ClosedForm,
                        symmetric: false,
                    });
                }
                continue;
            }
            total -= ri * sj.ln() * w;
        }
    }
    Ok(DivergenceResult::finite(total, Method::ClosedForm, false))
}

/// `(Tr[σ^α ρ^{1-α}] - 1) / (α(α-1))`.
pub fn alpha_divergence(alpha: f64, rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    if !(-1.0..=2.0).contains(&alpha) || alpha == 0.0 || alpha == 1.0 {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[-1, 2] without 0 and 1",
        });
    }
    let (er, es) = check_pair(rho, sigma)?;
    if (alpha < 0.0 && es.min() <= RANK_EPS) || (alpha > 1.0 && er.min() <= RANK_EPS) {
        return Err(Error::RankDeficient {
            min_eig: es.min().min(er.min()),
        });
    }
    let t = (power(&es, alpha) * power(&er, 1.0 - alpha)).trace().re;
    Ok(DivergenceResult::finite(
        (t - 1.0) / (alpha * (alpha - 1.0)),
        Method::ClosedForm,
        false,
    ))
}

/// Petz-Rényi divergence `log Tr[ρ^α σ^{1-α}] / (α - 1)`.
pub fn renyi(alpha: f64, rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    if alpha <= 0.0 || alpha == 1.0 {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "(0, inf) without 1",
        });
    }
    let (er, es) = check_pair(rho, sigma)?;
    if alpha > 1.0 && es.min() <= RANK_EPS {
        return Err(Error::RankDeficient { min_eig: es.min() });
    }
    let t = (power(&er, alpha) * power(&es, 1.0 - alpha)).trace().re;
    if t <= 0.0 {
        return Ok(DivergenceResult {
            value: Value::Infinite,
            method: Method::ClosedForm,
            symmetric: false,
        });
    }
    Ok(DivergenceResult::finite(
        t.ln() / (alpha - 1.0),
        Method::ClosedForm,
        false,
    ))
}

/// `4 (1 - Tr √ρ √σ)`.
pub fn wy_contrast(rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let (er, es) = check_pair(rho, sigma)?;
    let a = (linalg::sqrt_psd(&er) * linalg::sqrt_psd(&es)).trace().re;
    Ok(DivergenceResult::finite(
        4.0 * (1.0 - a),
        Method::ClosedForm,
        true,
    ))
}

/// `Tr[(ρ-σ) (L_σ + R_ρ)⁻¹ (ρ-σ)]`.
pub fn bures_contrast(rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let (er, es) = check_pair(rho, sigma)?;
    let x = rho - sigma;
    let b = linalg::sandwich_inverse_eig(&es, &er, 1.0, &x)?;
    Ok(DivergenceResult::finite(
        (&x * b).trace().re,
        Method::ClosedForm,
        false,
    ))
}

/// `(Tr[σ² ρ⁻¹] - 1) / 2`.
pub fn harmonic_contrast(rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let (er, _) = check_pair(rho, sigma)?;
    if er.min() <= RANK_EPS {
        return Err(Error::RankDeficient { min_eig: er.min() });
    }
    let inv = er.map(|x| 1.0 / x);
    let t = (sigma * sigma * inv).trace().re;
    Ok(DivergenceResult::finite(
        0.5 * (t - 1.0),
        Method::ClosedForm,
        false,
    ))
}

/// `Tr[√ρ (ρ - σ) σ^{-1/2}]`.
pub fn sq_contrast(rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let (er, es) = check_pair(rho, sigma)?;
    if es.min() <= RANK_EPS {
        return Err(Error::RankDeficient { min_eig: es.min() });
    }
    let t = (linalg::sqrt_psd(&er) * (rho - sigma) * es.map(|x| x.powf(-0.5)))
        .trace()
        .re;
    Ok(DivergenceResult::finite(t, Method::ClosedForm, false))
}

/// `Tr[ρ (log ρ - log σ)²] / 2`.
pub fn quantum_info_variance(rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let (er, es) = check_pair(rho, sigma)?;
    let diff = log_full(&er)? - log_full(&es)?;
    let t = (rho * &diff * &diff).trace().re;
    Ok(DivergenceResult::finite(0.5 * t, Method::ClosedForm, false))
}

/// `χ²_f(ρ‖σ) = Tr[(ρ-σ) J_f⁻¹|ρ (ρ-σ)]`.
pub fn chi2(f: &StandardMonotone, rho: &CMat, sigma: &CMat) -> Result<DivergenceResult> {
    let j = FisherOperator::new(f, rho)?;
    let x = rho - sigma;
    Ok(DivergenceResult::finite(
        j.information(&x)?,
        Method::ClosedForm,
        false,
    ))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrderingReport {
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Sandwiches the symmetrized contrast of `g` between those of `L f_B`
/// and `L f_H`.
pub fn symmetrized_ordering_check(
    g: &ContrastFn,
    rho: &CMat,
    sigma: &CMat,
) -> Result<OrderingReport> {
    let lo = ContrastFn::from_monotone(&monotone::bures());
    let hi = ContrastFn::from_monotone(&monotone::harmonic());
    let lower = symmetric_contrast(&lo, rho, sigma)?.value()?;
    let middle = symmetric_contrast(g, rho, sigma)?.value()?;
    let upper = symmetric_contrast(&hi, rho, sigma)?.value()?;
    let tol = 1e-10;
    Ok(OrderingReport {
        lower,
        middle,
        upper,
        holds: lower <= middle + tol && middle <= upper + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::diag;

    #[test]
    fn classical_relative_entropy() {
        let r = diag(&[0.5, 0.5]);
        let s = diag(&[0.75, 0.25]);
        let v = contrast(&ContrastFn::relative_entropy(), &r, &s)
            .unwrap()
            .value()
            .unwrap();
        let want = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert!((v - want).abs() < 1e-14);
        assert!((v - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn support_mismatch_is_infinite() {
        let r = diag(&[0.5, 0.5]);
        let s = diag(&[1.0, 0.0]);
        assert!(contrast(&ContrastFn::relative_entropy(), &r, &s)
            .unwrap()
            .is_infinite());
        let wy = contrast(&ContrastFn::wigner_yanase(), &r, &s)
            .unwrap()
            .value()
            .unwrap();
        assert!((wy - 4.0 * (1.0 - 0.5f64.sqrt())).abs() < 1e-14);
    }
}
