//! Closed-form geodesics of the Bures and Wigner-Yanase metrics.

use crate::error::Result;
use crate::fisher::FisherOperator;
use crate::linalg::{self, CMat};
use crate::monotone::StandardMonotone;

/// Uhlmann fidelity clamped to `[0, 1]`.
pub fn fidelity(rho: &CMat, sigma: &CMat) -> Result<f64> {
    Ok(linalg::fidelity(rho, sigma)?.clamp(0.0, 1.0))
}

/// Geodesic distance of the Bures metric, `2 arccos F`.
pub fn bures_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    Ok(2.0 * fidelity(rho, sigma)?.acos())
}

/// Bures length `√(2(1 - F))`.
pub fn bures_length(rho: &CMat, sigma: &CMat) -> Result<f64> {
    Ok((2.0 * (1.0 - fidelity(rho, sigma)?)).max(0.0).sqrt())
}

/// `Tr √ρ √σ`, clamped to `[0, 1]`.
pub fn affinity(rho: &CMat, sigma: &CMat) -> Result<f64> {
    let a = (linalg::sqrtm(rho)? * linalg::sqrtm(sigma)?).trace().re;
    Ok(a.clamp(0.0, 1.0))
}

/// Geodesic distance of the Wigner-Yanase metric, `2 arccos Tr √ρ √σ`.
pub fn wy_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    Ok(2.0 * affinity(rho, sigma)?.acos())
}

/// Point `t ∈ [0, 1]` of the Wigner-Yanase geodesic from `ρ` to `σ`.
pub fn wy_geodesic_path(rho: &CMat, sigma: &CMat, t: f64) -> Result<CMat> {
    let a = linalg::sqrtm(rho)?;
    let b = linalg::sqrtm(sigma)?;
    let m = a.scale(1.0 - t) + b.scale(t);
    let sq = &m * &m;
    let tr = sq.trace().re;
    Ok(linalg::hermitize(&(sq / linalg::re(tr))))
}

/// Length of an unnormalized geodesic from the angle between the endpoints:
/// `√((r0 + r1) - 2√(r0 r1) cos Δθ)`.
///
/// Lengths and angles share the one-quarter normalization of the metric, so
/// for the Bures metric `Δθ = d_B/2` and for Wigner-Yanase `Δθ = d_WY/2`.
pub fn unnormalized_length(angle: f64, r0: f64, r1: f64) -> f64 {
    ((r0 + r1) - 2.0 * (r0 * r1).sqrt() * angle.cos())
        .max(0.0)
        .sqrt()
}

/// Direct Wigner-Yanase length between positive operators, `‖√A - √B‖_F`.
pub fn wy_length_positive(a: &CMat, b: &CMat) -> Result<f64> {
    Ok(linalg::frobenius(&(linalg::sqrtm(a)? - linalg::sqrtm(b)?)))
}

/// Direct Bures length between positive operators,
/// `√(Tr A + Tr B - 2 Tr √(√A B √A))`.
pub fn bures_length_positive(a: &CMat, b: &CMat) -> Result<f64> {
    let f = linalg::fidelity(a, b)?;
    let v = a.trace().re + b.trace().re - 2.0 * f;
    Ok(v.max(0.0).sqrt())
}

/// Length of a discretized path measured with the Fisher metric of `f`,
/// evaluating each segment at its midpoint.
pub fn path_length(
    f: &StandardMonotone,
    path: impl Fn(f64) -> Result<CMat>,
    segments: usize,
) -> Result<f64> {
    let mut prev = path(0.0)?;
    let mut total = 0.0;
    for k in 1..=segments {
        let next = path(k as f64 / segments as f64)?;
        let mid = linalg::hermitize(&((&prev + &next) / linalg::re(2.0)));
        let j = FisherOperator::new(f, &mid)?;
        total += j.information(&(&next - &prev))?.max(0.0).sqrt();
        prev = next;
    }
    Ok(total)
}
