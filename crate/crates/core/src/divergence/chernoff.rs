//! Trace distance and the quantum Chernoff exponent.

use crate::error::Result;
use crate::fisher::FisherOperator;
use crate::linalg::{self, CMat, RANK_EPS};
use crate::monotone;

/// `Tr |ρ - σ|` (no factor one half).
pub fn trace_distance(rho: &CMat, sigma: &CMat) -> Result<f64> {
    linalg::trace_norm(&(rho - sigma))
}

/// Maximizes `-log Tr ρ0^s ρ1^{1-s}` over `s ∈ [0, 1]` by golden-section
/// search. Returns `(s*, ξ)`.
pub fn chernoff_optimize(rho0: &CMat, rho1: &CMat) -> Result<(f64, f64)> {
    let e0 = linalg::validate_state(rho0)?;
    let e1 = linalg::validate_state(rho1)?;
    let pw = |e: &linalg::Eigh, p: f64| e.map(|x| if x <= RANK_EPS { 0.0 } else { x.powf(p) });
    let phi = |s: f64| -> f64 {
        let t = (pw(&e0, s) * pw(&e1, 1.0 - s)).trace().re;
        -t.ln()
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while b - a > 1e-8 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = phi(d);
        }
    }
    let s = 0.5 * (a + b);
    Ok((s, phi(s).max(0.0)))
}

/// Local form `(ε²/8) 𝓕_WY,ρ0(δρ)`.
pub fn chernoff_local(rho0: &CMat, delta: &CMat, eps: f64) -> Result<f64> {
    let j = FisherOperator::new(&monotone::wigner_yanase(), rho0)?;
    Ok(eps * eps / 8.0 * j.information(delta)?)
}
