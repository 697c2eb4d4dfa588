//! Measures on `[0, 1]` that represent a monotone through
//! `1/f(x) = ∫ dN(s) (1/(x+s) + 1/(1+sx))`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Number of Gauss-Legendre nodes used for the continuous part.
pub const GL_NODES: usize = 64;

/// Smoothing order of the change of variables `s = u^m`.
const SMOOTHING: f64 = 4.0;

pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct MeasureDescriptor {
    /// Point masses `(location, weight)`.
    pub dirac_points: Vec<(f64, f64)>,
    /// Continuous density on `(0, 1)`.
    pub density: Option<Density>,
    /// `p ∈ [0, 1)` such that `density(s) · s^p` stays bounded as `s → 0`.
    pub singular_exponent: f64,
}

impl std::fmt::Debug for MeasureDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeasureDescriptor")
            .field("dirac_points", &self.dirac_points)
            .field("density", &self.density.as_ref().map(|_| "fn"))
            .field("singular_exponent", &self.singular_exponent)
            .finish()
    }
}

impl MeasureDescriptor {
    pub fn dirac(points: Vec<(f64, f64)>) -> Self {
        Self {
            dirac_points: points,
            density: None,
            singular_exponent: 0.0,
        }
    }

    pub fn continuous(density: impl Fn(f64) -> f64 + Send + Sync + 'static, p: f64) -> Self {
        Self {
            dirac_points: vec![],
            density: Some(Arc::new(density)),
            singular_exponent: p,
        }
    }

    /// `∫ dN(s) h(s)`: point masses exactly, the density by Gauss-Legendre
    /// in `u` with `s = u^m`, where `m` makes the transformed weight a
    /// polynomial of degree `SMOOTHING - 1` near the origin.
    pub fn integrate(&self, h: impl Fn(f64) -> f64) -> f64 {
        self.nodes().iter().map(|&(s, w)| w * h(s)).sum()
    }

    /// Quadrature nodes `(s, weight)`: the point masses followed by the
    /// transformed Gauss-Legendre nodes of the density.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = self.dirac_points.clone();
        if let Some(rho) = &self.density {
            let m = SMOOTHING / (1.0 - self.singular_exponent);
            let (xs, ws) = gauss_legendre();
            for (x, w) in xs.iter().zip(ws) {
                let u = 0.5 * (x + 1.0);
                let s = u.powf(m);
                let jac = m * u.powf(m - 1.0);
                out.push((s, 0.5 * w * rho(s) * jac));
            }
        }
        out
    }

    /// `∫ dN(s) 2/(1+s)`, which equals one for a normalized measure.
    pub fn normalization(&self) -> f64 {
        self.integrate(|s| 2.0 / (1.0 + s))
    }

    /// `1/f(x)` reconstructed from the measure.
    pub fn inverse_monotone(&self, x: f64) -> f64 {
        self.integrate(|s| 1.0 / (x + s) + 1.0 / (1.0 + s * x))
    }
}

fn unsupported(name: &str) -> Error {
    Error::UnsupportedMeasure {
        name: name.to_string(),
        hint: "use finite differences instead (--fd-only)",
    }
}

/// Quadrature nodes of a possibly absent measure.
pub fn measure_nodes(m: Option<&MeasureDescriptor>, name: &str) -> Result<Vec<(f64, f64)>> {
    m.map(|m| m.nodes()).ok_or_else(|| unsupported(name))
}

/// Integrates with a possibly absent measure.
pub fn measure_quadrature(
    m: Option<&MeasureDescriptor>,
    name: &str,
    h: impl Fn(f64) -> f64,
) -> Result<f64> {
    match m {
        Some(m) => Ok(m.integrate(h)),
        None => Err(unsupported(name)),
    }
}

/// Nodes and weights of the 64-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(GL_NODES))
}

/// Newton iteration on the Legendre polynomial from Chebyshev-like guesses.
pub fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
