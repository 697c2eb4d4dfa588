//! Standard monotone functions, their transforms and defining measures.
//!
//! Each monotone is stored as a function of the pair `(x, x - 1)` so that
//! ratios close to one can be evaluated without cancellation.

pub mod convex;
pub mod measure;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub use convex::StandardConvex;
pub use measure::{measure_quadrature, MeasureDescriptor};

use crate::error::{Error, Result};

/// Below this `|x - 1|` the mean falls back to its second-order expansion.
pub const NEAR_ONE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

type Kernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct StandardMonotone {
    pub name: String,
    kernel: Kernel,
    second_derivative: f64,
    pub measure: Option<MeasureDescriptor>,
    /// Membership in the class whose `J_f` is completely positive.
    pub cp_plus: Tri,
    /// Membership in the class whose `J_f^{-1}` is completely positive.
    pub cp_minus: Tri,
}

impl fmt::Debug for StandardMonotone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StandardMonotone")
            .field("name", &self.name)
            .field("measure", &self.measure)
            .field("cp_plus", &self.cp_plus)
            .field("cp_minus", &self.cp_minus)
            .finish()
    }
}

impl StandardMonotone {
    /// Wraps a kernel `k(x, u)` with `u = x - 1` supplied exactly.
    pub fn from_kernel(
        name: impl Into<String>,
        kernel: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        measure: Option<MeasureDescriptor>,
        cp_plus: Tri,
        cp_minus: Tri,
    ) -> Self {
        let kernel: Kernel = Arc::new(kernel);
        let h = 1e-3;
        let second_derivative = (kernel(1.0 + h, h) - 2.0 + kernel(1.0 - h, -h)) / (h * h);
        Self {
            name: name.into(),
            kernel,
            second_derivative,
            measure,
            cp_plus,
            cp_minus,
        }
    }

    /// Builds a monotone from a plain function of `x`.
    pub fn from_fn(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::from_kernel(name, move |x, _| f(x), None, Tri::Unknown, Tri::Unknown)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_u(x, x - 1.0)
    }

    fn eval_u(&self, x: f64, u: f64) -> f64 {
        if u.abs() < NEAR_ONE {
            1.0 + 0.5 * u + 0.5 * self.second_derivative * u * u
        } else {
            (self.kernel)(x, u)
        }
    }

    /// `b · f(a/b)`, the entry of the Fisher kernel at eigenvalues `(a, b)`.
    pub fn mean(&self, a: f64, b: f64) -> Result<f64> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::OutOfRange {
                name: "mean argument",
                value: a.min(b),
                range: "(0, inf)",
            });
        }
        Ok(b * self.eval_u(a / b, (a - b) / b))
    }

    /// Numerical estimate of `f''(1)`.
    pub fn second_derivative_at_one(&self) -> f64 {
        self.second_derivative
    }

    pub fn has_measure(&self) -> bool {
        self.measure.is_some()
    }

    /// Integrates against the defining measure.
    pub fn integrate(&self, h: impl Fn(f64) -> f64) -> Result<f64> {
        measure_quadrature(self.measure.as_ref(), &self.name, h)
    }

    /// `(s, weight)` pairs of the measure quadrature.
    pub fn measure_nodes(&self) -> Result<Vec<(f64, f64)>> {
        measure::measure_nodes(self.measure.as_ref(), &self.name)
    }

    /// Verifies normalization, symmetry, the pointwise bounds and
    /// monotonicity on the standard log grid.
    pub fn check_standard(&self) -> Result<()> {
        let fail = |property, x| Error::NotStandard {
            name: self.name.clone(),
            property,
            x,
        };
        if (self.eval(1.0) - 1.0).abs() > 1e-12 {
            return Err(fail("normalization", 1.0));
        }
        let grid = log_grid();
        let mut prev = f64::NEG_INFINITY;
        for &x in &grid {
            let fx = self.eval(x);
            if !fx.is_finite() {
                return Err(fail("finiteness", x));
            }
            if (fx - x * self.eval(1.0 / x)).abs() > 1e-10 * fx.max(1.0) {
                return Err(fail("symmetry", x));
            }
            let lo = 2.0 * x / (x + 1.0);
            let hi = (x + 1.0) / 2.0;
            let slack = 1e-12 * hi;
            if fx < lo - slack || fx > hi + slack {
                return Err(fail("bounds", x));
            }
            if fx < prev - 1e-12 * fx.abs() {
                return Err(fail("monotonicity", x));
            }
            prev = fx;
        }
        Ok(())
    }
}

/// 401 points, logarithmically spaced on `[1e-4, 1e4]`.
pub fn log_grid() -> Vec<f64> {
    (0..401)
        .map(|k| 10f64.powf(-4.0 + 8.0 * k as f64 / 400.0))
        .collect()
}

fn ln_ratio(u: f64) -> f64 {
    u.ln_1p()
}

pub fn bures() -> StandardMonotone {
    StandardMonotone::from_kernel(
        "bures",
        |x, _| 0.5 * (x + 1.0),
        Some(MeasureDescriptor::dirac(vec![(1.0, 1.0)])),
        Tri::No,
        Tri::Yes,
    )
}

pub fn harmonic() -> StandardMonotone {
    StandardMonotone::from_kernel(
        "harmonic",
        |x, _| 2.0 * x / (x + 1.0),
        Some(MeasureDescriptor::dirac(vec![(0.0, 0.5)])),
        Tri::Yes,
        Tri::No,
    )
}

pub fn sqrt() -> StandardMonotone {
    StandardMonotone::from_kernel(
        "sqrt",
        |x, _| x.sqrt(),
        Some(MeasureDescriptor::continuous(
            |s| 1.0 / (PI * s.sqrt()),
            0.5,
        )),
        Tri::Yes,
        Tri::Yes,
    )
}

pub fn kmb() -> StandardMonotone {
    StandardMonotone::from_kernel(
        "kmb",
        |_, u| u / ln_ratio(u),
        Some(MeasureDescriptor::continuous(|s| 1.0 / (1.0 + s), 0.0)),
        Tri::No,
        Tri::Yes,
    )
}

pub fn wigner_yanase() -> StandardMonotone {
    StandardMonotone::from_kernel(
        "wy",
        |x, _| {
            let r = 0.5 * (1.0 + x.sqrt());
            r * r
        },
        Some(alpha_measure(0.5)),
        Tri::No,
        Tri::Yes,
    )
}

fn alpha_measure(alpha: f64) -> MeasureDescriptor {
    if alpha == 0.0 || alpha == 1.0 {
        return MeasureDescriptor::continuous(|s| 1.0 / (1.0 + s), 0.0);
    }
    let c = (PI * alpha).sin() / (PI * alpha * (1.0 - alpha));
    if c.abs() < 1e-15 {
        // the endpoints of the parameter range reduce to the harmonic mean
        return MeasureDescriptor::dirac(vec![(0.0, 0.5)]);
    }
    let p = (-alpha).max(alpha - 1.0).max(0.0);
    MeasureDescriptor::continuous(
        move |s| c * (s.powf(alpha) + s.powf(1.0 - alpha)) / ((1.0 + s) * (1.0 + s)),
        p,
    )
}

/// The α-family, `α ∈ [-1, 2]`, symmetric under `α ↦ 1 - α`.
pub fn alpha(alpha: f64) -> Result<StandardMonotone> {
    if !(-1.0..=2.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[-1, 2]",
        });
    }
    let name = format!("alpha:{alpha}");
    let in_unit = (0.0..=1.0).contains(&alpha);
    let cp_minus = if in_unit { Tri::Yes } else { Tri::Unknown };
    if alpha == 0.0 || alpha == 1.0 {
        let mut k = kmb();
        k.name = name;
        return Ok(k);
    }
    let kernel = move |_x: f64, u: f64| {
        let l = ln_ratio(u);
        let a = -(alpha * l).exp_m1();
        let b = -((1.0 - alpha) * l).exp_m1();
        alpha * (1.0 - alpha) * u * u / (a * b)
    };
    Ok(StandardMonotone::from_kernel(
        name,
        kernel,
        Some(alpha_measure(alpha)),
        if in_unit { Tri::No } else { Tri::Unknown },
        cp_minus,
    ))
}

pub fn variance() -> StandardMonotone {
    StandardMonotone::from_kernel(
        "variance",
        |x, u| {
            let l = ln_ratio(u);
            2.0 * u * u / ((x + 1.0) * l * l)
        },
        None,
        Tri::No,
        Tri::No,
    )
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange {
            name,
            value: v,
            range: "[0, 1]",
        });
    }
    Ok(())
}

/// Heinz mean `(x^γ + x^{1-γ})/2`.
pub fn heinz_gt(gamma: f64) -> Result<StandardMonotone> {
    check_unit("gamma", gamma)?;
    Ok(StandardMonotone::from_kernel(
        format!("heinz-gt:{gamma}"),
        move |x, _| 0.5 * (x.powf(gamma) + x.powf(1.0 - gamma)),
        None,
        Tri::No,
        Tri::Yes,
    ))
}

/// Transform of the Heinz mean, `2x/(x^γ + x^{1-γ})`.
pub fn heinz_lt(gamma: f64) -> Result<StandardMonotone> {
    check_unit("gamma", gamma)?;
    let measure = if gamma == 0.0 || gamma == 1.0 {
        MeasureDescriptor::dirac(vec![(0.0, 0.5)])
    } else {
        let c = (PI * gamma).sin() / PI;
        let p = (1.0 - gamma).max(gamma);
        MeasureDescriptor::continuous(move |s| 0.5 * c * (s.powf(gamma - 1.0) + s.powf(-gamma)), p)
    };
    Ok(StandardMonotone::from_kernel(
        format!("heinz-lt:{gamma}"),
        move |x, _| 2.0 * x / (x.powf(gamma) + x.powf(1.0 - gamma)),
        Some(measure),
        Tri::Yes,
        Tri::No,
    ))
}

/// Extreme points of the convex set of standard monotones.
///
/// The measure has point masses `2λ/(1+λ)²` at `s = 0` and
/// `(1-λ)²/(1+λ)²` at `s = 1`.
pub fn extreme_point(lambda: f64) -> Result<StandardMonotone> {
    check_unit("lambda", lambda)?;
    let l = lambda;
    let w0 = 2.0 * l / ((1.0 + l) * (1.0 + l));
    let w1 = (1.0 - l) * (1.0 - l) / ((1.0 + l) * (1.0 + l));
    let mut points = vec![];
    if w0 > 0.0 {
        points.push((0.0, w0));
    }
    if w1 > 0.0 {
        points.push((1.0, w1));
    }
    Ok(StandardMonotone::from_kernel(
        format!("lambda:{lambda}"),
        move |x, _| 0.5 * (1.0 + l) * (x / (x + l) + x / (1.0 + l * x)),
        Some(MeasureDescriptor::dirac(points)),
        Tri::Unknown,
        Tri::Unknown,
    ))
}

/// `[Tf](x) = x / f(x)`.
pub fn t_transform(f: &StandardMonotone) -> StandardMonotone {
    let inner = f.clone();
    let name = match f.name.strip_prefix("T(").and_then(|s| s.strip_suffix(')')) {
        Some(orig) => orig.to_string(),
        None => format!("T({})", f.name),
    };
    StandardMonotone::from_kernel(
        name,
        move |x, u| x / inner.eval_u(x, u),
        None,
        f.cp_minus,
        f.cp_plus,
    )
}

/// Pointwise convex combination `Σ w_i f_i`.
pub fn mixture(parts: &[(f64, StandardMonotone)]) -> Result<StandardMonotone> {
    let total: f64 = parts.iter().map(|p| p.0).sum();
    if parts.iter().any(|p| p.0 < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::Constraint(
            "mixture weights must be a probability vector".into(),
        ));
    }
    let name = parts
        .iter()
        .map(|(w, f)| format!("{w}*{}", f.name))
        .collect::<Vec<_>>()
        .join("+");
    let parts = parts.to_vec();
    Ok(StandardMonotone::from_kernel(
        name,
        move |x, u| parts.iter().map(|(w, f)| w * f.eval_u(x, u)).sum(),
        None,
        Tri::Unknown,
        Tri::Unknown,
    ))
}

/// Named catalog of the monotones with fixed parameters.
pub fn catalog() -> Vec<StandardMonotone> {
    vec![
        bures(),
        harmonic(),
        sqrt(),
        kmb(),
        wigner_yanase(),
        variance(),
        alpha(0.3).unwrap(),
        heinz_gt(0.2).unwrap(),
        heinz_lt(0.2).unwrap(),
        extreme_point(0.5).unwrap(),
    ]
}

/// Looks a monotone up by its command-line name, e.g. `alpha:0.3`.
pub fn by_name(name: &str) -> Result<StandardMonotone> {
    let (head, param) = match name.split_once(':') {
        Some((h, p)) => {
            let v: f64 = p
                .parse()
                .map_err(|_| Error::UnknownName(name.to_string()))?;
            (h, Some(v))
        }
        None => (name, None),
    };
    let need = |p: Option<f64>| p.ok_or_else(|| Error::UnknownName(name.to_string()));
    match (head, param) {
        ("bures", None) => Ok(bures()),
        ("harmonic", None) => Ok(harmonic()),
        ("sqrt", None) => Ok(sqrt()),
        ("kmb", None) => Ok(kmb()),
        ("wy", None) => Ok(wigner_yanase()),
        ("variance", None) => Ok(variance()),
        ("alpha", p) => alpha(need(p)?),
        ("heinz-gt", p) => heinz_gt(need(p)?),
        ("heinz-lt", p) => heinz_lt(need(p)?),
        ("lambda", p) => extreme_point(need(p)?),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}
