//! Standard convex functions paired with monotones by `Lg = (x-1)²/(2g)`.

use std::sync::Arc;

use super::{StandardMonotone, Tri};

#[derive(Clone)]
pub struct StandardConvex {
    pub name: String,
    g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for StandardConvex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StandardConvex({})", self.name)
    }
}

impl StandardConvex {
    pub fn new(name: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            g: Arc::new(g),
        }
    }

    /// Symmetrizes a raw convex function: `(g(x) + x g(1/x)) / 2`.
    pub fn symmetrized(
        name: impl Into<String>,
        raw: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, move |x| 0.5 * (raw(x) + x * raw(1.0 / x)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x == 1.0 {
            0.0
        } else {
            (self.g)(x)
        }
    }
}

/// `[Lf](x) = (x-1)² / (2 f(x))`.
pub fn l_transform(f: &StandardMonotone) -> StandardConvex {
    let f = f.clone();
    StandardConvex::new(format!("L({})", f.name), move |x| {
        let u = x - 1.0;
        u * u / (2.0 * f.eval(x))
    })
}

/// Inverse of [`l_transform`]: `f(x) = (x-1)² / (2 g(x))`.
pub fn l_inverse(g: &StandardConvex) -> StandardMonotone {
    let g = g.clone();
    StandardMonotone::from_kernel(
        format!("Linv({})", g.name),
        move |_, u| u * u / (2.0 * g.eval(1.0 + u)),
        None,
        Tri::Unknown,
        Tri::Unknown,
    )
}
