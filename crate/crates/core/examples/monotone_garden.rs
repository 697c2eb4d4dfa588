//! Walks the catalog of standard monotones: pointwise values, the
//! normalization of each defining measure, and the `T` transform.

use infogeom::monotone::{self, t_transform};

fn main() -> infogeom::Result<()> {
    println!(
        "{:<14} {:>10} {:>10} {:>14}",
        "monotone", "f(2)", "f(1/2)", "∫dN 2/(1+s)"
    );
    for f in monotone::catalog() {
        f.check_standard()?;
        let norm = f
            .integrate(|s| 2.0 / (1.0 + s))
            .map(|v| format!("{v:.12}"))
            .unwrap_or_else(|_| "no measure".into());
        println!(
            "{:<14} {:>10.6} {:>10.6} {:>14}",
            f.name,
            f.eval(2.0),
            f.eval(0.5),
            norm
        );
    }
    // T maps the largest monotone to the smallest one
    let t = t_transform(&monotone::bures());
    let h = monotone::harmonic();
    let gap = monotone::log_grid()
        .iter()
        .map(|&x| (t.eval(x) - h.eval(x)).abs())
        .fold(0.0, f64::max);
    println!("max |T f_B - f_H| on the grid: {gap:.2e}");
    Ok(())
}
