//! Fisher information along the two depolarizing families, comparing the
//! per-jump flux decomposition with finite differences.

use infogeom::dynamics::{
    count_sign_changes, fisher_trajectory, DepolarizingFamily, DepolarizingKind, Lindbladian,
};
use infogeom::linalg::random;
use infogeom::monotone;

fn main() -> infogeom::Result<()> {
    let mut rng = random::rng(3);
    let pi = random::random_state_floor(2, 0.1, &mut rng);
    let delta = random::random_tangent(2, &mut rng).scale(0.1);
    for kind in [DepolarizingKind::Markov, DepolarizingKind::NonMarkov] {
        let fam = DepolarizingFamily::new(kind);
        let rep = fisher_trajectory(&monotone::bures(), &pi, &delta, &fam, 4.0, 1e-3, false)?;
        let analytic = rep.analytic.as_ref().expect("flux requested");
        println!(
            "{:<24} F(0) = {:.6}  F(4) = {:.6}  sign changes of F′ = {}  max rel. error = {:.2e}",
            rep.evolution,
            rep.fisher[0],
            rep.fisher[rep.fisher.len() - 1],
            count_sign_changes(analytic, 1e-14),
            rep.max_relative_error(1e-6).unwrap_or(f64::NAN)
        );
    }
    let damping = Lindbladian::amplitude_damping(1.0);
    let rep = fisher_trajectory(&monotone::kmb(), &pi, &delta, &damping, 1.0, 1e-2, false)?;
    println!("amplitude damping currents at t = 0: {:?}", rep.currents[0]);
    Ok(())
}
