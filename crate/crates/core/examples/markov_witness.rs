//! Rate-sign verdicts for the depolarizing families and a search for a
//! positive, non-CP map that expands Fisher information.

use infogeom::dynamics::{
    fisher_expansion_search, markov_report, DepolarizingFamily, DepolarizingKind, QuantumChannel,
};
use infogeom::linalg::random;
use infogeom::monotone;

fn main() -> infogeom::Result<()> {
    let mut rng = random::rng(4);
    for kind in [DepolarizingKind::Markov, DepolarizingKind::NonMarkov] {
        let rep = markov_report(&DepolarizingFamily::new(kind), 4.0, 1e-2, 4, &mut rng)?;
        println!(
            "{:<24} {}  rate witness {:?}",
            rep.evolution, rep.verdict, rep.rate_witness
        );
    }
    let transpose = QuantumChannel::transpose(2).tensor_with_identity(2);
    match fisher_expansion_search(&transpose, &monotone::bures(), 10_000, &mut rng)? {
        Some(w) => println!(
            "transpose ⊗ id expands F at trial {}: {:.6} -> {:.6}",
            w.trial, w.before, w.after
        ),
        None => println!("no expansion found"),
    }
    Ok(())
}
