//! Detailed-balance verdicts: a generator built sector by sector, and a
//! qubit generator that balances every Fisher product but not the
//! correlation product.

use infogeom::detailed_balance::{self, SectorJump};
use infogeom::linalg;

fn main() -> infogeom::Result<()> {
    let fs = detailed_balance::default_fisher_sample();

    let pi = linalg::diag(&[0.5, 0.3, 0.2]);
    let frame = detailed_balance::ModularFrame::new(&pi)?;
    let jumps = vec![
        SectorJump::transition(&frame, 0, 1, 1.0),
        SectorJump::transition(&frame, 1, 2, 0.5),
    ];
    let l = detailed_balance::build_db_lindbladian(&pi, None, &jumps)?;
    let rep = detailed_balance::db_report(&l.superop(), &pi, &fs)?;
    println!(
        "built generator: alicki {} fisher {}",
        rep.alicki.holds, rep.fisher.holds
    );

    let (l, pi) = detailed_balance::fisher_not_alicki_qubit(1.0);
    let rep = detailed_balance::db_report(&l.superop(), &pi, &fs)?;
    println!(
        "counterexample: alicki {} (residual {:.3e}), fisher {}",
        rep.alicki.holds,
        rep.alicki.max(),
        rep.fisher.holds
    );
    if let Some(s) = &rep.structural {
        println!("{}", serde_json::to_string_pretty(&s.transpose_terms)?);
    }
    Ok(())
}
