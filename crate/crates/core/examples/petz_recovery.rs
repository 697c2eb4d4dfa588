//! Generalized Petz recovery of an amplitude-damping channel: recovery of
//! the prior, the spectrum of the round trip and the χ² chain.

use infogeom::dynamics::QuantumChannel;
use infogeom::linalg::{self, random};
use infogeom::{monotone, recovery};

fn main() -> infogeom::Result<()> {
    let mut rng = random::rng(5);
    let phi = QuantumChannel::amplitude_damping(0.3)?;
    let pi = random::random_state_floor(2, 0.1, &mut rng);
    let (fp, f) = (monotone::harmonic(), monotone::bures());
    let rec = recovery::petz_map(&fp, &f, &pi, &phi)?;
    let back = rec.map.apply(&phi.apply(&pi)?)?;
    println!(
        "prior residual {:.2e}, CP {}",
        linalg::frobenius(&(back - &pi)),
        rec.is_cp()
    );
    let spec = recovery::recovery_spectrum(&fp, &f, &pi, &phi)?;
    println!("round-trip spectrum {:?}", spec.eigenvalues);
    let sigma = random::random_state_floor(2, 0.1, &mut rng);
    let gap = recovery::chi2_recovery_gap(&fp, &f, &pi, &sigma, &phi)?;
    println!(
        "χ² chain {:.6} >= {:.6} >= {:.6}",
        gap.lhs, gap.mid, gap.rhs
    );
    Ok(())
}
