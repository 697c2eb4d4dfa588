//! Fisher information of one perturbation under several monotones, the
//! logarithmic derivative and the Cramér-Rao bound of a thermal family.

use infogeom::fisher::{self, FisherOperator};
use infogeom::linalg::{self, random};
use infogeom::monotone;

fn main() -> infogeom::Result<()> {
    let mut rng = random::rng(1);
    let pi = random::random_state_floor(3, 0.05, &mut rng);
    let delta = random::random_tangent(3, &mut rng).scale(0.1);
    // the Bures metric is the smallest, the harmonic one the largest
    for name in ["bures", "sqrt", "kmb", "wy", "alpha:0.3", "harmonic"] {
        let f = monotone::by_name(name)?;
        println!(
            "F_{name:<10} = {:.8}",
            fisher::fisher_information(&f, &pi, &delta)?
        );
    }
    let j = FisherOperator::new(&monotone::kmb(), &pi)?;
    let l = fisher::sld(&monotone::kmb(), &pi, &delta)?;
    println!(
        "‖J_f L_f − δρ‖ = {:.2e}",
        linalg::frobenius(&(j.apply(&l)? - &delta))
    );

    let h = random::random_hermitian(3, &mut rng);
    let a = random::random_hermitian(3, &mut rng);
    let family = |theta: f64| {
        fisher::thermal_state(&(&h + a.scale(theta)), 1.0)
            .expect("finite")
            .0
    };
    let bound = fisher::cramer_rao_bound(&monotone::sqrt(), family, 0.0, fisher::FD_STEP)?;
    println!("Cramér-Rao bound of the thermal family: {bound:.6}");
    Ok(())
}
