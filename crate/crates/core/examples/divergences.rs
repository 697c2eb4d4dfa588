//! Contrast functions, Bures and Wigner-Yanase geodesics and the local
//! form of the quantum Chernoff exponent.

use infogeom::divergence::{self, geodesic, ContrastFn};
use infogeom::linalg::random;
use infogeom::monotone;

fn main() -> infogeom::Result<()> {
    let mut rng = random::rng(2);
    let rho = random::random_state_floor(2, 0.1, &mut rng);
    let sigma = random::random_state_floor(2, 0.1, &mut rng);
    for name in [
        "relative-entropy",
        "bures",
        "wy",
        "harmonic",
        "sqrt",
        "alpha:0.5",
    ] {
        let g = ContrastFn::by_name(name)?;
        println!(
            "H_{name:<17} = {:.8}",
            divergence::contrast(&g, &rho, &sigma)?.value()?
        );
    }
    let d_wy = divergence::wy_distance(&rho, &sigma)?;
    let length = geodesic::path_length(
        &monotone::wigner_yanase(),
        |t| divergence::wy_geodesic_path(&rho, &sigma, t),
        1000,
    )?;
    println!("d_B = {:.8}", divergence::bures_distance(&rho, &sigma)?);
    println!("d_WY = {d_wy:.8}, discretized geodesic length = {length:.8}");

    let delta = random::random_tangent(2, &mut rng);
    let eps = 1e-2;
    let rho1 = &rho + delta.scale(eps);
    let (s, xi) = divergence::chernoff_optimize(&rho, &rho1)?;
    let local = divergence::chernoff_local(&rho, &delta, eps)?;
    println!("Chernoff exponent {xi:.6e} at s* = {s:.4}, local form {local:.6e}");
    Ok(())
}
