//! Centering, isotropic position, the width functional and centroid cuts.
//!
//! `cargo run --example isotropic`

use floatbody::body::Polytope;
use floatbody::linalg::point;
use floatbody::measure::Estimator;
use floatbody::position::{grunbaum_ratios, isotropic_polytope, theta};

fn main() -> floatbody::error::Result<()> {
    let rect = Polytope::from_points(&[point(&[-2.0, -0.5]), point(&[2.0, -0.5]), point(&[2.0, 0.5]), point(&[-2.0, 0.5])])?;
    let (image, iso) = isotropic_polytope(&rect)?;
    println!(
        "rectangle: T = {:.6}det T = {:.3e}, image volume {:.6}",
        iso.transform,
        iso.det,
        image.volume()
    );

    let tri = Polytope::from_points(&[point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.0, 1.0])])?;
    let (image, iso) = isotropic_polytope(&tri)?;
    println!(
        "triangle: isotropy constant {:.6}, residual {:.1e}",
        iso.isotropy_constant, iso.residual
    );

    let xi = point(&[0.0, 1.0]);
    for r in grunbaum_ratios(&tri, "triangle", &xi, 64, 0, Estimator::default())? {
        println!("  {:<11} {:<45} {:.6} vs {:.6}", r.claim, r.check, r.lhs, r.rhs);
    }

    let th = theta(&image, &xi, 1e-10, Estimator::default())?;
    println!(
        "theta of the isotropic triangle along e2: {:.6} (central section {:.6})",
        th.theta, th.central_section.value
    );
    Ok(())
}
