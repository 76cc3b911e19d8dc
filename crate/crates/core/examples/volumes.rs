//! Exact and Monte Carlo volumes, sections and second moments.
//!
//! `cargo run --release --example volumes`

use floatbody::body::{Ball, HPolytope, Polytope};
use floatbody::linalg::{point, Point};
use floatbody::measure::{self, Estimator};

fn main() -> floatbody::error::Result<()> {
    let cube = Polytope::from_hpolytope(&HPolytope::cube(3, -1.0, 1.0))?;
    let ball = Ball::unit(3);
    // samples are drawn in the bounding ball, which for the ball is the body itself
    for (name, exact, mc) in [
        (
            "cube [-1,1]^3",
            measure::volume(&cube, Estimator::default()),
            measure::volume(&cube, Estimator::mc(1_000_000, 1)),
        ),
        (
            "unit ball",
            measure::volume(&ball, Estimator::default()),
            measure::volume(&ball, Estimator::mc(1_000_000, 1)),
        ),
    ] {
        println!("{name:<14} exact {:.6}  MC {:.6} ± {:.6}", exact.value, mc.value, mc.std_error);
    }

    let e1 = point(&[1.0, 0.0, 0.0]);
    let origin = Point::zeros(3);
    let s = measure::section_volume(&ball, &origin, &e1, Estimator::default())?;
    println!("central section of the ball: {:.6} (pi = {:.6})", s.value, std::f64::consts::PI);

    let m = measure::inertia(&cube, &origin, Estimator::default())?;
    println!(
        "cube second moment diagonal: {:.6} (8/3 = {:.6})",
        m.second_moment[(0, 0)],
        8.0 / 3.0
    );

    let square = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0))?;
    let sd = measure::symmetric_difference(
        &Ball::unit(2),
        &square.affine_image(&(nalgebra::DMatrix::identity(2, 2) / 2f64.sqrt()), &Point::zeros(2))?,
        Estimator::mc(1_000_000, 2),
    )?;
    println!(
        "disk vs inscribed square: {:.4} ± {:.4} (pi - 2 = {:.4})",
        sd.value,
        sd.std_error,
        std::f64::consts::PI - 2.0
    );
    Ok(())
}
