//! Overshoot, illumination-body boundary points and the volume gap.
//!
//! `cargo run --release --example illumination`

use floatbody::body::{Ball, HPolytope, Polytope};
use floatbody::illumination::{
    gap_volume, illumination_boundary_point, illumination_inner_polytope, overshoot, overshoot_oracle, overshoot_polytope,
};
use floatbody::linalg::{point, Point};
use floatbody::measure::Estimator;

fn main() -> floatbody::error::Result<()> {
    let square = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0))?;
    for x in [point(&[1.5, 0.0]), point(&[1.5, 1.5]), point(&[0.2, 0.3])] {
        let exact = overshoot_polytope(&square, &x);
        let mc = overshoot_oracle(&square, &x, 400_000, 1);
        println!(
            "square, x = ({}, {}): facet formula {:.6}, oracle {:.6} ± {:.6}, active facets {}",
            x[0],
            x[1],
            exact.value.value,
            mc.value.value,
            mc.value.std_error,
            exact.active_facets.len()
        );
    }

    let o = Point::zeros(2);
    let t = 0.5;
    for u in [point(&[1.0, 0.0]), point(&[1.0, 1.0]).normalize()] {
        let p = illumination_boundary_point(&square, t, &o, &u, 1e-12, Estimator::default())?;
        println!("boundary of K^{t} along ({:.3}, {:.3}): ({:.6}, {:.6})", u[0], u[1], p[0], p[1]);
    }

    let inner = illumination_inner_polytope(&square, 0.1, 64, &o, 0, Estimator::default())?;
    let gap = gap_volume(&square, 0.1, &o, 256, Estimator::default())?;
    println!(
        "square, t = 0.1: inner polygon area {:.6}, gap {:.6} (8t + 2t^2 = {:.6})",
        inner.volume(),
        gap.value,
        8.0 * 0.1 + 2.0 * 0.01
    );

    let disk = Ball::unit(2);
    let x = point(&[1.1, 0.0]);
    println!(
        "disk overshoot at (1.1, 0): {:.6}",
        overshoot(&disk, &x, Estimator::default()).value.value
    );
    Ok(())
}
