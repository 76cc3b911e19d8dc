//! Membership in the floating body and its outer polytope.
//!
//! `cargo run --release --example floating_body`

use floatbody::body::{Ball, HPolytope, Polytope};
use floatbody::floating::{floating_membership, floating_outer_polytope, inscribed_ball_check, FloatingQuery};
use floatbody::linalg::point;
use floatbody::measure::Estimator;
use std::f64::consts::PI;

fn main() -> floatbody::error::Result<()> {
    let disk = Ball::unit(2);
    let t = 0.05 * PI;
    let q = FloatingQuery::new(&disk, t);
    for x in [point(&[0.0, 0.0]), point(&[0.5, 0.0]), point(&[0.75, 0.0]), point(&[0.9, 0.0])] {
        println!("disk, t = {t:.4}: ({}, {}) is {:?}", x[0], x[1], floating_membership(&q, &x, 0));
    }
    let outer = floating_outer_polytope(&q, 64, 0)?;
    let r_in = (0..64).map(|j| outer.offset(j)).fold(f64::INFINITY, f64::min);
    println!("outer 64-gon: inradius {r_in:.6}, area {:.6}", outer.polytope.volume());

    let square = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0))?;
    let q = FloatingQuery::new(&square, 0.1);
    let outer = floating_outer_polytope(&q, 32, 0)?;
    println!(
        "square K_0.1 outer polygon: {} vertices, area {:.6}",
        outer.polytope.vertices().len(),
        outer.polytope.volume()
    );

    let r = inscribed_ball_check(&Ball::unit(3), "ball3", 500, 0, Estimator::default());
    println!(
        "inscribed ball check on the 3-ball: {} (margin {:.4})",
        if r.pass { "pass" } else { "fail" },
        r.margin
    );
    Ok(())
}
