//! Cap volumes and depth solving for a target volume.
//!
//! `cargo run --example caps`

use floatbody::body::{Ball, HPolytope, Polytope};
use floatbody::caps::{cap_volume, solve_cap_depth, CapTolerance};
use floatbody::linalg::point;
use floatbody::measure::Estimator;

fn main() -> floatbody::error::Result<()> {
    let disk = Ball::unit(2);
    let x = point(&[1.0, 0.0]);
    let n = point(&[1.0, 0.0]);
    for depth in [0.1, 0.3, 1.0] {
        let v = cap_volume(&disk, &x, &n, depth, Estimator::default())?;
        println!("disk cap of depth {depth}: {:.6}", v.value);
    }
    for t in [0.01, 0.1, 0.5] {
        let cap = solve_cap_depth(&disk, &x, &n, t, CapTolerance::default(), Estimator::default())?;
        println!("disk cap of volume {t}: depth {:.6}", cap.depth);
    }

    let cube = Polytope::from_hpolytope(&HPolytope::cube(3, 0.0, 1.0))?;
    let face = point(&[1.0, 0.5, 0.5]);
    let e1 = point(&[1.0, 0.0, 0.0]);
    let cap = solve_cap_depth(&cube, &face, &e1, 0.1, CapTolerance::default(), Estimator::default())?;
    println!("cube slab of volume 0.1: depth {:.6}", cap.depth);

    // the same solve through the membership oracle alone
    let mc = solve_cap_depth(
        &cube,
        &face,
        &e1,
        0.1,
        CapTolerance { abs: 5e-3, rel: 0.0 },
        Estimator::mc(400_000, 3),
    )?;
    println!(
        "Monte Carlo depth {:.4} (achieved {:.4} ± {:.4})",
        mc.depth, mc.achieved_volume.value, mc.achieved_volume.std_error
    );
    Ok(())
}
