//! Greedy inscribed polytope with disjoint caps, checked against its bound.
//!
//! `cargo run --release --example greedy_inscribed [t_frac] [seed]`

use floatbody::approx::{greedy_count_bound, greedy_inscribed, GreedyLimits};
use floatbody::body::{Ball, ConvexBody, HPolytope, Polytope};
use floatbody::caps::CapTolerance;
use floatbody::floating::floating_outer_with_directions;
use floatbody::measure::{self, Estimator};
use floatbody::sampling::rotated_directions;

fn main() -> floatbody::error::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let frac: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1e-3);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);
    let bodies: Vec<(&str, Box<dyn ConvexBody>)> = vec![
        ("disk", Box::new(Ball::unit(2))),
        ("square", Box::new(Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0))?)),
        ("ball3", Box::new(Ball::unit(3))),
    ];
    for (name, k) in &bodies {
        let vol = measure::volume(k.as_ref(), Estimator::default()).value;
        let t = frac * vol;
        let (p, run) = greedy_inscribed(k.as_ref(), t, seed, GreedyLimits::default())?;
        let dirs = rotated_directions(k.dim(), 500, 1);
        let outer = floating_outer_with_directions(k.as_ref(), t, &dirs, CapTolerance::default(), Estimator::default())?;
        let gap = vol - outer.polytope.volume();
        println!(
            "{name:<6} t = {t:.3e}: n = {:>4} ({:?}, {} candidates), vol(K \\ P_n) = {:.4e}, count bound {:.3e}, cap violations {}",
            run.n(),
            run.terminated_by,
            run.candidates,
            vol - p.volume(),
            greedy_count_bound(k.dim(), gap, t),
            run.cap_violations(1e-12).len()
        );
    }
    Ok(())
}
