//! SVG overlay of a planar body, its floating and illumination bodies and a greedy polygon.
//!
//! `cargo run --release --example overlay [out.svg]`
//!
//! Without an argument the SVG goes to standard output.

use floatbody::approx::{greedy_inscribed, GreedyLimits};
use floatbody::body::{HPolytope, Polytope};
use floatbody::measure::Estimator;
use floatbody::plot::{overlay_layers, overlay_svg};

fn main() -> floatbody::error::Result<()> {
    let square = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0))?;
    let t = 0.1;
    let limits = GreedyLimits {
        threshold: 1.0,
        ..GreedyLimits::default()
    };
    let (pn, _) = greedy_inscribed(&square, t, 0, limits)?;
    let layers = overlay_layers(&square, t, 128, Some(&pn), 0, Estimator::default())?;
    for l in &layers {
        eprintln!("{:<14} {} points", l.label, l.points.len());
    }
    let svg = overlay_svg(&layers, "square, t = 0.1");
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, svg)?,
        None => print!("{svg}"),
    }
    Ok(())
}
