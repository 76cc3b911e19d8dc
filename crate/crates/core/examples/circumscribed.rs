//! Circumscribed polytopes from tangent hyperplanes, written as OFF and CSV.
//!
//! `cargo run --example circumscribed [out_dir]`

use floatbody::approx::{circumscribed_facets, circumscribed_polytope};
use floatbody::body::Ball;
use floatbody::io::{write_halfspaces_csv, write_off};
use floatbody::sampling::{rotated_directions, sphere_directions};
use std::f64::consts::PI;

fn main() -> floatbody::error::Result<()> {
    for m in [4, 8, 16, 64] {
        let p = circumscribed_polytope(&Ball::unit(2), &sphere_directions(2, m))?;
        println!(
            "disk, {m:>2} tangents: area {:.8} (m tan(pi/m) = {:.8})",
            p.volume(),
            m as f64 * (PI / m as f64).tan()
        );
    }
    let dirs = rotated_directions(3, 64, 0);
    let h = circumscribed_facets(&Ball::unit(3), &dirs)?;
    let p = circumscribed_polytope(&Ball::unit(3), &dirs)?;
    println!("3-ball, 64 tangents: {} vertices, volume {:.6}", p.vertices().len(), p.volume());
    if let Some(dir) = std::env::args().nth(1) {
        let dir = std::path::PathBuf::from(dir);
        std::fs::create_dir_all(&dir)?;
        write_off(std::fs::File::create(dir.join("circumscribed.off"))?, &p)?;
        write_halfspaces_csv(std::fs::File::create(dir.join("circumscribed_h.csv"))?, &h)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
