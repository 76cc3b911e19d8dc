//! Log-log scaling of the volume deficit of inscribed ball polytopes.
//!
//! `cargo run --release --example scaling [out_dir]`

use floatbody::plot::scaling_svg;
use floatbody::verify::scaling::{default_grid, scaling_study};

fn main() -> floatbody::error::Result<()> {
    let out = std::env::args().nth(1).map(std::path::PathBuf::from);
    for d in [2, 3] {
        let study = scaling_study(d, &default_grid(d), 0)?;
        println!("d = {d}: slope {:.4} (expected {:.4})", study.slope, study.expected_slope);
        for r in &study.rows {
            println!("  n = {:>5}  d_S = {:.6e}  normalized {:.4}", r.n, r.d_s, r.normalized);
        }
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("scaling{d}.svg")), scaling_svg(&study))?;
        }
    }
    Ok(())
}
