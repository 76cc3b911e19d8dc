//! Inscribed polytopes of the ball and their Hausdorff distance.
//!
//! `cargo run --release --example ball_approximation`

use floatbody::approx::{ball_inscribed_polytope, hausdorff_bound, Construction};

fn main() -> floatbody::error::Result<()> {
    for n in [3, 8, 32, 128, 512] {
        let (_, dh) = ball_inscribed_polytope(2, n, Construction::Regular, 0)?;
        println!("d = 2, regular {n:>3}-gon: d_H = {dh:.3e}, bound {:.3e}", hausdorff_bound(2, n));
    }
    for c in [Construction::Fibonacci, Construction::Random] {
        for n in [50, 100, 200] {
            let (p, dh) = ball_inscribed_polytope(3, n, c, 1)?;
            println!(
                "d = 3, {c:?} n = {n}: {} facets, d_H = {dh:.4}, bound {:.4}",
                p.facets().len(),
                hausdorff_bound(3, n)
            );
        }
    }
    Ok(())
}
