//! Builds bodies from JSON specs and queries their oracles.
//!
//! `cargo run --example bodies`

use floatbody::body::BodySpec;
use floatbody::linalg::point;

fn main() -> floatbody::error::Result<()> {
    let specs = [
        ("ball", r#"{"type": "ball", "center": [0, 0], "radius": 1}"#),
        (
            "hpoly",
            r#"{"type": "hpoly", "normals": [[1, 0], [-1, 0], [0, 1], [0, -1]], "offsets": [1, 1, 1, 1]}"#,
        ),
        ("vpoly", r#"{"type": "vpoly", "vertices": [[0, 0], [1, 0], [0, 1]]}"#),
        (
            "ellipsoid",
            r#"{"type": "ellipsoid", "center": [0, 0], "shape": [[4, 0], [0, 1]], "radius": 1}"#,
        ),
        (
            "affine",
            r#"{"type": "affine", "base": {"type": "ball", "center": [0, 0], "radius": 1},
            "linear": [[2, 1], [0, 1]], "translation": [1, 0]}"#,
        ),
    ];
    let u = point(&[1.0, 1.0]).normalize();
    let x = point(&[0.6, 0.6]);
    for (name, text) in specs {
        let k = BodySpec::from_json(text)?.build()?;
        let (c, r) = k.bounding_ball();
        println!(
            "{:<10} h(u) = {:>8.5}  argmax = ({:.3}, {:.3})  contains (0.6, 0.6): {:<5}  bounding ball ({:.2}, {:.2}) r = {:.3}",
            name,
            k.support(&u),
            k.support_point(&u)[0],
            k.support_point(&u)[1],
            k.contains(&x),
            c[0],
            c[1],
            r
        );
    }
    Ok(())
}
