//! Plain-text SVG figures: planar overlays of `K`, `K_t`, `K^t`, `P_n`, and
//! log-log scaling plots.

use crate::body::{radial_boundary, ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::floating::{floating_outer_polytope, FloatingQuery};
use crate::illumination::illumination_boundary_point;
use crate::linalg::Point;
use crate::measure::Estimator;
use crate::sampling::sphere_directions;
use crate::verify::scaling::ScalingStudy;
use std::fmt::Write as _;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Affine map from a data box to the canvas, `y` pointing up.
struct Frame {
    lo: [f64; 2],
    scale: [f64; 2],
}

impl Frame {
    fn fit(points: &[[f64; 2]], equal: bool) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let span = [(hi[0] - lo[0]).max(1e-12), (hi[1] - lo[1]).max(1e-12)];
        let inner = SIZE - 2.0 * MARGIN;
        let mut scale = [inner / span[0], inner / span[1]];
        if equal {
            let s = scale[0].min(scale[1]);
            scale = [s, s];
        }
        Self { lo, scale }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.lo[0]) * self.scale[0],
            SIZE - MARGIN - (p[1] - self.lo[1]) * self.scale[1],
        )
    }

    fn path(&self, pts: &[[f64; 2]], closed: bool) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            write!(s, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        if closed {
            s.push('Z');
        }
        s.trim_end().to_string()
    }
}

fn header() -> String {
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n")
}

fn xy(p: &Point) -> [f64; 2] {
    [p[0], p[1]]
}

/// Polygon vertices in counterclockwise order about their mean.
fn polygon(p: &Polytope) -> Vec<[f64; 2]> {
    let c = p.vertices().iter().sum::<Point>() / p.vertices().len() as f64;
    let mut v: Vec<[f64; 2]> = p.vertices().iter().map(xy).collect();
    v.sort_by(|a, b| {
        let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
        let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
        ta.partial_cmp(&tb).unwrap()
    });
    v
}

#[derive(Debug, Clone)]
pub struct OverlayLayer {
    pub label: String,
    pub color: &'static str,
    pub dashed: bool,
    pub points: Vec<[f64; 2]>,
}

/// Boundary curves of `K`, the outer polytope of `K_t`, boundary points of `K^t`
/// and optionally `P_n`, each sampled along `m` directions.
pub fn overlay_layers(k: &dyn ConvexBody, t: f64, m: usize, pn: Option<&Polytope>, seed: u64, est: Estimator) -> Result<Vec<OverlayLayer>> {
    if k.dim() != 2 {
        return Err(Error::DimensionUnsupported(k.dim()));
    }
    let o = k.interior_point();
    let radius = k.bounding_ball().1;
    let dirs = sphere_directions(2, m);
    let boundary = dirs
        .iter()
        .map(|u| radial_boundary(k, &o, u, 1e-12 * radius).map(|p| xy(&p)))
        .collect::<Result<Vec<_>>>()?;
    let mut layers = vec![OverlayLayer {
        label: "K".into(),
        color: "black",
        dashed: false,
        points: boundary,
    }];
    let q = FloatingQuery {
        estimator: est,
        ..FloatingQuery::new(k, t)
    };
    match floating_outer_polytope(&q, m, seed) {
        Ok(outer) => layers.push(OverlayLayer {
            label: "K_t (outer)".into(),
            color: "#1f5fbf",
            dashed: false,
            points: polygon(&outer.polytope),
        }),
        Err(Error::EmptyIntersection) => {}
        Err(e) => return Err(e),
    }
    let illum = dirs
        .iter()
        .map(|u| illumination_boundary_point(k, t, &o, u, 1e-12 * t, est).map(|p| xy(&p)))
        .collect::<Result<Vec<_>>>()?;
    layers.push(OverlayLayer {
        label: "K^t".into(),
        color: "#c0392b",
        dashed: false,
        points: illum,
    });
    if let Some(p) = pn {
        layers.push(OverlayLayer {
            label: format!("P_n (n = {})", p.vertices().len()),
            color: "#1e8449",
            dashed: true,
            points: polygon(p),
        });
    }
    Ok(layers)
}

pub fn overlay_svg(layers: &[OverlayLayer], title: &str) -> String {
    let all: Vec<[f64; 2]> = layers.iter().flat_map(|l| l.points.iter().copied()).collect();
    let frame = Frame::fit(&all, true);
    let mut s = header();
    writeln!(
        s,
        "<text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>"
    )
    .unwrap();
    for (i, l) in layers.iter().enumerate() {
        let dash = if l.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        writeln!(
            s,
            "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{dash}/>",
            frame.path(&l.points, true),
            l.color
        )
        .unwrap();
        let y = SIZE - 12.0 - 16.0 * (layers.len() - 1 - i) as f64;
        writeln!(
            s,
            "<text x=\"{}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>",
            SIZE - 150.0,
            l.color,
            l.label
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// `log d_S` against `log n` with the fitted line and its slope.
pub fn scaling_svg(study: &ScalingStudy) -> String {
    let pts: Vec<[f64; 2]> = study.rows.iter().map(|r| [(r.n as f64).ln(), r.d_s.ln()]).collect();
    let frame = Frame::fit(&pts, false);
    let mut s = header();
    writeln!(
        s,
        "<text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">d = {}: slope {:.4} (expected {:.4})</text>",
        study.d, study.slope, study.expected_slope
    )
    .unwrap();
    let (x0, y0) = frame.map([frame.lo[0], frame.lo[1]]);
    writeln!(
        s,
        "<path d=\"M{x0:.3},{:.3} L{x0:.3},{y0:.3} L{:.3},{y0:.3}\" fill=\"none\" stroke=\"gray\"/>",
        MARGIN,
        SIZE - MARGIN
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\">log n</text>",
        SIZE / 2.0,
        SIZE - 8.0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"6\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\">log d_S</text>",
        SIZE / 2.0
    )
    .unwrap();
    let first = pts.first().map_or(0.0, |p| p[0]);
    let last = pts.last().map_or(0.0, |p| p[0]);
    let line = [
        [first, study.intercept + study.slope * first],
        [last, study.intercept + study.slope * last],
    ];
    writeln!(
        s,
        "<path d=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>",
        frame.path(&line, false)
    )
    .unwrap();
    for (p, r) in pts.iter().zip(&study.rows) {
        let (x, y) = frame.map(*p);
        writeln!(s, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"#1f5fbf\"/>").unwrap();
        writeln!(
            s,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>",
            x + 6.0,
            y - 6.0,
            r.n
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope};
    use crate::verify::scaling::scaling_study;

    #[test]
    fn disk_overlay_is_concentric() {
        let disk = Ball::unit(2);
        let t = 0.05 * std::f64::consts::PI;
        let layers = overlay_layers(&disk, t, 64, None, 0, Estimator::default()).unwrap();
        assert_eq!(layers.len(), 3);
        let r = |p: &[f64; 2]| (p[0] * p[0] + p[1] * p[1]).sqrt();
        // the outer 64-gon of K_t is tangent to the circle of radius 1 - h
        let h = {
            let seg = |h: f64| (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt();
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if seg(mid) < t {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            lo
        };
        let circum = (1.0 - h) / (std::f64::consts::PI / 64.0).cos();
        assert!(layers[1].points.iter().all(|p| (r(p) - circum).abs() < 1e-8));
        assert!(layers[2].points.iter().all(|p| r(p) > 1.0));
        let svg = overlay_svg(&layers, "disk");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg, overlay_svg(&layers, "disk"));
    }

    #[test]
    fn square_illumination_rounds_corners() {
        let sq = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        let layers = overlay_layers(&sq, 0.1, 8, Some(&sq), 0, Estimator::default()).unwrap();
        let k_t = &layers[2].points;
        // overshoot is a at (1 + a, 0) and 2a at (1 + a, 1 + a)
        assert!((k_t[0][0] - 1.1).abs() < 1e-9);
        assert!((k_t[1][0] - 1.05).abs() < 1e-9 && (k_t[1][1] - 1.05).abs() < 1e-9);
    }

    #[test]
    fn overlay_rejects_three_dimensions() {
        assert!(matches!(
            overlay_layers(&Ball::unit(3), 0.1, 8, None, 0, Estimator::default()),
            Err(Error::DimensionUnsupported(3))
        ));
    }

    #[test]
    fn scaling_plot_mentions_slope() {
        let s = scaling_study(2, &[8, 16, 32], 0).unwrap();
        assert!(scaling_svg(&s).contains(&format!("slope {:.4}", s.slope)));
    }
}
