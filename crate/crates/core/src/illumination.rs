//! The illumination body `K^t = {x : vol([x, K] \ K) ≤ t}`.
//!
//! For a polytope with facets `F_i` (outer normal `ξ_i`, offset `b_i`) the
//! overshoot is `(1/d) Σ max(0, ⟨ξ_i, x⟩ - b_i) vol_{d-1}(F_i)`: the visible
//! facets, each coned to `x`.

use crate::body::{radial_boundary, ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{unit_ball_volume, unit_sphere_area, Point};
use crate::measure::{Estimator, Method, VolumeEstimate};
use crate::sampling::{rng_for, rotated_directions, run_batches, sphere_directions, stream, uniform_in_ball};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OvershootMethod {
    FacetFormula,
    /// Closed form for balls and their affine images.
    ClosedForm,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvershootResult {
    pub value: VolumeEstimate,
    pub method: OvershootMethod,
    /// `(facet index, ⟨ξ_i, x⟩ - b_i)` for the visible facets.
    pub active_facets: Vec<(usize, f64)>,
}

/// `(d-1)`-volumes of the facets.
pub fn facet_areas(p: &Polytope) -> Vec<f64> {
    p.facets().iter().map(|f| f.area).collect()
}

/// Exact overshoot of a polytope by the facet formula.
pub fn overshoot_polytope(p: &Polytope, x: &Point) -> OvershootResult {
    let mut active = Vec::new();
    let mut sum = 0.0;
    for (i, f) in p.facets().iter().enumerate() {
        let h = f.normal.dot(x) - f.offset;
        if h > 0.0 {
            active.push((i, h));
            sum += h * f.area;
        }
    }
    OvershootResult {
        value: VolumeEstimate::exact(sum / p.dim() as f64),
        method: OvershootMethod::FacetFormula,
        active_facets: active,
    }
}

/// Monte Carlo overshoot using only membership and line intersection.
///
/// A sample `y ∉ K` lies in `[x, K]` iff the ray `x + s(y - x)`, `s ≥ 1`, meets `K`.
pub fn overshoot_oracle(k: &dyn ConvexBody, x: &Point, samples: usize, seed: u64) -> OvershootResult {
    let d = k.dim();
    if k.contains(x) {
        return OvershootResult {
            value: VolumeEstimate {
                value: 0.0,
                std_error: 0.0,
                samples: 0,
                method: Method::MonteCarlo,
                seed: Some(seed),
            },
            method: OvershootMethod::MonteCarlo,
            active_facets: Vec::new(),
        };
    }
    let (c, r) = k.bounding_ball();
    let gap = (x - &c).norm();
    // smallest ball containing both the bounding ball and x
    let radius = 0.5 * (gap + r);
    let center = &c + (x - &c) * ((radius - r) / gap);
    let hits: u64 = run_batches(samples, |b, len| {
        let mut rng = rng_for(seed, stream::OVERSHOOT, b);
        let mut y = center.clone();
        let mut h = 0u64;
        for _ in 0..len {
            uniform_in_ball(&mut rng, &center, radius, &mut y);
            if k.contains(&y) {
                continue;
            }
            if let Some((_, hi)) = k.line_interval(x, &(&y - x)) {
                if hi >= 1.0 {
                    h += 1;
                }
            }
        }
        h
    })
    .into_iter()
    .sum();
    OvershootResult {
        value: VolumeEstimate::from_hits(hits, samples as u64, unit_ball_volume(d) * radius.powi(d as i32), seed),
        method: OvershootMethod::MonteCarlo,
        active_facets: Vec::new(),
    }
}

/// Overshoot by the cheapest available exact route, else Monte Carlo.
pub fn overshoot(k: &dyn ConvexBody, x: &Point, est: Estimator) -> OvershootResult {
    if !est.force_mc {
        if let Some(p) = k.as_polytope() {
            return overshoot_polytope(p, x);
        }
        if let Some(v) = k.exact_overshoot(x) {
            return OvershootResult {
                value: VolumeEstimate::exact(v),
                method: OvershootMethod::ClosedForm,
                active_facets: Vec::new(),
            };
        }
    }
    overshoot_oracle(k, x, est.samples, est.seed)
}

pub fn illumination_membership(k: &dyn ConvexBody, t: f64, x: &Point, est: Estimator) -> bool {
    overshoot(k, x, est).value.value <= t * (1.0 + 1e-12)
}

/// Point `p = o + r·u` on `∂K^t` with `|overshoot(p) - t| ≤ tol`.
///
/// The overshoot is zero on `K` and nondecreasing along the ray beyond `∂K`,
/// so the search bisects between the exit from `K` and an outer bracket at the
/// bounding-ball exit, enlarged fourfold once if needed.
pub fn illumination_boundary_point(k: &dyn ConvexBody, t: f64, o: &Point, u: &Point, tol: f64, est: Estimator) -> Result<Point> {
    if !(t > 0.0) {
        return Err(Error::Invalid("illumination level must be positive".into()));
    }
    let (c, radius) = k.bounding_ball();
    let f = |r: f64| overshoot(k, &(o + u * r), est).value.value;
    let exit = radial_boundary(k, o, u, 1e-13 * radius)?;
    let mut lo = (&exit - o).norm();
    let w = o - &c;
    let b = w.dot(u);
    let mut hi = -b + (b * b - w.dot(&w) + radius * radius).max(0.0).sqrt();
    hi = hi.max(lo + radius);
    if f(hi) < t {
        hi = lo + 4.0 * (hi - lo);
        if f(hi) < t {
            return Err(Error::NoBracket);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = f(mid);
        if (v - t).abs() <= tol || hi - lo <= 1e-15 * hi {
            return Ok(o + u * mid);
        }
        if v < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(o + u * (0.5 * (lo + hi)))
}

/// Inner polytope of `K^t`: hull of boundary points along `m` rays from `o`.
pub fn illumination_inner_polytope(k: &dyn ConvexBody, t: f64, m: usize, o: &Point, seed: u64, est: Estimator) -> Result<Polytope> {
    let tol = 1e-12 * t.max(1e-300);
    let pts: Vec<Point> = rotated_directions(k.dim(), m, seed)
        .par_iter()
        .map(|u| illumination_boundary_point(k, t, o, u, tol, est))
        .collect::<Result<_>>()?;
    Polytope::from_points(&pts)
}

/// Directions with weights summing to the sphere area.
///
/// `d = 2`: equal angles; `d = 3`: midpoint rule in `z = cos θ` times equal
/// azimuths (an equal-area product rule); `d ≥ 4`: equal-weight Halton points.
pub fn sphere_rule(d: usize, m: usize) -> Vec<(Point, f64)> {
    match d {
        2 => sphere_directions(2, m).into_iter().map(|u| (u, 2.0 * PI / m as f64)).collect(),
        3 => {
            let nz = ((m as f64 / PI).sqrt().round() as usize).max(2);
            let nphi = (m / nz).max(3);
            let w = 4.0 * PI / (nz * nphi) as f64;
            let mut out = Vec::with_capacity(nz * nphi);
            for i in 0..nz {
                let z = -1.0 + (2 * i + 1) as f64 / nz as f64;
                let rho = (1.0 - z * z).sqrt();
                for j in 0..nphi {
                    let phi = 2.0 * PI * (j as f64 + 0.5 * (i % 2) as f64) / nphi as f64;
                    out.push((Point::from_vec(vec![rho * phi.cos(), rho * phi.sin(), z]), w));
                }
            }
            out
        }
        _ => {
            let w = unit_sphere_area(d) / m as f64;
            sphere_directions(d, m).into_iter().map(|u| (u, w)).collect()
        }
    }
}

/// `vol(K^t \ K)` by radial integration from `o`:
/// `(1/d) ∫_{S^{d-1}} ρ_{K^t}(u)^d - ρ_K(u)^d du`.
///
/// The reported error is the difference from the same rule at half the nodes.
pub fn gap_volume(k: &dyn ConvexBody, t: f64, o: &Point, m: usize, est: Estimator) -> Result<VolumeEstimate> {
    let d = k.dim();
    let (_, radius) = k.bounding_ball();
    let rule = |m: usize| -> Result<f64> {
        let terms: Vec<f64> = sphere_rule(d, m)
            .par_iter()
            .map(|(u, w)| {
                let inner = (radial_boundary(k, o, u, 1e-13 * radius)? - o).norm();
                let outer = (illumination_boundary_point(k, t, o, u, 1e-12 * t, est)? - o).norm();
                Ok(w * (outer.powi(d as i32) - inner.powi(d as i32)) / d as f64)
            })
            .collect::<Result<_>>()?;
        Ok(terms.iter().sum())
    };
    let full = rule(m)?;
    let half = rule(m / 2)?;
    Ok(VolumeEstimate {
        value: full,
        std_error: (full - half).abs(),
        samples: m as u64,
        method: Method::Quadrature,
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope};
    use crate::linalg::point;
    use approx::assert_relative_eq;

    fn square() -> Polytope {
        Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap()
    }

    #[test]
    fn facet_formula_examples() {
        let sq = square();
        let r = overshoot_polytope(&sq, &point(&[1.5, 0.0]));
        assert_relative_eq!(r.value.value, 0.5, max_relative = 1e-14);
        assert_eq!(r.active_facets.len(), 1);
        assert_eq!(overshoot_polytope(&sq, &point(&[0.2, -0.3])).value.value, 0.0);
        let cube = Polytope::from_hpolytope(&HPolytope::cube(3, 0.0, 1.0)).unwrap();
        let x = point(&[1.2, 1.2, 0.5]);
        let r = overshoot_polytope(&cube, &x);
        assert_relative_eq!(r.value.value, 0.4 / 3.0, max_relative = 1e-12);
        let mc = overshoot_oracle(&cube, &x, 400_000, 3);
        assert!(mc.value.agrees_with(0.4 / 3.0, 3.0), "{:?}", mc.value);
    }

    #[test]
    fn areas() {
        let cube = Polytope::from_hpolytope(&HPolytope::cube(3, -1.0, 1.0)).unwrap();
        assert!(facet_areas(&cube).iter().all(|a| (a - 4.0).abs() < 1e-12));
        let hex = Polytope::from_points(&sphere_directions(2, 6)).unwrap();
        assert!(facet_areas(&hex).iter().all(|a| (a - 1.0).abs() < 1e-12));
    }

    #[test]
    fn oracle_examples() {
        let sq = square();
        assert_eq!(overshoot_oracle(&sq, &point(&[0.0, 0.5]), 1000, 1).value.value, 0.0);
        let mc = overshoot_oracle(&sq, &point(&[1.5, 0.0]), 400_000, 2);
        assert!(mc.value.agrees_with(0.5, 3.0), "{:?}", mc.value);
        let disk = Ball::unit(2);
        let x = point(&[1.1, 0.0]);
        let mc = overshoot_oracle(&disk, &x, 400_000, 5);
        let fine = Polytope::from_points(
            &sphere_directions(2, 4096)
                .into_iter()
                .map(|u| u / (PI / 4096.0).cos())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let reference = overshoot_polytope(&fine, &x).value.value;
        assert!(mc.value.agrees_with(reference, 3.0), "{:?} vs {reference}", mc.value);
    }

    #[test]
    fn membership_at_boundary_value() {
        let sq = square();
        let est = Estimator::default();
        assert!(illumination_membership(&sq, 0.5, &point(&[0.3, 0.3]), est));
        assert!(illumination_membership(&sq, 0.5, &point(&[1.5, 0.0]), est));
        assert!(!illumination_membership(&sq, 0.5, &point(&[1.6, 0.0]), est));
    }

    #[test]
    fn boundary_points() {
        let sq = square();
        let est = Estimator::default();
        let o = Point::zeros(2);
        let p = illumination_boundary_point(&sq, 0.5, &o, &point(&[1.0, 0.0]), 1e-12, est).unwrap();
        assert!((p - point(&[1.5, 0.0])).norm() < 1e-9);
        let u = point(&[1.0, 1.0]) / 2f64.sqrt();
        let p = illumination_boundary_point(&sq, 0.5, &o, &u, 1e-12, est).unwrap();
        // on the diagonal both facets are active: (1/2)(2a + 2a) = 0.5 at x = (1+a, 1+a)
        assert!((p - point(&[1.25, 1.25])).norm() < 1e-9);
        let ball = Ball::unit(3);
        let p = illumination_boundary_point(&ball, 1e-9, &Point::zeros(3), &point(&[0.0, 0.0, 1.0]), 1e-15, est).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn inner_polytopes() {
        let sq = square();
        let p = illumination_inner_polytope(&sq, 0.5, 4, &Point::zeros(2), 0, Estimator::default()).unwrap();
        assert_eq!(p.vertices().len(), 4);
        for v in p.vertices() {
            assert!((v.amax() - 1.5).abs() < 1e-9);
        }
        let disk = Ball::unit(2);
        let p = illumination_inner_polytope(&disk, 0.01, 64, &Point::zeros(2), 0, Estimator::default()).unwrap();
        let radii: Vec<f64> = p.vertices().iter().map(|v| v.norm()).collect();
        let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
        assert!(hi - lo < 1e-9);
    }

    #[test]
    fn square_gap_volume_closed_form() {
        // side slabs {0 < a ≤ t} contribute 4·2t; corners {a, b > 0, a + b ≤ t} contribute 4·t²/2
        let sq = square();
        let t = 0.1;
        let g = gap_volume(&sq, t, &Point::zeros(2), 2000, Estimator::default()).unwrap();
        assert!((g.value - (8.0 * t + 2.0 * t * t)).abs() < 1e-4, "{g:?}");
        assert!(g.std_error < 1e-3);
    }

    #[test]
    fn sphere_rule_weights() {
        for d in 2..=4 {
            let total: f64 = sphere_rule(d, 500).iter().map(|(_, w)| w).sum();
            assert_relative_eq!(total, unit_sphere_area(d), max_relative = 1e-12);
        }
    }
}
