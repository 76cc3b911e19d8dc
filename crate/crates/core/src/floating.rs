//! The floating body `K_t`: membership by minimal cuts, outer polytopes from
//! sampled cutting halfspaces, and the inscribed-ball check at level `vol/(4e⁴)`.

use crate::body::{hpoly_vertices, ConvexBody, HPolytope, Halfspace, Polytope};
use crate::caps::{cutting_offset, halfspace_volume, CapTolerance};
use crate::error::{Error, Result};
use crate::linalg::{complement_basis, Point};
use crate::measure::{self, Estimator, VolumeEstimate};
use crate::report::{Params, Report};
use crate::sampling::rotated_directions;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Parameters of a floating-body query.
#[derive(Debug, Clone, Copy)]
pub struct FloatingQuery<'a> {
    pub body: &'a dyn ConvexBody,
    pub t: f64,
    /// Number of sampled start directions for the minimal-cut search.
    pub direction_budget: usize,
    /// Number of best starts refined by local descent.
    pub optimizer_restarts: usize,
    pub estimator: Estimator,
    /// Relative band around `t` reported as [`FloatingVerdict::Boundary`].
    pub tol_rel: f64,
}

impl<'a> FloatingQuery<'a> {
    pub fn new(body: &'a dyn ConvexBody, t: f64) -> Self {
        Self {
            body,
            t,
            direction_budget: 64,
            optimizer_restarts: 4,
            estimator: Estimator::default(),
            tol_rel: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FloatingVerdict {
    /// The searched minimal cut exceeds `t`; `margin` is its relative excess.
    Inside {
        margin: f64,
    },
    /// A halfspace through the point cuts less than `t`.
    Outside {
        certificate: Vec<f64>,
        volume: f64,
    },
    Boundary {
        tol: f64,
    },
}

fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Spherical coordinate descent from `start`, with golden-section searches
/// along great circles through each tangent axis.
pub(crate) fn sphere_descent<F: Fn(&Point) -> f64>(f: &F, start: &Point, value: f64, step: f64) -> (Point, f64) {
    let mut xi = start.clone();
    let mut best = value;
    let mut step = step;
    for _ in 0..200 {
        if step < 1e-9 {
            break;
        }
        let mut improved = false;
        let basis = complement_basis(&xi);
        for col in basis.column_iter() {
            let e = col.into_owned();
            let along = |th: f64| (&xi * th.cos() + &e * th.sin()).normalize();
            let (th, v) = golden_min(|th| f(&along(th)), -step, step, 30);
            if v < best {
                xi = along(th);
                best = v;
                improved = true;
            }
        }
        if !improved {
            step *= 0.3;
        }
    }
    (xi, best)
}

/// Direction `ξ` minimizing `vol(K ∩ {⟨y, ξ⟩ ≥ ⟨x, ξ⟩})`, by multi-start descent.
///
/// The result is an upper bound on the true infimum over the sphere.
pub fn min_cap_through_point(
    k: &dyn ConvexBody,
    x: &Point,
    starts: usize,
    restarts: usize,
    seed: u64,
    est: Estimator,
) -> (Point, VolumeEstimate) {
    let d = k.dim();
    let f = |xi: &Point| halfspace_volume(k, xi, x.dot(xi), est).value;
    let dirs = rotated_directions(d, starts.max(1), seed);
    let mut scored: Vec<(usize, f64)> = dirs.par_iter().map(f).enumerate().collect();
    scored.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    let step = PI / (starts.max(2) as f64).powf(1.0 / (d as f64 - 1.0));
    let refined: Vec<(Point, f64)> = scored
        .par_iter()
        .take(restarts.max(1))
        .map(|&(i, v)| sphere_descent(&f, &dirs[i], v, step))
        .collect();
    let (xi, _) = refined
        .into_iter()
        .fold(None::<(Point, f64)>, |acc, (p, v)| match acc {
            Some((q, w)) if w <= v => Some((q, w)),
            _ => Some((p, v)),
        })
        .unwrap();
    let vol = halfspace_volume(k, &xi, x.dot(&xi), est);
    (xi, vol)
}

/// Classifies `x` against `K_t` relative to the search budget of `q`.
pub fn floating_membership(q: &FloatingQuery, x: &Point, seed: u64) -> FloatingVerdict {
    let (xi, v) = min_cap_through_point(q.body, x, q.direction_budget, q.optimizer_restarts, seed, q.estimator);
    if v.value < q.t * (1.0 - q.tol_rel) {
        FloatingVerdict::Outside {
            certificate: xi.iter().cloned().collect(),
            volume: v.value,
        }
    } else if v.value > q.t * (1.0 + q.tol_rel) {
        FloatingVerdict::Inside {
            margin: v.value / q.t - 1.0,
        }
    } else {
        FloatingVerdict::Boundary { tol: q.tol_rel }
    }
}

/// Outer approximation of `K_t` by the `t`-cutting halfspaces in the given directions.
#[derive(Debug, Clone)]
pub struct FloatingOuter {
    pub halfspaces: HPolytope,
    pub polytope: Polytope,
    /// Achieved cut volume per direction.
    pub cut_volumes: Vec<VolumeEstimate>,
}

impl FloatingOuter {
    /// Offset `s_j` of the `j`-th cutting hyperplane.
    pub fn offset(&self, j: usize) -> f64 {
        self.halfspaces.halfspaces()[j].offset
    }
}

/// Intersects `{⟨·, ξ_j⟩ ≤ s_j}` where each hyperplane cuts volume `t` from `K`.
pub fn floating_outer_with_directions(
    k: &dyn ConvexBody,
    t: f64,
    directions: &[Point],
    tol: CapTolerance,
    est: Estimator,
) -> Result<FloatingOuter> {
    let d = k.dim();
    if directions.len() < d + 1 {
        return Err(Error::Invalid(format!("need at least {} directions", d + 1)));
    }
    let cuts: Vec<(f64, VolumeEstimate)> = directions
        .par_iter()
        .map(|u| cutting_offset(k, u, t, tol, est))
        .collect::<Result<_>>()?;
    let halfspaces = HPolytope::new(
        directions
            .iter()
            .zip(&cuts)
            .map(|(u, (s, _))| Halfspace {
                normal: u.clone(),
                offset: *s,
            })
            .collect(),
    )?;
    let centroid = measure::inertia(k, &Point::zeros(d), est)?.centroid;
    let slack = halfspaces
        .halfspaces()
        .iter()
        .map(|h| h.offset - h.normal.dot(&centroid))
        .fold(f64::INFINITY, f64::min);
    let scale = k.bounding_ball().1;
    let polytope = if slack > 1e-9 * scale {
        Polytope::from_halfspaces_with_interior(&halfspaces, &centroid)
    } else if directions.len() <= 64 {
        hpoly_vertices(&halfspaces).and_then(|v| Polytope::from_points(v.vertices()))
    } else {
        Err(Error::EmptyIntersection)
    }
    .map_err(|e| match e {
        Error::Degenerate(_) | Error::Unbounded => Error::EmptyIntersection,
        e => e,
    })?;
    Ok(FloatingOuter {
        halfspaces,
        polytope,
        cut_volumes: cuts.into_iter().map(|(_, v)| v).collect(),
    })
}

/// [`floating_outer_with_directions`] over `m` low-discrepancy directions.
pub fn floating_outer_polytope(q: &FloatingQuery, m: usize, seed: u64) -> Result<FloatingOuter> {
    let dirs = rotated_directions(q.body.dim(), m, seed);
    floating_outer_with_directions(q.body, q.t, &dirs, CapTolerance::default(), q.estimator)
}

/// Radius `vol^{1/d} / (24 e⁵ √π)` of the ball claimed inside `K_{vol/(4e⁴)}`.
pub fn inscribed_ball_radius(volume: f64, d: usize) -> f64 {
    volume.powf(1.0 / d as f64) / (24.0 * E.powi(5) * PI.sqrt())
}

/// Checks that every hyperplane at distance `inscribed_ball_radius` from the origin
/// cuts off more than `vol/(4e⁴)`, over `directions` sampled directions.
///
/// `K` should be centered at its centroid and isotropic.
pub fn inscribed_ball_check(k: &dyn ConvexBody, body_id: &str, directions: usize, seed: u64, est: Estimator) -> Report {
    let d = k.dim();
    let vol = measure::volume(k, est);
    let r0 = inscribed_ball_radius(vol.value, d);
    let level = vol.value / (4.0 * E.powi(4));
    let dirs = rotated_directions(d, directions, seed);
    let caps: Vec<VolumeEstimate> = dirs.par_iter().map(|u| halfspace_volume(k, u, r0, est)).collect();
    let (worst, cap) = caps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.partial_cmp(&b.1.value).unwrap())
        .unwrap();
    let slack = 3.0 * (cap.std_error + vol.std_error / (4.0 * E.powi(4)));
    let params = Params::new(body_id, d, seed)
        .with_t(level)
        .budget("directions", directions as f64)
        .budget("radius", r0);
    let rhs = cap.value - slack;
    Report::new("Lemma2.7", "min cut beyond radius", params, level, rhs, 0.0).with_note(format!(
        "worst direction {:?}",
        dirs[worst].iter().map(|c| (c * 1e6).round() / 1e6).collect::<Vec<_>>()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope};
    use crate::linalg::point;
    use approx::assert_relative_eq;

    fn segment(h: f64) -> f64 {
        (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt()
    }

    #[test]
    fn disk_center_cuts_half() {
        let disk = Ball::unit(2);
        let (_, v) = min_cap_through_point(&disk, &Point::zeros(2), 16, 2, 1, Estimator::default());
        assert_relative_eq!(v.value, PI / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn disk_off_center_min_is_radial() {
        let disk = Ball::unit(2);
        let (xi, v) = min_cap_through_point(&disk, &point(&[0.7, 0.0]), 64, 4, 1, Estimator::default());
        assert!((xi - point(&[1.0, 0.0])).norm() < 1e-4);
        assert_relative_eq!(v.value, segment(0.3), max_relative = 1e-8);
    }

    #[test]
    fn square_corner_matches_dense_sweep() {
        let sq = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        let x = point(&[0.9, 0.9]);
        let (xi, v) = min_cap_through_point(&sq, &x, 64, 4, 3, Estimator::default());
        let sweep = crate::sampling::sphere_directions(2, 10_000)
            .iter()
            .map(|u| sq.halfspace_volume(u, x.dot(u)))
            .fold(f64::INFINITY, f64::min);
        assert!(v.value <= sweep + 1e-9);
        assert!((xi - point(&[1.0, 1.0]) / 2f64.sqrt()).norm() < 1e-3);
    }

    #[test]
    fn membership_examples() {
        let disk = Ball::unit(2);
        let q = FloatingQuery::new(&disk, PI / 2.0 - 0.01);
        assert!(matches!(
            floating_membership(&q, &Point::zeros(2), 1),
            FloatingVerdict::Inside { .. }
        ));
        let h = 0.2;
        let q = FloatingQuery::new(&disk, segment(h));
        match floating_membership(&q, &point(&[1.0 - h / 2.0, 0.0]), 1) {
            FloatingVerdict::Outside { certificate, .. } => {
                assert!((point(&certificate) - point(&[1.0, 0.0])).norm() < 1e-3)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn disk_outer_polytope_has_radius_one_minus_h() {
        let disk = Ball::unit(2);
        let h = 0.1;
        let q = FloatingQuery::new(&disk, segment(h));
        let outer = floating_outer_polytope(&q, 256, 0).unwrap();
        for j in 0..256 {
            assert_relative_eq!(outer.offset(j), 1.0 - h, epsilon = 1e-9);
        }
        let inradius = outer.polytope.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
        assert!((inradius - (1.0 - h)).abs() < 1e-3);
    }

    #[test]
    fn empty_floating_body_is_reported() {
        let disk = Ball::unit(2);
        let q = FloatingQuery::new(&disk, 1.6);
        assert!(matches!(floating_outer_polytope(&q, 100, 0), Err(Error::EmptyIntersection)));
    }

    #[test]
    fn inscribed_ball_on_disk_and_square() {
        let disk = Ball::unit(2);
        let r = inscribed_ball_check(&disk, "disk", 50, 1, Estimator::default());
        assert!(r.pass && r.margin > 0.0);
        let expected = segment(1.0 - inscribed_ball_radius(PI, 2));
        assert_relative_eq!(r.rhs, expected, max_relative = 1e-9);
        let sq = Polytope::from_hpolytope(&HPolytope::cube(2, -0.5, 0.5)).unwrap();
        let r = inscribed_ball_check(&sq, "square", 50, 1, Estimator::default());
        // the diagonal cut is the smallest: a right triangle with legs 1 - √2·r₀
        let r0 = inscribed_ball_radius(1.0, 2);
        assert!(r.rhs >= (1.0 - 2f64.sqrt() * r0).powi(2) / 2.0 - 1e-12);
        assert!(r.rhs <= 0.5 - r0 + 1e-12);
        assert!(r.pass);
    }
}
