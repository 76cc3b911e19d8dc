//! Polytope constructions: the greedy inscribed polytope sandwiching `K_t`,
//! circumscribed facet polytopes, and inscribed polytopes of the unit ball.

use crate::body::{ConvexBody, HPolytope, Halfspace, Polytope};
use crate::caps::{cutting_offset, solve_cap_depth, Cap, CapTolerance, OPEN_MARGIN};
use crate::error::{Error, Result};
use crate::linalg::{point, serde_points, unit_ball_volume, Point};
use crate::measure::{self, Estimator};
use crate::sampling::{rng_for, sphere_directions, stream, uniform_on_sphere};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Default admissible cap volume relative to `vol(K)`: `¼e⁻⁵`.
pub fn default_threshold() -> f64 {
    0.25 * E.powi(-5)
}

#[derive(Debug, Clone, Copy)]
pub struct GreedyLimits {
    /// Largest admissible `t / vol(K)`.
    pub threshold: f64,
    pub rejection_streak_limit: usize,
    pub max_iterations: usize,
    /// Run the facet-normal pass after random sampling saturates.
    pub polish: bool,
    pub tol: CapTolerance,
    pub estimator: Estimator,
}

impl Default for GreedyLimits {
    fn default() -> Self {
        Self {
            threshold: default_threshold(),
            rejection_streak_limit: 200,
            max_iterations: 100_000,
            polish: true,
            tol: CapTolerance::default(),
            estimator: Estimator::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Saturation,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyRun {
    #[serde(with = "serde_points")]
    pub vertices: Vec<Point>,
    pub caps: Vec<Cap>,
    pub t: f64,
    pub rejection_streak_limit: usize,
    pub terminated_by: Termination,
    /// Candidates examined in the random phase.
    pub candidates: usize,
    /// Vertices added by the facet-normal pass.
    pub polish_accepts: usize,
    pub vertices_in_body: bool,
    /// `min_F (offset_F - s_t(normal_F))` over the facets of `P_n`, where `s_t(u)`
    /// is the offset of the hyperplane cutting volume `t` in direction `u`.
    /// Nonnegative values certify `K_t ⊂ P_n`.
    pub certificate_slack: f64,
}

impl GreedyRun {
    /// Pairs `(j, k)`, `j < k`, where vertex `j` lies in the open cap of vertex `k`.
    pub fn cap_violations(&self, margin: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, cap) in self.caps.iter().enumerate() {
            for j in 0..k {
                if self.vertices[j].dot(&cap.normal) > cap.base_offset() + margin {
                    out.push((j, k));
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }
}

/// `e^{16d}·vol(K \ K_t) / (t·vol(B))`, the upper bound on the greedy vertex count.
pub fn greedy_count_bound(d: usize, gap_volume: f64, t: f64) -> f64 {
    (16.0 * d as f64).exp() * gap_volume / (t * unit_ball_volume(d))
}

fn in_open_cap(cap: &Cap, v: &Point, margin: f64) -> bool {
    v.dot(&cap.normal) > cap.base_offset() + margin
}

/// Greedy vertex selection: accepts boundary points whose `t`-caps avoid all
/// earlier vertices.
///
/// Candidates are support points `x = x_K(u)` of uniform directions `u`, with
/// `N = u` as the outer normal. Random sampling stops after
/// `rejection_streak_limit` consecutive rejections. With `polish` set, each
/// facet normal of the current hull is then tried as a candidate direction
/// until none is admissible, which leaves `certificate_slack ≥ 0`.
pub fn greedy_inscribed(k: &dyn ConvexBody, t: f64, seed: u64, limits: GreedyLimits) -> Result<(Polytope, GreedyRun)> {
    let d = k.dim();
    let est = limits.estimator;
    let vol = measure::volume(k, est).value;
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("t must be positive, got {t}")));
    }
    if t > limits.threshold * vol {
        return Err(Error::TargetTooLarge {
            target: t,
            limit: limits.threshold * vol,
        });
    }
    let margin = OPEN_MARGIN * k.bounding_ball().1;
    let mut vertices: Vec<Point> = Vec::new();
    let mut caps: Vec<Cap> = Vec::new();
    let mut rng = rng_for(seed, stream::GREEDY, 0);
    let (mut streak, mut candidates) = (0, 0);
    while streak < limits.rejection_streak_limit && candidates < limits.max_iterations {
        candidates += 1;
        let u = uniform_on_sphere(&mut rng, d);
        let x = k.support_point(&u);
        let cap = solve_cap_depth(k, &x, &u, t, limits.tol, est)?;
        if vertices.iter().any(|v| in_open_cap(&cap, v, margin)) {
            streak += 1;
        } else {
            vertices.push(x);
            caps.push(cap);
            streak = 0;
        }
    }
    let terminated_by = if streak >= limits.rejection_streak_limit {
        Termination::Saturation
    } else {
        Termination::IterationCap
    };
    let mut hull = Polytope::from_points(&vertices)?;
    let mut polish_accepts = 0;
    let mut slack = f64::NEG_INFINITY;
    while limits.polish && vertices.len() < limits.max_iterations {
        let mut added = false;
        slack = f64::INFINITY;
        for f in hull.facets() {
            let (s, _) = cutting_offset(k, &f.normal, t, limits.tol, est)?;
            slack = slack.min(f.offset - s);
            let x = k.support_point(&f.normal);
            let cap = solve_cap_depth(k, &x, &f.normal, t, limits.tol, est)?;
            if !vertices.iter().any(|v| in_open_cap(&cap, v, margin)) {
                vertices.push(x);
                caps.push(cap);
                polish_accepts += 1;
                added = true;
            }
        }
        if !added {
            break;
        }
        hull = Polytope::from_points(&vertices)?;
    }
    if !limits.polish {
        slack = hull
            .facets()
            .iter()
            .map(|f| cutting_offset(k, &f.normal, t, limits.tol, est).map(|(s, _)| f.offset - s))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
    }
    let c = k.interior_point();
    let vertices_in_body = vertices.iter().all(|v| k.contains(&(&c + (v - &c) * (1.0 - 1e-9))));
    let run = GreedyRun {
        vertices,
        caps,
        t,
        rejection_streak_limit: limits.rejection_streak_limit,
        terminated_by,
        candidates,
        polish_accepts,
        vertices_in_body,
        certificate_slack: slack,
    };
    Ok((hull, run))
}

/// Intersection of the tangent halfspaces `{⟨·, ξ_j⟩ ≤ h_K(ξ_j)}`.
pub fn circumscribed_facets(k: &dyn ConvexBody, directions: &[Point]) -> Result<HPolytope> {
    let h = HPolytope::new(
        directions
            .iter()
            .map(|u| {
                Halfspace::new(u.clone(), 0.0).map(|h| Halfspace {
                    offset: k.support(&h.normal),
                    ..h
                })
            })
            .collect::<Result<_>>()?,
    )?;
    if !h.is_bounded() {
        return Err(Error::Unbounded);
    }
    Ok(h)
}

/// [`circumscribed_facets`] converted to vertex form through the body's interior point.
pub fn circumscribed_polytope(k: &dyn ConvexBody, directions: &[Point]) -> Result<Polytope> {
    let h = circumscribed_facets(k, directions)?;
    Polytope::from_halfspaces_with_interior(&h, &k.interior_point())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Regular `n`-gon; planar only.
    Regular,
    /// Low-discrepancy sphere points (Fibonacci lattice in `d = 3`).
    Fibonacci,
    /// Uniform random sphere points.
    Random,
}

/// `(64/7)·π·n^{-2/(d-1)}`.
pub fn hausdorff_bound(d: usize, n: usize) -> f64 {
    64.0 / 7.0 * PI * (n as f64).powf(-2.0 / (d as f64 - 1.0))
}

/// Hausdorff distance from a polytope with vertices on the unit sphere to the ball:
/// `1 - min_F offset_F`.
pub fn ball_hausdorff(p: &Polytope) -> f64 {
    1.0 - p.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min)
}

/// Polytope with `n` vertices on the unit sphere and its Hausdorff distance to the ball.
pub fn ball_inscribed_polytope(d: usize, n: usize, construction: Construction, seed: u64) -> Result<(Polytope, f64)> {
    if !(2..=4).contains(&d) {
        return Err(Error::DimensionUnsupported(d));
    }
    if n < d + 1 {
        return Err(Error::Invalid(format!("need at least {} vertices, got {n}", d + 1)));
    }
    let build = |pts: &[Point]| -> Result<(Polytope, f64)> {
        let p = Polytope::from_points(pts)?;
        let dh = ball_hausdorff(&p);
        if dh >= 1.0 {
            return Err(Error::Degenerate("origin is not interior to the hull".into()));
        }
        Ok((p, dh))
    };
    match construction {
        Construction::Regular => {
            if d != 2 {
                return Err(Error::DimensionUnsupported(d));
            }
            let pts: Vec<Point> = (0..n)
                .map(|j| {
                    let a = 2.0 * PI * j as f64 / n as f64;
                    point(&[a.cos(), a.sin()])
                })
                .collect();
            build(&pts)
        }
        Construction::Fibonacci => build(&sphere_directions(d, n)),
        Construction::Random => {
            let mut last = Error::Degenerate("no attempt".into());
            for attempt in 0..100 {
                let mut rng = rng_for(seed, stream::CORPUS, attempt);
                let pts: Vec<Point> = (0..n).map(|_| uniform_on_sphere(&mut rng, d)).collect();
                match build(&pts) {
                    Ok(r) => return Ok(r),
                    Err(e) => last = e,
                }
            }
            Err(last)
        }
    }
}
