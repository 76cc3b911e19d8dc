//! Caps `K ∩ {y : ⟨y, N⟩ ≥ ⟨x, N⟩ - Δ}` and the depth solve for a prescribed cap volume.

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{serde_point, unit_ball_volume, Point};
use crate::measure::{self, Estimator, Method, VolumeEstimate};
use crate::sampling::{rng_for, run_batches, stream, uniform_in_ball};
use serde::{Deserialize, Serialize};

/// Allowed slack in `⟨x, N⟩ = h_K(N)`, relative to `max(1, bounding radius)`.
pub const SUPPORT_TOL: f64 = 1e-6;
/// Strictness margin of the open cap, relative to the bounding radius.
pub const OPEN_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapTolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for CapTolerance {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-9 }
    }
}

impl CapTolerance {
    pub fn for_target(&self, t: f64) -> f64 {
        self.abs.max(self.rel * t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    #[serde(with = "serde_point")]
    pub anchor: Point,
    #[serde(with = "serde_point")]
    pub normal: Point,
    pub depth: f64,
    pub target_volume: f64,
    pub achieved_volume: VolumeEstimate,
}

impl Cap {
    /// Offset of the base hyperplane `⟨y, N⟩ = ⟨x, N⟩ - Δ`.
    pub fn base_offset(&self) -> f64 {
        self.anchor.dot(&self.normal) - self.depth
    }
}

fn check_supporting(k: &dyn ConvexBody, x: &Point, n: &Point) -> Result<f64> {
    let h = k.support(n);
    let gap = (x.dot(n) - h).abs();
    let scale = k.bounding_ball().1.max(1.0);
    if gap > SUPPORT_TOL * scale {
        return Err(Error::NotSupporting { gap });
    }
    Ok(h)
}

fn mc_halfspace_volume(k: &dyn ConvexBody, n: &Point, offset: f64, samples: usize, seed: u64) -> VolumeEstimate {
    let (c, r) = k.bounding_ball();
    let d = k.dim();
    let hits: u64 = run_batches(samples, |b, len| {
        let mut rng = rng_for(seed, stream::CAP_CLOUD, b);
        let mut y = c.clone();
        let mut h = 0u64;
        for _ in 0..len {
            uniform_in_ball(&mut rng, &c, r, &mut y);
            if y.dot(n) >= offset && k.contains(&y) {
                h += 1;
            }
        }
        h
    })
    .into_iter()
    .sum();
    VolumeEstimate::from_hits(hits, samples as u64, unit_ball_volume(d) * r.powi(d as i32), seed)
}

/// Volume of `{y ∈ K : ⟨y, n⟩ ≥ offset}` for unit `n`, exact when the body allows it.
pub fn halfspace_volume(k: &dyn ConvexBody, n: &Point, offset: f64, est: Estimator) -> VolumeEstimate {
    match k.exact_halfspace_volume(n, offset) {
        Some(v) if !est.force_mc => VolumeEstimate::exact(v),
        _ => mc_halfspace_volume(k, n, offset, est.samples, est.seed),
    }
}

/// Volume of the depth-`Δ` cap at the supporting pair `(x, N)`.
pub fn cap_volume(k: &dyn ConvexBody, x: &Point, n: &Point, depth: f64, est: Estimator) -> Result<VolumeEstimate> {
    check_supporting(k, x, n)?;
    Ok(halfspace_volume(k, n, x.dot(n) - depth, est))
}

/// Offset `s` with `vol{y ∈ K : ⟨y, n⟩ ≥ s} = t`, and the achieved volume.
///
/// Exact bodies use bisection on `s` over the support interval. Otherwise a
/// single point cloud is drawn once and `s` is read off as a quantile of the
/// projections, so the volume-versus-offset curve is monotone by construction.
pub fn cutting_offset(k: &dyn ConvexBody, n: &Point, t: f64, tol: CapTolerance, est: Estimator) -> Result<(f64, VolumeEstimate)> {
    let vol = measure::volume(k, est);
    if !(t > 0.0) {
        return Err(Error::Invalid(format!("cap volume must be positive, got {t}")));
    }
    if t >= vol.value {
        return Err(Error::TargetTooLarge {
            target: t,
            limit: vol.value,
        });
    }
    let top = k.support(n);
    let bottom = -k.support(&-n);
    let goal = tol.for_target(t);
    if !est.force_mc && k.exact_halfspace_volume(n, top).is_some() {
        let (mut lo, mut hi) = (bottom, top);
        let mut best = (top, 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = k.exact_halfspace_volume(n, mid).unwrap();
            if (v - t).abs() < (best.1 - t).abs() {
                best = (mid, v);
            }
            if (v - t).abs() <= goal || hi - lo <= 1e-15 * (top - bottom) {
                break;
            }
            if v > t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok((best.0, VolumeEstimate::exact(best.1)));
    }

    let (c, r) = k.bounding_ball();
    let d = k.dim();
    let mut proj: Vec<f64> = run_batches(est.samples, |b, len| {
        let mut rng = rng_for(est.seed, stream::CAP_CLOUD, b);
        let mut y = c.clone();
        let mut out = Vec::new();
        for _ in 0..len {
            uniform_in_ball(&mut rng, &c, r, &mut y);
            if k.contains(&y) {
                out.push(y.dot(n));
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();
    proj.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let cell = unit_ball_volume(d) * r.powi(d as i32) / est.samples as f64;
    let count = ((t / cell).round() as usize).clamp(1, proj.len().max(1));
    let achieved = VolumeEstimate::from_hits(count as u64, est.samples as u64, cell * est.samples as f64, est.seed);
    if achieved.std_error > goal {
        return Err(Error::SolverStall {
            noise: achieved.std_error,
            tol: goal,
        });
    }
    let s = if count < proj.len() {
        0.5 * (proj[count - 1] + proj[count])
    } else {
        bottom
    };
    Ok((s, achieved))
}

/// Depth `Δ` such that the cap at `(x, N)` has volume `t`.
pub fn solve_cap_depth(k: &dyn ConvexBody, x: &Point, n: &Point, t: f64, tol: CapTolerance, est: Estimator) -> Result<Cap> {
    let h = check_supporting(k, x, n)?;
    let (s, achieved) = cutting_offset(k, n, t, tol, est)?;
    let width = h + k.support(&-n);
    Ok(Cap {
        anchor: x.clone(),
        normal: n.clone(),
        depth: (x.dot(n) - s).clamp(0.0, width),
        target_volume: t,
        achieved_volume: achieved,
    })
}

/// Open-cap membership: `p ∈ K` and `⟨p, N⟩ > ⟨x, N⟩ - Δ + margin`.
pub fn cap_contains(cap: &Cap, p: &Point, k: &dyn ConvexBody) -> bool {
    let margin = OPEN_MARGIN * k.bounding_ball().1;
    k.contains(p) && p.dot(&cap.normal) > cap.base_offset() + margin
}

impl Cap {
    pub fn is_exact(&self) -> bool {
        self.achieved_volume.method == Method::Exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope, Polytope};
    use crate::linalg::point;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn segment(h: f64) -> f64 {
        (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt()
    }

    #[test]
    fn disk_cap_volumes() {
        let disk = Ball::unit(2);
        let x = point(&[1.0, 0.0]);
        let v = cap_volume(&disk, &x, &x, 1.0, Estimator::default()).unwrap();
        assert_relative_eq!(v.value, PI / 2.0, max_relative = 1e-12);
        let v = cap_volume(&disk, &x, &x, 0.3, Estimator::default()).unwrap();
        assert_relative_eq!(v.value, segment(0.3), max_relative = 1e-12);
        let mc = cap_volume(&disk, &x, &x, 0.3, Estimator::mc(400_000, 4)).unwrap();
        assert!(mc.agrees_with(segment(0.3), 3.0), "{mc:?}");
    }

    #[test]
    fn cube_slab() {
        let cube = Polytope::from_hpolytope(&HPolytope::cube(3, 0.0, 1.0)).unwrap();
        let x = point(&[1.0, 0.5, 0.5]);
        let e1 = point(&[1.0, 0.0, 0.0]);
        let v = cap_volume(&cube, &x, &e1, 0.25, Estimator::default()).unwrap();
        assert_relative_eq!(v.value, 0.25, max_relative = 1e-12);
        let cap = solve_cap_depth(&cube, &x, &e1, 0.1, CapTolerance::default(), Estimator::default()).unwrap();
        assert_relative_eq!(cap.depth, 0.1, max_relative = 1e-8);
    }

    #[test]
    fn disk_depth_solve() {
        let disk = Ball::unit(2);
        let x = point(&[1.0, 0.0]);
        let cap = solve_cap_depth(&disk, &x, &x, PI / 2.0 - 1e-9, CapTolerance::default(), Estimator::default()).unwrap();
        assert_relative_eq!(cap.depth, 1.0, epsilon = 1e-8);
        let cap = solve_cap_depth(&disk, &x, &x, 0.1, CapTolerance::default(), Estimator::default()).unwrap();
        // independent inversion of the segment formula by secant iteration
        let (mut a, mut b) = (0.3, 0.5);
        for _ in 0..60 {
            let (fa, fb) = (segment(a) - 0.1, segment(b) - 0.1);
            if fb == fa {
                break;
            }
            let c = b - fb * (b - a) / (fb - fa);
            a = b;
            b = c;
        }
        assert_relative_eq!(cap.depth, b, max_relative = 1e-8);
        assert!((cap.depth - 0.143_241_843_7).abs() < 1e-9);
        assert!((cap.achieved_volume.value - 0.1).abs() <= 1e-10);
    }

    #[test]
    fn depth_errors() {
        let disk = Ball::unit(2);
        let x = point(&[1.0, 0.0]);
        assert!(matches!(
            solve_cap_depth(&disk, &x, &x, 4.0, CapTolerance::default(), Estimator::default()),
            Err(Error::TargetTooLarge { .. })
        ));
        assert!(matches!(
            cap_volume(&disk, &point(&[0.5, 0.0]), &x, 0.1, Estimator::default()),
            Err(Error::NotSupporting { .. })
        ));
        let stall = solve_cap_depth(&disk, &x, &x, 0.1, CapTolerance::default(), Estimator::mc(10_000, 1));
        assert!(matches!(stall, Err(Error::SolverStall { .. })));
    }

    #[test]
    fn mc_depth_solve_is_close() {
        let disk = Ball::unit(2);
        let x = point(&[1.0, 0.0]);
        let tol = CapTolerance { abs: 5e-3, rel: 0.0 };
        let cap = solve_cap_depth(&disk, &x, &x, 0.5, tol, Estimator::mc(200_000, 8)).unwrap();
        let exact = cap_volume(&disk, &x, &x, cap.depth, Estimator::default()).unwrap();
        assert!((exact.value - 0.5).abs() < 4.0 * cap.achieved_volume.std_error + 1e-4);
    }

    #[test]
    fn open_cap_membership() {
        let disk = Ball::unit(2);
        let cap = Cap {
            anchor: point(&[1.0, 0.0]),
            normal: point(&[1.0, 0.0]),
            depth: 0.5,
            target_volume: 0.0,
            achieved_volume: VolumeEstimate::exact(0.0),
        };
        assert!(cap_contains(&cap, &point(&[0.9, 0.0]), &disk));
        assert!(!cap_contains(&cap, &point(&[0.0, 0.0]), &disk));
        assert!(!cap_contains(&cap, &point(&[0.5, 0.3]), &disk));
        let json = serde_json::to_string(&cap).unwrap();
        let back: Cap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cap);
    }
}
