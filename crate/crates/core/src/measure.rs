//! Volumes, moments, sections and the symmetric-difference metric.
//!
//! Exact values come from the bodies' closed-form hooks (polytopes in
//! `d ≤ 4`, balls, ellipsoids and affine images of these). Everything else is
//! estimated by hit-or-miss sampling in the bounding ball with one root seed;
//! see [`crate::sampling`] for the batching contract.

use crate::body::{ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{complement_basis, unit_ball_volume, Point};
use crate::sampling::{rng_for, run_batches, stream, uniform_in_ball};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Default Monte Carlo sample budget.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    MonteCarlo,
    Quadrature,
}

/// A volume-like quantity with its standard error and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub method: Method,
    pub seed: Option<u64>,
}

impl VolumeEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            samples: 0,
            method: Method::Exact,
            seed: None,
        }
    }

    /// Hit-or-miss estimate from `hits` of `samples` in a region of volume `domain`.
    ///
    /// With zero hits the error is the one-sided 95% bound `3·domain/samples`.
    pub fn from_hits(hits: u64, samples: u64, domain: f64, seed: u64) -> Self {
        let n = samples.max(1) as f64;
        let p = hits as f64 / n;
        let std_error = if hits == 0 {
            3.0 * domain / n
        } else {
            domain * (p * (1.0 - p) / n).sqrt()
        };
        Self {
            value: domain * p,
            std_error,
            samples,
            method: Method::MonteCarlo,
            seed: Some(seed),
        }
    }

    /// True when `other` is within `k` combined standard errors.
    pub fn agrees_with(&self, other: f64, k: f64) -> bool {
        (self.value - other).abs() <= k * self.std_error
    }
}

/// Centroid, second moments `∫ (x - o)(x - o)ᵀ dx` about a declared origin `o`, and volume.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaData {
    pub centroid: Point,
    pub second_moment: DMatrix<f64>,
    pub volume: f64,
}

/// How to evaluate a quantity: exact when the body allows it, else sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Estimator {
    pub samples: usize,
    pub seed: u64,
    /// Skip closed forms even when available.
    pub force_mc: bool,
}

impl Default for Estimator {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            force_mc: false,
        }
    }
}

impl Estimator {
    pub fn mc(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            force_mc: true,
        }
    }

    pub fn auto(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            force_mc: false,
        }
    }
}

/// Exact volume of a polytope from its cone triangulation.
pub fn polytope_volume_exact(p: &Polytope) -> Result<VolumeEstimate> {
    let v = p.volume();
    if v < 1e-14 * p.scale().powi(p.dim() as i32) {
        return Err(Error::Degenerate("polytope volume vanishes".into()));
    }
    Ok(VolumeEstimate::exact(v))
}

/// Hit-or-miss volume over the bounding ball.
pub fn mc_volume(k: &dyn ConvexBody, samples: usize, seed: u64) -> VolumeEstimate {
    let (c, r) = k.bounding_ball();
    let d = k.dim();
    let hits: u64 = run_batches(samples, |b, len| {
        let mut rng = rng_for(seed, stream::VOLUME, b);
        let mut x = c.clone();
        let mut h = 0u64;
        for _ in 0..len {
            uniform_in_ball(&mut rng, &c, r, &mut x);
            if k.contains(&x) {
                h += 1;
            }
        }
        h
    })
    .into_iter()
    .sum();
    VolumeEstimate::from_hits(hits, samples as u64, unit_ball_volume(d) * r.powi(d as i32), seed)
}

pub fn volume(k: &dyn ConvexBody, est: Estimator) -> VolumeEstimate {
    match k.exact_volume() {
        Some(v) if !est.force_mc => VolumeEstimate::exact(v),
        _ => mc_volume(k, est.samples, est.seed),
    }
}

/// Centroid and second moments about `origin`.
pub fn inertia(k: &dyn ConvexBody, origin: &Point, est: Estimator) -> Result<InertiaData> {
    if !est.force_mc {
        if let Some(i) = k.exact_inertia(origin) {
            return Ok(i);
        }
    }
    let (c, r) = k.bounding_ball();
    let d = k.dim();
    let parts = run_batches(est.samples, |b, len| {
        let mut rng = rng_for(est.seed, stream::INERTIA, b);
        let mut x = c.clone();
        let mut hits = 0u64;
        let mut first = Point::zeros(d);
        let mut second = DMatrix::zeros(d, d);
        for _ in 0..len {
            uniform_in_ball(&mut rng, &c, r, &mut x);
            if k.contains(&x) {
                hits += 1;
                let y = &x - origin;
                first += &y;
                second += &y * y.transpose();
            }
        }
        (hits, first, second)
    });
    let mut hits = 0u64;
    let mut first = Point::zeros(d);
    let mut second = DMatrix::zeros(d, d);
    for (h, f, s) in parts {
        hits += h;
        first += f;
        second += s;
    }
    if hits == 0 {
        return Err(Error::Degenerate("no samples landed in the body".into()));
    }
    let cell = unit_ball_volume(d) * r.powi(d as i32) / est.samples as f64;
    Ok(InertiaData {
        centroid: first / hits as f64 + origin,
        second_moment: second * cell,
        volume: hits as f64 * cell,
    })
}

/// `(d-1)`-volume of `K ∩ {y : ⟨y, normal⟩ = ⟨point, normal⟩}` for unit `normal`.
pub fn section_volume(k: &dyn ConvexBody, point: &Point, normal: &Point, est: Estimator) -> Result<VolumeEstimate> {
    let offset = point.dot(normal);
    let (c, r) = k.bounding_ball();
    let dist = offset - c.dot(normal);
    if dist.abs() >= r {
        return Err(Error::EmptySection);
    }
    if !est.force_mc {
        if let Some(v) = k.exact_section_volume(normal, offset) {
            return Ok(VolumeEstimate::exact(v));
        }
    }
    let d = k.dim();
    let basis = complement_basis(normal);
    let foot = &c + normal * dist;
    let rho = (r * r - dist * dist).sqrt();
    let zero = Point::zeros(d - 1);
    let hits: u64 = run_batches(est.samples, |b, len| {
        let mut rng = rng_for(est.seed, stream::SECTION, b);
        let mut y = zero.clone();
        let mut h = 0u64;
        for _ in 0..len {
            uniform_in_ball(&mut rng, &zero, rho, &mut y);
            if k.contains(&(&foot + &basis * &y)) {
                h += 1;
            }
        }
        h
    })
    .into_iter()
    .sum();
    Ok(VolumeEstimate::from_hits(
        hits,
        est.samples as u64,
        unit_ball_volume(d - 1) * rho.powi(d as i32 - 1),
        est.seed,
    ))
}

fn polytope_contains_polytope(outer: &Polytope, inner: &Polytope) -> bool {
    inner.vertices().iter().all(|v| outer.contains_point(v))
}

/// `vol((A \ B) ∪ (B \ A))`.
///
/// Exact when both are polytopes with `d ≤ 3` and one contains the other;
/// otherwise counts XOR membership over a ball enclosing both bounding balls.
pub fn symmetric_difference(a: &dyn ConvexBody, b: &dyn ConvexBody, est: Estimator) -> Result<VolumeEstimate> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: b.dim() });
    }
    if !est.force_mc && d <= 3 {
        if let (Some(p), Some(q)) = (a.as_polytope(), b.as_polytope()) {
            if polytope_contains_polytope(p, q) || polytope_contains_polytope(q, p) {
                return Ok(VolumeEstimate::exact((p.volume() - q.volume()).abs()));
            }
        }
    }
    let (ca, ra) = a.bounding_ball();
    let (cb, rb) = b.bounding_ball();
    let gap = (&cb - &ca).norm();
    let (c, r) = if gap + rb <= ra {
        (ca, ra)
    } else if gap + ra <= rb {
        (cb, rb)
    } else {
        let r = 0.5 * (gap + ra + rb);
        let dir = if gap > 0.0 { (&cb - &ca) / gap } else { Point::zeros(d) };
        (&ca + dir * (r - ra), r)
    };
    let hits: u64 = run_batches(est.samples, |bi, len| {
        let mut rng = rng_for(est.seed, stream::SYMDIFF, bi);
        let mut x = c.clone();
        let mut h = 0u64;
        for _ in 0..len {
            uniform_in_ball(&mut rng, &c, r, &mut x);
            if a.contains(&x) != b.contains(&x) {
                h += 1;
            }
        }
        h
    })
    .into_iter()
    .sum();
    Ok(VolumeEstimate::from_hits(
        hits,
        est.samples as u64,
        unit_ball_volume(d) * r.powi(d as i32),
        est.seed,
    ))
}

/// Writes estimates as CSV with columns `value, std_error, samples, method, seed`.
pub fn write_estimates_csv<W: Write>(out: W, estimates: &[VolumeEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for e in estimates {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope};
    use crate::linalg::point;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn regular_polygon(n: usize) -> Polytope {
        Polytope::from_points(&crate::sampling::sphere_directions(2, n)).unwrap()
    }

    #[test]
    fn exact_volumes() {
        let cube = Polytope::from_hpolytope(&HPolytope::cube(3, 0.0, 1.0)).unwrap();
        assert_relative_eq!(polytope_volume_exact(&cube).unwrap().value, 1.0, max_relative = 1e-12);
        assert_relative_eq!(regular_polygon(4).volume(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn mc_disk_and_ball() {
        let e = mc_volume(&Ball::unit(2), 200_000, 5);
        assert!(e.agrees_with(PI, 3.0), "{e:?}");
        let e = mc_volume(&Ball::unit(3), 200_000, 6);
        assert!(e.agrees_with(4.0 * PI / 3.0, 3.0), "{e:?}");
    }

    #[test]
    fn inertia_examples() {
        let cube = Polytope::from_hpolytope(&HPolytope::cube(3, -1.0, 1.0)).unwrap();
        let i = inertia(&cube, &Point::zeros(3), Estimator::default()).unwrap();
        assert!(i.centroid.norm() < 1e-12);
        for k in 0..3 {
            assert_relative_eq!(i.second_moment[(k, k)], 8.0 / 3.0, max_relative = 1e-12);
        }
        let disk = inertia(&Ball::unit(2), &Point::zeros(2), Estimator::default()).unwrap();
        assert_relative_eq!(disk.second_moment[(0, 0)], PI / 4.0, max_relative = 1e-12);
        let mc = inertia(&Ball::unit(2), &Point::zeros(2), Estimator::mc(400_000, 3)).unwrap();
        assert!((mc.second_moment[(0, 0)] - PI / 4.0).abs() < 0.01);
    }

    #[test]
    fn section_examples() {
        let cube = Polytope::from_hpolytope(&HPolytope::cube(3, -1.0, 1.0)).unwrap();
        let e1 = point(&[1.0, 0.0, 0.0]);
        let s = section_volume(&cube, &Point::zeros(3), &e1, Estimator::default()).unwrap();
        assert_relative_eq!(s.value, 4.0, max_relative = 1e-12);
        let s = section_volume(&Ball::unit(3), &Point::zeros(3), &e1, Estimator::default()).unwrap();
        assert_relative_eq!(s.value, PI, max_relative = 1e-12);
        let s = section_volume(&Ball::unit(2), &point(&[0.5, 0.0]), &point(&[1.0, 0.0]), Estimator::default()).unwrap();
        assert_relative_eq!(s.value, 3f64.sqrt(), max_relative = 1e-12);
        let s = section_volume(&Ball::unit(2), &point(&[0.5, 0.0]), &point(&[1.0, 0.0]), Estimator::mc(100_000, 1)).unwrap();
        assert!(s.agrees_with(3f64.sqrt(), 3.0), "{s:?}");
    }

    #[test]
    fn symmetric_difference_examples() {
        let disk = Ball::unit(2);
        let same = symmetric_difference(&disk, &disk, Estimator::mc(10_000, 1)).unwrap();
        assert_eq!(same.value, 0.0);
        let sq = regular_polygon(4);
        let e = symmetric_difference(&disk, &sq, Estimator::auto(400_000, 2)).unwrap();
        assert!(e.agrees_with(PI - 2.0, 3.0), "{e:?}");
        let hex = regular_polygon(6);
        let e = symmetric_difference(&disk, &hex, Estimator::auto(400_000, 3)).unwrap();
        assert!(e.agrees_with(PI - 1.5 * 3f64.sqrt(), 3.0), "{e:?}");
        let big = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        let exact = symmetric_difference(&big, &sq, Estimator::default()).unwrap();
        assert_eq!(exact.method, Method::Exact);
        assert_relative_eq!(exact.value, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn csv_columns() {
        let mut buf = Vec::new();
        write_estimates_csv(&mut buf, &[VolumeEstimate::exact(1.5), VolumeEstimate::from_hits(5, 10, 2.0, 9)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "value,std_error,samples,method,seed");
        assert_eq!(lines.next().unwrap(), "1.5,0.0,0,exact,");
        assert!(lines.next().unwrap().ends_with(",10,montecarlo,9"));
    }
}
