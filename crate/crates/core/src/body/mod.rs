//! Convex bodies behind a common oracle interface.

mod hull;
mod polytope;
mod spec;

pub use polytope::{convex_hull, hpoly_vertices, Facet, HPolytope, Halfspace, Polytope, VPolytope};
pub use spec::BodySpec;

use crate::error::{Error, Result};
use crate::linalg::{unit_ball_volume, Point};
use crate::measure::InertiaData;
use nalgebra::DMatrix;
use statrs::function::beta::beta_reg;
use std::fmt::Debug;
use std::sync::Arc;

/// Membership and support oracles for a convex body in `R^d`.
///
/// `support` is positively homogeneous; callers normally pass unit vectors.
/// The `exact_*` hooks return `None` when the body has no closed form, in
/// which case estimators fall back to Monte Carlo.
pub trait ConvexBody: Send + Sync + Debug {
    fn dim(&self) -> usize;
    fn contains(&self, x: &Point) -> bool;
    fn support(&self, u: &Point) -> f64;
    /// A maximizer of `⟨·, u⟩` over the body.
    fn support_point(&self, u: &Point) -> Point;
    fn interior_point(&self) -> Point;
    /// Radius of a ball about [`ConvexBody::interior_point`] contained in the body.
    fn interior_margin(&self) -> f64;
    fn bounding_ball(&self) -> (Point, f64);

    fn exact_volume(&self) -> Option<f64> {
        None
    }
    /// Volume of `{y ∈ K : ⟨y, normal⟩ ≥ offset}` for unit `normal`.
    fn exact_halfspace_volume(&self, _normal: &Point, _offset: f64) -> Option<f64> {
        None
    }
    /// `(d-1)`-volume of `K ∩ {⟨y, normal⟩ = offset}` for unit `normal`.
    fn exact_section_volume(&self, _normal: &Point, _offset: f64) -> Option<f64> {
        None
    }
    fn exact_inertia(&self, _origin: &Point) -> Option<InertiaData> {
        None
    }
    /// `vol([x, K] \ K)`.
    fn exact_overshoot(&self, _x: &Point) -> Option<f64> {
        None
    }
    fn as_polytope(&self) -> Option<&Polytope> {
        None
    }

    /// Parameter interval `{s : origin + s·dir ∈ K}`, or `None` if the line misses.
    ///
    /// The default scans the bounding-ball chord on a grid and refines both
    /// ends by bisection, so intersections thinner than the grid step can be missed.
    fn line_interval(&self, origin: &Point, dir: &Point) -> Option<(f64, f64)> {
        let (c, r) = self.bounding_ball();
        let dd = dir.dot(dir);
        if dd == 0.0 {
            return self.contains(origin).then_some((f64::NEG_INFINITY, f64::INFINITY));
        }
        let w = origin - &c;
        let b = w.dot(dir) / dd;
        let disc = b * b - (w.dot(&w) - r * r) / dd;
        if disc < 0.0 {
            return None;
        }
        let (s0, s1) = (-b - disc.sqrt(), -b + disc.sqrt());
        const GRID: usize = 1024;
        let at = |s: f64| origin + dir * s;
        let hit = (0..=GRID)
            .map(|k| s0 + (s1 - s0) * k as f64 / GRID as f64)
            .find(|&s| self.contains(&at(s)))?;
        let refine = |mut inside: f64, mut outside: f64| {
            for _ in 0..80 {
                let mid = 0.5 * (inside + outside);
                if self.contains(&at(mid)) {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            inside
        };
        Some((refine(hit, s0), refine(hit, s1)))
    }
}

/// Shared, thread-safe handle to a body.
pub type BodyRef = Arc<dyn ConvexBody>;

/// Boundary point on the ray `o + r·u`, located to within `tol` in `r`.
///
/// Brackets by doubling from the interior margin, then bisects. Fails with
/// [`Error::NoBracket`] if the ray leaves the bounding ball while still inside.
pub fn radial_boundary(k: &dyn ConvexBody, o: &Point, u: &Point, tol: f64) -> Result<Point> {
    if !k.contains(o) {
        return Err(Error::Invalid("ray origin is not inside the body".into()));
    }
    let (c, radius) = k.bounding_ball();
    let limit = 2.0 * ((o - &c).norm() + radius);
    let mut lo = 0.0;
    let mut hi = k.interior_margin().max(tol).max(1e-12 * radius);
    while k.contains(&(o + u * hi)) {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Err(Error::NoBracket);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if k.contains(&(o + u * mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(o + u * (0.5 * (lo + hi)))
}

/// Volume of the cap of height `h ∈ [0, 2]` of the unit ball in `R^d`.
pub fn unit_ball_cap(d: usize, h: f64) -> f64 {
    let h = h.clamp(0.0, 2.0);
    let v = unit_ball_volume(d);
    if h <= 1.0 {
        0.5 * v * beta_reg((d as f64 + 1.0) / 2.0, 0.5, h * (2.0 - h))
    } else {
        v - unit_ball_cap(d, 2.0 - h)
    }
}

/// Euclidean ball.
#[derive(Debug, Clone)]
pub struct Ball {
    center: Point,
    radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Invalid("ball radius must be positive".into()));
        }
        if center.len() < 2 {
            return Err(Error::DimensionUnsupported(center.len()));
        }
        Ok(Self { center, radius })
    }

    pub fn unit(d: usize) -> Self {
        Self::new(Point::zeros(d), 1.0).expect("unit ball")
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl ConvexBody for Ball {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn contains(&self, x: &Point) -> bool {
        (x - &self.center).norm_squared() <= self.radius * self.radius * (1.0 + 1e-12)
    }

    fn support(&self, u: &Point) -> f64 {
        self.center.dot(u) + self.radius * u.norm()
    }

    fn support_point(&self, u: &Point) -> Point {
        &self.center + u * (self.radius / u.norm())
    }

    fn interior_point(&self) -> Point {
        self.center.clone()
    }

    fn interior_margin(&self) -> f64 {
        self.radius
    }

    fn bounding_ball(&self) -> (Point, f64) {
        (self.center.clone(), self.radius)
    }

    fn exact_volume(&self) -> Option<f64> {
        Some(unit_ball_volume(self.dim()) * self.radius.powi(self.dim() as i32))
    }

    fn exact_halfspace_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        let d = self.dim();
        let h = (self.radius - (offset - self.center.dot(normal))) / self.radius;
        Some(unit_ball_cap(d, h) * self.radius.powi(d as i32))
    }

    fn exact_section_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        let d = self.dim();
        let s = offset - self.center.dot(normal);
        let r2 = self.radius * self.radius - s * s;
        if r2 <= 0.0 {
            return Some(0.0);
        }
        Some(unit_ball_volume(d - 1) * r2.powf((d as f64 - 1.0) / 2.0))
    }

    fn exact_inertia(&self, origin: &Point) -> Option<InertiaData> {
        let d = self.dim();
        let volume = self.exact_volume()?;
        let w = &self.center - origin;
        let second = (DMatrix::identity(d, d) * (self.radius * self.radius / (d as f64 + 2.0)) + &w * w.transpose()) * volume;
        Some(InertiaData {
            centroid: self.center.clone(),
            second_moment: second,
            volume,
        })
    }

    fn exact_overshoot(&self, x: &Point) -> Option<f64> {
        let d = self.dim();
        let rho = (x - &self.center).norm() / self.radius;
        if rho <= 1.0 {
            return Some(0.0);
        }
        // cone from x over the tangency sphere, minus the ball cap inside that cone
        let base = (1.0 - 1.0 / (rho * rho)).max(0.0).sqrt();
        let cone = (rho - 1.0 / rho) * unit_ball_volume(d - 1) * base.powi(d as i32 - 1) / d as f64;
        let cap = unit_ball_cap(d, 1.0 - 1.0 / rho);
        Some((cone - cap).max(0.0) * self.radius.powi(d as i32))
    }

    fn line_interval(&self, origin: &Point, dir: &Point) -> Option<(f64, f64)> {
        let dd = dir.dot(dir);
        let w = origin - &self.center;
        let b = w.dot(dir) / dd;
        let disc = b * b - (w.dot(&w) - self.radius * self.radius) / dd;
        (disc >= 0.0).then(|| (-b - disc.sqrt(), -b + disc.sqrt()))
    }
}

/// Image `x ↦ T x + v` of a base body under an invertible affine map.
#[derive(Debug, Clone)]
pub struct AffineImage {
    base: BodyRef,
    linear: DMatrix<f64>,
    inverse: DMatrix<f64>,
    translation: Point,
    det: f64,
    min_singular: f64,
    max_singular: f64,
}

impl AffineImage {
    pub fn new(base: BodyRef, linear: DMatrix<f64>, translation: Point) -> Result<Self> {
        let d = base.dim();
        if linear.nrows() != d || linear.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: linear.nrows(),
            });
        }
        if translation.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: translation.len(),
            });
        }
        let sv = linear.singular_values();
        let max_singular = sv.max();
        let min_singular = sv.min();
        if !(min_singular > 1e-12 * max_singular) {
            return Err(Error::Degenerate("affine map is singular".into()));
        }
        let inverse = linear
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("affine map is singular".into()))?;
        let det = linear.determinant();
        Ok(Self {
            base,
            linear,
            inverse,
            translation,
            det,
            min_singular,
            max_singular,
        })
    }

    pub fn translate(base: BodyRef, v: Point) -> Result<Self> {
        let d = base.dim();
        Self::new(base, DMatrix::identity(d, d), v)
    }

    pub fn base(&self) -> &BodyRef {
        &self.base
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &Point {
        &self.translation
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    fn pull(&self, x: &Point) -> Point {
        &self.inverse * (x - &self.translation)
    }

    fn push(&self, y: &Point) -> Point {
        &self.linear * y + &self.translation
    }
}

impl ConvexBody for AffineImage {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn contains(&self, x: &Point) -> bool {
        self.base.contains(&self.pull(x))
    }

    fn support(&self, u: &Point) -> f64 {
        self.base.support(&(self.linear.transpose() * u)) + self.translation.dot(u)
    }

    fn support_point(&self, u: &Point) -> Point {
        self.push(&self.base.support_point(&(self.linear.transpose() * u)))
    }

    fn interior_point(&self) -> Point {
        self.push(&self.base.interior_point())
    }

    fn interior_margin(&self) -> f64 {
        self.base.interior_margin() * self.min_singular
    }

    fn bounding_ball(&self) -> (Point, f64) {
        let (c, r) = self.base.bounding_ball();
        (self.push(&c), r * self.max_singular)
    }

    fn exact_volume(&self) -> Option<f64> {
        self.base.exact_volume().map(|v| v * self.det.abs())
    }

    fn exact_halfspace_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        let m = self.linear.transpose() * normal;
        let len = m.norm();
        let c = (offset - self.translation.dot(normal)) / len;
        self.base.exact_halfspace_volume(&(m / len), c).map(|v| v * self.det.abs())
    }

    fn exact_section_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        let m = self.linear.transpose() * normal;
        let len = m.norm();
        let c = (offset - self.translation.dot(normal)) / len;
        self.base.exact_section_volume(&(m / len), c).map(|v| v * self.det.abs() / len)
    }

    fn exact_inertia(&self, origin: &Point) -> Option<InertiaData> {
        let base = self.base.exact_inertia(&self.pull(origin))?;
        let j = self.det.abs();
        Some(InertiaData {
            centroid: self.push(&base.centroid),
            second_moment: &self.linear * base.second_moment * self.linear.transpose() * j,
            volume: base.volume * j,
        })
    }

    fn exact_overshoot(&self, x: &Point) -> Option<f64> {
        self.base.exact_overshoot(&self.pull(x)).map(|v| v * self.det.abs())
    }

    fn line_interval(&self, origin: &Point, dir: &Point) -> Option<(f64, f64)> {
        self.base.line_interval(&self.pull(origin), &(&self.inverse * dir))
    }
}

/// Ellipsoid `{x : (x - c)ᵀ Q⁻¹ (x - c) ≤ r²}` with positive-definite shape `Q`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    center: Point,
    shape: DMatrix<f64>,
    radius: f64,
    image: AffineImage,
}

impl Ellipsoid {
    pub fn new(center: Point, shape: DMatrix<f64>, radius: f64) -> Result<Self> {
        let d = center.len();
        if shape.nrows() != d || shape.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: shape.nrows(),
            });
        }
        if (&shape - shape.transpose()).amax() > 1e-12 * shape.amax() {
            return Err(Error::Invalid("ellipsoid shape matrix must be symmetric".into()));
        }
        let chol = shape
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Invalid("ellipsoid shape matrix must be positive definite".into()))?;
        let image = AffineImage::new(Arc::new(Ball::new(Point::zeros(d), radius)?), chol.l(), center.clone())?;
        Ok(Self {
            center,
            shape,
            radius,
            image,
        })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl ConvexBody for Ellipsoid {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn contains(&self, x: &Point) -> bool {
        self.image.contains(x)
    }

    fn support(&self, u: &Point) -> f64 {
        self.center.dot(u) + self.radius * (u.transpose() * &self.shape * u)[(0, 0)].max(0.0).sqrt()
    }

    fn support_point(&self, u: &Point) -> Point {
        self.image.support_point(u)
    }

    fn interior_point(&self) -> Point {
        self.center.clone()
    }

    fn interior_margin(&self) -> f64 {
        self.image.interior_margin()
    }

    fn bounding_ball(&self) -> (Point, f64) {
        self.image.bounding_ball()
    }

    fn exact_volume(&self) -> Option<f64> {
        self.image.exact_volume()
    }

    fn exact_halfspace_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        self.image.exact_halfspace_volume(normal, offset)
    }

    fn exact_section_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        self.image.exact_section_volume(normal, offset)
    }

    fn exact_inertia(&self, origin: &Point) -> Option<InertiaData> {
        self.image.exact_inertia(origin)
    }

    fn exact_overshoot(&self, x: &Point) -> Option<f64> {
        self.image.exact_overshoot(x)
    }

    fn line_interval(&self, origin: &Point, dir: &Point) -> Option<(f64, f64)> {
        self.image.line_interval(origin, dir)
    }
}

/// Largest `c₁` and smallest `c₂` with `c₁⁻¹ B ⊆ K ⊆ c₂ B` about `center`,
/// estimated from support values over `directions`.
///
/// The inradius about `center` is `min_u h_K(u) - ⟨center, u⟩`, so sampling
/// directions overestimates it; callers should pass a dense set.
pub fn sandwich_constants(k: &dyn ConvexBody, center: &Point, directions: &[Point]) -> (f64, f64) {
    let mut inner = f64::INFINITY;
    let mut outer: f64 = 0.0;
    for u in directions {
        let h = k.support(u) - center.dot(u);
        inner = inner.min(h);
        outer = outer.max((k.support_point(u) - center).norm());
    }
    if let Some(p) = k.as_polytope() {
        inner = p
            .facets()
            .iter()
            .map(|f| f.offset - f.normal.dot(center))
            .fold(f64::INFINITY, f64::min);
        outer = p.vertices().iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
    }
    (1.0 / inner, outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::point;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn radial_boundary_examples() {
        let disk = Ball::unit(2);
        let p = radial_boundary(&disk, &point(&[0.0, 0.0]), &point(&[1.0, 0.0]), 1e-10).unwrap();
        assert!((p - point(&[1.0, 0.0])).norm() < 1e-9);
        let p = radial_boundary(&disk, &point(&[0.5, 0.0]), &point(&[1.0, 0.0]), 1e-10).unwrap();
        assert!((p - point(&[1.0, 0.0])).norm() < 1e-9);
        let sq = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        let u = point(&[1.0, 1.0]) / 2f64.sqrt();
        let p = radial_boundary(&sq, &point(&[0.0, 0.0]), &u, 1e-10).unwrap();
        assert!((p - point(&[1.0, 1.0])).norm() < 1e-9);
    }

    #[test]
    fn ball_cap_matches_circular_segment() {
        for h in [0.1f64, 0.3, 0.9, 1.0, 1.4] {
            let segment = (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt();
            assert_relative_eq!(unit_ball_cap(2, h), segment, max_relative = 1e-12);
        }
        // spherical cap π h² (3 - h) / 3
        assert_relative_eq!(unit_ball_cap(3, 0.4), PI * 0.16 * 2.6 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn disk_overshoot_matches_fine_polygon() {
        let x = point(&[1.1, 0.0]);
        let exact = Ball::unit(2).exact_overshoot(&x).unwrap();
        let m = 20000;
        let pts: Vec<Point> = crate::sampling::sphere_directions(2, m)
            .into_iter()
            .map(|u| u / (PI / m as f64).cos())
            .collect();
        let poly = Polytope::from_points(&pts).unwrap();
        let approx_val = poly.exact_overshoot(&x).unwrap();
        assert_relative_eq!(exact, approx_val, max_relative = 1e-3);
    }

    #[test]
    fn ellipsoid_support_agrees_with_image() {
        let q = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 1.0]);
        let e = Ellipsoid::new(point(&[1.0, -1.0]), q, 1.5).unwrap();
        for u in crate::sampling::sphere_directions(2, 17) {
            assert_relative_eq!(e.support(&u), e.image.support(&u), max_relative = 1e-12);
            let p = e.support_point(&u);
            assert_relative_eq!(p.dot(&u), e.support(&u), max_relative = 1e-12);
        }
        assert_relative_eq!(e.exact_volume().unwrap(), PI * 2.25 * 3f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn affine_hooks_match_rebuilt_polytope() {
        let sq = Arc::new(Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap());
        let t = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.0, 1.0]);
        let v = point(&[0.3, -0.2]);
        let img = AffineImage::new(sq.clone(), t.clone(), v.clone()).unwrap();
        let rebuilt = sq.affine_image(&t, &v).unwrap();
        let n = point(&[0.6, 0.8]);
        assert_relative_eq!(img.exact_volume().unwrap(), rebuilt.volume(), max_relative = 1e-12);
        assert_relative_eq!(
            img.exact_halfspace_volume(&n, 0.5).unwrap(),
            rebuilt.halfspace_volume(&n, 0.5),
            max_relative = 1e-10
        );
        assert_relative_eq!(
            img.exact_section_volume(&n, 0.5).unwrap(),
            rebuilt.section_volume(&n, 0.5),
            max_relative = 1e-10
        );
        let o = point(&[0.1, 0.1]);
        let a = img.exact_inertia(&o).unwrap();
        let b = rebuilt.inertia(&o);
        assert!((a.second_moment - b.second_moment).amax() < 1e-10);
        let x = point(&[4.0, 1.0]);
        assert_relative_eq!(
            img.exact_overshoot(&x).unwrap(),
            rebuilt.exact_overshoot(&x).unwrap(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn default_line_interval_matches_exact() {
        #[derive(Debug)]
        struct Opaque(Ball);
        impl ConvexBody for Opaque {
            fn dim(&self) -> usize {
                self.0.dim()
            }
            fn contains(&self, x: &Point) -> bool {
                self.0.contains(x)
            }
            fn support(&self, u: &Point) -> f64 {
                self.0.support(u)
            }
            fn support_point(&self, u: &Point) -> Point {
                self.0.support_point(u)
            }
            fn interior_point(&self) -> Point {
                self.0.interior_point()
            }
            fn interior_margin(&self) -> f64 {
                self.0.interior_margin()
            }
            fn bounding_ball(&self) -> (Point, f64) {
                self.0.bounding_ball()
            }
        }
        let b = Ball::unit(3);
        let o = point(&[2.0, 0.3, 0.0]);
        let dir = point(&[-1.0, 0.0, 0.0]);
        let (lo, hi) = b.line_interval(&o, &dir).unwrap();
        let (lo2, hi2) = Opaque(b).line_interval(&o, &dir).unwrap();
        assert_relative_eq!(lo, lo2, epsilon = 1e-9);
        assert_relative_eq!(hi, hi2, epsilon = 1e-9);
    }
}
