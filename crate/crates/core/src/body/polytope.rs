//! Polytopes in dimensions 2 to 4: halfspace and vertex representations and
//! the combined [`Polytope`] that carries both plus a boundary triangulation.

use super::hull::incremental_hull;
use super::ConvexBody;
use crate::error::{Error, Result};
use crate::linalg::{complement_basis, hyperplane_normal, rank, simplex_measure, simplex_volume, Point};
use crate::measure::InertiaData;
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use std::sync::OnceLock;

/// Relative tolerance for merging coplanar simplicial facets and for facet incidence.
const COPLANAR: f64 = 1e-9;
/// Relative slack in polytope membership tests.
const MEMBERSHIP: f64 = 1e-12;

/// Closed halfspace `⟨normal, x⟩ ≤ offset` with unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    /// Normalizes `(a, b)` to unit-normal form.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !offset.is_finite() {
            return Err(Error::Invalid("halfspace normal must be nonzero and finite".into()));
        }
        Ok(Self {
            normal: normal / n,
            offset: offset / n,
        })
    }

    pub fn contains(&self, x: &Point, slack: f64) -> bool {
        self.normal.dot(x) <= self.offset + slack
    }
}

/// Polytope given as an intersection of halfspaces.
#[derive(Debug, Clone)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl HPolytope {
    pub fn new(halfspaces: Vec<Halfspace>) -> Result<Self> {
        let dim = halfspaces
            .first()
            .map(|h| h.normal.len())
            .ok_or_else(|| Error::Invalid("no halfspaces".into()))?;
        if let Some(h) = halfspaces.iter().find(|h| h.normal.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: h.normal.len(),
            });
        }
        Ok(Self { dim, halfspaces })
    }

    /// The box `[lo, hi]^d`.
    pub fn cube(d: usize, lo: f64, hi: f64) -> Self {
        let mut hs = Vec::with_capacity(2 * d);
        for k in 0..d {
            let e = crate::linalg::basis(d, k);
            hs.push(Halfspace {
                normal: e.clone(),
                offset: hi,
            });
            hs.push(Halfspace { normal: -e, offset: -lo });
        }
        Self { dim: d, halfspaces: hs }
    }

    /// The standard simplex `x_i ≥ 0, Σ x_i ≤ 1`.
    pub fn standard_simplex(d: usize) -> Self {
        let mut hs: Vec<Halfspace> = (0..d)
            .map(|k| Halfspace {
                normal: -crate::linalg::basis(d, k),
                offset: 0.0,
            })
            .collect();
        hs.push(Halfspace::new(DVector::from_element(d, 1.0), 1.0).unwrap());
        Self { dim: d, halfspaces: hs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, x: &Point, slack: f64) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x, slack))
    }

    fn scale(&self) -> f64 {
        self.halfspaces.iter().map(|h| h.offset.abs()).fold(1e-300, f64::max)
    }

    /// True when the normals positively span `R^d`, i.e. no recession direction exists.
    pub fn is_bounded(&self) -> bool {
        let normals: Vec<Point> = self.halfspaces.iter().map(|h| h.normal.clone()).collect();
        match incremental_hull(&normals) {
            Err(_) => false,
            Ok(_) => match Polytope::from_points(&normals) {
                Ok(p) => p.facets.iter().all(|f| f.offset > 1e-9),
                Err(_) => false,
            },
        }
    }
}

/// Polytope given as the convex hull of a vertex list.
#[derive(Debug, Clone)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Point>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let dim = vertices
            .first()
            .map(|v| v.len())
            .ok_or_else(|| Error::Invalid("no vertices".into()))?;
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
}

/// Convex hull of a point set: the irredundant vertices and the facet halfspaces.
pub fn convex_hull(points: &[Point]) -> Result<(VPolytope, HPolytope)> {
    let p = Polytope::from_points(points)?;
    Ok((p.to_vpolytope(), p.to_hpolytope()))
}

/// Vertex enumeration by intersecting every `d`-subset of facet hyperplanes
/// and keeping the feasible, deduplicated solutions.
pub fn hpoly_vertices(h: &HPolytope) -> Result<VPolytope> {
    let d = h.dim;
    if !(2..=4).contains(&d) {
        return Err(Error::DimensionUnsupported(d));
    }
    if !h.is_bounded() {
        return Err(Error::Unbounded);
    }
    let scale = h.scale();
    let tol = 1e-9 * scale.max(1.0);
    let mut verts: Vec<Point> = Vec::new();
    for combo in (0..h.halfspaces.len()).combinations(d) {
        let a = DMatrix::from_fn(d, d, |r, c| h.halfspaces[combo[r]].normal[c]);
        let b = DVector::from_fn(d, |r, _| h.halfspaces[combo[r]].offset);
        let lu = a.lu();
        if lu.determinant().abs() < 1e-12 {
            continue;
        }
        let Some(x) = lu.solve(&b) else { continue };
        if !h.contains(&x, tol) {
            continue;
        }
        if verts.iter().all(|v| (v - &x).amax() > tol) {
            verts.push(x);
        }
    }
    if verts.len() < d + 1 {
        return Err(Error::Degenerate("halfspace intersection has empty interior".into()));
    }
    VPolytope::new(verts)
}

/// Facet of a [`Polytope`]: unit outer normal, offset, incident vertices and `(d-1)`-volume.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
    pub vertices: Vec<usize>,
    pub area: f64,
}

/// Full-dimensional polytope with both representations and a boundary triangulation.
///
/// The boundary is split into `(d-1)`-simplices grouped by facet; coning them
/// from [`Polytope::center`] triangulates the interior.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    center: Point,
    boundary: Vec<(usize, Vec<Point>)>,
    volume: f64,
    scale: f64,
    edges: OnceLock<Vec<(usize, usize)>>,
}

impl Polytope {
    /// Convex hull of `points`.
    pub fn from_points(points: &[Point]) -> Result<Self> {
        let raw = incremental_hull(points)?;
        let d = points[0].len();
        let scale = raw.scale;
        let tol = COPLANAR * scale;

        // outward normals from the unperturbed coordinates
        let planes: Vec<(Point, f64, f64)> = raw
            .facets
            .iter()
            .map(|f| {
                let refs: Vec<&Point> = f.verts.iter().map(|&v| &points[v]).collect();
                let simplex: Vec<Point> = refs.iter().map(|&p| p.clone()).collect();
                let measure = simplex_measure(&simplex);
                let mut n = hyperplane_normal(&refs).unwrap_or_else(|| Point::zeros(d));
                if n.dot(&raw.interior) > n.dot(refs[0]) {
                    n = -n;
                }
                let off = n.dot(refs[0]);
                (n, off, measure)
            })
            .collect();

        // union coplanar neighbours
        let mut parent: Vec<usize> = (0..raw.facets.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut ridge_map: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (fid, f) in raw.facets.iter().enumerate() {
            for skip in 0..f.verts.len() {
                let mut r: Vec<usize> = f.verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                r.sort_unstable();
                ridge_map.entry(r).or_default().push(fid);
            }
        }
        let coplanar = |a: usize, b: usize| {
            let (na, oa, _) = &planes[a];
            let (nb, ob, _) = &planes[b];
            na.dot(nb) > 0.0
                && raw.facets[b].verts.iter().all(|&v| (na.dot(&points[v]) - oa).abs() <= tol)
                && raw.facets[a].verts.iter().all(|&v| (nb.dot(&points[v]) - ob).abs() <= tol)
        };
        let mut ridge_keys: Vec<&Vec<usize>> = ridge_map.keys().collect();
        ridge_keys.sort();
        for key in ridge_keys {
            let fs = &ridge_map[key];
            if fs.len() == 2 && coplanar(fs[0], fs[1]) {
                let (ra, rb) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of: HashMap<usize, usize> = HashMap::new();
        for fid in 0..raw.facets.len() {
            let root = find(&mut parent, fid);
            let g = *group_of.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(fid);
        }

        let mut candidates: Vec<usize> = raw.facets.iter().flat_map(|f| f.verts.iter().cloned()).collect();
        candidates.sort_unstable();
        candidates.dedup();

        let mut halfspaces: Vec<(Point, f64)> = Vec::with_capacity(groups.len());
        for g in &groups {
            let best = *g.iter().max_by(|&&a, &&b| planes[a].2.partial_cmp(&planes[b].2).unwrap()).unwrap();
            let n = planes[best].0.clone();
            if n.norm() == 0.0 {
                return Err(Error::Degenerate("facet normal vanished".into()));
            }
            let offset = points.iter().map(|p| n.dot(p)).fold(f64::NEG_INFINITY, f64::max);
            halfspaces.push((n, offset));
        }

        // keep only candidates that are vertices: incident to facets of full normal rank
        let incident: Vec<Vec<usize>> = candidates
            .iter()
            .map(|&v| {
                (0..halfspaces.len())
                    .filter(|&g| halfspaces[g].1 - halfspaces[g].0.dot(&points[v]) <= tol)
                    .collect()
            })
            .collect();
        let mut vertices = Vec::new();
        let mut vertex_facets: Vec<Vec<usize>> = Vec::new();
        for (ci, &v) in candidates.iter().enumerate() {
            let normals: Vec<&Point> = incident[ci].iter().map(|&g| &halfspaces[g].0).collect();
            if rank(&normals, 1e-9) == d {
                vertices.push(points[v].clone());
                vertex_facets.push(incident[ci].clone());
            }
        }
        if vertices.len() < d + 1 {
            return Err(Error::Degenerate("fewer than d+1 vertices".into()));
        }

        let center = vertices.iter().fold(Point::zeros(d), |acc, v| acc + v) / vertices.len() as f64;
        let mut facets: Vec<Facet> = halfspaces
            .into_iter()
            .map(|(normal, offset)| Facet {
                normal,
                offset,
                vertices: Vec::new(),
                area: 0.0,
            })
            .collect();
        for (vi, fs) in vertex_facets.iter().enumerate() {
            for &g in fs {
                facets[g].vertices.push(vi);
            }
        }
        facets.retain(|f| f.vertices.len() >= d);

        let mut boundary = Vec::new();
        for (fi, f) in facets.iter_mut().enumerate() {
            let pts: Vec<Point> = f.vertices.iter().map(|&v| vertices[v].clone()).collect();
            let (simplices, area) = triangulate_facet(&f.normal, &pts)?;
            f.area = area;
            boundary.extend(simplices.into_iter().map(|s| (fi, s)));
        }
        let volume: f64 = boundary
            .iter()
            .map(|(_, s)| {
                let mut pts = Vec::with_capacity(d + 1);
                pts.push(center.clone());
                pts.extend(s.iter().cloned());
                simplex_volume(&pts)
            })
            .sum();
        let scale = vertices.iter().map(|v| (v - &center).norm()).fold(0.0, f64::max);
        Ok(Self {
            dim: d,
            vertices,
            facets,
            center,
            boundary,
            volume,
            scale,
            edges: OnceLock::new(),
        })
    }

    /// Polytope from halfspaces via [`hpoly_vertices`].
    pub fn from_hpolytope(h: &HPolytope) -> Result<Self> {
        let v = hpoly_vertices(h)?;
        Self::from_points(&v.vertices)
    }

    /// Polytope from halfspaces given a strictly interior point, via the polar hull.
    ///
    /// Each constraint maps to the dual point `a_i / (b_i - ⟨a_i, c⟩)`; the facets
    /// of the dual hull are the vertices of the primal.
    pub fn from_halfspaces_with_interior(h: &HPolytope, interior: &Point) -> Result<Self> {
        let d = h.dim;
        let mut dual = Vec::with_capacity(h.halfspaces.len());
        for hs in &h.halfspaces {
            let slack = hs.offset - hs.normal.dot(interior);
            if !(slack > 0.0) {
                return Err(Error::Invalid("point is not strictly interior".into()));
            }
            dual.push(&hs.normal / slack);
        }
        let polar = Polytope::from_points(&dual).map_err(|e| match e {
            Error::Degenerate(_) => Error::Unbounded,
            e => e,
        })?;
        let dual_scale = polar.scale.max(polar.center.norm());
        if polar.facets.iter().any(|f| f.offset <= 1e-12 * dual_scale) {
            return Err(Error::Unbounded);
        }
        let verts: Vec<Point> = polar.facets.iter().map(|f| interior + &f.normal / f.offset).collect();
        if verts.len() < d + 1 {
            return Err(Error::Degenerate("too few vertices".into()));
        }
        Self::from_points(&verts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex centroid; a strictly interior point.
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Radius of the smallest ball about [`Polytope::center`] containing the vertices.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `(d-1)`-simplices triangulating the boundary, tagged with their facet index.
    pub fn boundary_simplices(&self) -> &[(usize, Vec<Point>)] {
        &self.boundary
    }

    pub fn to_vpolytope(&self) -> VPolytope {
        VPolytope {
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }

    pub fn to_hpolytope(&self) -> HPolytope {
        HPolytope {
            dim: self.dim,
            halfspaces: self
                .facets
                .iter()
                .map(|f| Halfspace {
                    normal: f.normal.clone(),
                    offset: f.offset,
                })
                .collect(),
        }
    }

    /// Image under `x ↦ T x + v`.
    pub fn affine_image(&self, linear: &DMatrix<f64>, translation: &Point) -> Result<Self> {
        let pts: Vec<Point> = self.vertices.iter().map(|v| linear * v + translation).collect();
        Self::from_points(&pts)
    }

    /// Vertex pairs spanning an edge (common facets of normal rank `d - 1`).
    pub fn edges(&self) -> &[(usize, usize)] {
        self.edges.get_or_init(|| {
            let d = self.dim;
            let mut vf: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
            for (fi, f) in self.facets.iter().enumerate() {
                for &v in &f.vertices {
                    vf[v].push(fi);
                }
            }
            let mut out = Vec::new();
            for i in 0..self.vertices.len() {
                for j in (i + 1)..self.vertices.len() {
                    let common: Vec<usize> = vf[i].iter().filter(|f| vf[j].contains(f)).cloned().collect();
                    if common.len() + 1 < d {
                        continue;
                    }
                    let normals: Vec<&Point> = common.iter().map(|&f| &self.facets[f].normal).collect();
                    if rank(&normals, 1e-9) == d - 1 {
                        out.push((i, j));
                    }
                }
            }
            out
        })
    }

    /// Points where the hyperplane `⟨n, y⟩ = c` meets the edge skeleton, plus the vertices on each side.
    fn split(&self, normal: &Point, c: f64) -> (Vec<Point>, Vec<Point>, Vec<Point>) {
        let tol = COPLANAR * self.scale;
        let vals: Vec<f64> = self.vertices.iter().map(|v| normal.dot(v) - c).collect();
        let mut above = Vec::new();
        let mut on = Vec::new();
        let mut below = Vec::new();
        for (v, &f) in self.vertices.iter().zip(&vals) {
            if f.abs() <= tol {
                on.push(v.clone());
            } else if f > 0.0 {
                above.push(v.clone());
            } else {
                below.push(v.clone());
            }
        }
        for &(i, j) in self.edges() {
            let (fi, fj) = (vals[i], vals[j]);
            if (fi > tol && fj < -tol) || (fi < -tol && fj > tol) {
                let s = fi / (fi - fj);
                on.push(&self.vertices[i] + (&self.vertices[j] - &self.vertices[i]) * s);
            }
        }
        (above, on, below)
    }

    /// Exact volume of `{y ∈ P : ⟨n, y⟩ ≥ c}`.
    pub fn halfspace_volume(&self, normal: &Point, c: f64) -> f64 {
        let (above, on, below) = self.split(normal, c);
        if above.is_empty() {
            return 0.0;
        }
        if below.is_empty() {
            return self.volume;
        }
        let mut pts = above;
        pts.extend(on);
        Polytope::from_points(&pts).map(|p| p.volume).unwrap_or(0.0)
    }

    /// Exact `(d-1)`-volume of the section by `⟨n, y⟩ = c`.
    pub fn section_volume(&self, normal: &Point, c: f64) -> f64 {
        let (_, on, _) = self.split(normal, c);
        let d = self.dim;
        if on.len() < d {
            return 0.0;
        }
        let basis = complement_basis(normal);
        let coords: Vec<Point> = on.iter().map(|p| basis.transpose() * p).collect();
        if d == 2 {
            let (lo, hi) = coords
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
            return hi - lo;
        }
        Polytope::from_points(&coords).map(|p| p.volume).unwrap_or(0.0)
    }

    /// Exact centroid and second moments about `origin`, from the cone triangulation.
    pub fn inertia(&self, origin: &Point) -> InertiaData {
        let d = self.dim;
        let mut volume = 0.0;
        let mut first = Point::zeros(d);
        let mut second = DMatrix::zeros(d, d);
        let apex = &self.center - origin;
        for (_, s) in &self.boundary {
            let mut pts = Vec::with_capacity(d + 1);
            pts.push(apex.clone());
            pts.extend(s.iter().map(|p| p - origin));
            let vol = simplex_volume(&pts);
            let sum = pts.iter().fold(Point::zeros(d), |acc, p| acc + p);
            let mut outer = &sum * sum.transpose();
            for p in &pts {
                outer += p * p.transpose();
            }
            second += outer * (vol / ((d + 1) * (d + 2)) as f64);
            first += sum * (vol / (d + 1) as f64);
            volume += vol;
        }
        InertiaData {
            centroid: first / volume + origin,
            second_moment: second,
            volume,
        }
    }

    /// Membership with a tolerance of `MEMBERSHIP · scale`.
    pub fn contains_point(&self, x: &Point) -> bool {
        let slack = MEMBERSHIP * self.scale;
        self.facets.iter().all(|f| f.normal.dot(x) <= f.offset + slack)
    }
}

/// Triangulates a facet given its unit normal and incident vertices.
fn triangulate_facet(normal: &Point, pts: &[Point]) -> Result<(Vec<Vec<Point>>, f64)> {
    let d = normal.len();
    let basis = complement_basis(normal);
    let origin = &pts[0];
    let coords: Vec<Point> = pts.iter().map(|p| basis.transpose() * (p - origin)).collect();
    let lift = |y: &Point| origin + &basis * y;
    if d == 2 {
        let lo = (0..pts.len())
            .min_by(|&a, &b| coords[a][0].partial_cmp(&coords[b][0]).unwrap())
            .unwrap();
        let hi = (0..pts.len())
            .max_by(|&a, &b| coords[a][0].partial_cmp(&coords[b][0]).unwrap())
            .unwrap();
        let len = coords[hi][0] - coords[lo][0];
        return Ok((vec![vec![pts[lo].clone(), pts[hi].clone()]], len));
    }
    let sub = Polytope::from_points(&coords)?;
    let mut out = Vec::with_capacity(sub.boundary.len());
    for (_, s) in &sub.boundary {
        let mut simplex = Vec::with_capacity(d);
        simplex.push(lift(&sub.center));
        simplex.extend(s.iter().map(&lift));
        out.push(simplex);
    }
    Ok((out, sub.volume))
}

impl ConvexBody for Polytope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &Point) -> bool {
        self.contains_point(x)
    }

    fn support(&self, u: &Point) -> f64 {
        self.vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }

    fn support_point(&self, u: &Point) -> Point {
        self.vertices
            .iter()
            .max_by(|a, b| a.dot(u).partial_cmp(&b.dot(u)).unwrap())
            .unwrap()
            .clone()
    }

    fn interior_point(&self) -> Point {
        self.center.clone()
    }

    fn interior_margin(&self) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset - f.normal.dot(&self.center))
            .fold(f64::INFINITY, f64::min)
    }

    fn bounding_ball(&self) -> (Point, f64) {
        (self.center.clone(), self.scale * (1.0 + 1e-12))
    }

    fn exact_volume(&self) -> Option<f64> {
        Some(self.volume)
    }

    fn exact_halfspace_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        Some(self.halfspace_volume(normal, offset))
    }

    fn exact_section_volume(&self, normal: &Point, offset: f64) -> Option<f64> {
        Some(self.section_volume(normal, offset))
    }

    fn exact_inertia(&self, origin: &Point) -> Option<InertiaData> {
        Some(self.inertia(origin))
    }

    fn exact_overshoot(&self, x: &Point) -> Option<f64> {
        let d = self.dim as f64;
        Some(
            self.facets
                .iter()
                .map(|f| (f.normal.dot(x) - f.offset).max(0.0) * f.area)
                .sum::<f64>()
                / d,
        )
    }

    fn line_interval(&self, origin: &Point, dir: &Point) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for f in &self.facets {
            let a = f.normal.dot(dir);
            let b = f.offset - f.normal.dot(origin);
            if a.abs() < 1e-300 {
                if b < 0.0 {
                    return None;
                }
            } else if a > 0.0 {
                hi = hi.min(b / a);
            } else {
                lo = lo.max(b / a);
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn as_polytope(&self) -> Option<&Polytope> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::point;
    use approx::assert_relative_eq;

    fn cube3() -> Polytope {
        Polytope::from_hpolytope(&HPolytope::cube(3, -1.0, 1.0)).unwrap()
    }

    #[test]
    fn square_hull_drops_interior_point() {
        let pts = vec![
            point(&[0.0, 0.0]),
            point(&[1.0, 0.0]),
            point(&[1.0, 1.0]),
            point(&[0.0, 1.0]),
            point(&[0.5, 0.5]),
        ];
        let (v, h) = convex_hull(&pts).unwrap();
        assert_eq!(v.vertices().len(), 4);
        assert_eq!(h.halfspaces().len(), 4);
        for p in &pts {
            assert!(h.contains(p, 1e-9));
        }
    }

    #[test]
    fn octahedron_has_eight_facets() {
        let mut pts = Vec::new();
        for k in 0..3 {
            pts.push(crate::linalg::basis(3, k));
            pts.push(-crate::linalg::basis(3, k));
        }
        let p = Polytope::from_points(&pts).unwrap();
        assert_eq!(p.facets().len(), 8);
        assert_relative_eq!(p.volume(), 4.0 / 3.0, max_relative = 1e-12);
        for f in p.facets() {
            assert_relative_eq!(f.area, 3f64.sqrt() / 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn cube_vertices_and_areas() {
        let c = cube3();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert_eq!(c.edges().len(), 12);
        assert_relative_eq!(c.volume(), 8.0, max_relative = 1e-12);
        for f in c.facets() {
            assert_relative_eq!(f.area, 4.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn points_on_face_are_not_vertices() {
        let mut pts: Vec<Point> = (0..8)
            .map(|i| point(&[(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]))
            .collect();
        pts.push(point(&[0.5, 0.5, 1.0]));
        pts.push(point(&[1.0, 0.5, 0.0]));
        let p = Polytope::from_points(&pts).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.facets().len(), 6);
    }

    #[test]
    fn simplex_vertex_enumeration() {
        let v = hpoly_vertices(&HPolytope::standard_simplex(3)).unwrap();
        assert_eq!(v.vertices().len(), 4);
        let p = Polytope::from_hpolytope(&HPolytope::standard_simplex(3)).unwrap();
        let mut areas: Vec<f64> = p.facets().iter().map(|f| f.area).collect();
        areas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(areas[0], 0.5, max_relative = 1e-12);
        assert_relative_eq!(areas[2], 0.5, max_relative = 1e-12);
        assert_relative_eq!(areas[3], 3f64.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn unbounded_is_rejected() {
        let h = HPolytope::new(vec![
            Halfspace::new(point(&[1.0, 0.0]), 1.0).unwrap(),
            Halfspace::new(point(&[0.0, 1.0]), 1.0).unwrap(),
            Halfspace::new(point(&[-1.0, 0.0]), 1.0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(hpoly_vertices(&h), Err(Error::Unbounded)));
    }

    #[test]
    fn polar_route_matches_subset_route() {
        let dirs = crate::sampling::sphere_directions(3, 20);
        let hs = dirs
            .iter()
            .enumerate()
            .map(|(i, u)| Halfspace::new(u.clone(), 1.0 + 0.01 * i as f64).unwrap())
            .collect();
        let h = HPolytope::new(hs).unwrap();
        let a = Polytope::from_hpolytope(&h).unwrap();
        let b = Polytope::from_halfspaces_with_interior(&h, &Point::zeros(3)).unwrap();
        assert_eq!(a.vertices().len(), b.vertices().len());
        assert_relative_eq!(a.volume(), b.volume(), max_relative = 1e-10);
    }

    #[test]
    fn cuts_and_sections_of_cube() {
        let c = cube3();
        let e1 = crate::linalg::basis(3, 0);
        assert_relative_eq!(c.halfspace_volume(&e1, 0.5), 2.0, max_relative = 1e-12);
        assert_relative_eq!(c.halfspace_volume(&e1, -2.0), 8.0, max_relative = 1e-12);
        assert_eq!(c.halfspace_volume(&e1, 1.5), 0.0);
        assert_relative_eq!(c.section_volume(&e1, 0.0), 4.0, max_relative = 1e-12);
        assert_relative_eq!(c.section_volume(&e1, 1.0), 4.0, max_relative = 1e-12);
        let diag = point(&[1.0, 1.0, 1.0]) / 3f64.sqrt();
        // corner tetrahedron x+y+z >= 2 has legs of length 1
        assert_relative_eq!(c.halfspace_volume(&diag, 2.0 / 3f64.sqrt()), 1.0 / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn triangle_inertia() {
        let t = Polytope::from_points(&[point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.0, 1.0])]).unwrap();
        let inertia = t.inertia(&Point::zeros(2));
        assert_relative_eq!(inertia.volume, 0.5, max_relative = 1e-14);
        assert_relative_eq!(inertia.centroid[0], 1.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(inertia.centroid[1], 1.0 / 3.0, max_relative = 1e-13);
        // ∫x² over the unit right triangle = 1/12, ∫xy = 1/24
        assert_relative_eq!(inertia.second_moment[(0, 0)], 1.0 / 12.0, max_relative = 1e-13);
        assert_relative_eq!(inertia.second_moment[(0, 1)], 1.0 / 24.0, max_relative = 1e-13);
    }

    #[test]
    fn line_through_square() {
        let sq = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        let (lo, hi) = sq.line_interval(&point(&[0.0, 0.0]), &point(&[1.0, 0.0])).unwrap();
        assert_relative_eq!(lo, -1.0, epsilon = 1e-14);
        assert_relative_eq!(hi, 1.0, epsilon = 1e-14);
        assert!(sq.line_interval(&point(&[0.0, 2.0]), &point(&[1.0, 0.0])).is_none());
    }
}
