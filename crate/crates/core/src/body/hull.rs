//! Incremental (Quickhull-style) convex hull in dimensions 2 to 4.
//!
//! Produces a simplicial boundary: every facet carries exactly `d` vertex
//! indices. Coplanar simplicial facets are merged later by
//! [`Polytope`](super::Polytope). Inputs are perturbed by a deterministic
//! jitter of relative size [`JITTER`] while the hull is built; reported
//! coordinates are always the caller's originals.

use crate::error::{Error, Result};
use crate::linalg::{hyperplane_normal, Point};
use std::collections::HashMap;

/// Relative magnitude of the construction-time jitter.
pub const JITTER: f64 = 1e-12;
/// Relative distance above which a point counts as outside a facet.
pub const VISIBILITY: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct RawFacet {
    pub verts: Vec<usize>,
}

#[derive(Debug)]
pub(crate) struct RawHull {
    pub facets: Vec<RawFacet>,
    pub interior: Point,
    pub scale: f64,
}

struct Work {
    verts: Vec<usize>,
    normal: Point,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Work {
    fn dist(&self, p: &Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

fn jitter_component(i: usize, k: usize) -> f64 {
    let mut z = (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (k as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

fn ridges(verts: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..verts.len()).map(move |skip| {
        let mut r: Vec<usize> = verts.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        r.sort_unstable();
        r
    })
}

fn make_facet(pts: &[Point], verts: Vec<usize>, interior: &Point) -> Option<Work> {
    let refs: Vec<&Point> = verts.iter().map(|&v| &pts[v]).collect();
    let mut normal = hyperplane_normal(&refs)?;
    let mut offset = normal.dot(refs[0]);
    if normal.dot(interior) > offset {
        normal = -normal;
        offset = -offset;
    }
    Some(Work {
        verts,
        normal,
        offset,
        outside: Vec::new(),
        alive: true,
    })
}

/// Picks `d + 1` affinely independent points, greedily maximizing spread.
fn initial_simplex(pts: &[Point], mean: &Point, scale: f64) -> Result<Vec<usize>> {
    let d = mean.len();
    let first = (0..pts.len())
        .max_by(|&a, &b| (&pts[a] - mean).norm().partial_cmp(&(&pts[b] - mean).norm()).unwrap())
        .unwrap();
    let mut chosen = vec![first];
    let mut basis: Vec<Point> = Vec::new();
    while chosen.len() < d + 1 {
        let mut best = None;
        let mut best_dist = 0.0;
        for (i, p) in pts.iter().enumerate() {
            let mut r = p - &pts[first];
            for b in &basis {
                let c = r.dot(b);
                r -= b * c;
            }
            let dist = r.norm();
            if dist > best_dist {
                best_dist = dist;
                best = Some((i, r));
            }
        }
        match best {
            Some((i, r)) if best_dist > 1e-9 * scale => {
                chosen.push(i);
                basis.push(r / best_dist);
            }
            _ => return Err(Error::Degenerate(format!("points span only {} dimensions", chosen.len() - 1))),
        }
    }
    Ok(chosen)
}

pub(crate) fn incremental_hull(points: &[Point]) -> Result<RawHull> {
    let n = points.len();
    if n == 0 {
        return Err(Error::Degenerate("empty point set".into()));
    }
    let d = points[0].len();
    if !(2..=4).contains(&d) {
        return Err(Error::DimensionUnsupported(d));
    }
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: points.iter().find(|p| p.len() != d).unwrap().len(),
        });
    }
    if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
        return Err(Error::Invalid("non-finite coordinate".into()));
    }
    if n < d + 1 {
        return Err(Error::Degenerate(format!("{n} points cannot span dimension {d}")));
    }
    let mean = points.iter().fold(Point::zeros(d), |acc, p| acc + p) / n as f64;
    let scale = points.iter().map(|p| (p - &mean).norm()).fold(0.0, f64::max);
    if !(scale > 0.0) {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let pts: Vec<Point> = points
        .iter()
        .enumerate()
        .map(|(i, p)| Point::from_fn(d, |k, _| p[k] + JITTER * scale * jitter_component(i, k)))
        .collect();
    let eps = VISIBILITY * scale;

    let simplex = initial_simplex(&pts, &mean, scale)?;
    let interior = simplex.iter().fold(Point::zeros(d), |acc, &i| acc + &pts[i]) / (d + 1) as f64;

    let mut facets: Vec<Work> = Vec::new();
    let mut ridge_map: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for skip in 0..=d {
        let verts: Vec<usize> = simplex.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
        let f = make_facet(&pts, verts, &interior).ok_or_else(|| Error::Degenerate("initial simplex is flat".into()))?;
        let id = facets.len();
        for r in ridges(&f.verts) {
            ridge_map.entry(r).or_default().push(id);
        }
        facets.push(f);
    }

    let in_simplex: Vec<bool> = (0..n).map(|i| simplex.contains(&i)).collect();
    for i in (0..n).filter(|&i| !in_simplex[i]) {
        let best = facets
            .iter()
            .enumerate()
            .map(|(fid, f)| (fid, f.dist(&pts[i])))
            .filter(|&(_, dist)| dist > eps)
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if let Some((fid, _)) = best {
            facets[fid].outside.push(i);
        }
    }

    let mut stamp: Vec<u64> = vec![0; facets.len()];
    let mut round: u64 = 0;
    let mut queue: Vec<usize> = (0..facets.len()).collect();
    while let Some(fid) = queue.pop() {
        if !facets[fid].alive || facets[fid].outside.is_empty() {
            continue;
        }
        round += 1;
        let apex = *facets[fid]
            .outside
            .iter()
            .max_by(|&&a, &&b| facets[fid].dist(&pts[a]).partial_cmp(&facets[fid].dist(&pts[b])).unwrap())
            .unwrap();
        let p = pts[apex].clone();

        // visible region by flood fill across ridges
        let mut visible = vec![fid];
        stamp[fid] = round;
        let mut k = 0;
        while k < visible.len() {
            let cur = visible[k];
            k += 1;
            for r in ridges(&facets[cur].verts) {
                if let Some(nbrs) = ridge_map.get(&r) {
                    for &nb in nbrs {
                        if nb != cur && stamp[nb] != round && facets[nb].alive && facets[nb].dist(&p) > eps {
                            stamp[nb] = round;
                            visible.push(nb);
                        }
                    }
                }
            }
        }

        let mut horizon: Vec<Vec<usize>> = Vec::new();
        for &v in &visible {
            for r in ridges(&facets[v].verts) {
                let nbrs = &ridge_map[&r];
                let shared_with_visible = nbrs.iter().any(|&o| o != v && stamp[o] == round);
                if !shared_with_visible {
                    horizon.push(r);
                }
            }
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &v in &visible {
            facets[v].alive = false;
            orphans.extend(facets[v].outside.drain(..).filter(|&q| q != apex));
            let verts = facets[v].verts.clone();
            for r in ridges(&verts) {
                if let Some(list) = ridge_map.get_mut(&r) {
                    list.retain(|&o| o != v);
                    if list.is_empty() {
                        ridge_map.remove(&r);
                    }
                }
            }
        }

        let first_new = facets.len();
        for r in horizon {
            let mut verts = r;
            verts.push(apex);
            let f = make_facet(&pts, verts, &interior).ok_or_else(|| Error::Degenerate("flat facet during hull update".into()))?;
            let id = facets.len();
            for rr in ridges(&f.verts) {
                ridge_map.entry(rr).or_default().push(id);
            }
            facets.push(f);
            stamp.push(0);
        }

        for q in orphans {
            let pick = |range: std::ops::Range<usize>, facets: &Vec<Work>| {
                range
                    .filter(|&f| facets[f].alive)
                    .map(|f| (f, facets[f].dist(&pts[q])))
                    .filter(|&(_, dist)| dist > eps)
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            };
            let target = pick(first_new..facets.len(), &facets).or_else(|| pick(0..first_new, &facets));
            if let Some((f, _)) = target {
                facets[f].outside.push(q);
                queue.push(f);
            }
        }
        for f in first_new..facets.len() {
            queue.push(f);
        }
    }

    let facets = facets
        .into_iter()
        .filter(|f| f.alive)
        .map(|f| RawFacet { verts: f.verts })
        .collect();
    Ok(RawHull { facets, interior, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::point;

    fn vertex_set(h: &RawHull) -> Vec<usize> {
        let mut v: Vec<usize> = h.facets.iter().flat_map(|f| f.verts.iter().cloned()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn square_with_center() {
        let pts = vec![
            point(&[0.0, 0.0]),
            point(&[1.0, 0.0]),
            point(&[1.0, 1.0]),
            point(&[0.0, 1.0]),
            point(&[0.5, 0.5]),
        ];
        let h = incremental_hull(&pts).unwrap();
        assert_eq!(vertex_set(&h), vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
    }

    #[test]
    fn cube_is_closed_surface() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(point(&[(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]));
        }
        pts.push(point(&[0.5, 0.5, 0.5]));
        let h = incremental_hull(&pts).unwrap();
        assert_eq!(vertex_set(&h).len(), 8);
        // every ridge is shared by exactly two facets
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &h.facets {
            for r in ridges(&f.verts) {
                *counts.entry(r).or_default() += 1;
            }
        }
        assert!(counts.values().all(|&c| c == 2));
    }

    #[test]
    fn flat_input_is_degenerate() {
        let pts = vec![
            point(&[0.0, 0.0, 0.0]),
            point(&[1.0, 0.0, 0.0]),
            point(&[0.0, 1.0, 0.0]),
            point(&[1.0, 1.0, 0.0]),
        ];
        assert!(matches!(incremental_hull(&pts), Err(Error::Degenerate(_))));
    }
}
