//! Small dense linear-algebra helpers for low-dimensional geometry.

use nalgebra::{DMatrix, DVector};

/// A point or vector in `R^d`.
pub type Point = DVector<f64>;

/// Volume of the Euclidean unit ball in dimension `d`, via `V_d = 2π/d · V_{d-2}`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// Surface area of the unit sphere in `R^d`, `d · V_d`.
pub fn unit_sphere_area(d: usize) -> f64 {
    d as f64 * unit_ball_volume(d)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn point(coords: &[f64]) -> Point {
    DVector::from_column_slice(coords)
}

/// Builds the `k`-th standard basis vector of `R^d`.
pub fn basis(d: usize, k: usize) -> Point {
    let mut e = DVector::zeros(d);
    e[k] = 1.0;
    e
}

/// Unit normal to the hyperplane through `d` points in `R^d`, up to sign.
///
/// Computed as the generalized cross product of the edge vectors. Returns
/// `None` when the points are affinely dependent to working precision.
pub fn hyperplane_normal(points: &[&Point]) -> Option<Point> {
    let d = points[0].len();
    debug_assert_eq!(points.len(), d);
    let rows = d - 1;
    let mut a = DMatrix::zeros(rows, d);
    let mut span = 0.0_f64;
    for r in 0..rows {
        let diff = points[r + 1] - points[0];
        span = span.max(diff.norm());
        a.set_row(r, &diff.transpose());
    }
    if span == 0.0 {
        return None;
    }
    let mut n = DVector::zeros(d);
    for j in 0..d {
        let minor = a.clone().remove_column(j);
        let det = if rows == 0 { 1.0 } else { minor.determinant() };
        n[j] = if j % 2 == 0 { det } else { -det };
    }
    let norm = n.norm();
    if !(norm > 1e-14 * span.powi(rows as i32)) {
        return None;
    }
    Some(n / norm)
}

/// Volume of the `d`-simplex spanned by `d + 1` points in `R^d`.
pub fn simplex_volume(points: &[Point]) -> f64 {
    let d = points[0].len();
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        m.set_column(k, &(&points[k + 1] - &points[0]));
    }
    m.determinant().abs() / factorial(d)
}

/// `k`-dimensional measure of the simplex spanned by `k + 1` points in `R^d` (Gram determinant).
pub fn simplex_measure(points: &[Point]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let d = points[0].len();
    let mut m = DMatrix::zeros(d, k);
    for j in 0..k {
        m.set_column(j, &(&points[j + 1] - &points[0]));
    }
    let gram = m.transpose() * &m;
    gram.determinant().max(0.0).sqrt() / factorial(k)
}

/// Orthonormal basis (as columns) of the orthogonal complement of the unit vector `n`.
pub fn complement_basis(n: &Point) -> DMatrix<f64> {
    let d = n.len();
    let mut basis_vecs: Vec<Point> = vec![n.clone()];
    let mut candidates: Vec<usize> = (0..d).collect();
    // start from the axes least aligned with n
    candidates.sort_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap());
    for k in candidates {
        if basis_vecs.len() == d {
            break;
        }
        let mut v = basis(d, k);
        for b in &basis_vecs {
            let c = v.dot(b);
            v -= b * c;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis_vecs.push(v / norm);
        }
    }
    let cols: Vec<Point> = basis_vecs.into_iter().skip(1).collect();
    DMatrix::from_columns(&cols)
}

/// Numerical rank of a set of vectors (rows), with relative tolerance.
pub fn rank(vectors: &[&Point], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let d = vectors[0].len();
    let mut m = DMatrix::zeros(vectors.len(), d);
    for (i, v) in vectors.iter().enumerate() {
        m.set_row(i, &v.transpose());
    }
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Symmetric square root inverse `M^{-1/2}` and `det M` of a symmetric positive-definite matrix.
pub fn spd_inverse_sqrt(m: &DMatrix<f64>) -> Option<(DMatrix<f64>, f64, f64)> {
    let eig = m.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    if !(min > 0.0) {
        return None;
    }
    let det: f64 = eig.eigenvalues.iter().product();
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let q = &eig.eigenvectors;
    Some((q * inv_sqrt * q.transpose(), det, max / min))
}

/// Serde adapters that store points as plain `f64` arrays.
pub mod serde_point {
    use super::Point;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(p.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        Ok(Point::from_vec(Vec::<f64>::deserialize(d)?))
    }
}

pub mod serde_points {
    use super::Point;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ps: &[Point], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(ps.iter().map(|p| p.iter().cloned().collect::<Vec<f64>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Point>, D::Error> {
        Ok(Vec::<Vec<f64>>::deserialize(d)?.into_iter().map(Point::from_vec).collect())
    }
}
