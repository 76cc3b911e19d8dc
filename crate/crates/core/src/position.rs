//! Centroid normalization, isotropic position, the width functional `Θ(ξ)`
//! and centroid-halfspace ratio diagnostics.

use crate::body::{AffineImage, BodyRef, ConvexBody, Polytope};
use crate::caps::halfspace_volume;
use crate::error::{Error, Result};
use crate::linalg::{serde_point, spd_inverse_sqrt, Point};
use crate::measure::{self, section_volume, Estimator, InertiaData, VolumeEstimate};
use crate::report::{Params, Report};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::E;
use std::sync::Arc;

/// Eigenvalue ratio of the second-moment matrix above which the transform is refused.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct IsotropicResult {
    pub transform: DMatrix<f64>,
    pub translated_centroid: Point,
    /// Common diagonal value of the second-moment matrix of `T(K)`.
    pub isotropy_constant: f64,
    /// Largest off-diagonal magnitude of the measured moments of `T(K)`, relative to the diagonal.
    pub residual: f64,
    pub det: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaResult {
    #[serde(with = "serde_point")]
    pub direction: Point,
    pub theta: f64,
    pub central_section: VolumeEstimate,
    /// `h_K(ξ)`, the extent of the body beyond the centroid hyperplane.
    pub width: f64,
}

/// Translate so that the centroid sits at the origin.
///
/// Polytopes are rebuilt with translated vertices; other bodies are wrapped in
/// an [`AffineImage`]. Returns the new body and the removed centroid.
pub fn center_at_centroid(k: BodyRef, est: Estimator) -> Result<(BodyRef, Point)> {
    let d = k.dim();
    let c = measure::inertia(k.as_ref(), &Point::zeros(d), est)?.centroid;
    let body: BodyRef = match k.as_polytope() {
        Some(p) => Arc::new(p.affine_image(&DMatrix::identity(d, d), &-&c)?),
        None => Arc::new(AffineImage::translate(k, -&c)?),
    };
    Ok((body, c))
}

fn off_diagonal_residual(m: &DMatrix<f64>) -> (f64, f64) {
    let d = m.nrows();
    let diag = (0..d).map(|i| m[(i, i)]).sum::<f64>() / d as f64;
    let mut off: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                off = off.max(m[(i, j)].abs());
            }
        }
    }
    (diag, off / diag)
}

fn apply(k: &BodyRef, t: &DMatrix<f64>) -> Result<BodyRef> {
    let d = k.dim();
    Ok(match k.as_polytope() {
        Some(p) => Arc::new(p.affine_image(t, &Point::zeros(d))?),
        None => Arc::new(AffineImage::new(k.clone(), t.clone(), Point::zeros(d))?),
    })
}

/// `T = (det M)^{1/(2d)} M^{-1/2}` for the second-moment matrix `M` about the origin.
///
/// Then `∫_{T(K)} x xᵀ dx = (det M)^{1/d} I` and `det T = 1`. The residual is
/// recomputed from the moments of the transformed body.
pub fn isotropic_transform(k: &BodyRef, est: Estimator) -> Result<IsotropicResult> {
    let d = k.dim();
    let origin = Point::zeros(d);
    let m = measure::inertia(k.as_ref(), &origin, est)?;
    let sym = (&m.second_moment + m.second_moment.transpose()) * 0.5;
    let (inv_sqrt, det_m, cond) = spd_inverse_sqrt(&sym).ok_or(Error::IllConditioned(f64::INFINITY))?;
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned(cond));
    }
    let t = inv_sqrt * det_m.powf(1.0 / (2.0 * d as f64));
    let image = apply(k, &t)?;
    let after: InertiaData = measure::inertia(image.as_ref(), &origin, est)?;
    let (diag, residual) = off_diagonal_residual(&after.second_moment);
    Ok(IsotropicResult {
        det: t.determinant(),
        transform: t,
        translated_centroid: after.centroid,
        isotropy_constant: diag,
        residual,
    })
}

/// Centers `K` at its centroid and applies the isotropic transform.
pub fn isotropic_position(k: BodyRef, est: Estimator) -> Result<(BodyRef, IsotropicResult)> {
    let (centered, _) = center_at_centroid(k, est)?;
    let iso = isotropic_transform(&centered, est)?;
    let body = apply(&centered, &iso.transform)?;
    Ok((body, iso))
}

/// Polytope-only variant of [`isotropic_position`].
pub fn isotropic_polytope(p: &Polytope) -> Result<(Polytope, IsotropicResult)> {
    let (body, iso) = isotropic_position(Arc::new(p.clone()), Estimator::default())?;
    Ok((body.as_polytope().expect("polytopes stay polytopes").clone(), iso))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
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
    0.5 * (a + b)
}

/// First `s ≥ 0` at which `vol_{d-1}(K ∩ H(sξ, ξ)) ≤ central / e`, for `K` centered at its centroid.
///
/// Sections are unimodal in `s`, so the search locates the maximal section and
/// bisects on the decreasing branch beyond it. If the sections never fall to
/// `central / e` inside the body, `Θ` is the extent `h_K(ξ)`.
pub fn theta(k: &dyn ConvexBody, xi: &Point, tol: f64, est: Estimator) -> Result<ThetaResult> {
    let origin = Point::zeros(k.dim());
    let central = section_volume(k, &origin, xi, est)?;
    if central.std_error > tol * central.value {
        return Err(Error::SectionNoise {
            noise: central.std_error / central.value,
            resolution: tol,
        });
    }
    let width = k.support(xi);
    let section = |s: f64| section_volume(k, &(xi * s), xi, est).map(|v| v.value).unwrap_or(0.0);
    let level = central.value / E;
    let peak = golden_max(section, 0.0, width, tol * width);
    let result = |theta| {
        Ok(ThetaResult {
            direction: xi.clone(),
            theta,
            central_section: central.clone(),
            width,
        })
    };
    if section(width) > level {
        return result(width);
    }
    let (mut lo, mut hi) = (peak, width);
    while hi - lo > tol * width {
        let mid = 0.5 * (lo + hi);
        if section(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    result(0.5 * (lo + hi))
}

/// Centroid-halfspace fractions and the parallel-section ratio for one direction.
///
/// Produces reports for the two-sided bound `(d/(d+1))^d ≤ fraction ≤ 1 - (d/(d+1))^d`,
/// its weaker `1/e` form, and `(d/(d+1))^{d-1}·section(H) ≤ central`, `section(H) ≤ e·central` over a
/// scan of `scan` parallel hyperplanes.
pub fn grunbaum_ratios(k: &dyn ConvexBody, body_id: &str, xi: &Point, scan: usize, seed: u64, est: Estimator) -> Result<Vec<Report>> {
    let d = k.dim();
    let inert = measure::inertia(k, &Point::zeros(d), est)?;
    let cg = inert.centroid;
    let vol = measure::volume(k, est);
    let off = cg.dot(xi);
    let upper_part = halfspace_volume(k, xi, off, est);
    let frac = upper_part.value / vol.value;
    let frac_err = 3.0 * (upper_part.std_error + vol.std_error * frac) / vol.value + 1e-12;
    let lower = (d as f64 / (d as f64 + 1.0)).powi(d as i32);
    let params = Params::new(body_id, d, seed).budget("samples", est.samples as f64);
    let mut out = vec![
        Report::new("Lemma2.2i", "fraction >= (d/(d+1))^d", params.clone(), lower, frac, frac_err),
        Report::new(
            "Lemma2.2i",
            "fraction <= 1-(d/(d+1))^d",
            params.clone(),
            frac,
            1.0 - lower,
            frac_err,
        ),
        Report::new("Lemma2.2i", "fraction >= 1/e", params.clone(), 1.0 / E, frac, frac_err),
    ];

    let central = section_volume(k, &cg, xi, est)?;
    let top = k.support(xi);
    let bottom = -k.support(&-xi);
    let mut best = (0.0, off);
    for j in 1..scan {
        let s = bottom + (top - bottom) * j as f64 / scan as f64;
        let v = section_volume(k, &(xi * s), xi, est).map(|v| v.value).unwrap_or(0.0);
        if v > best.0 {
            best = (v, s);
        }
    }
    let sec_err = 3.0 * central.std_error + 1e-12 * central.value;
    let factor = (d as f64 / (d as f64 + 1.0)).powi(d as i32 - 1);
    out.push(
        Report::new(
            "Lemma2.2ii",
            "(d/(d+1))^(d-1) max section <= central",
            params.clone(),
            factor * best.0,
            central.value,
            sec_err * (1.0 + factor),
        )
        .with_note(format!("max section at offset {:.6}", best.1 - off)),
    );
    out.push(Report::new(
        "Lemma2.2ii",
        "max section <= e central",
        params,
        best.0,
        E * central.value,
        sec_err * (1.0 + E),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{Ball, HPolytope};
    use crate::linalg::point;
    use approx::assert_relative_eq;

    fn triangle() -> Polytope {
        Polytope::from_points(&[point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.0, 1.0])]).unwrap()
    }

    #[test]
    fn centering_triangle() {
        let (body, c) = center_at_centroid(Arc::new(triangle()), Estimator::default()).unwrap();
        assert!((c - point(&[1.0 / 3.0, 1.0 / 3.0])).norm() < 1e-14);
        let again = measure::inertia(body.as_ref(), &Point::zeros(2), Estimator::default()).unwrap();
        assert!(again.centroid.norm() < 1e-14);
        let (_, c) = center_at_centroid(Arc::new(Ball::unit(3)), Estimator::default()).unwrap();
        assert_eq!(c.norm(), 0.0);
    }

    #[test]
    fn rectangle_transform() {
        let rect: BodyRef =
            Arc::new(Polytope::from_points(&[point(&[-2.0, -0.5]), point(&[2.0, -0.5]), point(&[2.0, 0.5]), point(&[-2.0, 0.5])]).unwrap());
        let iso = isotropic_transform(&rect, Estimator::default()).unwrap();
        assert!((iso.transform[(0, 0)].abs() - 0.5).abs() < 1e-12);
        assert!((iso.transform[(1, 1)].abs() - 2.0).abs() < 1e-12);
        assert!(iso.transform[(0, 1)].abs() < 1e-12);
        assert_relative_eq!(iso.det, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ball_is_already_isotropic() {
        let iso = isotropic_transform(&(Arc::new(Ball::unit(3)) as BodyRef), Estimator::default()).unwrap();
        assert!((iso.transform - DMatrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn triangle_transform_is_isotropic() {
        let (_, iso) = isotropic_polytope(&triangle()).unwrap();
        assert!(iso.residual <= 1e-9);
        assert_relative_eq!(iso.det, 1.0, max_relative = 1e-12);
        assert!(iso.translated_centroid.norm() < 1e-12);
    }

    #[test]
    fn theta_examples() {
        let sq = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap();
        let th = theta(&sq, &point(&[1.0, 0.0]), 1e-10, Estimator::default()).unwrap();
        assert_relative_eq!(th.theta, 1.0, epsilon = 1e-9);
        let lemma = th.theta * th.central_section.value;
        assert!(lemma >= 4.0 / (2.0 * E.powi(3)) && lemma <= E * 4.0);
        let disk = Ball::unit(2);
        let th = theta(&disk, &point(&[0.0, 1.0]), 1e-12, Estimator::default()).unwrap();
        assert_relative_eq!(th.theta, (1.0 - E.powi(-2)).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn triangle_cone_equality() {
        // the side y = 0 has outer normal (0, -1); the vertex side is y ≥ 1/3
        let t = triangle();
        let reports = grunbaum_ratios(&t, "triangle", &point(&[0.0, 1.0]), 200, 0, Estimator::default()).unwrap();
        let frac = reports[0].rhs;
        assert_relative_eq!(frac, 4.0 / 9.0, epsilon = 1e-12);
        assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
    }

    #[test]
    fn ball_halves() {
        let b = Ball::unit(3);
        let reports = grunbaum_ratios(&b, "ball", &point(&[0.0, 0.6, 0.8]), 64, 0, Estimator::default()).unwrap();
        assert_relative_eq!(reports[0].rhs, 0.5, epsilon = 1e-12);
    }
}
