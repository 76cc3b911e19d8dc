//! Per-claim checks producing [`Report`]s.

use super::corpus::CorpusBody;
use super::VerifyConfig;
use crate::approx::{
    ball_inscribed_polytope, circumscribed_polytope, greedy_count_bound, greedy_inscribed, hausdorff_bound, Construction, GreedyLimits,
};
use crate::body::{sandwich_constants, BodyRef, ConvexBody, Polytope};
use crate::error::{Error, Result};
use crate::floating::{floating_outer_with_directions, inscribed_ball_check};
use crate::illumination::{gap_volume, overshoot_oracle, overshoot_polytope};
use crate::linalg::{unit_sphere_area, Point};
use crate::measure::{self, section_volume, Estimator};
use crate::position::{center_at_centroid, grunbaum_ratios, isotropic_position, theta};
use crate::report::{Params, Report};
use crate::sampling::{derive_seed, rng_for, rotated_directions, stream, uniform_in_ball, uniform_on_sphere};
use rayon::prelude::*;
use std::f64::consts::E;

fn directions_for(d: usize, count: usize, seed: u64, index: u64) -> Vec<Point> {
    let mut rng = rng_for(seed, stream::DIRECTIONS, index);
    (0..count).map(|_| uniform_on_sphere(&mut rng, d)).collect()
}

fn flatten(parts: Vec<Result<Vec<Report>>>) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn params(b: &CorpusBody, cfg: &VerifyConfig) -> Params {
    Params::new(b.id.clone(), b.dim(), cfg.seed).budget("samples", cfg.estimator.samples as f64)
}

/// Centroid halfspace fractions and parallel sections, `trials` random directions per body.
pub fn centroid_cut_checks(bodies: &[CorpusBody], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    flatten(
        bodies
            .par_iter()
            .enumerate()
            .map(|(i, b)| {
                let mut out = Vec::new();
                for xi in directions_for(b.dim(), cfg.trials, cfg.seed, i as u64) {
                    out.extend(grunbaum_ratios(
                        b.body.as_ref(),
                        &b.id,
                        &xi,
                        cfg.section_scan,
                        cfg.seed,
                        cfg.estimator,
                    )?);
                }
                Ok(out)
            })
            .collect(),
    )
}

/// `vol/(2e³) ≤ Θ(ξ)·central ≤ e·vol` for centered bodies.
pub fn width_checks(bodies: &[CorpusBody], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    flatten(
        bodies
            .par_iter()
            .enumerate()
            .map(|(i, b)| {
                let (k, _) = center_at_centroid(b.body.clone(), cfg.estimator)?;
                let vol = measure::volume(k.as_ref(), cfg.estimator);
                let mut out = Vec::new();
                for xi in directions_for(b.dim(), cfg.trials, cfg.seed, i as u64) {
                    let th = theta(k.as_ref(), &xi, 1e-9, cfg.estimator)?;
                    let prod = th.theta * th.central_section.value;
                    let tol = 3.0 * th.theta * th.central_section.std_error + 1e-8 * prod;
                    out.push(Report::new(
                        "Lemma2.3",
                        "vol/(2e^3) <= theta*central",
                        params(b, cfg),
                        vol.value / (2.0 * E.powi(3)),
                        prod,
                        tol,
                    ));
                    out.push(Report::new(
                        "Lemma2.3",
                        "theta*central <= e vol",
                        params(b, cfg),
                        prod,
                        E * vol.value,
                        tol,
                    ));
                }
                Ok(out)
            })
            .collect(),
    )
}

/// Isotropic image of a centered body.
pub fn isotropic_image(b: &CorpusBody, est: Estimator) -> Result<(BodyRef, crate::position::IsotropicResult)> {
    isotropic_position(b.body.clone(), est)
}

/// `det T = 1`, vanishing off-diagonal moments, and equal directional moments.
pub fn isotropy_checks(bodies: &[CorpusBody], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    flatten(
        bodies
            .par_iter()
            .enumerate()
            .map(|(i, b)| {
                let (k, iso) = isotropic_image(b, cfg.estimator)?;
                let m = measure::inertia(k.as_ref(), &Point::zeros(b.dim()), cfg.estimator)?;
                let mean = m.second_moment.trace() / b.dim() as f64;
                let spread = directions_for(b.dim(), cfg.trials.max(100), cfg.seed, i as u64)
                    .iter()
                    .map(|xi| ((xi.transpose() * &m.second_moment * xi)[(0, 0)] - mean).abs() / mean)
                    .fold(0.0, f64::max);
                Ok(vec![
                    Report::new("Lemma2.4", "|det T - 1|", params(b, cfg), (iso.det - 1.0).abs(), 1e-12, 0.0),
                    Report::new(
                        "Lemma2.4",
                        "off-diagonal moments / diagonal",
                        params(b, cfg),
                        iso.residual,
                        1e-9,
                        0.0,
                    ),
                    Report::new("Lemma2.4", "directional moment spread", params(b, cfg), spread, 1e-9, 0.0),
                ])
            })
            .collect(),
    )
}

/// `vol³/(24e¹⁰) ≤ section(ξ)²·(1/d) tr M ≤ 6e³ vol³` in isotropic position.
pub fn section_moment_checks(bodies: &[CorpusBody], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    flatten(
        bodies
            .par_iter()
            .enumerate()
            .map(|(i, b)| {
                let d = b.dim();
                let (k, _) = isotropic_image(b, cfg.estimator)?;
                let origin = Point::zeros(d);
                let m = measure::inertia(k.as_ref(), &origin, cfg.estimator)?;
                let q = m.second_moment.trace() / d as f64;
                let v3 = m.volume.powi(3);
                let mut out = Vec::new();
                for xi in directions_for(d, cfg.trials, cfg.seed, i as u64) {
                    let s = section_volume(k.as_ref(), &origin, &xi, cfg.estimator)?;
                    let val = s.value * s.value * q;
                    let tol = 3.0 * 2.0 * s.value * s.std_error * q + 1e-10 * val;
                    out.push(Report::new(
                        "Lemma2.5",
                        "vol^3/(24e^10) <= section^2 (1/d)trM",
                        params(b, cfg),
                        v3 / (24.0 * E.powi(10)),
                        val,
                        tol,
                    ));
                    out.push(Report::new(
                        "Lemma2.5",
                        "section^2 (1/d)trM <= 6e^3 vol^3",
                        params(b, cfg),
                        val,
                        6.0 * E.powi(3) * v3,
                        tol,
                    ));
                }
                Ok(out)
            })
            .collect(),
    )
}

/// `(1/d) tr M ≥ d^{2/d}/(d+2)·|S^{d-1}|^{-2/d}·vol^{(d+2)/d}` for centered bodies.
pub fn moment_lower_bound(d: usize, volume: f64) -> f64 {
    let df = d as f64;
    df.powf(2.0 / df) / (df + 2.0) * unit_sphere_area(d).powf(-2.0 / df) * volume.powf((df + 2.0) / df)
}

pub fn moment_lower_checks(bodies: &[CorpusBody], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    bodies
        .par_iter()
        .map(|b| {
            let d = b.dim();
            let (k, _) = center_at_centroid(b.body.clone(), cfg.estimator)?;
            let m = measure::inertia(k.as_ref(), &Point::zeros(d), cfg.estimator)?;
            let q = m.second_moment.trace() / d as f64;
            let bound = moment_lower_bound(d, m.volume);
            Ok(Report::new("Lemma2.6", "bound <= (1/d)trM", params(b, cfg), bound, q, 1e-12 * q))
        })
        .collect()
}

/// Hyperplanes at the inscribed radius cut more than `vol/(4e⁴)`, in isotropic position.
pub fn inscribed_ball_checks(bodies: &[CorpusBody], cfg: &VerifyConfig) -> Result<Vec<Report>> {
    bodies
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let (k, _) = isotropic_image(b, cfg.estimator)?;
            let seed = derive_seed(cfg.seed, stream::DIRECTIONS, i as u64);
            Ok(inscribed_ball_check(
                k.as_ref(),
                &b.id,
                cfg.inscribed_ball_directions,
                seed,
                cfg.estimator,
            ))
        })
        .collect()
}

/// Greedy run plus the sandwich, count and volume checks.
///
/// `K_t` itself is not available, so it is replaced by the outer polytope of
/// the `t`-cutting halfspaces in `sandwich_directions` directions `u_j`:
/// - sandwich: `h_outer(u_j) ≤ h_{P_n}(u_j)`, a one-sided check in the sampled
///   directions (exact for bodies whose cutting hyperplanes touch `K_t`);
/// - count: `n ≤ e^{16d}·vol(K \ outer)/(t·vol(B))`, stronger than with `K_t`;
/// - volume: `vol(K \ P_n) ≤ vol(K \ outer)`.
pub fn verify_greedy_bounds(b: &CorpusBody, t: f64, cfg: &VerifyConfig, limits: GreedyLimits) -> Result<Vec<Report>> {
    let k = b.body.as_ref();
    let d = b.dim();
    let est = cfg.estimator;
    let (p, run) = greedy_inscribed(k, t, cfg.seed, limits)?;
    let dirs = rotated_directions(d, cfg.sandwich_directions, derive_seed(cfg.seed, stream::DIRECTIONS, 21));
    let outer = floating_outer_with_directions(k, t, &dirs, limits.tol, est)?;
    let vol = measure::volume(k, est);
    let scale = k.bounding_ball().1;
    let pr = params(b, cfg)
        .with_t(t)
        .with_n(run.n())
        .budget("sandwich_directions", cfg.sandwich_directions as f64)
        .budget("rejection_streak_limit", run.rejection_streak_limit as f64);

    let outside = run
        .vertices
        .iter()
        .flat_map(|v| dirs.iter().map(move |u| (v, u)))
        .map(|(v, u)| v.dot(u) - k.support(u))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut member = Report::new("Thm2.1", "vertices in K (support excess)", pr.clone(), outside, 0.0, 1e-9 * scale);
    if !run.vertices_in_body {
        member.pass = false;
        member.note = "a vertex failed the membership oracle".into();
    }

    let excess = dirs
        .iter()
        .map(|u| outer.polytope.support(u) - p.support(u))
        .fold(f64::NEG_INFINITY, f64::max);
    let sandwich = Report::new("Thm2.1", "K_t in P_n (outer support excess)", pr.clone(), excess, 0.0, 1e-6)
        .with_note(format!("facet certificate slack {:.3e}", run.certificate_slack));

    let gap = vol.value - outer.polytope.volume();
    let bound = greedy_count_bound(d, gap, t);
    let count = Report::new(
        "Thm2.1",
        "n <= e^(16d) vol(K\\K_t)/(t vol B)",
        pr.clone(),
        run.n() as f64,
        bound,
        0.0,
    )
    .with_note(format!("{:?} after {} candidates", run.terminated_by, run.candidates));

    let missing = vol.value - p.volume();
    let volume = Report::new("Thm2.1", "vol(K\\P_n) <= vol(K\\K_t)", pr, missing, gap, 3.0 * vol.std_error);
    Ok(vec![member, sandwich, count, volume])
}

/// `(5c₁c₂)^{-d-1}·vol(K)`.
pub fn gap_t_limit(d: usize, c1: f64, c2: f64, volume: f64) -> f64 {
    (5.0 * c1 * c2).powi(-(d as i32) - 1) * volume
}

/// `[(128π/7)^{(d-1)/2}, vol(K^t \ K)/(32edt)]`.
pub fn gap_window(d: usize, t: f64, gap: f64) -> (f64, f64) {
    let lo = (128.0 * std::f64::consts::PI / 7.0).powf((d as f64 - 1.0) / 2.0);
    let hi = gap / (32.0 * E * d as f64 * t);
    (lo, hi)
}

/// Admissible facet count for the illumination-gap inequality, or `WindowEmpty`.
pub fn gap_facet_count(d: usize, t: f64, gap: f64) -> Result<usize> {
    let (lo, hi) = gap_window(d, t, gap);
    if lo.ceil() > hi.floor() {
        return Err(Error::WindowEmpty { lo, hi });
    }
    Ok(hi.floor() as usize)
}

/// Illumination gap against a circumscribed polytope with `n` low-discrepancy facets.
///
/// The body is taken about the origin for the sandwich constants. Returns an
/// unmet report when `t` is above the hypothesis limit or the `n`-window is empty.
pub fn verify_illumination_gap(b: &CorpusBody, t: f64, cfg: &VerifyConfig) -> Result<Report> {
    let k = b.body.as_ref();
    let d = b.dim();
    let origin = Point::zeros(d);
    let (c1, c2) = sandwich_constants(k, &origin, &rotated_directions(d, cfg.sandwich_directions, 0));
    let vol = measure::volume(k, cfg.estimator).value;
    let pr = params(b, cfg).with_t(t).budget("c1", c1).budget("c2", c2);
    let limit = gap_t_limit(d, c1, c2, vol);
    if t > limit {
        return Ok(Report::unmet(
            "Thm3.1",
            "illumination gap bound",
            pr,
            format!("t = {t:.3e} above (5c1c2)^(-d-1) vol = {limit:.3e}"),
        ));
    }
    let gap = gap_volume(k, t, &origin, cfg.quadrature_points, cfg.estimator)?;
    let n = match gap_facet_count(d, t, gap.value) {
        Ok(n) => n,
        Err(Error::WindowEmpty { lo, hi }) => {
            return Ok(Report::unmet(
                "Thm3.1",
                "illumination gap bound",
                pr,
                format!("WindowEmpty: n in [{lo:.3}, {hi:.3}]"),
            ));
        }
        Err(e) => return Err(e),
    };
    let dirs = rotated_directions(d, n, derive_seed(cfg.seed, stream::DIRECTIONS, 31));
    let p: Polytope = circumscribed_polytope(k, &dirs)?;
    let outside = p.volume() - vol;
    let constant = 1e7 * (d * d) as f64 * (c1 * c2).powf(2.0 + 1.0 / (d as f64 - 1.0));
    Ok(Report::new(
        "Thm3.1",
        "illumination gap bound",
        pr.with_n(n),
        gap.value,
        constant * outside,
        3.0 * gap.std_error,
    )
    .with_note(format!("vol(K^t\\K) = {:.6e}, vol(P_n\\K) = {outside:.6e}", gap.value)))
}

/// Largest `t = vol·10^{-k/2}`, `k = 8, 9, ...`, whose `n`-window is nonempty.
pub fn gap_admissible_t(b: &CorpusBody, cfg: &VerifyConfig) -> Result<Option<f64>> {
    let k = b.body.as_ref();
    let d = b.dim();
    let vol = measure::volume(k, cfg.estimator).value;
    let origin = Point::zeros(d);
    for step in 8..=30 {
        let t = vol * 10f64.powf(-(step as f64) / 2.0);
        let gap = gap_volume(k, t, &origin, cfg.quadrature_points, cfg.estimator)?;
        if gap_facet_count(d, t, gap.value).is_ok() {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Hausdorff distance of inscribed ball polytopes against `(64/7)π n^{-2/(d-1)}`.
pub fn hausdorff_checks(cfg: &VerifyConfig) -> Result<Vec<Report>> {
    let mut cases: Vec<(usize, usize, Construction)> = (3..=512).map(|n| (2, n, Construction::Regular)).collect();
    cases.extend([50, 100, 200].map(|n| (3, n, Construction::Fibonacci)));
    cases
        .par_iter()
        .map(|&(d, n, c)| {
            let (_, dh) = ball_inscribed_polytope(d, n, c, cfg.seed)?;
            let pr = Params::new(format!("ball{d}-{c:?}").to_lowercase(), d, cfg.seed).with_n(n);
            Ok(Report::new(
                "Eq3.2",
                "d_H <= (64/7) pi n^(-2/(d-1))",
                pr,
                dh,
                hausdorff_bound(d, n),
                0.0,
            ))
        })
        .collect()
}

/// Facet formula against the membership oracle, and midpoint convexity of the formula.
pub fn overshoot_checks(cfg: &VerifyConfig) -> Result<Vec<Report>> {
    let pairs: Vec<Result<Report>> = (0..cfg.overshoot_pairs)
        .into_par_iter()
        .map(|i| {
            let d = 2 + i % 2;
            let p = super::corpus::random_polytope(d, cfg.seed, 1000 + i as u64)?;
            let mut rng = rng_for(cfg.seed, stream::OVERSHOOT, 1000 + i as u64);
            let mut x = Point::zeros(d);
            uniform_in_ball(&mut rng, p.center(), 1.5 * p.scale(), &mut x);
            let exact = overshoot_polytope(&p, &x).value.value;
            let mc = overshoot_oracle(&p, &x, cfg.oracle_samples, derive_seed(cfg.seed, stream::OVERSHOOT, i as u64)).value;
            let pr = Params::new(format!("random{d}_{i}"), d, cfg.seed).budget("samples", cfg.oracle_samples as f64);
            Ok(Report::new(
                "Def.overshoot",
                "|facet formula - oracle|",
                pr,
                (exact - mc.value).abs(),
                0.0,
                3.0 * mc.std_error,
            ))
        })
        .collect();
    let mut out: Vec<Report> = pairs.into_iter().collect::<Result<_>>()?;
    let polys: Vec<Polytope> = (0..4)
        .map(|i| super::corpus::random_polytope(2 + i % 2, cfg.seed, 2000 + i as u64))
        .collect::<Result<_>>()?;
    let mut worst = f64::NEG_INFINITY;
    let mut rng = rng_for(cfg.seed, stream::OVERSHOOT, 3000);
    for j in 0..cfg.convexity_pairs {
        let p = &polys[j % polys.len()];
        let (mut x, mut y) = (Point::zeros(p.dim()), Point::zeros(p.dim()));
        uniform_in_ball(&mut rng, p.center(), 2.0 * p.scale(), &mut x);
        uniform_in_ball(&mut rng, p.center(), 2.0 * p.scale(), &mut y);
        let f = |z: &Point| overshoot_polytope(p, z).value.value;
        let mid = f(&((&x + &y) * 0.5));
        worst = worst.max(mid - 0.5 * (f(&x) + f(&y)));
    }
    let pr = Params::new("random2/3", 0, cfg.seed).with_n(cfg.convexity_pairs);
    out.push(Report::new("Def.overshoot", "midpoint convexity violation", pr, worst, 0.0, 1e-12));
    Ok(out)
}
