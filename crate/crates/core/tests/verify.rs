use floatbody::approx::{ball_inscribed_polytope, circumscribed_polytope, greedy_inscribed, Construction, GreedyLimits};
use floatbody::body::{Ball, BodyRef, HPolytope, Polytope};
use floatbody::caps::halfspace_volume;
use floatbody::error::Error;
use floatbody::linalg::Point;
use floatbody::measure::Estimator;
use floatbody::sampling::{rng_for, sphere_directions, uniform_on_sphere};
use floatbody::verify::claims::{
    centroid_cut_checks, gap_admissible_t, hausdorff_checks, inscribed_ball_checks, verify_greedy_bounds, verify_illumination_gap,
};
use floatbody::verify::corpus::{random_polytopes, CorpusBody};
use floatbody::verify::scaling::{fit_line, scaling_study};
use floatbody::verify::{run_claim, VerifyConfig};
use std::f64::consts::PI;
use std::sync::Arc;

fn disk() -> CorpusBody {
    CorpusBody::new("disk", Arc::new(Ball::unit(2)))
}

fn square() -> CorpusBody {
    CorpusBody::new(
        "square",
        Arc::new(Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 1.0)).unwrap()),
    )
}

/// Depth `h` of the circular segment of area `t` in the unit disk.
fn segment_depth(t: f64) -> f64 {
    let area = |h: f64| (1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt();
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if area(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn greedy_bounds_on_disk_and_square() {
    let cfg = VerifyConfig::default();
    for (b, t) in [(disk(), 1e-3 * PI), (square(), 4e-3)] {
        let reports = verify_greedy_bounds(&b, t, &cfg, GreedyLimits::default()).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(reports.iter().all(|r| r.pass && r.hypothesis_met), "{reports:#?}");
    }
    // the disk's floating body is the concentric disk of radius 1 - h
    let t = 1e-3 * PI;
    let h = segment_depth(t);
    let gap = PI * (1.0 - (1.0 - h).powi(2));
    let reports = verify_greedy_bounds(&disk(), t, &cfg, GreedyLimits::default()).unwrap();
    let n = reports[2].lhs;
    assert!(n >= 3.0 && n <= 32f64.exp() * gap / (t * PI));
    assert!((reports[3].rhs - gap).abs() < 1e-3 * gap);
}

#[test]
fn greedy_rejects_large_caps() {
    let cfg = VerifyConfig::default();
    let err = verify_greedy_bounds(&disk(), 0.1 * PI, &cfg, GreedyLimits::default()).unwrap_err();
    assert!(matches!(err, Error::TargetTooLarge { .. }));
    let reports = run_claim(
        "Thm2.1",
        &VerifyConfig {
            body: Some(disk()),
            t_frac: Some(0.1),
            ..VerifyConfig::default()
        },
    )
    .unwrap();
    assert!(reports.iter().all(|r| !r.hypothesis_met));
}

#[test]
fn greedy_caps_exclude_each_other() {
    // t = 0.02 pi lies above the default threshold, so the threshold is raised
    let limits = GreedyLimits {
        threshold: 0.05,
        ..GreedyLimits::default()
    };
    let d = disk();
    let t = 0.02 * PI;
    let (p, run) = greedy_inscribed(d.body.as_ref(), t, 7, limits).unwrap();
    assert!(run.n() >= 3);
    assert_eq!(p.vertices().len(), run.n());
    // audit the stored caps: no vertex lies inside another vertex's open cap
    for (k, cap) in run.caps.iter().enumerate() {
        let base = cap.anchor.dot(&cap.normal) - cap.depth;
        for (j, v) in run.vertices.iter().enumerate() {
            if j != k {
                assert!(v.dot(&cap.normal) <= base + 1e-9, "vertex {j} inside cap {k}");
            }
        }
        assert!((cap.depth - segment_depth(t)).abs() < 1e-8);
    }
}

#[test]
fn illumination_gap_balls_pass_square_is_unmet() {
    let cfg = VerifyConfig::default();
    for b in [
        CorpusBody::new("ball2", Arc::new(Ball::unit(2))),
        CorpusBody::new("ball3", Arc::new(Ball::unit(3))),
    ] {
        let t = gap_admissible_t(&b, &cfg).unwrap().expect("admissible t");
        let r = verify_illumination_gap(&b, t, &cfg).unwrap();
        assert!(r.hypothesis_met && r.pass, "{r:#?}");
    }
    let sq = square();
    assert_eq!(gap_admissible_t(&sq, &cfg).unwrap(), None);
    let r = verify_illumination_gap(&sq, 1e-4, &cfg).unwrap();
    assert!(!r.hypothesis_met && !r.pass);
    assert!(r.note.contains("WindowEmpty"), "{}", r.note);
    // the same holds for the disk at t = 1e-4 pi
    let r = verify_illumination_gap(&disk(), 1e-4 * PI, &cfg).unwrap();
    assert!(!r.hypothesis_met && r.note.contains("WindowEmpty"));
}

#[test]
fn grunbaum_on_random_polygons() {
    let cfg = VerifyConfig::default();
    let bodies = random_polytopes(2, 100, 3).unwrap();
    let reports = centroid_cut_checks(&bodies, &cfg).unwrap();
    assert_eq!(reports.len(), 100 * cfg.trials * 5);
    assert!(reports.iter().all(|r| r.pass));
    // independent route: cut each polygon through its area centroid
    let est = Estimator::default();
    for b in bodies.iter().take(20) {
        let p = b.body.as_polytope().unwrap();
        let c = p.inertia(&Point::zeros(2)).centroid;
        for u in sphere_directions(2, 12) {
            let frac = halfspace_volume(p, &u, c.dot(&u), est).value / p.volume();
            assert!((4.0 / 9.0 - 1e-12..=5.0 / 9.0 + 1e-12).contains(&frac), "{} {frac}", b.id);
        }
    }
}

#[test]
fn inscribed_ball_on_isotropic_cube() {
    let cfg = VerifyConfig::default();
    let cube: BodyRef = Arc::new(Polytope::from_hpolytope(&HPolytope::cube(3, -0.5, 0.5)).unwrap());
    let reports = inscribed_ball_checks(&[CorpusBody::new("cube3", cube)], &cfg).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].pass && reports[0].margin > 0.0);
}

#[test]
fn hausdorff_examples() {
    let cfg = VerifyConfig::default();
    for (n, expected) in [(3, 0.5), (8, 1.0 - (PI / 8.0).cos())] {
        let (_, dh) = ball_inscribed_polytope(2, n, Construction::Regular, 0).unwrap();
        assert!((dh - expected).abs() < 1e-12);
    }
    assert!((1.0 - (PI / 8.0).cos() - 0.0761).abs() < 1e-4);
    let (p, dh) = ball_inscribed_polytope(3, 100, Construction::Fibonacci, 0).unwrap();
    // independent: distance from the origin to the nearest facet plane
    let inner = p.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min);
    assert!((dh - (1.0 - inner)).abs() < 1e-12);
    assert!(dh <= 64.0 / 7.0 * PI / 100.0);
    let reports = hausdorff_checks(&cfg).unwrap();
    assert_eq!(reports.len(), 510 + 3);
    assert!(reports.iter().all(|r| r.pass));
}

#[test]
fn circumscribed_disk_polygons() {
    for m in [4, 6, 12, 50] {
        let dirs = sphere_directions(2, m);
        let p = circumscribed_polytope(&Ball::unit(2), &dirs).unwrap();
        let area = m as f64 * (PI / m as f64).tan();
        assert!((p.volume() - area).abs() < 1e-9 * area, "m = {m}");
    }
    let dirs: Vec<Point> = (0..3)
        .flat_map(|i| [1.0, -1.0].map(|s| Point::from_fn(3, |j, _| if i == j { s } else { 0.0 })))
        .collect();
    let cube = circumscribed_polytope(&Ball::unit(3), &dirs).unwrap();
    assert!((cube.volume() - 8.0).abs() < 1e-12);
}

#[test]
fn scaling_rows_and_slopes() {
    let grid = [8, 16, 32, 64, 128];
    let s = scaling_study(2, &grid, 0).unwrap();
    let ly: Vec<f64> = grid
        .iter()
        .map(|&n| (PI - n as f64 / 2.0 * (2.0 * PI / n as f64).sin()).ln())
        .collect();
    let lx: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    for (row, y) in s.rows.iter().zip(&ly) {
        assert!((row.d_s.ln() - y).abs() < 1e-9);
    }
    assert!((s.slope - fit_line(&lx, &ly).0).abs() < 1e-9);
    assert!((s.slope + 2.0).abs() < 0.02);
    let s3 = scaling_study(3, &[32, 64, 128, 256, 512, 1024], 0).unwrap();
    assert!((-1.3..=-0.7).contains(&s3.slope), "{}", s3.slope);
    for st in [&s, &s3] {
        let (lo, hi) = st
            .rows
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.normalized), hi.max(r.normalized)));
        assert!(lo > 0.0 && hi / lo < 2.0, "normalized constants {lo}..{hi}");
    }
}

#[test]
fn overshoot_and_registry() {
    let cfg = VerifyConfig::default();
    let reports = run_claim("Def.overshoot", &cfg).unwrap();
    assert!(reports.len() >= cfg.overshoot_pairs);
    assert!(reports.iter().all(|r| r.pass));
    assert!(run_claim("Lemma9", &cfg).is_err());
}

#[test]
fn random_direction_cuts_of_the_disk_are_segments() {
    let est = Estimator::default();
    let mut rng = rng_for(2, 0, 0);
    for _ in 0..20 {
        let u = uniform_on_sphere(&mut rng, 2);
        let h = 0.3;
        let v = halfspace_volume(&Ball::unit(2), &u, 1.0 - h, est).value;
        assert!((v - ((1.0 - h).acos() - (1.0 - h) * (2.0 * h - h * h).sqrt())).abs() < 1e-12);
    }
}
