//! Decay of `d_S(B, P_n)` in the vertex count for inscribed ball polytopes.

use crate::approx::{ball_inscribed_polytope, Construction};
use crate::error::Result;
use crate::linalg::unit_ball_volume;
use crate::report::{Params, Report};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub d_s: f64,
    pub std_error: f64,
    /// `d_S / (d·vol(B)·n^{-2/(d-1)})`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingStudy {
    pub d: usize,
    pub construction: Construction,
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
    pub intercept: f64,
    pub expected_slope: f64,
}

pub fn default_grid(d: usize) -> Vec<usize> {
    match d {
        2 => vec![8, 16, 32, 64, 128],
        _ => vec![32, 64, 128, 256, 512, 1024],
    }
}

/// Least-squares line through `(x_i, y_i)`; returns `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Regular polygons in the plane, low-discrepancy hulls otherwise. Inscribed
/// polytopes lie inside the ball, so `d_S = vol(B) - vol(P_n)` exactly.
pub fn scaling_study(d: usize, grid: &[usize], seed: u64) -> Result<ScalingStudy> {
    let construction = if d == 2 { Construction::Regular } else { Construction::Fibonacci };
    let vb = unit_ball_volume(d);
    let rows: Vec<ScalingRow> = grid
        .par_iter()
        .map(|&n| {
            let (p, _) = ball_inscribed_polytope(d, n, construction, seed)?;
            let d_s = vb - p.volume();
            Ok(ScalingRow {
                n,
                d_s,
                std_error: 0.0,
                normalized: d_s / (d as f64 * vb * (n as f64).powf(-2.0 / (d as f64 - 1.0))),
            })
        })
        .collect::<Result<_>>()?;
    let lx: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ly: Vec<f64> = rows.iter().map(|r| r.d_s.ln()).collect();
    let (slope, intercept) = fit_line(&lx, &ly);
    Ok(ScalingStudy {
        d,
        construction,
        rows,
        slope,
        intercept,
        expected_slope: -2.0 / (d as f64 - 1.0),
    })
}

impl ScalingStudy {
    /// Slope report against a symmetric window around `-2/(d-1)`.
    pub fn report(&self, window: f64, seed: u64) -> Report {
        let pr = Params::new(format!("ball{}", self.d), self.d, seed)
            .with_n(self.rows.last().map_or(0, |r| r.n))
            .budget("grid_points", self.rows.len() as f64);
        Report::new(
            "Eq1.1",
            "|slope + 2/(d-1)| <= window",
            pr,
            (self.slope - self.expected_slope).abs(),
            window,
            0.0,
        )
        .with_note(format!("slope {:.4}", self.slope))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}
