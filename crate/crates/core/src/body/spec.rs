//! JSON body descriptions.
//!
//! ```json
//! {"type": "ball", "center": [0, 0], "radius": 1}
//! {"type": "ellipsoid", "center": [0, 0], "shape": [[4, 0], [0, 1]], "radius": 1}
//! {"type": "hpoly", "normals": [[1, 0], [-1, 0], [0, 1], [0, -1]], "offsets": [1, 1, 1, 1]}
//! {"type": "vpoly", "vertices": [[0, 0], [1, 0], [0, 1]]}
//! {"type": "affine", "base": {...}, "linear": [[2, 0], [0, 0.5]], "translation": [0, 0]}
//! ```

use super::{AffineImage, Ball, BodyRef, Ellipsoid, HPolytope, Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::linalg::Point;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
        radius: f64,
    },
    Hpoly {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    Vpoly {
        vertices: Vec<Vec<f64>>,
    },
    Affine {
        base: Box<BodySpec>,
        linear: Vec<Vec<f64>>,
        translation: Vec<f64>,
    },
}

fn matrix(rows: &[Vec<f64>], d: usize) -> Result<DMatrix<f64>> {
    if rows.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rows.len(),
        });
    }
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: r.len() });
    }
    Ok(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

impl BodySpec {
    pub fn dim(&self) -> usize {
        match self {
            BodySpec::Ball { center, .. } | BodySpec::Ellipsoid { center, .. } => center.len(),
            BodySpec::Hpoly { normals, .. } => normals.first().map_or(0, |n| n.len()),
            BodySpec::Vpoly { vertices } => vertices.first().map_or(0, |v| v.len()),
            BodySpec::Affine { base, .. } => base.dim(),
        }
    }

    pub fn build(&self) -> Result<BodyRef> {
        Ok(match self {
            BodySpec::Ball { center, radius } => Arc::new(Ball::new(Point::from_column_slice(center), *radius)?),
            BodySpec::Ellipsoid { center, shape, radius } => Arc::new(Ellipsoid::new(
                Point::from_column_slice(center),
                matrix(shape, center.len())?,
                *radius,
            )?),
            BodySpec::Hpoly { normals, offsets } => {
                if normals.len() != offsets.len() {
                    return Err(Error::Invalid(format!("{} normals but {} offsets", normals.len(), offsets.len())));
                }
                let hs = normals
                    .iter()
                    .zip(offsets)
                    .map(|(n, &b)| Halfspace::new(Point::from_column_slice(n), b))
                    .collect::<Result<Vec<_>>>()?;
                Arc::new(Polytope::from_hpolytope(&HPolytope::new(hs)?)?)
            }
            BodySpec::Vpoly { vertices } => {
                let pts: Vec<Point> = vertices.iter().map(|v| Point::from_column_slice(v)).collect();
                Arc::new(Polytope::from_points(&pts)?)
            }
            BodySpec::Affine { base, linear, translation } => {
                let b = base.build()?;
                let d = b.dim();
                Arc::new(AffineImage::new(b, matrix(linear, d)?, Point::from_column_slice(translation))?)
            }
        })
    }

    pub fn from_polytope(p: &Polytope) -> Self {
        BodySpec::Vpoly {
            vertices: p.vertices().iter().map(|v| v.iter().cloned().collect()).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let texts = [
            r#"{"type":"ball","center":[0,0],"radius":1}"#,
            r#"{"type":"ellipsoid","center":[0,0],"shape":[[4,0],[0,1]],"radius":1}"#,
            r#"{"type":"hpoly","normals":[[1,0],[-1,0],[0,1],[0,-1]],"offsets":[1,1,1,1]}"#,
            r#"{"type":"vpoly","vertices":[[0,0],[1,0],[0,1]]}"#,
            r#"{"type":"affine","base":{"type":"ball","center":[0,0],"radius":1},"linear":[[2,0],[0,0.5]],"translation":[1,1]}"#,
        ];
        let volumes = [std::f64::consts::PI, 2.0 * std::f64::consts::PI, 4.0, 0.5, std::f64::consts::PI];
        for (t, v) in texts.iter().zip(volumes) {
            let spec = BodySpec::from_json(t).unwrap();
            assert_eq!(spec.dim(), 2);
            let body = spec.build().unwrap();
            assert!((body.exact_volume().unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(BodySpec::from_json(r#"{"type":"ball","center":[0,0],"radius":1,"colour":"red"}"#).is_err());
        assert!(BodySpec::from_json(r#"{"type":"torus"}"#).is_err());
    }

    #[test]
    fn round_trips() {
        let spec = BodySpec::Vpoly {
            vertices: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(BodySpec::from_json(&text).unwrap(), spec);
    }
}
