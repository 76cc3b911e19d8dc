//! Test bodies for the lemma checks.

use crate::body::{Ball, BodyRef, HPolytope, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{basis, Point};
use crate::sampling::{rng_for, stream, uniform_in_ball};
use rand::Rng;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone)]
pub struct CorpusBody {
    pub id: String,
    pub body: BodyRef,
}

impl CorpusBody {
    pub fn new(id: impl Into<String>, body: BodyRef) -> Self {
        Self { id: id.into(), body }
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }
}

impl std::fmt::Debug for CorpusBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CorpusBody({}, d={})", self.id, self.dim())
    }
}

/// Named corpus sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corpus {
    /// Ball, cube, simplex and cross-polytope in `d = 2, 3`.
    Basic,
    /// `Basic` plus 10 random hull polytopes per dimension.
    Default,
    /// `Basic` plus 100 random hull polytopes per dimension.
    Extended,
}

impl FromStr for Corpus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(Self::Basic),
            "default" => Ok(Self::Default),
            "extended" => Ok(Self::Extended),
            _ => Err(Error::Invalid(format!("unknown corpus {s:?}; expected basic, default or extended"))),
        }
    }
}

impl Corpus {
    pub fn random_per_dim(self) -> usize {
        match self {
            Self::Basic => 0,
            Self::Default => 10,
            Self::Extended => 100,
        }
    }

    pub fn bodies(self, seed: u64) -> Result<Vec<CorpusBody>> {
        let mut out = Vec::new();
        for d in [2, 3] {
            out.extend(standard_bodies(d)?);
        }
        for d in [2, 3] {
            out.extend(random_polytopes(d, self.random_per_dim(), seed)?);
        }
        Ok(out)
    }
}

pub fn cross_polytope(d: usize) -> Result<Polytope> {
    let pts: Vec<Point> = (0..d).flat_map(|k| [basis(d, k), -basis(d, k)]).collect();
    Polytope::from_points(&pts)
}

/// Ball, unit cube `[0,1]^d`, standard simplex and cross-polytope.
pub fn standard_bodies(d: usize) -> Result<Vec<CorpusBody>> {
    Ok(vec![
        CorpusBody::new(format!("ball{d}"), Arc::new(Ball::unit(d))),
        CorpusBody::new(
            format!("cube{d}"),
            Arc::new(Polytope::from_hpolytope(&HPolytope::cube(d, 0.0, 1.0))?),
        ),
        CorpusBody::new(
            format!("simplex{d}"),
            Arc::new(Polytope::from_hpolytope(&HPolytope::standard_simplex(d))?),
        ),
        CorpusBody::new(format!("cross{d}"), Arc::new(cross_polytope(d)?)),
    ])
}

/// Hull of 10 to 40 uniform points of the unit ball; degenerate draws are redrawn.
pub fn random_polytope(d: usize, seed: u64, index: u64) -> Result<Polytope> {
    let mut last = Error::Degenerate("no attempt".into());
    for attempt in 0..16u64 {
        let mut rng = rng_for(seed, stream::CORPUS, (index << 8) | attempt);
        let m = rng.random_range(10..=40);
        let c = Point::zeros(d);
        let mut y = c.clone();
        let pts: Vec<Point> = (0..m)
            .map(|_| {
                uniform_in_ball(&mut rng, &c, 1.0, &mut y);
                y.clone()
            })
            .collect();
        match Polytope::from_points(&pts) {
            Ok(p) if p.volume() > 1e-6 => return Ok(p),
            Ok(_) => last = Error::Degenerate("near-flat hull".into()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

pub fn random_polytopes(d: usize, count: usize, seed: u64) -> Result<Vec<CorpusBody>> {
    (0..count)
        .map(|i| {
            let p = random_polytope(d, seed ^ ((d as u64) << 32), i as u64)?;
            Ok(CorpusBody::new(format!("random{d}_{i}"), Arc::new(p)))
        })
        .collect()
}
