//! Polytope files and body loading.
//!
//! - OFF (`d = 3`): vertices and facets as vertex cycles oriented by the outer normal.
//! - Vertex CSV: header `x0,x1,...`, one vertex per row.
//! - Halfspace CSV: header `a0,a1,...,b`, one constraint `⟨a, x⟩ ≤ b` per row.
//!
//! Coordinates are written in shortest round-trip form, so reading a file back
//! reproduces the vertex list bit for bit.

use crate::body::{BodyRef, BodySpec, HPolytope, Halfspace, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{complement_basis, Point};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

/// Facet vertex indices of a 3-polytope in counterclockwise order seen from outside.
pub fn facet_cycles(p: &Polytope) -> Result<Vec<Vec<usize>>> {
    if p.dim() != 3 {
        return Err(Error::DimensionUnsupported(p.dim()));
    }
    let verts = p.vertices();
    Ok(p.facets()
        .iter()
        .map(|f| {
            let c = f.vertices.iter().map(|&i| &verts[i]).sum::<Point>() / f.vertices.len() as f64;
            let b = complement_basis(&f.normal);
            let (e1, e2) = (b.column(0).into_owned(), b.column(1).into_owned());
            // orient (e1, e2, normal) positively
            let flip = e1.cross(&e2).dot(&f.normal) < 0.0;
            let mut idx = f.vertices.clone();
            let angle = |i: usize| {
                let v = &verts[i] - &c;
                let a = v.dot(&e2).atan2(v.dot(&e1));
                if flip {
                    -a
                } else {
                    a
                }
            };
            idx.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).unwrap().then(a.cmp(&b)));
            idx
        })
        .collect())
}

pub fn write_off<W: Write>(mut out: W, p: &Polytope) -> Result<()> {
    let cycles = facet_cycles(p)?;
    let mut s = format!("OFF\n{} {} 0\n", p.vertices().len(), cycles.len());
    for v in p.vertices() {
        let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    for c in &cycles {
        let row: Vec<String> = c.iter().map(|i| i.to_string()).collect();
        writeln!(s, "{} {}", c.len(), row.join(" ")).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Reads the vertex block of an OFF file; faces are recomputed from the hull.
pub fn read_off<R: Read>(input: R) -> Result<Polytope> {
    let lines: Vec<String> = BufReader::new(input)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    let bad = |m: &str| Error::Invalid(format!("malformed OFF: {m}"));
    let mut it = lines.iter();
    let head = it.next().ok_or_else(|| bad("empty file"))?;
    let counts_line = if head == "OFF" {
        it.next().ok_or_else(|| bad("missing counts"))?.clone()
    } else if let Some(rest) = head.strip_prefix("OFF") {
        rest.trim().to_string()
    } else {
        return Err(bad("missing OFF header"));
    };
    let nv: usize = counts_line
        .split_whitespace()
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("vertex count"))?;
    let mut pts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let row = it.next().ok_or_else(|| bad("too few vertex rows"))?;
        let coords = row
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|_| bad(row)))
            .collect::<Result<Vec<f64>>>()?;
        if coords.len() != 3 {
            return Err(bad(row));
        }
        pts.push(Point::from_vec(coords));
    }
    Polytope::from_points(&pts)
}

pub fn write_vertices_csv<W: Write>(out: W, points: &[Point]) -> Result<()> {
    let d = points.first().map_or(0, |p| p.len());
    let mut w = csv::Writer::from_writer(out);
    w.write_record((0..d).map(|i| format!("x{i}")))?;
    for p in points {
        w.write_record(p.iter().map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_halfspaces_csv<W: Write>(out: W, h: &HPolytope) -> Result<()> {
    let d = h.dim();
    let mut w = csv::Writer::from_writer(out);
    w.write_record((0..d).map(|i| format!("a{i}")).chain(["b".to_string()]))?;
    for hs in h.halfspaces() {
        w.write_record(hs.normal.iter().chain([&hs.offset]).map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Contents of a vertex or halfspace CSV, told apart by the header.
pub enum CsvPolytope {
    Vertices(Vec<Point>),
    Halfspaces(HPolytope),
}

pub fn read_csv<R: Read>(input: R) -> Result<CsvPolytope> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| {
            let rec = rec?;
            rec.iter()
                .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("not a number: {s:?}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if header.last().map(String::as_str) == Some("b") {
        let d = header.len() - 1;
        let hs = rows
            .iter()
            .map(|r| Halfspace::new(Point::from_column_slice(&r[..d]), r[d]))
            .collect::<Result<_>>()?;
        Ok(CsvPolytope::Halfspaces(HPolytope::new(hs)?))
    } else if header.iter().enumerate().all(|(i, h)| *h == format!("x{i}")) {
        Ok(CsvPolytope::Vertices(rows.into_iter().map(Point::from_vec).collect()))
    } else {
        Err(Error::Invalid(format!("unrecognized CSV header {header:?}")))
    }
}

/// Loads a body from `.json` (body spec), `.off` or `.csv`.
pub fn load_body(path: &Path) -> Result<BodyRef> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    match ext.as_str() {
        "json" => BodySpec::load(path)?.build(),
        "off" => Ok(Arc::new(read_off(std::fs::File::open(path)?)?)),
        "csv" => Ok(match read_csv(std::fs::File::open(path)?)? {
            CsvPolytope::Vertices(v) => Arc::new(Polytope::from_points(&v)?),
            CsvPolytope::Halfspaces(h) => Arc::new(Polytope::from_hpolytope(&h)?),
        }),
        _ => Err(Error::Invalid(format!(
            "unknown body file extension {:?}",
            path.display().to_string()
        ))),
    }
}

/// Writes `p` as OFF when `d = 3`, else as a vertex CSV; returns the file name used.
pub fn write_polytope(dir: &Path, stem: &str, p: &Polytope) -> Result<String> {
    let name = if p.dim() == 3 {
        format!("{stem}.off")
    } else {
        format!("{stem}.csv")
    };
    let f = std::io::BufWriter::new(std::fs::File::create(dir.join(&name))?);
    if p.dim() == 3 {
        write_off(f, p)?;
    } else {
        write_vertices_csv(f, p.vertices())?;
    }
    Ok(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::ConvexBody;
    use crate::verify::corpus::cross_polytope;

    #[test]
    fn off_round_trip() {
        let p = cross_polytope(3).unwrap();
        let mut buf = Vec::new();
        write_off(&mut buf, &p).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("OFF\n6 8 0\n"));
        let q = read_off(&buf[..]).unwrap();
        assert_eq!(q.vertices(), p.vertices());
        // every cycle is counterclockwise about its outer normal
        for (cyc, f) in facet_cycles(&p).unwrap().iter().zip(p.facets()) {
            let v: Vec<&Point> = cyc.iter().map(|&i| &p.vertices()[i]).collect();
            assert!((v[1] - v[0]).cross(&(v[2] - v[1])).dot(&f.normal) > 0.0);
        }
    }

    #[test]
    fn csv_round_trips() {
        let p = Polytope::from_hpolytope(&HPolytope::cube(2, -1.0, 0.5)).unwrap();
        let mut buf = Vec::new();
        write_vertices_csv(&mut buf, p.vertices()).unwrap();
        match read_csv(&buf[..]).unwrap() {
            CsvPolytope::Vertices(v) => assert_eq!(v, p.vertices()),
            _ => panic!("expected vertices"),
        }
        let mut buf = Vec::new();
        write_halfspaces_csv(&mut buf, &p.to_hpolytope()).unwrap();
        match read_csv(&buf[..]).unwrap() {
            CsvPolytope::Halfspaces(h) => {
                let q = Polytope::from_hpolytope(&h).unwrap();
                assert!((q.volume() - p.volume()).abs() < 1e-12);
                assert!(q.contains(&Point::zeros(2)));
            }
            _ => panic!("expected halfspaces"),
        }
        assert!(read_csv("p,q\n1,2\n".as_bytes()).is_err());
        assert!(read_off("NOFF\n".as_bytes()).is_err());
    }
}
